"""Bounded chain complexes of finitely presented modules.

Degrees run 0..length-1 and differentials lower degree by one.  The central
primitive is the acyclicity witness: a factorization of every differential as
epi then mono through cycle objects, with each induced short sequence verified
exact.  Witness extraction succeeds exactly when all homology vanishes, and a
failure reports the lowest bad degree together with its homology class.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import RingError, ShapeError
from .fpmod import (FpModule, FpMorphism, analyze, check_ses, cokernel,
                    factor_through_mono, image, is_epi, is_mono, kernel)
from .matrix import Matrix, column_space_basis, rank_over_fractions, smith, solve
from .rings import Ring, ZZ


class ChainComplex:
    """objects[k] in degree k; diffs[k] : objects[k+1] -> objects[k]."""

    __slots__ = ("ring", "objects", "diffs")

    def __init__(self, ring: Ring, objects, diffs, check=True):
        objects = tuple(objects)
        diffs = tuple(diffs)
        if objects and len(diffs) != len(objects) - 1:
            raise ShapeError("need one differential per adjacent pair of degrees")
        if not objects and diffs:
            raise ShapeError("differentials without objects")
        for k, d in enumerate(diffs):
            if d.source != objects[k + 1] or d.target != objects[k]:
                raise ShapeError(f"differential {k} has wrong endpoints")
        self.ring = ring
        self.objects = objects
        self.diffs = diffs
        if check:
            for k in range(len(diffs) - 1):
                if not (diffs[k] @ diffs[k + 1]).is_zero():
                    raise ShapeError(f"d_{k + 1} after d_{k + 2} is not zero")

    @property
    def length(self) -> int:
        return len(self.objects)

    def __eq__(self, other):
        return (isinstance(other, ChainComplex) and other.ring == self.ring
                and other.objects == self.objects
                and tuple(d.mat for d in other.diffs) == tuple(d.mat for d in self.diffs))

    def __repr__(self):
        return f"ChainComplex({self.ring.kind}, gens={[m.gens for m in self.objects]})"

    def is_free(self) -> bool:
        return all(m.is_free_presentation() for m in self.objects)

    @staticmethod
    def empty(ring: Ring) -> "ChainComplex":
        return ChainComplex(ring, (), ())


def homology(C: ChainComplex, k: int) -> FpModule:
    """H_k as a presented module.  Degrees outside the support give zero."""
    if k < 0 or k >= C.length:
        return FpModule.zero(C.ring)
    if k == C.length - 1:
        if k == 0:
            return C.objects[0]
        K, incl = kernel(C.diffs[k - 1])
        return K
    K, incl = (kernel(C.diffs[k - 1]) if k > 0
               else (C.objects[0], FpMorphism.identity(C.objects[0])))
    lifted = factor_through_mono(incl, C.diffs[k])
    if lifted is None:
        raise RingError("differential does not land in the kernel; complex is broken")
    H, _ = cokernel(lifted)
    return H


def homology_by_ranks(C: ChainComplex, k: int):
    """(betti, torsion) for complexes of free modules, by an independent route.

    Betti numbers come from Gaussian elimination over the fraction field
    (n_k - rank d_k - rank d_{k+1}); torsion is read off the non-unit invariant
    factors of the incoming differential's matrix.  Shares nothing with the
    kernel/cokernel machinery above except the raw matrix type.
    """
    if not C.is_free():
        raise RingError("rank-based homology needs free objects")
    if k < 0 or k >= C.length:
        return 0, ()
    n_k = C.objects[k].gens
    r_out = rank_over_fractions(C.diffs[k - 1].mat) if k > 0 else 0
    r_in = rank_over_fractions(C.diffs[k].mat) if k < C.length - 1 else 0
    betti = n_k - r_out - r_in
    torsion = ()
    if k < C.length - 1:
        ring = C.ring
        tors = []
        dec = smith(C.diffs[k].mat)
        for d in dec.diagonal():
            if not ring.is_zero(d) and not ring.is_unit(d):
                tors.append(d)
        torsion = tuple(tors)
    return betti, torsion


@dataclass(frozen=True)
class AcyclicityWitness:
    """Factorizations d_k = mono_k after epi_k through cycle objects.

    cycles[j] is Z_{j-1} for j in 0..length, so cycles[0] and cycles[-1] are
    zero; epis[k] : N_k ->> Z_{k-1} and monos[k] : Z_k >-> N_k give the short
    exact sequences Z_k >-> N_k ->> Z_{k-1} at every degree.
    """

    complex: ChainComplex
    cycles: tuple
    epis: tuple
    monos: tuple
    mode: str

    def verify(self) -> bool:
        C = self.complex
        L = C.length
        if len(self.cycles) != L + 1 or len(self.epis) != L or len(self.monos) != L:
            return False
        if not self.cycles[0].is_zero_module() or not self.cycles[L].is_zero_module():
            return False
        if self.mode == "free" and not all(z.is_free_presentation() for z in self.cycles):
            return False
        for k in range(L):
            epi, mono = self.epis[k], self.monos[k]
            if epi.source != C.objects[k] or epi.target != self.cycles[k]:
                return False
            if mono.source != self.cycles[k + 1] or mono.target != C.objects[k]:
                return False
            if k + 1 < L:
                # mono_k after epi_{k+1} must recover d_{k+1}
                if not (mono @ self.epis[k + 1]).equals(C.diffs[k]):
                    return False
            if not check_ses(mono, epi).ok:
                return False
        return True


@dataclass(frozen=True)
class WitnessOutcome:
    ok: bool
    witness: Optional[AcyclicityWitness] = None
    failing_degree: Optional[int] = None
    obstruction: Optional[FpModule] = None

    def describe(self) -> str:
        if self.ok:
            return "acyclic"
        free, tors = self.obstruction.canonical()
        return f"homology at degree {self.failing_degree}: free rank {free}, torsion {list(tors)}"


def _factor_differential(d: FpMorphism, mode: str):
    """(Z, epi, mono) with mono @ epi == d; Z free in free mode."""
    if mode == "free":
        basis = column_space_basis(d.mat)
        Z = FpModule.free(d.source.ring, basis.cols)
        mono = FpMorphism(Z, d.target, basis, _trusted=True)
        coords = solve(basis, d.mat)
        if coords is None:
            raise RingError("image basis does not span the differential's image")
        epi = FpMorphism(d.source, Z, coords, _trusted=True)
        return Z, epi, mono
    Z, incl, coproj = image(d)
    return Z, coproj, incl


def acyclicity_witness(C: ChainComplex, mode: str = "fp") -> WitnessOutcome:
    """Factor every differential epi-mono and verify the resulting short sequences.

    mode="free" demands free objects and produces free cycle modules with
    lattice-basis inclusions; mode="fp" works for arbitrary presentations.
    """
    if mode not in ("fp", "free"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "free" and not C.is_free():
        raise RingError("free mode requires free objects")
    L = C.length
    zero = FpModule.zero(C.ring)
    if L == 0:
        return WitnessOutcome(True, AcyclicityWitness(C, (zero,), (), (), mode))
    cycles = [zero] * (L + 1)
    epis: list = [None] * L
    monos: list = [None] * L
    for k in range(1, L):
        Z, epi, mono = _factor_differential(C.diffs[k - 1], mode)
        cycles[k] = Z
        epis[k] = epi
        monos[k - 1] = mono
    epis[0] = FpMorphism.zero(C.objects[0], zero)
    monos[L - 1] = FpMorphism.zero(zero, C.objects[L - 1])
    for k in range(L):
        mono_into_k = monos[k]
        epi_from_k = epis[k]
        if not check_ses(mono_into_k, epi_from_k).ok:
            return WitnessOutcome(False, None, k, homology(C, k))
    return WitnessOutcome(True, AcyclicityWitness(C, tuple(cycles), tuple(epis), tuple(monos), mode))


def is_acyclic(C: ChainComplex, mode: str = "fp") -> bool:
    return acyclicity_witness(C, mode).ok


class ChainMap:
    """Degreewise morphism of equal-length complexes, verified to commute."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: ChainComplex, target: ChainComplex, components, check=True):
        components = tuple(components)
        if len(components) != source.length or source.length != target.length:
            raise ShapeError("chain map needs one component per degree of equal-length complexes")
        for k, f in enumerate(components):
            if f.source != source.objects[k] or f.target != target.objects[k]:
                raise ShapeError(f"component {k} has wrong endpoints")
        if check:
            for k in range(source.length - 1):
                lhs = target.diffs[k] @ components[k + 1]
                rhs = components[k] @ source.diffs[k]
                if not lhs.equals(rhs):
                    raise ShapeError(f"square at degrees {k + 1}->{k} does not commute")
        self.source = source
        self.target = target
        self.components = components


@dataclass(frozen=True)
class ChainSesVerdict:
    ok: bool
    failing_degree: Optional[int] = None
    reason: str = ""


def check_complex_ses(i: ChainMap, p: ChainMap) -> ChainSesVerdict:
    """Degreewise short exactness of N' -> N -> N''."""
    if i.target is not p.source and i.target != p.source:
        return ChainSesVerdict(False, None, "middle complexes differ")
    for k in range(i.source.length):
        verdict = check_ses(i.components[k], p.components[k])
        if not verdict.ok:
            return ChainSesVerdict(False, k, verdict.reason)
    return ChainSesVerdict(True)


@dataclass(frozen=True)
class AdmissibleEpiReport:
    degreewise_epi: bool
    first_non_epi_degree: Optional[int]
    kernel_complex: Optional[ChainComplex]
    kernel_acyclic: Optional[bool]
    admissible: bool


def kernel_complex(phi: ChainMap):
    """(K, inclusions) where K_k = ker(phi_k) with induced differentials."""
    pieces = [kernel(f) for f in phi.components]
    mods = [K for K, _ in pieces]
    incls = [i for _, i in pieces]
    diffs = []
    for k in range(phi.source.length - 1):
        lifted = factor_through_mono(incls[k], phi.source.diffs[k] @ incls[k + 1])
        if lifted is None:
            raise RingError("differential does not preserve kernels; chain map is broken")
        diffs.append(lifted)
    K = ChainComplex(phi.source.ring, mods, diffs)
    return K, incls


def admissible_epi_check(phi: ChainMap, mode: str = "fp") -> AdmissibleEpiReport:
    """Degreewise epi with acyclic kernel complex."""
    for k, f in enumerate(phi.components):
        if not is_epi(f):
            return AdmissibleEpiReport(False, k, None, None, False)
    K, _ = kernel_complex(phi)
    kernel_mode = mode if mode == "fp" or K.is_free() else "fp"
    outcome = acyclicity_witness(K, kernel_mode)
    return AdmissibleEpiReport(True, None, K, outcome.ok, outcome.ok)
