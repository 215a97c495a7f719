"""Even-rank complements: making multicomplex ranks even with diagonal padding.

The guiding instance is the inclusion of even-rank free modules into all free
modules over a fixed ring (the integers by default).  The subcategory is
closed under direct sums and extensions, and every free module is a summand
of an even-rank one (add at most one rank), so it is cofinal.  The
obstruction to membership is the rank-parity grid, computed by rel_class.

The central construction is complement(N, i): for a valid multicomplex N
with free objects it produces a multicomplex T, diagonal in direction i,
such that every rank of N (+) T is even.  When N is itself diagonal in some
other direction j, T comes out diagonal in both i and j.  The recursion
peels one axis off N, complements the image multicomplexes of the peeled
differential, and reassembles the pieces into a two-layer shift complex
whose differential is the identity block [[0,1],[0,0]] in both families.

diagonal_represent turns a certified sum of diagonal classes into one single
diagonal class, emitting a relation chain (kgroups module) that proves the
equality and is re-checked before being returned.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (CertificateError, MembershipRefusal, NotAcyclic,
                     NotDiagonal, ShapeError)
from .extension import split_extension
from .fpmod import FpModule
from .kgroups import (DiagonalStep, FormalClass, RelationChain, SesStep,
                      tn_membership_certificate, verify_chain)
from .multicomplex import (BinaryMulticomplex, BinaryTower,
                           block_identity_morphism, collapse_along,
                           common_shape, direct_sum_multi, expand_along,
                           image_multicomplex, pad_to, rediagonalize,
                           validate)
from .rings import ZZ, Ring


class CofinalInstance:
    """Even-rank free modules inside all free modules over one ring.

    The subcategory predicate (every rank even) is closed under direct sums
    and extensions, and each ambient object reaches it after adding at most
    one rank, so the inclusion is cofinal without being dense: the parity of
    the rank survives as an obstruction.
    """

    __slots__ = ("ring",)

    def __init__(self, ring: Ring = ZZ):
        self.ring = ring

    def module_in_ambient(self, mod: FpModule) -> bool:
        return mod.ring == self.ring and mod.is_free_presentation()

    def module_in_sub(self, mod: FpModule) -> bool:
        return self.module_in_ambient(mod) and mod.gens % 2 == 0

    def module_complement(self, mod: FpModule) -> FpModule:
        """The smallest free module whose sum with mod has even rank."""
        if not self.module_in_ambient(mod):
            raise MembershipRefusal("module complement needs a free module over the instance ring")
        return FpModule.free(self.ring, mod.gens % 2)

    def in_ambient(self, M: BinaryMulticomplex) -> bool:
        return M.ring == self.ring and all(m.is_free_presentation()
                                           for m in M.objects.values())

    def in_sub(self, M: BinaryMulticomplex) -> bool:
        return self.in_ambient(M) and all(m.gens % 2 == 0 for m in M.objects.values())


DEFAULT_INSTANCE = CofinalInstance(ZZ)


@dataclass(frozen=True)
class RelClass:
    """The rank-parity grid of a multicomplex: its class relative to the
    even-rank subcategory.  Addition matches direct sums (ranks add, so
    parities add coordinatewise) and the class vanishes exactly on the
    subcategory."""

    dim: int
    odd_coords: frozenset

    def __add__(self, other: "RelClass") -> "RelClass":
        if other.dim != self.dim:
            raise ShapeError("relative classes of different dimensions cannot be added")
        return RelClass(self.dim, self.odd_coords ^ other.odd_coords)

    def is_zero(self) -> bool:
        return not self.odd_coords


def _require_free_objects(N: BinaryMulticomplex, what: str):
    for c in sorted(N.objects):
        if not N.objects[c].is_free_presentation():
            raise MembershipRefusal(f"{what} needs free objects; the object at {c} is not "
                                    "presented freely")


def rel_class(N: BinaryMulticomplex) -> RelClass:
    """The parity grid of N's ranks, one bit per support coordinate."""
    _require_free_objects(N, "rel_class")
    return RelClass(N.dim, frozenset(c for c, m in N.objects.items() if m.gens % 2 == 1))


# -- the complement construction -----------------------------------------


def _shift_complex(pieces, axis: int, ring: Ring, dim: int) -> BinaryMulticomplex:
    """Assemble layer m = pieces[m] (+) pieces[m-1] along a new axis.

    The axis differential sends the second summand of layer m identically
    onto the first summand of layer m-1 and kills the rest; it is used for
    both families, so the result is diagonal in the new axis, its square is
    zero blockwise, and every axis line is exact.  A final layer holding
    only pieces[-1] in its second slot closes the complex at the top.
    """
    if not pieces:
        return BinaryMulticomplex.zero(ring, dim)
    rest_shape = common_shape(pieces)
    padded = [pad_to(p, rest_shape) for p in pieces]
    blank = pad_to(BinaryMulticomplex.zero(ring, dim - 1), rest_shape)
    K = len(padded)

    def piece(m):
        return padded[m] if 0 <= m < K else blank

    layers = list(range(K + 1))
    terms = [direct_sum_multi([piece(m), piece(m - 1)]) for m in layers]
    diffs = []
    for m in range(1, K + 1):
        src_atoms = [(("head", m), piece(m)), (("tail", m - 1), piece(m - 1))]
        tgt_atoms = [(("head", m - 1), piece(m - 1)), (("tail", m - 2), piece(m - 2))]
        routed = {(("head", m - 1), ("tail", m - 1))}
        diffs.append(block_identity_morphism(src_atoms, tgt_atoms, routed,
                                             terms[m], terms[m - 1]))
    tower = BinaryTower(tuple(terms), tuple(diffs), tuple(diffs))
    return collapse_along(tower, axis)


def _layer_images(tower) -> list:
    """Image multicomplexes C_k of the tower differentials d_{k+1}: the
    kernels-equal-images of an exact layering, one per interior slot."""
    return [image_multicomplex(d)[0] for d in tower.tops]


def _complement(N: BinaryMulticomplex, i: int) -> BinaryMulticomplex:
    if any(s == 0 for s in N.shape):
        return BinaryMulticomplex.zero(N.ring, N.dim)
    other_diagonals = sorted(N.diagonal_directions() - {i})
    if other_diagonals:
        # peel a diagonal axis j: the two differential families agree there,
        # so one image family describes both, and the recursive complements
        # can carry direction i down to the slices
        j = other_diagonals[0]
        tower = expand_along(N, j)
        images = _layer_images(tower)
        i_rest = i if i < j else i - 1
        pieces = [complement(C, i_rest) for C in images]
        return _shift_complex(pieces, j, N.ring, N.dim)
    # general branch: peel axis i itself; the two families give two image
    # multicomplexes with identical rank grids (each rank is the same
    # alternating sum of the line's ranks), so one complement serves both
    tower = expand_along(N, i)
    images_top = _layer_images(tower)
    images_bot = [image_multicomplex(d)[0] for d in tower.bots]
    pieces = [pair_complement(C, Cb)
              for C, Cb in zip(images_top, images_bot)]
    return _shift_complex(pieces, i, N.ring, N.dim)


def complement(N: BinaryMulticomplex, i: int, check: bool = True) -> BinaryMulticomplex:
    """T diagonal in direction i such that every rank of N (+) T is even.

    N must be valid with free objects.  If N is diagonal in some direction
    j != i, the output is diagonal in both i and j.  If N already has all
    ranks even, the output is a zero multicomplex.  With check=True (the
    default) the claims are re-verified on every call and a failure raises;
    the recursion always verifies its own output.
    """
    if N.dim == 0:
        raise ShapeError("a zero-dimensional multicomplex has no directions to complement")
    if not 0 <= i < N.dim:
        raise ShapeError(f"direction {i} out of range for dimension {N.dim}")
    _require_free_objects(N, "complement")
    if check:
        report = validate(N, "free")
        if not report.ok:
            f = report.first()
            raise NotAcyclic(f"complement needs a valid multicomplex ({f.kind}, "
                             f"{f.family} family, axis {f.axis}, {f.coord})")
    T = _complement(N, i)
    _check_complement(N, i, T)
    return T


def _check_complement(N: BinaryMulticomplex, i: int, T: BinaryMulticomplex):
    """Re-verify every promise the construction makes; raise on any failure."""
    report = validate(T, "free")
    if not report.ok:
        f = report.first()
        raise NotAcyclic(f"constructed complement is invalid ({f.kind} at {f.coord})")
    if not T.is_diagonal_in(i):
        raise NotDiagonal(f"constructed complement is not diagonal in direction {i}")
    for j in N.diagonal_directions() - {i}:
        if not T.is_diagonal_in(j):
            raise NotDiagonal(f"constructed complement lost the diagonal direction {j}")
    both = direct_sum_multi([N, T])
    for c in sorted(both.objects):
        if both.objects[c].gens % 2 != 0:
            raise MembershipRefusal(f"complement left an odd rank at {c}")


def pair_complement(N1: BinaryMulticomplex, N2: BinaryMulticomplex) -> BinaryMulticomplex:
    """One multicomplex whose sum with either input has all ranks even.

    Refuses inputs with different relative classes: evenness of both sums
    forces equal parity grids.  When the grids do agree, a complement of the
    first input alone already works for the second, so no correction terms
    are needed.
    """
    c1, c2 = rel_class(N1), rel_class(N2)
    if c1 != c2:
        raise MembershipRefusal("pair complement needs equal relative classes")
    if N1.dim == 0:
        return BinaryMulticomplex.of_module(
            FpModule.free(N1.ring, N1.objects[()].gens % 2))
    return complement(N1, 0)


# -- the retraction and diagonal representation --------------------------


def delta_top_retract(M: BinaryMulticomplex, i: int) -> BinaryMulticomplex:
    """Replace the direction-i bottom differential by the top one.

    The result is always diagonal in direction i, the operation is
    idempotent, and inputs already diagonal in i are returned unchanged
    (for free objects, literally the same matrices).
    """
    return rediagonalize(M, i)


def diagonal_represent(x: FormalClass, witnesses, i: int = None, ring: Ring = ZZ):
    """(t, chain): one diagonal multicomplex representing a certified class.

    x must be certified by tn_membership_certificate(x, witnesses); i is the
    direction t should be diagonal in (default: the first witnessed
    direction).  The emitted RelationChain rewrites x into [t] and is
    re-checked with verify_chain before being returned.

    Generators witnessed in a direction j != i are first traded for the
    negative of their complement (diagonal in i and j, so the sum with the
    generator is diagonal in j and its class vanishes); the surviving terms
    are folded into one positive and one negative part, and the negative
    part is cancelled against its own complement.  The ring argument only
    matters for the empty class.
    """
    cert = tn_membership_certificate(x, witnesses)
    if not cert.ok:
        raise CertificateError(f"class is not certified diagonal: {cert.reason}")
    dim = x.dim
    if i is None:
        i = cert.assignments[0][2] if cert.assignments else 0
    if not 0 <= i < dim:
        raise ShapeError(f"direction {i} out of range for dimension {dim}")
    if x.ring is not None:
        ring = x.ring

    steps = []
    positives, negatives = [], []
    for M, coeff, axis in cert.assignments:
        sign = 1 if coeff > 0 else -1
        for _ in range(abs(coeff)):
            if axis == i:
                (positives if sign > 0 else negatives).append(M)
                continue
            # [M] = [M (+) s] - [s] and M (+) s is diagonal in axis, so the
            # term flips sign and its replacement s is diagonal in i
            s = complement(M, i)
            ext = split_extension(M, s)
            steps.append(SesStep(ext, -sign))
            steps.append(DiagonalStep(ext.total, axis, -sign))
            (negatives if sign > 0 else positives).append(s)

    def fold(parts, sign):
        acc = parts[0]
        for nxt in parts[1:]:
            ext = split_extension(acc, nxt)
            steps.append(SesStep(ext, sign))
            acc = ext.total
        return acc

    if positives and negatives:
        u1 = fold(positives, -1)
        u2 = fold(negatives, 1)
        u2c = complement(u2, i)
        ext = split_extension(u2, u2c)
        steps.append(SesStep(ext, 1))
        steps.append(DiagonalStep(ext.total, i, 1))
        final = split_extension(u1, u2c)
        steps.append(SesStep(final, -1))
        t = final.total
    elif positives:
        t = fold(positives, -1)
    elif negatives:
        u2 = fold(negatives, 1)
        u2c = complement(u2, i)
        ext = split_extension(u2, u2c)
        steps.append(SesStep(ext, 1))
        steps.append(DiagonalStep(ext.total, i, 1))
        t = u2c
    else:
        t = BinaryMulticomplex.zero(ring, dim)
        steps.append(DiagonalStep(t, i, 1))

    chain = RelationChain(x, steps, FormalClass.of(t))
    report = verify_chain(chain)
    if not report.ok:
        raise CertificateError(f"emitted chain failed its own re-check at step "
                               f"{report.step}: {report.reason}")
    if not t.is_diagonal_in(i):
        raise NotDiagonal(f"representative is not diagonal in direction {i}")
    return t, chain
