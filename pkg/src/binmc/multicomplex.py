"""Bounded binary multicomplexes and their morphisms.

A binary multicomplex of dimension n is a box-supported family of finitely
presented modules with two commuting differentials per axis (the top and
bottom family).  Validity means: every line in every axis is a complex for
both families, every such line is acyclic, and all cross-axis squares commute
within and across families.  A direction is diagonal when the two families
agree there.

Coordinates are tuples of length dim; shape is the box extent per axis; a
differential at (axis, coord) maps obj(coord) -> obj(coord - e_axis) and is
present exactly when coord[axis] >= 1.  Dimension 0 is allowed (one module,
no differentials) so constructions can recurse uniformly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .complexes import ChainComplex, acyclicity_witness
from .errors import NotAcyclic, ShapeError
from .fpmod import (FpModule, FpMorphism, direct_sum_modules,
                    factor_through_mono, image, split_inclusion,
                    split_projection)
from .matrix import Matrix, block_diag, column_space_basis, hstack, solve, vstack
from .rings import Ring


def box_coords(shape):
    return itertools.product(*(range(s) for s in shape))


def _minus(coord, axis):
    return coord[:axis] + (coord[axis] - 1,) + coord[axis + 1:]


def _insert(rest, axis, t):
    return rest[:axis] + (t,) + rest[axis:]


def _drop(coord, axis):
    return coord[:axis] + coord[axis + 1:]


class BinaryMulticomplex:
    __slots__ = ("ring", "dim", "shape", "objects", "tops", "bots")

    def __init__(self, ring: Ring, dim: int, shape, objects, tops, bots):
        shape = tuple(shape)
        if len(shape) != dim:
            raise ShapeError("shape length must equal dimension")
        self.ring = ring
        self.dim = dim
        self.shape = shape
        self.objects = dict(objects)
        self.tops = dict(tops)
        self.bots = dict(bots)
        coords = set(box_coords(shape))
        if set(self.objects) != coords:
            raise ShapeError("object table must cover the support box exactly")
        expected = {(a, c) for c in coords for a in range(dim) if c[a] >= 1}
        for fam_name, fam in (("top", self.tops), ("bottom", self.bots)):
            if set(fam) != expected:
                raise ShapeError(f"{fam_name} differentials must cover interior coordinates exactly")
            for (a, c), f in fam.items():
                if f.source != self.objects[c] or f.target != self.objects[_minus(c, a)]:
                    raise ShapeError(f"{fam_name} differential at axis {a}, {c} has wrong endpoints")

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(ring: Ring, dim: int) -> "BinaryMulticomplex":
        if dim == 0:
            return BinaryMulticomplex.of_module(FpModule.zero(ring))
        return BinaryMulticomplex(ring, dim, (0,) * dim, {}, {}, {})

    @staticmethod
    def of_module(mod: FpModule) -> "BinaryMulticomplex":
        return BinaryMulticomplex(mod.ring, 0, (), {(): mod}, {}, {})

    @staticmethod
    def from_binary_chain(ring: Ring, modules, top_maps, bot_maps) -> "BinaryMulticomplex":
        """Dimension-1 multicomplex from degree-indexed modules and map lists."""
        modules = list(modules)
        L = len(modules)
        objects = {(k,): m for k, m in enumerate(modules)}
        tops = {(0, (k,)): f for k, f in zip(range(1, L), top_maps)}
        bots = {(0, (k,)): f for k, f in zip(range(1, L), bot_maps)}
        return BinaryMulticomplex(ring, 1, (L,), objects, tops, bots)

    # -- accessors ------------------------------------------------------
    def obj(self, coord) -> FpModule:
        return self.objects[tuple(coord)]

    def family(self, which: str) -> dict:
        return self.tops if which == "top" else self.bots

    def is_zero(self) -> bool:
        return all(m.is_zero_module() for m in self.objects.values())

    def __eq__(self, other):
        return (isinstance(other, BinaryMulticomplex) and other.ring == self.ring
                and other.dim == self.dim and other.shape == self.shape
                and other.objects == self.objects
                and {k: f.mat for k, f in other.tops.items()} == {k: f.mat for k, f in self.tops.items()}
                and {k: f.mat for k, f in other.bots.items()} == {k: f.mat for k, f in self.bots.items()})

    def __repr__(self):
        total = sum(m.gens for m in self.objects.values())
        return f"BinaryMulticomplex(dim={self.dim}, shape={self.shape}, gens={total})"

    def rank_grid(self) -> dict:
        return {c: m.free_rank() for c, m in self.objects.items()}

    # -- normalization ---------------------------------------------------
    def normalize(self) -> "BinaryMulticomplex":
        """Translate the tight support to start at 0 along each axis."""
        if self.dim == 0:
            return self
        support = [c for c, m in self.objects.items() if not m.is_zero_module()]
        if not support:
            return BinaryMulticomplex.zero(self.ring, self.dim)
        lo = tuple(min(c[a] for c in support) for a in range(self.dim))
        hi = tuple(max(c[a] for c in support) for a in range(self.dim))
        shape = tuple(h - l + 1 for l, h in zip(lo, hi))
        if lo == (0,) * self.dim and shape == self.shape:
            return self
        objects = {}
        for c in box_coords(shape):
            objects[c] = self.objects[tuple(x + l for x, l in zip(c, lo))]
        tops, bots = {}, {}
        for a in range(self.dim):
            for c in box_coords(shape):
                if c[a] >= 1:
                    old = tuple(x + l for x, l in zip(c, lo))
                    tops[(a, c)] = self.tops[(a, old)]
                    bots[(a, c)] = self.bots[(a, old)]
        return BinaryMulticomplex(self.ring, self.dim, shape, objects, tops, bots)

    def canonical_key(self):
        n = self.normalize()
        objs = tuple((c, n.objects[c].gens, n.objects[c].rels.rows,
                      n.objects[c].rels.cols, n.objects[c].rels.entries)
                     for c in sorted(n.objects))
        diffs = tuple((a, c, n.tops[(a, c)].mat.entries, n.bots[(a, c)].mat.entries)
                      for (a, c) in sorted(n.tops))
        return (n.dim, n.shape, objs, diffs)

    def equivalent(self, other: "BinaryMulticomplex") -> bool:
        return self.canonical_key() == other.canonical_key()

    # -- lines and diagonality -------------------------------------------
    def line(self, axis: int, rest, which: str) -> ChainComplex:
        fam = self.family(which)
        mods = [self.objects[_insert(rest, axis, t)] for t in range(self.shape[axis])]
        diffs = [fam[(axis, _insert(rest, axis, t))] for t in range(1, self.shape[axis])]
        return ChainComplex(self.ring, mods, diffs, check=False)

    def rest_coords(self, axis: int):
        return box_coords(_drop(self.shape, axis))

    def is_diagonal_in(self, axis: int) -> bool:
        for c in box_coords(self.shape):
            if c[axis] >= 1 and not self.tops[(axis, c)].equals(self.bots[(axis, c)]):
                return False
        return True

    def diagonal_directions(self) -> frozenset:
        return frozenset(a for a in range(self.dim) if self.is_diagonal_in(a))


@dataclass(frozen=True)
class DiagonalityReport:
    directions: frozenset
    counterexamples: dict

    def is_diagonal(self) -> bool:
        return bool(self.directions)


def diagonality_report(M: BinaryMulticomplex) -> DiagonalityReport:
    dirs = set()
    counter = {}
    for a in range(M.dim):
        bad = None
        for c in sorted(box_coords(M.shape)):
            if c[a] >= 1 and not M.tops[(a, c)].equals(M.bots[(a, c)]):
                bad = c
                break
        if bad is None:
            dirs.add(a)
        else:
            counter[a] = bad
    return DiagonalityReport(frozenset(dirs), counter)


@dataclass(frozen=True)
class ValidationFailure:
    kind: str  # "composite" | "line" | "square"
    family: str
    axis: int
    coord: tuple
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple

    def first(self) -> Optional[ValidationFailure]:
        return self.failures[0] if self.failures else None


def validate(M: BinaryMulticomplex, mode: str = "fp") -> ValidationReport:
    """Full validity: complexes linewise, acyclic linewise, commuting squares.

    In free mode every object must be freely presented; line witnesses are
    then computed with free cycle modules.
    """
    failures = []
    if mode == "free":
        for c in sorted(M.objects):
            if not M.objects[c].is_free_presentation():
                failures.append(ValidationFailure("free", "", -1, c, "object is not free"))
        if failures:
            return ValidationReport(False, tuple(failures))
    for axis in range(M.dim):
        for rest in sorted(M.rest_coords(axis)):
            for which in ("top", "bottom"):
                line = M.line(axis, rest, which)
                broken = False
                for k in range(line.length - 2):
                    if not (line.diffs[k] @ line.diffs[k + 1]).is_zero():
                        failures.append(ValidationFailure(
                            "composite", which, axis, _insert(rest, axis, k + 2),
                            "consecutive differentials do not compose to zero"))
                        broken = True
                if broken:
                    continue
                outcome = acyclicity_witness(line, mode)
                if not outcome.ok:
                    failures.append(ValidationFailure(
                        "line", which, axis, _insert(rest, axis, outcome.failing_degree),
                        outcome.describe()))
    for ai in range(M.dim):
        for aj in range(ai + 1, M.dim):
            for c in sorted(box_coords(M.shape)):
                if c[ai] < 1 or c[aj] < 1:
                    continue
                for fi, fam_i in (("top", M.tops), ("bottom", M.bots)):
                    for fj, fam_j in (("top", M.tops), ("bottom", M.bots)):
                        lhs = fam_i[(ai, _minus(c, aj))] @ fam_j[(aj, c)]
                        rhs = fam_j[(aj, _minus(c, ai))] @ fam_i[(ai, c)]
                        if not lhs.equals(rhs):
                            failures.append(ValidationFailure(
                                "square", f"{fi}/{fj}", ai, c,
                                f"axes {ai},{aj} do not commute"))
    return ValidationReport(not failures, tuple(failures))


class MultiMorphism:
    """Coordinate-wise morphism between equal-shape multicomplexes."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: BinaryMulticomplex, target: BinaryMulticomplex, components):
        if source.ring != target.ring or source.dim != target.dim or source.shape != target.shape:
            raise ShapeError("multicomplex morphism needs equal dimension and shape")
        self.source = source
        self.target = target
        self.components = dict(components)
        if set(self.components) != set(box_coords(source.shape)):
            raise ShapeError("morphism components must cover the support box")
        for c, f in self.components.items():
            if f.source != source.objects[c] or f.target != target.objects[c]:
                raise ShapeError(f"component at {c} has wrong endpoints")

    def at(self, coord) -> FpMorphism:
        return self.components[tuple(coord)]

    @staticmethod
    def identity(M: BinaryMulticomplex) -> "MultiMorphism":
        return MultiMorphism(M, M, {c: FpMorphism.identity(m) for c, m in M.objects.items()})

    @staticmethod
    def zero(source: BinaryMulticomplex, target: BinaryMulticomplex) -> "MultiMorphism":
        return MultiMorphism(source, target,
                             {c: FpMorphism.zero(source.objects[c], target.objects[c])
                              for c in box_coords(source.shape)})

    def __matmul__(self, other: "MultiMorphism") -> "MultiMorphism":
        if other.target is not self.source and other.target != self.source:
            raise ShapeError("composition endpoint mismatch")
        return MultiMorphism(other.source, self.target,
                             {c: self.components[c] @ other.components[c]
                              for c in self.components})

    def commutes(self) -> bool:
        """Does the morphism intertwine both differential families everywhere?"""
        s, t = self.source, self.target
        for fam in ("top", "bottom"):
            fs, ft = s.family(fam), t.family(fam)
            for (a, c) in fs:
                lhs = ft[(a, c)] @ self.components[c]
                rhs = self.components[_minus(c, a)] @ fs[(a, c)]
                if not lhs.equals(rhs):
                    return False
        return True

    def equals(self, other: "MultiMorphism") -> bool:
        if self.source != other.source or self.target != other.target:
            return False
        return all(self.components[c].equals(other.components[c]) for c in self.components)


def shift(M: BinaryMulticomplex, offsets) -> BinaryMulticomplex:
    """Translate the support by nonnegative offsets, padding zeros below."""
    offsets = tuple(offsets)
    if len(offsets) != M.dim or any(o < 0 for o in offsets):
        raise ShapeError("offsets must be nonnegative, one per axis")
    if all(o == 0 for o in offsets):
        return M
    shape = tuple(s + o for s, o in zip(M.shape, offsets))
    zero = FpModule.zero(M.ring)
    objects = {}
    for c in box_coords(shape):
        old = tuple(x - o for x, o in zip(c, offsets))
        inside = all(0 <= x < s for x, s in zip(old, M.shape))
        objects[c] = M.objects[old] if inside else zero
    tops, bots = {}, {}
    for a in range(M.dim):
        for c in box_coords(shape):
            if c[a] < 1:
                continue
            old = tuple(x - o for x, o in zip(c, offsets))
            inside = all(0 <= x < s for x, s in zip(old, M.shape)) and old[a] >= 1
            if inside:
                tops[(a, c)] = M.tops[(a, old)]
                bots[(a, c)] = M.bots[(a, old)]
            else:
                f = FpMorphism.zero(objects[c], objects[_minus(c, a)])
                tops[(a, c)] = f
                bots[(a, c)] = f
    return BinaryMulticomplex(M.ring, M.dim, shape, objects, tops, bots)


def pad_to(M: BinaryMulticomplex, shape) -> BinaryMulticomplex:
    """Grow the box at the high end with zeros; existing coordinates keep their keys."""
    shape = tuple(shape)
    if shape == M.shape:
        return M
    if len(shape) != M.dim or any(n < s for n, s in zip(shape, M.shape)):
        raise ShapeError("pad_to cannot shrink the box")
    zero = FpModule.zero(M.ring)
    objects = {}
    for c in box_coords(shape):
        inside = all(x < s for x, s in zip(c, M.shape))
        objects[c] = M.objects[c] if inside else zero
    tops, bots = {}, {}
    for a in range(M.dim):
        for c in box_coords(shape):
            if c[a] < 1:
                continue
            inside = all(x < s for x, s in zip(c, M.shape))
            if inside:
                tops[(a, c)] = M.tops[(a, c)]
                bots[(a, c)] = M.bots[(a, c)]
            else:
                f = FpMorphism.zero(objects[c], objects[_minus(c, a)])
                tops[(a, c)] = f
                bots[(a, c)] = f
    return BinaryMulticomplex(M.ring, M.dim, shape, objects, tops, bots)


def shift_morphism(f: MultiMorphism, offsets) -> MultiMorphism:
    """The same morphism between translated source and target."""
    src = shift(f.source, offsets)
    tgt = shift(f.target, offsets)
    offsets = tuple(offsets)
    comps = {}
    for c in box_coords(src.shape):
        old = tuple(x - o for x, o in zip(c, offsets))
        if all(0 <= x < s for x, s in zip(old, f.source.shape)):
            comps[c] = f.components[old]
        else:
            comps[c] = FpMorphism.zero(src.objects[c], tgt.objects[c])
    return MultiMorphism(src, tgt, comps)


def pad_morphism(f: MultiMorphism, shape) -> MultiMorphism:
    """The same morphism between high-end padded source and target."""
    src = pad_to(f.source, shape)
    tgt = pad_to(f.target, shape)
    comps = {}
    for c in box_coords(src.shape):
        if all(x < s for x, s in zip(c, f.source.shape)):
            comps[c] = f.components[c]
        else:
            comps[c] = FpMorphism.zero(src.objects[c], tgt.objects[c])
    return MultiMorphism(src, tgt, comps)


def kernel_multicomplex(f: MultiMorphism):
    """(K, incl) with K the coordinate-wise kernel of f inside f.source.

    Differentials restrict because f intertwines them; the restrictions are
    recovered by factoring through the kernel inclusions.
    """
    from .fpmod import kernel

    src = f.source
    mods, incls = {}, {}
    for c in box_coords(src.shape):
        K_c, incl_c = kernel(f.components[c])
        mods[c] = K_c
        incls[c] = incl_c
    tops, bots = {}, {}
    for fam, out in ((src.tops, tops), (src.bots, bots)):
        for (a, c) in fam:
            lifted = factor_through_mono(incls[_minus(c, a)], fam[(a, c)] @ incls[c])
            if lifted is None:
                raise ShapeError("source differential does not restrict to the kernel")
            out[(a, c)] = lifted
    K = BinaryMulticomplex(src.ring, src.dim, src.shape, mods, tops, bots)
    return K, MultiMorphism(K, src, incls)


def common_shape(multis) -> tuple:
    dims = {m.dim for m in multis}
    if len(dims) != 1:
        raise ShapeError("dimension mismatch")
    d = dims.pop()
    return tuple(max(m.shape[a] for m in multis) for a in range(d))


def direct_sum_multi(multis) -> BinaryMulticomplex:
    multis = [pad_to(m, common_shape(multis)) for m in multis]
    first = multis[0]
    ring, dim, shape = first.ring, first.dim, first.shape
    objects = {c: direct_sum_modules([m.objects[c] for m in multis]) for c in box_coords(shape)}
    tops, bots = {}, {}
    for a in range(dim):
        for c in box_coords(shape):
            if c[a] < 1:
                continue
            tops[(a, c)] = FpMorphism(
                objects[c], objects[_minus(c, a)],
                block_diag(ring, [m.tops[(a, c)].mat for m in multis]), _trusted=True)
            bots[(a, c)] = FpMorphism(
                objects[c], objects[_minus(c, a)],
                block_diag(ring, [m.bots[(a, c)].mat for m in multis]), _trusted=True)
    return BinaryMulticomplex(ring, dim, shape, objects, tops, bots)


def summand_inclusion(multis, k: int) -> MultiMorphism:
    shape = common_shape(multis)
    padded = [pad_to(m, shape) for m in multis]
    total = direct_sum_multi(multis)
    return MultiMorphism(padded[k], total,
                         {c: split_inclusion([m.objects[c] for m in padded], k)
                          for c in box_coords(shape)})


def summand_projection(multis, k: int) -> MultiMorphism:
    shape = common_shape(multis)
    padded = [pad_to(m, shape) for m in multis]
    total = direct_sum_multi(multis)
    return MultiMorphism(total, padded[k],
                         {c: split_projection([m.objects[c] for m in padded], k)
                          for c in box_coords(shape)})


def block_identity_morphism(src_atoms, tgt_atoms, routed, term_src, term_tgt) -> MultiMorphism:
    """Morphism between direct sums assembled from identity blocks.

    src_atoms and tgt_atoms are (tag, multicomplex) lists matching the
    summand order of term_src and term_tgt; routed is a set of
    (target_tag, source_tag) pairs, each wiring two copies of one summand by
    the identity.  Every unrouted block is zero.
    """
    ring = term_src.ring
    comps = {}
    for c in box_coords(term_src.shape):
        rows = []
        for tag_t, at in tgt_atoms:
            row = []
            for tag_s, As in src_atoms:
                r, s = at.objects[c].gens, As.objects[c].gens
                if (tag_t, tag_s) in routed:
                    row.append(Matrix.identity(ring, r))
                else:
                    row.append(Matrix.zeros(ring, r, s))
            rows.append(hstack(row) if row else Matrix.zeros(ring, at.objects[c].gens, 0))
        mat = vstack(rows) if rows else Matrix.zeros(ring, 0, term_src.objects[c].gens)
        comps[c] = FpMorphism(term_src.objects[c], term_tgt.objects[c], mat, _trusted=True)
    return MultiMorphism(term_src, term_tgt, comps)


@dataclass(frozen=True)
class Tower:
    """Single-differential bounded complex of (dim-1)-multicomplexes."""

    terms: tuple
    diffs: tuple  # diffs[k] : terms[k+1] -> terms[k]

    def __post_init__(self):
        if self.terms and len(self.diffs) != len(self.terms) - 1:
            raise ShapeError("tower needs one differential per adjacent pair")
        for k, d in enumerate(self.diffs):
            if d.source != self.terms[k + 1] or d.target != self.terms[k]:
                raise ShapeError(f"tower differential {k} has wrong endpoints")

    @property
    def length(self):
        return len(self.terms)


@dataclass(frozen=True)
class BinaryTower:
    """Two-differential bounded complex of (dim-1)-multicomplexes."""

    terms: tuple
    tops: tuple
    bots: tuple

    def __post_init__(self):
        if self.terms and (len(self.tops) != len(self.terms) - 1 or len(self.bots) != len(self.terms) - 1):
            raise ShapeError("binary tower needs one differential pair per adjacent pair")
        for fam in (self.tops, self.bots):
            for k, d in enumerate(fam):
                if d.source != self.terms[k + 1] or d.target != self.terms[k]:
                    raise ShapeError(f"tower differential {k} has wrong endpoints")

    @property
    def length(self):
        return len(self.terms)


def expand_along(M: BinaryMulticomplex, axis: int) -> BinaryTower:
    """View M as a binary complex of (dim-1)-multicomplexes along the axis."""
    if not 0 <= axis < M.dim:
        raise ShapeError(f"axis {axis} out of range for dimension {M.dim}")
    rest_shape = _drop(M.shape, axis)
    rest_dim = M.dim - 1
    terms = []
    for t in range(M.shape[axis]):
        objects = {r: M.objects[_insert(r, axis, t)] for r in box_coords(rest_shape)}
        tops, bots = {}, {}
        for a in range(rest_dim):
            orig_a = a if a < axis else a + 1
            for r in box_coords(rest_shape):
                if r[a] < 1:
                    continue
                c = _insert(r, axis, t)
                tops[(a, r)] = M.tops[(orig_a, c)]
                bots[(a, r)] = M.bots[(orig_a, c)]
        terms.append(BinaryMulticomplex(M.ring, rest_dim, rest_shape, objects, tops, bots))
    tower_tops, tower_bots = [], []
    for t in range(1, M.shape[axis]):
        comp_t = {r: M.tops[(axis, _insert(r, axis, t))] for r in box_coords(rest_shape)}
        comp_b = {r: M.bots[(axis, _insert(r, axis, t))] for r in box_coords(rest_shape)}
        tower_tops.append(MultiMorphism(terms[t], terms[t - 1], comp_t))
        tower_bots.append(MultiMorphism(terms[t], terms[t - 1], comp_b))
    return BinaryTower(tuple(terms), tuple(tower_tops), tuple(tower_bots))


def collapse_along(tw: BinaryTower, axis: int) -> BinaryMulticomplex:
    """Inverse of expand_along: reinsert the axis at the given position."""
    if tw.length == 0:
        raise ShapeError("cannot collapse an empty tower")
    first = tw.terms[0]
    ring, rest_dim = first.ring, first.dim
    if not 0 <= axis <= rest_dim:
        raise ShapeError(f"axis {axis} out of range for dimension {rest_dim + 1}")
    rest_shape = first.shape
    for term in tw.terms:
        if term.shape != rest_shape or term.dim != rest_dim:
            raise ShapeError("tower terms must share one shape; pad them first")
    shape = _insert(rest_shape, axis, tw.length)
    objects = {}
    tops, bots = {}, {}
    for t, term in enumerate(tw.terms):
        for r in box_coords(rest_shape):
            c = _insert(r, axis, t)
            objects[c] = term.objects[r]
        for a in range(rest_dim):
            orig_a = a if a < axis else a + 1
            for r in box_coords(rest_shape):
                if r[a] < 1:
                    continue
                c = _insert(r, axis, t)
                tops[(orig_a, c)] = term.tops[(a, r)]
                bots[(orig_a, c)] = term.bots[(a, r)]
    for t in range(1, tw.length):
        for r in box_coords(rest_shape):
            c = _insert(r, axis, t)
            tops[(axis, c)] = tw.tops[t - 1].components[r]
            bots[(axis, c)] = tw.bots[t - 1].components[r]
    return BinaryMulticomplex(ring, rest_dim + 1, shape, objects, tops, bots)


def top_slice(M: BinaryMulticomplex, axis: int) -> Tower:
    bt = expand_along(M, axis)
    return Tower(bt.terms, bt.tops)


def bottom_slice(M: BinaryMulticomplex, axis: int) -> Tower:
    bt = expand_along(M, axis)
    return Tower(bt.terms, bt.bots)


def diagonal_embed(tw: Tower, axis: int, mode: str = "fp", check: bool = True) -> BinaryMulticomplex:
    """Double the tower differential into both families along a new axis.

    The tower must be acyclic (as a complex of multicomplexes with valid
    terms); with check=True the flattened result is fully validated and a
    failure raises NotAcyclic.
    """
    out = collapse_along(BinaryTower(tw.terms, tw.diffs, tw.diffs), axis)
    if check:
        report = validate(out, mode)
        if not report.ok:
            f = report.first()
            raise NotAcyclic(f"diagonal embedding is not valid: {f.kind} failure at "
                             f"axis {f.axis}, coordinate {f.coord}: {f.detail}")
    return out


def rediagonalize(M: BinaryMulticomplex, axis: int) -> BinaryMulticomplex:
    """Replace the bottom differential with the top one along the axis.

    This is the diagonal-after-top retraction: it is the identity exactly on
    inputs already diagonal in the axis.
    """
    return diagonal_embed(top_slice(M, axis), axis, check=False)


def image_multicomplex(f: MultiMorphism, mode: str = "free"):
    """(I, incl) with I the coordinate-wise image of f inside f.target.

    Induced differentials are the restrictions of the target's, obtained by
    factoring through the inclusions; both families restrict.
    """
    tgt = f.target
    mods = {}
    incls = {}
    for c in box_coords(tgt.shape):
        comp = f.components[c]
        if mode == "free":
            basis = column_space_basis(comp.mat)
            I = FpModule.free(tgt.ring, basis.cols)
            incls[c] = FpMorphism(I, tgt.objects[c], basis, _trusted=True)
        else:
            I, incl, _ = image(comp)
            incls[c] = incl
        mods[c] = incls[c].source
    tops, bots = {}, {}
    for fam_name, fam, out in (("top", tgt.tops, tops), ("bottom", tgt.bots, bots)):
        for (a, c) in fam:
            lifted = factor_through_mono(incls[_minus(c, a)], fam[(a, c)] @ incls[c])
            if lifted is None:
                raise ShapeError("target differential does not restrict to the image")
            out[(a, c)] = lifted
    I = BinaryMulticomplex(tgt.ring, tgt.dim, tgt.shape, mods, tops, bots)
    return I, MultiMorphism(I, tgt, incls)
