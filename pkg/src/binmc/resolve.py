"""Witness-producing resolutions of acyclic binary multicomplexes.

Every valid multicomplex M receives a short exact sequence

    Pprime >--incl--> P --zeta--> target

in which P and Pprime have free objects and validate in free mode, and
target is M translated up by a recorded per-axis offset (the covers extend
one layer below the input support along the expansion axis, so the whole
sequence is re-graded to keep boxes nonnegative).

Two constructions are used along the chosen axis.  For an axis where the two
differentials agree, each cover summand is a two-layer identity complex
("staircase"), so the cover is diagonal in that axis.  Otherwise each
summand is a doubled complex whose top and bottom differentials are the
shift patterns [[0,1],[0,0]] and [[0,0],[1,0]], glued to the target by an
alternating ladder of composites of the two differentials.  Higher
dimensions recurse: the epimorphism provider for an n-dimensional input is
the (n-1)-dimensional resolution of its slices, and the base provider for
modules is the free cover.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAcyclic, NotDiagonal, ShapeError
from .fpmod import (FpModule, FpMorphism, check_ses, direct_sum_modules,
                    direct_sum_morphisms, free_cover, hsum, is_epi, kernel)
from .matrix import Matrix, hstack, vstack
from .multicomplex import (BinaryMulticomplex, BinaryTower, MultiMorphism,
                           block_identity_morphism, box_coords, collapse_along,
                           direct_sum_multi, expand_along, kernel_multicomplex,
                           pad_morphism, pad_to, shift, shift_morphism,
                           validate)


class ResolutionResult:
    """A verified-checkable SES presenting target as a quotient of P.

    diagonal_axes lists the axes in which the construction promises to keep
    P and Pprime diagonal (every diagonal axis of the source, unless the
    doubled-cover branch was forced on a diagonal input).
    """

    __slots__ = ("P", "Pprime", "zeta", "incl", "source", "target", "offset",
                 "diagonal_axes")

    def __init__(self, P, Pprime, zeta, incl, source, target, offset,
                 diagonal_axes=frozenset()):
        self.P = P
        self.Pprime = Pprime
        self.zeta = zeta
        self.incl = incl
        self.source = source
        self.target = target
        self.offset = tuple(offset)
        self.diagonal_axes = frozenset(diagonal_axes)

    def ses_witness(self) -> dict:
        """Coordinate -> (inclusion, projection) for the degreewise sequences."""
        return {c: (self.incl.components[c], self.zeta.components[c])
                for c in box_coords(self.P.shape)}

    def __repr__(self):
        return (f"ResolutionResult(dim={self.P.dim}, shape={self.P.shape}, "
                f"offset={self.offset})")


@dataclass(frozen=True)
class ResolutionReport:
    ok: bool
    failures: tuple

    def first(self):
        return self.failures[0] if self.failures else None


def verify_resolution(res: ResolutionResult) -> ResolutionReport:
    """Re-check every claim a ResolutionResult makes, from scratch."""
    failures = []
    rep_p = validate(res.P, "free")
    if not rep_p.ok:
        failures.append(f"cover invalid: {rep_p.first()}")
    rep_k = validate(res.Pprime, "free")
    if not rep_k.ok:
        failures.append(f"kernel invalid: {rep_k.first()}")
    expected = pad_to(shift(res.source, res.offset), res.target.shape)
    if expected != res.target:
        failures.append("target is not the offset translate of the source")
    if res.zeta.source != res.P or res.zeta.target != res.target:
        failures.append("projection endpoints are wrong")
    elif not res.zeta.commutes():
        failures.append("projection does not commute with the differentials")
    if res.incl.source != res.Pprime or res.incl.target != res.P:
        failures.append("inclusion endpoints are wrong")
    elif not res.incl.commutes():
        failures.append("inclusion does not commute with the differentials")
    if not failures:
        for c in sorted(box_coords(res.P.shape)):
            verdict = check_ses(res.incl.components[c], res.zeta.components[c])
            if not verdict.ok:
                failures.append(f"sequence at {c} is not exact: {verdict.reason}")
                break
    for a in sorted(res.diagonal_axes):
        if not res.P.is_diagonal_in(a) or not res.Pprime.is_diagonal_in(a):
            failures.append(f"diagonality in axis {a} was not preserved")
    return ResolutionReport(not failures, tuple(failures))


class DeltaLadder:
    """Alternating composites delta[(k, l)] : Q_k -> term_{k+1-l}.

    delta(k,1) = top o eps_k, delta'(k,1) = bottom o eps_k, and each further
    lag prepends the other family's differential:
    delta(k,l+1) = top o delta'(k,l), delta'(k,l+1) = bottom o delta(k,l).
    """

    def __init__(self, eps, tops, bots):
        self.eps = list(eps)
        self.tops = list(tops)
        self.bots = list(bots)
        self.delta = {}
        self.delta_prime = {}
        for k in range(len(self.eps)):
            if k >= 1:
                self.delta[(k, 1)] = self.tops[k] @ self.eps[k]
                self.delta_prime[(k, 1)] = self.bots[k] @ self.eps[k]
            for l in range(1, k):
                self.delta[(k, l + 1)] = self.tops[k - l] @ self.delta_prime[(k, l)]
                self.delta_prime[(k, l + 1)] = self.bots[k - l] @ self.delta[(k, l)]

    def identities_hold(self) -> bool:
        for (k, l), f in self.delta.items():
            ref = (self.tops[k] @ self.eps[k] if l == 1
                   else self.tops[k - l + 1] @ self.delta_prime[(k, l - 1)])
            if not f.equals(ref):
                return False
        for (k, l), f in self.delta_prime.items():
            ref = (self.bots[k] @ self.eps[k] if l == 1
                   else self.bots[k - l + 1] @ self.delta[(k, l - 1)])
            if not f.equals(ref):
                return False
        return True


def _module_resolution(M0: BinaryMulticomplex) -> ResolutionResult:
    mod = M0.obj(())
    eps = free_cover(mod)
    K, incl = kernel(eps)
    P = BinaryMulticomplex.of_module(eps.source)
    Pp = BinaryMulticomplex.of_module(K)
    return ResolutionResult(
        P, Pp,
        MultiMorphism(P, M0, {(): eps}),
        MultiMorphism(Pp, P, {(): incl}),
        source=M0, target=M0, offset=())


def _staircase_tables(L, eps, big):
    """Atom lists, projection pieces, and identity routings for the
    two-layer covers along a diagonal axis (post-shift degrees 0..L)."""
    n = L - 1
    atoms, pieces = [], []
    for j in range(L + 1):
        row_atoms, row_pieces = [], []
        if j <= n:
            row_atoms.append(("lo", j))
            row_pieces.append(big.tops[j] @ eps[j])
        if j >= 1:
            row_atoms.append(("hi", j - 1))
            row_pieces.append(eps[j - 1])
        atoms.append(row_atoms)
        pieces.append(row_pieces)
    route = {}
    for j in range(1, L + 1):
        route[j] = {(("lo", j - 1), ("hi", j - 1))}
    return atoms, pieces, route, route


def _ladder_tables(L, eps, ladder, big):
    """Atom lists, ladder projection pieces, and the two shift routings for
    the doubled covers along a non-diagonal axis."""
    n = L - 1
    atoms, pieces = [], []
    atoms.append([("end", k) for k in range(n, -1, -1)])
    pieces.append([None] * (n + 1))  # degree 0 projects to the zero slice
    for j in range(1, L + 1):
        row_atoms, row_pieces = [], []
        for k in range(n, j - 1, -1):
            row_atoms.append(("a", k))
            row_pieces.append(ladder.delta[(k, k - j + 1)])
            row_atoms.append(("b", k))
            row_pieces.append(ladder.delta_prime[(k, k - j + 1)])
        row_atoms.append(("top", j - 1))
        row_pieces.append(eps[j - 1])
        atoms.append(row_atoms)
        pieces.append(row_pieces)
    route_top, route_bot = {}, {}
    for j in range(1, L + 1):
        rt, rb = set(), set()
        for k in range(n, j - 1, -1):
            if j - 1 >= 1:
                rt.add((("a", k), ("b", k)))
                rb.add((("b", k), ("a", k)))
            else:
                rt.add((("end", k), ("b", k)))
                rb.add((("end", k), ("a", k)))
        if j - 1 >= 1:
            rt.add((("a", j - 1), ("top", j - 1)))
            rb.add((("b", j - 1), ("top", j - 1)))
        else:
            rt.add((("end", 0), ("top", 0)))
            rb.add((("end", 0), ("top", 0)))
        route_top[j] = rt
        route_bot[j] = rb
    return atoms, pieces, route_top, route_bot


def _assemble_zeta_component(atom_list, piece_list, term, big_term):
    ring = term.ring
    comps = {}
    for c in box_coords(term.shape):
        mats = []
        for (tag, A), piece in zip(atom_list, piece_list):
            if piece is None:
                mats.append(Matrix.zeros(ring, big_term.objects[c].gens, A.objects[c].gens))
            else:
                mats.append(piece.components[c].mat)
        mat = hstack(mats) if mats else Matrix.zeros(ring, big_term.objects[c].gens, 0)
        comps[c] = FpMorphism(term.objects[c], big_term.objects[c], mat, _trusted=True)
    return comps


def _resolve(M: BinaryMulticomplex, branch=None) -> ResolutionResult:
    if M.dim == 0:
        return _module_resolution(M)
    if any(s == 0 for s in M.shape):
        ident = MultiMorphism(M, M, {})
        return ResolutionResult(M, M, ident, ident, source=M, target=M,
                                offset=(0,) * M.dim,
                                diagonal_axes=range(M.dim))
    diag = M.diagonal_directions()
    if branch is None:
        branch = "staircase" if diag else "ladder"
    if branch == "staircase":
        if not diag:
            raise NotDiagonal("no axis has equal top and bottom differentials")
        axis = min(diag)
    else:
        axis = M.dim - 1
    tower = expand_along(M, axis)
    L = tower.length
    covers = [_resolve(term) for term in tower.terms]
    rest_dim = M.dim - 1
    W = tuple(max(c.offset[a] for c in covers) for a in range(rest_dim))
    aligned = [shift_morphism(c.zeta, tuple(w - o for w, o in zip(W, c.offset)))
               for c in covers]
    r_star = tuple(max(max(f.source.shape[a] for f in aligned),
                       max(f.target.shape[a] for f in aligned))
                   for a in range(rest_dim))
    eps = [pad_morphism(f, r_star) for f in aligned]
    offset = W[:axis] + (1,) + W[axis:]
    final_shape = r_star[:axis] + (L + 1,) + r_star[axis:]
    target = pad_to(shift(M, offset), final_shape)
    big = expand_along(target, axis)
    for t in range(L):
        if big.terms[t + 1] != eps[t].target:
            raise ShapeError("aligned covers disagree with the translated input")
        eps[t] = MultiMorphism(eps[t].source, big.terms[t + 1], eps[t].components)
    Q = [f.source for f in eps]

    if branch == "staircase":
        atoms_tags, pieces, route_top, route_bot = _staircase_tables(L, eps, big)
    else:
        ladder = DeltaLadder(eps, list(big.tops), list(big.bots))
        atoms_tags, pieces, route_top, route_bot = _ladder_tables(L, eps, ladder, big)

    def atom_of(tag):
        return Q[tag[1]]

    atom_rows = [[(tag, atom_of(tag)) for tag in row] for row in atoms_tags]
    terms = [direct_sum_multi([a for _, a in row]) for row in atom_rows]
    tower_tops, tower_bots = [], []
    for j in range(1, L + 1):
        tower_tops.append(block_identity_morphism(
            atom_rows[j], atom_rows[j - 1], route_top[j], terms[j], terms[j - 1]))
        tower_bots.append(block_identity_morphism(
            atom_rows[j], atom_rows[j - 1], route_bot[j], terms[j], terms[j - 1]))
    P = collapse_along(BinaryTower(tuple(terms), tuple(tower_tops), tuple(tower_bots)), axis)

    zeta_comps = {}
    for j in range(L + 1):
        layer = _assemble_zeta_component(atom_rows[j], pieces[j], terms[j], big.terms[j])
        for r, f in layer.items():
            zeta_comps[r[:axis] + (j,) + r[axis:]] = f
    zeta = MultiMorphism(P, target, zeta_comps)
    Pprime, incl = kernel_multicomplex(zeta)
    claimed = diag if branch == "staircase" else frozenset()
    return ResolutionResult(P, Pprime, zeta, incl, source=M, target=target,
                            offset=offset, diagonal_axes=claimed)


def _checked(M: BinaryMulticomplex):
    report = validate(M, "fp")
    if not report.ok:
        f = report.first()
        raise NotAcyclic(f"input is not a valid acyclic binary multicomplex: "
                         f"{f.kind} failure at axis {f.axis}, coordinate {f.coord}")


def resolve_multi(M: BinaryMulticomplex, check: bool = True) -> ResolutionResult:
    """Resolution in any dimension; staircase along a diagonal axis when one
    exists, doubled covers along the highest axis otherwise."""
    if check:
        _checked(M)
    return _resolve(M)


def resolve_binary(M: BinaryMulticomplex, check: bool = True) -> ResolutionResult:
    """One-dimensional resolution by doubled covers (works for any input)."""
    if M.dim != 1:
        raise ShapeError("resolve_binary expects a one-dimensional input")
    if check:
        _checked(M)
    return _resolve(M, branch="ladder")


def resolve_diagonal(M: BinaryMulticomplex, check: bool = True) -> ResolutionResult:
    """One-dimensional staircase resolution; input must be diagonal."""
    if M.dim != 1:
        raise ShapeError("resolve_diagonal expects a one-dimensional input")
    if check:
        _checked(M)
    if not M.is_diagonal_in(0):
        raise NotDiagonal("input differentials differ; use resolve_binary")
    return _resolve(M, branch="staircase")


def phi_class(M: FpModule, cover: FpMorphism = None) -> int:
    """rank(P) - rank(P') for a free presentation P' >-> P ->> M.

    The value is independent of the chosen cover; by default the free cover
    on the module's generators is used.
    """
    if cover is None:
        cover = free_cover(M)
    else:
        if cover.target != M:
            raise ShapeError("cover must surject onto the module")
        if not cover.source.is_free_presentation():
            raise ShapeError("cover source must be free")
        if not is_epi(cover):
            raise ShapeError("cover must be an epimorphism")
    K, _ = kernel(cover)
    if not K.is_free_presentation():
        raise ShapeError("kernel of the cover is not free over this ring")
    return cover.source.gens - K.gens


@dataclass(frozen=True)
class AdmissibleSumReport:
    ok: bool
    pivot: int
    steps: tuple
    reason: str = ""

    def composite(self):
        f = self.steps[0]
        for s in self.steps[1:]:
            f = s @ f
        return f


def admissible_sum_factorization(fs, pivot: int = None) -> AdmissibleSumReport:
    """Factor [f_1 ... f_m] : (+) Q_i -> N into verified epimorphisms.

    Requires some f_i to be an admissible epi; the factorization threads the
    pivot through two-summand steps ([[f,0],[0,1]], [[1,g],[0,1]], [1 0] and
    the mirrored orientation when the pivot sits on the right).
    """
    fs = list(fs)
    if not fs:
        return AdmissibleSumReport(False, -1, (), "no morphisms given")
    target = fs[0].target
    for f in fs:
        if f.target != target:
            raise ShapeError("summands need a common target")
    if pivot is None:
        pivot = next((i for i, f in enumerate(fs) if is_epi(f)), -1)
        if pivot < 0:
            return AdmissibleSumReport(False, -1, (),
                                       "no summand is an admissible epimorphism")
    elif not is_epi(fs[pivot]):
        return AdmissibleSumReport(False, pivot, (),
                                   "chosen pivot is not an admissible epimorphism")

    def build(k):
        # factorization of [f_0 .. f_k]; requires pivot <= k
        if k == 0:
            return [fs[0]]
        Qk = fs[k].source
        if pivot <= k - 1:
            prefix = build(k - 1)
            steps = [direct_sum_morphisms([s, FpMorphism.identity(Qk)]) for s in prefix]
            NQ = direct_sum_modules([target, Qk])
            shear = FpMorphism(NQ, NQ, vstack([
                hstack([Matrix.identity(target.ring, target.gens), fs[k].mat]),
                hstack([Matrix.zeros(target.ring, Qk.gens, target.gens),
                        Matrix.identity(target.ring, Qk.gens)]),
            ]), _trusted=True)
            proj = hsum([FpMorphism.identity(target), FpMorphism.zero(Qk, target)])
            return steps + [shear, proj]
        # pivot == k: mirrored orientation keeps the left block untouched
        left = direct_sum_modules([f.source for f in fs[:k]])
        g = hsum(fs[:k])
        s1 = direct_sum_morphisms([FpMorphism.identity(left), fs[k]])
        LN = direct_sum_modules([left, target])
        s2 = FpMorphism(LN, LN, vstack([
            hstack([Matrix.identity(left.ring, left.gens),
                    Matrix.zeros(left.ring, left.gens, target.gens)]),
            hstack([g.mat, Matrix.identity(target.ring, target.gens)]),
        ]), _trusted=True)
        s3 = hsum([FpMorphism.zero(left, target), FpMorphism.identity(target)])
        return [s1, s2, s3]

    steps = build(len(fs) - 1)
    report_steps = tuple(steps)
    for s in report_steps:
        if not is_epi(s):
            return AdmissibleSumReport(False, pivot, report_steps,
                                       "a factorization step failed the epi check")
    composite = report_steps[0]
    for s in report_steps[1:]:
        composite = s @ composite
    if not composite.equals(hsum(fs)):
        return AdmissibleSumReport(False, pivot, report_steps,
                                   "factorization does not compose to the sum")
    return AdmissibleSumReport(True, pivot, report_steps)
