"""Exact matrices over the package's rings, with Smith normal form and friends.

A Matrix is an immutable flat tuple of ring elements plus a ring reference.
The decomposition routines are deterministic: pivot selection always takes the
nonzero entry of smallest Euclidean size, ties broken by lowest row then column
index, and diagonal entries are normalized to canonical associates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ShapeError
from .rings import Ring, ZZ


class Matrix:
    __slots__ = ("ring", "rows", "cols", "entries", "_snf")

    def __init__(self, ring: Ring, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ShapeError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._snf = None  # cached (U, S, V, Uinv); instances are immutable

    @staticmethod
    def from_rows(ring: Ring, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != nc:
                raise ShapeError("ragged rows")
        flat = [x for r in rows for x in r]
        return Matrix(ring, nr, nc, flat)

    @staticmethod
    def from_int_rows(ring: Ring, rows) -> "Matrix":
        conv = ring.from_int
        return Matrix.from_rows(ring, [[conv(x) for x in r] for r in rows])

    @staticmethod
    def identity(ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return Matrix(ring, n, n, [o if i == j else z for i in range(n) for j in range(n)])

    @staticmethod
    def zeros(ring: Ring, rows: int, cols: int) -> "Matrix":
        return Matrix(ring, rows, cols, [ring.zero] * (rows * cols))

    def get(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row_list(self):
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.ring == self.ring
                and other.rows == self.rows and other.cols == self.cols
                and other.entries == self.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.ring.kind} {self.rows}x{self.cols} {list(self.entries)})"

    def is_zero(self) -> bool:
        z = self.ring.is_zero
        return all(z(x) for x in self.entries)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        add = self.ring.add
        return Matrix(self.ring, self.rows, self.cols,
                      [add(a, b) for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        sub = self.ring.sub
        return Matrix(self.ring, self.rows, self.cols,
                      [sub(a, b) for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix(self.ring, self.rows, self.cols, [neg(a) for a in self.entries])

    def scale(self, c) -> "Matrix":
        mul = self.ring.mul
        return Matrix(self.ring, self.rows, self.cols, [mul(c, a) for a in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise ShapeError("ring mismatch in product")
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ring = self.ring
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        kind = ring.kind
        if kind == "integers" or kind == "prime-field":
            # raw int accumulation; prime fields reduce once per output entry
            out = [0] * (n * m)
            for i in range(n):
                arow = a[i * k:(i + 1) * k]
                orow = i * m
                for t in range(k):
                    c = arow[t]
                    if c:
                        brow = b[t * m:(t + 1) * m]
                        for j in range(m):
                            v = brow[j]
                            if v:
                                out[orow + j] += c * v
            if kind == "prime-field":
                p = ring.p
                out = [x % p for x in out]
            return Matrix(ring, n, m, out)
        add, mul, zero = ring.add, ring.mul, ring.zero
        is_zero = ring.is_zero
        out = [zero] * (n * m)
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            orow = i * m
            for t in range(k):
                c = arow[t]
                if is_zero(c):
                    continue
                brow = b[t * m:(t + 1) * m]
                for j in range(m):
                    out[orow + j] = add(out[orow + j], mul(c, brow[j]))
        return Matrix(ring, n, m, out)

    def transpose(self) -> "Matrix":
        e = self.entries
        c = self.cols
        return Matrix(self.ring, c, self.rows,
                      [e[i * c + j] for j in range(c) for i in range(self.rows)])

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        out = []
        for i in range(r0, r1):
            out.extend(self.entries[i * self.cols + c0:i * self.cols + c1])
        return Matrix(self.ring, r1 - r0, c1 - c0, out)

    def _same_shape(self, other: "Matrix"):
        if self.ring != other.ring or self.rows != other.rows or self.cols != other.cols:
            raise ShapeError("shape or ring mismatch")


def kron(A: "Matrix", B: "Matrix") -> "Matrix":
    """Kronecker product; basis of the product ordered with A's index outer."""
    if A.ring != B.ring:
        raise ShapeError("kron over mixed rings")
    ring = A.ring
    rows, cols = A.rows * B.rows, A.cols * B.cols
    out = [ring.zero] * (rows * cols)
    for i1 in range(A.rows):
        for j1 in range(A.cols):
            a = A.get(i1, j1)
            if ring.is_zero(a):
                continue
            for i2 in range(B.rows):
                base = (i1 * B.rows + i2) * cols + j1 * B.cols
                for j2 in range(B.cols):
                    out[base + j2] = ring.mul(a, B.get(i2, j2))
    return Matrix(ring, rows, cols, out)


def hstack(mats) -> Matrix:
    mats = list(mats)
    if not mats:
        raise ShapeError("hstack of nothing")
    ring, rows = mats[0].ring, mats[0].rows
    for m in mats:
        if m.rows != rows or m.ring != ring:
            raise ShapeError("hstack mismatch")
    out = []
    for i in range(rows):
        for m in mats:
            out.extend(m.entries[i * m.cols:(i + 1) * m.cols])
    return Matrix(ring, rows, sum(m.cols for m in mats), out)


def vstack(mats) -> Matrix:
    mats = list(mats)
    if not mats:
        raise ShapeError("vstack of nothing")
    ring, cols = mats[0].ring, mats[0].cols
    out = []
    for m in mats:
        if m.cols != cols or m.ring != ring:
            raise ShapeError("vstack mismatch")
        out.extend(m.entries)
    return Matrix(ring, sum(m.rows for m in mats), cols, out)


def block_diag(ring: Ring, mats) -> Matrix:
    mats = list(mats)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[ring.zero] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m.get(i, j)
        r0 += m.rows
        c0 += m.cols
    return Matrix.from_rows(ring, out) if rows else Matrix(ring, 0, cols, [])


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == S with S diagonal, divisibility chain, canonical associates."""

    ring: Ring
    U: Matrix
    S: Matrix
    V: Matrix

    @property
    def rank(self) -> int:
        r = 0
        ring = self.ring
        for i in range(min(self.S.rows, self.S.cols)):
            if not ring.is_zero(self.S.get(i, i)):
                r += 1
        return r

    def diagonal(self):
        return [self.S.get(i, i) for i in range(min(self.S.rows, self.S.cols))]

    def verify(self, A: Matrix) -> bool:
        ring = self.ring
        if self.U @ A @ self.V != self.S:
            return False
        if not ring.is_unit(det(self.U)) or not ring.is_unit(det(self.V)):
            return False
        d = self.diagonal()
        for i in range(len(d) - 1):
            if ring.is_zero(d[i]) and not ring.is_zero(d[i + 1]):
                return False
            if not ring.is_zero(d[i]) and not ring.is_zero(d[i + 1]):
                if ring.try_divide(d[i + 1], d[i]) is None:
                    return False
        for i in range(self.S.rows):
            for j in range(self.S.cols):
                if i != j and not ring.is_zero(self.S.get(i, j)):
                    return False
        return True


class _Worker:
    """Mutable elimination state, mirroring row ops into U/Uinv and col ops into V."""

    def __init__(self, A: Matrix):
        self.ring = A.ring
        self.n = A.rows
        self.m = A.cols
        self.S = A.row_list()
        one, zero = A.ring.one, A.ring.zero
        self.U = [[one if i == j else zero for j in range(self.n)] for i in range(self.n)]
        self.Uinv = [[one if i == j else zero for j in range(self.n)] for i in range(self.n)]
        self.V = [[one if i == j else zero for j in range(self.m)] for i in range(self.m)]

    def row_swap(self, i, j):
        self.S[i], self.S[j] = self.S[j], self.S[i]
        self.U[i], self.U[j] = self.U[j], self.U[i]
        for r in self.Uinv:  # inverse gets the column swap
            r[i], r[j] = r[j], r[i]

    def col_swap(self, i, j):
        for r in self.S:
            r[i], r[j] = r[j], r[i]
        for r in self.V:
            r[i], r[j] = r[j], r[i]

    def row_addmul(self, i, j, c):
        # row i += c * row j; Uinv column j -= c * column i
        add, mul, sub = self.ring.add, self.ring.mul, self.ring.sub
        Si, Sj = self.S[i], self.S[j]
        for t in range(self.m):
            Si[t] = add(Si[t], mul(c, Sj[t]))
        Ui, Uj = self.U[i], self.U[j]
        for t in range(self.n):
            Ui[t] = add(Ui[t], mul(c, Uj[t]))
        for r in self.Uinv:
            r[j] = sub(r[j], mul(c, r[i]))

    def col_addmul(self, j, i, c):
        # col j += c * col i
        add, mul = self.ring.add, self.ring.mul
        for r in self.S:
            r[j] = add(r[j], mul(c, r[i]))
        for r in self.V:
            r[j] = add(r[j], mul(c, r[i]))

    def row_scale(self, i, u):
        mul = self.ring.mul
        uinv = self.ring.unit_inverse(u)
        self.S[i] = [mul(u, x) for x in self.S[i]]
        self.U[i] = [mul(u, x) for x in self.U[i]]
        for r in self.Uinv:
            r[i] = mul(r[i], uinv)

    def pivot_in(self, t):
        """Smallest nonzero entry of S[t:, t:], ties to lowest (row, col).

        Size 1 is the smallest a nonzero entry can have, so the scan stops at
        the first such entry; this keeps the same choice the full scan makes.
        """
        ring = self.ring
        best = None
        for i in range(t, self.n):
            row = self.S[i]
            for j in range(t, self.m):
                x = row[j]
                if not ring.is_zero(x):
                    sz = ring.size(x)
                    if sz == 1:
                        return (1, i, j)
                    if best is None or sz < best[0]:
                        best = (sz, i, j)
        return best

    def reduce_at(self, t):
        """Clear row t and column t off the pivot at (t, t)."""
        ring = self.ring
        while True:
            restart = False
            for i in range(self.n):
                if i == t or ring.is_zero(self.S[i][t]):
                    continue
                q, r = ring.euclid_div(self.S[i][t], self.S[t][t])
                if not ring.is_zero(q):
                    self.row_addmul(i, t, ring.neg(q))
                if not ring.is_zero(r):
                    self.row_swap(i, t)
                    restart = True
                    break
            if restart:
                continue
            for j in range(self.m):
                if j == t or ring.is_zero(self.S[t][j]):
                    continue
                q, r = ring.euclid_div(self.S[t][j], self.S[t][t])
                if not ring.is_zero(q):
                    self.col_addmul(j, t, ring.neg(q))
                if not ring.is_zero(r):
                    self.col_swap(j, t)
                    restart = True
                    break
            if restart:
                continue
            clear = all(ring.is_zero(self.S[i][t]) for i in range(self.n) if i != t)
            clear = clear and all(ring.is_zero(self.S[t][j]) for j in range(self.m) if j != t)
            if clear:
                return


class _IntWorker:
    """Elimination state over the integers with inlined arithmetic.

    Same operation sequence as _Worker so the output is identical; the raw
    int ops and zero-skips make the inner loops far cheaper, which matters
    because integer matrices dominate the workload.
    """

    __slots__ = ("ring", "n", "m", "S", "U", "Uinv", "V")

    def __init__(self, A: Matrix):
        self.ring = A.ring
        self.n = A.rows
        self.m = A.cols
        self.S = A.row_list()
        self.U = [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)]
        self.Uinv = [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)]
        self.V = [[1 if i == j else 0 for j in range(self.m)] for i in range(self.m)]

    def row_swap(self, i, j):
        self.S[i], self.S[j] = self.S[j], self.S[i]
        self.U[i], self.U[j] = self.U[j], self.U[i]
        for r in self.Uinv:
            r[i], r[j] = r[j], r[i]

    def col_swap(self, i, j):
        for r in self.S:
            r[i], r[j] = r[j], r[i]
        for r in self.V:
            r[i], r[j] = r[j], r[i]

    def row_addmul(self, i, j, c):
        Si, Sj = self.S[i], self.S[j]
        for t in range(self.m):
            v = Sj[t]
            if v:
                Si[t] += c * v
        Ui, Uj = self.U[i], self.U[j]
        for t in range(self.n):
            v = Uj[t]
            if v:
                Ui[t] += c * v
        for r in self.Uinv:
            v = r[i]
            if v:
                r[j] -= c * v

    def col_addmul(self, j, i, c):
        for r in self.S:
            v = r[i]
            if v:
                r[j] += c * v
        for r in self.V:
            v = r[i]
            if v:
                r[j] += c * v

    def row_scale(self, i, u):
        self.S[i] = [u * x for x in self.S[i]]
        self.U[i] = [u * x for x in self.U[i]]
        for r in self.Uinv:
            r[i] *= u  # u is 1 or -1, its own inverse

    def pivot_in(self, t):
        best = None
        for i in range(t, self.n):
            row = self.S[i]
            for j in range(t, self.m):
                x = row[j]
                if x:
                    sz = -x if x < 0 else x
                    if sz == 1:
                        return (1, i, j)
                    if best is None or sz < best[0]:
                        best = (sz, i, j)
        return best

    def reduce_at(self, t):
        S = self.S
        n, m = self.n, self.m
        while True:
            restart = False
            for i in range(n):
                x = S[i][t]
                if i == t or x == 0:
                    continue
                p = S[t][t]
                q, r = divmod(x, p)
                if 2 * (r if r >= 0 else -r) > (p if p >= 0 else -p):
                    q, r = q + 1, r - p
                if q:
                    self.row_addmul(i, t, -q)
                if r:
                    self.row_swap(i, t)
                    restart = True
                    break
            if restart:
                continue
            row_t = S[t]
            for j in range(m):
                x = row_t[j]
                if j == t or x == 0:
                    continue
                p = row_t[t]
                q, r = divmod(x, p)
                if 2 * (r if r >= 0 else -r) > (p if p >= 0 else -p):
                    q, r = q + 1, r - p
                if q:
                    self.col_addmul(j, t, -q)
                if r:
                    self.col_swap(j, t)
                    restart = True
                    break
            if restart:
                continue
            if all(S[i][t] == 0 for i in range(n) if i != t) \
                    and all(row_t[j] == 0 for j in range(m) if j != t):
                return


class _FieldIntWorker:
    """Elimination over a prime field, elements kept reduced in [0, p).

    Division is exact, so clearing a pivot's row and column is a single
    Gauss pass with one modular inverse per pivot; the pivot choice (first
    nonzero in scan order) matches the generic worker, every nonzero entry
    having Euclidean size 1.
    """

    __slots__ = ("ring", "p", "n", "m", "S", "U", "Uinv", "V")

    def __init__(self, A: Matrix):
        self.ring = A.ring
        self.p = A.ring.p
        self.n = A.rows
        self.m = A.cols
        p = self.p
        self.S = [[x % p for x in row] for row in A.row_list()]
        self.U = [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)]
        self.Uinv = [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)]
        self.V = [[1 if i == j else 0 for j in range(self.m)] for i in range(self.m)]

    def row_swap(self, i, j):
        self.S[i], self.S[j] = self.S[j], self.S[i]
        self.U[i], self.U[j] = self.U[j], self.U[i]
        for r in self.Uinv:
            r[i], r[j] = r[j], r[i]

    def col_swap(self, i, j):
        for r in self.S:
            r[i], r[j] = r[j], r[i]
        for r in self.V:
            r[i], r[j] = r[j], r[i]

    def row_addmul(self, i, j, c):
        p = self.p
        Si, Sj = self.S[i], self.S[j]
        for t in range(self.m):
            v = Sj[t]
            if v:
                Si[t] = (Si[t] + c * v) % p
        Ui, Uj = self.U[i], self.U[j]
        for t in range(self.n):
            v = Uj[t]
            if v:
                Ui[t] = (Ui[t] + c * v) % p
        for r in self.Uinv:
            v = r[i]
            if v:
                r[j] = (r[j] - c * v) % p

    def col_addmul(self, j, i, c):
        p = self.p
        for r in self.S:
            v = r[i]
            if v:
                r[j] = (r[j] + c * v) % p
        for r in self.V:
            v = r[i]
            if v:
                r[j] = (r[j] + c * v) % p

    def row_scale(self, i, u):
        p = self.p
        uinv = pow(u, -1, p)
        self.S[i] = [u * x % p for x in self.S[i]]
        self.U[i] = [u * x % p for x in self.U[i]]
        for r in self.Uinv:
            r[i] = r[i] * uinv % p

    def pivot_in(self, t):
        for i in range(t, self.n):
            row = self.S[i]
            for j in range(t, self.m):
                if row[j]:
                    return (1, i, j)
        return None

    def reduce_at(self, t):
        S = self.S
        p = self.p
        piv = S[t][t]
        pinv = pow(piv, -1, p)
        for i in range(self.n):
            x = S[i][t]
            if i != t and x:
                self.row_addmul(i, t, (-x * pinv) % p)
        row_t = S[t]
        for j in range(self.m):
            x = row_t[j]
            if j != t and x:
                self.col_addmul(j, t, (-x * pinv) % p)


def _smith_ext(A: Matrix):
    """(U, S, V, Uinv) with U A V = S.  See SmithDecomposition for the S contract.

    The decomposition is cached on the matrix, so repeated rank / solve /
    kernel questions about one matrix only eliminate once.
    """
    if A._snf is not None:
        return A._snf
    kind = A.ring.kind
    if kind == "integers":
        w = _IntWorker(A)
    elif kind == "prime-field":
        w = _FieldIntWorker(A)
    else:
        w = _Worker(A)
    ring = A.ring
    t = 0
    limit = min(w.n, w.m)
    while t < limit:
        best = w.pivot_in(t)
        if best is None:
            break
        _, i, j = best
        if i != t:
            w.row_swap(i, t)
        if j != t:
            w.col_swap(j, t)
        w.reduce_at(t)
        t += 1
    rank = t
    # enforce the divisibility chain d1 | d2 | ... (vacuous over a field)
    done = ring.is_field
    while not done:
        done = True
        for i in range(rank):
            for j in range(i + 1, rank):
                if ring.try_divide(w.S[j][j], w.S[i][i]) is None:
                    w.col_addmul(i, j, ring.one)
                    w.reduce_at(i)
                    done = False
    # canonical associates on the diagonal
    for i in range(rank):
        u, c = ring.canonical_factor(w.S[i][i])
        if u != ring.one:
            w.row_scale(i, ring.unit_inverse(u))
    U = Matrix.from_rows(ring, w.U) if w.n else Matrix(ring, 0, 0, [])
    S = Matrix.from_rows(ring, w.S) if w.n else Matrix(ring, 0, w.m, [])
    V = Matrix.from_rows(ring, w.V) if w.m else Matrix(ring, 0, 0, [])
    Uinv = Matrix.from_rows(ring, w.Uinv) if w.n else Matrix(ring, 0, 0, [])
    A._snf = (U, S, V, Uinv)
    return A._snf


def smith(A: Matrix) -> SmithDecomposition:
    U, S, V, _ = _smith_ext(A)
    return SmithDecomposition(A.ring, U, S, V)


def rank(A: Matrix) -> int:
    return smith(A).rank


def solve(A: Matrix, B: Matrix):
    """X with A @ X == B, or None.  Deterministic: free coordinates are zero."""
    if A.rows != B.rows:
        raise ShapeError("solve: row mismatch")
    U, S, V, _ = _smith_ext(A)
    return _solve_prepared(A.ring, U, S, V, B)


def _solve_prepared(ring, U, S, V, B):
    C = U @ B
    k = B.cols
    m = V.rows
    Y = [[ring.zero] * k for _ in range(m)]
    r = 0
    for i in range(min(S.rows, S.cols)):
        if not ring.is_zero(S.get(i, i)):
            r += 1
    for i in range(r):
        d = S.get(i, i)
        for j in range(k):
            q = ring.try_divide(C.get(i, j), d)
            if q is None:
                return None
            Y[i][j] = q
    for i in range(r, S.rows):
        for j in range(k):
            if not ring.is_zero(C.get(i, j)):
                return None
    Ymat = Matrix.from_rows(ring, Y) if m else Matrix(ring, 0, k, [])
    return V @ Ymat


def kernel_basis(A: Matrix) -> Matrix:
    """Columns form a basis of {x : A x = 0} (the full kernel, saturated over a PID)."""
    U, S, V, _ = _smith_ext(A)
    ring = A.ring
    r = 0
    for i in range(min(S.rows, S.cols)):
        if not ring.is_zero(S.get(i, i)):
            r += 1
    return V.submatrix(0, V.rows, r, V.cols)


def column_space_basis(A: Matrix) -> Matrix:
    """Columns form a basis of the column span (image lattice) of A."""
    U, S, V, Uinv = _smith_ext(A)
    ring = A.ring
    cols = []
    for i in range(min(S.rows, S.cols)):
        d = S.get(i, i)
        if ring.is_zero(d):
            break
        cols.append([ring.mul(Uinv.get(t, i), d) for t in range(A.rows)])
    out = [[cols[j][i] for j in range(len(cols))] for i in range(A.rows)]
    return Matrix.from_rows(ring, out) if A.rows else Matrix(ring, 0, len(cols), [])


def det(A: Matrix):
    """Fraction-free Bareiss determinant; exact over every shipped ring."""
    if A.rows != A.cols:
        raise ShapeError("determinant of a non-square matrix")
    ring = A.ring
    n = A.rows
    if n == 0:
        return ring.one
    M = A.row_list()
    sign = False
    prev = ring.one
    for k in range(n - 1):
        piv = None
        for i in range(k, n):
            if not ring.is_zero(M[i][k]):
                piv = i
                break
        if piv is None:
            return ring.zero
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = not sign
        sub, mul = ring.sub, ring.mul
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = sub(mul(M[i][j], M[k][k]), mul(M[i][k], M[k][j]))
                q = ring.try_divide(num, prev)
                if q is None:
                    raise ArithmeticError("Bareiss exact division failed")
                M[i][j] = q
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return ring.neg(d) if sign else d


def rank_over_fractions(A: Matrix) -> int:
    """Rank by Gaussian elimination in the fraction field.

    Independent of the Smith route: works on Fractions (for integer input) or
    directly in the field; shares nothing with _smith_ext.
    """
    ring = A.ring
    if ring == ZZ:
        rows = [[Fraction(x) for x in A.entries[i * A.cols:(i + 1) * A.cols]]
                for i in range(A.rows)]
        is_zero = lambda x: x == 0
        div = lambda a, b: a / b
        sub = lambda a, b: a - b
        mul = lambda a, b: a * b
    elif ring.is_field:
        rows = A.row_list()
        is_zero = ring.is_zero
        div = lambda a, b: ring.mul(a, ring.unit_inverse(b))
        sub = ring.sub
        mul = ring.mul
    else:
        raise ShapeError("fraction-field rank needs the integers or a field")
    r = 0
    ncols = A.cols
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        for i in range(r + 1, len(rows)):
            if not is_zero(rows[i][c]):
                f = div(rows[i][c], prow[c])
                rows[i] = [sub(x, mul(f, p)) for x, p in zip(rows[i], prow)]
        r += 1
        if r == len(rows):
            break
    return r
