"""Dense exact linear algebra over :class:`~spectralcalc.scalar.Scalar`.

Matrices are lists of rows, vectors are lists.  Every routine is deterministic:
pivots are taken left to right, top to bottom, so echelon bases depend only on
the order of the input rows.
"""

from __future__ import annotations

from typing import Sequence

from .scalar import ONE, ZERO, Scalar

Vector = list
Matrix = list


def zeros(m: int, n: int) -> Matrix:
    return [[ZERO] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b) if b else []
    return [[dot(row, col) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence[Scalar]) -> Vector:
    return [dot(row, v) for row in a]


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    total = ZERO
    for x, y in zip(u, v):
        if x and y:
            total = total + x * y
    return total


def add(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    return [x + y for x, y in zip(u, v)]


def sub(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    return [x - y for x, y in zip(u, v)]


def scale(c: Scalar, v: Sequence[Scalar]) -> Vector:
    return [c * x for x in v]


def conj(a):
    """Entrywise conjugate of a vector or matrix."""
    if a and isinstance(a[0], list):
        return [[x.conjugate() for x in row] for row in a]
    return [x.conjugate() for x in a]


def is_zero(v) -> bool:
    if v and isinstance(v[0], list):
        return all(not x for row in v for x in row)
    return all(not x for x in v)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [add(r, s) for r, s in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [sub(r, s) for r, s in zip(a, b)]


def mat_scale(c: Scalar, a: Matrix) -> Matrix:
    return [scale(c, r) for r in a]


def rref(rows: Matrix, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and the pivot columns."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((k for k in range(r, len(m)) if m[k][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        if inv != ONE:
            m[r] = [x * inv for x in m[r]]
        pivot_row = m[r]
        for k in range(len(m)):
            if k != r:
                f = m[k][c]
                if f:
                    m[k] = [x - f * y if y else x for x, y in zip(m[k], pivot_row)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Matrix) -> int:
    return len(rref(rows)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of ``{x : a x = 0}``, one vector per free column (free entry = 1)."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    red, pivots = rref(a, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence[Scalar]) -> Vector | None:
    """A particular solution of ``a x = b`` (free variables set to zero), or None."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


class Subspace:
    """Echelon basis of a subspace of ``Q(i)^dim`` with reduction and coordinates.

    ``basis`` keeps the spanning vectors in the order they were accepted, and
    :meth:`coordinates` expresses a member in terms of that basis.
    """

    def __init__(self, dim: int, vectors: Sequence[Sequence[Scalar]] = ()):
        self.dim = dim
        self.basis: list[Vector] = []
        # echelon rows, each with a pivot and its expression in ``basis``
        self._rows: list[tuple[int, Vector, Vector]] = []
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.basis)

    def _reduce(self, v):
        v = list(v)
        combo = [ZERO] * len(self.basis)
        for p, row, expr in self._rows:
            f = v[p]
            if f:
                v = [x - f * y if y else x for x, y in zip(v, row)]
                combo = [c + f * e if e else c for c, e in zip(combo, expr)]
        return v, combo

    def reduce(self, v: Sequence[Scalar]) -> Vector:
        """Residual of ``v`` modulo the subspace (zero iff ``v`` is a member)."""
        return self._reduce(v)[0]

    def contains(self, v: Sequence[Scalar]) -> bool:
        return is_zero(self.reduce(v))

    def add(self, v: Sequence[Scalar]) -> bool:
        """Append ``v`` to the basis if it is independent; return whether it was."""
        res, combo = self._reduce(v)
        p = next((k for k, x in enumerate(res) if x), None)
        if p is None:
            return False
        self.basis.append(list(v))
        inv = res[p].inverse()
        row = [x * inv for x in res]
        # res = v - sum(combo_j basis_j), so row = (e_new - combo) * inv in basis terms
        expr = [(-c) * inv for c in combo] + [inv]
        for idx, (q, r, e) in enumerate(self._rows):
            e = e + [ZERO]
            f = r[p]
            if f:
                r = [x - f * y if y else x for x, y in zip(r, row)]
                e = [x - f * y if y else x for x, y in zip(e, expr)]
            self._rows[idx] = (q, r, e)
        self._rows.append((p, row, expr))
        return True

    def coordinates(self, v: Sequence[Scalar]) -> Vector | None:
        """Coefficients of ``v`` in ``basis``, or None if ``v`` is not a member."""
        res, combo = self._reduce(v)
        if not is_zero(res):
            return None
        return combo
