"""Almost complex structures on a Connes calculus with a free module of one-forms.

A first-order structure is stored as an r x r matrix of functions ``J[j][i]``
with ``J(e_i) = sum_j e_j J[j][i]``, extended right-linearly.  The defining
conditions become

* (L) left linearity ``J(chi_k e_j) = chi_k J(e_j)``: pointwise linear;
* (S) star compatibility ``J(xi*) = J(xi)*``: linear in ``J`` and ``conj(J)``;
* (Q) ``J^2 = -1``: pointwise quadratic.

:func:`solve_acs` eliminates (L)+(S) over the rationals (real and imaginary
parts as separate unknowns) and then case-splits the remaining quadratics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from . import linalg
from .algebra import AlgebraElement, PointSet, chi
from .calculus import ConnesCalculus, Form
from .scalar import I, ONE, ZERO, Scalar


class InfiniteSolutionFamily(Exception):
    """The constraint system does not reduce to finitely many rational points."""

    def __init__(self, message: str, parameters=(), assignment=None, remaining=()):
        super().__init__(message)
        self.parameters = tuple(parameters)
        self.assignment = assignment or {}
        self.remaining = tuple(remaining)


class NotWellDefined(Exception):
    def __init__(self, degree: int, witness):
        super().__init__(f"derivation extension does not descend to degree {degree}")
        self.degree = degree
        self.witness = witness


class NonDiagonalizable(Exception):
    def __init__(self, degree: int, found: int, dim: int):
        super().__init__(f"eigenspaces of J fill only {found} of {dim} dimensions in degree {degree}")
        self.degree, self.found, self.dim = degree, found, dim


class NotHomogeneous(ValueError):
    pass


# ---------------------------------------------------------------------------
# the matrix of a structure


@dataclass(frozen=True)
class AcsMatrix:
    entries: tuple  # entries[j][i]: AlgebraElement

    @classmethod
    def from_rows(cls, rows) -> AcsMatrix:
        return cls(tuple(tuple(row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def base(self) -> PointSet:
        return self.entries[0][0].base

    def __getitem__(self, ji):
        j, i = ji
        return self.entries[j][i]

    def __neg__(self) -> AcsMatrix:
        return AcsMatrix.from_rows([[-x for x in row] for row in self.entries])

    def scale(self, c) -> AcsMatrix:
        return AcsMatrix.from_rows([[x * c for x in row] for row in self.entries])

    def compose(self, other: AcsMatrix) -> AcsMatrix:
        r = self.rank
        base = self.base
        rows = []
        for a in range(r):
            row = []
            for b in range(r):
                acc = AlgebraElement.zero(base)
                for m in range(r):
                    acc = acc + self.entries[a][m] * other.entries[m][b]
                row.append(acc)
            rows.append(row)
        return AcsMatrix.from_rows(rows)

    def apply(self, coeffs: Sequence[AlgebraElement]) -> list[AlgebraElement]:
        """Right coefficients of ``J(sum_i e_i a_i)``."""
        r = self.rank
        out = []
        for j in range(r):
            acc = AlgebraElement.zero(self.base)
            for i in range(r):
                acc = acc + self.entries[j][i] * coeffs[i]
            out.append(acc)
        return out

    def key(self) -> tuple:
        return tuple(str(v) for row in self.entries for x in row for v in x.values)

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.entries]

    @classmethod
    def from_json(cls, base: PointSet, data) -> AcsMatrix:
        return cls.from_rows([[AlgebraElement.from_json(base, x) for x in row] for row in data])

    def pretty(self) -> str:
        rows = ["[" + ", ".join(x.pretty() for x in row) + "]" for row in self.entries]
        return "[" + ", ".join(rows) + "]"

    def __repr__(self):
        return f"AcsMatrix({self.pretty()})"


def acs_from_pattern(base: PointSet, rows, factor=I) -> AcsMatrix:
    """``factor * M`` where ``M`` is given by rows of value lists."""
    return AcsMatrix.from_rows([[AlgebraElement(base, vals) * factor for vals in row] for row in rows])


# ---------------------------------------------------------------------------
# constraints


@dataclass
class AcsSystem:
    """Constraint system in the unknowns ``z_u = J[j][i](x)``, ``u = (j*r + i)*n + x``.

    ``linear`` rows ``c`` mean ``sum_u c_u z_u = 0``; ``conjugate`` pairs
    ``(p, q)`` mean ``sum_u p_u z_u + q_u conj(z_u) = 0``; ``quadratic`` dicts
    map ``()``, ``(u,)`` or ``(u, v)`` to coefficients of a polynomial in z.
    Each equation has a label in the matching ``*_labels`` list.
    """

    rank: int
    n: int
    linear: list = field(default_factory=list)
    linear_labels: list = field(default_factory=list)
    conjugate: list = field(default_factory=list)
    conjugate_labels: list = field(default_factory=list)
    quadratic: list = field(default_factory=list)
    quadratic_labels: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return self.rank * self.rank * self.n

    def index(self, j: int, i: int, x: int) -> int:
        return (j * self.rank + i) * self.n + x

    def unpack(self, z: Sequence[Scalar], base: PointSet) -> AcsMatrix:
        r, n = self.rank, self.n
        return AcsMatrix.from_rows([[AlgebraElement(base, z[self.index(j, i, 0): self.index(j, i, 0) + n])
                                     for i in range(r)] for j in range(r)])

    def pack(self, J: AcsMatrix) -> list[Scalar]:
        return [v for row in J.entries for x in row for v in x.values]

    def residuals(self, z: Sequence[Scalar]) -> dict[str, list]:
        """Values of every equation at ``z`` (all zero for a solution)."""
        zc = [x.conjugate() for x in z]
        out = {"L": [linalg.dot(row, z) for row in self.linear],
               "S": [linalg.dot(p, z) + linalg.dot(q, zc) for p, q in self.conjugate],
               "Q": [_eval_quadratic(eq, z) for eq in self.quadratic]}
        return out


def _eval_quadratic(eq: dict, z) -> Scalar:
    total = ZERO
    for mono, c in eq.items():
        term = c
        for u in mono:
            term = term * z[u]
        total = total + term
    return total


def acs_constraints(calc: ConnesCalculus) -> AcsSystem:
    r = calc.rank
    n = calc.n
    table = calc.bimodule_table()
    system = AcsSystem(r, n)
    N = system.size
    idx = system.index

    # (L): (J C_k)[l][j] = (C_k J)[l][j] pointwise, (C_k)[l][m] = table[l][k][m]
    for k in range(n):
        for l in range(r):
            for j in range(r):
                for x in range(n):
                    row = [ZERO] * N
                    for m in range(r):
                        row[idx(l, m, x)] += table[m][k][j][x]
                        row[idx(m, j, x)] -= table[l][k][m][x]
                    if any(row):
                        system.linear.append(row)
                        system.linear_labels.append(f"J(chi{k + 1} e{j + 1}) = chi{k + 1} J(e{j + 1}), e{l + 1}-coefficient at point {x + 1}")

    # (S): J(e_i*) = J(e_i)* with e_i* = sum_m e_m sigma[m][i]
    sigma = [calc.right_coords(calc.e(i + 1).star()) for i in range(r)]  # sigma[i][m]
    for i in range(r):
        for j in range(r):
            for x in range(n):
                p = [ZERO] * N
                q = [ZERO] * N
                for m in range(r):
                    p[idx(j, m, x)] += sigma[i][m][x]
                # sum_{m,l} sum_k conj(J[m][i](k)) table[j][k][l](x) sigma[m][l](x)
                for m in range(r):
                    for l in range(r):
                        s = sigma[m][l][x]
                        if not s:
                            continue
                        for k in range(n):
                            c = table[j][k][l][x]
                            if c:
                                q[idx(m, i, k)] -= c * s
                if any(p) or any(q):
                    system.conjugate.append((p, q))
                    system.conjugate_labels.append(f"J(e{i + 1}*) = J(e{i + 1})*, e{j + 1}-coefficient at point {x + 1}")

    # (Q): sum_m J[a][m] J[m][b] + delta_ab = 0 pointwise
    for a in range(r):
        for b in range(r):
            for x in range(n):
                eq: dict = {}
                for m in range(r):
                    key = tuple(sorted((idx(a, m, x), idx(m, b, x))))
                    eq[key] = eq.get(key, ZERO) + ONE
                if a == b:
                    eq[()] = ONE
                system.quadratic.append(eq)
                system.quadratic_labels.append(f"(J^2)[{a + 1}][{b + 1}] = {'-1' if a == b else '0'} at point {x + 1}")
    return system


# ---------------------------------------------------------------------------
# solving


def _real_linear_rows(system: AcsSystem) -> list:
    """(L)+(S) as rational equations in ``(Re z_0, .., Re z_N-1, Im z_0, ..)``."""
    N = system.size
    rows = []

    def split(xcoef, ycoef):
        re_row = [Scalar(c.re) for c in xcoef] + [Scalar(c.re) for c in ycoef]
        im_row = [Scalar(c.im) for c in xcoef] + [Scalar(c.im) for c in ycoef]
        return re_row, im_row

    for row in system.linear:
        # c z = c x + (i c) y
        rows.extend(split(row, [I * c for c in row]))
    for p, q in system.conjugate:
        # p z + q conj(z) = (p + q) x + i (p - q) y
        rows.extend(split([a + b for a, b in zip(p, q)], [I * (a - b) for a, b in zip(p, q)]))
    return [r for r in rows if any(r)] or [[ZERO] * (2 * N)]


@dataclass
class AcsSolution:
    """Result of :func:`solve_acs`."""

    structures: list[AcsMatrix]
    parameters: int  # real parameters left after (L)+(S)
    parametrization: list  # complex N x k matrix: z = Z t
    dropped: list  # branches whose only solutions are irrational

    def __iter__(self):
        return iter(self.structures)

    def __len__(self):
        return len(self.structures)

    def __getitem__(self, k):
        return self.structures[k]


def linear_parametrization(system: AcsSystem) -> list:
    """Complex ``N x k`` matrix ``Z`` with (L)+(S) solutions ``z = Z t``, ``t`` real."""
    N = system.size
    basis = linalg.nullspace(_real_linear_rows(system), 2 * N)
    return [[b[u] + I * b[N + u] for b in basis] for u in range(N)]


def solve_acs(system: AcsSystem, base: PointSet, calc: ConnesCalculus | None = None) -> AcsSolution:
    """Enumerate every structure with entries in Q(i).

    Raises :class:`InfiniteSolutionFamily` when the quadratic stage leaves a
    free parameter or an irreducible multivariate equation.
    """
    Z = linear_parametrization(system)
    k = len(Z[0]) if Z else 0
    gens = sympy.symbols(f"t0:{k}", real=True) if k else ()

    polys = []
    for eq in system.quadratic:
        for part in _substitute_quadratic(eq, Z, k):
            if part:
                polys.append(sympy.Poly.from_dict(part, *gens, domain=sympy.QQ) if k else part)
    if k == 0:
        # only J = 0 satisfies (L)+(S); check it against (Q)
        zero = [ZERO] * system.size
        ok = all(not _eval_quadratic(eq, zero) for eq in system.quadratic)
        structures = [system.unpack(zero, base)] if ok else []
        return AcsSolution(structures, 0, Z, [])

    points, dropped = case_split(polys, gens)
    structures = []
    for pt in points:
        t = [Scalar(Fraction(int(v.p), int(v.q))) for v in pt]
        z = [linalg.dot(row, t) for row in Z]
        structures.append(system.unpack(z, base))
    structures = sorted({J.key(): J for J in structures}.values(), key=AcsMatrix.key)
    if calc is not None:
        for J in structures:
            check = verify_acs(J, calc)
            if not check:
                raise AssertionError(f"solver produced an invalid structure: {check.violation}")
    return AcsSolution(structures, k, Z, dropped)


def _substitute_quadratic(eq: dict, Z, k) -> tuple[dict, dict]:
    """Real and imaginary parts of ``eq(Z t)`` as rational monomial dicts in t."""
    out: dict = {}

    def bump(mono, c):
        exps = [0] * k
        for t in mono:
            exps[t] += 1
        key = tuple(exps)
        out[key] = out.get(key, ZERO) + c

    for mono, c in eq.items():
        if len(mono) == 0:
            bump((), c)
        elif len(mono) == 1:
            for a, za in enumerate(Z[mono[0]]):
                if za:
                    bump((a,), c * za)
        else:
            u, v = mono
            for a, za in enumerate(Z[u]):
                if not za:
                    continue
                for b, zb in enumerate(Z[v]):
                    if zb:
                        bump((a, b), c * za * zb)
    re = {m: c.re for m, c in out.items() if c.re}
    im = {m: c.im for m, c in out.items() if c.im}
    return re, im


def case_split(polys, gens):
    """Rational points of a polynomial system by elimination and factor splitting.

    Returns ``(points, dropped)``; ``points`` is a sorted list of value tuples
    in ``gens`` order, ``dropped`` lists irreducible univariate factors that
    have real but irrational roots.
    """
    gens = tuple(gens)
    points = set()
    dropped = []

    def rec(polys, assignment):
        live = []
        for p in polys:
            if p.is_zero:
                continue
            if p.is_ground:
                return
            live.append(p)
        if not live:
            free = [g for g in gens if g not in assignment]
            if free:
                raise InfiniteSolutionFamily(
                    f"{len(free)} real parameter(s) remain free", free, dict(assignment))
            points.add(tuple(sympy.Rational(assignment[g]) for g in gens))
            return
        live.sort(key=lambda p: (p.total_degree(), len(p.terms()), str(p.as_expr())))
        p = live[0]
        if p.total_degree() == 1:
            var = next(g for g in gens if p.degree(g) == 1)
            coeff = p.coeff_monomial(var)
            expr = -(p.as_expr() - coeff * var) / coeff
            rec([_subs(q, var, expr, gens) for q in live[1:]], _extend(assignment, var, expr))
            return
        for q in live:
            _, factors = q.factor_list()
            rest = [x for x in live if x is not q]
            if len(factors) > 1:
                for f, _ in sorted(factors, key=lambda fm: str(fm[0].as_expr())):
                    rec([f] + rest, assignment)
                return
            f, mult = factors[0]
            if mult > 1:
                rec([f] + rest, assignment)
                return
        # every equation is irreducible of degree >= 2
        for q in live:
            used = [g for g in gens if q.degree(g) > 0]
            if len(used) == 1:
                if sympy.Poly(q.as_expr(), used[0]).count_roots() > 0:
                    dropped.append(str(q.as_expr()))
                return
        raise InfiniteSolutionFamily(
            "irreducible multivariate equations remain", [g for g in gens if g not in assignment],
            dict(assignment), [str(q.as_expr()) for q in live])

    rec(list(polys), {})
    return sorted(points), dropped


def _subs(p, var, expr, gens):
    return sympy.Poly(p.as_expr().subs(var, expr), *gens, domain=sympy.QQ)


def _extend(assignment, var, expr):
    out = {g: sympy.sympify(v).subs(var, expr) for g, v in assignment.items()}
    out[var] = expr
    return out


# ---------------------------------------------------------------------------
# verification on operators


@dataclass(frozen=True)
class AcsViolation:
    condition: str
    location: str
    lhs: object
    rhs: object

    def __str__(self):
        def show(v):
            return v.pretty() if hasattr(v, "pretty") else str(v)
        return f"{self.condition} fails at {self.location}: {show(self.lhs)} != {show(self.rhs)}"


@dataclass(frozen=True)
class AcsCheck:
    violation: AcsViolation | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self):
        return self.ok


def acs_operator_matrix(J: AcsMatrix, calc: ConnesCalculus) -> list:
    """Matrix of J on the coordinate space of one-forms."""
    dim = calc.dim(1)
    cols = []
    for k in range(dim):
        a = calc.right_coords(calc.basis_form(1, k))
        cols.append(calc.from_right(J.apply(a)).coords)
    return [[col[r] for col in cols] for r in range(dim)]


def verify_acs(J: AcsMatrix, calc: ConnesCalculus) -> AcsCheck:
    """Check an r x r function matrix against the defining conditions.

    The first test is the matrix identity ``J J = -1`` over the algebra, which
    yields a readable witness; the remaining tests act on actual one-forms.
    """
    r = J.rank
    base = J.base
    sq = J.compose(J)
    for a in range(r):
        for b in range(r):
            want = AlgebraElement.constant(base, -1 if a == b else 0)
            if sq[a, b] != want:
                terms = " + ".join(f"({J[a, m].pretty()})({J[m, b].pretty()})" for m in range(r))
                return AcsCheck(AcsViolation("J^2 = -1", f"entry ({a + 1},{b + 1}) = {terms}", sq[a, b], want))

    dim = calc.dim(1)
    Jm = acs_operator_matrix(J, calc)
    J2 = linalg.matmul(Jm, Jm)
    for k in range(dim):
        col = [J2[row][k] for row in range(dim)]
        want = [-ONE if row == k else ZERO for row in range(dim)]
        if col != want:
            return AcsCheck(AcsViolation("J^2 = -1 on one-forms", f"coordinate direction {k + 1}", col, want))

    for x in range(calc.n):
        L = calc.left_multiplication_matrix(chi(base, x + 1))
        lhs, rhs = linalg.matmul(Jm, L), linalg.matmul(L, Jm)
        if lhs != rhs:
            return AcsCheck(AcsViolation("J(chi a) = chi J(a)", f"chi{x + 1}", lhs, rhs))

    S = calc.star_matrix(1)
    lhs, rhs = linalg.matmul(Jm, S), linalg.matmul(S, linalg.conj(Jm))
    if lhs != rhs:
        return AcsCheck(AcsViolation("J(xi*) = J(xi)*", "one-forms", lhs, rhs))
    return AcsCheck()


# ---------------------------------------------------------------------------
# extension to higher forms and (p, q) decomposition


@dataclass
class PqSpace:
    """J on each degree with its eigenspace decomposition.

    ``components[n][(p, q)]`` is a list of coordinate vectors spanning the
    (p, q)-forms; ``projections[n][(p, q)]`` is the matching projection.
    """

    J: AcsMatrix
    calc: ConnesCalculus
    max_degree: int
    matrices: dict = field(default_factory=dict)
    components: dict = field(default_factory=dict)
    projections: dict = field(default_factory=dict)

    def project(self, p: int, q: int, x: Form) -> Form:
        n = p + q
        if x.degree != n:
            raise ValueError("bidegree does not match the form degree")
        P = self.projections[n].get((p, q))
        if P is None:
            return self.calc.zero(n)
        return Form(self.calc, n, linalg.matvec(P, x.coords))

    def apply(self, x: Form) -> Form:
        return Form(self.calc, x.degree, linalg.matvec(self.matrices[x.degree], x.coords))

    def bidegree(self, x: Form) -> tuple[int, int]:
        n = x.degree
        for (p, q), P in self.projections[n].items():
            if list(linalg.matvec(P, x.coords)) == list(x.coords):
                return p, q
        raise NotHomogeneous(f"form is not of pure bidegree in degree {n}")

    def dims(self, n: int) -> dict:
        return {pq: len(v) for pq, v in self.components[n].items()}


def _product_maps(calc: ConnesCalculus, n: int, Jprev, J1):
    """Columns ``Q1_a ^ Q_b`` and the derivation ``J Q1_a ^ Q_b + Q1_a ^ J Q_b``."""
    d1, dp = calc.dim(1), calc.dim(n - 1)
    spec = calc.triple.spec
    from .triple import BlockOperator

    def op(p, coords):
        return BlockOperator.from_vector(spec, calc.space(p).lift(coords))

    ones = [op(1, [ONE if j == a else ZERO for j in range(d1)]) for a in range(d1)]
    lows = [op(n - 1, [ONE if j == b else ZERO for j in range(dp)]) for b in range(dp)]
    J1cols = [op(1, [J1[r][a] for r in range(d1)]) for a in range(d1)]
    Jpcols = [op(n - 1, [Jprev[r][b] for r in range(dp)]) for b in range(dp)]
    M, T, labels = [], [], []
    space = calc.space(n)
    for a in range(d1):
        for b in range(dp):
            M.append(space.reduce((ones[a] * lows[b]).vector()))
            T.append(space.reduce((J1cols[a] * lows[b] + ones[a] * Jpcols[b]).vector()))
            labels.append((a, b))
    return linalg.transpose(M), linalg.transpose(T), labels


def extend_structure(J: AcsMatrix, calc: ConnesCalculus, max_degree: int) -> dict:
    """Matrices of the derivation extension of J in degrees ``0..max_degree``."""
    mats = {0: linalg.zeros(calc.dim(0), calc.dim(0)), 1: acs_operator_matrix(J, calc)}
    for n in range(2, max_degree + 1):
        dim = calc.dim(n)
        if dim == 0:
            mats[n] = []
            continue
        M, T, labels = _product_maps(calc, n, mats[n - 1], mats[1])
        for k in linalg.nullspace(M, len(labels)):
            image = linalg.matvec(T, k)
            if not linalg.is_zero(image):
                relation = {f"Q1_{a + 1} ^ Q{n - 1}_{b + 1}": str(c) for (a, b), c in zip(labels, k) if c}
                raise NotWellDefined(n, relation)
        _, pivots = linalg.rref(M, len(labels))
        Msq = [[row[p] for p in pivots] for row in M]
        Tsq = [[row[p] for p in pivots] for row in T]
        mats[n] = linalg.matmul(Tsq, linalg.inverse(Msq))
    return mats


def extend_and_pq(J: AcsMatrix, calc: ConnesCalculus, max_degree: int | None = None) -> PqSpace:
    if max_degree is None:
        max_degree = calc.max_degree
    pq = PqSpace(J, calc, max_degree)
    pq.matrices = extend_structure(J, calc, max_degree)
    for n in range(0, max_degree + 1):
        dim = calc.dim(n)
        comps, cols = {}, []
        for p in range(n, -1, -1):
            q = n - p
            lam = I * (p - q)
            if dim:
                shifted = [[x - (lam if r == c else ZERO) for c, x in enumerate(row)]
                           for r, row in enumerate(pq.matrices[n])]
                vecs = linalg.nullspace(shifted, dim)
            else:
                vecs = []
            comps[(p, q)] = vecs
            cols.extend((p, q, v) for v in vecs)
        if len(cols) != dim:
            raise NonDiagonalizable(n, len(cols), dim)
        projections = {}
        if dim:
            V = linalg.transpose([v for _, _, v in cols])
            Vinv = linalg.inverse(V)
            for pqkey in comps:
                E = [[ONE if (r == c and (cols[r][0], cols[r][1]) == pqkey) else ZERO for c in range(dim)]
                     for r in range(dim)]
                projections[pqkey] = linalg.matmul(linalg.matmul(V, E), Vinv)
        else:
            projections = {key: [] for key in comps}
        pq.components[n] = comps
        pq.projections[n] = projections
    return pq


def del_delbar(x: Form, pq: PqSpace) -> tuple[Form, Form]:
    """``(pi^{p+1,q} dx, pi^{p,q+1} dx)`` for ``x`` of pure bidegree ``(p, q)``."""
    p, q = pq.bidegree(x)
    dx = x.calc.d(x)
    return pq.project(p + 1, q, dx), pq.project(p, q + 1, dx)


@dataclass(frozen=True)
class IntegrabilityResult:
    integrable: bool
    witness: dict | None = None

    def __bool__(self):
        return self.integrable


def integrability_check(J: AcsMatrix, pq: PqSpace) -> IntegrabilityResult:
    """Check that ``pi^{0,2} d`` vanishes on a basis of the (1,0)-forms."""
    calc = pq.calc
    if pq.max_degree < 2:
        raise ValueError("integrability needs the decomposition through degree 2")
    P02 = pq.projections[2].get((0, 2))
    for k, w in enumerate(pq.components[1][(1, 0)]):
        dw = calc.apply_d(1, w)
        bad = linalg.matvec(P02, dw) if P02 else []
        if not linalg.is_zero(bad) and bad:
            return IntegrabilityResult(False, {"basis_vector": k, "form": [str(c) for c in w],
                                               "pi02_d": [str(c) for c in bad]})
    return IntegrabilityResult(True)


# ---------------------------------------------------------------------------
# the structures printed for the three-point space


def printed_structures(base: PointSet) -> list[tuple[str, AcsMatrix]]:
    """The eight matrices listed for the triangle triple, exactly as printed."""
    if base.n != 3:
        raise ValueError("the printed list refers to three points")
    zero = [0, 0, 0]

    def lin(c0, *chis):
        vals = [c0] * 3
        for coef, k in chis:
            vals[k - 1] += coef
        return vals

    patterns = [
        [[lin(1, (-2, 3)), zero], [lin(0, (2, 1)), lin(-1, (2, 2))]],
        [[lin(1, (-2, 3)), lin(0, (-2, 2))], [lin(0, (2, 1)), lin(-1, (2, 3))]],
        [[lin(-1, (2, 1)), lin(0, (2, 2))], [zero, lin(1, (-2, 3))]],
        [[lin(0, (2, 1)), zero], [zero, lin(1, (-2, 2))]],
    ]
    out = []
    for k, pat in enumerate(patterns, start=1):
        out.append((f"pair {k} (+i)", acs_from_pattern(base, pat, I)))
        out.append((f"pair {k} (-i)", acs_from_pattern(base, pat, -I)))
    return out


def corrected_fourth_pair(base: PointSet) -> list[AcsMatrix]:
    """``+-i diag(2chi1 - 1, 1 - 2chi2)``, the structure the fourth printed pair misses."""
    pat = [[[1, -1, -1], [0, 0, 0]], [[0, 0, 0], [1, -1, 1]]]
    return [acs_from_pattern(base, pat, I), acs_from_pattern(base, pat, -I)]


@dataclass
class PrintedComparison:
    matched: list  # (label, index in solver output)
    rejected: list  # (label, AcsViolation)
    unmatched_solutions: list  # solver structures not in the printed list


def compare_with_printed(solutions: Sequence[AcsMatrix], calc: ConnesCalculus) -> PrintedComparison:
    keys = [J.key() for J in solutions]
    matched, rejected = [], []
    hit = set()
    for label, J in printed_structures(calc.base):
        if J.key() in keys:
            matched.append((label, keys.index(J.key())))
            hit.add(J.key())
        else:
            check = verify_acs(J, calc)
            rejected.append((label, check.violation))
    rest = [J for J in solutions if J.key() not in hit]
    return PrintedComparison(matched, rejected, rest)
