"""Compatible metrics, fundamental forms and Kähler nonexistence certificates.

A metric is determined by ``g_ij = g(e_i (x) e_j)``; the unknowns are the
values ``g_ij(x)`` indexed by ``u = (i*r + j)*n + x``.  The bimodule and
compatibility conditions are linear in these unknowns and only couple values
at the same point, so the compatible metrics form an A-module.

For rank 2 this makes the Kähler question linear: every nondegenerate
compatible ``g`` can be rescaled by the unit ``det(g)^-1`` to a compatible
``g'`` whose adjugate is ``g^-1``.  Hence a Kähler metric exists iff some
compatible ``g'`` with unit determinant has ``d omega(adj g') = 0``, and the
latter is a linear condition on ``g'``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import linalg
from .algebra import AlgebraElement, Conjugate, NotAUnit, NotAUnitError, PointSet
from .calculus import ConnesCalculus, Form
from .complex_structures import AcsMatrix, PqSpace, extend_and_pq, verify_acs
from .scalar import ONE, ZERO, Scalar
from .triple import GraphTripleSpec, SpectralTriple


class EmptyFamily(Exception):
    pass


class NotInOneOne(Exception):
    pass


# ---------------------------------------------------------------------------
# metric matrices


@dataclass(frozen=True)
class MetricMatrix:
    """``entries[i][j] = g(e_i (x) e_j)`` (or ``h(e_i (x) conj(e_j))``)."""

    entries: tuple

    @classmethod
    def from_rows(cls, rows) -> MetricMatrix:
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_vector(cls, base: PointSet, r: int, v: Sequence[Scalar]) -> MetricMatrix:
        n = base.n
        return cls.from_rows([[AlgebraElement(base, v[(i * r + j) * n:(i * r + j + 1) * n]) for j in range(r)]
                              for i in range(r)])

    def vector(self) -> list[Scalar]:
        return [v for row in self.entries for x in row for v in x.values]

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def base(self) -> PointSet:
        return self.entries[0][0].base

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def det(self) -> AlgebraElement:
        r = self.rank
        total = AlgebraElement.zero(self.base)
        for perm in itertools.permutations(range(r)):
            term = AlgebraElement.constant(self.base, _sign(perm))
            for i, j in enumerate(perm):
                term = term * self.entries[i][j]
            total = total + term
        return total

    def adjugate(self) -> MetricMatrix:
        r = self.rank
        if r == 1:
            return MetricMatrix.from_rows([[AlgebraElement.constant(self.base, 1)]])
        rows = []
        for i in range(r):
            row = []
            for j in range(r):
                minor = MetricMatrix.from_rows([[self.entries[a][b] for b in range(r) if b != i]
                                                for a in range(r) if a != j])
                row.append(minor.det() * (-1 if (i + j) % 2 else 1))
            rows.append(row)
        return MetricMatrix.from_rows(rows)

    def matmul(self, other: MetricMatrix) -> MetricMatrix:
        r = self.rank
        return MetricMatrix.from_rows([[sum((self.entries[i][m] * other.entries[m][j] for m in range(r)),
                                            AlgebraElement.zero(self.base)) for j in range(r)] for i in range(r)])

    def scale(self, f) -> MetricMatrix:
        return MetricMatrix.from_rows([[x * f for x in row] for row in self.entries])

    def __add__(self, other):
        return MetricMatrix.from_rows([[x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def is_identity(self) -> bool:
        return all(self.entries[i][j] == (1 if i == j else 0) for i in range(self.rank) for j in range(self.rank))

    def to_json(self):
        return [[x.to_json() for x in row] for row in self.entries]

    def pretty(self) -> str:
        return "[" + ", ".join("[" + ", ".join(x.pretty() for x in row) + "]" for row in self.entries) + "]"

    def __repr__(self):
        return f"MetricMatrix({self.pretty()})"


def _sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def _unknown_labels(r: int, base: PointSet, name="g") -> list[str]:
    return [f"{name}{i + 1}{j + 1}({base.labels[x]})" for i in range(r) for j in range(r) for x in range(base.n)]


# ---------------------------------------------------------------------------
# constraint systems


def _left_coeff(calc: ConnesCalculus, f: AlgebraElement, j: int, m: int) -> AlgebraElement:
    """Coefficient of ``e_m`` in the right expansion of ``f e_j``."""
    return calc.move_left_to_right(f, j)[m]


def _conj_left_coeff(calc: ConnesCalculus, f: AlgebraElement, j: int, m: int) -> AlgebraElement:
    """Coefficient of ``conj(e_m)`` in ``f . conj(e_j) = conj(e_j f*)``."""
    return calc.move_right_to_left(f.involution(), j)[m].involution()


def metric_constraints(calc: ConnesCalculus, hermitian: bool = False) -> tuple[list, list]:
    """Rows for ``g(chi_k e_i (x) e_j) = chi_k g_ij``; returns ``(rows, labels)``."""
    r, n = calc.rank, calc.n
    table = calc.bimodule_table()
    move = _conj_left_coeff if hermitian else _left_coeff
    N = r * r * n
    rows, labels = [], []
    for k in range(n):
        for i in range(r):
            for j in range(r):
                # sum_{m,l} g_ml * move(c_mki)_{lj}
                coeffs = {}
                for m in range(r):
                    c = table[m][k][i]
                    if not c:
                        continue
                    for l in range(r):
                        coeffs[(m, l)] = move(calc, c, j, l)
                for x in range(n):
                    row = [ZERO] * N
                    for (m, l), f in coeffs.items():
                        row[(m * r + l) * n + x] += f[x]
                    if k == x:
                        row[(i * r + j) * n + x] -= ONE
                    if any(row):
                        rows.append(row)
                        labels.append(f"left linearity chi{k + 1}, ({i + 1},{j + 1}) at point {x + 1}")
    return rows, labels


def compatibility_constraints(calc: ConnesCalculus, J: AcsMatrix, hermitian: bool = False) -> tuple[list, list]:
    """Rows for ``g(J e_i (x) J e_j) = g_ij`` (or ``h(J e_i (x) Jbar conj(e_j)) = h_ij``)."""
    r, n = calc.rank, calc.n
    N = r * r * n
    base = calc.base
    move = _conj_left_coeff if hermitian else _left_coeff
    if hermitian:
        # Jbar conj(e_j) = conj(J e_j) = sum_m conj(e_m) K[m][j]
        K = [[AlgebraElement.zero(base) for _ in range(r)] for _ in range(r)]
        for j in range(r):
            for l in range(r):
                left = calc.move_right_to_left(J[l, j], l)
                for m in range(r):
                    K[m][j] = K[m][j] + left[m].involution()
    else:
        K = [[J[m, j] for j in range(r)] for m in range(r)]
    rows, labels = [], []
    for i in range(r):
        for j in range(r):
            # sum_{k,m} g(e_k (x) J_ki . e_m) K_mj = sum_{k,m,l} g_kl move(J_ki)_{lm} K_mj
            terms = {}
            for k in range(r):
                for m in range(r):
                    for l in range(r):
                        f = move(calc, J[k, i], m, l) * K[m][j]
                        if f:
                            terms[(k, l)] = terms.get((k, l), AlgebraElement.zero(base)) + f
            for x in range(n):
                row = [ZERO] * N
                for (k, l), f in terms.items():
                    row[(k * r + l) * n + x] += f[x]
                row[(i * r + j) * n + x] -= ONE
                if any(row):
                    rows.append(row)
                    labels.append(f"compatibility ({i + 1},{j + 1}) at point {x + 1}")
    return rows, labels


@dataclass
class MetricFamily:
    """All solutions ``g = sum_k t_k basis[k]`` of the linear conditions."""

    basis: list[MetricMatrix]
    rows: list
    labels: list
    hermitian: bool = False
    notes: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def parameters(self) -> list[str]:
        return [f"t{k + 1}" for k in range(len(self.basis))]

    def member(self, coeffs: Sequence) -> MetricMatrix:
        v = [ZERO] * len(self.basis[0].vector())
        for c, b in zip(coeffs, self.basis):
            v = linalg.add(v, linalg.scale(Scalar.parse(c) if isinstance(c, str) else c, b.vector()))
        return MetricMatrix.from_vector(self.basis[0].base, self.basis[0].rank, v)

    def nondegeneracy(self) -> str:
        return "det[g_ij] = g11 g22 - g12 g21 must be a unit of A (no zero component)"


NOTES = ["only the bimodule, nondegeneracy and compatibility conditions are imposed; "
         "metric values need not be self-adjoint or positive"]


def solve_compatible_metrics(calc: ConnesCalculus, J: AcsMatrix, hermitian: bool = False) -> MetricFamily:
    m_rows, m_labels = metric_constraints(calc, hermitian)
    c_rows, c_labels = compatibility_constraints(calc, J, hermitian)
    rows, labels = m_rows + c_rows, m_labels + c_labels
    r, n = calc.rank, calc.n
    N = r * r * n
    basis = linalg.nullspace(rows, N) if rows else linalg.identity(N)
    if not basis:
        raise EmptyFamily("only the zero form satisfies the linear conditions")
    fam = [MetricMatrix.from_vector(calc.base, r, v) for v in basis]
    return MetricFamily(fam, rows, labels, hermitian, list(NOTES))


def metric_residuals(rows, g: MetricMatrix) -> list[Scalar]:
    return linalg.matvec(rows, g.vector())


# ---------------------------------------------------------------------------
# evaluation on forms


def metric_pair(calc: ConnesCalculus, g: MetricMatrix, xi: Form, eta: Form) -> AlgebraElement:
    """``g(xi (x) eta)`` computed by moving right coefficients of ``xi`` across."""
    r = calc.rank
    total = AlgebraElement.zero(calc.base)
    for i, a in enumerate(calc.right_coords(xi)):
        b = calc.right_coords(a * eta)
        for l in range(r):
            total = total + g[i, l] * b[l]
    return total


def hermitian_pair(calc: ConnesCalculus, h: MetricMatrix, xi: Form, eta_bar: Conjugate) -> AlgebraElement:
    """``h(xi (x) conj(eta))``; conj(eta) has right coordinates ``conj`` of eta's left ones."""
    r = calc.rank
    total = AlgebraElement.zero(calc.base)
    for i, a in enumerate(calc.right_coords(xi)):
        moved = a * eta_bar  # a . conj(eta) = conj(eta a*)
        b = [f.involution() for f in calc.left_coords(moved.bar())]
        for l in range(r):
            total = total + h[i, l] * b[l]
    return total


# ---------------------------------------------------------------------------
# inverse metric and fundamental form


@dataclass(frozen=True)
class InverseMetric:
    """``sum_i e_i (x) (sum_j e_j G[j][i])`` with ``G = [g^{ji}]``."""

    G: MetricMatrix

    def legs(self, calc: ConnesCalculus) -> list[tuple[Form, Form]]:
        r = self.G.rank
        return [(calc.e(i + 1), calc.from_right([self.G[j, i] for j in range(r)])) for i in range(r)]


def metric_inverse(g: MetricMatrix) -> InverseMetric:
    det = g.det()
    inv = det.try_invert()
    if isinstance(inv, NotAUnit):
        raise NotAUnitError(inv)
    return InverseMetric(g.adjugate().scale(inv))


def _omega_from(calc: ConnesCalculus, G: MetricMatrix, pq: PqSpace) -> Form:
    omega = calc.zero(2)
    for first, second in InverseMetric(G).legs(calc):
        left = pq.apply(pq.project(1, 0, first))
        right = pq.project(0, 1, second)
        omega = omega + left.wedge(right)
    return omega


def fundamental_form(g: MetricMatrix, J: AcsMatrix, pq: PqSpace) -> Form:
    """``wedge (J (x) id)(pi^{1,0} (x) pi^{0,1})`` of the inverse metric."""
    omega = _omega_from(pq.calc, metric_inverse(g).G, pq)
    if not pq.apply(omega).is_zero():
        raise NotInOneOne("fundamental form is not of type (1,1)")
    return omega


def kahler_check(omega: Form) -> Form:
    """``d omega``; the metric is Kähler iff this vanishes."""
    return omega.d()


def inverse_representative(g: MetricMatrix) -> MetricMatrix:
    """A matrix linear in ``g`` that is ``g^-1`` after rescaling ``g`` by a unit."""
    if g.rank > 2:
        raise NotImplementedError("the linear Kähler reduction is implemented for rank <= 2")
    if g.rank == 1:
        return g
    return g.adjugate()


def kahler_rows(calc: ConnesCalculus, pq: PqSpace) -> list:
    """Matrix of the linear map ``g -> d omega(inverse_representative(g))``."""
    r, n = calc.rank, calc.n
    N = r * r * n
    cols = []
    for u in range(N):
        e = [ONE if k == u else ZERO for k in range(N)]
        G = inverse_representative(MetricMatrix.from_vector(calc.base, r, e))
        cols.append(_omega_from(calc, G, pq).d().coords)
    dim3 = calc.dim(3)
    return [[col[k] for col in cols] for k in range(dim3)]


# ---------------------------------------------------------------------------
# certificates


def det_quadratic(base: PointSet, r: int, vectors: Sequence[Sequence[Scalar]]) -> list[dict]:
    """Per point, coefficients of ``det(sum_a u_a v_a)`` as ``{(a, b): c}`` with ``a <= b``."""
    mats = [MetricMatrix.from_vector(base, r, v) for v in vectors]
    out = []
    for x in range(base.n):
        coeffs = {}
        k = len(mats)
        diag = [m.det()[x] for m in mats]
        for a in range(k):
            if diag[a]:
                coeffs[(a, a)] = diag[a]
            for b in range(a + 1, k):
                c = (mats[a] + mats[b]).det()[x] - diag[a] - diag[b]
                if c:
                    coeffs[(a, b)] = c
        out.append(coeffs)
    return out


@dataclass
class NoKahlerCertificate:
    triple: GraphTripleSpec
    structure: AcsMatrix
    label: str
    unknowns: list[str]
    rows: list
    row_kinds: list[str]
    solution_basis: list
    det: list[dict]
    witness_points: list[int]
    family_dimension: int
    notes: list[str]

    kind = "no-kahler"

    def __bool__(self):
        # truthy: the certificate asserts that no Kähler metric exists
        return True

    def to_json(self) -> dict:
        return {
            "kind": "no-kahler-certificate",
            "version": 1,
            "triple": self.triple.to_json(),
            "structure": {"label": self.label, "matrix": self.structure.to_json()},
            "unknowns": self.unknowns,
            "system": {
                "row_kinds": self.row_kinds,
                "rows": [[str(x) for x in row] for row in self.rows],
            },
            "compatible_family_dimension": self.family_dimension,
            "solution_basis": [[str(x) for x in v] for v in self.solution_basis],
            "det": [{"point": self.triple.base.labels[x],
                     "coefficients": [[a + 1, b + 1, str(c)] for (a, b), c in sorted(q.items())]}
                    for x, q in enumerate(self.det)],
            "witness": {"points": [self.triple.base.labels[x] for x in self.witness_points],
                        "claim": "det vanishes identically at these points on the whole solution space"},
            "notes": self.notes,
        }


@dataclass
class KahlerMetric:
    """A nondegenerate compatible metric with ``d omega = 0``."""

    structure: AcsMatrix
    metric: MetricMatrix
    omega: Form

    kind = "kahler"

    def __bool__(self):
        return False


def kahler_search_certificate(calc: ConnesCalculus, J: AcsMatrix, label: str = "",
                              pq: PqSpace | None = None):
    """Decide whether J admits a compatible Kähler metric.

    Returns a :class:`NoKahlerCertificate` or a verified :class:`KahlerMetric`.
    """
    if pq is None:
        pq = extend_and_pq(J, calc, 3)
    r, n = calc.rank, calc.n
    N = r * r * n
    m_rows, _ = metric_constraints(calc)
    c_rows, _ = compatibility_constraints(calc, J)
    k_rows = [row for row in kahler_rows(calc, pq) if any(row)]
    _check_pointwise(m_rows + c_rows, r, n)
    family = linalg.nullspace(m_rows + c_rows, N) if (m_rows or c_rows) else linalg.identity(N)

    rows = m_rows + c_rows + k_rows
    kinds = ["metric"] * len(m_rows) + ["compatibility"] * len(c_rows) + ["kahler"] * len(k_rows)
    solution = linalg.nullspace(rows, N)
    det = det_quadratic(calc.base, r, solution)
    witness = [x for x in range(n) if not det[x]]
    if witness:
        notes = list(NOTES) + [
            "the linear conditions only couple values at a single point, so compatible metrics form an "
            "A-module; rescaling by det(g)^-1 turns any nondegenerate g into a compatible g' with "
            "adj(g') = g^-1, so the Kähler condition is imposed on adj(g')",
        ]
        return NoKahlerCertificate(calc.triple.spec, J, label, _unknown_labels(r, calc.base), rows, kinds,
                                   solution, det, witness, len(family), notes)

    # some point-free combination has unit determinant: search small integers
    for coeffs in itertools.product(range(-2, 3), repeat=len(solution)):
        v = [ZERO] * N
        for c, s in zip(coeffs, solution):
            v = linalg.add(v, linalg.scale(Scalar(c), s))
        gp = MetricMatrix.from_vector(calc.base, r, v)
        inv = gp.det().try_invert()
        if isinstance(inv, NotAUnit):
            continue
        # rank 2: g = g'/det(g') has inverse adj(g'); rank 1: g' itself is the inverse
        g = gp.scale(inv) if r == 2 else MetricMatrix.from_rows([[inv]])
        omega = fundamental_form(g, J, pq)
        if kahler_check(omega).is_zero():
            return KahlerMetric(J, g, omega)
    raise AssertionError("no vanishing point found but no unit-determinant solution either")


def _check_pointwise(rows, r, n):
    for row in rows:
        pts = {u % n for u, c in enumerate(row) if c}
        if len(pts) > 1:
            raise AssertionError("metric conditions couple different points; the A-module reduction fails")


@dataclass
class CertificateCheck:
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok


def verify_certificate(data: dict | str | Path) -> CertificateCheck:
    """Re-check a certificate without re-solving any system.

    The triple, calculus and constraint rows are rebuilt; the stored solution
    basis and determinant data are then checked by substitution.
    """
    if not isinstance(data, dict):
        data = json.loads(Path(data).read_text())
    failures: list[str] = []
    try:
        spec = GraphTripleSpec.from_json(data["triple"])
        calc = ConnesCalculus(SpectralTriple(spec))
        base = spec.base
        J = AcsMatrix.from_json(base, data["structure"]["matrix"])
        rows = [[Scalar.parse(x) for x in row] for row in data["system"]["rows"]]
        kinds = data["system"]["row_kinds"]
        basis = [[Scalar.parse(x) for x in v] for v in data["solution_basis"]]
        r, n = calc.rank, calc.n
        N = r * r * n
    except (KeyError, TypeError, ValueError) as exc:
        return CertificateCheck([f"malformed certificate: {exc}"])

    check = verify_acs(J, calc)
    if not check:
        failures.append(f"structure is not an almost complex structure: {check.violation}")
        return CertificateCheck(failures)
    if any(len(row) != N for row in rows) or any(len(v) != N for v in basis) or len(kinds) != len(rows):
        failures.append("row or vector lengths do not match the unknowns")
        return CertificateCheck(failures)

    # the stored system must be exactly the one generated from the data
    pq = extend_and_pq(J, calc, 3)
    m_rows, _ = metric_constraints(calc)
    c_rows, _ = compatibility_constraints(calc, J)
    k_rows = [row for row in kahler_rows(calc, pq) if any(row)]
    expected = m_rows + c_rows + k_rows
    expected_kinds = ["metric"] * len(m_rows) + ["compatibility"] * len(c_rows) + ["kahler"] * len(k_rows)
    if kinds != expected_kinds:
        failures.append("row kinds differ from the regenerated system")
    for idx, (got, want) in enumerate(zip(rows, expected)):
        if got != want:
            col = next(c for c, (a, b) in enumerate(zip(got, want)) if a != b)
            failures.append(f"system row {idx + 1} ({kinds[idx]}) differs at unknown {col + 1}: "
                            f"{got[col]} != {want[col]}")
            break
    if len(rows) != len(expected):
        failures.append(f"system has {len(rows)} rows, expected {len(expected)}")
    try:
        _check_pointwise(m_rows + c_rows, r, n)
    except AssertionError as exc:
        failures.append(str(exc))

    # substitution: every basis vector solves every row
    for a, v in enumerate(basis):
        for idx, row in enumerate(rows):
            val = linalg.dot(row, v)
            if val:
                failures.append(f"solution vector {a + 1} violates row {idx + 1} ({kinds[idx]}): residual {val}")
                break
    # completeness: rank + nullity = number of unknowns
    rk, nb = linalg.rank(rows), linalg.rank(basis) if basis else 0
    if nb != len(basis):
        failures.append("solution basis vectors are linearly dependent")
    if rk + nb != N:
        failures.append(f"rank {rk} + basis size {nb} != {N} unknowns: basis does not span the solutions")

    # witnesses: det vanishes on every basis vector and every pairwise sum
    labels = list(base.labels)
    points = data.get("witness", {}).get("points", [])
    if not points:
        failures.append("no witness point given")
    for p in points:
        if p not in labels:
            failures.append(f"unknown witness point {p!r}")
            continue
        x = labels.index(p)
        for a in range(len(basis)):
            for b in range(a, len(basis)):
                v = basis[a] if a == b else linalg.add(basis[a], basis[b])
                val = MetricMatrix.from_vector(base, r, v).det()[x]
                if val:
                    failures.append(f"det at point {p} is {val} on basis combination ({a + 1},{b + 1})")
    stored_det = data.get("det", [])
    recomputed = det_quadratic(base, r, basis)
    for entry, q in zip(stored_det, recomputed):
        want = [[a + 1, b + 1, str(c)] for (a, b), c in sorted(q.items())]
        if entry.get("coefficients") != want:
            failures.append(f"stored det expression at point {entry.get('point')} does not match substitution")
    return CertificateCheck(failures)


# ---------------------------------------------------------------------------
# hermitian metrics


def solve_hermitian_metrics(calc: ConnesCalculus, J: AcsMatrix) -> MetricFamily:
    return solve_compatible_metrics(calc, J, hermitian=True)


def hermitian_induce(calc: ConnesCalculus, h: MetricMatrix, rows: list | None = None) -> MetricMatrix:
    """``g = h o (id (x) star)``, i.e. ``g_ij = h(e_i (x) conj(e_j*))``."""
    if rows is not None:
        res = metric_residuals(rows, h)
        if any(res):
            raise ValueError("h violates the hermitian bimodule conditions")
    r = calc.rank
    stars = [calc.left_coords(calc.e(j + 1).star()) for j in range(r)]  # e_j* = sum_m u_m e_m
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = AlgebraElement.zero(calc.base)
            for m in range(r):
                acc = acc + h[i, m] * stars[j][m].involution()
            row.append(acc)
        out.append(row)
    return MetricMatrix.from_rows(out)
