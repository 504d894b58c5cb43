import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from spectralcalc import linalg
from spectralcalc.algebra import AlgebraElement, chi, one
from spectralcalc.calculus import Form
from spectralcalc.complex_structures import (
    AcsMatrix, InfiniteSolutionFamily, acs_constraints, acs_from_pattern, case_split, compare_with_printed,
    corrected_fourth_pair, del_delbar, integrability_check, linear_parametrization, printed_structures, verify_acs,
)
from spectralcalc.scalar import I, ZERO, Scalar

from .conftest import BASE3, forms, scalars

C = [chi(BASE3, k) for k in (1, 2, 3)]
ONE3 = one(BASE3)


def family(a1, a2, b3):
    """Structure with parameters ``(a1, a2, b3)`` in the closed form."""
    j11 = AlgebraElement(BASE3, [a1, a2, -a1])
    j22 = AlgebraElement(BASE3, [-a2, -b3, b3])
    return AcsMatrix.from_rows([[j11, C[1] * (-a2 - b3)], [C[0] * (a1 + a2), j22]])


def form_level_check(J, calc):
    """Defining conditions tested directly on one-forms, without the operator matrix."""
    def act(x):
        return calc.from_right(J.apply(calc.right_coords(x)))
    for k in range(calc.dim(1)):
        x = calc.basis_form(1, k)
        if act(act(x)) != -x:
            return False
    for f in C:
        for j in (1, 2):
            if act(f * calc.e(j)) != f * act(calc.e(j)):
                return False
    return all(act(calc.e(j).star()) == act(calc.e(j)).star() for j in (1, 2))


def test_linear_subsystem_shape(calc):
    system = acs_constraints(calc)
    for v in linalg.nullspace(system.linear, system.size):
        J = system.unpack(v, BASE3)
        alpha, beta = J[1, 0][0], J[0, 1][1]
        assert J[1, 0] == C[0] * alpha and J[0, 1] == C[1] * beta
        assert J[0, 0][0] == alpha + J[1, 1][0]
        assert J[1, 1][1] == J[0, 0][1] + beta
        assert not J[0, 1] * J[1, 0]


def test_conjugate_subsystem_relations(calc):
    # with (L) and (S) imposed: J11(1) = conj(J11(3)) and J21(1) = J11(1) - conj(J11(2));
    # for imaginary values these read a1 = -a3 and alpha = a1 + a2
    system = acs_constraints(calc)
    Z = linear_parametrization(system)
    rng = random.Random(7)
    for _ in range(20):
        t = [Scalar(rng.randint(-5, 5)) for _ in Z[0]]
        J = system.unpack([linalg.dot(row, t) for row in Z], BASE3)
        a = J[0, 0]
        assert a[0] == a[2].conjugate()
        assert J[1, 0][0] == a[0] - a[1].conjugate()
        assert all(not r for r in system.residuals([linalg.dot(row, t) for row in Z])["S"])


def test_quadratic_subsystem(calc):
    system = acs_constraints(calc)
    for J in (family(I, I, -I), family(I, -I, I)):
        res = system.residuals(system.pack(J))
        assert not any(res["L"]) and not any(res["S"]) and not any(res["Q"])
    bad = system.residuals(system.pack(family(I, I, -I).scale(2)))
    assert any(bad["Q"])


def test_solver_against_brute_force(calc, solutions):
    assert len(solutions) == 8 and solutions.parameters == 6 and not solutions.dropped
    oracle = []
    for a1, a2, b3 in itertools.product([I, -I], repeat=3):
        J = family(a1, a2, b3)
        assert verify_acs(J, calc) and form_level_check(J, calc)
        oracle.append(J.key())
    assert sorted(oracle) == sorted(J.key() for J in solutions)
    for J in solutions:
        assert form_level_check(J, calc)
        assert (-J).key() in oracle


def test_printed_matrices(calc):
    p1 = acs_from_pattern(BASE3, [[ONE3 - C[2] * 2, ZERO * ONE3], [C[0] * 2, C[1] * 2 - ONE3]])
    assert family(I, I, -I) == p1
    p2 = acs_from_pattern(BASE3, [[ONE3 - C[2] * 2, C[1] * -2], [C[0] * 2, C[2] * 2 - ONE3]])
    assert family(I, I, I) == p2
    assert verify_acs(p1, calc)


def test_verify_rejections(calc):
    printed = acs_from_pattern(BASE3, [[C[0] * 2, ZERO * ONE3], [ZERO * ONE3, ONE3 - C[1] * 2]])
    check = verify_acs(printed, calc)
    assert not check
    assert "(2ichi1)(2ichi1)" in str(check.violation) and "-4chi1 != -1" in str(check.violation)
    zero = AcsMatrix.from_rows([[ZERO * ONE3] * 2] * 2)
    assert not verify_acs(zero, calc)


def test_printed_comparison(calc, solutions):
    cmp = compare_with_printed(solutions.structures, calc)
    assert [label for label, _ in cmp.matched] == [f"pair {k} ({s}i)" for k in (1, 2, 3) for s in "+-"]
    assert [label for label, _ in cmp.rejected] == ["pair 4 (+i)", "pair 4 (-i)"]
    assert sorted(J.key() for J in cmp.unmatched_solutions) == sorted(J.key() for J in corrected_fourth_pair(BASE3))
    assert len(printed_structures(BASE3)) == 8


def test_pq_dimensions(calc, solutions, pq_spaces):
    for pq in pq_spaces:
        assert pq.dims(1) == {(1, 0): 3, (0, 1): 3}
        assert set(pq.dims(2)) <= {(2, 0), (1, 1), (0, 2)}
        assert sum(pq.dims(2).values()) == calc.dim(2)


def test_fourth_family_omega10(calc, solutions, pq_spaces):
    J = family(I, -I, I)
    pq = pq_spaces[[s.key() for s in solutions].index(J.key())]
    e1, e2 = calc.e(1), calc.e(2)
    span = [e1 * C[0], e2 * C[0], e2 * C[2]]
    for x in span:
        assert pq.bidegree(x) == (1, 0)
        # the spot check: d of each spanning element has no (0,2) part
        assert pq.project(0, 2, x.d()).is_zero()
    sub = linalg.Subspace(calc.dim(1), [list(x.coords) for x in span])
    assert all(sub.contains(v) for v in pq.components[1][(1, 0)])


def test_integrability(solutions, pq_spaces):
    for J, pq in zip(solutions, pq_spaces):
        assert integrability_check(J, pq)
    by_key = {J.key(): bool(integrability_check(J, pq)) for J, pq in zip(solutions, pq_spaces)}
    assert all(by_key[J.key()] == by_key[(-J).key()] for J in solutions)


def test_del_delbar(calc, pq_spaces):
    pq = pq_spaces[0]
    f = calc.function(AlgebraElement(BASE3, [1, "2+i", -3]))
    dz, dzbar = del_delbar(f, pq)
    assert dz + dzbar == f.d()
    dz1, _ = del_delbar(calc.function(ONE3), pq)
    assert dz1.is_zero()
    w = pq.project(1, 0, calc.e(1) * C[2])
    a, b = del_delbar(w, pq)
    assert pq.project(0, 2, w.d()).is_zero() and a + b == w.d()


def test_case_split_reports_families():
    x, y = sympy.symbols("x y", real=True)
    with pytest.raises(InfiniteSolutionFamily):
        case_split([sympy.Poly(x - 1, x, y)], (x, y))
    with pytest.raises(InfiniteSolutionFamily):
        case_split([sympy.Poly(x**2 + y**2 - 1, x, y)], (x, y))
    points, dropped = case_split([sympy.Poly(x**2 - 2, x, y), sympy.Poly(y, x, y)], (x, y))
    assert points == [] and dropped
    points, _ = case_split([sympy.Poly(x**2 - 1, x, y), sympy.Poly(y - x, x, y)], (x, y))
    assert points == [(-1, -1), (1, 1)]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 7), st.integers(1, 3), st.data())
def test_projections(calc, pq_spaces, k, n, data):
    pq = pq_spaces[k]
    P = pq.projections[n]
    dim = calc.dim(n)
    ident = linalg.identity(dim)
    total = linalg.zeros(dim, dim)
    for a, Pa in P.items():
        assert linalg.matmul(Pa, Pa) == Pa
        for b, Pb in P.items():
            if a != b:
                assert linalg.is_zero(linalg.matmul(Pa, Pb))
        total = linalg.mat_add(total, Pa)
    assert total == ident
    x = data.draw(forms(calc, n))
    parts = [pq.project(p, q, x) for (p, q) in P]
    acc = calc.zero(n)
    for part in parts:
        acc = acc + part
    assert acc == x


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 7), st.lists(scalars, min_size=3, max_size=3))
def test_star_swaps_types(calc, pq_spaces, k, coeffs):
    pq = pq_spaces[k]
    v = [ZERO] * calc.dim(1)
    for c, b in zip(coeffs, pq.components[1][(0, 1)]):
        v = linalg.add(v, linalg.scale(c, b))
    x = Form(calc, 1, v)
    assert pq.bidegree(x) == (0, 1) or x.is_zero()
    assert x.is_zero() or pq.bidegree(x.star()) == (1, 0)
