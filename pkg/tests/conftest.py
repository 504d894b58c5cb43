from __future__ import annotations

import pytest
from hypothesis import strategies as st

from spectralcalc.algebra import AlgebraElement, PointSet
from spectralcalc.calculus import ConnesCalculus, Form
from spectralcalc.complex_structures import acs_constraints, extend_and_pq, solve_acs
from spectralcalc.scalar import Scalar
from spectralcalc.triple import builtin

BASE3 = PointSet(3)


@pytest.fixture(scope="session")
def calc():
    return ConnesCalculus(builtin("three-point"))


@pytest.fixture(scope="session")
def solutions(calc):
    return solve_acs(acs_constraints(calc), calc.base, calc)


@pytest.fixture(scope="session")
def pq_spaces(calc, solutions):
    return [extend_and_pq(J, calc, 3) for J in solutions]


small = st.integers(-4, 4)
scalars = st.builds(lambda a, b, d: Scalar(a, b) / d, small, small, st.integers(1, 3))
nonzero_scalars = scalars.filter(bool)


def elements(base: PointSet = BASE3):
    return st.lists(scalars, min_size=base.n, max_size=base.n).map(lambda v: AlgebraElement(base, v))


def forms(calc: ConnesCalculus, degree: int):
    dim = calc.dim(degree)
    return st.lists(scalars, min_size=dim, max_size=dim).map(lambda v: Form(calc, degree, v))
