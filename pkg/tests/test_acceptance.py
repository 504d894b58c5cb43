"""Acceptance gate: one PASS/FAIL line per criterion, all comparisons exact.

Run with ``pytest tests/test_acceptance.py -v`` or ``python -m tests.test_acceptance``.
"""

from __future__ import annotations

import itertools
import random
import subprocess
import sys
from functools import lru_cache

import pytest

from spectralcalc import linalg
from spectralcalc.algebra import AlgebraElement, PointSet, chi, one
from spectralcalc.calculus import ConnesCalculus, Form
from spectralcalc.complex_structures import (
    AcsMatrix, acs_constraints, acs_from_pattern, compare_with_printed, corrected_fourth_pair, extend_and_pq,
    integrability_check, solve_acs, verify_acs,
)
from spectralcalc.kahler import (
    NoKahlerCertificate, kahler_search_certificate, metric_inverse, metric_pair, solve_compatible_metrics,
    verify_certificate,
)
from spectralcalc.scalar import I, Scalar
from spectralcalc.triple import builtin

BASE = PointSet(3)
CASES = 100  # random cases per property
TOLERANCE = 0  # every comparison is exact equality over Q(i)


@lru_cache(maxsize=None)
def setup():
    calc = ConnesCalculus(builtin("three-point"))
    sol = solve_acs(acs_constraints(calc), calc.base, calc)
    pqs = [extend_and_pq(J, calc, 3) for J in sol]
    return calc, sol, pqs


def rand_scalar(rng):
    return Scalar(rng.randint(-4, 4), rng.randint(-4, 4)) / rng.randint(1, 3)


def rand_form(rng, calc, p):
    return Form(calc, p, [rand_scalar(rng) for _ in range(calc.dim(p))])


def rand_element(rng):
    return AlgebraElement(BASE, [rand_scalar(rng) for _ in range(3)])


def report(number, title, failures):
    status = "PASS" if not failures else "FAIL"
    line = f"[{status}] criterion {number}: {title}"
    if failures:
        line += " -- " + "; ".join(failures[:3])
    print(line)
    return not failures


# -- criteria -----------------------------------------------------------------


def criterion_1():
    calc, _, _ = setup()
    fails = []
    if [calc.dim(0), calc.dim(1)] != [3, 6]:
        fails.append(f"dims {calc.dim(0)}, {calc.dim(1)}")
    basis = calc.free_basis_check("right")
    if not basis or basis.rank != 2 or basis.generators != (0, 1):
        fails.append(f"right basis {basis}")
    c = {k: chi(BASE, k) for k in (1, 2, 3)}
    e = {k: calc.triple.commutator(c[k]) for k in (1, 2)}
    rep = calc.triple.represent
    for i in (1, 2):
        if rep(c[i]) * e[i] != e[i] * rep(one(BASE) - c[i]):
            fails.append(f"chi{i} e{i} != e{i}(1-chi{i})")
        if e[i] * rep(c[i]) != rep(one(BASE) - c[i]) * e[i]:
            fails.append(f"e{i} chi{i} != (1-chi{i}) e{i}")
        for j in (1, 2):
            if i != j and rep(c[i]) * e[j] != -(e[i] * rep(c[j])):
                fails.append(f"chi{i} e{j} != -e{i} chi{j}")
            if i != j and e[i] * rep(c[j]) != -(rep(c[i]) * e[j]):
                fails.append(f"e{i} chi{j} != -chi{i} e{j}")
    junk = [calc.space(p).junk_dim for p in range(4)]
    if any(junk):
        fails.append(f"junk dims {junk}")
    return report(1, "three-point calculus: dims 3, 6, free basis {e1, e2}, relations, no junk", fails)


def criterion_2():
    _, sol, _ = setup()
    keys = {J.key() for J in sol}
    fails = []
    if len(sol) != 8:
        fails.append(f"{len(sol)} solutions")
    if any((-J).key() not in keys for J in sol):
        fails.append("not closed under negation")
    return report(2, "exactly 8 almost complex structures, 4 +- pairs", fails)


def brute_force_oracle(calc):
    c1, c2 = chi(BASE, 1), chi(BASE, 2)
    found = []
    for a1, a2, b3 in itertools.product([I, -I], repeat=3):
        J = AcsMatrix.from_rows([[AlgebraElement(BASE, [a1, a2, -a1]), c2 * (-a2 - b3)],
                                 [c1 * (a1 + a2), AlgebraElement(BASE, [-a2, -b3, b3])]])
        if verify_acs(J, calc):
            found.append(J)
    return found


def criterion_3():
    calc, sol, _ = setup()
    fails = []
    cmp = compare_with_printed(sol.structures, calc)
    labels = sorted(label for label, _ in cmp.matched)
    if labels != sorted(f"pair {k} ({s}i)" for k in (1, 2, 3) for s in "+-"):
        fails.append(f"matched {labels}")
    one3, c1, c2 = one(BASE), chi(BASE, 1), chi(BASE, 2)
    printed4 = acs_from_pattern(BASE, [[c1 * 2, one3 * 0], [one3 * 0, one3 - c2 * 2]])
    check = verify_acs(printed4, calc)
    if check or "(2ichi1)(2ichi1)" not in str(check.violation) or "-4chi1 != -1" not in str(check.violation):
        fails.append(f"printed fourth matrix: {check.violation}")
    rest = sorted(J.key() for J in cmp.unmatched_solutions)
    if rest != sorted(J.key() for J in corrected_fourth_pair(BASE)):
        fails.append("remaining pair is not +-i diag(2chi1-1, 1-2chi2)")
    oracle = sorted(J.key() for J in brute_force_oracle(calc))
    if oracle != sorted(J.key() for J in sol) or len(oracle) != 8:
        fails.append("solver disagrees with the brute-force oracle")
    return report(3, "pairs 1-3 verbatim, printed pair 4 rejected, corrected pair found by oracle", fails)


def criterion_4():
    calc, sol, pqs = setup()
    fails = [f"J{k} not integrable" for k, (J, pq) in enumerate(zip(sol, pqs), 1) if not integrability_check(J, pq)]
    J4 = corrected_fourth_pair(BASE)[0]
    pq = pqs[[J.key() for J in sol].index(J4.key())]
    c1, c3 = chi(BASE, 1), chi(BASE, 3)
    rng = random.Random(4)
    for _ in range(10):
        a, b, g = (rand_scalar(rng) for _ in range(3))
        x = (calc.e(1) * c1).scale(a) + (calc.e(2) * c1).scale(b) + (calc.e(2) * c3).scale(g)
        dx = x.d()
        if pq.project(1, 0, x) != x or pq.project(1, 1, dx) != dx:
            fails.append("spot check: d of a (1,0)-form leaves Omega^(1,1)")
            break
    return report(4, "all 8 integrable; d(a e1chi1 + b e2chi1 + c e2chi3) lies in Omega^(1,1)", fails)


def criterion_5():
    calc, sol, pqs = setup()
    fails = []
    for k, (J, pq) in enumerate(zip(sol, pqs), 1):
        cert = kahler_search_certificate(calc, J, f"structure {k}", pq)
        if not isinstance(cert, NoKahlerCertificate):
            fails.append(f"J{k}: Kahler metric found")
            continue
        check = verify_certificate(cert.to_json())
        if not check:
            fails.append(f"J{k}: {check.failures[0]}")
    return report(5, "NoKahler certificate for each structure, re-verified by substitution", fails)


def criterion_6():
    calc, sol, pqs = setup()
    rng = random.Random(6)
    fails = []

    def prop(name, trial):
        for _ in range(CASES):
            if not trial():
                fails.append(name)
                return

    prop("d^2 = 0", lambda: rand_form(rng, calc, rng.randint(0, 1)).d().d().is_zero())

    def leibniz():
        p = rng.randint(0, 2)
        q = rng.randint(0, 2 - p)
        x, y = rand_form(rng, calc, p), rand_form(rng, calc, q)
        return (x * y).d() == x.d() * y + (x * y.d()).scale(-1 if p % 2 else 1)
    prop("graded Leibniz", leibniz)

    def star_law():
        p = rng.randint(0, 3)
        q = rng.randint(0, 3 - p)
        x, y = rand_form(rng, calc, p), rand_form(rng, calc, q)
        return (x * y).star() == (y.star() * x.star()).scale(-1 if (p * q) % 2 else 1)
    prop("(xy)* = (-1)^{pq} y* x*", star_law)

    def d_star():
        x = rand_form(rng, calc, rng.randint(0, 2))
        return x.star().d() == x.d().star()
    prop("d(x*) = (dx)*", d_star)

    def star_map():
        x, a, b = rand_form(rng, calc, 1), rand_element(rng), rand_element(rng)
        return calc.star_map(a * x * b) == a * calc.star_map(x) * b
    prop("star map is a bimodule map into the conjugate module", star_map)

    for pq in pqs:
        for n in (1, 2, 3):
            P = pq.projections[n]
            total = linalg.zeros(calc.dim(n), calc.dim(n))
            for a, Pa in P.items():
                total = linalg.mat_add(total, Pa)
                if linalg.matmul(Pa, Pa) != Pa or any(
                        not linalg.is_zero(linalg.matmul(Pa, Pb)) for b, Pb in P.items() if b != a):
                    fails.append("projections not idempotent/orthogonal")
            if total != linalg.identity(calc.dim(n)):
                fails.append("projections not complete")

    def decompose():
        pq, n = rng.choice(pqs), rng.randint(1, 3)
        x = rand_form(rng, calc, n)
        acc = calc.zero(n)
        for (p, q) in pq.projections[n]:
            part = pq.project(p, q, x)
            acc = acc + part
            if not part.is_zero() and pq.bidegree(part) != (p, q):
                return False
        return acc == x
    prop("forms decompose into (p,q) parts", decompose)

    def conj_types():
        pq = rng.choice(pqs)
        v = [rand_scalar(rng) for _ in range(3)]
        x = Form(calc, 1, [sum((c * b[k] for c, b in zip(v, pq.components[1][(0, 1)])), Scalar(0))
                           for k in range(calc.dim(1))])
        return x.is_zero() or (pq.bidegree(x) == (0, 1) and pq.bidegree(x.star()) == (1, 0))
    prop("(Omega^(0,1))* = Omega^(1,0)", conj_types)
    for pq in pqs:
        stars = linalg.Subspace(calc.dim(1), [list(Form(calc, 1, v).star().coords) for v in pq.components[1][(0, 1)]])
        if not all(stars.contains(v) for v in pq.components[1][(1, 0)]):
            fails.append("star of Omega^(0,1) misses Omega^(1,0)")

    families = [solve_compatible_metrics(calc, J) for J in sol]

    def vanish():
        k = rng.randrange(8)
        g = families[k].member([rand_scalar(rng) for _ in range(families[k].dimension)])
        b10 = pqs[k].components[1][(1, 0)]

        def pick():
            v = [rand_scalar(rng) for _ in b10]
            return Form(calc, 1, [sum((c * b[i] for c, b in zip(v, b10)), Scalar(0)) for i in range(calc.dim(1))])
        return not metric_pair(calc, g, pick(), pick())
    prop("compatible metrics vanish on Omega^(1,0) x Omega^(1,0)", vanish)

    def inverse():
        k = rng.randrange(8)
        while True:
            g = families[k].member([rand_scalar(rng) for _ in range(families[k].dimension)])
            if g.det().try_invert():
                break
        G = metric_inverse(g).G
        return G.matmul(g).is_identity() and g.matmul(G).is_identity()
    prop("metric_inverse . metric = identity", inverse)
    return report(6, f"property suites, {CASES} random exact cases each", fails)


def criterion_7():
    cmd = [sys.executable, "-m", "spectralcalc", "classify", "--builtin", "three-point", "--output", "json"]
    runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    fails = []
    if any(r.returncode for r in runs):
        fails.append(f"exit codes {[r.returncode for r in runs]}")
    if runs[0].stdout != runs[1].stdout or not runs[0].stdout:
        fails.append("outputs differ")
    return report(7, "classify --output json is byte-identical across runs", fails)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 8)])
def test_criterion(criterion, capsys):
    with capsys.disabled():
        print()
        ok = criterion()
    assert ok


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
