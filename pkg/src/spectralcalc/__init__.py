"""Exact noncommutative differential geometry on finite graph spectral triples.

Scalars live in Q(i); every computation is exact.  The pipeline runs from a
weighted graph to its Connes calculus, enumerates almost complex structures,
decomposes forms by bidegree and decides the existence of Kähler metrics.
"""

from .algebra import AlgebraElement, NotAUnit, NotAUnitError, PointSet, chi, one
from .calculus import ConnesCalculus, Form, FreeBasis, NotFree, NotFreeError, UniversalForm
from .complex_structures import (
    AcsMatrix, acs_constraints, compare_with_printed, extend_and_pq, integrability_check, solve_acs,
    verify_acs,
)
from .kahler import (
    MetricMatrix, NoKahlerCertificate, fundamental_form, kahler_check, kahler_search_certificate,
    metric_inverse, solve_compatible_metrics, verify_certificate,
)
from .scalar import I, ONE, ZERO, Scalar
from .triple import GraphTripleSpec, SpectralTriple, builtin, verify_spectral_triple

__all__ = [
    "AcsMatrix", "AlgebraElement", "ConnesCalculus", "Form", "FreeBasis", "GraphTripleSpec", "I",
    "MetricMatrix", "NoKahlerCertificate", "NotAUnit", "NotAUnitError", "NotFree", "NotFreeError", "ONE",
    "PointSet", "Scalar", "SpectralTriple", "UniversalForm", "ZERO", "acs_constraints", "builtin", "chi",
    "compare_with_printed", "extend_and_pq", "fundamental_form", "integrability_check", "kahler_check",
    "kahler_search_certificate", "metric_inverse", "one", "solve_acs", "solve_compatible_metrics",
    "verify_acs", "verify_certificate", "verify_spectral_triple",
]
