import os
from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings, strategies as st

from jetspace.poly import Polynomial

settings.register_profile("ci", derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


def to_sympy(P: Polynomial):
    syms = sympy.symbols(P.ring) if P.ring else ()
    if len(P.ring) == 1:
        syms = (syms,)
    expr = sympy.Integer(0)
    for e, c in P.terms.items():
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        for s, k in zip(syms, e):
            term *= s**k
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, ring) -> Polynomial:
    poly = sympy.Poly(sympy.expand(expr), *sympy.symbols(ring))
    return Polynomial({tuple(m): Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}, ring)


coeffs = st.one_of(st.integers(-6, 6), st.fractions(min_value=-3, max_value=3, max_denominator=4))


@st.composite
def polynomials(draw, ring=("x", "y", "z"), max_terms=5, max_deg=3):
    n = len(ring)
    terms = draw(st.dictionaries(st.tuples(*[st.integers(0, max_deg)] * n), coeffs, max_size=max_terms))
    return Polynomial(terms, ring)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
