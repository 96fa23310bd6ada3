import random

from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings, strategies as st

from relcirc.field import Poly, RatFunc
from relcirc.random_circuits import rand_relation

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

small_ints = st.integers(min_value=-9, max_value=9)
rationals = st.builds(lambda n, d: mpq(n, d), small_ints, st.integers(min_value=1, max_value=5))
polys = st.lists(rationals, max_size=4).map(Poly)
nonzero_polys = polys.filter(lambda p: bool(p))
ratfuncs = st.builds(RatFunc, polys, nonzero_polys)
nonzero_ratfuncs = ratfuncs.filter(lambda f: bool(f))
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def relations(dom, cod, symbolic=0.0):
    return seeds.map(lambda s: rand_relation(random.Random(s), dom, cod, symbolic=symbolic))


def poly_at(coeffs, t):
    """Horner evaluation with Fractions, independent of the field module."""
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + Fraction(int(c.numerator), int(c.denominator))
    return acc


@pytest.fixture
def rng():
    return random.Random(20241016)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
