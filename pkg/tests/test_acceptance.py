"""Acceptance criteria 1-10, one test each.

Every test records a PASS/FAIL line with its measured time; the lines are
printed in the terminal summary of the pytest run (and directly when this
file is executed as a script).
"""

import random
import time

from gmpy2 import mpq

from relcirc.affine import AffineRelation, from_constraints
from relcirc.analysis import (
    NonCanonical, check_independent_measurement, check_port_invariants, check_superposition,
    close_box, loop, measure, parallel, parallel_box, reverse, reverse_box, series_box,
    source_transform, thevenin,
)
from relcirc.axioms import AXIOMS, axioms_suite
from relcirc.diagram import Box, E, Gen, Id, Seq, seq
from relcirc.gadgets import gadget, gadget_names, reference, uses_only_circuit_elements
from relcirc.netlist import netlist_to_relation_direct, netlist_to_term, parse_netlist
from relcirc.random_circuits import (
    count_generators, rand_electric_term, rand_netlist, rand_one_port, rand_payload,
    rand_rational,
)
from relcirc.field import X, format_value
from relcirc.semantics import clear_cache, denote

RESULTS = {}

SEED = 1729


def record(n, ok, detail, elapsed, limit=None):
    within = limit is None or elapsed < limit
    passed = bool(ok) and within
    bound = f" (limit {limit:g} s)" if limit is not None else ""
    RESULTS[n] = f"criterion {n:>2}: {'PASS' if passed else 'FAIL'}  {detail}  [{elapsed:.2f} s{bound}]"
    print(RESULTS[n])
    assert ok, detail
    assert within, f"took {elapsed:.2f} s, limit {limit} s"


def same(t1, t2):
    return denote(t1) == denote(t2)


def net(text):
    return netlist_to_term(parse_netlist(text))


def test_criterion_01_axioms():
    start = time.perf_counter()
    results = axioms_suite(AXIOMS)
    elapsed = time.perf_counter() - start
    passed = sum(r.passed for r in results)
    record(1, passed == len(results), f"{passed}/{len(results)} axiom instances hold", elapsed, 1.0)


def test_criterion_02_classical_laws():
    rng = random.Random(SEED)
    start = time.perf_counter()
    failures = []
    nonneg = lambda: abs(rand_rational(rng))
    draws = [(nonneg(), nonneg()) for _ in range(100)] + [(0, 0), (0, 3), (mpq(1, 2), 0), (7, 7)]
    for r1, r2 in draws:
        r1, r2 = mpq(r1), mpq(r2)
        if not same(Seq(Gen("R", r1), Gen("R", r2)), Gen("R", r1 + r2)):
            failures.append(("series", r1, r2))
        expected = r1 * r2 / (r1 + r2) if r1 + r2 else mpq(0)
        if not same(parallel(Gen("R", r1), Gen("R", r2)), Gen("R", expected)):
            failures.append(("parallel", r1, r2))
    transform = [(rand_rational(rng), nonneg() + 1) for _ in range(100)] + [(0, 5), (2, 3)]
    for i, r in transform:
        t = parallel(Gen("I", i), Gen("R", r))
        if not same(t, source_transform(t)):
            failures.append(("transform", i, r))
    sources = [(rand_rational(rng), rand_rational(rng)) for _ in range(100)]
    sources += [(v, v) for v in (0, 1, mpq(-5, 2))] + [(1, 2)]
    for v1, v2 in sources:
        R = denote(parallel(Gen("V", v1), Gen("V", v2)))
        ok = R == denote(Gen("V", v1)) if v1 == v2 else R.is_empty
        if not ok:
            failures.append(("sources", v1, v2))
    elapsed = time.perf_counter() - start
    n = len(draws) * 2 + len(transform) + len(sources)
    record(2, not failures, f"{n - len(failures)}/{n} classical-law instances exact", elapsed, 5.0)


def test_criterion_03_impedance_contracts():
    rng = random.Random(SEED)
    start = time.perf_counter()
    bad = 0
    for _ in range(200):
        c1, c2 = rand_payload(rng, 4), rand_payload(rng, 4)
        b1, b2 = Box(0, 0, c1), Box(0, 0, c2)
        ok = (same(Seq(b1, b2), Box(0, 0, series_box(c1, c2)))
              and same(parallel(b1, b2), Box(0, 0, parallel_box(c1, c2)))
              and same(reverse(b1), Box(0, 0, reverse_box(c1)))
              and denote(loop(b1, Id((E,)))) == close_box(c1))
        bad += not ok
    elapsed = time.perf_counter() - start
    record(3, bad == 0, f"{200 - bad}/200 payload pairs satisfy all four contracts", elapsed, 30.0)


def test_criterion_04_worked_example():
    start = time.perf_counter()
    text = "V b 1 0 10\nR r 1 2 5\nAM a 2 0\n"
    term_path = measure(net(text))
    term_loop = measure(loop(Seq(Gen("V", 10), Gen("R", 5)), Gen("ammeter")))
    oracle = netlist_to_relation_direct(parse_netlist(text))
    two = AffineRelation.point([], [2])
    ok = (term_path.values == (2,) and term_loop.values == (2,) and oracle == two)
    elapsed = time.perf_counter() - start
    show = lambda vals: ", ".join(format_value(v) for v in vals) if vals else "none"
    record(4, ok, f"ammeter reads {show(term_path.values)} (netlist term), "
                  f"{show(term_loop.values)} (hand-built term), {show(oracle.offset)} (oracle)",
           elapsed)


def _metered_circuit(rng):
    k = rng.randint(1, 3)
    nl = rand_netlist(rng, max_nodes=6, max_elements=8, ports=(0, 0), inputs=(0, 2),
                      kinds=("R", "V", "I", "L", "C", "CV", "CI"), meters=k)
    return netlist_to_term(nl)


def _controlled_circuit(rng):
    while True:
        nl = rand_netlist(rng, max_nodes=6, max_elements=8, ports=(0, 0), inputs=(1, 3),
                          kinds=("R", "L", "C", "V", "I", "CV", "CI", "AM", "VM"),
                          no_independent=True)
        if sum(e.kind in ("CV", "CI") for e in nl.elements) <= 3:
            return netlist_to_term(nl)


def test_criterion_05_measurement_and_superposition():
    rng = random.Random(SEED)
    start = time.perf_counter()
    n = 500
    meas_bad = meas_strict = meas_eq_violations = 0
    for _ in range(n):
        rep = check_independent_measurement(_metered_circuit(rng))
        meas_bad += not rep.inclusion_holds
        meas_strict += rep.strict
        if all(w.total and w.single_valued for w in rep.functional_witness):
            meas_eq_violations += not rep.equality_holds
    sup_bad = sup_strict = sup_eq_violations = 0
    for _ in range(n):
        rep = check_superposition(_controlled_circuit(rng))
        sup_bad += not rep.inclusion_holds
        sup_strict += rep.strict
        if all(w.total and w.single_valued for w in rep.functional_witness):
            sup_eq_violations += not rep.equality_holds
    shorted = check_independent_measurement(net("IN u\nCV s 1 0 u\nAM a1 1 2\nAM a2 2 0\n"))
    shorted_ok = shorted.inclusion_holds and not shorted.equality_holds and shorted.lhs != shorted.rhs
    dual = check_superposition(net("IN u1\nIN u2\nCV s1 1 0 u1\nCV s2 1 0 u2\nVM m 1 0\n"))
    dual_ok = dual.inclusion_holds and dual.strict
    elapsed = time.perf_counter() - start
    ok = (meas_bad == sup_bad == 0 and meas_eq_violations == sup_eq_violations == 0
          and shorted_ok and dual_ok)
    record(5, ok, f"measurement: {n - meas_bad}/{n} inclusions ({meas_strict} strict); "
                  f"superposition: {n - sup_bad}/{n} inclusions ({sup_strict} strict); "
                  f"shorted-source strict={shorted_ok}, parallel-sources strict={dual_ok}",
           elapsed)


def test_criterion_06_port_invariants():
    rng = random.Random(SEED)
    start = time.perf_counter()
    bad, biggest = 0, 0
    for _ in range(1000):
        t = rand_electric_term(rng, max_gens=200)
        biggest = max(biggest, count_generators(t))
        inv = check_port_invariants(t)
        bad += not (inv.relativity and inv.conservation)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and biggest <= 200
    record(6, ok, f"{1000 - bad}/1000 terms satisfy both invariants "
                  f"(largest {biggest} generators)", elapsed, 60.0)


def test_criterion_07_thevenin():
    rng = random.Random(SEED)
    start = time.perf_counter()
    n, noncanonical, mismatched, cases = 500, 0, 0, {}
    for _ in range(n):
        t = rand_one_port(rng, max_elements=8)
        form = thevenin(t)
        cases[form.case] = cases.get(form.case, 0) + 1
        if isinstance(form, NonCanonical):
            noncanonical += 1
        elif not same(form.to_term(), t):
            mismatched += 1
    elapsed = time.perf_counter() - start
    ok = noncanonical == 0 and mismatched == 0
    summary = ", ".join(f"{k}={v}" for k, v in sorted(cases.items()))
    record(7, ok, f"{n} one-ports: {summary}; non-canonical={noncanonical}, "
                  f"round-trip mismatches={mismatched}", elapsed)


def test_criterion_08_netlist_differential():
    rng = random.Random(SEED)
    start = time.perf_counter()
    n, bad = 500, 0
    for _ in range(n):
        nl = rand_netlist(rng, max_nodes=10, max_elements=15)
        bad += denote(netlist_to_term(nl)) != netlist_to_relation_direct(nl)
    elapsed = time.perf_counter() - start
    record(8, bad == 0, f"{n - bad}/{n} netlists agree with the nodal oracle", elapsed, 120.0)


def test_criterion_09_gadgets():
    start = time.perf_counter()
    checked, bad = 0, []
    for g in gadget_names():
        if g == "vccs":
            continue
        params = [mpq(0), mpq(3), mpq(-2, 5), X, 1 / X, (X + 1) / (X * X - 2)] \
            if g in ("scalar", "coscalar") else [None]
        for p in params:
            t = gadget(g, p)
            checked += 1
            if not (uses_only_circuit_elements(t) and denote(t) == denote(reference(g, p))):
                bad.append((g, p))
    vccs = gadget("vccs")
    checked += 1
    if not (uses_only_circuit_elements(vccs) and denote(vccs) == vccs_relation()):
        bad.append(("vccs", None))
    elapsed = time.perf_counter() - start
    record(9, not bad, f"{checked - len(bad)}/{checked} gadgets equal their generator", elapsed)


def vccs_relation():
    """(phi1, i1, psi1, j1 | phi2, i2, psi2, j2): the first branch draws no current
    and the second carries current phi2 - phi1."""
    rows = [
        [0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [1, 0, 0, 1, -1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, -1],
    ]
    return from_constraints(rows, [0] * 4, 4, 4)


def test_criterion_10_long_chain():
    clear_cache()
    t = seq(*[Gen("R", 1)] * 1000)
    start = time.perf_counter()
    R = denote(t)
    elapsed = time.perf_counter() - start
    ok = R == from_constraints([[-1, -1000, 1, 0], [0, 1, 0, -1]], [0, 0], 2, 2)
    record(10, ok, "1000-resistor chain denotes R(1000)", elapsed, 10.0)


if __name__ == "__main__":
    import sys
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
