"""Seeded random instances: field elements, relations, terms and netlists.

All functions take a ``random.Random`` so test runs are reproducible.
"""

from __future__ import annotations

import random
from typing import List

from gmpy2 import mpq

from .affine import AffineRelation, canonicalize
from .analysis import csource_payload, vsource_payload
from .diagram import (
    Box, E, Gen, Id, N, Par, Seq, Swap, Term, generators_of, par, permutation, seq,
)
from .field import X, Poly, RatFunc
from .netlist import Element, Netlist

__all__ = [
    "rand_rational", "rand_poly", "rand_ratfunc", "rand_relation", "rand_payload",
    "rand_electric_term", "rand_one_port", "rand_netlist", "count_generators",
]


def rand_rational(rng: random.Random, lo=-6, hi=6, dens=(1, 1, 2, 3)) -> mpq:
    return mpq(rng.randint(lo, hi), rng.choice(dens))


def rand_poly(rng, max_deg=2) -> Poly:
    return Poly([rand_rational(rng) for _ in range(rng.randint(0, max_deg + 1))])


def rand_ratfunc(rng, max_deg=2, nonzero=False) -> RatFunc:
    while True:
        den = rand_poly(rng, max_deg)
        if den:
            f = RatFunc(rand_poly(rng, max_deg), den)
            if f or not nonzero:
                return f


def rand_scalar(rng, symbolic=0.2):
    """A constant most of the time, occasionally a small rational function."""
    if rng.random() < symbolic:
        return rng.choice([X, X * 2, RatFunc(Poly([1]), Poly([0, 1])), X + 1])
    return rand_rational(rng)


def rand_relation(rng, dom, cod, max_rank=None, symbolic=0.0, empty=0.05) -> AffineRelation:
    d = dom + cod
    if rng.random() < empty:
        return AffineRelation.empty(dom, cod)
    rank = rng.randint(0, d if max_rank is None else min(d, max_rank))
    pick = lambda: rand_scalar(rng, symbolic) if rng.random() < 0.6 else mpq(0)
    basis = [[pick() for _ in range(d)] for _ in range(rank)]
    offset = [pick() for _ in range(d)]
    return canonicalize(offset, basis, dom, cod)


# GAA payloads ---------------------------------------------------------------------------

def _payload_leaf(rng) -> Term:
    q = lambda: rand_rational(rng)
    choices = [
        lambda: Gen("scalar", rand_scalar(rng)),
        lambda: Gen("coscalar", rand_scalar(rng)),
        lambda: Id((N,)),
        lambda: seq(Gen("discard"), Gen("codiscard")),
        lambda: seq(Gen("discard"), Gen("zero")),
        lambda: seq(Gen("cozero"), Gen("codiscard")),
        lambda: vsource_payload(q()),
        lambda: csource_payload(q()),
        lambda: seq(Par(Id((N,)), Seq(Gen("one"), Gen("scalar", q()))), Gen("add")),
        lambda: seq(Gen("cozero"), Gen("one"), Gen("scalar", q())),
    ]
    return rng.choice(choices)()


def rand_payload(rng, depth=4) -> Term:
    """Random GAA term ``n -> n`` of nesting depth at most ``depth``."""
    if depth <= 0 or rng.random() < 0.3:
        return _payload_leaf(rng)
    a = rand_payload(rng, depth - 1)
    b = rand_payload(rng, depth - 1)
    shape = rng.randrange(6)
    if shape == 0:
        return Seq(a, b)
    if shape == 1:
        return seq(Gen("copy"), Par(a, b), Gen("add"))
    if shape == 2:
        return seq(Gen("coadd"), Par(a, b), Gen("cocopy"))
    if shape == 3:
        return seq(Gen("copy"), Par(a, b), Gen("cocopy"))
    if shape == 4:
        return seq(Gen("coadd"), Par(a, b), Gen("add"))
    return seq(Gen("scalar", -1), a, Gen("scalar", -1))


# electric terms ----------------------------------------------------------------------------

def count_generators(t: Term) -> int:
    return sum(1 for _ in generators_of(t))


def _at(w, j, g, width_g=1):
    """Apply ``g`` to electric wires ``j .. j+width_g-1`` of ``e^w``."""
    return par(Id((E,) * j), g, Id((E,) * (w - j - width_g)))


def _two_terminal(rng, kinds=("R", "V", "I", "L", "C", "box", "wire")) -> Term:
    k = rng.choice(kinds)
    if k == "R":
        return Gen("R", abs(rand_rational(rng)))
    if k in ("V", "I"):
        return Gen(k, rand_rational(rng))
    if k in ("L", "C"):
        return Gen(k, rng.choice([1, 2, mpq(1, 2), 3]))
    if k == "box":
        return Box(0, 0, rand_payload(rng, 2))
    return Id((E,))


def _controlled_pair(rng, w):
    """A meter on one wire driving a controlled source on another (``e^w -> e^w``)."""
    j, k = rng.sample(range(w), 2)
    meter = Gen(rng.choice(["ammeter", "voltmeter"]))
    src = Gen(rng.choice(["cvs", "ccs"]))
    if rng.random() < 0.5:
        src = Seq(Par(Gen("scalar", rand_rational(rng)), Id((E,))), src)
    first = _at(w, j, meter)
    # word now: e^j n e^(w-j); bring the info wire next to wire k
    word = (E,) * j + (N,) + (E,) * (w - j)
    wires = [i for i in range(w + 1) if i != j]
    target = wires[k]
    order = [i for i in wires if i < target] + [j] + [i for i in wires if i >= target]
    route = permutation(word, order)
    apply = par(Id((E,) * k), src, Id((E,) * (w - k - 1)))
    return seq(first, route, apply)


def rand_electric_term(rng, max_gens=200, max_width=4, dom=None, cod=None,
                       controlled=True) -> Term:
    """Random term ``e^a -> e^b`` with at most ``max_gens`` generators.

    Info wires appear only internally: meters are discarded or drive a
    controlled source, and free sources are fed from ``codiscard``.
    """
    w = rng.randint(1, max_width) if dom is None else dom
    layers, used = [Id((E,) * w)], 0
    # keep room for the generators that adjust the final width
    cap = max_gens - (0 if cod is None else max_width + max(cod, w))
    budget = rng.randint(1, cap)
    while used < budget:
        op = rng.random()
        w_prev, n_layers = w, len(layers)
        if w == 0:
            layers.append(Gen("coopen"))
            w, used = 1, used + 1
            continue
        j = rng.randrange(w)
        if op < 0.35:
            g = _two_terminal(rng)
            layers.append(_at(w, j, g))
        elif op < 0.45 and w < max_width:
            layers.append(_at(w, j, Gen("junc")))
            w = w + 1
        elif op < 0.53 and w >= 2:
            layers.append(_at(w, rng.randrange(w - 1), Gen("cojunc"), 2))
            w = w - 1
        elif op < 0.58 and w >= 2:
            layers.append(_at(w, rng.randrange(w - 1), Swap(E, E), 2))
        elif op < 0.63 and w >= 2:
            layers.append(_at(w, j, Gen("open"), 1))
            w = w - 1
        elif op < 0.68 and w < max_width:
            layers.append(par(Id((E,) * j), Gen("coopen"), Id((E,) * (w - j))))
            w = w + 1
        elif op < 0.78:
            meter = Gen(rng.choice(["ammeter", "voltmeter"]))
            layers.append(_at(w, j, Seq(meter, Par(Gen("discard"), Id((E,))))))
        elif op < 0.86:
            src = Gen(rng.choice(["cvs", "ccs"]))
            layers.append(_at(w, j, Seq(Par(Gen("codiscard"), Id((E,))), src)))
        elif controlled and w >= 2:
            t = _controlled_pair(rng, w)
            layers.append(t)
        if len(layers) > n_layers:
            cost = count_generators(layers[-1])
            if used + cost > cap:
                layers.pop()
                w = w_prev
                break
            used += cost
    target = cod
    while target is not None and w != target:
        if w > target:
            layers.append(_at(w, 0, Gen("cojunc"), 2) if w >= 2 else Gen("open"))
            w -= 1
        else:
            layers.append(par(Gen("coopen"), Id((E,) * w)))
            w += 1
    return seq(*layers)


def rand_one_port(rng, max_elements=8) -> Term:
    """Random ``e -> e`` term over resistors, independent sources, junctions and opens."""
    # weighted towards resistors; sources alone make most one-ports empty
    kinds = ("R", "R", "R", "V", "I", "wire")
    w, layers, elems = 1, [Id((E,))], 0
    n_elems = rng.randint(1, max_elements)
    steps = 0
    while elems < n_elems and steps < 40:
        steps += 1
        op = rng.random()
        j = rng.randrange(w)
        if op < 0.5:
            g = _two_terminal(rng, kinds)
            layers.append(_at(w, j, g))
            elems += isinstance(g, Gen)
        elif op < 0.68 and w < 4:
            layers.append(_at(w, j, Gen("junc")))
            w += 1
        elif op < 0.84 and w >= 2:
            j = rng.randrange(w - 1)
            layers.append(_at(w, j, Gen("cojunc"), 2))
            w -= 1
        elif op < 0.9 and w >= 2:
            j = rng.randrange(w - 1)
            layers.append(_at(w, j, Swap(E, E), 2))
        elif op < 0.95 and w >= 2:
            layers.append(par(Id((E,) * j), Gen("open"), Id((E,) * (w - j - 1))))
            w -= 1
        elif w < 4:
            layers.append(par(Id((E,) * j), Gen("coopen"), Id((E,) * (w - j))))
            w += 1
    while w > 1:
        layers.append(_at(w, rng.randrange(w - 1), Gen("cojunc"), 2))
        w -= 1
    return seq(*layers)


# netlists ---------------------------------------------------------------------------------------

def rand_netlist(rng, max_nodes=10, max_elements=15, ports=(0, 2), inputs=(0, 2),
                 kinds=("R", "V", "I", "L", "C", "AM", "VM", "CV", "CI"),
                 meters=None, no_independent=False) -> Netlist:
    """Random valid netlist; ``meters`` fixes the number of exported meter readings."""
    n_nodes = rng.randint(2, max_nodes)
    nodes = [str(k) for k in range(n_nodes)]
    elements: List[Element] = []
    for k in range(rng.randint(*inputs)):
        elements.append(Element("IN", f"u{k}"))
    n_el = rng.randint(1, max_elements)
    signals = [e.name for e in elements]
    count = 0
    if meters is not None:
        for k in range(meters):
            a, b = rng.choice(nodes), rng.choice(nodes)
            elements.append(Element(rng.choice(["AM", "VM"]), f"m{k}", a, b))
        count = meters
    while count < n_el:
        kind = rng.choice(kinds)
        a, b = rng.choice(nodes), rng.choice(nodes)
        name = f"{kind.lower()}{count}"
        if kind in ("CV", "CI"):
            if not signals:
                continue
            gain = rng.choice([mpq(1), rand_rational(rng)])
            elements.append(Element(kind, name, a, b, ctrl=rng.choice(signals), gain=gain))
        elif kind in ("AM", "VM"):
            if meters is not None:
                continue
            elements.append(Element(kind, name, a, b))
            signals.append(name)
        elif kind == "R":
            elements.append(Element(kind, name, a, b, abs(rand_rational(rng))))
        elif kind in ("L", "C"):
            elements.append(Element(kind, name, a, b, rng.choice([mpq(1), mpq(2), mpq(1, 2)])))
        else:
            v = mpq(0) if no_independent else rand_rational(rng)
            elements.append(Element(kind, name, a, b, v))
        count += 1
    if meters is not None:
        signals += [f"m{k}" for k in range(meters)]
    for k in range(rng.randint(*ports)):
        elements.append(Element("PORT", f"p{k}", rng.choice(nodes), rng.choice(nodes)))
    used = set()
    for e in elements:
        if e.kind != "IN":
            used.update((e.node_a, e.node_b))
    nl = Netlist([n for n in nodes if n in used], elements)
    return nl.validate()
