"""Node-based netlists: parsing, compilation to terms, and a direct solver.

Every two-terminal line ``X name a b ...`` follows the usual SPICE reading:
``V`` makes ``a`` the higher potential, ``I`` and ``AM`` refer to the
current flowing through the element from ``a`` to ``b``, and ``VM`` reads
``phi(a) - phi(b)``.  Internally the element's left terminal sits on ``b``
and its right terminal on ``a``.

``PORT p a b`` opens the circuit to the outside: the port's domain wire
attaches at ``b`` and its codomain wire at ``a``.  ``IN u`` declares an
external information input usable as a control.

The compiled term has sorting ``e^P n^U -> e^P n^M`` (ports, inputs, then
exported meter readings, each in declaration order).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from gmpy2 import mpq

from .affine import AffineRelation, from_constraints
from .diagram import (
    E, Gen, Id, N, Par, Term, cup_e, cup_n, par, permutation, seq,
)
from .field import X

__all__ = [
    "Element", "Netlist", "NetlistSyntaxError", "UnknownNode", "UnknownControl", "BadValue",
    "parse_netlist", "netlist_to_term", "netlist_to_relation_direct", "electric_spider",
    "info_spider", "format_netlist",
]

TWO_TERMINAL = ("R", "L", "C", "V", "I")
METERS = ("AM", "VM")
CONTROLLED = ("CV", "CI")
KINDS = TWO_TERMINAL + METERS + CONTROLLED + ("PORT", "IN")

_NAME = re.compile(r"^[A-Za-z0-9_]+$")
_RATIONAL = re.compile(r"^[-+]?\d+(/\d+)?$")


class NetlistSyntaxError(SyntaxError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line else ""
        super().__init__(where + message)
        self.line = line


class UnknownNode(NetlistSyntaxError):
    pass


class UnknownControl(NetlistSyntaxError):
    pass


class BadValue(NetlistSyntaxError):
    pass


@dataclass(frozen=True)
class Element:
    kind: str
    name: str
    node_a: Optional[str] = None
    node_b: Optional[str] = None
    value: Optional[mpq] = None
    ctrl: Optional[str] = None
    gain: mpq = mpq(1)
    line: Optional[int] = field(default=None, compare=False)


@dataclass
class Netlist:
    nodes: List[str] = field(default_factory=list)
    elements: List[Element] = field(default_factory=list)

    @property
    def ports(self):
        return [e for e in self.elements if e.kind == "PORT"]

    @property
    def inputs(self):
        return [e.name for e in self.elements if e.kind == "IN"]

    @property
    def meters(self):
        return [e for e in self.elements if e.kind in METERS]

    @property
    def info_outputs(self):
        used = {e.ctrl for e in self.elements if e.kind in CONTROLLED}
        return [m.name for m in self.meters if m.name not in used]

    @property
    def devices(self):
        """Elements that become circuit generators (everything but PORT and IN)."""
        return [e for e in self.elements if e.kind not in ("PORT", "IN")]

    def validate(self):
        known = set(self.nodes)
        signals = {e.name for e in self.elements if e.kind in METERS + ("IN",)}
        names = set()
        for e in self.elements:
            if e.name in names:
                raise NetlistSyntaxError(f"duplicate element name {e.name!r}", e.line)
            names.add(e.name)
            if e.kind != "IN":
                for n in (e.node_a, e.node_b):
                    if n not in known:
                        raise UnknownNode(f"unknown node {n!r} in {e.name}", e.line)
            if e.kind in CONTROLLED and e.ctrl not in signals:
                raise UnknownControl(f"{e.name} is controlled by undeclared meter {e.ctrl!r}",
                                     e.line)
            if e.kind == "R" and e.value < 0:
                raise BadValue(f"resistance must be >= 0 in {e.name}", e.line)
            if e.kind in ("L", "C") and e.value <= 0:
                raise BadValue(f"{e.kind} value must be > 0 in {e.name}", e.line)
        return self


def _value(tok, lineno):
    if not _RATIONAL.match(tok):
        raise BadValue(f"bad rational value {tok!r}", lineno)
    v = mpq(tok.lstrip("+"))
    return v


def parse_netlist(text: str) -> Netlist:
    """Parse the line-oriented netlist format; nodes are created on first use."""
    nl = Netlist()
    seen_nodes = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind = toks[0].upper()
        if kind not in KINDS:
            raise NetlistSyntaxError(f"unknown element kind {toks[0]!r}", lineno)
        if kind == "IN":
            if len(toks) != 2:
                raise NetlistSyntaxError("expected: IN <name>", lineno)
            _check_name(toks[1], lineno)
            nl.elements.append(Element("IN", toks[1], line=lineno))
            continue
        if kind in TWO_TERMINAL:
            expected = f"{kind} <name> <nodeA> <nodeB> <value>"
            arity = (5,)
        elif kind in CONTROLLED:
            expected = f"{kind} <name> <node+> <node-> <ctrl> [gain]"
            arity = (5, 6)
        else:
            expected = f"{kind} <name> <nodeA> <nodeB>"
            arity = (4,)
        if len(toks) not in arity:
            raise NetlistSyntaxError(f"expected: {expected}", lineno)
        name, a, b = toks[1:4]
        for tok in (name, a, b):
            _check_name(tok, lineno)
        for n in (a, b):
            if n not in seen_nodes:
                seen_nodes[n] = len(nl.nodes)
                nl.nodes.append(n)
        value = ctrl = None
        gain = mpq(1)
        if kind in TWO_TERMINAL:
            value = _value(toks[4], lineno)
        elif kind in CONTROLLED:
            ctrl = toks[4]
            if len(toks) == 6:
                gain = _value(toks[5], lineno)
        nl.elements.append(Element(kind, name, a, b, value, ctrl, gain, lineno))
    return nl.validate()


def _check_name(tok, lineno):
    if not _NAME.match(tok):
        raise NetlistSyntaxError(f"bad identifier {tok!r}", lineno)


def format_netlist(nl: Netlist) -> str:
    lines = []
    for e in nl.elements:
        if e.kind == "IN":
            lines.append(f"IN {e.name}")
        elif e.kind in TWO_TERMINAL:
            lines.append(f"{e.kind} {e.name} {e.node_a} {e.node_b} {e.value}")
        elif e.kind in CONTROLLED:
            gain = "" if e.gain == 1 else f" {e.gain}"
            lines.append(f"{e.kind} {e.name} {e.node_a} {e.node_b} {e.ctrl}{gain}")
        else:
            lines.append(f"{e.kind} {e.name} {e.node_a} {e.node_b}")
    return "\n".join(lines) + ("\n" if lines else "")


# compilation ----------------------------------------------------------------------------

def _fold(gen, k, sort):
    """``k -> 1`` tree of a binary generator ``gen : ss -> s``."""
    layers = [Par(Gen(gen), Id((sort,) * (k - 2 - j))) for j in range(k - 1)]
    return seq(*layers) if layers else Id((sort,))


def _unfold(gen, c, sort):
    layers = [Par(Gen(gen), Id((sort,) * j)) for j in range(c - 1)]
    return seq(*layers) if layers else Id((sort,))


def electric_spider(k: int, c: int) -> Term:
    """Node with ``k`` incoming and ``c`` outgoing wires: equal potentials, currents balance."""
    if k == 0 and c == 0:
        return seq(Gen("coopen"), Gen("open"))
    head = Gen("coopen") if k == 0 else _fold("cojunc", k, E)
    tail = Gen("open") if c == 0 else _unfold("junc", c, E)
    return seq(head, tail)


def info_spider(k: int, c: int) -> Term:
    """All ``k + c`` information wires carry the same value."""
    if k == 0 and c == 0:
        return seq(Gen("codiscard"), Gen("discard"))
    head = Gen("codiscard") if k == 0 else _fold("cocopy", k, N)
    tail = Gen("discard") if c == 0 else _unfold("copy", c, N)
    return seq(head, tail)


def _device_state(e: Element):
    """State ``ε -> legs`` of a device, with the leg labels in order.

    Electric legs are ``(node, "in")`` wires feeding that node's spider;
    info legs are ``(signal, "sig")``.
    """
    left, right = (e.node_b, "in"), (e.node_a, "in")
    if e.kind in TWO_TERMINAL:
        return seq(cup_e(), Par(Id((E,)), Gen(e.kind, e.value))), [left, right]
    if e.kind in METERS:
        g = Gen("ammeter" if e.kind == "AM" else "voltmeter")
        return seq(cup_e(), Par(Id((E,)), g)), [left, (e.name, "sig"), right]
    g = Gen("cvs" if e.kind == "CV" else "ccs")
    if e.gain != 1:
        g = seq(Par(Gen("scalar", e.gain), Id((E,))), g)
    # cup_n cup_e : n n e e -> route to n e n e, feed the inner n e into g
    state = seq(Par(cup_n(), cup_e()), par(Id((N,)), permutation((N, E), [1, 0]), Id((E,))),
                Par(Id((N, E)), g))
    return state, [(e.ctrl, "sig"), left, right]


def netlist_to_term(nl: Netlist) -> Term:
    """Compile a netlist to a term of sorting ``e^P n^U -> e^P n^M``."""
    ports, inputs, outputs = nl.ports, nl.inputs, nl.info_outputs
    states, legs = [], []
    # boundary legs come first
    for p in ports:
        legs.append(((p.node_b, "in"), E))
    for u in inputs:
        legs.append(((u, "sig"), N))
    for e in nl.devices:
        st, labels = _device_state(e)
        states.append(st)
        for lab in labels:
            legs.append((lab, N if lab[1] == "sig" else E))
    if not legs and not ports:
        return Id(())

    nodes = list(nl.nodes)
    signals = inputs + [m.name for m in nl.meters]
    # group legs by spider: nodes first, then signals
    order = []
    for n in nodes:
        order += [k for k, (lab, _) in enumerate(legs) if lab == (n, "in")]
    for s in signals:
        order += [k for k, (lab, _) in enumerate(legs) if lab == (s, "sig")]
    word = tuple(s for _, s in legs)

    spiders, produced = [], []
    for n in nodes:
        k = sum(1 for lab, _ in legs if lab == (n, "in"))
        outs = [j for j, p in enumerate(ports) if p.node_a == n]
        spiders.append(electric_spider(k, len(outs)))
        produced += [("port", j) for j in outs]
    for s in signals:
        k = sum(1 for lab, _ in legs if lab == (s, "sig"))
        c = 1 if s in outputs else 0
        spiders.append(info_spider(k, c))
        if c:
            produced.append(("out", s))
    target = [("port", j) for j in range(len(ports))] + [("out", s) for s in outputs]
    final = [produced.index(lab) for lab in target]
    produced_word = tuple(E if lab[0] == "port" else N for lab in produced)

    boundary = (E,) * len(ports) + (N,) * len(inputs)
    return seq(
        par(Id(boundary), *states),
        permutation(word, order),
        par(*spiders),
        permutation(produced_word, final),
    )


# direct oracle ----------------------------------------------------------------------------

def netlist_to_relation_direct(nl: Netlist, pin_ground: bool = False) -> AffineRelation:
    """Solve the netlist by nodal equations, without going through terms.

    Variables are the boundary coordinates (laid out as in
    ``netlist_to_term``), then node potentials, device currents and signal
    values; everything but the boundary is projected away.  With
    ``pin_ground`` the first port's ``b`` node is held at potential 0.
    """
    ports, inputs, outputs = nl.ports, nl.inputs, nl.info_outputs
    P, U, M = len(ports), len(inputs), len(outputs)
    dom, cod = 2 * P + U, 2 * P + M
    var: Dict[tuple, int] = {}

    def v(key):
        if key not in var:
            var[key] = dom + cod + len(var)
        return var[key]

    for j in range(P):
        var[("portL_phi", j)] = 2 * j
        var[("portL_i", j)] = 2 * j + 1
        var[("portR_phi", j)] = dom + 2 * j
        var[("portR_i", j)] = dom + 2 * j + 1
    for k, u in enumerate(inputs):
        var[("sig", u)] = 2 * P + k
    for k, name in enumerate(outputs):
        var[("sig", name)] = dom + 2 * P + k
    for n in nl.nodes:
        v(("phi", n))

    eqs = []  # (dict, rhs)

    def eq(coeffs, rhs=0):
        row = {}
        for key, a in coeffs:
            c = v(key)
            row[c] = row.get(c, 0) + a
        eqs.append((row, rhs))

    inj = {n: [] for n in nl.nodes}
    drawn = {n: [] for n in nl.nodes}
    for j, p in enumerate(ports):
        eq([(("portL_phi", j), 1), (("phi", p.node_b), -1)])
        eq([(("portR_phi", j), 1), (("phi", p.node_a), -1)])
        inj[p.node_b].append(("portL_i", j))
        drawn[p.node_a].append(("portR_i", j))
    for e in nl.devices:
        cur = ("cur", e.name)
        inj[e.node_a].append(cur)
        drawn[e.node_b].append(cur)
        drop = [(("phi", e.node_a), 1), (("phi", e.node_b), -1)]
        if e.kind == "R":
            eq(drop + [(cur, -e.value)])
        elif e.kind == "V":
            eq(drop, e.value)
        elif e.kind == "I":
            eq([(cur, 1)], e.value)
        elif e.kind == "L":
            eq(drop + [(cur, -e.value * X)])
        elif e.kind == "C":
            eq([(cur, 1), (("phi", e.node_a), -e.value * X), (("phi", e.node_b), e.value * X)])
        elif e.kind == "AM":
            eq(drop)
            eq([(("sig", e.name), 1), (cur, -1)])
        elif e.kind == "VM":
            eq([(cur, 1)])
            eq([(("sig", e.name), 1)] + [(k, -a) for k, a in drop])
        elif e.kind == "CV":
            eq(drop + [(("sig", e.ctrl), -e.gain)])
        elif e.kind == "CI":
            eq([(cur, 1), (("sig", e.ctrl), -e.gain)])
    for n in nl.nodes:
        eq([(k, 1) for k in inj[n]] + [(k, -1) for k in drawn[n]])
    if pin_ground and ports:
        eq([(("phi", ports[0].node_b), 1)])

    nvars = max(var.values()) + 1 if var else 0
    rows = [row for row, _ in eqs]
    rhs = [b for _, b in eqs]
    full = from_constraints(rows, rhs, nvars - cod, cod) if nvars else AffineRelation.identity(0)
    return full.project(list(range(dom + cod)), dom, cod)
