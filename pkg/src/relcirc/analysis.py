"""Impedance calculus, one-ports, Thevenin forms, measurement and superposition checks.

A payload is a GAA term ``n -> n`` relating a port current (input) to the
voltage drop across the port (output); ``Box(0, 0, payload)`` turns it into
an electric element.  Everything here is verified semantically: both sides
of a claimed law are computed as canonical relations and compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from gmpy2 import mpq

from .affine import (
    AffineRelation, Functionality, compose, contains, from_constraints, functionality,
    tensor,
)
from .diagram import (
    Box, E, Gen, Id, N, Par, Seq, SortMismatch, Term, cap_e, cup_e, generators_of,
    par, permutation, seq, seq_factors, sort_check,
)
from .field import RatFunc, format_value, lower, to_field
from .semantics import denote

__all__ = [
    "BadPayloadSort", "NotInfoWire", "InvariantViolation", "ForbiddenElement",
    "PatternMismatch", "IndependentSourcePresent",
    "vsource_payload", "csource_payload", "series_box", "parallel_box", "reverse_box",
    "close_box", "reverse", "series", "parallel", "loop", "plug",
    "PortInvariants", "check_port_invariants", "one_port_relation", "synthesize_box",
    "TheveninForm", "SeriesVR", "CurrentSrc", "EmptyCircuit", "NonCanonical",
    "thevenin", "source_transform",
    "MeasurementResult", "measure", "CheckReport", "check_independent_measurement",
    "check_superposition",
]

ZERO = mpq(0)


class BadPayloadSort(TypeError):
    pass


class NotInfoWire(TypeError):
    pass


class InvariantViolation(AssertionError):
    pass


class ForbiddenElement(ValueError):
    def __init__(self, which):
        super().__init__(f"element {which} is not allowed here")
        self.which = which


class PatternMismatch(ValueError):
    pass


class IndependentSourcePresent(ValueError):
    pass


# impedance calculus ------------------------------------------------------------------

def _check_payload(c: Term):
    try:
        dom, cod = sort_check(c)
    except (SortMismatch, TypeError) as exc:
        raise BadPayloadSort(f"payload does not sort-check: {exc}") from None
    if dom != (N,) or cod != (N,):
        raise BadPayloadSort("payload must have sorting n -> n")
    return c


def _q(v):
    return Gen("scalar", v)


def vsource_payload(v) -> Term:
    """Payload ``{(i, V)}``: the drop is ``V`` whatever the current."""
    return seq(Gen("discard"), Gen("one"), _q(v))


def csource_payload(i) -> Term:
    """Payload ``{(I, v)}``: the current is ``I`` whatever the drop."""
    neg = -to_field(i)
    return seq(par(Id((N,)), Seq(Gen("one"), _q(neg))), Gen("add"), Gen("cozero"),
               Gen("codiscard"))


def series_box(c1: Term, c2: Term) -> Term:
    """Payload of two impedances in series: drops add, current shared."""
    _check_payload(c1)
    _check_payload(c2)
    return seq(Gen("copy"), Par(c1, c2), Gen("add"))


def parallel_box(c1: Term, c2: Term) -> Term:
    """Payload of two impedances in parallel: currents add, drop shared."""
    _check_payload(c1)
    _check_payload(c2)
    return seq(Gen("coadd"), Par(c1, c2), Gen("cocopy"))


def reverse_box(c: Term) -> Term:
    """Payload of an impedance turned around: current and drop change sign."""
    _check_payload(c)
    return seq(_q(-1), c, _q(-1))


def close_box(c: Term) -> AffineRelation:
    """The ``0 -> 0`` relation of an impedance shorted on itself."""
    _check_payload(c)
    return denote(seq(Gen("codiscard"), c, Gen("cozero")))


def series(t1: Term, t2: Term) -> Term:
    return Seq(t1, t2)


def parallel(t1: Term, t2: Term) -> Term:
    """Two one-ports side by side between a junction and a co-junction."""
    return seq(Gen("junc"), Par(t1, t2), Gen("cojunc"))


def loop(top: Term, bottom: Optional[Term] = None) -> Term:
    """Close ``top`` and a return path ``bottom`` into one loop.

    ``top : A e -> A' e`` and ``bottom : B e -> B' e`` (``A``, ``B`` info
    words); the result has sorting ``A B -> A' B'``.  The return path carries
    the loop current with the opposite sign, so an ammeter placed in
    ``bottom`` reads the current flowing against ``top``.
    """
    bottom = Id((E,)) if bottom is None else bottom
    d1, c1 = sort_check(top)
    d2, c2 = sort_check(bottom)
    for d, c in ((d1, c1), (d2, c2)):
        if not d or d[-1] is not E or not c or c[-1] is not E:
            raise SortMismatch("loop", (E,), d)
    a_in, b_in, a_out, b_out = d1[:-1], d2[:-1], c1[:-1], c2[:-1]
    na, nb = len(a_in), len(b_in)
    # a_in e e b_in -> a_in e b_in e
    w1 = a_in + (E, E) + b_in
    p1 = list(range(na)) + [na] + list(range(na + 2, na + 2 + nb)) + [na + 1]
    # a_out e b_out e -> a_out b_out e e
    ka, kb = len(a_out), len(b_out)
    w2 = a_out + (E,) + b_out + (E,)
    p2 = list(range(ka)) + list(range(ka + 1, ka + 1 + kb)) + [ka, ka + 1 + kb]
    return seq(par(Id(a_in), cup_e(), Id(b_in)), permutation(w1, p1), Par(top, bottom),
               permutation(w2, p2), Par(Id(a_out + b_out), cap_e()))


def reverse(t: Term) -> Term:
    """Turn an ``e -> e`` term around using electric cups and caps."""
    dom, cod = sort_check(t)
    if dom != (E,) or cod != (E,):
        raise SortMismatch("reverse", (E,), dom)
    w = Id((E,))
    return seq(Par(w, cup_e()), par(w, t, w), Par(cap_e(), w))


def plug(t: Term, side: str, index: int, mode: str) -> Term:
    """Switch off a controlled-source input or ignore a meter output.

    ``source_off`` feeds ``zero`` into domain wire ``index``; ``meter_discard``
    sends codomain wire ``index`` to ``discard``.
    """
    dom, cod = sort_check(t)
    if side not in ("domain", "codomain"):
        raise ValueError("side must be 'domain' or 'codomain'")
    w = dom if side == "domain" else cod
    if not 0 <= index < len(w):
        raise IndexError(f"no boundary wire {index} on the {side}")
    if w[index] is not N:
        raise NotInfoWire(f"{side} wire {index} is electric")
    before, after = Id(w[:index]), Id(w[index + 1:])
    if side == "domain":
        if mode != "source_off":
            raise ValueError("domain wires are plugged with mode 'source_off'")
        return Seq(par(before, Gen("zero"), after), t)
    if mode != "meter_discard":
        raise ValueError("codomain wires are plugged with mode 'meter_discard'")
    return Seq(t, par(before, Gen("discard"), after))


def _plug_many(t, keep_dom=None, keep_cod=None):
    """Plug every info wire except the kept one on each side (``None`` keeps all)."""
    dom, cod = sort_check(t)
    out = t
    if keep_dom is not None:
        parts = [Id((s,)) if (k == keep_dom or s is E) else Gen("zero") for k, s in enumerate(dom)]
        out = Seq(par(*parts), out)
    if keep_cod is not None:
        parts = [Id((s,)) if (k == keep_cod or s is E) else Gen("discard") for k, s in enumerate(cod)]
        out = Seq(out, par(*parts))
    return out


# port invariants and one-ports ---------------------------------------------------

@dataclass(frozen=True)
class PortInvariants:
    relativity: bool
    conservation: bool

    def as_dict(self):
        return {"relativity": self.relativity, "conservation": self.conservation}


def _electric_layout(word):
    """Scalar positions of the potential and current of each wire in ``word``."""
    pos, phis, curs = 0, [], []
    for s in word:
        if s is not E:
            raise SortMismatch("boundary", (E,) * len(word), word)
        phis.append(pos)
        curs.append(pos + 1)
        pos += 2
    return phis, curs


def check_port_invariants(t: Term, rel: Optional[AffineRelation] = None) -> PortInvariants:
    """Relativity of potentials and conservation of currents for ``t``."""
    dom, cod = sort_check(t)
    pd, cd = _electric_layout(dom)
    pc, cc = _electric_layout(cod)
    R = denote(t) if rel is None else rel
    if R.is_empty:
        return PortInvariants(True, True)
    m = R.dom_width
    shift = [ZERO] * R.width
    for c in pd + [m + p for p in pc]:
        shift[c] = mpq(1)
    relativity = R.in_direction(shift)
    functional = {c: 1 for c in cd}
    for c in cc:
        functional[m + c] = -1

    def apply(vec):
        acc = ZERO
        for c, s in functional.items():
            acc = acc + s * vec[c]
        return not lower(acc) if isinstance(acc, RatFunc) else not acc

    conservation = apply(R.offset) and all(apply(b) for b in R.basis)
    return PortInvariants(relativity, conservation)


def one_port_relation(t: Term) -> AffineRelation:
    """Impedance relation ``{(i, v)}`` of an ``e -> e`` term.

    The left potential is pinned to zero, which loses nothing because
    potentials are only defined up to a common shift.
    """
    dom, cod = sort_check(t)
    if dom != (E,) or cod != (E,):
        raise SortMismatch("one-port", ((E,), (E,)), (dom, cod))
    R = denote(t)
    inv = check_port_invariants(t, R)
    if not (inv.relativity and inv.conservation):
        raise InvariantViolation(f"one-port violates port invariants: {inv}")
    # variables: phi1, i1, phi2, i2 | i, v
    E_, f = R.to_constraints()
    rows = [list(r) + [ZERO, ZERO] for r in E_]
    rows.append([1, 0, 0, 0, 0, 0])
    rows.append([0, 1, 0, 0, -1, 0])
    rows.append([-1, 0, 1, 0, 0, -1])
    full = from_constraints(rows, list(f) + [0, 0, 0], 4, 2)
    return full.project([4, 5], 1, 1)


def synthesize_box(Z: AffineRelation) -> Term:
    """A GAA payload whose relation is the ``1 -> 1`` relation ``Z``."""
    if (Z.dom_width, Z.cod_width) != (1, 1):
        raise BadPayloadSort("impedance relations have type 1 -> 1")
    if Z.is_empty:
        return seq(Gen("discard"), Gen("one"), Gen("cozero"), Gen("codiscard"))
    if Z.dim == 2:
        return Seq(Gen("discard"), Gen("codiscard"))
    off = Z.offset
    if Z.dim == 0:
        a, b = off
        return seq(Par(Id((N,)), Seq(Gen("one"), _q(-a))), Gen("add"), Gen("cozero"),
                   Gen("one"), _q(b))
    (row,) = Z.basis
    if row[0]:
        slope = lower(row[1])
        v0 = lower(off[1])
        if not v0:
            return _q(slope)
        return seq(_q(slope), Par(Id((N,)), Seq(Gen("one"), _q(v0))), Gen("add"))
    return csource_payload(off[0])


# Thevenin ----------------------------------------------------------------------------

THEVENIN_KINDS = frozenset(["R", "V", "I", "junc", "cojunc", "open", "coopen"])


class TheveninForm:
    """Canonical one-port: source plus resistor, current source, or empty."""

    case = ""

    def relation(self) -> AffineRelation:
        raise NotImplementedError

    def to_term(self) -> Term:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class SeriesVR(TheveninForm):
    V0: object
    R: object
    case = "series_vr"

    def relation(self):
        return from_constraints([[self.R, -1]], [-to_field(self.V0)], 1, 1)

    def to_term(self):
        return Seq(Gen("V", self.V0), Gen("R", self.R))

    def to_json(self):
        return {"case": self.case, "V0": format_value(self.V0), "R": format_value(self.R)}


@dataclass(frozen=True)
class CurrentSrc(TheveninForm):
    I0: object
    case = "current_src"

    def relation(self):
        return from_constraints([[1, 0]], [self.I0], 1, 1)

    def to_term(self):
        return Gen("I", self.I0)

    def to_json(self):
        return {"case": self.case, "I0": format_value(self.I0)}


@dataclass(frozen=True)
class EmptyCircuit(TheveninForm):
    case = "empty"

    def relation(self):
        return AffineRelation.empty(1, 1)

    def to_term(self):
        # two different voltage sources in parallel: no consistent behaviour
        return parallel(Gen("V", 0), Gen("V", 1))

    def to_json(self):
        return {"case": self.case}


@dataclass(frozen=True)
class NonCanonical(TheveninForm):
    Z: AffineRelation
    case = "non_canonical"

    def relation(self):
        return self.Z

    def to_term(self):
        return Box(0, 0, synthesize_box(self.Z))

    def to_json(self):
        return {"case": self.case, "relation": self.Z.to_json()}


def classify_one_port(Z: AffineRelation) -> TheveninForm:
    if Z.is_empty:
        return EmptyCircuit()
    if Z.dim == 1:
        (row,) = Z.basis
        off = Z.offset
        if row[0]:
            slope = lower(row[1])
            if not isinstance(slope, RatFunc) and slope >= 0:
                return SeriesVR(lower(off[1]), slope)
        else:
            return CurrentSrc(lower(off[0]))
    return NonCanonical(Z)


def thevenin(t: Term) -> TheveninForm:
    """Classify a resistor-and-source one-port into its canonical form."""
    for g in generators_of(t):
        if isinstance(g, Box):
            raise ForbiddenElement("box")
        if g.kind not in THEVENIN_KINDS:
            raise ForbiddenElement(g.kind)
    return classify_one_port(one_port_relation(t))


def _match_parallel(t):
    factors = seq_factors(t)
    if len(factors) != 3:
        return None
    j, mid, cj = factors
    if not (isinstance(j, Gen) and j.kind == "junc" and isinstance(cj, Gen)
            and cj.kind == "cojunc" and isinstance(mid, Par)):
        return None
    return mid.t1, mid.t2


def source_transform(t: Term) -> Term:
    """Rewrite a current source in parallel with a resistor as a series pair.

    With currents oriented left to right through every element, ``I`` in
    parallel with ``R`` has drop ``R*i - R*I``, so the equivalent voltage
    source has value ``-R*I``.
    """
    pair = _match_parallel(t)
    if pair is None:
        raise PatternMismatch("expected junc ; (I(..) | R(..)) ; cojunc")
    a, b = pair
    if isinstance(a, Gen) and a.kind == "R":
        a, b = b, a
    if not (isinstance(a, Gen) and a.kind == "I" and isinstance(b, Gen) and b.kind == "R"):
        raise PatternMismatch("expected a current source parallel to a resistor")
    if b.param <= 0:
        raise PatternMismatch("resistance must be positive; a zero resistor shorts the source")
    return Seq(Gen("V", -b.param * a.param), Gen("R", b.param))


# measurement ----------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasurementResult:
    relation: AffineRelation
    classification: str  # "empty" | "unique_point" | "underdetermined"
    values: Optional[Tuple] = None
    dim: Optional[int] = None

    def to_json(self):
        out = {"classification": self.classification}
        if self.values is not None:
            out["values"] = [format_value(v) for v in self.values]
        if self.dim is not None:
            out["dim"] = self.dim
        out["relation"] = self.relation.to_json()
        return out


def classify_measurement(R: AffineRelation) -> MeasurementResult:
    if R.is_empty:
        return MeasurementResult(R, "empty")
    if R.dim == 0:
        return MeasurementResult(R, "unique_point", values=tuple(lower(v) for v in R.offset))
    return MeasurementResult(R, "underdetermined", dim=R.dim)


def measure(t: Term) -> MeasurementResult:
    """Solve a closed circuit whose only boundary is meter outputs."""
    dom, cod = sort_check(t)
    if dom or any(s is not N for s in cod):
        raise SortMismatch("measure", ((), (N,) * len(cod)), (dom, cod))
    return classify_measurement(denote(t))


# independent measurement and superposition ----------------------------------------------------

@dataclass
class CheckReport:
    inclusion_holds: bool
    equality_holds: bool
    lhs: AffineRelation
    rhs: AffineRelation
    functional_witness: List[Functionality] = field(default_factory=list)

    @property
    def strict(self):
        return self.inclusion_holds and not self.equality_holds

    def to_json(self):
        return {
            "inclusion_holds": self.inclusion_holds,
            "equality_holds": self.equality_holds,
            "strict": self.strict,
            "functional_witness": [w.as_dict() for w in self.functional_witness],
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
        }


def _info_boundary(t, what):
    dom, cod = sort_check(t)
    if any(s is not N for s in dom + cod):
        raise SortMismatch(what, ((N,) * len(dom), (N,) * len(cod)), (dom, cod))
    return len(dom), len(cod)


def check_independent_measurement(t: Term) -> CheckReport:
    """Joint readings versus readings taken one meter at a time.

    The right-hand side keeps every reading ``b_j`` that is possible for
    the same inputs when all other meters are ignored.  With no inputs this
    is the product of the single-meter relations.
    """
    m, n = _info_boundary(t, "independent measurement")
    joint = denote(t)
    singles = [denote(_plug_many(t, keep_cod=j)) for j in range(n)]
    rows, rhs = [], []
    for j, Rj in enumerate(singles):
        Ej, fj = Rj.to_constraints()
        for r, b in zip(Ej, fj):
            row = [ZERO] * (m + n)
            row[:m] = r[:m]
            row[m + j] = r[m]
            rows.append(row)
            rhs.append(b)
    product = from_constraints(rows, rhs, m, n)
    return CheckReport(
        inclusion_holds=contains(product, joint),
        equality_holds=product == joint,
        lhs=joint,
        rhs=product,
        functional_witness=[functionality(Rj) for Rj in singles],
    )


def _has_independent_sources(t):
    stack = [t]
    while stack:
        u = stack.pop()
        for g in generators_of(u):
            if isinstance(g, Box):
                stack.append(g.body)
            elif g.kind in ("V", "I") and g.param != 0:
                return f"{g.kind}({g.param})"
            elif g.kind == "one":
                return "one"
    return None


def check_superposition(t: Term) -> CheckReport:
    """Sum of single-source behaviours versus the joint behaviour."""
    found = _has_independent_sources(t)
    if found:
        raise IndependentSourcePresent(
            f"independent source {found}; feed it from an input wire instead")
    m, p = _info_boundary(t, "superposition")
    joint = denote(t)
    singles = [denote(_plug_many(t, keep_dom=j)) for j in range(m)]
    acc = AffineRelation.identity(0)
    for G in singles:
        acc = tensor(acc, G)
    # sum: inputs y_{j,k} (j-th source, k-th reading) -> outputs b_k
    rows = []
    for k in range(p):
        row = [ZERO] * (m * p + p)
        for j in range(m):
            row[j * p + k] = mpq(1)
        row[m * p + k] = mpq(-1)
        rows.append(row)
    total = from_constraints(rows, [0] * p, m * p, p)
    lhs = compose(acc, total)
    return CheckReport(
        inclusion_holds=contains(joint, lhs),
        equality_holds=lhs == joint,
        lhs=lhs,
        rhs=joint,
        functional_witness=[functionality(G) for G in singles],
    )
