"""Small circuits that realise each information-wire generator.

Every gadget is built from basic elements, meters and controlled sources
only.  Most are a single loop: a top branch, a return branch, and the
meters placed so their readings have the right sign (see ``loop``).
"""

from __future__ import annotations

from gmpy2 import mpq

from .analysis import loop
from .diagram import (
    Box, E, Gen, Id, N, Par, Seq, Swap, Term, cap_n, cup_n, generators_of, seq,
    seq_factors,
)
from .field import X, Poly, RatFunc, lower

__all__ = ["UnknownGadget", "gadget", "gadget_names", "to_circuit", "scalar_term",
           "coscalar_term", "vccs", "GADGET_ELEMENT_KINDS"]

GADGET_ELEMENT_KINDS = frozenset([
    "R", "V", "I", "L", "C", "junc", "cojunc", "open", "coopen",
    "voltmeter", "ammeter", "cvs", "ccs",
])


class UnknownGadget(KeyError):
    pass


_n = Id((N,))
_e = Id((E,))


def _g(kind, p=None):
    return Gen(kind, p)


def _probe(element: Term) -> Term:
    """``e -> n e``: ``element`` with a voltmeter across it."""
    return seq(_g("junc"), Par(element, _g("voltmeter")), Par(Swap(E, N), _e),
               Par(_n, _g("cojunc")))


def _scale_by(element: Term) -> Term:
    """``n -> n``: drive ``a`` through ``element`` and read the drop."""
    return loop(Seq(_g("ccs"), _probe(element)))


def _coscale_by(element: Term) -> Term:
    """``n -> n``: impose drop ``a`` on ``element`` and read its current."""
    return loop(Seq(_g("cvs"), element), _g("ammeter"))


def _antipode() -> Term:
    return loop(Seq(_g("cvs"), _g("voltmeter")))


def _const_scalar(c) -> Term:
    c = mpq(c)
    t = _scale_by(_g("R", abs(c)))
    return Seq(t, _antipode()) if c < 0 else t


def _const_coscalar(c) -> Term:
    c = mpq(c)
    t = _coscale_by(_g("R", abs(c)))
    return Seq(_antipode(), t) if c < 0 else t


_BASIC = {
    "discard": lambda: seq(Par(_n, _g("coopen")), _g("cvs"), _g("open")),
    "codiscard": lambda: seq(_g("coopen"), _g("voltmeter"), Par(_n, _g("open"))),
    "zero": lambda: seq(_g("coopen"), _g("ammeter"), Par(_n, _g("open"))),
    "cozero": lambda: loop(_g("cvs")),
    "one": lambda: loop(_g("V", 1), _g("voltmeter")),
    "add": lambda: loop(Seq(Par(_n, _g("cvs")), _g("cvs")), _g("voltmeter")),
    "coadd": lambda: loop(_g("cvs"), Seq(_g("voltmeter"), Par(_n, _g("voltmeter")))),
    "copy": lambda: loop(seq(_g("ccs"), _g("ammeter"), Par(_n, _g("ammeter")))),
    "cocopy": lambda: loop(seq(Par(_n, _g("ccs")), _g("ccs"), _g("ammeter"))),
    "antipode": _antipode,
}


def _poly_scalar(p: Poly, co: bool) -> Term:
    """GAA term for multiplication by polynomial ``p`` (Horner form).

    ``co`` builds the converse term instead.
    """
    cs = list(p.coeffs) or [mpq(0)]
    k = lambda c: _g("coscalar" if co else "scalar", c)
    xk = _g("coscalar" if co else "scalar", X)
    term = k(cs[-1])
    for c in reversed(cs[:-1]):
        if co:
            term = seq(_g("coadd"), Par(k(c), Seq(xk, term)), _g("cocopy"))
        else:
            term = seq(_g("copy"), Par(k(c), Seq(term, xk)), _g("add"))
    return term


def scalar_term(k) -> Term:
    """GAA term over constants and ``x`` denoting multiplication by ``k``."""
    k = RatFunc.from_value(k)
    if k.den.degree == 0:
        return _poly_scalar(k.num, co=False)
    return Seq(_poly_scalar(k.num, co=False), _poly_scalar(k.den, co=True))


def coscalar_term(k) -> Term:
    k = RatFunc.from_value(k)
    if k.den.degree == 0:
        return _poly_scalar(k.num, co=True)
    return Seq(_poly_scalar(k.den, co=False), _poly_scalar(k.num, co=True))


def _atomic_scalar(k, co):
    """Gadget for a scalar that is a constant or exactly ``x``."""
    k = lower(k)
    if not isinstance(k, RatFunc):
        return _const_coscalar(k) if co else _const_scalar(k)
    if k == X:
        return _coscale_by(_g("L", 1)) if co else _scale_by(_g("L", 1))
    raise ValueError(f"not an atomic scalar: {k}")


def to_circuit(t: Term) -> Term:
    """Replace every information-wire generator of ``t`` by its gadget."""
    if isinstance(t, Seq):
        return seq(*[to_circuit(f) for f in seq_factors(t)])
    if isinstance(t, Par):
        return Par(to_circuit(t.t1), to_circuit(t.t2))
    if isinstance(t, (Id, Swap)):
        return t
    if isinstance(t, Box):
        raise UnknownGadget("boxes have no gadget; expand the payload first")
    if t.kind in GADGET_ELEMENT_KINDS:
        return t
    if t.kind in _BASIC:
        return _BASIC[t.kind]()
    if t.kind in ("scalar", "coscalar"):
        co = t.kind == "coscalar"
        k = lower(t.param)
        if not isinstance(k, RatFunc) or k == X:
            return _atomic_scalar(k, co)
        expanded = coscalar_term(k) if co else scalar_term(k)
        return seq(*[_expand_atomic(f) for f in seq_factors(expanded)])
    raise UnknownGadget(t.kind)


def _expand_atomic(t):
    if isinstance(t, Gen) and t.kind in ("scalar", "coscalar"):
        return _atomic_scalar(t.param, t.kind == "coscalar")
    if isinstance(t, Seq):
        return seq(*[_expand_atomic(f) for f in seq_factors(t)])
    if isinstance(t, Par):
        return Par(_expand_atomic(t.t1), _expand_atomic(t.t2))
    return to_circuit(t)


def vccs() -> Term:
    """Voltage-controlled current source ``e e -> e e``.

    A voltmeter across the first wire sets the current of a controlled
    current source on the second.
    """
    return seq(Par(_g("voltmeter"), _e), Par(Swap(N, E), _e), Par(_e, _g("ccs")))


def gadget_names():
    return sorted(list(_BASIC) + ["scalar", "coscalar", "cup", "cap", "vccs"])


def gadget(g: str, param=None) -> Term:
    """Circuit realising generator ``g`` (``scalar``/``coscalar`` take ``param``)."""
    if g in _BASIC:
        return _BASIC[g]()
    if g in ("scalar", "coscalar"):
        if param is None:
            raise ValueError(f"{g} gadget needs a parameter")
        return to_circuit(Gen(g, param))
    if g == "cup":
        return to_circuit(cup_n())
    if g == "cap":
        return to_circuit(cap_n())
    if g == "vccs":
        return vccs()
    raise UnknownGadget(g)


def reference(g: str, param=None) -> Term:
    """The information-wire term each gadget is meant to denote."""
    if g == "antipode":
        return Gen("scalar", -1)
    if g in ("scalar", "coscalar"):
        return Gen(g, param)
    if g == "cup":
        return cup_n()
    if g == "cap":
        return cap_n()
    if g == "vccs":
        raise UnknownGadget("vccs has no single-generator reference")
    return Gen(g)


def uses_only_circuit_elements(t: Term) -> bool:
    return all(isinstance(g, Gen) and g.kind in GADGET_ELEMENT_KINDS for g in generators_of(t))
