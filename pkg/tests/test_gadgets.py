import pytest
from gmpy2 import mpq
from hypothesis import given

from relcirc.affine import AffineRelation
from relcirc.diagram import E, Gen, sort_check
from relcirc.field import X
from relcirc.gadgets import (
    UnknownGadget, coscalar_term, gadget, gadget_names, reference, scalar_term, to_circuit,
    uses_only_circuit_elements, vccs,
)
from relcirc.semantics import denote

from conftest import nonzero_ratfuncs, ratfuncs

SCALARS = [mpq(0), mpq(1), mpq(-1), mpq(5, 2), mpq(-3), X, X * 2 - 1, 1 / X, (X + 1) / (X * X - 2)]
PLAIN = [g for g in gadget_names() if g not in ("scalar", "coscalar", "vccs")]


@pytest.mark.parametrize("g", PLAIN)
def test_gadget_sound(g):
    t = gadget(g)
    assert uses_only_circuit_elements(t)
    assert denote(t) == denote(reference(g))


@pytest.mark.parametrize("k", SCALARS, ids=str)
@pytest.mark.parametrize("g", ["scalar", "coscalar"])
def test_scalar_gadgets(g, k):
    t = gadget(g, k)
    assert uses_only_circuit_elements(t)
    assert denote(t) == denote(Gen(g, k))


def test_named_examples():
    assert denote(gadget("one")) == AffineRelation.point([], [1])
    assert denote(gadget("add")).contains_point([2, 3, 5])


def test_vccs():
    t = vccs()
    assert uses_only_circuit_elements(t)
    assert sort_check(t) == ((E, E), (E, E))
    # current on the second wire equals the drop on the first, which draws no current
    R = denote(t)
    # (phi1, i1, psi1, j1 | phi2, i2, psi2, j2) with phi2 - phi1 = 3
    assert R.contains_point([0, 0, 7, 3, 3, 0, 11, 3])
    assert not R.contains_point([0, 0, 7, 2, 3, 0, 11, 2])


def test_unknown_gadget():
    with pytest.raises(UnknownGadget):
        gadget("frobnicate")
    with pytest.raises(ValueError):
        gadget("scalar")


@given(ratfuncs)
def test_scalar_terms(k):
    assert denote(scalar_term(k)) == denote(Gen("scalar", k))
    assert denote(coscalar_term(k)) == denote(Gen("coscalar", k))


@given(nonzero_ratfuncs)
def test_to_circuit_on_scalars(k):
    t = to_circuit(Gen("scalar", k))
    assert uses_only_circuit_elements(t)
    assert denote(t) == denote(Gen("scalar", k))


def test_to_circuit_on_composite():
    from relcirc.diagram import parse_term
    t = parse_term("copy ; (scalar(2) | scalar(x)) ; add")
    c = to_circuit(t)
    assert uses_only_circuit_elements(c)
    assert denote(c) == denote(t)
