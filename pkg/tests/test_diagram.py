import random

import pytest
from hypothesis import given, strategies as st

from relcirc.diagram import (
    Box, E, Gen, Id, N, Par, Seq, Swap, BadParameter, IllFormedBox, SortMismatch,
    TermSyntaxError, parse_term, permutation, pretty_print, sort_check, width, word,
)
from relcirc.field import X
from relcirc.random_circuits import rand_electric_term, rand_payload
from relcirc.semantics import denote

from conftest import seeds

ATOMS = [
    Gen("R", 2), Gen("R", 0), Gen("V", "-3/2"), Gen("I", 4), Gen("L", 1), Gen("C", "1/3"),
    Gen("junc"), Gen("cojunc"), Gen("open"), Gen("coopen"), Gen("voltmeter"),
    Gen("ammeter"), Gen("cvs"), Gen("ccs"), Gen("copy"), Gen("discard"), Gen("add"),
    Gen("zero"), Gen("one"), Gen("cocopy"), Gen("codiscard"), Gen("coadd"), Gen("cozero"),
    Gen("scalar", (X * X * 3 - 1) / (X + 2)), Gen("coscalar", 5), Id((E,)), Id((N,)),
    Id(()), Id((E, N)), Swap(E, N), Swap(N, N), Swap(E, E), Swap(N, E),
]


def _extend(children):
    return st.one_of(
        st.builds(Seq, children, children),
        st.builds(Par, children, children),
        st.builds(lambda b: Box(0, 0, b), children),
        st.builds(lambda b: Box(1, 2, b), children),
    )


any_terms = st.recursive(st.sampled_from(ATOMS), _extend, max_leaves=12)


# sorting

def test_sort_examples():
    assert sort_check(Seq(Gen("V", 5), Gen("R", 2))) == ((E,), (E,))
    assert sort_check(Seq(Gen("R", 1), Gen("voltmeter"))) == ((E,), (N, E))
    with pytest.raises(SortMismatch):
        sort_check(Seq(Gen("copy"), Gen("R", 1)))


@pytest.mark.parametrize("kind,dom,cod", [
    ("voltmeter", "e", "ne"), ("ammeter", "e", "ne"), ("cvs", "ne", "e"), ("ccs", "ne", "e"),
    ("junc", "e", "ee"), ("cojunc", "ee", "e"), ("open", "e", ""), ("coopen", "", "e"),
    ("copy", "n", "nn"), ("one", "", "n"), ("cozero", "n", ""),
])
def test_generator_sorts(kind, dom, cod):
    assert sort_check(Gen(kind)) == (word(dom), word(cod))


def test_box_sorting():
    assert sort_check(Box(1, 0, Gen("add"))) == ((N, E), (E,))
    with pytest.raises(IllFormedBox):
        sort_check(Box(0, 0, Gen("add")))
    with pytest.raises(IllFormedBox):
        sort_check(Box(0, 0, Gen("R", 1)))


def test_widths():
    assert width(word("en")) == 3
    assert width(()) == 0


@pytest.mark.parametrize("kind,param", [("R", -1), ("L", 0), ("C", -2), ("R", X), ("junc", 1)])
def test_bad_parameters(kind, param):
    with pytest.raises(BadParameter):
        Gen(kind, param)


def test_sort_error_reports_position():
    with pytest.raises(SortMismatch) as info:
        sort_check(parse_term("R(1) ;\n  copy"))
    assert info.value.pos is not None


# grammar

def test_parse_examples():
    assert parse_term("V(5) ; R(2)") == Seq(Gen("V", 5), Gen("R", 2))
    assert parse_term("box{ scalar(3*x) }") == Box(0, 0, Gen("scalar", X * 3))
    assert parse_term("copy ; (id:n | one)") == Seq(Gen("copy"), Par(Id((N,)), Gen("one")))
    assert parse_term("box(1,0){add}") == Box(1, 0, Gen("add"))


def test_print_examples():
    assert pretty_print(Par(Id((E,)), Gen("open"))) == "id:e | open"
    assert pretty_print(Seq(Seq(Gen("R", 1), Gen("R", 2)), Gen("R", 3))) == "R(1) ; R(2) ; R(3)"
    assert pretty_print(Seq(Gen("R", 1), Seq(Gen("R", 2), Gen("R", 3)))) == "R(1) ; (R(2) ; R(3))"


def test_comments_and_whitespace():
    t = parse_term("# a source\nV(5)   # volts\n ;\n R(2)\n")
    assert t == Seq(Gen("V", 5), Gen("R", 2))


@pytest.mark.parametrize("text,line,col", [
    ("R(1) ; ", 1, 8),
    ("R(1) ;\nfoo", 2, 1),
    ("(R(1)", 1, 6),
    ("scalar(x+)", 1, 8),
])
def test_syntax_errors_have_location(text, line, col):
    with pytest.raises(TermSyntaxError) as info:
        parse_term(text)
    assert info.value.line == line
    assert info.value.col >= 1


@given(any_terms)
def test_print_parse_round_trip(t):
    assert parse_term(pretty_print(t)) == t


@given(seeds)
def test_round_trip_on_random_circuits(seed):
    rng = random.Random(seed)
    for t in (rand_electric_term(rng, max_gens=40), rand_payload(rng)):
        assert parse_term(pretty_print(t)) == t


@given(seeds)
def test_sorting_matches_denotation_widths(seed):
    rng = random.Random(seed)
    t = rand_electric_term(rng, max_gens=30)
    dom, cod = sort_check(t)
    R = denote(t)
    assert (R.dom_width, R.cod_width) == (width(dom), width(cod))


@given(st.permutations(range(5)), st.lists(st.sampled_from([E, N]), min_size=5, max_size=5))
def test_permutation_routes_wires(perm, w):
    t = permutation(w, perm)
    assert sort_check(t) == (tuple(w), tuple(w[p] for p in perm))
