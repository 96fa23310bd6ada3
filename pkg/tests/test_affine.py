import itertools
import json
import random

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from relcirc.affine import (
    AffineRelation, DimensionMismatch, WidthMismatch, canonicalize, compose, contains,
    converse, from_constraints, functionality, intersect, tensor,
)
from relcirc.field import X
from relcirc.random_circuits import rand_relation

from conftest import relations, seeds

GRID = [mpq(v) for v in range(-2, 3)]


def compose_by_elimination(R, S):
    """Independent oracle: stack both constraint systems over (u, v, w), project v away."""
    m, n, p = R.dom_width, R.cod_width, S.cod_width
    E1, f1 = R.to_constraints()
    E2, f2 = S.to_constraints()
    rows = [list(r) + [0] * p for r in E1] + [[0] * m + list(r) for r in E2]
    big = from_constraints(rows, list(f1) + list(f2), m, n + p)
    return big.project(list(range(m)) + list(range(m + n, m + n + p)), m, p)


def widths():
    return st.integers(min_value=0, max_value=3)


# canonical form examples

def test_canonicalize_scales_pivot_and_reduces_offset():
    R = canonicalize([1, 1], [[2, 0]], 1, 1)
    assert R.offset == (0, 1) and R.basis == ((1, 0),)


def test_canonicalize_drops_dependent_rows():
    assert canonicalize([0, 0], [[1, 1], [2, 2]], 1, 1).basis == ((1, 1),)


def test_canonicalize_offset_in_span():
    R = canonicalize([3, 6], [[1, 2]], 1, 1)
    assert R.offset == (0, 0) and R.basis == ((1, 2),)


def test_canonicalize_rejects_bad_length():
    with pytest.raises(DimensionMismatch):
        canonicalize([0], [[1, 1]], 1, 1)


def test_compose_copy_add():
    copy = canonicalize([0, 0, 0], [[1, 1, 1]], 1, 2)
    add = from_constraints([[1, 1, -1]], [0], 2, 1)
    assert compose(copy, add) == canonicalize([0, 0], [[1, 2]], 1, 1)


def test_compose_width_mismatch():
    with pytest.raises(WidthMismatch):
        compose(AffineRelation.identity(1), AffineRelation.identity(2))


def test_tensor_examples():
    assert tensor(AffineRelation.identity(1), AffineRelation.identity(1)) == AffineRelation.identity(2)
    assert tensor(AffineRelation.empty(1, 0), AffineRelation.identity(2)).is_empty
    one, two = AffineRelation.point([], [1]), AffineRelation.point([], [2])
    assert tensor(one, two) == AffineRelation.point([], [1, 2])


def test_converse_examples():
    k = X + 1
    scalar = canonicalize([0, 0], [[1, k]], 1, 1)
    assert converse(scalar) == canonicalize([0, 0], [[k, 1]], 1, 1)
    assert converse(AffineRelation.empty(2, 1)) == AffineRelation.empty(1, 2)
    assert converse(AffineRelation.point([], [1])) == AffineRelation.point([1], [])


def test_contains_examples():
    codiscard = AffineRelation.full(0, 1)
    zero = AffineRelation.point([], [0])
    assert contains(codiscard, zero)
    assert not contains(zero, codiscard)
    with pytest.raises(WidthMismatch):
        contains(zero, AffineRelation.identity(1))


def test_functionality_examples():
    assert functionality(canonicalize([0, 0], [[1, 2]], 1, 1)) == (True, True)
    assert functionality(AffineRelation.full(0, 1)) == (True, False)
    assert functionality(AffineRelation.point([0], [0])) == (False, True)


def test_from_constraints_examples():
    assert from_constraints([[1, -1]], [0], 1, 1) == AffineRelation.identity(1)
    assert from_constraints([[0, 0]], [1], 1, 1).is_empty
    R = from_constraints([[1, 1]], [5], 1, 1)
    assert R.offset == (0, 5) and R.basis == ((1, -1),)
    with pytest.raises(DimensionMismatch):
        from_constraints([[1, 1, 1]], [0], 1, 1)


def test_json_layout():
    R = from_constraints([[1, 1]], [5], 1, 1)
    data = R.to_json()
    assert list(data) == ["dom_width", "cod_width", "empty", "offset", "basis"]
    assert data["offset"] == ["0", "5"] and data["basis"] == [["1", "-1"]]
    assert AffineRelation.from_json(json.loads(json.dumps(data))) == R


# prop laws on random relations

@given(seeds)
def test_compose_matches_elimination(seed):
    rng = random.Random(seed)
    m, n, p = (rng.randint(0, 3) for _ in range(3))
    R = rand_relation(rng, m, n, symbolic=0.2)
    S = rand_relation(rng, n, p, symbolic=0.2)
    assert compose(R, S) == compose_by_elimination(R, S)


@given(relations(1, 1), relations(1, 1))
def test_compose_grid_brute_force(R, S):
    RS = compose(R, S)
    for a, b, c in itertools.product(GRID, repeat=3):
        if R.contains_point([a, b]) and S.contains_point([b, c]):
            assert RS.contains_point([a, c])
    for a, c in itertools.product(GRID, repeat=2):
        if RS.contains_point([a, c]):
            # a witness b exists: the fibre of R over a meets the fibre of S over c
            fib = compose_by_elimination(
                intersect(R, from_constraints([[1, 0]], [a], 1, 1)),
                intersect(S, from_constraints([[0, 1]], [c], 1, 1)))
            assert not fib.is_empty


@given(seeds)
def test_associativity_and_units(seed):
    rng = random.Random(seed)
    a, b, c, d = (rng.randint(0, 3) for _ in range(4))
    R, S, T = rand_relation(rng, a, b), rand_relation(rng, b, c), rand_relation(rng, c, d)
    assert compose(compose(R, S), T) == compose(R, compose(S, T))
    assert compose(AffineRelation.identity(a), R) == R == compose(R, AffineRelation.identity(b))


@given(seeds)
def test_interchange(seed):
    rng = random.Random(seed)
    w = [rng.randint(0, 2) for _ in range(6)]
    A, C = rand_relation(rng, w[0], w[1]), rand_relation(rng, w[1], w[2])
    B, D = rand_relation(rng, w[3], w[4]), rand_relation(rng, w[4], w[5])
    assert compose(tensor(A, B), tensor(C, D)) == tensor(compose(A, C), compose(B, D))


@given(seeds)
def test_converse_involution_and_antihomomorphism(seed):
    rng = random.Random(seed)
    m, n, p = (rng.randint(0, 3) for _ in range(3))
    R, S = rand_relation(rng, m, n, symbolic=0.3), rand_relation(rng, n, p)
    assert converse(converse(R)) == R
    assert converse(compose(R, S)) == compose(converse(S), converse(R))


@given(seeds)
def test_monotonicity(seed):
    rng = random.Random(seed)
    m, n, p = (rng.randint(0, 2) for _ in range(3))
    R, T = rand_relation(rng, m, n), rand_relation(rng, n, p)
    S = intersect(R, rand_relation(rng, m, n))  # S is inside R
    assert contains(R, S)
    assert contains(compose(R, T), compose(S, T))
    U = rand_relation(rng, p, m)
    assert contains(compose(U, R), compose(U, S))


@given(seeds)
def test_membership_agrees_with_constraints(seed):
    rng = random.Random(seed)
    m, n = rng.randint(0, 3), rng.randint(0, 3)
    R = rand_relation(rng, m, n, symbolic=0.2)
    E, f = R.to_constraints()
    assert from_constraints(E, f, m, n) == R
    for _ in range(20):
        if R.is_empty or rng.random() < 0.5:
            pt = [mpq(rng.randint(-3, 3)) for _ in range(m + n)]
        else:
            pt = R.sample_points([[mpq(rng.randint(-3, 3)) for _ in R.basis]])[0]
        by_constraints = all(sum(e * z for e, z in zip(row, pt)) == b for row, b in zip(E, f))
        assert R.contains_point(pt) == by_constraints


@given(relations(2, 1, symbolic=0.3))
def test_invariants_of_canonical_form(R):
    if R.is_empty:
        return
    for k, (row, piv) in enumerate(zip(R.basis, R.pivots)):
        assert row[piv] == 1
        assert all(row[j] == 0 for j in range(piv))
        assert all(other[piv] == 0 for j, other in enumerate(R.basis) if j != k)
        assert R.offset[piv] == 0
    assert list(R.pivots) == sorted(R.pivots)


@given(seeds)
def test_functionality_definition(seed):
    rng = random.Random(seed)
    m, n = rng.randint(0, 2), rng.randint(0, 2)
    R = rand_relation(rng, m, n)
    total, single = functionality(R)
    # total: every domain point has an image; single-valued: at most one image
    dom_proj = R.project(list(range(m)), m, 0)
    assert total == (dom_proj == AffineRelation.full(m, 0))
    kernel = compose(converse(R), R) if not R.is_empty else None
    if kernel is not None:
        assert single == (contains(AffineRelation.identity(n), kernel))
