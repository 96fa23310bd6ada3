"""Compositional denotation of terms as affine relations.

An electric wire contributes two coordinates ``(phi, i)``: its potential and
the current flowing through it from left to right.  An information wire
contributes one coordinate.  Sequential composition is relational
composition, parallel composition is the block direct sum.
"""

from __future__ import annotations

from collections import OrderedDict
from typing import List

from .affine import AffineRelation, compose, converse, from_constraints, tensor
from .diagram import (
    Box, Gen, Id, Par, Seq, Swap, Term, seq_factors, sort_check, width,
)
from .field import X, lower

__all__ = ["denote", "denote_many", "generator_relation", "box_relation", "DenoteError",
           "clear_cache", "DenoteErrors"]


class DenoteError(Exception):
    """A per-element failure collected by ``denote_many``."""

    def __init__(self, index, error):
        super().__init__(f"term {index}: {error}")
        self.index = index
        self.error = error


def _rel(dom, cod, equations):
    """Relation ``{z : sum_c a_c z_c = rhs}`` from sparse ``({col: a}, rhs)`` pairs."""
    rows = [eq for eq, _ in equations]
    rhs = [b for _, b in equations]
    return from_constraints(rows, rhs, dom, cod)


def _gaa(kind, k):
    if kind == "copy":
        return _rel(1, 2, [({0: 1, 1: -1}, 0), ({0: 1, 2: -1}, 0)])
    if kind == "discard":
        return AffineRelation.full(1, 0)
    if kind == "add":
        return _rel(2, 1, [({0: 1, 1: 1, 2: -1}, 0)])
    if kind == "zero":
        return _rel(0, 1, [({0: 1}, 0)])
    if kind == "one":
        return _rel(0, 1, [({0: 1}, 1)])
    if kind == "scalar":
        return _rel(1, 1, [({0: k, 1: -1}, 0)])
    raise KeyError(kind)


_CO = {"cocopy": "copy", "codiscard": "discard", "coadd": "add", "cozero": "zero",
       "coscalar": "scalar"}


def _circuit(kind, p):
    # electric coordinates: phi1=0, i1=1 | phi2=2, i2=3
    through = ({1: 1, 3: -1}, 0)
    if kind == "R":
        return _rel(2, 2, [through, ({2: 1, 0: -1, 1: -p}, 0)])
    if kind == "V":
        return _rel(2, 2, [through, ({2: 1, 0: -1}, p)])
    if kind == "I":
        return _rel(2, 2, [({1: 1}, p), ({3: 1}, p)])
    if kind == "L":
        return _rel(2, 2, [through, ({2: 1, 0: -1, 1: -(p * X)}, 0)])
    if kind == "C":
        cx = p * X
        return _rel(2, 2, [through, ({1: 1, 2: -cx, 0: cx}, 0)])
    if kind == "junc":
        return _rel(2, 4, [({0: 1, 2: -1}, 0), ({0: 1, 4: -1}, 0), ({1: 1, 3: -1, 5: -1}, 0)])
    if kind == "cojunc":
        return _rel(4, 2, [({0: 1, 4: -1}, 0), ({2: 1, 4: -1}, 0), ({1: 1, 3: 1, 5: -1}, 0)])
    if kind == "open":
        return _rel(2, 0, [({1: 1}, 0)])
    if kind == "coopen":
        return _rel(0, 2, [({1: 1}, 0)])
    # meters: phi1=0, i1=1 | b=2, phi2=3, i2=4
    if kind == "voltmeter":
        return _rel(2, 3, [({1: 1}, 0), ({4: 1}, 0), ({2: 1, 3: -1, 0: 1}, 0)])
    if kind == "ammeter":
        return _rel(2, 3, [({0: 1, 3: -1}, 0), ({1: 1, 4: -1}, 0), ({2: 1, 1: -1}, 0)])
    # controlled sources: a=0, phi1=1, i1=2 | phi2=3, i2=4
    if kind == "cvs":
        return _rel(3, 2, [({3: 1, 1: -1, 0: -1}, 0), ({2: 1, 4: -1}, 0)])
    if kind == "ccs":
        return _rel(3, 2, [({2: 1, 0: -1}, 0), ({4: 1, 0: -1}, 0)])
    raise KeyError(kind)


_GEN_CACHE = {}


def generator_relation(g: Gen) -> AffineRelation:
    """The relation of a single generator (cached by kind and parameter)."""
    key = (g.kind, g.param)
    rel = _GEN_CACHE.get(key)
    if rel is None:
        p = None if g.param is None else lower(g.param)
        if g.kind in _CO:
            rel = converse(_gaa(_CO[g.kind], p))
        elif g.kind in ("copy", "discard", "add", "zero", "one", "scalar"):
            rel = _gaa(g.kind, p)
        else:
            rel = _circuit(g.kind, p)
        _GEN_CACHE[key] = rel
    return rel


def box_relation(m: int, n: int, payload: AffineRelation) -> AffineRelation:
    """Lift a payload relation on ``(a, i) -> (b, v)`` to an electric box.

    The box relates ``(a, phi1, i)`` to ``(b, phi2, i)`` whenever
    ``((a, i), (b, phi2 - phi1))`` lies in the payload.
    """
    # payload columns: a_0..a_{m-1}, i, b_0..b_{n-1}, v
    # box columns: a_0..a_{m-1}, phi1, i1, b_0..b_{n-1}, phi2, i2
    phi1, i1 = m, m + 1
    phi2, i2 = m + 2 + n, m + 3 + n

    def col(c):
        if c < m:
            return {c: 1}
        if c == m:
            return {i1: 1}
        if c < m + 1 + n:
            return {c + 1: 1}
        return {phi2: 1, phi1: -1}

    Ep, fp = payload.to_constraints()
    rows = [({i1: 1, i2: -1}, 0)]
    for row, b in zip(Ep, fp):
        out = {}
        for c, a in enumerate(row):
            if a:
                for cc, s in col(c).items():
                    out[cc] = out.get(cc, 0) + s * a
        rows.append((out, b))
    return _rel(m + 2, n + 2, rows)


# structural terms --------------------------------------------------------------

def _is_structural(t):
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, (Seq, Par)):
            stack.append(u.t1)
            stack.append(u.t2)
        elif not isinstance(u, (Id, Swap)):
            return False
    return True


def _wire_perm(t):
    """For a structural term: ``(dom_word, perm)`` with output wire j = input wire perm[j]."""
    if isinstance(t, Id):
        return t.word, list(range(len(t.word)))
    if isinstance(t, Swap):
        return (t.a, t.b), [1, 0]
    if isinstance(t, Par):
        w1, p1 = _wire_perm(t.t1)
        w2, p2 = _wire_perm(t.t2)
        return w1 + w2, p1 + [len(w1) + k for k in p2]
    if isinstance(t, Seq):
        factors = seq_factors(t)
        w, p = _wire_perm(factors[0])
        for f in factors[1:]:
            _, q = _wire_perm(f)
            p = [p[k] for k in q]
        return w, p
    raise TypeError(t)


def _coord_perm(t):
    """Scalar-coordinate permutation of a structural term."""
    w, p = _wire_perm(t)
    starts, acc = [], 0
    for s in w:
        starts.append(acc)
        acc += s.width
    out = []
    for src in p:
        out.extend(range(starts[src], starts[src] + w[src].width))
    return out


def _apply_perm(acc, perm):
    if acc is None:
        acc = AffineRelation.identity(len(perm))
    if perm == list(range(len(perm))):
        return acc
    return acc.permute_cod(perm)


# denotation -----------------------------------------------------------------------

_MEMO: "OrderedDict[int, tuple]" = OrderedDict()
_MEMO_SIZE = 64


def clear_cache():
    _MEMO.clear()
    _GEN_CACHE.clear()


def _memo_get(t):
    hit = _MEMO.get(id(t))
    if hit is not None and hit[0] is t:
        return hit[1]
    return None


def _seq_factors_memo(t):
    """Like ``seq_factors`` but keeps already-denoted subterms whole."""
    out, stack = [], [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Seq) and (u is t or _memo_get(u) is None):
            stack.append(u.t2)
            stack.append(u.t1)
        else:
            out.append(u)
    return out


def _denote(t: Term) -> AffineRelation:
    hit = _memo_get(t)
    if hit is not None:
        return hit
    if isinstance(t, Gen):
        return generator_relation(t)
    if isinstance(t, Box):
        payload = _denote(t.body)
        key = ("box", t.m, t.n, payload)
        rel = _GEN_CACHE.get(key)
        if rel is None:
            rel = box_relation(t.m, t.n, payload)
            _GEN_CACHE[key] = rel
        return rel
    if isinstance(t, Id):
        return AffineRelation.identity(width(t.word))
    if isinstance(t, Swap):
        a, b = t.a.width, t.b.width
        return AffineRelation.identity(a + b).permute_cod(list(range(a, a + b)) + list(range(a)))
    if isinstance(t, Par):
        factors = []
        stack = [t]
        while stack:
            u = stack.pop()
            if isinstance(u, Par):
                stack.append(u.t2)
                stack.append(u.t1)
            else:
                factors.append(u)
        acc = _denote(factors[0])
        for f in factors[1:]:
            acc = tensor(acc, _denote(f))
        return acc
    if isinstance(t, Seq):
        acc = None
        pending = None  # composite coordinate permutation not yet applied
        for f in _seq_factors_memo(t):
            if _is_structural(f):
                perm = _coord_perm(f)
                pending = perm if pending is None else [pending[k] for k in perm]
                continue
            if pending is not None:
                acc = _apply_perm(acc, pending)
                pending = None
            rel = _denote(f)
            acc = rel if acc is None else compose(acc, rel)
        if pending is not None:
            acc = _apply_perm(acc, pending)
        return acc
    raise TypeError(f"not a term: {t!r}")


def denote(t: Term, check: bool = True) -> AffineRelation:
    """Affine relation denoted by ``t``.

    Raises ``SortMismatch`` or ``IllFormedBox`` for ill-sorted input.  The
    last few results are memoised by object identity, so repeated queries on
    the same term object are free.
    """
    hit = _memo_get(t)
    if hit is not None:
        _MEMO.move_to_end(id(t))
        return hit
    if check:
        sort_check(t)
    rel = _denote(t)
    _MEMO[id(t)] = (t, rel)
    if len(_MEMO) > _MEMO_SIZE:
        _MEMO.popitem(last=False)
    return rel


def denote_many(ts) -> List[AffineRelation]:
    """Denote each term; failures are collected and raised together."""
    out, errors = [], []
    for k, t in enumerate(ts):
        try:
            out.append(denote(t))
        except Exception as exc:  # collected, re-raised below
            errors.append(DenoteError(k, exc))
    if errors:
        if len(errors) == 1:
            raise errors[0]
        raise DenoteErrors(errors)
    return out


class DenoteErrors(Exception):
    """Several per-element failures from ``denote_many``."""

    def __init__(self, errors):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors
