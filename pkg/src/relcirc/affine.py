"""Affine relations over Q(x) with the prop and ordered-prop structure.

A relation ``m -> n`` is an affine subspace of ``k^(m+n)`` (domain block
first), kept in a canonical form: a reduced row-echelon basis of the
direction space plus an offset that is zero in every pivot column.  Two
presentations of the same set therefore compare equal with ``==``.

Rows are stored sparsely as ``{column: value}`` dicts; circuit matrices are
overwhelmingly zero and the elimination only ever touches nonzeros.
"""

from __future__ import annotations

from gmpy2 import mpq

from .field import RatFunc, format_value, lower, parse_ratfunc, to_field

__all__ = [
    "AffineRelation", "WidthMismatch", "DimensionMismatch", "Functionality",
    "canonicalize", "compose", "tensor", "converse", "contains",
    "functionality", "from_constraints", "intersect", "solve_linear",
]

ZERO = mpq(0)
ONE = mpq(1)
_RF = RatFunc


class WidthMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


# sparse elimination -----------------------------------------------------------

def _axpy(row, f, other):
    """row -= f * other (in place, dropping zeros)."""
    for c, v in other.items():
        t = f * v
        w = row.get(c)
        nv = -t if w is None else w - t
        if nv.__class__ is _RF:
            nv = lower(nv)
        if nv:
            row[c] = nv
        elif w is not None:
            del row[c]


def _scale(row, f):
    out = {}
    for c, v in row.items():
        nv = v * f
        if nv.__class__ is _RF:
            nv = lower(nv)
        out[c] = nv
    return out


class _Echelon:
    """Incrementally maintained reduced row-echelon form."""

    __slots__ = ("rows",)

    def __init__(self, rows=None):
        self.rows = {} if rows is None else rows  # pivot -> row with 1 at pivot

    def reduce(self, vec):
        v = dict(vec)
        rows = self.rows
        for p in [c for c in v if c in rows]:
            f = v.get(p)
            if f:
                _axpy(v, f, rows[p])
        return v

    def insert(self, vec):
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        f = v[p]
        if f != 1:
            v = _scale(v, ONE / f)
        v[p] = ONE
        for r in self.rows.values():
            g = r.get(p)
            if g:
                _axpy(r, g, v)
        self.rows[p] = v
        return True

    def sorted_rows(self):
        return tuple(self.rows[p] for p in sorted(self.rows))


def _sparse(vec):
    if isinstance(vec, dict):
        return {c: to_field(v) for c, v in vec.items() if v}
    out = {}
    for c, v in enumerate(vec):
        v = to_field(v)
        if v:
            out[c] = v
    return out


def solve_linear(rows, rhs, nvars):
    """Solve ``A z = b`` for sparse rows of ``A``.

    Returns ``None`` when inconsistent, otherwise ``(particular, nullspace)``
    with the particular solution zero on free variables.
    """
    ech = _Echelon()
    aug = nvars
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[aug] = b
        ech.insert(r)
    if aug in ech.rows:
        return None
    particular = {}
    by_free = {}
    for p, row in ech.rows.items():
        for c, v in row.items():
            if c == aug:
                particular[p] = v
            elif c != p:
                by_free.setdefault(c, []).append((p, v))
    nulls = []
    for f in range(nvars):
        if f in ech.rows:
            continue
        z = {f: ONE}
        for p, v in by_free.get(f, ()):
            z[p] = -v
        nulls.append(z)
    return particular, nulls


# the relation type --------------------------------------------------------------

class Functionality(tuple):
    __slots__ = ()

    def __new__(cls, total, single_valued):
        return tuple.__new__(cls, (total, single_valued))

    total = property(lambda self: self[0])
    single_valued = property(lambda self: self[1])

    def __repr__(self):
        return f"Functionality(total={self.total}, single_valued={self.single_valued})"

    def as_dict(self):
        return {"total": self.total, "single_valued": self.single_valued}


class AffineRelation:
    """Canonical affine relation ``dom_width -> cod_width``."""

    __slots__ = ("dom_width", "cod_width", "_off", "_rows", "_hash")

    def __init__(self, dom_width, cod_width, off, rows):
        # internal: callers must pass canonical data; use canonicalize()
        self.dom_width = dom_width
        self.cod_width = cod_width
        self._off = off
        self._rows = rows
        self._hash = None

    # constructors

    @classmethod
    def empty(cls, dom, cod):
        return cls(dom, cod, None, ())

    @classmethod
    def identity(cls, n):
        return cls(n, n, {}, tuple({i: ONE, n + i: ONE} for i in range(n)))

    @classmethod
    def full(cls, dom, cod):
        return cls(dom, cod, {}, tuple({i: ONE} for i in range(dom + cod)))

    @classmethod
    def point(cls, dom_values, cod_values):
        vals = list(dom_values) + list(cod_values)
        return canonicalize(vals, [], len(dom_values), len(cod_values))

    # views

    @property
    def width(self):
        return self.dom_width + self.cod_width

    @property
    def is_empty(self):
        return self._off is None

    @property
    def dim(self):
        """Dimension of the direction space (-1 for the empty relation)."""
        return -1 if self._off is None else len(self._rows)

    @property
    def offset(self):
        if self._off is None:
            return None
        return tuple(self._off.get(c, ZERO) for c in range(self.width))

    @property
    def basis(self):
        d = self.width
        return tuple(tuple(r.get(c, ZERO) for c in range(d)) for r in self._rows)

    @property
    def pivots(self):
        return tuple(min(r) for r in self._rows)

    def __eq__(self, other):
        if not isinstance(other, AffineRelation):
            return NotImplemented
        return (self.dom_width == other.dom_width and self.cod_width == other.cod_width
                and self._off == other._off and self._rows == other._rows)

    def __hash__(self):
        if self._hash is None:
            off = None if self._off is None else frozenset(self._off.items())
            self._hash = hash((self.dom_width, self.cod_width, off,
                               tuple(frozenset(r.items()) for r in self._rows)))
        return self._hash

    def __repr__(self):
        if self.is_empty:
            return f"AffineRelation({self.dom_width}->{self.cod_width}, empty)"
        return (f"AffineRelation({self.dom_width}->{self.cod_width}, "
                f"offset={[format_value(v) for v in self.offset]}, "
                f"basis={[[format_value(v) for v in b] for b in self.basis]})")

    def _echelon(self):
        return _Echelon({min(r): r for r in self._rows})

    def in_direction(self, vec):
        """Is ``vec`` in the direction (linear) space?"""
        if self._off is None:
            return False
        return not self._echelon().reduce(_sparse(vec))

    def contains_point(self, point):
        if self._off is None:
            return False
        if len(point) != self.width:
            raise DimensionMismatch(f"point has length {len(point)}, expected {self.width}")
        v = _sparse(point)
        for c, x in self._off.items():
            w = v.get(c, ZERO) - x
            if w.__class__ is _RF:
                w = lower(w)
            if w:
                v[c] = w
            else:
                v.pop(c, None)
        return not self._echelon().reduce(v)

    def to_constraints(self):
        """Return ``(E, f)`` (dense) with this relation equal to ``{z : E z = f}``."""
        d = self.width
        if self._off is None:
            return [[ZERO] * d], [ONE]
        pivots = {min(r): r for r in self._rows}
        E, f = [], []
        for col in range(d):
            if col in pivots:
                continue
            y = {col: ONE}
            for p, r in pivots.items():
                v = r.get(col)
                if v:
                    y[p] = -v
            E.append([y.get(c, ZERO) for c in range(d)])
            acc = ZERO
            for c, v in y.items():
                o = self._off.get(c)
                if o:
                    acc = acc + v * o
            f.append(lower(acc) if acc.__class__ is _RF else acc)
        return E, f

    def sample_points(self, coeff_lists):
        """Points ``offset + sum c_j basis_j`` for each coefficient list."""
        out = []
        for cs in coeff_lists:
            p = list(self.offset)
            for c, row in zip(cs, self._rows):
                c = to_field(c)
                for col, v in row.items():
                    x = p[col] + c * v
                    p[col] = lower(x) if x.__class__ is _RF else x
            out.append(tuple(p))
        return out

    def reindex(self, mapping, dom, cod):
        """Move coordinate ``old`` to ``mapping[old]``; unmapped ones are projected out."""
        if self._off is None:
            return AffineRelation.empty(dom, cod)
        off = {mapping[c]: v for c, v in self._off.items() if c in mapping}
        rows = [{mapping[c]: v for c, v in r.items() if c in mapping} for r in self._rows]
        return _canonical(dom, cod, off, rows)

    def project(self, coords, dom, cod):
        """Existentially project onto ``coords`` (new layout in the given order)."""
        if len(coords) != dom + cod:
            raise DimensionMismatch("projection coordinates do not match the new widths")
        return self.reindex({c: k for k, c in enumerate(coords)}, dom, cod)

    def permute_cod(self, perm):
        """New codomain coordinate ``j`` is old codomain coordinate ``perm[j]``."""
        m = self.dom_width
        mapping = {c: c for c in range(m)}
        for j, old in enumerate(perm):
            mapping[m + old] = m + j
        return self.reindex(mapping, m, len(perm))

    def permute_dom(self, perm):
        """New domain coordinate ``j`` is old domain coordinate ``perm[j]``."""
        m = self.dom_width
        mapping = {old: j for j, old in enumerate(perm)}
        for c in range(self.cod_width):
            mapping[m + c] = len(perm) + c
        return self.reindex(mapping, len(perm), self.cod_width)

    def functionality(self):
        return functionality(self)

    def to_json(self):
        return {
            "dom_width": self.dom_width,
            "cod_width": self.cod_width,
            "empty": self.is_empty,
            "offset": [] if self.is_empty else [format_value(v) for v in self.offset],
            "basis": [[format_value(v) for v in b] for b in self.basis],
        }

    @classmethod
    def from_json(cls, data):
        dom, cod = data["dom_width"], data["cod_width"]
        if data["empty"]:
            return cls.empty(dom, cod)
        conv = lambda s: to_field(parse_ratfunc(s))
        return canonicalize([conv(s) for s in data["offset"]],
                            [[conv(s) for s in b] for b in data["basis"]], dom, cod)


def _canonical(dom, cod, off, rows):
    ech = _Echelon()
    for r in rows:
        if r:
            ech.insert(r)
    off = ech.reduce(off)
    return AffineRelation(dom, cod, off, ech.sorted_rows())


def canonicalize(offset, basis, dom, cod) -> AffineRelation:
    """Canonical relation ``offset + span(basis)`` of type ``dom -> cod``."""
    d = dom + cod
    if not isinstance(offset, dict) and len(offset) != d:
        raise DimensionMismatch(f"offset has length {len(offset)}, expected {d}")
    for b in basis:
        if not isinstance(b, dict) and len(b) != d:
            raise DimensionMismatch(f"basis vector has length {len(b)}, expected {d}")
    return _canonical(dom, cod, _sparse(offset), [_sparse(b) for b in basis])


# prop structure -----------------------------------------------------------------

def compose(R: AffineRelation, S: AffineRelation) -> AffineRelation:
    """Relational composite ``R ; S``."""
    if R.cod_width != S.dom_width:
        raise WidthMismatch(f"cannot compose {R.dom_width}->{R.cod_width} "
                            f"with {S.dom_width}->{S.cod_width}")
    m, n, p = R.dom_width, R.cod_width, S.cod_width
    if R._off is None or S._off is None:
        return AffineRelation.empty(m, p)
    k = len(R._rows)
    nvars = k + len(S._rows)
    eqs = [{} for _ in range(n)]
    for j, row in enumerate(R._rows):
        for c, v in row.items():
            if c >= m:
                eqs[c - m][j] = v
    for j, row in enumerate(S._rows):
        for c, v in row.items():
            if c < n:
                eqs[c][k + j] = -v
    rhs = []
    for t in range(n):
        b = S._off.get(t, ZERO) - R._off.get(m + t, ZERO)
        rhs.append(lower(b) if b.__class__ is _RF else b)
    sol = solve_linear(eqs, rhs, nvars)
    if sol is None:
        return AffineRelation.empty(m, p)
    x0, nulls = sol

    R_out = [{c: v for c, v in row.items() if c < m} for row in R._rows]
    S_out = [{m + c - n: v for c, v in row.items() if c >= n} for row in S._rows]

    def image(coeffs, acc):
        for var, a in coeffs.items():
            src = R_out[var] if var < k else S_out[var - k]
            if src:
                _axpy(acc, -a, src)
        return acc

    off = {c: v for c, v in R._off.items() if c < m}
    off.update((m + c - n, v) for c, v in S._off.items() if c >= n)
    off = image(x0, off)
    basis = [image(z, {}) for z in nulls]
    return _canonical(m, p, off, basis)


def tensor(R: AffineRelation, S: AffineRelation) -> AffineRelation:
    """Block direct sum: domains ``R.dom ++ S.dom``, codomains likewise."""
    m, n = R.dom_width, R.cod_width
    p, q = S.dom_width, S.cod_width
    if R._off is None or S._off is None:
        return AffineRelation.empty(m + p, n + q)

    def mr(c):
        return c if c < m else c + p

    def ms(c):
        return m + c if c < p else m + n + c

    off = {mr(c): v for c, v in R._off.items()}
    off.update((ms(c), v) for c, v in S._off.items())
    rows = [{mr(c): v for c, v in r.items()} for r in R._rows]
    rows += [{ms(c): v for c, v in r.items()} for r in S._rows]
    rows.sort(key=min)
    return AffineRelation(m + p, n + q, off, tuple(rows))


def converse(R: AffineRelation) -> AffineRelation:
    m, n = R.dom_width, R.cod_width
    mapping = {c: (n + c if c < m else c - m) for c in range(m + n)}
    return R.reindex(mapping, n, m)


def contains(R: AffineRelation, S: AffineRelation) -> bool:
    """``S`` is a subset of ``R``."""
    if (R.dom_width, R.cod_width) != (S.dom_width, S.cod_width):
        raise WidthMismatch("containment needs relations of equal type")
    if S._off is None:
        return True
    if R._off is None:
        return False
    ech = R._echelon()
    diff = dict(S._off)
    _axpy(diff, ONE, R._off)
    if ech.reduce(diff):
        return False
    return all(not ech.reduce(r) for r in S._rows)


def functionality(R: AffineRelation) -> Functionality:
    m = R.dom_width
    if R._off is None:
        return Functionality(False, True)
    dom_rank = sum(1 for r in R._rows if min(r) < m)
    return Functionality(dom_rank == m, dom_rank == len(R._rows))


def from_constraints(E, f, dom, cod) -> AffineRelation:
    """Canonical form of ``{z : E z = f}``."""
    d = dom + cod
    rows = []
    for row in E:
        if not isinstance(row, dict) and len(row) != d:
            raise DimensionMismatch(f"constraint row has length {len(row)}, expected {d}")
        rows.append(_sparse(row))
    if len(rows) != len(f):
        raise DimensionMismatch("constraint matrix and right-hand side disagree")
    sol = solve_linear(rows, [to_field(b) for b in f], d)
    if sol is None:
        return AffineRelation.empty(dom, cod)
    x0, nulls = sol
    return _canonical(dom, cod, x0, nulls)


def intersect(R: AffineRelation, S: AffineRelation) -> AffineRelation:
    if (R.dom_width, R.cod_width) != (S.dom_width, S.cod_width):
        raise WidthMismatch("intersection needs relations of equal type")
    E1, f1 = R.to_constraints()
    E2, f2 = S.to_constraints()
    return from_constraints(E1 + E2, f1 + f2, R.dom_width, R.cod_width)
