"""Terms of the coloured prop of circuits with information wires.

Two sorts of wire exist: electric (``e``, carrying a potential and a current)
and information (``n``, carrying one field value).  Terms are immutable trees:
generators, identities, swaps, sequential composition ``;`` and parallel
composition ``|``.  ``t1 >> t2`` and ``t1 @ t2`` build ``Seq`` and ``Par``.

Deeply nested sequential chains are common (a ladder of a thousand
resistors), so every traversal here flattens chains iteratively rather than
recursing down them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

from gmpy2 import mpq

from .field import RatFunc, RatFuncSyntaxError, parse_ratfunc, parse_rational

__all__ = [
    "Sort", "E", "N", "width", "Term", "Gen", "Box", "Id", "Swap", "Seq", "Par",
    "SortMismatch", "IllFormedBox", "TermSyntaxError", "BadParameter",
    "sort_check", "parse_term", "pretty_print", "seq", "par",
    "GAA_KINDS", "CIRCUIT_KINDS", "EXTENDED_KINDS", "PARAM_KINDS",
    "resistor", "vsource", "csource", "inductor", "capacitor", "scalar", "coscalar",
    "gen", "wire", "cup_e", "cap_e", "cup_n", "cap_n", "permutation", "word",
    "generators_of", "seq_factors",
]


class Sort(enum.Enum):
    E = "e"
    N = "n"

    @property
    def width(self):
        return 2 if self is Sort.E else 1

    def __repr__(self):
        return f"Sort.{self.name}"


E = Sort.E
N = Sort.N


def width(w) -> int:
    return sum(s.width for s in w)


def word(text: str) -> Tuple[Sort, ...]:
    return tuple(Sort(ch) for ch in text)


def _word_str(w):
    return "".join(s.value for s in w) or "ε"


# generator signatures --------------------------------------------------------------

_SIG = {
    # graphical affine algebra, information wires only
    "copy": ("n", "nn"), "discard": ("n", ""), "add": ("nn", "n"), "zero": ("", "n"),
    "cocopy": ("nn", "n"), "codiscard": ("", "n"), "coadd": ("n", "nn"), "cozero": ("n", ""),
    "one": ("", "n"), "scalar": ("n", "n"), "coscalar": ("n", "n"),
    # basic circuit elements
    "R": ("e", "e"), "V": ("e", "e"), "I": ("e", "e"), "L": ("e", "e"), "C": ("e", "e"),
    "junc": ("e", "ee"), "cojunc": ("ee", "e"), "open": ("e", ""), "coopen": ("", "e"),
    # meters and controlled sources
    "voltmeter": ("e", "ne"), "ammeter": ("e", "ne"), "cvs": ("ne", "e"), "ccs": ("ne", "e"),
}
GAA_KINDS = frozenset(["copy", "discard", "add", "zero", "cocopy", "codiscard", "coadd",
                       "cozero", "one", "scalar", "coscalar"])
CIRCUIT_KINDS = frozenset(["R", "V", "I", "L", "C", "junc", "cojunc", "open", "coopen"])
EXTENDED_KINDS = frozenset(["voltmeter", "ammeter", "cvs", "ccs"])
PARAM_KINDS = frozenset(["R", "V", "I", "L", "C", "scalar", "coscalar"])


class BadParameter(ValueError):
    pass


class SortMismatch(TypeError):
    def __init__(self, path, expected, found, pos=None):
        self.path = path
        self.expected = expected
        self.found = found
        self.pos = pos
        where = f" at line {pos[0]}, col {pos[1]}" if pos else ""
        super().__init__(f"sort mismatch{where} ({path or 'root'}): "
                         f"expected {_word_str(expected)}, found {_word_str(found)}")


class IllFormedBox(TypeError):
    pass


class TermSyntaxError(SyntaxError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, col {col})")
        self.msg = message
        self.lineno = line
        self.offset = col
        self.line, self.col = line, col


# terms ---------------------------------------------------------------------------------

class Term:
    """Base class; use ``>>`` for sequential and ``@`` for parallel composition."""

    __slots__ = ()

    def __rshift__(self, other):
        return Seq(self, other)

    def __matmul__(self, other):
        return Par(self, other)

    def __str__(self):
        return pretty_print(self)


@dataclass(frozen=True, eq=True)
class Gen(Term):
    kind: str
    param: object = None
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in _SIG:
            raise BadParameter(f"unknown generator {self.kind!r}")
        if self.kind in PARAM_KINDS:
            if self.param is None:
                raise BadParameter(f"generator {self.kind} needs a parameter")
            if self.kind in ("scalar", "coscalar"):
                object.__setattr__(self, "param", RatFunc.from_value(self.param))
            else:
                p = self.param
                if isinstance(p, RatFunc):
                    if not p.is_constant():
                        raise BadParameter(f"{self.kind} parameter must be a rational constant")
                    p = p.constant_value()
                p = mpq(p)
                if self.kind == "R" and p < 0:
                    raise BadParameter(f"resistance must be >= 0, got {p}")
                if self.kind in ("L", "C") and p <= 0:
                    raise BadParameter(f"{self.kind} parameter must be > 0, got {p}")
                object.__setattr__(self, "param", p)
        elif self.param is not None:
            raise BadParameter(f"generator {self.kind} takes no parameter")

    def __repr__(self):
        return f"Gen({self.kind!r})" if self.param is None else f"Gen({self.kind!r}, {str(self.param)!r})"


@dataclass(frozen=True, eq=True)
class Box(Term):
    m: int
    n: int
    body: Term
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, eq=True)
class Id(Term):
    word: Tuple[Sort, ...] = ()
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))


@dataclass(frozen=True, eq=True)
class Swap(Term):
    a: Sort
    b: Sort
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, eq=True)
class Seq(Term):
    t1: Term
    t2: Term
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, eq=True)
class Par(Term):
    t1: Term
    t2: Term
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


def seq(*ts: Term) -> Term:
    """Left-associated sequential composite; ``seq()`` is the empty identity."""
    if not ts:
        return Id(())
    out = ts[0]
    for t in ts[1:]:
        out = Seq(out, t)
    return out


def par(*ts: Term) -> Term:
    if not ts:
        return Id(())
    out = ts[0]
    for t in ts[1:]:
        out = Par(out, t)
    return out


def seq_factors(t: Term):
    """Flatten nested ``Seq`` nodes (either association) into a list."""
    out, stack = [], [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Seq):
            stack.append(u.t2)
            stack.append(u.t1)
        else:
            out.append(u)
    return out


def _par_factors(t: Term):
    out, stack = [], [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Par):
            stack.append(u.t2)
            stack.append(u.t1)
        else:
            out.append(u)
    return out


# convenience constructors --------------------------------------------------------------

def gen(kind, param=None):
    return Gen(kind, param)


def resistor(r):
    return Gen("R", r)


def vsource(v):
    return Gen("V", v)


def csource(i):
    return Gen("I", i)


def inductor(l):
    return Gen("L", l)


def capacitor(c):
    return Gen("C", c)


def scalar(k):
    return Gen("scalar", parse_ratfunc(k) if isinstance(k, str) else k)


def coscalar(k):
    return Gen("coscalar", parse_ratfunc(k) if isinstance(k, str) else k)


def wire():
    return Id((E,))


def cup_e():
    """Electric cup ``ε -> e e``: shared potential, opposite currents."""
    return Seq(Gen("coopen"), Gen("junc"))


def cap_e():
    return Seq(Gen("cojunc"), Gen("open"))


def cup_n():
    return Seq(Gen("codiscard"), Gen("copy"))


def cap_n():
    return Seq(Gen("cocopy"), Gen("discard"))


def permutation(w, perm) -> Term:
    """Structural term reordering wires: output ``j`` is input ``perm[j]``.

    Built as an odd-even transposition network of adjacent swaps.
    """
    w = list(w)
    n = len(w)
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation")
    # target position of each input wire
    target = [0] * n
    for j, src in enumerate(perm):
        target[src] = j
    cur = list(range(n))  # cur[pos] = input wire currently at pos
    sorts = list(w)
    layers = []
    for rnd in range(n):
        swaps = []
        for k in range(rnd % 2, n - 1, 2):
            if target[cur[k]] > target[cur[k + 1]]:
                swaps.append(k)
        if not swaps:
            if rnd > 0 and all(target[cur[k]] <= target[cur[k + 1]] for k in range(n - 1)):
                break
            continue
        parts = []
        k = 0
        swap_set = set(swaps)
        while k < n:
            if k in swap_set:
                parts.append(Swap(sorts[k], sorts[k + 1]))
                cur[k], cur[k + 1] = cur[k + 1], cur[k]
                sorts[k], sorts[k + 1] = sorts[k + 1], sorts[k]
                k += 2
            else:
                j = k
                while j < n and j not in swap_set:
                    j += 1
                parts.append(Id(tuple(sorts[k:j])))
                k = j
        layers.append(par(*parts))
    if not layers:
        return Id(tuple(w))
    return seq(*layers)


def generators_of(t: Term):
    """Yield every generator (``Gen`` and ``Box``) occurring in ``t``."""
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, (Seq, Par)):
            stack.append(u.t2)
            stack.append(u.t1)
        elif isinstance(u, (Gen, Box)):
            yield u


# sort checking ------------------------------------------------------------------------------

_GAA_STRUCT = (Id, Swap, Seq, Par)


def _check_box_payload(box: Box, path):
    for u in _iter_nodes(box.body):
        if isinstance(u, Gen) and u.kind not in GAA_KINDS:
            raise IllFormedBox(f"box payload at {path or 'root'} contains non-GAA generator {u.kind}")
        if isinstance(u, Box):
            raise IllFormedBox(f"box payload at {path or 'root'} contains a nested box")
        if isinstance(u, Id) and E in u.word:
            raise IllFormedBox(f"box payload at {path or 'root'} touches electric wires")
        if isinstance(u, Swap) and E in (u.a, u.b):
            raise IllFormedBox(f"box payload at {path or 'root'} touches electric wires")
    dom, cod = sort_check(box.body)
    if dom != (N,) * (box.m + 1) or cod != (N,) * (box.n + 1):
        raise IllFormedBox(f"box({box.m},{box.n}) payload has sorting "
                           f"{_word_str(dom)} -> {_word_str(cod)}, expected "
                           f"{'n' * (box.m + 1)} -> {'n' * (box.n + 1)}")


def _iter_nodes(t):
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, (Seq, Par)):
            stack.append(u.t2)
            stack.append(u.t1)


def sort_check(t: Term, _path="") -> Tuple[Tuple[Sort, ...], Tuple[Sort, ...]]:
    """Return ``(dom, cod)`` sort words of ``t``; raise on ill-sorted terms."""
    if isinstance(t, Seq):
        factors = seq_factors(t)
        dom, cod = sort_check(factors[0], f"{_path}.0" if _path else "seq.0")
        for k, f in enumerate(factors[1:], 1):
            sub = f"{_path}.{k}" if _path else f"seq.{k}"
            d2, c2 = sort_check(f, sub)
            if d2 != cod:
                raise SortMismatch(sub, cod, d2, getattr(f, "pos", None))
            cod = c2
        return dom, cod
    if isinstance(t, Par):
        dom, cod = (), ()
        for k, f in enumerate(_par_factors(t)):
            d, c = sort_check(f, f"{_path}.p{k}" if _path else f"par.{k}")
            dom += d
            cod += c
        return dom, cod
    if isinstance(t, Gen):
        d, c = _SIG[t.kind]
        return word(d), word(c)
    if isinstance(t, Id):
        return t.word, t.word
    if isinstance(t, Swap):
        return (t.a, t.b), (t.b, t.a)
    if isinstance(t, Box):
        if t.m < 0 or t.n < 0:
            raise IllFormedBox("box arities must be natural numbers")
        _check_box_payload(t, _path)
        return (N,) * t.m + (E,), (N,) * t.n + (E,)
    raise TypeError(f"not a term: {t!r}")


# printing ------------------------------------------------------------------------------------

def _fmt_q(q):
    return str(q)


def _print_atom(t: Term) -> str:
    if isinstance(t, Gen):
        if t.kind in ("scalar", "coscalar"):
            return f"{t.kind}({t.param})"
        if t.param is not None:
            return f"{t.kind}({_fmt_q(t.param)})"
        return t.kind
    if isinstance(t, Id):
        return "id:" + "".join(s.value for s in t.word) if t.word else "id"
    if isinstance(t, Swap):
        return f"swap:{t.a.value}{t.b.value}"
    if isinstance(t, Box):
        head = "box" if (t.m, t.n) == (0, 0) else f"box({t.m},{t.n})"
        return f"{head}{{ {pretty_print(t.body)} }}"
    raise TypeError(f"not a term: {t!r}")


def _print_par(t: Term) -> str:
    # left operand may be a Par (left association), right operand never
    if not isinstance(t, Par):
        return pretty_print(t) if isinstance(t, Seq) else _print_atom(t)
    parts = []
    u = t
    rights = []
    while isinstance(u, Par):
        rights.append(u.t2)
        u = u.t1
    operands = [u] + rights[::-1]
    for k, op in enumerate(operands):
        if isinstance(op, Seq) or (k > 0 and isinstance(op, Par)):
            parts.append(f"({pretty_print(op)})")
        else:
            parts.append(_print_atom(op))
    return " | ".join(parts)


def pretty_print(t: Term) -> str:
    """Render ``t`` in the concrete grammar; ``parse_term`` inverts it."""
    if isinstance(t, Seq):
        rights = []
        u = t
        while isinstance(u, Seq):
            rights.append(u.t2)
            u = u.t1
        operands = [u] + rights[::-1]
        parts = []
        for k, op in enumerate(operands):
            if k > 0 and isinstance(op, Seq):
                parts.append(f"({pretty_print(op)})")
            elif isinstance(op, Par):
                parts.append(_print_par(op))
            else:
                parts.append(_print_atom(op))
        return " ; ".join(parts)
    if isinstance(t, Par):
        return _print_par(t)
    return _print_atom(t)


# parsing --------------------------------------------------------------------------------------

_SIMPLE = {
    "junc", "cojunc", "open", "coopen", "voltmeter", "ammeter", "cvs", "ccs",
    "copy", "discard", "add", "zero", "one", "cocopy", "codiscard", "coadd", "cozero",
}
_QPARAM = {"R", "V", "I", "L", "C"}
_RFPARAM = {"scalar", "coscalar"}


class _TermParser:
    def __init__(self, text):
        self.text = text
        self.i = 0

    def loc(self, i=None):
        i = self.i if i is None else i
        line = self.text.count("\n", 0, i) + 1
        col = i - (self.text.rfind("\n", 0, i) + 1) + 1
        return line, col

    def error(self, msg, i=None):
        line, col = self.loc(i)
        return TermSyntaxError(msg, line, col)

    def skip(self):
        text = self.text
        while self.i < len(text):
            ch = text[self.i]
            if ch.isspace():
                self.i += 1
            elif ch == "#":
                while self.i < len(text) and text[self.i] != "\n":
                    self.i += 1
            else:
                break

    def peek(self):
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.i += 1

    def parse(self):
        t = self.term()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return t

    def term(self):
        start = self.loc()
        t = self.par()
        while self.peek() == ";":
            self.i += 1
            t = Seq(t, self.par(), pos=start)
        return t

    def par(self):
        start = self.loc()
        t = self.atom()
        while self.peek() == "|":
            self.i += 1
            t = Par(t, self.atom(), pos=start)
        return t

    def word_token(self):
        self.skip()
        j = self.i
        text = self.text
        while j < len(text) and (text[j].isalnum() or text[j] == ":"):
            j += 1
        return text[self.i:j]

    def balanced(self):
        """Raw text between a '(' already consumed and its matching ')'."""
        depth = 1
        j = self.i
        while j < len(self.text):
            if self.text[j] == "(":
                depth += 1
            elif self.text[j] == ")":
                depth -= 1
                if depth == 0:
                    raw = self.text[self.i:j]
                    start = self.i
                    self.i = j + 1
                    return raw, start
            j += 1
        raise self.error("unbalanced parenthesis")

    def atom(self):
        if self.peek() == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        start_i = self.i
        pos = self.loc()
        tok = self.word_token()
        if not tok:
            found = self.peek() or "end of input"
            raise self.error(f"expected a generator, found {found!r}")
        self.i += len(tok)
        if tok in _SIMPLE:
            return Gen(tok, pos=pos)
        if tok in _QPARAM or tok in _RFPARAM:
            self.expect("(")
            raw, raw_start = self.balanced()
            try:
                value = parse_rational(raw) if tok in _QPARAM else parse_ratfunc(raw)
            except RatFuncSyntaxError as exc:
                off = raw_start + (exc.pos or 0)
                raise self.error(f"bad parameter for {tok}: {exc}", off) from None
            try:
                return Gen(tok, value, pos=pos)
            except BadParameter as exc:
                raise self.error(str(exc), start_i) from None
        if tok == "id":
            return Id((), pos=pos)
        if tok.startswith("id:"):
            letters = tok[3:]
            if not letters or any(ch not in "en" for ch in letters):
                raise self.error(f"bad identity {tok!r}", start_i)
            return Id(word(letters), pos=pos)
        if tok.startswith("swap:"):
            letters = tok[5:]
            if len(letters) != 2 or any(ch not in "en" for ch in letters):
                raise self.error(f"bad swap {tok!r}", start_i)
            return Swap(Sort(letters[0]), Sort(letters[1]), pos=pos)
        if tok == "box":
            m = n = 0
            if self.peek() == "(":
                self.i += 1
                m = self.nat()
                self.expect(",")
                n = self.nat()
                self.expect(")")
            self.expect("{")
            body = self.term()
            self.expect("}")
            return Box(m, n, body, pos=pos)
        raise self.error(f"unknown generator {tok!r}", start_i)

    def nat(self):
        self.skip()
        j = self.i
        while j < len(self.text) and self.text[j].isdigit():
            j += 1
        if j == self.i:
            raise self.error("expected a natural number")
        v = int(self.text[self.i:j])
        self.i = j
        return v


def parse_term(text: str) -> Term:
    """Parse the concrete term grammar (``;`` sequential, ``|`` parallel)."""
    return _TermParser(text).parse()
