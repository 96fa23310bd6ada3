"""Built-in instances of the (in)equational theory of affine relations.

Each axiom is a pair of terms in the concrete grammar; ``axioms_suite``
denotes both sides and checks equality (or containment for ``<=``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

from .affine import contains
from .diagram import parse_term
from .semantics import denote

__all__ = ["Axiom", "AxiomResult", "AXIOMS", "axioms_suite"]


@dataclass(frozen=True)
class Axiom:
    name: str
    group: str
    lhs: str
    rhs: str
    relation: str = "="  # or "<=" (lhs contained in rhs)


@dataclass(frozen=True)
class AxiomResult:
    axiom: Axiom
    passed: bool

    def to_json(self):
        a = self.axiom
        return {"name": a.name, "group": a.group, "relation": a.relation,
                "lhs": a.lhs, "rhs": a.rhs, "passed": self.passed}


def _monoid(group, mult, unit):
    """Associativity, commutativity and unit laws for ``mult : nn -> n``."""
    return [
        Axiom(f"{mult}-assoc", group, f"({mult} | id:n) ; {mult}", f"(id:n | {mult}) ; {mult}"),
        Axiom(f"{mult}-comm", group, f"swap:nn ; {mult}", mult),
        Axiom(f"{mult}-unit", group, f"({unit} | id:n) ; {mult}", "id:n"),
    ]


def _comonoid(group, comult, counit):
    return [
        Axiom(f"{comult}-coassoc", group, f"{comult} ; ({comult} | id:n)",
              f"{comult} ; (id:n | {comult})"),
        Axiom(f"{comult}-cocomm", group, f"{comult} ; swap:nn", comult),
        Axiom(f"{comult}-counit", group, f"{comult} ; ({counit} | id:n)", "id:n"),
    ]


def _bialgebra(group, mult, unit, comult, counit):
    return [
        Axiom(f"{mult}-{comult}-bialgebra", group, f"{mult} ; {comult}",
              f"({comult} | {comult}) ; (id:n | swap:nn | id:n) ; ({mult} | {mult})"),
        Axiom(f"{unit}-{comult}", group, f"{unit} ; {comult}", f"{unit} | {unit}"),
        Axiom(f"{mult}-{counit}", group, f"{mult} ; {counit}", f"{counit} | {counit}"),
        Axiom(f"{unit}-{counit}", group, f"{unit} ; {counit}", "id"),
    ]


def _frobenius(group, mult, unit, comult, counit):
    return [
        Axiom(f"{mult}-frobenius-left", group, f"({comult} | id:n) ; (id:n | {mult})",
              f"{mult} ; {comult}"),
        Axiom(f"{mult}-frobenius-right", group, f"(id:n | {comult}) ; ({mult} | id:n)",
              f"{mult} ; {comult}"),
        Axiom(f"{mult}-special", group, f"{comult} ; {mult}", "id:n"),
        Axiom(f"{mult}-extra", group, f"{unit} ; {counit}", "id"),
    ]


def _build():
    ax: List[Axiom] = []
    ax += _comonoid("copy-comonoid", "copy", "discard")
    ax += _monoid("add-monoid", "add", "zero")
    ax += _monoid("cocopy-monoid", "cocopy", "codiscard")
    ax += _comonoid("coadd-comonoid", "coadd", "cozero")
    ax += _bialgebra("bialgebra", "add", "zero", "copy", "discard")
    ax += _bialgebra("cobialgebra", "cocopy", "codiscard", "coadd", "cozero")
    ax += _frobenius("frobenius-black", "cocopy", "codiscard", "copy", "discard")
    ax += _frobenius("frobenius-white", "add", "zero", "coadd", "cozero")
    for k, l in (("3", "-1/2"), ("x", "2"), ("(x+1)/x", "x^2")):
        ax += [
            Axiom(f"scalar-mult[{k},{l}]", "scalars", f"scalar({k}) ; scalar({l})",
                  f"scalar(({k})*({l}))"),
            Axiom(f"scalar-sum[{k},{l}]", "scalars",
                  f"copy ; (scalar({k}) | scalar({l})) ; add", f"scalar(({k})+({l}))"),
            Axiom(f"scalar-copy[{k}]", "scalars", f"scalar({k}) ; copy",
                  f"copy ; (scalar({k}) | scalar({k}))"),
            Axiom(f"scalar-add[{k}]", "scalars", f"(scalar({k}) | scalar({k})) ; add",
                  f"add ; scalar({k})"),
            Axiom(f"scalar-discard[{k}]", "scalars", f"scalar({k}) ; discard", "discard"),
            Axiom(f"scalar-zero[{k}]", "scalars", f"zero ; scalar({k})", "zero"),
            Axiom(f"scalar-inverse[{k}]", "scalars", f"scalar({k}) ; coscalar({k})", "id:n"),
            Axiom(f"coscalar-inverse[{k}]", "scalars", f"coscalar({k}) ; scalar({k})", "id:n"),
        ]
    ax += [
        Axiom("scalar-zero-disconnects", "scalars", "scalar(0)", "discard ; zero"),
        Axiom("scalar-one", "scalars", "scalar(1)", "id:n"),
        Axiom("cup-colour-change", "cups", "codiscard ; copy",
              "zero ; coadd ; (id:n | scalar(-1))"),
        Axiom("cap-colour-change", "cups", "cocopy ; discard",
              "(id:n | scalar(-1)) ; add ; cozero"),
        Axiom("antipode-involution", "cups", "scalar(-1) ; scalar(-1)", "id:n"),
        Axiom("dup", "affine", "one ; copy", "one | one"),
        Axiom("del", "affine", "one ; discard", "id"),
        Axiom("empty", "affine", "id:n | (one ; cozero)",
              "(discard ; codiscard) | (one ; cozero)"),
        Axiom("one-plus-one", "affine", "(one | one) ; add", "one ; scalar(2)"),
        Axiom("zero-below-codiscard", "order", "zero", "codiscard", "<="),
    ]
    return tuple(ax)


AXIOMS = _build()


def axioms_suite(axioms=AXIOMS) -> List[AxiomResult]:
    """Check every axiom instance by comparing denotations."""
    out = []
    for a in axioms:
        lhs, rhs = denote(parse_term(a.lhs)), denote(parse_term(a.rhs))
        ok = contains(rhs, lhs) if a.relation == "<=" else lhs == rhs
        out.append(AxiomResult(a, ok))
    return out
