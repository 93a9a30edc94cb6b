"""Finite Kripke interpretations and world-indexed evaluation.

Values are packed into integer bitmasks: a proposition is a mask over
worlds, a unary relation a mask over (individual, world) pairs with bit
position d * n_worlds + w. Box quantifies over all worlds under the
S5 logic tag, mirroring the lifted definition of necessity, and over
accessibility successors otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .formulas import (
    INDIVIDUAL,
    Actually, And, Box, Const, Description, Diamond, Encode, Exemplify,
    Exists, Forall, Formula, Iff, Implies, Lambda, MacroFormula, MacroTerm,
    Not, Or, PrimitiveEq, SOAtom, Term, Var, Xor, free_vars,
)
from .macros import expand_derived
from .signature import LogicTag, Signature


class EvalError(Exception):
    """Evaluation failed: free variable unhoused or construct unsupported."""


RELSPACE_LIMIT = 4  # full function space only while n_individuals * n_worlds <= 4


def full_relspace(n_individuals: int, n_worlds: int) -> tuple:
    bits = n_individuals * n_worlds
    if bits > RELSPACE_LIMIT:
        raise EvalError(
            f"full relation space needs {n_individuals}*{n_worlds} bits; "
            f"limit is {RELSPACE_LIMIT} (list the space explicitly instead)")
    return tuple(range(1 << bits))


def rel_bit(value: int, d: int, w: int, n_worlds: int) -> bool:
    return bool((value >> (d * n_worlds + w)) & 1)


def is_rigid_value(value: int, n_individuals: int, n_worlds: int) -> bool:
    for d in range(n_individuals):
        col = (value >> (d * n_worlds)) & ((1 << n_worlds) - 1)
        if col not in (0, (1 << n_worlds) - 1):
            return False
    return True


def total_access(n_worlds: int) -> frozenset:
    return frozenset((w, v) for w in range(n_worlds) for v in range(n_worlds))


@dataclass(frozen=True, eq=False)
class KripkeInterpretation:
    sig: Signature
    n_worlds: int
    n_individuals: int
    access: frozenset
    denot: dict  # name -> value (mask / int / dict, per sort)
    relspace: tuple = ()
    actual: int = 0
    relvar_domain: str = "full"  # 'full' | 'rigid'

    def __post_init__(self):
        if self.n_worlds < 1 or self.n_individuals < 1:
            raise EvalError("worlds and individuals must be non-empty")
        if self.sig.logic is LogicTag.S5TOTAL and self.access != total_access(self.n_worlds):
            raise EvalError("S5 interpretations carry the total accessibility relation")

    @property
    def logic(self) -> LogicTag:
        return self.sig.logic

    def successors(self, w: int):
        if self.logic is LogicTag.S5TOTAL:
            return range(self.n_worlds)
        return [v for v in range(self.n_worlds) if (w, v) in self.access]

    def relation_domain(self):
        space = self.relspace
        if not space:
            raise EvalError("relation quantifier needs a relation space")
        if self.relvar_domain == "rigid":
            return [v for v in space
                    if is_rigid_value(v, self.n_individuals, self.n_worlds)]
        return space

    def proposition_domain(self):
        return range(1 << self.n_worlds)


def frame_check(m: KripkeInterpretation, tag: LogicTag) -> bool:
    if tag is LogicTag.K:
        return True
    if tag is LogicTag.KB:
        return all((v, w) in m.access for (w, v) in m.access)
    if tag is LogicTag.S5TOTAL:
        return m.access == total_access(m.n_worlds)
    raise ValueError(tag)


def term_value(t: Term, m: KripkeInterpretation, a: dict):
    if isinstance(t, Var):
        try:
            return a[t.name]
        except KeyError:
            raise EvalError(f"unhoused free variable {t.name!r}")
    if isinstance(t, Const):
        try:
            return m.denot[t.name]
        except KeyError:
            raise EvalError(f"uninterpreted constant {t.name!r}")
    if isinstance(t, MacroTerm):
        return term_value(expand_derived(t), m, a)
    if isinstance(t, Lambda):
        n = len(t.params)
        if n == 0:
            mask = 0
            for w in range(m.n_worlds):
                if evaluate(t.body, m, a, w):
                    mask |= 1 << w
            return mask
        if n == 1:
            mask = 0
            for d in range(m.n_individuals):
                inner = dict(a)
                inner[t.params[0].name] = d
                for w in range(m.n_worlds):
                    if evaluate(t.body, m, inner, w):
                        mask |= 1 << (d * m.n_worlds + w)
            return mask
        raise EvalError("lambda terms of arity >= 2 are not interpreted")
    if isinstance(t, Description):
        raise EvalError("definite descriptions are not interpreted in classical models")
    raise EvalError(f"cannot evaluate term {t!r}")


def evaluate(f: Formula, m: KripkeInterpretation, a: dict, w: int) -> bool:
    if isinstance(f, Exemplify):
        v = term_value(f.rel, m, a)
        if not f.args:
            return bool((v >> w) & 1)
        if len(f.args) == 1:
            d = term_value(f.args[0], m, a)
            return rel_bit(v, d, w, m.n_worlds)
        ds = tuple(term_value(arg, m, a) for arg in f.args)
        return bool((v[ds] >> w) & 1)
    if isinstance(f, SOAtom):
        table = m.denot.get(f.op.name)
        if table is None:
            raise EvalError(f"uninterpreted second-order constant {f.op.name!r}")
        v = term_value(f.arg, m, a)
        try:
            mask = table[v]
        except KeyError:
            # applied to a value outside the interpreted domain: false
            return False
        return bool((mask >> w) & 1)
    if isinstance(f, PrimitiveEq):
        return term_value(f.left, m, a) == term_value(f.right, m, a)
    if isinstance(f, Encode):
        raise EvalError("encoding atoms are not interpreted in classical models")
    if isinstance(f, Not):
        return not evaluate(f.body, m, a, w)
    if isinstance(f, Implies):
        return (not evaluate(f.left, m, a, w)) or evaluate(f.right, m, a, w)
    if isinstance(f, And):
        return evaluate(f.left, m, a, w) and evaluate(f.right, m, a, w)
    if isinstance(f, Or):
        return evaluate(f.left, m, a, w) or evaluate(f.right, m, a, w)
    if isinstance(f, Iff):
        return evaluate(f.left, m, a, w) == evaluate(f.right, m, a, w)
    if isinstance(f, Xor):
        return evaluate(f.left, m, a, w) != evaluate(f.right, m, a, w)
    if isinstance(f, Box):
        return all(evaluate(f.body, m, a, v) for v in m.successors(w))
    if isinstance(f, Diamond):
        return any(evaluate(f.body, m, a, v) for v in m.successors(w))
    if isinstance(f, Actually):
        return evaluate(f.body, m, a, m.actual)
    if isinstance(f, (Forall, Exists)):
        dom = _quantifier_domain(f.var, m)
        inner = dict(a)
        name = f.var.name
        if isinstance(f, Forall):
            for val in dom:
                inner[name] = val
                if not evaluate(f.body, m, inner, w):
                    return False
            return True
        for val in dom:
            inner[name] = val
            if evaluate(f.body, m, inner, w):
                return True
        return False
    if isinstance(f, MacroFormula):
        return evaluate(expand_derived(f), m, a, w)
    raise EvalError(f"cannot evaluate {f!r}")


def _quantifier_domain(var: Var, m: KripkeInterpretation):
    if var.sort == INDIVIDUAL:
        return range(m.n_individuals)
    if var.sort.kind == "rel" and var.sort.arity == 1:
        return m.relation_domain()
    if var.sort.kind == "rel" and var.sort.arity == 0:
        return m.proposition_domain()
    raise EvalError(f"no quantification domain at sort {var.sort}")


def proposition_of(f: Formula, m: KripkeInterpretation, a: dict) -> tuple:
    return tuple(evaluate(f, m, a, w) for w in range(m.n_worlds))


class Validity(enum.Enum):
    NECESSARY = "necessary"
    ACTUAL = "actual"


def validity(f: Formula, m: KripkeInterpretation, mode: Validity) -> bool:
    if free_vars(f):
        raise EvalError("validity is defined for closed formulas only")
    if mode is Validity.NECESSARY:
        return all(evaluate(f, m, {}, w) for w in range(m.n_worlds))
    return evaluate(f, m, {}, m.actual)
