"""AST for a second-order quantified modal language with exemplification and encoding.

Terms and formulas are immutable; every variable and constant carries a sort.
Alpha-equivalence is decided through a de Bruijn canonical key, substitution is
capture-avoiding, and beta reduction is restricted to applications whose matrix
is safe (in AOT mode a lambda with encoding atoms on its bound variable may
fail to denote, so such redexes are left in place).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union


class SortError(Exception):
    """A term or formula violates the sort discipline."""


# ---------------------------------------------------------------------------
# Sorts

@dataclass(frozen=True)
class Sort:
    kind: str  # 'ind' | 'rel' | 'so'
    arity: int = 0

    def __post_init__(self):
        if self.kind not in ("ind", "rel", "so"):
            raise SortError(f"unknown sort kind {self.kind!r}")
        if self.arity < 0:
            raise SortError("negative arity")

    def __str__(self):
        if self.kind == "ind":
            return "ind"
        if self.kind == "so":
            return "so"
        if self.arity == 0:
            return "prop"
        return f"rel {self.arity}"


INDIVIDUAL = Sort("ind")
SECOND_ORDER = Sort("so")


def Relation(n: int) -> Sort:
    return Sort("rel", n)


PROPOSITION = Relation(0)
REL1 = Relation(1)


# ---------------------------------------------------------------------------
# Terms

class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str
    sort: Sort


@dataclass(frozen=True)
class Const(Term):
    name: str
    sort: Sort


@dataclass(frozen=True)
class Lambda(Term):
    params: tuple  # tuple[Var, ...], all individual-sorted, distinct
    body: "Formula"

    def __post_init__(self):
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise SortError("lambda binds a variable twice")
        for p in self.params:
            if p.sort != INDIVIDUAL:
                raise SortError("lambda binds a non-individual variable")


@dataclass(frozen=True)
class Description(Term):
    var: Var
    body: "Formula"

    def __post_init__(self):
        if self.var.sort != INDIVIDUAL:
            raise SortError("description binds a non-individual variable")


@dataclass(frozen=True)
class MacroTerm(Term):
    name: str
    args: tuple = ()


# Macros are a closed table; argument and result sorts live here so that
# sort checking does not depend on the expansion rules.
MACRO_TERM_SIGS = {
    # name: (arg sorts, result sort)
    "O!": ((), REL1),
    "A!": ((), REL1),
    "G": ((), REL1),
    "G*": ((), REL1),
    "NE_g": ((), REL1),
    "NE_s": ((), REL1),
    "NE_a": ((), REL1),
    "neg": ((REL1,), REL1),
}

MACRO_FORMULA_SIGS = {
    "ent": (REL1, REL1),
    "ess_g": (REL1, INDIVIDUAL),
    "ess_s": (REL1, INDIVIDUAL),
    "ess_a": (REL1, INDIVIDUAL),
    "dn": (None,),        # one argument of any term sort
    "id": (None, None),   # two arguments of one shared sort
}


def sort_of(t: Term) -> Sort:
    if isinstance(t, (Var, Const)):
        return t.sort
    if isinstance(t, Lambda):
        return Relation(len(t.params))
    if isinstance(t, Description):
        return INDIVIDUAL
    if isinstance(t, MacroTerm):
        try:
            return MACRO_TERM_SIGS[t.name][1]
        except KeyError:
            raise SortError(f"unknown term macro {t.name!r}")
    raise SortError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Formulas

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Exemplify(Formula):
    rel: Term
    args: tuple = ()  # tuple[Term, ...] of individuals


@dataclass(frozen=True)
class Encode(Formula):
    obj: Term
    rel: Term


@dataclass(frozen=True)
class SOAtom(Formula):
    op: Term  # second-order constant
    arg: Term  # unary-relation term


@dataclass(frozen=True)
class PrimitiveEq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    body: Formula


@dataclass(frozen=True)
class Actually(Formula):
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: Var
    body: Formula


# Derived connectives; expand_derived maps them to the primitives above.

@dataclass(frozen=True)
class Diamond(Formula):
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: Var
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Xor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class MacroFormula(Formula):
    name: str
    args: tuple = ()


Node = Union[Term, Formula]

UNARY = (Not, Box, Actually, Diamond)
BINARY = (Implies, And, Or, Iff, Xor)
BINDERS = (Forall, Exists)


def children(x: Node):
    """Immediate term/formula children, for generic traversals."""
    if isinstance(x, (Var, Const)):
        return ()
    if isinstance(x, Lambda):
        return (x.body,)
    if isinstance(x, Description):
        return (x.body,)
    if isinstance(x, MacroTerm):
        return x.args
    if isinstance(x, Exemplify):
        return (x.rel, *x.args)
    if isinstance(x, Encode):
        return (x.obj, x.rel)
    if isinstance(x, SOAtom):
        return (x.op, x.arg)
    if isinstance(x, PrimitiveEq):
        return (x.left, x.right)
    if isinstance(x, UNARY):
        return (x.body,)
    if isinstance(x, BINARY):
        return (x.left, x.right)
    if isinstance(x, BINDERS):
        return (x.body,)
    if isinstance(x, MacroFormula):
        return x.args
    raise TypeError(f"not an AST node: {x!r}")


def binder_vars(x: Node) -> tuple:
    if isinstance(x, Lambda):
        return x.params
    if isinstance(x, (Description, Forall, Exists)):
        return (x.var,)
    return ()


def free_vars(x: Node) -> frozenset:
    bound = binder_vars(x)
    out = set()
    for c in children(x):
        out |= free_vars(c)
    if isinstance(x, Var):
        out.add(x)
    return frozenset(out) - frozenset(bound)


def free_names(x: Node) -> frozenset:
    return frozenset(v.name for v in free_vars(x))


def subnodes(x: Node):
    yield x
    for c in children(x):
        yield from subnodes(c)


def contains_encode(x: Node) -> bool:
    return any(isinstance(n, Encode) for n in subnodes(x))


# ---------------------------------------------------------------------------
# Reconstruction helper

def rebuild(x: Node, new_children: tuple) -> Node:
    """Rebuild a node with the given children (same arity, binder vars kept)."""
    if isinstance(x, Lambda):
        return Lambda(x.params, new_children[0])
    if isinstance(x, Description):
        return Description(x.var, new_children[0])
    if isinstance(x, MacroTerm):
        return MacroTerm(x.name, tuple(new_children))
    if isinstance(x, Exemplify):
        return Exemplify(new_children[0], tuple(new_children[1:]))
    if isinstance(x, Encode):
        return Encode(new_children[0], new_children[1])
    if isinstance(x, SOAtom):
        return SOAtom(new_children[0], new_children[1])
    if isinstance(x, PrimitiveEq):
        return PrimitiveEq(new_children[0], new_children[1])
    if isinstance(x, UNARY):
        return type(x)(new_children[0])
    if isinstance(x, BINARY):
        return type(x)(new_children[0], new_children[1])
    if isinstance(x, (Forall, Exists)):
        return type(x)(x.var, new_children[0])
    if isinstance(x, MacroFormula):
        return MacroFormula(x.name, tuple(new_children))
    raise TypeError(f"cannot rebuild {x!r}")


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def rename_binder(x: Node, old: Var, new: Var) -> Node:
    """Rename one bound variable of x (x must bind old)."""
    body_subst = lambda b: substitute(b, old, new)
    if isinstance(x, Lambda):
        params = tuple(new if p == old else p for p in x.params)
        return Lambda(params, body_subst(x.body))
    if isinstance(x, Description):
        return Description(new, body_subst(x.body))
    if isinstance(x, (Forall, Exists)):
        return type(x)(new, body_subst(x.body))
    raise TypeError(f"{x!r} is not a binder")


def substitute(x: Node, var: Var, term: Term) -> Node:
    """Capture-avoiding substitution of term for free occurrences of var."""
    if sort_of(term) != var.sort:
        raise SortError(
            f"substituting a {sort_of(term)} term for {var.sort} variable {var.name}"
        )
    return _subst(x, {var: term})


def substitute_many(x: Node, mapping: dict) -> Node:
    for v, t in mapping.items():
        if sort_of(t) != v.sort:
            raise SortError(f"bad sort in substitution for {v.name}")
    return _subst(x, dict(mapping))


def _subst(x: Node, mapping: dict) -> Node:
    if not mapping:
        return x
    if isinstance(x, Var):
        return mapping.get(x, x)
    if isinstance(x, Const):
        return x
    bvs = binder_vars(x)
    if bvs:
        live = {v: t for v, t in mapping.items() if v not in bvs}
        if not live:
            return x
        # Rename any binder that would capture a free variable of the payload.
        payload_names = set()
        for t in live.values():
            payload_names |= free_names(t)
        for bv in bvs:
            if bv.name in payload_names:
                taken = payload_names | free_names(x) | {v.name for v in bvs}
                nv = Var(fresh_name(bv.name, taken), bv.sort)
                x = rename_binder(x, bv, nv)
        return rebuild(x, tuple(_subst(c, live) for c in children(x)))
    return rebuild(x, tuple(_subst(c, mapping) for c in children(x)))


# ---------------------------------------------------------------------------
# Alpha-equivalence via de Bruijn canonicalization

def canonical_key(x: Node):
    """A hashable key invariant under renaming of bound variables."""
    return _ckey(x, {}, 0)


def _ckey(x: Node, env: dict, depth: int):
    if isinstance(x, Var):
        if x.name in env:
            return ("b", env[x.name], str(x.sort))
        return ("f", x.name, str(x.sort))
    if isinstance(x, Const):
        return ("c", x.name, str(x.sort))
    bvs = binder_vars(x)
    if bvs:
        env = dict(env)
        for i, bv in enumerate(bvs):
            env[bv.name] = depth + i
        depth += len(bvs)
    tag = type(x).__name__
    extra = (x.name,) if isinstance(x, (MacroTerm, MacroFormula)) else ()
    return (tag, *extra, len(binder_vars(x)),
            tuple(_ckey(c, env, depth) for c in children(x)))


def alpha_equivalent(a: Node, b: Node) -> bool:
    return canonical_key(a) == canonical_key(b)


# ---------------------------------------------------------------------------
# Beta normalization

def _param_touches_encode(body: Formula, param: Var) -> bool:
    """True when param occurs free inside some Encode atom of body."""
    def walk(x, shadowed):
        if isinstance(x, Encode):
            for sub in subnodes(x):
                if isinstance(sub, Var) and sub == param and param.name not in shadowed:
                    return True
            # fall through: Encode has no binders of its own below this check
        bvs = {v.name for v in binder_vars(x)}
        inner = shadowed | bvs
        if isinstance(x, Var):
            return False
        return any(walk(c, inner) for c in children(x))
    return walk(body, set())


def beta_step_safe(lam: Lambda) -> bool:
    """A redex with this lambda may be reduced without changing meaning.

    In AOT a lambda whose matrix tests encoding of the bound variable may
    fail to denote; those applications are kept as written.
    """
    return all(not _param_touches_encode(lam.body, p) for p in lam.params)


def beta_normalize(x: Node) -> Node:
    y = rebuild_bottom_up(x)
    return y


def rebuild_bottom_up(x: Node) -> Node:
    if isinstance(x, (Var, Const)):
        return x
    x = rebuild(x, tuple(rebuild_bottom_up(c) for c in children(x)))
    if isinstance(x, Exemplify) and isinstance(x.rel, Lambda):
        lam = x.rel
        if len(lam.params) == len(x.args) and beta_step_safe(lam):
            reduced = substitute_many(lam.body, dict(zip(lam.params, x.args)))
            return rebuild_bottom_up(reduced)
    return x
