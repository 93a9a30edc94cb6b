"""Aczel-model semantics for second-order abstract-object theory.

A model carries ordinary and special urelements, finite worlds with total
accessibility, the full space of urelement relations, and a proxy map from
abstract objects (sets of relations, packed as bitmasks over the relation
space) to special urelements. Exemplification routes every individual
through its urelement; encoding tests membership in an abstract object's
set and is world-independent. Terms may fail to denote: atoms touching a
non-denoting term are false.

Individual quantifiers run on a quotient. A variable whose encoding atoms
all use relation terms closed at the quantifier ranges over membership
patterns; a variable free of encoding atoms ranges over urelement
representatives; anything else needs one full sweep over all encoded sets,
evaluated column-wise on packed integers. Nested full sweeps exceed the
budget and raise, never truncate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formulas import (
    INDIVIDUAL, PROPOSITION, REL1,
    Actually, And, Box, Const, Description, Diamond, Encode, Exemplify,
    Exists, Forall, Formula, Iff, Implies, Lambda, MacroFormula, Not, Or,
    PrimitiveEq, SOAtom, Term, Var, Xor,
    beta_normalize, binder_vars, canonical_key, children, free_names,
    subnodes,
)
from .macros import expand_derived
from .signature import LogicTag, Mode, Signature


class AotEvalError(Exception):
    pass


class AotBudgetError(AotEvalError):
    """A quantifier or term needs more than the declared search budget."""


@dataclass(frozen=True)
class Ordinary:
    u: int


@dataclass(frozen=True)
class Abstract:
    encoded: int  # bitmask over relation-space values


@dataclass(frozen=True)
class Denotes:
    value: object


@dataclass(frozen=True)
class NonDenoting:
    pass


NON_DENOTING = NonDenoting()

MAX_URELEMENT_BITS = 4  # |U| * |W| cap keeps the relation space at <= 16


@dataclass(frozen=True)
class AczelConfig:
    n_ordinary: int = 1
    n_special: int = 1
    n_worlds: int = 2
    actual: int = 0
    sigma: tuple = ("constant",)   # or ("membership", relation-value)
    e_bang: int | None = None      # relation value for concreteness
    consts: dict = field(default_factory=dict)
    full_scan_budget: int = 1
    pattern_budget: int = 2


@dataclass(frozen=True, eq=False)
class AczelModel:
    config: AczelConfig
    n_ordinary: int
    n_special: int
    n_worlds: int
    actual: int
    relspace1: tuple   # all functions U x W -> bool, packed; index == value
    propspace: tuple   # all functions W -> bool
    sigma: tuple
    denot: dict        # name -> Individual | relation value | world mask
    sig: Signature

    @property
    def n_urelements(self) -> int:
        return self.n_ordinary + self.n_special

    def rel_bit(self, value: int, u: int, w: int) -> bool:
        return bool((value >> (u * self.n_worlds + w)) & 1)

    def sigma_of(self, encoded: int) -> int:
        """Special-urelement index serving as an abstract object's proxy."""
        if self.sigma[0] == "constant":
            return 0
        if self.sigma[0] == "membership":
            return (1 if (encoded >> self.sigma[1]) & 1 else 0) % self.n_special
        raise AotEvalError(f"unknown sigma rule {self.sigma!r}")

    def urelement_of(self, ind) -> int:
        if isinstance(ind, Ordinary):
            return ind.u
        return self.n_ordinary + self.sigma_of(ind.encoded)


def build_aczel(config: AczelConfig) -> AczelModel:
    if min(config.n_ordinary, config.n_special, config.n_worlds) < 1:
        raise AotEvalError("urelements and worlds must be non-empty")
    n_u = config.n_ordinary + config.n_special
    if n_u * config.n_worlds > MAX_URELEMENT_BITS:
        raise AotEvalError(
            f"|U|*|W| = {n_u * config.n_worlds} exceeds the cap "
            f"{MAX_URELEMENT_BITS}")
    relspace1 = tuple(range(1 << (n_u * config.n_worlds)))
    propspace = tuple(range(1 << config.n_worlds))
    e_bang = config.e_bang
    if e_bang is None:
        # concreteness holds of the first ordinary urelement at the first
        # non-actual world only, so nothing is concrete at the actual world
        e_bang = 0
        if config.n_worlds > 1:
            w1 = 1 if config.actual != 1 else 0
            e_bang = 1 << (0 * config.n_worlds + w1)
    for s in range(config.n_special):
        u = config.n_ordinary + s
        for w in range(config.n_worlds):
            if (e_bang >> (u * config.n_worlds + w)) & 1:
                raise AotEvalError("concreteness must fail of special urelements")
    denot = {"E!": e_bang}
    consts = {"E!": REL1}
    for name, spec in config.consts.items():
        kind = spec[0]
        if kind == "ordinary":
            denot[name] = Ordinary(spec[1])
            consts[name] = INDIVIDUAL
        elif kind == "abstract":
            mask = 0
            for v in spec[1]:
                mask |= 1 << v
            denot[name] = Abstract(mask)
            consts[name] = INDIVIDUAL
        elif kind == "prop":
            denot[name] = spec[1]
            consts[name] = PROPOSITION
        elif kind == "rel":
            denot[name] = spec[1]
            consts[name] = REL1
        else:
            raise AotEvalError(f"unknown constant spec {spec!r}")
    sig = Signature(Mode.AOT, LogicTag.S5TOTAL, consts)
    return AczelModel(config, config.n_ordinary, config.n_special,
                      config.n_worlds, config.actual, relspace1, propspace,
                      config.sigma, denot, sig)


def minimal_model(extra_consts: dict | None = None,
                  sigma: tuple = ("constant",)) -> AczelModel:
    """One ordinary and one special urelement over two worlds; k1 names the
    ordinary object and k2 the abstract object encoding nothing."""
    consts = {"k1": ("ordinary", 0), "k2": ("abstract", ())}
    consts.update(extra_consts or {})
    return build_aczel(AczelConfig(consts=consts, sigma=sigma))


# ---------------------------------------------------------------------------
# Column machinery for full sweeps over encoded sets

_MEMBERSHIP_CACHE: dict = {}


def _membership_masks(n_values: int) -> list:
    """masks[v]: one bit per encoded set S, set iff v is a member of S."""
    if n_values in _MEMBERSHIP_CACHE:
        return _MEMBERSHIP_CACHE[n_values]
    n_cols = 1 << n_values
    masks = []
    for v in range(n_values):
        block = ((1 << (1 << v)) - 1) << (1 << v)   # 2^v zeros, then ones
        width = 1 << (v + 1)
        while width < n_cols:
            block |= block << width
            width <<= 1
        masks.append(block)
    _MEMBERSHIP_CACHE[n_values] = masks
    return masks


class _EvalContext:
    def __init__(self, m: AczelModel):
        self.m = m
        self.full_scans = 0
        self.pattern_depth = 0
        self.n_cols = 1 << len(m.relspace1)
        self.membership = _membership_masks(len(m.relspace1))
        self.sigma_class_masks = self._sigma_classes()
        self.closed_cache: dict = {}

    def _sigma_classes(self) -> dict:
        m = self.m
        full = (1 << self.n_cols) - 1
        if m.sigma[0] == "constant" or m.n_special == 1:
            return {0: full}
        mem = self.membership[m.sigma[1]]
        return {0: full ^ mem, 1: mem}


def _encode_usage(x: str, f: Formula):
    """(needs_full_sweep, closed_relation_terms) for quantified variable x.

    A relation term is closed when it mentions no variable bound between
    the quantifier and the encoding atom."""
    closed: list = []
    state = {"full": False}

    def walk(g, bound: frozenset):
        if isinstance(g, Var):
            return
        bvs = frozenset(v.name for v in binder_vars(g))
        if x in bvs or x not in free_names(g):
            return
        if isinstance(g, Encode):
            if x in free_names(g.obj):
                if not (isinstance(g.obj, Var) and g.obj.name == x):
                    state["full"] = True
                if x in free_names(g.rel) or (free_names(g.rel) & bound):
                    state["full"] = True
                else:
                    closed.append(g.rel)
            elif x in free_names(g.rel):
                state["full"] = True
            return
        if isinstance(g, (Lambda, Description)):
            state["full"] = True
            return
        inner = bound | bvs
        for c in children(g):
            if isinstance(c, Formula):
                walk(c, inner)
            elif isinstance(c, Term) and x in free_names(c):
                if not (isinstance(c, Var) and c.name == x):
                    state["full"] = True

    walk(f, frozenset())
    return state["full"], closed


def _pattern_values(closed_rels, m: AczelModel, a: dict,
                    ctx: "_EvalContext") -> list:
    values = []
    for t in closed_rels:
        d = denote_in(t, m, a, ctx)
        if isinstance(d, Denotes):
            values.append(d.value)
    if m.sigma[0] == "membership":
        values.append(m.sigma[1])
    values = sorted(set(values))
    if len(values) > 8:
        raise AotBudgetError("too many reachable relation values to quotient")
    return values


def _pattern_reps(m: AczelModel, values) -> list:
    """Abstract representatives: one encoded set per (proxy class,
    membership pattern over the reachable values)."""
    reps = []
    for s in range(m.n_special):
        for bits in range(1 << len(values)):
            enc = 0
            for i, v in enumerate(values):
                if (bits >> i) & 1:
                    enc |= 1 << v
            if m.sigma_of(enc) == s:
                reps.append(Abstract(enc))
    return reps


def _individual_domain(var: Var, body: Formula, m: AczelModel, a: dict,
                       ctx: "_EvalContext"):
    """('reps', list) or ('full', closed-values) for an individual quantifier."""
    needs_full, closed = _encode_usage(var.name, body)
    if needs_full:
        return ("full", None)
    values = _pattern_values(closed, m, a, ctx)
    reps = [Ordinary(u) for u in range(m.n_ordinary)]
    reps.extend(_pattern_reps(m, values))
    return ("reps", reps)


# ---------------------------------------------------------------------------
# Denotation

def denote(t: Term, m: AczelModel, a: dict | None = None):
    ctx = _EvalContext(m)
    return denote_in(beta_normalize(expand_derived(t)), m, dict(a or {}), ctx)


def denote_in(t: Term, m: AczelModel, a: dict, ctx: _EvalContext):
    if isinstance(t, Var):
        try:
            return Denotes(a[t.name])
        except KeyError:
            raise AotEvalError(f"unhoused free variable {t.name!r}")
    if isinstance(t, Const):
        try:
            return Denotes(m.denot[t.name])
        except KeyError:
            raise AotEvalError(f"uninterpreted constant {t.name!r}")
    if isinstance(t, (Lambda, Description)):
        key = None
        if not (free_names(t) - set(m.denot)):
            key = canonical_key(t)
            hit = ctx.closed_cache.get(key)
            if hit is not None:
                return hit
        if isinstance(t, Lambda):
            if len(t.params) == 0:
                mask = 0
                for w in range(m.n_worlds):
                    if _ev(t.body, m, a, w, ctx):
                        mask |= 1 << w
                d = Denotes(mask)
            elif len(t.params) == 1:
                d = _denote_lambda1(t, m, a, ctx)
            else:
                raise AotEvalError("lambda terms of arity >= 2 are not interpreted")
        else:
            d = _denote_description(t, m, a, ctx)
        if key is not None:
            ctx.closed_cache[key] = d
        return d
    if isinstance(t, (MacroFormula,)):
        raise AotEvalError(f"cannot interpret {t!r}")
    return denote_in(beta_normalize(expand_derived(t)), m, a, ctx)


def _denote_lambda1(t: Lambda, m: AczelModel, a: dict, ctx: _EvalContext):
    """The urelement function for a unary lambda, or non-denoting when its
    matrix separates objects sharing a proxy."""
    x = t.params[0]
    body = t.body
    value = 0
    a2 = dict(a)
    for u in range(m.n_ordinary):
        a2[x.name] = Ordinary(u)
        for w in range(m.n_worlds):
            if _ev(body, m, a2, w, ctx):
                value |= 1 << (u * m.n_worlds + w)

    needs_full, closed = _encode_usage(x.name, body)
    if not needs_full:
        # truth depends on the proxy class and the membership pattern only;
        # the matrix factors iff patterns within one class cannot disagree
        values = _pattern_values(closed, m, a, ctx)
        for s in range(m.n_special):
            reps = [r for r in _pattern_reps(m, values)
                    if m.sigma_of(r.encoded) == s]
            truths = None
            for rep in reps:
                a2[x.name] = rep
                got = tuple(_ev(body, m, a2, w, ctx)
                            for w in range(m.n_worlds))
                if truths is None:
                    truths = got
                elif truths != got:
                    return NON_DENOTING
            for w in range(m.n_worlds):
                if truths and truths[w]:
                    value |= 1 << ((m.n_ordinary + s) * m.n_worlds + w)
        return Denotes(value)

    cols = _scan_columns(x, body, m, a, ctx)
    for s, cmask in ctx.sigma_class_masks.items():
        rep_col = _first_bit(cmask)
        for w in range(m.n_worlds):
            got = cols[w] & cmask
            if got != 0 and got != cmask:
                return NON_DENOTING
            if (cols[w] >> rep_col) & 1:
                value |= 1 << ((m.n_ordinary + s) * m.n_worlds + w)
    return Denotes(value)


def _first_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _denote_description(t: Description, m: AczelModel, a: dict,
                        ctx: _EvalContext):
    """The unique satisfier at the actual world, else non-denoting."""
    x, body = t.var, t.body
    w0 = m.actual
    a2 = dict(a)
    hits = []
    for u in range(m.n_ordinary):
        a2[x.name] = Ordinary(u)
        if _ev(body, m, a2, w0, ctx):
            hits.append(Ordinary(u))
            if len(hits) > 1:
                return NON_DENOTING

    needs_full, closed = _encode_usage(x.name, body)
    if not needs_full:
        # any satisfying pattern class contains many abstract objects,
        # so an abstract satisfier already spoils uniqueness
        values = _pattern_values(closed, m, a, ctx)
        singleton_classes = len(values) >= len(m.relspace1)
        for rep in _pattern_reps(m, values):
            a2[x.name] = rep
            if _ev(body, m, a2, w0, ctx):
                if singleton_classes:
                    hits.append(rep)
                    if len(hits) > 1:
                        return NON_DENOTING
                else:
                    return NON_DENOTING
        return Denotes(hits[0]) if len(hits) == 1 else NON_DENOTING

    col = _scan_columns(x, body, m, a, ctx, worlds=(w0,))[w0]
    count = col.bit_count()
    if count + len(hits) != 1:
        return NON_DENOTING
    if hits:
        return Denotes(hits[0])
    return Denotes(Abstract(_first_bit(col)))


def _prefetch_closed_terms(body: Formula, m: AczelModel, a: dict,
                           ctx: _EvalContext) -> None:
    """Denote (and cache) closed complex subterms before a sweep starts, so
    their own sweeps run sequentially rather than nested."""
    for n in subnodes(body):
        if isinstance(n, (Lambda, Description)) \
                and not (free_names(n) - set(m.denot)):
            denote_in(n, m, a, ctx)


def _scan_columns(x: Var, body: Formula, m: AczelModel, a: dict,
                  ctx: _EvalContext, worlds=None) -> dict:
    """body's truth with x bound to every abstract object, one bit per
    encoded set, per world."""
    if ctx.full_scans >= m.config.full_scan_budget:
        raise AotBudgetError("nested full sweeps over abstract objects")
    _prefetch_closed_terms(body, m, a, ctx)
    ctx.full_scans += 1
    try:
        out = {}
        for w in (worlds if worlds is not None else range(m.n_worlds)):
            out[w] = _vec(body, x.name, m, dict(a), w, ctx)
        return out
    finally:
        ctx.full_scans -= 1


def _vec(f: Formula, x: str, m: AczelModel, a: dict, w: int,
         ctx: _EvalContext) -> int:
    full = (1 << ctx.n_cols) - 1
    if x not in free_names(f):
        return full if _ev(f, m, a, w, ctx) else 0
    if isinstance(f, Encode):
        if isinstance(f.obj, Var) and f.obj.name == x \
                and x not in free_names(f.rel):
            d = denote_in(f.rel, m, a, ctx)
            if isinstance(d, NonDenoting):
                return 0
            return ctx.membership[d.value]
        raise AotBudgetError("encoding atom too complex for the column sweep")
    if isinstance(f, Exemplify):
        head = denote_in(f.rel, m, a, ctx) if x not in free_names(f.rel) else None
        if head is None:
            raise AotBudgetError("quantified variable inside a relation term")
        if isinstance(head, NonDenoting):
            return 0
        if len(f.args) != 1:
            raise AotBudgetError("column sweep over n-ary exemplification")
        arg = f.args[0]
        if not (isinstance(arg, Var) and arg.name == x):
            raise AotBudgetError("quantified variable buried in a term")
        out = 0
        for s, cmask in ctx.sigma_class_masks.items():
            u = m.n_ordinary + s
            if m.rel_bit(head.value, u, w):
                out |= cmask
        return out
    if isinstance(f, Not):
        return full ^ _vec(f.body, x, m, a, w, ctx)
    if isinstance(f, Implies):
        return (full ^ _vec(f.left, x, m, a, w, ctx)) \
            | _vec(f.right, x, m, a, w, ctx)
    if isinstance(f, Box):
        out = full
        for v in range(m.n_worlds):
            out &= _vec(f.body, x, m, a, v, ctx)
        return out
    if isinstance(f, Actually):
        return _vec(f.body, x, m, a, m.actual, ctx)
    if isinstance(f, Forall):
        var = f.var
        if var.sort == INDIVIDUAL:
            kind, reps = _individual_domain(var, f.body, m, a, ctx)
            if kind == "full":
                raise AotBudgetError("nested full sweeps over abstract objects")
            out = full
            for rep in reps:
                a2 = dict(a)
                a2[var.name] = rep
                out &= _vec(f.body, x, m, a2, w, ctx)
            return out
        if var.sort == REL1:
            dom = m.relspace1
        elif var.sort.kind == "rel" and var.sort.arity == 0:
            dom = m.propspace
        else:
            raise AotEvalError(f"no quantification domain at sort {var.sort}")
        out = full
        for val in dom:
            a2 = dict(a)
            a2[var.name] = val
            out &= _vec(f.body, x, m, a2, w, ctx)
        return out
    raise AotBudgetError(f"column sweep cannot handle {type(f).__name__}")


# ---------------------------------------------------------------------------
# Evaluation

def eval_aot(f: Formula, m: AczelModel, a: dict | None = None,
             w: int | None = None) -> bool:
    """Truth at a world (the actual world by default). Derived forms are
    expanded and safe redexes reduced before evaluation."""
    ctx = _EvalContext(m)
    g = beta_normalize(expand_derived(f))
    return _ev(g, m, dict(a or {}), m.actual if w is None else w, ctx)


def _ev(f: Formula, m: AczelModel, a: dict, w: int, ctx: _EvalContext) -> bool:
    if isinstance(f, Exemplify):
        head = denote_in(f.rel, m, a, ctx)
        if isinstance(head, NonDenoting):
            return False
        if not f.args:
            return bool((head.value >> w) & 1)
        args = []
        for arg in f.args:
            d = denote_in(arg, m, a, ctx)
            if isinstance(d, NonDenoting):
                return False
            args.append(d.value)
        if len(args) == 1:
            return m.rel_bit(head.value, m.urelement_of(args[0]), w)
        raise AotEvalError("n-ary exemplification is not interpreted")
    if isinstance(f, Encode):
        obj = denote_in(f.obj, m, a, ctx)
        rel = denote_in(f.rel, m, a, ctx)
        if isinstance(obj, NonDenoting) or isinstance(rel, NonDenoting):
            return False
        if not isinstance(obj.value, Abstract):
            return False
        return bool((obj.value.encoded >> rel.value) & 1)
    if isinstance(f, SOAtom):
        table = m.denot.get(f.op.name)
        if table is None:
            raise AotEvalError(
                f"uninterpreted second-order constant {f.op.name!r}")
        d = denote_in(f.arg, m, a, ctx)
        if isinstance(d, NonDenoting):
            return False
        return bool((table.get(d.value, 0) >> w) & 1)
    if isinstance(f, PrimitiveEq):
        raise AotEvalError("primitive equality has no place in these models")
    if isinstance(f, Not):
        return not _ev(f.body, m, a, w, ctx)
    if isinstance(f, Implies):
        return (not _ev(f.left, m, a, w, ctx)) or _ev(f.right, m, a, w, ctx)
    if isinstance(f, Box):
        return all(_ev(f.body, m, a, v, ctx) for v in range(m.n_worlds))
    if isinstance(f, Actually):
        return _ev(f.body, m, a, m.actual, ctx)
    if isinstance(f, Forall):
        var = f.var
        if var.sort == INDIVIDUAL:
            kind, reps = _individual_domain(var, f.body, m, a, ctx)
            if kind == "full":
                for u in range(m.n_ordinary):
                    a2 = dict(a)
                    a2[var.name] = Ordinary(u)
                    if not _ev(f.body, m, a2, w, ctx):
                        return False
                cols = _scan_columns(var, f.body, m, a, ctx, worlds=(w,))
                return cols[w] == (1 << ctx.n_cols) - 1
            if ctx.pattern_depth >= m.config.pattern_budget:
                raise AotBudgetError("individual quantifiers nested too deeply")
            ctx.pattern_depth += 1
            try:
                for rep in reps:
                    a2 = dict(a)
                    a2[var.name] = rep
                    if not _ev(f.body, m, a2, w, ctx):
                        return False
                return True
            finally:
                ctx.pattern_depth -= 1
        if var.sort == REL1:
            dom = m.relspace1
        elif var.sort.kind == "rel" and var.sort.arity == 0:
            dom = m.propspace
        else:
            raise AotEvalError(f"no quantification domain at sort {var.sort}")
        for val in dom:
            a2 = dict(a)
            a2[var.name] = val
            if not _ev(f.body, m, a2, w, ctx):
                return False
        return True
    if isinstance(f, (And, Or, Iff, Xor, Diamond, Exists, MacroFormula)):
        return _ev(beta_normalize(expand_derived(f)), m, a, w, ctx)
    raise AotEvalError(f"cannot evaluate {f!r}")


# ---------------------------------------------------------------------------
# Term existence and identity

def exists_term(t: Term, m: AczelModel, a: dict | None = None) -> bool:
    """The sort-cased existence condition; agrees with denotation."""
    return eval_aot(MacroFormula("dn", (t,)), m, a)


def identity_holds(t1: Term, t2: Term, m: AczelModel,
                   a: dict | None = None) -> bool:
    return eval_aot(MacroFormula("id", (t1, t2)), m, a)

# ---------------------------------------------------------------------------
# The minimal-model census

@dataclass
class MinimalModelReport:
    n_worlds: int
    n_propositions: int
    n_relations: int
    witnesses: list            # (name, value) in discovery order
    historical_distinct: bool
    pair_witnesses: dict       # (i, j) -> (urelement, world)
    transcript_verdict: object
    transcript_semantics: dict

    def to_text(self) -> str:
        out = [
            f"worlds: {self.n_worlds}",
            f"propositions: {self.n_propositions}",
            f"relations: {self.n_relations}",
            f"named witnesses: {len(self.witnesses)}",
        ]
        for name, value in self.witnesses:
            out.append(f"  {name} = {value:0{self.n_relations.bit_length() - 1}b}")
        out.append(f"pairwise distinguishing witnesses: {len(self.pair_witnesses)}")
        out.append("historical six pairwise distinct: "
                   + ("yes" if self.historical_distinct else "no"))
        from .abstraction import Accepted
        if isinstance(self.transcript_verdict, Accepted):
            from .printer import print_formula
            out.append("two-individuals derivation: accepted, conclusion "
                       + print_formula(self.transcript_verdict.conclusion))
        else:
            out.append(f"two-individuals derivation: {self.transcript_verdict}")
        for k in sorted(self.transcript_semantics):
            out.append(f"  {k}: {'yes' if self.transcript_semantics[k] else 'no'}")
        return "\n".join(out) + "\n"


def _witness_terms(m: AczelModel) -> list:
    """Named relation terms whose values populate the relation space:
    the historical six, the two contingency properties, and enough
    conjunctive combinations (with negations) to separate everything."""
    from .parser import parse_term
    from .printer import print_term

    base_texts = [
        "E!",
        "[\\x ~E! x]",
        "O!",
        "A!",
        "[\\x E! x -> E! x]",
        "[\\x ~(E! x -> E! x)]",
        "[\\x exists y (E! y & ~ @ E! y)]",
        "[\\x ~ exists y (E! y & ~ @ E! y)]",
    ]
    pool = []
    values = {}
    for text in base_texts:
        t = parse_term(text, m.sig)
        d = denote(t, m)
        if isinstance(d, Denotes) and d.value not in values:
            values[d.value] = text
            pool.append((text, t, d.value))

    def apply_term(t, x):
        from .formulas import Exemplify
        return Exemplify(t, (x,))

    target = len(m.relspace1)
    frontier = list(pool)
    while len(values) < target and frontier:
        new = []
        for i in range(len(pool)):
            for j in range(i + 1, len(pool)):
                if len(values) >= target:
                    break
                n1, t1, _ = pool[i]
                n2, t2, _ = pool[j]
                x = Var("x", INDIVIDUAL)
                conj = Lambda((x,), And(apply_term(t1, x), apply_term(t2, x)))
                negc = Lambda((x,), Not(And(apply_term(t1, x), apply_term(t2, x))))
                for t in (conj, negc):
                    d = denote(t, m)
                    if isinstance(d, Denotes) and d.value not in values:
                        from .printer import print_term as pt
                        name = pt(t)
                        values[d.value] = name
                        new.append((name, t, d.value))
        pool.extend(new)
        frontier = new
    return [(name, value) for name, _, value in pool]


def minimal_model_report(m: AczelModel) -> MinimalModelReport:
    witnesses = _witness_terms(m)
    n = m.n_urelements * m.n_worlds
    pair_witnesses = {}
    for i in range(len(witnesses)):
        for j in range(i + 1, len(witnesses)):
            diff = witnesses[i][1] ^ witnesses[j][1]
            if diff:
                bit = _first_bit(diff)
                pair_witnesses[(i, j)] = (bit // m.n_worlds, bit % m.n_worlds)
    historical = [v for _, v in witnesses[:6]]
    historical_distinct = len(set(historical)) == len(historical)

    from .abstraction import check_proof, make_layer
    from .proofs import two_individuals_premises, two_individuals_script
    verdict = check_proof(two_individuals_script(), make_layer("AOT"),
                          two_individuals_premises())
    semantics = {}
    if "k1" in m.denot and "k2" in m.denot:
        prem = two_individuals_premises()
        semantics["premises true at the actual world"] = all(
            eval_aot(p, m) for p in prem)
        from .parser import parse_term
        k1 = m.denot["k1"]
        k2 = m.denot["k2"]
        semantics["conclusion true (the two are not identical)"] = \
            not identity_holds(parse_term("k1", m.sig), parse_term("k2", m.sig), m)
        semantics["distinct urelements"] = \
            m.urelement_of(k1) != m.urelement_of(k2)
    return MinimalModelReport(
        m.n_worlds, len(m.propspace), len(m.relspace1), witnesses,
        historical_distinct, pair_witnesses, verdict, semantics)


# ---------------------------------------------------------------------------
# Syntactic worlds and the fundamental theorem

@dataclass
class WorldTheoryReport:
    syntactic_worlds: list        # encoded sets (as tuples of prop values)
    semantic_worlds: int
    bijection: list               # (syntactic index, semantic world)
    bijective: bool
    fundamental_theorem_ok: bool
    encoding_propositions_constant: bool
    checked_propositions: int

    def to_text(self) -> str:
        out = [
            f"syntactic worlds: {len(self.syntactic_worlds)}",
            f"semantic worlds: {self.semantic_worlds}",
        ]
        for i, enc in enumerate(self.syntactic_worlds):
            props = ",".join(str(p) for p in enc)
            out.append(f"  w_syn{i} encodes propositions [{props}]")
        out.append("bijection with semantic worlds: "
                   + ("yes" if self.bijective else "no")
                   + " " + str(self.bijection))
        out.append(f"fundamental theorem over {self.checked_propositions} "
                   "propositions: "
                   + ("holds" if self.fundamental_theorem_ok else "FAILS"))
        out.append("encoding-generated propositions world-constant: "
                   + ("yes" if self.encoding_propositions_constant else "no"))
        return "\n".join(out) + "\n"


def _prop_property_value(m: AczelModel, p: int) -> int:
    """The relation value of the propositional property for p."""
    out = 0
    for u in range(m.n_urelements):
        out |= p << (u * m.n_worlds)
    return out


def world_theory_report(m: AczelModel) -> WorldTheoryReport:
    full_w = (1 << m.n_worlds) - 1
    prop_vals = {p: _prop_property_value(m, p) for p in m.propspace}
    props = sorted(m.propspace)

    candidates = []
    for bits in range(1 << len(props)):
        chosen = [props[i] for i in range(len(props)) if (bits >> i) & 1]
        maximal = all(((p in chosen) != ((full_w ^ p) in chosen))
                      for p in props)
        if not maximal:
            continue
        possible_worlds = [w for w in range(m.n_worlds)
                           if all((p >> w) & 1 for p in chosen)]
        if possible_worlds:
            candidates.append((tuple(sorted(chosen)), possible_worlds))

    bijection = []
    bijective = True
    seen = set()
    for i, (chosen, worlds) in enumerate(candidates):
        if len(worlds) != 1 or worlds[0] in seen:
            bijective = False
        else:
            seen.add(worlds[0])
            bijection.append((i, worlds[0]))
    if len(seen) != m.n_worlds:
        bijective = False

    # fundamental theorem: necessity is truth at every syntactic world,
    # where truth at a world is encoding the matching propositional property
    ok = True
    for p in props:
        necessary = p == full_w
        at_all_syntactic = all(p in chosen for chosen, _ in candidates)
        if necessary != at_all_syntactic:
            ok = False

    # encoding formulas denote world-constant propositions, so the theorem
    # covers the propositions they generate
    enc_ok = True
    xv, fv = Var("x", INDIVIDUAL), Var("F", REL1)
    enc_atom = Encode(xv, fv)
    samples = [Abstract(0), Abstract(1), Abstract((1 << len(m.relspace1)) - 1)]
    for a_obj in samples:
        for v in (0, 1, len(m.relspace1) - 1):
            bits = {eval_aot(enc_atom, m, {"x": a_obj, "F": v}, w)
                    for w in range(m.n_worlds)}
            if len(bits) != 1:
                enc_ok = False
    return WorldTheoryReport(
        [c for c, _ in candidates], m.n_worlds, bijection, bijective,
        ok, enc_ok, len(props))
