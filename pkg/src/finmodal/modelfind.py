"""Exhaustive finite model and countermodel search with incremental pruning.

Interpretations are enumerated in a canonical order: world count, then
individual count, then accessibility bits, then denotation bits (with the
rows of a second-order table visited complement-pair-adjacent, so polarity
constraints prune early). Premises are split into ground instances and
re-checked as soon as the bits they read are assigned.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .formulas import (
    INDIVIDUAL, Formula, Forall, Var, beta_normalize, free_vars, subnodes,
)
from .kripke import (
    EvalError, KripkeInterpretation, evaluate, full_relspace, total_access,
    RELSPACE_LIMIT,
)
from .macros import expand_derived
from .signature import LogicTag, Mode, Signature


class SearchBoundsError(Exception):
    """The requested bounds exceed the relation-space cap."""


class _MissingBit(Exception):
    """A premise instance reads a denotation bit that is not assigned yet.

    args[0] is the (constant, key) token of the missing bit; key is None
    for scalar denotations.
    """


class _PartialDenot(dict):
    def __missing__(self, key):
        raise _MissingBit((key, None))


class _PartialTable(dict):
    """A denotation table under construction. A missing key signals an
    unassigned bit while rows are still being chosen, and an ordinary
    out-of-domain lookup once the table is complete."""

    def __init__(self, name: str):
        super().__init__()
        self.name = name
        self.complete = False

    def __missing__(self, key):
        if self.complete:
            raise KeyError(key)
        raise _MissingBit((self.name, key))


@dataclass(frozen=True)
class Bounds:
    max_worlds: int = 3
    max_individuals: int = 2
    relspace_cap: int = 16
    quantifier_nesting: int = 2

    def __post_init__(self):
        if min(self.max_worlds, self.max_individuals,
               self.relspace_cap, self.quantifier_nesting) < 1:
            raise ValueError("bounds must be at least 1")


@dataclass(frozen=True)
class SatResult:
    model: object  # KripkeInterpretation | None
    bounds: Bounds
    examined: int

    @property
    def is_sat(self) -> bool:
        return self.model is not None


def _pair_adjacent_in(rows, relspace) -> list:
    """rows reordered so a value and its pointwise complement are adjacent."""
    full = len(relspace) - 1 if relspace else 0
    members = set(rows)
    order, seen = [], set()
    for v in rows:
        if v in seen:
            continue
        order.append(v)
        seen.add(v)
        c = full ^ v
        if c in members and c not in seen:
            order.append(c)
            seen.add(c)
    return order


def frames_for(logic: LogicTag, n_worlds: int) -> list:
    if logic is LogicTag.S5TOTAL:
        return [total_access(n_worlds)]
    pairs = [(w, v) for w in range(n_worlds) for v in range(n_worlds)]
    out = []
    for bits in range(1 << len(pairs)):
        R = frozenset(p for k, p in enumerate(pairs) if (bits >> k) & 1)
        if logic is LogicTag.KB and any((v, w) not in R for (w, v) in R):
            continue
        out.append(R)
    return out


def count_frames(logic: LogicTag, n: int) -> int:
    if logic is LogicTag.S5TOTAL:
        return 1
    if logic is LogicTag.KB:
        return 1 << (n * (n + 1) // 2)
    return 1 << (n * n)


def _needs_relspace(sig: Signature, formulas) -> bool:
    if any(s.kind == "so" for s in sig.consts.values()):
        return True
    for f in formulas:
        for n in subnodes(beta_normalize(expand_derived(f))):
            if isinstance(n, (Forall,)) and n.var.sort.kind == "rel" \
                    and n.var.sort.arity == 1:
                return True
    return False


def _denotation_groups(sig: Signature, n_worlds: int, n_individuals: int,
                       relspace, relvar_domain: str = "full") -> list:
    """Ordered bit groups: (const, kind, key, options). Under the rigid
    reading second-order tables carry rows for rigid values only."""
    from .kripke import is_rigid_value
    groups = []
    wmasks = range(1 << n_worlds)
    rows = relspace
    if relvar_domain == "rigid":
        rows = tuple(v for v in relspace
                     if is_rigid_value(v, n_individuals, n_worlds))
    for name in sorted(sig.consts):
        sort = sig.consts[name]
        if sort.kind == "so":
            for v in _pair_adjacent_in(rows, relspace):
                groups.append((name, "so", v, wmasks))
        elif sort.kind == "ind":
            groups.append((name, "ind", None, range(n_individuals)))
        elif sort.arity == 0:
            groups.append((name, "prop", None, wmasks))
        elif sort.arity == 1:
            groups.append((name, "rel1", None,
                           range(1 << (n_individuals * n_worlds))))
        else:
            for ds in itertools.product(range(n_individuals), repeat=sort.arity):
                groups.append((name, "reln", ds, wmasks))
    return groups


def count_models(sig: Signature, b: Bounds) -> int:
    """Closed-form product over independent bit choices."""
    total = 0
    for n_w in range(1, b.max_worlds + 1):
        for n_d in range(1, b.max_individuals + 1):
            need = any(s.kind == "so" for s in sig.consts.values())
            if need and (1 << (n_d * n_w)) > b.relspace_cap:
                raise SearchBoundsError("bounds exceed the relation-space cap")
            relspace = full_relspace(n_d, n_w) if n_d * n_w <= RELSPACE_LIMIT else ()
            per = count_frames(sig.logic, n_w)
            for (_, kind, _, options) in _denotation_groups(sig, n_w, n_d, relspace):
                per *= len(options)
            total += per
    return total


def _split_instances(f: Formula, domains) -> list:
    """Split a leading universal prefix into ground instances."""
    out = []

    def go(g, a):
        if isinstance(g, Forall):
            dom = domains(g.var)
            if dom is not None:
                for val in dom:
                    a2 = dict(a)
                    a2[g.var.name] = val
                    go(g.body, a2)
                return
        out.append((g, a))

    go(f, {})
    return out


def _size_nodes(sig: Signature, b: Bounds, formulas, relvar_domain: str):
    """All (n_worlds, n_individuals, frame, relspace) nodes, canonical order."""
    if sig.mode is not Mode.CLASSICAL:
        raise EvalError("model search covers classical signatures only")
    need = _needs_relspace(sig, formulas)
    for n_w in range(1, b.max_worlds + 1):
        for n_d in range(1, b.max_individuals + 1):
            if need and (1 << (n_d * n_w)) > b.relspace_cap:
                raise SearchBoundsError("bounds exceed the relation-space cap")
            relspace = (full_relspace(n_d, n_w)
                        if n_d * n_w <= RELSPACE_LIMIT else ())
            for R in frames_for(sig.logic, n_w):
                yield (n_w, n_d, R, relspace)


def _search_node(node, sig, b, premises_n, leaf_ok, stop_at_first,
                 relvar_domain="full"):
    """Depth-first search of one (worlds, individuals, frame) node.

    Premise instances wait on the specific denotation bit whose absence
    stopped their evaluation and are re-tried only when that bit is set.
    Returns (first_model, leaves_before_model, total_leaves_examined).
    """
    n_w, n_d, R, relspace = node
    denot = _PartialDenot()
    m = KripkeInterpretation(sig, n_w, n_d, R, denot, relspace,
                             relvar_domain=relvar_domain)
    groups = _denotation_groups(sig, n_w, n_d, relspace, relvar_domain)

    def domains(var: Var):
        if var.sort == INDIVIDUAL:
            return range(n_d)
        if var.sort.kind == "rel" and var.sort.arity == 1:
            return m.relation_domain()
        return None

    tables = {}
    for name in sorted(sig.consts):
        sort = sig.consts[name]
        if sort.kind == "so" or (sort.kind == "rel" and sort.arity >= 2):
            tables[name] = _PartialTable(name)
            denot[name] = tables[name]

    def try_inst(inst):
        """True, False, or the token of the first missing bit."""
        g, a = inst
        try:
            for w in range(n_w):
                if not evaluate(g, m, a, w):
                    return False
            return True
        except _MissingBit as e:
            return e.args[0]

    # Seed the waiting map: instances evaluable from the frame alone are
    # settled immediately.
    waiting0: dict = {}
    for p in premises_n:
        for inst in _split_instances(p, domains):
            r = try_inst(inst)
            if r is False:
                return None, None, 0
            if r is not True:
                waiting0.setdefault(r, []).append(inst)
    waiting0 = {k: tuple(v) for k, v in waiting0.items()}

    examined = 0
    found = None
    found_at = None

    def assign(group, value):
        name, kind, key, _ = group
        if kind in ("so", "reln"):
            tables[name][key] = value
            return (name, key)
        denot[name] = value
        return (name, None)

    def unassign(group):
        name, kind, key, _ = group
        if kind in ("so", "reln"):
            del tables[name][key]
        else:
            del denot[name]

    def leaf_check(waiting) -> bool:
        # All groups are assigned; anything still waiting reads a value
        # outside the listed relation space, which falsifies its atom.
        for insts in waiting.values():
            for inst in insts:
                g, a = inst
                try:
                    for w in range(n_w):
                        if not evaluate(g, m, a, w):
                            return False
                except _MissingBit:
                    return False
        return True

    def rec(gi, waiting):
        nonlocal examined, found, found_at
        if found is not None and stop_at_first:
            return
        if gi == len(groups):
            examined += 1
            for t in tables.values():
                t.complete = True
            try:
                if leaf_check(waiting) and (leaf_ok is None or leaf_ok(m)):
                    if found is None:
                        found = _freeze(m)
                        found_at = examined - 1
            finally:
                for t in tables.values():
                    t.complete = False
            return
        group = groups[gi]
        for value in group[3]:
            token = assign(group, value)
            woken = waiting.get(token, ())
            ok = True
            moved: dict = {}
            for inst in woken:
                r = try_inst(inst)
                if r is False:
                    ok = False
                    break
                if r is not True:
                    moved.setdefault(r, []).append(inst)
            if ok:
                if woken or moved:
                    nxt = dict(waiting)
                    nxt.pop(token, None)
                    for t, insts in moved.items():
                        nxt[t] = nxt.get(t, ()) + tuple(insts)
                else:
                    nxt = waiting
                rec(gi + 1, nxt)
            unassign(group)
            if found is not None and stop_at_first:
                return

    rec(0, waiting0)
    return found, found_at, examined


def _freeze(m: KripkeInterpretation) -> KripkeInterpretation:
    denot = {}
    for k, v in m.denot.items():
        denot[k] = dict(v) if isinstance(v, dict) else v
    return KripkeInterpretation(m.sig, m.n_worlds, m.n_individuals, m.access,
                                denot, m.relspace, m.actual, m.relvar_domain)


def _run_search(premises, sig: Signature, b: Bounds, leaf_ok=None,
                workers: int = 1, relvar_domain: str = "full"):
    """Canonically-first satisfying model and the number of complete
    interpretations examined before it (all of them when none is found).

    The node list is split into contiguous prefix chunks across workers;
    the merge picks the witness from the earliest chunk, so the result and
    the examined count match the single-worker run exactly.
    """
    premises_n = [beta_normalize(expand_derived(p)) for p in premises]
    nodes = list(_size_nodes(sig, b, premises, relvar_domain))

    def work(chunk):
        total = 0
        for node in chunk:
            found, found_at, examined = _search_node(
                node, sig, b, premises_n, leaf_ok, True, relvar_domain)
            if found is not None:
                return found, total + found_at
            total += examined
        return None, total

    if workers <= 1:
        return work(nodes)
    chunk_size = max(1, (len(nodes) + workers - 1) // workers)
    chunks = [nodes[i:i + chunk_size] for i in range(0, len(nodes), chunk_size)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(work, chunks))
    total = 0
    for found, n in results:
        if found is not None:
            return found, total + n
        total += n
    return None, total


def enumerate_models(sig: Signature, b: Bounds):
    """All interpretations within bounds, canonical deterministic order."""
    for node in _size_nodes(sig, b, (), "full"):
        n_w, n_d, R, relspace = node
        groups = _denotation_groups(sig, n_w, n_d, relspace)

        def build(choice):
            denot = {}
            for (name, kind, key, _), value in zip(groups, choice):
                if kind in ("so", "reln"):
                    denot.setdefault(name, {})[key] = value
                else:
                    denot[name] = value
            return KripkeInterpretation(sig, n_w, n_d, R, denot, relspace)

        for choice in itertools.product(*(g[3] for g in groups)):
            yield build(choice)


def decide_sat(premises, sig: Signature, b: Bounds | None = None,
               workers: int = 1, relvar_domain: str = "full") -> SatResult:
    """First satisfying model in canonical order, else exhaustion evidence."""
    b = b or Bounds()
    for p in premises:
        if free_vars(p):
            raise EvalError("premises must be closed")
    model, examined = _run_search(premises, sig, b, None, workers, relvar_domain)
    return SatResult(model, b, examined)


def find_countermodel(premises, conjecture: Formula, sig: Signature,
                      b: Bounds | None = None, workers: int = 1,
                      relvar_domain: str = "full"):
    """A premise model falsifying the conjecture at some world, if any."""
    b = b or Bounds()
    if free_vars(conjecture):
        raise EvalError("conjecture must be closed")
    conj = beta_normalize(expand_derived(conjecture))

    def leaf_ok(m):
        return any(not evaluate(conj, m, {}, w) for w in range(m.n_worlds))

    model, _ = _run_search(premises, sig, b, leaf_ok, workers, relvar_domain)
    return model


def minimize_premises(premises, conjecture: Formula, sig: Signature,
                      b: Bounds | None = None,
                      relvar_domain: str = "full") -> list:
    """All subset-minimal premise subsets that still rule out a bounded
    countermodel, as tuples of 0-based indices, in (size, lex) order."""
    b = b or Bounds()
    premises = tuple(premises)
    if find_countermodel(premises, conjecture, sig, b,
                         relvar_domain=relvar_domain) is not None:
        raise ValueError("the conjecture fails from the full premise set")
    n = len(premises)
    sufficient: list = []
    cache: dict = {}

    def holds(subset) -> bool:
        if subset not in cache:
            cache[subset] = find_countermodel(
                [premises[i] for i in subset], conjecture, sig, b,
                relvar_domain=relvar_domain) is None
        return cache[subset]

    for size in range(0, n + 1):
        for subset in itertools.combinations(range(n), size):
            if any(set(s) <= set(subset) for s in sufficient):
                continue
            if holds(subset):
                sufficient.append(subset)
    return sufficient


def frame_requirements(premises, conjecture: Formula, sig: Signature,
                       logics, b: Bounds | None = None,
                       relvar_domain: str = "full") -> dict:
    """Per-logic verdict: (True, None) when no bounded countermodel exists,
    else (False, countermodel)."""
    b = b or Bounds()
    out = {}
    for tag in logics:
        cm = find_countermodel(premises, conjecture, sig.with_logic(tag), b,
                               relvar_domain=relvar_domain)
        out[tag] = (cm is None, cm)
    return out
