"""The ontological-argument corpus: premise sets for the four variants,
essence and rigidity machinery, ultrafilter analysis, and the per-variant
verification suite.

The unemended and emended premise sets share the entailment-closure and
necessity axioms; they differ in the polarity axiom (exclusive, biconditional,
or one direction only) and in which essence notion feeds necessary existence.
The rigid variant keeps the emended premises and restricts relation
quantifiers to world-constant properties, reading positivity extensionally.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .abstraction import Accepted, check_proof, make_layer
from .formulas import (
    INDIVIDUAL, PROPOSITION, REL1, SECOND_ORDER,
    Formula, MacroFormula, Var,
)
from .kripke import (
    KripkeInterpretation, evaluate, is_rigid_value,
)
from .macros import expand_derived
from .modelfind import (
    Bounds, SatResult, decide_sat, find_countermodel, frame_requirements,
    _run_search,
)
from .parser import parse_formula
from .printer import print_formula
from .proofs import goedel_refutation_script
from .reportfmt import relvalue_str, render_model
from .signature import LogicTag, Mode, Signature

VARIANT_NAMES = ("goedel", "scott", "anderson", "fitting")


class EssenceKind(enum.Enum):
    GOEDEL = "ess_g"
    SCOTT = "ess_s"
    ANDERSON_STAR = "ess_a"


@dataclass(frozen=True)
class PremiseSet:
    name: str
    sig: Signature
    premises: tuple  # ((label, Formula), ...)
    main_theorem: Formula
    collapse: Formula
    relvar_domain: str = "full"
    notes: tuple = ()

    def formulas(self) -> tuple:
        return tuple(f for _, f in self.premises)


def corpus_signature(logic: LogicTag) -> Signature:
    return Signature(Mode.CLASSICAL, logic,
                     {"P": SECOND_ORDER, "q": PROPOSITION})


_VARIANT_AXIOMS = {
    "goedel": (
        ("A1", "all Y ((P Y) xor (P (neg Y)))"),
        ("A2", "all Y (all Z (((P Y) & ent Y Z) -> P Z))"),
        ("A3", "P G"),
        ("A4", "all Y ((P Y) -> [](P Y))"),
        ("A5", "P NE_g"),
    ),
    "scott": (
        ("A1", "all Y ((P (neg Y)) <-> ~(P Y))"),
        ("A2", "all Y (all Z (((P Y) & ent Y Z) -> P Z))"),
        ("A3", "P G"),
        ("A4", "all Y ((P Y) -> [](P Y))"),
        ("A5", "P NE_s"),
    ),
    "anderson": (
        ("A1", "all Y ((P Y) -> ~(P (neg Y)))"),
        ("A2", "all Y (all Z (((P Y) & ent Y Z) -> P Z))"),
        ("A3", "P G*"),
        ("A4", "all Y ((P Y) -> [](P Y))"),
        ("A5", "P NE_a"),
    ),
}
_VARIANT_AXIOMS["fitting"] = _VARIANT_AXIOMS["scott"]

_VARIANT_LOGIC = {
    "goedel": LogicTag.K,
    "scott": LogicTag.S5TOTAL,
    "anderson": LogicTag.S5TOTAL,
    "fitting": LogicTag.S5TOTAL,
}

_VARIANT_MAIN = {
    "goedel": "[] exists x (G x)",
    "scott": "[] exists x (G x)",
    "anderson": "[] exists x (G* x)",
    "fitting": "[] exists x (G x)",
}


def variant(name: str) -> PremiseSet:
    if name not in VARIANT_NAMES:
        raise ValueError(f"unknown variant {name!r}")
    sig = corpus_signature(_VARIANT_LOGIC[name])
    premises = tuple(
        (label, parse_formula(text, sig))
        for label, text in _VARIANT_AXIOMS[name])
    main = parse_formula(_VARIANT_MAIN[name], sig)
    collapse = parse_formula("q -> []q", sig)
    notes = ()
    relvar = "full"
    if name == "fitting":
        relvar = "rigid"
        notes = ("composition: the emended premises with relation quantifiers "
                 "restricted to rigid properties and positivity read on "
                 "rigidified extensions",)
    return PremiseSet(name, sig, premises, main, collapse, relvar, notes)


# ---------------------------------------------------------------------------
# Essence and rigidity

def essence_holds(kind: EssenceKind, rel_value: int, individual: int,
                  m: KripkeInterpretation, w: int) -> bool:
    y = Var("Y", REL1)
    x = Var("x", INDIVIDUAL)
    f = expand_derived(MacroFormula(kind.value, (y, x)))
    return evaluate(f, m, {"Y": rel_value, "x": individual}, w)


def is_rigid(rel_value: int, m: KripkeInterpretation) -> bool:
    return is_rigid_value(rel_value, m.n_individuals, m.n_worlds)


# ---------------------------------------------------------------------------
# Ultrafilter analysis

@dataclass(frozen=True)
class UltrafilterReport:
    selector: str           # 'P' | 'Pprime'
    carrier: str
    family: tuple           # sorted lattice elements in the family
    lattice: tuple          # the carrier lattice elements
    proper: bool
    upward_closed: bool
    meet_closed: bool
    maximal: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def is_ultrafilter(self) -> bool:
        return self.proper and self.upward_closed and self.meet_closed and self.maximal


def _check_family(selector: str, carrier: str, family, lattice, top) -> UltrafilterReport:
    fam = set(family)
    lat = list(lattice)
    proper = 0 not in fam
    upward, meet, maximal = True, True, True
    witnesses = {}
    for a in sorted(fam):
        for b in lat:
            if (a & ~b & top) == 0 and b not in fam:
                upward = False
                witnesses.setdefault("upward", (a, b))
        for b in sorted(fam):
            if (a & b) not in fam:
                meet = False
                witnesses.setdefault("meet", (a, b))
    for b in lat:
        if b not in fam and (top ^ b) not in fam:
            maximal = False
            witnesses.setdefault("maximal", b)
    if not proper:
        witnesses.setdefault("proper", 0)
    return UltrafilterReport(selector, carrier, tuple(sorted(fam)),
                             tuple(sorted(lat)), proper, upward, meet,
                             maximal, witnesses)


def _rigidify(value: int, m: KripkeInterpretation) -> int:
    """The rigid property with the value's extension at the actual world."""
    out = 0
    wmask = (1 << m.n_worlds) - 1
    for d in range(m.n_individuals):
        if (value >> (d * m.n_worlds + m.actual)) & 1:
            out |= wmask << (d * m.n_worlds)
    return out


def ultrafilter_report(m: KripkeInterpretation, selector: str) -> UltrafilterReport:
    """Positivity as a family: 'P' on the full intensional lattice at the
    actual world, 'Pprime' as the rigidified extensions of the positive
    properties on the rigid lattice."""
    table = m.denot.get("P")
    if table is None:
        raise ValueError("the model does not interpret the positivity constant")
    positives = [v for v in m.relspace if (table.get(v, 0) >> m.actual) & 1]
    top = (1 << (m.n_individuals * m.n_worlds)) - 1
    if selector == "P":
        return _check_family("P", "intensional properties", positives,
                             m.relspace, top)
    if selector == "Pprime":
        if m.relvar_domain == "rigid":
            positives = [v for v in positives if is_rigid(v, m)]
        family = {_rigidify(v, m) for v in positives}
        lattice = [v for v in m.relspace if is_rigid(v, m)]
        return _check_family("Pprime", "rigid properties", family, lattice, top)
    raise ValueError(f"unknown selector {selector!r}")


# ---------------------------------------------------------------------------
# The per-variant suite

@dataclass
class VariantReport:
    name: str
    bounds: Bounds
    sat: SatResult
    frame_verdicts: dict            # LogicTag -> (holds, countermodel|None)
    collapse_countermodel: object   # model | None
    ultrafilters: dict              # selector -> UltrafilterReport
    analysis_model: object          # model the ultrafilters were computed on
    world_constant_models: object = None   # (checked_count, all_world_constant)
    refutation: object = None       # Accepted/Rejected for the unemended set
    vagueness_witness: object = None
    godlike_extension_ok: object = None
    notes: tuple = ()

    def to_text(self) -> str:
        out = [f"variant: {self.name}"]
        for n in self.notes:
            out.append(f"note: {n}")
        out.append(f"bounds: worlds<={self.bounds.max_worlds} "
                   f"individuals<={self.bounds.max_individuals}")
        if self.sat.is_sat:
            out.append(f"consistency: satisfiable "
                       f"(first model after {self.sat.examined} candidates)")
            out.append(render_model(self.sat.model, "  "))
        else:
            out.append(f"consistency: no model up to bounds "
                       f"({self.sat.examined} interpretations examined)")
        vacuous = " (vacuously: no premise models)" if not self.sat.is_sat else ""
        for tag in (LogicTag.K, LogicTag.KB, LogicTag.S5TOTAL):
            if tag in self.frame_verdicts:
                holds, cm = self.frame_verdicts[tag]
                verdict = ("holds" + vacuous) if holds else "countermodel"
                out.append(f"main theorem under {tag.value}: {verdict}")
        if self.collapse_countermodel is None:
            out.append("modal collapse: holds at bounds (no countermodel for "
                       "q -> []q)")
        else:
            m = self.collapse_countermodel
            out.append(f"modal collapse: countermodel with {m.n_worlds} worlds")
            out.append(render_model(m, "  "))
        if self.world_constant_models is not None:
            n, ok = self.world_constant_models
            out.append(f"world-indistinguishable models: {n} checked, "
                       f"{'all world-constant' if ok else 'NOT all world-constant'}")
        if self.analysis_model is not None:
            out.append("positivity analysis (at the actual world of the model "
                       "shown for the collapse status):")
            for sel in sorted(self.ultrafilters):
                r = self.ultrafilters[sel]
                out.append(f"  {sel} on {r.carrier}: "
                           f"proper={_yn(r.proper)} upward={_yn(r.upward_closed)} "
                           f"meet={_yn(r.meet_closed)} maximal={_yn(r.maximal)} "
                           f"ultrafilter={_yn(r.is_ultrafilter)}")
                fam = ", ".join(
                    relvalue_str(v, self.analysis_model.n_individuals,
                                 self.analysis_model.n_worlds)
                    for v in r.family)
                out.append(f"    family: [{fam}]")
        if self.refutation is not None:
            if isinstance(self.refutation, Accepted):
                out.append("refutation script: accepted, conclusion "
                           + print_formula(self.refutation.conclusion))
            else:
                out.append(f"refutation script: rejected ({self.refutation})")
        if self.vagueness_witness is not None:
            m = self.vagueness_witness
            out.append("distinct godlike witnesses: model with a listed "
                       "2-element relation space")
            out.append(render_model(m, "  "))
        if self.godlike_extension_ok is not None:
            out.append("godlike extension matches the intersection of the "
                       f"positive rigid properties: {_yn(self.godlike_extension_ok)}")
        return "\n".join(out) + "\n"


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _all_world_constant(m: KripkeInterpretation) -> bool:
    full = (1 << m.n_worlds) - 1
    for name, value in m.denot.items():
        sort = m.sig.consts[name]
        if sort.kind == "so" or (sort.kind == "rel" and sort.arity >= 2):
            if any(v not in (0, full) for v in value.values()):
                return False
        elif sort.kind == "rel" and sort.arity == 1:
            if not is_rigid_value(value, m.n_individuals, m.n_worlds):
                return False
        elif sort.kind == "rel":
            if value not in (0, full):
                return False
    return True


def _satisfying_models(ps: PremiseSet, b: Bounds, limit: int = 100000) -> list:
    """Every premise model within bounds, canonical order."""
    found = []

    def leaf_ok(m):
        from .modelfind import _freeze
        found.append(_freeze(m))
        return False  # keep searching

    _run_search(ps.formulas(), ps.sig, b, leaf_ok,
                relvar_domain=ps.relvar_domain)
    if len(found) > limit:
        raise RuntimeError("too many models to audit")
    return found


def find_vagueness_witness(b: Bounds | None = None):
    """A bounded model of the one-directional variant with two distinct
    godlike individuals, searched over a listed two-element relation space
    (the full space separates any two individuals by a rigid property)."""
    from .formulas import beta_normalize
    from .kripke import total_access
    from .modelfind import _search_node

    b = b or Bounds(max_worlds=2, max_individuals=2)
    ps = variant("anderson")
    gx = expand_derived(parse_formula("G* x", ps.sig))

    def leaf_ok(m):
        godlike = [d for d in range(m.n_individuals)
                   if evaluate(gx, m, {"x": d}, m.actual)]
        return len(godlike) >= 2

    premises_n = [beta_normalize(expand_derived(f)) for f in ps.formulas()]
    for n_w in range(1, b.max_worlds + 1):
        full = (1 << (2 * n_w)) - 1
        node = (n_w, 2, total_access(n_w), (0, full))
        found, _, _ = _search_node(node, ps.sig, b, premises_n, leaf_ok, True)
        if found is not None:
            return found
    return None


def run_variant_suite(name: str, bounds: Bounds | None = None,
                      workers: int = 1) -> VariantReport:
    b = bounds or Bounds(max_worlds=2, max_individuals=2)
    ps = variant(name)
    premises = ps.formulas()
    sat = decide_sat(premises, ps.sig, b, workers, ps.relvar_domain)
    frame_verdicts = frame_requirements(
        premises, ps.main_theorem, ps.sig,
        (LogicTag.K, LogicTag.KB, LogicTag.S5TOTAL), b, ps.relvar_domain)
    collapse_cm = find_countermodel(premises, ps.collapse, ps.sig, b, workers,
                                    ps.relvar_domain)
    analysis_model = collapse_cm if collapse_cm is not None else sat.model
    ultrafilters = {}
    if analysis_model is not None:
        if name != "fitting":
            ultrafilters["P"] = ultrafilter_report(analysis_model, "P")
        ultrafilters["Pprime"] = ultrafilter_report(analysis_model, "Pprime")

    report = VariantReport(name, b, sat, frame_verdicts, collapse_cm,
                           ultrafilters, analysis_model, notes=ps.notes)
    if name == "scott":
        models = _satisfying_models(ps, b)
        report.world_constant_models = (
            len(models), all(_all_world_constant(m) for m in models))
    if name == "goedel":
        script = goedel_refutation_script(premises)
        report.refutation = check_proof(script, make_layer("K"), premises)
    if name == "anderson":
        report.vagueness_witness = find_vagueness_witness()
    if name == "fitting" and analysis_model is not None:
        report.godlike_extension_ok = _godlike_extension_matches(
            analysis_model, ps)
    return report


def _godlike_extension_matches(m: KripkeInterpretation, ps: PremiseSet) -> bool:
    """The godlike extension equals the set of individuals in every member
    of the rigidified positivity family."""
    gx = expand_derived(parse_formula("G x", ps.sig))
    pprime = ultrafilter_report(m, "Pprime").family
    for d in range(m.n_individuals):
        in_all = all((s >> (d * m.n_worlds + m.actual)) & 1 for s in pprime)
        if evaluate(gx, m, {"x": d}, m.actual) != in_all:
            return False
    return True
