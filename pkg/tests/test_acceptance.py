"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as the
criteria finish. Stated time limits are asserted, not just observed.
"""

import random
import time

import pytest

from finmodal.abstraction import Accepted, check_proof, make_layer, validate_layer
from finmodal.aot import (
    Denotes, NonDenoting, denote, eval_aot, exists_term, minimal_model,
    minimal_model_report, world_theory_report,
)
from finmodal.formulas import (
    INDIVIDUAL, PROPOSITION, REL1, alpha_equivalent, beta_normalize,
)
from finmodal.kripke import is_rigid_value
from finmodal.macros import expand_derived
from finmodal.modelfind import Bounds, decide_sat, find_countermodel
from finmodal.ontoarg import run_variant_suite, variant
from finmodal.parser import parse_formula
from finmodal.problemfile import load_problem, load_proof
from finmodal.signature import LogicTag
from finmodal.translate import exhaustive_agreement, export_first_order

B22 = Bounds(max_worlds=2, max_individuals=2)


def report(n, text):
    print(f"PASS criterion {n}: {text}")


def test_01_s5_layer_soundness():
    t0 = time.time()
    rep = validate_layer(make_layer("S5"), max_worlds=3, atoms=("p", "q"),
                         generator_depth=3)
    elapsed = time.time() - t0
    assert rep.ok, rep.to_text()
    assert rep.n_models == 84
    assert elapsed < 10.0, f"took {elapsed:.1f}s"
    report(1, f"S5 layer sound over {rep.n_models} models, "
              f"zero counterexamples, {elapsed:.2f}s")


def test_02_kdia_derivation():
    problem = load_problem("problems/s5.problem")
    layer_name, script = load_proof("proofs/kdia.proof", problem.sig)
    verdict = check_proof(script, make_layer(layer_name),
                          tuple(problem.premises))
    assert isinstance(verdict, Accepted)
    want = beta_normalize(expand_derived(problem.conjectures[0]))
    assert alpha_equivalent(verdict.conclusion, want)
    cm = find_countermodel(problem.premises, problem.conjectures[0],
                           problem.sig, problem.bounds)
    assert cm is None
    report(2, f"distribution lemma derived in {len(script.steps)} steps, "
              "no semantic countermodel at bounds")


def test_03_standard_translation_equivalence():
    t0 = time.time()
    rep = exhaustive_agreement(max_depth=3, max_worlds=3, atoms=("p", "q"))
    elapsed = time.time() - t0
    assert rep.ok, rep.mismatches[:3]
    assert rep.n_formulas == 33672
    assert rep.n_models == 8 + 256 + 32768
    assert elapsed < 60.0, f"took {elapsed:.1f}s"
    report(3, f"evaluation matches the translation on {rep.n_pairs} "
              f"formula/model pairs, {elapsed:.1f}s")


def test_04_first_order_export_golden():
    sig = load_problem("problems/s5.problem").sig
    out = export_first_order(parse_formula("[]p -> p", sig))
    golden = ("all x (Proposition(x) -> "
              "(all y (Point(y) -> True(x,y)) -> True(x,W)))")
    assert out == golden
    report(4, "reflexivity schema export is byte-identical to the target")


def test_05_unemended_set_inconsistent():
    t0 = time.time()
    problem = load_problem("problems/goedel.problem")
    result = decide_sat(problem.premises, problem.sig, B22)
    assert not result.is_sat
    layer_name, script = load_proof("proofs/goedel_refutation.proof",
                                    problem.sig)
    assert layer_name == "K"
    verdict = check_proof(script, make_layer("K"), tuple(problem.premises))
    assert isinstance(verdict, Accepted)
    want = beta_normalize(expand_derived(parse_formula("~(q -> q)",
                                                       problem.sig)))
    assert alpha_equivalent(verdict.conclusion, want)
    elapsed = time.time() - t0
    assert elapsed < 300.0, f"took {elapsed:.1f}s"
    report(5, f"no model up to (2,2); refutation script of "
              f"{len(script.steps)} steps accepted in logic K, {elapsed:.1f}s")


def test_06_emended_set_consistent_and_collapsed():
    rep = run_variant_suite("scott", B22)
    assert rep.sat.is_sat
    assert rep.collapse_countermodel is None
    checked, all_const = rep.world_constant_models
    assert all_const and checked >= 1
    assert rep.frame_verdicts[LogicTag.KB][0]
    assert rep.frame_verdicts[LogicTag.S5TOTAL][0]
    report(6, f"emended set satisfiable, collapse forced, {checked} models "
              "all world-constant, main theorem holds under KB and S5")


def test_07_collapse_free_emendations():
    for name in ("anderson", "fitting"):
        rep = run_variant_suite(name, B22)
        cm = rep.collapse_countermodel
        assert cm is not None
        assert cm.n_worlds >= 2
        # the worlds are genuinely distinguishable: q differs
        q = cm.denot["q"]
        assert q not in (0, (1 << cm.n_worlds) - 1)
    report(7, "one-directional and rigid variants both admit two-world "
              "collapse countermodels with distinguishable worlds")


def test_08_ultrafilter_trichotomy():
    scott = run_variant_suite("scott", B22)
    assert scott.ultrafilters["P"].is_ultrafilter
    assert scott.ultrafilters["Pprime"].is_ultrafilter
    assert set(scott.ultrafilters["P"].family) == \
        set(scott.ultrafilters["Pprime"].family)

    anderson = run_variant_suite("anderson", B22)
    assert not anderson.ultrafilters["P"].is_ultrafilter
    assert not anderson.ultrafilters["P"].maximal
    assert anderson.ultrafilters["Pprime"].is_ultrafilter

    fitting = run_variant_suite("fitting", B22)
    assert "P" not in fitting.ultrafilters
    assert fitting.ultrafilters["Pprime"].is_ultrafilter
    report(8, "positivity families: emended set coincide and both pass; "
              "one-directional set passes only rigidified; rigid set "
              "passes rigidified (intensional not defined)")


def test_09_minimal_model_census():
    t0 = time.time()
    rep = minimal_model_report(minimal_model())
    elapsed = time.time() - t0
    assert (rep.n_worlds, rep.n_propositions, rep.n_relations) == (2, 4, 16)
    assert len(rep.witnesses) == 16
    assert len({v for _, v in rep.witnesses}) == 16
    assert len(rep.pair_witnesses) == 120
    assert all(w is not None for w in rep.pair_witnesses.values())
    assert rep.historical_distinct
    assert isinstance(rep.transcript_verdict, Accepted)
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    report(9, f"census 2 worlds / 4 propositions / 16 relations with "
              f"120/120 witnesses, historical six distinct, {elapsed:.2f}s")


def test_10_free_logic():
    from test_aot import _random_term
    m = minimal_model()
    sig = m.sig
    paradox = parse_formula("exists F (x[F] & ~ F x)", sig)
    from finmodal.formulas import Lambda, Var
    lam = Lambda((Var("x", INDIVIDUAL),), paradox)
    assert isinstance(denote(lam, m), NonDenoting)

    rng = random.Random(2026)
    checked = 0
    for _ in range(1000):
        t = _random_term(rng, m)
        d = denote(t, m)
        exists = exists_term(t, m)
        assert exists == isinstance(d, Denotes)
        # existence coincides with being the value of some variable
        from finmodal.formulas import MacroFormula, sort_of
        beta_var = Var("B" if sort_of(t).kind == "rel" else "b", sort_of(t))
        from finmodal.formulas import Exists as Ex
        eq = Ex(beta_var, MacroFormula("id", (beta_var, t)))
        assert eval_aot(eq, m) == exists
        checked += 1
    assert checked == 1000
    report(10, "paradoxical matrix non-denoting; existence, denotation, and "
               "the defined-identity witness agree on 1000 generated terms")


def test_11_world_theory():
    rep = world_theory_report(minimal_model())
    assert len(rep.syntactic_worlds) == 2
    assert rep.semantic_worlds == 2
    assert rep.bijective
    assert rep.fundamental_theorem_ok
    assert rep.checked_propositions == 4
    assert rep.encoding_propositions_constant
    report(11, "two syntactic worlds in bijection with the two semantic "
               "worlds; necessity matches truth at every world for all four "
               "propositions, encoding-generated ones included")


def test_12_determinism_across_workers():
    texts = {}
    for workers in (1, 4):
        parts = [run_variant_suite(name, B22, workers=workers).to_text()
                 for name in ("goedel", "scott", "anderson", "fitting")]
        sig = load_problem("problems/goedel.problem").sig
        problem = load_problem("problems/goedel.problem")
        sat = decide_sat(problem.premises, problem.sig, B22, workers=workers)
        parts.append(f"examined={sat.examined} sat={sat.is_sat}")
        texts[workers] = "\n".join(parts)
    assert texts[1] == texts[4]
    report(12, "all variant reports and search outcomes byte-identical "
               "between one and four workers")
