import itertools

import pytest

from finmodal.formulas import INDIVIDUAL, PROPOSITION, REL1, alpha_equivalent
from finmodal.kripke import evaluate, frame_check
from finmodal.modelfind import (
    Bounds, SearchBoundsError, count_models, decide_sat, enumerate_models,
    find_countermodel, frame_requirements, minimize_premises,
)
from finmodal.parser import parse_formula
from finmodal.signature import LogicTag, Mode, Signature


def sig_of(consts, logic=LogicTag.S5TOTAL):
    return Signature(Mode.CLASSICAL, logic, consts)


class TestEnumerate:
    def test_single_bit_unary_constant(self):
        sig = sig_of({"S": REL1})
        models = list(enumerate_models(sig, Bounds(1, 1)))
        assert len(models) == 2  # one (d, w) bit
        assert count_models(sig, Bounds(1, 1)) == 2

    def test_two_world_proposition_count(self):
        sig = sig_of({"p": PROPOSITION})
        b = Bounds(max_worlds=2, max_individuals=1)
        models = [m for m in enumerate_models(sig, b) if m.n_worlds == 2]
        assert len(models) == 4  # 2^2 valuations, one total frame

    def test_counts_match_closed_form(self):
        for consts, logic in [
            ({"p": PROPOSITION}, LogicTag.K),
            ({"p": PROPOSITION, "S": REL1}, LogicTag.KB),
            ({"c": INDIVIDUAL}, LogicTag.S5TOTAL),
        ]:
            sig = sig_of(consts, logic)
            b = Bounds(max_worlds=2, max_individuals=2)
            assert len(list(enumerate_models(sig, b))) == count_models(sig, b)

    def test_stream_restart_is_identical(self):
        sig = sig_of({"p": PROPOSITION}, LogicTag.K)
        b = Bounds(max_worlds=2, max_individuals=1)
        first = [(m.n_worlds, sorted(m.access), m.denot["p"])
                 for m in enumerate_models(sig, b)]
        second = [(m.n_worlds, sorted(m.access), m.denot["p"])
                  for m in enumerate_models(sig, b)]
        assert first == second

    def test_cap_exceeded(self):
        sig = sig_of({"P": __import__("finmodal.formulas",
                                      fromlist=["SECOND_ORDER"]).SECOND_ORDER})
        with pytest.raises(SearchBoundsError):
            count_models(sig, Bounds(max_worlds=3, max_individuals=2))


class TestDecideSat:
    def test_contradiction_unsat(self):
        sig = sig_of({"p": PROPOSITION})
        premises = [parse_formula("p", sig), parse_formula("~p", sig)]
        result = decide_sat(premises, sig, Bounds(2, 1))
        assert not result.is_sat
        assert result.examined == 0  # pruned before any complete model

    def test_first_model_is_canonical(self):
        sig = sig_of({"p": PROPOSITION})
        result = decide_sat([parse_formula("<>p & <>~p", sig)], sig,
                            Bounds(2, 1))
        assert result.is_sat
        assert result.model.n_worlds == 2
        assert result.model.denot["p"] == 0b01  # smallest world mask that fits

    def test_worker_counts_agree(self):
        sig = sig_of({"p": PROPOSITION, "q": PROPOSITION}, LogicTag.K)
        premises = [parse_formula("[](p -> q)", sig),
                    parse_formula("<>p", sig)]
        r1 = decide_sat(premises, sig, Bounds(3, 1), workers=1)
        r4 = decide_sat(premises, sig, Bounds(3, 1), workers=4)
        assert r1.is_sat == r4.is_sat
        assert r1.examined == r4.examined
        assert r1.model.access == r4.model.access
        assert r1.model.denot == r4.model.denot


class TestCountermodels:
    def test_p_implies_box_p(self):
        sig = sig_of({"p": PROPOSITION})
        cm = find_countermodel([], parse_formula("p -> []p", sig), sig,
                               Bounds(2, 1))
        assert cm is not None
        assert cm.n_worlds == 2
        assert not evaluate(parse_formula("p -> []p", sig), cm, {}, 0) \
            or not evaluate(parse_formula("p -> []p", sig), cm, {}, 1)

    def test_no_countermodel_for_tautology(self):
        sig = sig_of({"p": PROPOSITION})
        cm = find_countermodel([], parse_formula("p -> p", sig), sig,
                               Bounds(2, 1))
        assert cm is None


class TestMinimize:
    def test_three_premise_example(self):
        sig = sig_of({"p": PROPOSITION, "q": PROPOSITION, "r": PROPOSITION})
        premises = [parse_formula(s, sig) for s in ("p", "q", "p -> r")]
        conjecture = parse_formula("r", sig)
        minimal = minimize_premises(premises, conjecture, sig, Bounds(2, 1))
        assert minimal == [(0, 2)]

    def test_duplicate_premises_collapse(self):
        sig = sig_of({"p": PROPOSITION})
        premises = [parse_formula("p", sig), parse_formula("p", sig)]
        minimal = minimize_premises(premises, parse_formula("p", sig), sig,
                                    Bounds(2, 1))
        assert minimal == [(0,), (1,)]  # each alone suffices, never both

    def test_single_premise_sufficiency_matches_brute_force(self):
        # a three-premise set where one premise alone carries the conclusion
        sig = sig_of({"p": PROPOSITION, "q": PROPOSITION})
        premises = [parse_formula(s, sig)
                    for s in ("[](p & q)", "q -> p", "<>q")]
        conjecture = parse_formula("[]p", sig)
        b = Bounds(2, 1)
        minimal = minimize_premises(premises, conjecture, sig, b)

        # oracle: try all seven non-empty subsets directly
        sufficient = []
        for size in (0, 1, 2, 3):
            for subset in itertools.combinations(range(3), size):
                if find_countermodel([premises[i] for i in subset],
                                     conjecture, sig, b) is None:
                    sufficient.append(subset)
        expected = [s for s in sufficient
                    if not any(set(t) < set(s) for t in sufficient)]
        assert minimal == expected
        assert (0,) in minimal

    def test_failing_conjecture_rejected(self):
        sig = sig_of({"p": PROPOSITION, "q": PROPOSITION})
        with pytest.raises(ValueError):
            minimize_premises([parse_formula("p", sig)],
                              parse_formula("q", sig), sig, Bounds(2, 1))


class TestFrameRequirements:
    def test_five_axiom_over_the_three_logics(self):
        sig = sig_of({"p": PROPOSITION}, LogicTag.K)
        conjecture = parse_formula("<>p -> []<>p", sig)
        verdicts = frame_requirements(
            [], conjecture, sig, (LogicTag.K, LogicTag.KB, LogicTag.S5TOTAL),
            Bounds(2, 1))
        assert verdicts[LogicTag.K][0] is False
        assert verdicts[LogicTag.KB][0] is False
        assert verdicts[LogicTag.S5TOTAL][0] is True

    def test_tautology_holds_everywhere(self):
        sig = sig_of({"p": PROPOSITION}, LogicTag.K)
        verdicts = frame_requirements(
            [], parse_formula("p -> p", sig), sig,
            (LogicTag.K, LogicTag.KB, LogicTag.S5TOTAL), Bounds(2, 1))
        assert all(v[0] for v in verdicts.values())

    def test_kb_countermodels_have_symmetric_frames(self):
        sig = sig_of({"p": PROPOSITION}, LogicTag.KB)
        cm = find_countermodel([], parse_formula("p -> []p", sig), sig,
                               Bounds(2, 1))
        assert cm is not None
        assert frame_check(cm, LogicTag.KB)


class TestPrunedSearchAgainstPlainEnumeration:
    """The pruned searcher and the unpruned canonical enumerator must agree
    wherever the unpruned space is small enough to walk directly."""

    def _agree(self, premises, sig, bounds):
        from finmodal.kripke import Validity, validity
        pruned = decide_sat(premises, sig, bounds)
        plain = [m for m in enumerate_models(sig, bounds)
                 if all(validity(p, m, Validity.NECESSARY) for p in premises)]
        assert pruned.is_sat == bool(plain)
        if plain:
            first = plain[0]
            assert pruned.model.n_worlds == first.n_worlds
            assert pruned.model.access == first.access
            assert pruned.model.denot == first.denot
        return len(plain)

    def test_unemended_corpus_premises_at_one_individual(self):
        from finmodal.ontoarg import variant
        ps = variant("goedel")
        n = self._agree(ps.formulas(), ps.sig,
                        Bounds(max_worlds=2, max_individuals=1))
        assert n == 0

    def test_emended_corpus_premises_at_one_individual(self):
        from finmodal.ontoarg import variant
        ps = variant("scott")
        n = self._agree(ps.formulas(), ps.sig,
                        Bounds(max_worlds=2, max_individuals=1))
        assert n > 0

    def test_modal_premises_over_arbitrary_frames(self):
        sig = sig_of({"p": PROPOSITION, "q": PROPOSITION}, LogicTag.K)
        premises = [parse_formula("[](p -> q) & <>p & ~q", sig)]
        self._agree(premises, sig, Bounds(max_worlds=2, max_individuals=1))


class TestExhaustivenessProperty:
    def test_enumeration_count_matches_closed_form(self):
        from hypothesis import given, settings, strategies as st

        sorts = {"prop": PROPOSITION, "rel": REL1, "ind": INDIVIDUAL}

        @settings(max_examples=40, deadline=None)
        @given(
            st.lists(st.sampled_from(sorted(sorts)), min_size=1, max_size=2),
            st.sampled_from([LogicTag.K, LogicTag.KB, LogicTag.S5TOTAL]),
            st.integers(1, 2), st.integers(1, 2),
        )
        def check(kinds, logic, max_w, max_d):
            consts = {f"c{i}_{k}": sorts[k] for i, k in enumerate(kinds)}
            sig = sig_of(consts, logic)
            b = Bounds(max_worlds=max_w, max_individuals=max_d)
            assert sum(1 for _ in enumerate_models(sig, b)) == \
                count_models(sig, b)

        check()
