import itertools
import random

import pytest

from finmodal.formulas import (
    INDIVIDUAL, PROPOSITION, REL1,
    Box, Const, Exemplify, Forall, Iff, Implies, Not, Var,
)
from finmodal.kripke import (
    EvalError, KripkeInterpretation, Validity, evaluate, frame_check,
    full_relspace, is_rigid_value, proposition_of, total_access, validity,
)
from finmodal.macros import expand_derived
from finmodal.parser import parse_formula
from finmodal.signature import LogicTag, Mode, Signature

from conftest import random_formula


SIG2 = Signature(Mode.CLASSICAL, LogicTag.K,
                 {"p": PROPOSITION, "q": PROPOSITION})
S5SIG = Signature(Mode.CLASSICAL, LogicTag.S5TOTAL,
                  {"p": PROPOSITION, "q": PROPOSITION})


def k_models(n_worlds, sig=SIG2):
    for bits in range(1 << (n_worlds * n_worlds)):
        R = frozenset((w, v) for w in range(n_worlds) for v in range(n_worlds)
                      if (bits >> (w * n_worlds + v)) & 1)
        for pv in range(1 << n_worlds):
            for qv in range(1 << n_worlds):
                yield KripkeInterpretation(sig, n_worlds, 1, R,
                                           {"p": pv, "q": qv})


def s5_models(max_worlds, sig=S5SIG):
    for n in range(1, max_worlds + 1):
        for pv in range(1 << n):
            for qv in range(1 << n):
                yield KripkeInterpretation(sig, n, 1, total_access(n),
                                           {"p": pv, "q": qv})


def test_one_world_box_is_identity():
    f = parse_formula("[]p <-> p", S5SIG)
    for pv in (0, 1):
        m = KripkeInterpretation(S5SIG, 1, 1, total_access(1),
                                 {"p": pv, "q": 0})
        assert evaluate(f, m, {}, 0)


def test_kdia_lemma_valid_on_all_small_s5_models():
    f = parse_formula("[](p -> q) -> (<>p -> <>q)", S5SIG)
    count = 0
    for m in s5_models(3):
        for w in range(m.n_worlds):
            assert evaluate(f, m, {}, w)
            count += 1
    assert count == (4 * 1) + (16 * 2) + (64 * 3)


def test_five_axiom_fails_on_some_two_world_k_model():
    # oracle: brute force over every 2-world frame and valuation
    f = parse_formula("<>p -> []<>p", SIG2)
    failures = [
        (m, w) for m in k_models(2)
        for w in range(2) if not evaluate(f, m, {}, w)
    ]
    assert failures
    m, w = failures[0]
    assert not frame_check(m, LogicTag.S5TOTAL)


def test_proposition_of_top_and_actually():
    top = parse_formula("p -> p", S5SIG)
    m = KripkeInterpretation(S5SIG, 2, 1, total_access(2), {"p": 0b10, "q": 0})
    assert proposition_of(top, m, {}) == (True, True)
    act = parse_formula("@p", S5SIG)
    assert proposition_of(act, m, {}) == (False, False)  # p false at w0


def test_box_vector_matches_definition_unfolding():
    rng = random.Random(5)
    f = Box(Exemplify(Const("p", PROPOSITION), ()))
    for _ in range(50):
        n = rng.randint(1, 3)
        R = frozenset((w, v) for w in range(n) for v in range(n)
                      if rng.random() < 0.5)
        pv = rng.randrange(1 << n)
        m = KripkeInterpretation(SIG2, n, 1, R, {"p": pv, "q": 0})
        vec = proposition_of(f, m, {})
        for w in range(n):
            want = all((pv >> v) & 1 for v in range(n) if (w, v) in R)
            assert vec[w] == want


def test_validity_modes():
    p = parse_formula("p", S5SIG)
    m = KripkeInterpretation(S5SIG, 2, 1, total_access(2), {"p": 0b01, "q": 0})
    assert validity(p, m, Validity.ACTUAL)
    assert not validity(p, m, Validity.NECESSARY)
    top = parse_formula("p -> p", S5SIG)
    assert validity(top, m, Validity.NECESSARY)


def test_necessary_implies_actual():
    rng = random.Random(9)
    for m in itertools.islice(k_models(2), 0, 200, 7):
        f = random_formula(rng, SIG2, 2, quantifiers=False)
        from finmodal.formulas import free_vars
        if free_vars(f):
            continue
        if validity(f, m, Validity.NECESSARY):
            assert validity(f, m, Validity.ACTUAL)


def test_open_formula_rejected():
    f = Exemplify(Const("S", REL1), (Var("x", INDIVIDUAL),))
    sig = Signature(Mode.CLASSICAL, LogicTag.K, {"S": REL1})
    m = KripkeInterpretation(sig, 1, 1, frozenset(), {"S": 0})
    with pytest.raises(EvalError):
        validity(f, m, Validity.ACTUAL)


def test_frame_check_examples():
    m_total = KripkeInterpretation(SIG2, 2, 1, total_access(2),
                                   {"p": 0, "q": 0})
    assert frame_check(m_total, LogicTag.S5TOTAL)
    assert frame_check(m_total, LogicTag.KB)
    m_one_way = KripkeInterpretation(SIG2, 2, 1, frozenset({(0, 1)}),
                                     {"p": 0, "q": 0})
    assert not frame_check(m_one_way, LogicTag.KB)
    assert frame_check(m_one_way, LogicTag.K)
    rng = random.Random(2)
    for _ in range(30):
        pairs = {(w, v) for w in range(3) for v in range(3)
                 if rng.random() < 0.4}
        sym = frozenset(pairs | {(v, w) for (w, v) in pairs})
        m = KripkeInterpretation(SIG2, 3, 1, sym, {"p": 0, "q": 0})
        assert frame_check(m, LogicTag.KB) == all(
            (v, w) in sym for (w, v) in sym)


def test_monotone_frame_hierarchy():
    # anything necessary on every 2-world K model stays so on KB and S5
    rng = random.Random(13)
    formulas = [random_formula(rng, SIG2, 2, quantifiers=False) for _ in range(40)]
    from finmodal.formulas import free_vars
    formulas = [f for f in formulas if not free_vars(f)]
    k_all = list(k_models(2))
    for f in formulas:
        if all(validity(f, m, Validity.NECESSARY) for m in k_all):
            for m in k_all:
                if frame_check(m, LogicTag.KB):
                    assert validity(f, m, Validity.NECESSARY)
            for m in s5_models(2):
                assert validity(f, m, Validity.NECESSARY)


def test_necessitation_semantically_sound():
    rng = random.Random(17)
    for m in itertools.islice(k_models(2), 0, 256, 5):
        f = random_formula(rng, SIG2, 2, quantifiers=False)
        from finmodal.formulas import free_vars
        if free_vars(f):
            continue
        if all(evaluate(f, m, {}, w) for w in range(m.n_worlds)):
            assert all(evaluate(Box(f), m, {}, w) for w in range(m.n_worlds))


def test_substitution_lemma_against_eval():
    # eval(f[x := t]) equals eval(f) with x assigned t's value
    sig = Signature(Mode.CLASSICAL, LogicTag.K,
                    {"S": REL1, "c": INDIVIDUAL, "p": PROPOSITION})
    rng = random.Random(23)
    x = Var("x", INDIVIDUAL)
    t = Const("c", INDIVIDUAL)
    from finmodal.formulas import substitute
    from finmodal.kripke import term_value
    for _ in range(60):
        n_w = rng.randint(1, 3)
        n_d = rng.randint(1, 2) if n_w < 3 else 1
        R = frozenset((w, v) for w in range(n_w) for v in range(n_w)
                      if rng.random() < 0.5)
        m = KripkeInterpretation(
            sig, n_w, n_d, R,
            {"S": rng.randrange(1 << (n_d * n_w)),
             "c": rng.randrange(n_d), "p": rng.randrange(1 << n_w)},
            relspace=full_relspace(n_d, n_w))
        f = random_formula(rng, sig, 2, scope=[x])
        g = substitute(f, x, t)
        for w in range(n_w):
            lhs = evaluate(g, m, {}, w)
            rhs = evaluate(f, m, {"x": term_value(t, m, {})}, w)
            assert lhs == rhs


def test_rigid_value_counts():
    # at two individuals over two worlds exactly 2^2 values are rigid
    rigid = [v for v in full_relspace(2, 2) if is_rigid_value(v, 2, 2)]
    assert len(rigid) == 4
