import pytest

from finmodal.formulas import (
    INDIVIDUAL, PROPOSITION, REL1, SECOND_ORDER,
    Box, Const, Encode, Exemplify, Exists, Forall, Implies, MacroTerm, Not,
    Var, alpha_equivalent,
)
from finmodal.parser import ParseError, lex, parse_formula, parse_term
from finmodal.printer import print_formula
from finmodal.signature import LogicTag, Mode, ModeViolation, Signature


@pytest.fixture
def sig():
    return Signature(Mode.CLASSICAL, LogicTag.K,
                     {"p": PROPOSITION, "q": PROPOSITION, "P": SECOND_ORDER})


@pytest.fixture
def asig():
    return Signature(Mode.AOT, LogicTag.S5TOTAL, {"q": PROPOSITION})


def test_box_implication(sig):
    f = parse_formula("[]p -> p", sig)
    p = Exemplify(Const("p", PROPOSITION), ())
    assert f == Implies(Box(p), p)


def test_aot_axiom_with_tight_tokens(asig):
    # bang-suffixed names bind the bang: O!x lexes as O! then x
    f = parse_formula("O!x -> [] ~ exists F (x[F])", asig)
    assert isinstance(f, Implies)
    assert isinstance(f.left, Exemplify)
    assert f.left.rel == MacroTerm("O!")
    inner = f.right.body.body  # under box, under not
    assert isinstance(inner, Exists)
    assert isinstance(inner.body, Encode)


def test_encoding_in_classical_mode_rejected(sig):
    with pytest.raises(ModeViolation):
        parse_formula("x[F]", sig)


def test_lex_error_carries_position(sig):
    with pytest.raises(ParseError) as e:
        parse_formula("p -> $", sig)
    assert "position 5" in str(e.value)


def test_sort_error_names_symbol(sig):
    with pytest.raises(Exception) as e:
        parse_formula("p p", sig)  # a proposition applied to an argument
    assert "p" in str(e.value) or "arity" in str(e.value)


def test_star_names(sig):
    t = parse_term("G*", sig)
    assert t == MacroTerm("G*")


def test_second_order_application(sig):
    f = parse_formula("P (neg Y)", sig)
    from finmodal.formulas import SOAtom
    assert isinstance(f, SOAtom)
    assert f.arg == MacroTerm("neg", (Var("Y", REL1),))


def test_binder_annotations(sig):
    f = parse_formula("all v:prop (v -> v)", sig)
    assert f.var.sort == PROPOSITION
    g = parse_formula(print_formula(f), sig)
    assert alpha_equivalent(f, g)


def test_print_box(sig):
    assert print_formula(parse_formula("[] p", sig)) == "[]p"


def test_trailing_input_rejected(sig):
    with pytest.raises(ParseError):
        parse_formula("p q extra", sig)


def test_description_parses_in_aot_only(sig, asig):
    text = "exists F (F (the x: x[F]))"
    parse_formula(text, asig)
    with pytest.raises(ModeViolation):
        parse_formula("exists F (F (the x: q))", sig)
