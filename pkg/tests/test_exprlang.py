"""Parsing, evaluation, kinds, diagnostics, and rendering."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimcalc import (
    INF,
    Cyclic,
    DecoratedNumber,
    Decoration,
    DimensionType,
    DirectSum,
    EvaluationError,
    Free,
    LocalizedIntegers,
    PadicCircle,
    ParseError,
    Presented,
    Rationals,
    TypeMismatchError,
    ValidityError,
    boltyanskii_type,
    bockstein_basis,
    constant,
    evaluate_expr,
    free_parameters,
    kind_of,
    parse,
    render,
)
from support import dimension_types

MINUS, PLUS = Decoration.MINUS, Decoration.PLUS


def ev(text, **bindings):
    return evaluate_expr(parse(text), bindings or None)


class TestTypeLiterals:
    def test_basic(self):
        assert ev("DT{q=2; *=3-}") == DimensionType(2, DecoratedNumber(3, MINUS))
        assert ev("{q=2; *=3-}") == DimensionType(2, DecoratedNumber(3, MINUS))
        assert ev("DT{q=0; *=0}") == constant(0)

    def test_exceptions(self):
        d = ev("DT{q=2; *=3-; 5=1+; 2=2}")
        assert d == DimensionType(
            2, DecoratedNumber(3, MINUS),
            {5: DecoratedNumber(1, PLUS), 2: DecoratedNumber(2)})

    def test_infinite_entries(self):
        assert ev("DT{q=inf; *=inf}") == constant(INF)
        d = ev("DT{q=1; *=1; 3=inf+}")
        assert d.entry(3) == DecoratedNumber(INF, PLUS)

    def test_parameterized(self):
        expr = parse("DT{q=n-4; *=(n-5)+}")
        assert free_parameters(expr) == {"n"}
        assert evaluate_expr(expr, {"n": 6}) == DimensionType(2, DecoratedNumber(1, PLUS))

    def test_invalid_regular_entry(self):
        with pytest.raises(ValidityError, match=r"\(line 1, column 1\)"):
            parse("DT{q=2; *=5}")

    def test_invalid_zero_minus(self):
        with pytest.raises(ValidityError, match=r"0- is not a representable"):
            parse("{q=0; *=0-}")

    def test_duplicate_prime(self):
        with pytest.raises(ParseError, match=r"duplicate entry for prime 5"):
            parse("DT{q=1; *=1; 5=2+; 5=3+}")

    def test_composite_key(self):
        with pytest.raises(ValidityError, match=r"prime.*\(line 1, column 14\)"):
            parse("DT{q=1; *=1; 4=2+}")

    def test_parameterized_literal_fails_at_evaluation(self):
        expr = parse("DT{q=n; *=5}")
        with pytest.raises(ValidityError):
            evaluate_expr(expr, {"n": 2})
        assert evaluate_expr(expr, {"n": 5}) == constant(5)


class TestPrecedenceAndOperators:
    def test_headline_expressions(self):
        assert ev("dim(B(4) boxplus B(4))") == 7
        assert ev("(DT{q=2;*=3-} oplus DT{q=2;*=1+}) + 1 == B(6)") is True
        assert ev("C(2) boxplus C(3)") == constant(5)
        assert ev("sigma(Z^1)") == bockstein_basis(Free(1))

    def test_shift_binds_tighter_than_boxplus(self):
        assert ev("C(1) boxplus C(1) + 1") == constant(3)
        assert ev("(C(1) boxplus C(1)) + 1") == constant(3)
        assert ev("C(1) boxplus (C(1) + 1)") == constant(3)

    def test_shift_amount_is_greedy(self):
        assert ev("C(0) + 2 * 3 + 1") == constant(7)
        assert ev("B(6) + 2 - 2 == B(6)") is True

    def test_postfix_star(self):
        assert ev("DT{q=2; *=3-}* == DT{q=2; *=3+}") is True
        assert ev("DT{q=2; *=3-}** == DT{q=2; *=3-}") is True
        # mirrored plus meets plus: mixed signs collapse to minus
        assert ev("B(2)* boxplus B(2) == DT{q=2; *=2-}") is True

    def test_integer_arithmetic(self):
        assert ev("2*3+4") == 10
        assert ev("2+3*4") == 14
        assert ev("-2-3") == -5
        assert ev("2*(3+4)") == 14
        assert ev("10 <= 11") is True
        assert ev("11 <= 10") is False

    def test_mixing_requires_parens(self):
        with pytest.raises(ParseError, match=r"parentheses required.*\(line 1, column 19\)"):
            parse("B(4) boxplus B(4) oplus B(4)")
        assert ev("(B(4) boxplus B(4)) oplus B(4)").dim() == 10

    def test_chain_left_associative(self):
        assert ev("C(1) boxplus C(2) boxplus C(3)") == constant(6)

    def test_comparison_loosest(self):
        assert ev("C(1) boxplus C(2) == C(3)") is True
        assert ev("DT{q=1; *=2-} <= B(3)") is True
        assert ev("DT{q=1; *=2-} <= B(2)") is False

    def test_dim_and_sigma_calls(self):
        assert ev("dim(C(4))") == 4
        assert ev("dim(DT{q=2; *=3-})") == 3
        assert str(ev("sigma(Zpinf(3) + Z/3)")) == "{Z_3}"

    def test_parameters(self):
        assert ev("n + 1", n=5) == 6
        assert ev("dim(B(n) boxplus B(n)) == 2*n - 1", n=9) is True


class TestGroupExpressions:
    def test_atoms(self):
        assert ev("Q") == Rationals()
        assert ev("Z") == Free(1)
        assert ev("Z^3") == Free(3)
        assert ev("Z/12") == Cyclic(12)
        assert ev("Zpinf(7)") == PadicCircle(7)
        assert ev("Zloc(5)") == LocalizedIntegers(5)

    def test_presentation(self):
        assert ev("pres[[2,0],[0,12]]") == Presented(2, ((2, 0), (0, 12)))
        assert ev("pres[[-2,4]]") == Presented(2, ((-2, 4),))
        assert ev("pres[]") == Presented(0, ())

    def test_direct_sum_flattens(self):
        assert ev("Z/2 + Z/4 + Q") == DirectSum((Cyclic(2), Cyclic(4), Rationals()))

    def test_validation_positioned(self):
        with pytest.raises(ValidityError, match=r"\(line 1, column 1\)"):
            parse("Zpinf(4)")
        with pytest.raises(ValidityError, match=r"modulus"):
            parse("Z/1")
        with pytest.raises(ValidityError, match=r"relation"):
            parse("pres[[1,2],[3]]")


class TestDiagnostics:
    BAD_INPUTS = [
        "",
        "B(",
        "B(4",
        "DT{q=2}",
        "DT{q=2; *=3- 5=2+}",
        "2 +",
        "boxplus",
        "C(2) boxplus",
        "(C(2)",
        "5 @ 3",
        "B(4) == C(4) == C(4)",
        "DT{q=1; *=1respond}",
    ]

    @pytest.mark.parametrize("text", BAD_INPUTS)
    def test_parse_errors_are_positioned(self, text):
        with pytest.raises(ParseError) as info:
            parse(text)
        assert "(line " in str(info.value)
        assert info.value.line >= 1 and info.value.column >= 1

    MISMATCHES = [
        "dim(5)",
        "dim(Q)",
        "sigma(C(2))",
        "sigma(5)",
        "B(C(2))",
        "5 boxplus 5",
        "C(2) boxplus 5",
        "B(4) <= 3",
        "Q == Q",
        "sigma(Q) <= sigma(Q)",
        "C(2) * 2",
        "2 * C(2)",
        "5*",
        "2 ** 3",
        "Q + 2",
        "C(2) + Q",
        "2 + Q",
        "Q - Q",
        "-Q",
    ]

    @pytest.mark.parametrize("text", MISMATCHES)
    def test_kind_mismatches_are_positioned(self, text):
        with pytest.raises(TypeMismatchError) as info:
            parse(text)
        assert "(line " in str(info.value)

    def test_multiline_positions(self):
        with pytest.raises(ParseError) as info:
            parse("C(1) boxplus\nC(2) oplus C(3)", start_line=1)
        assert info.value.line == 2

    def test_unbound_parameter(self):
        with pytest.raises(EvaluationError, match=r"unbound parameter 'n'"):
            ev("n + 1")

    def test_inf_guards(self):
        assert ev("inf + 1") is INF
        assert ev("inf - 5") is INF
        with pytest.raises(EvaluationError):
            ev("5 - inf")
        with pytest.raises(EvaluationError):
            ev("2 * inf")
        with pytest.raises(EvaluationError):
            ev("-inf")
        with pytest.raises(EvaluationError):
            ev("C(1) + inf")
        with pytest.raises(ValidityError):
            ev("B(inf)")
        assert ev("C(inf)") == constant(INF)

    def test_negative_shift_rejected_at_evaluation(self):
        with pytest.raises(ValidityError):
            ev("C(1) + n", n=-2)


class TestKinds:
    def test_kind_of(self):
        assert kind_of(parse("5")) == "integer"
        assert kind_of(parse("dim(C(1))")) == "integer"
        assert kind_of(parse("B(4)")) == "dimension type"
        assert kind_of(parse("Q")) == "group"
        assert kind_of(parse("sigma(Q)")) == "sigma-set"
        assert kind_of(parse("5 == 5")) == "boolean"

    def test_free_parameters_nested(self):
        expr = parse("dim(DT{q=a; *=(b-1)+} boxplus B(c)) == d")
        assert free_parameters(expr) == {"a", "b", "c", "d"}


class TestRender:
    def test_pretty_golden(self):
        assert render(boltyanskii_type(6)) == "{q=5; *=5+}"
        assert render(constant(0)) == "{q=0; *=0}"
        assert render(True) == "true"
        assert render(False) == "false"
        assert render(7) == "7"
        assert render(INF) == "inf"
        assert render(DecoratedNumber(3, MINUS)) == "3-"
        assert render(Cyclic(2) + Free(1)) == "Z/2 + Z"

    def test_structured_golden_type(self):
        d = DimensionType(2, DecoratedNumber(3, MINUS), {5: DecoratedNumber(1, PLUS)})
        assert json.loads(render(d, "structured")) == {
            "kind": "dimension-type",
            "q": 2,
            "default": {"kind": "decorated-number", "base": 3, "decoration": "minus"},
            "exceptions": {
                "5": {"kind": "decorated-number", "base": 1, "decoration": "plus"}},
        }

    def test_structured_golden_others(self):
        assert json.loads(render(INF, "structured")) == {"kind": "extnat", "value": "inf"}
        assert json.loads(render(True, "structured")) == {"kind": "boolean", "value": True}
        sigma = bockstein_basis(Cyclic(2) + Cyclic(12))
        assert json.loads(render(sigma, "structured")) == {
            "kind": "sigma-set",
            "rationals": False,
            "cyclic": {"default": False, "exceptions": [2, 3]},
            "circle": {"default": False, "exceptions": []},
            "localized": {"default": False, "exceptions": []},
        }

    def test_structured_key_order_stable(self):
        d = constant(INF)
        assert render(d, "structured") == render(d, "structured")
        assert render(d, "structured").index('"default"') < render(d, "structured").index('"q"')

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render(constant(1), "yaml")


class TestRoundTrip:
    @given(dimension_types(allow_inf=True))
    def test_pretty_round_trip(self, d):
        assert evaluate_expr(parse(render(d, "pretty"))) == d

    @given(dimension_types())
    def test_structured_stable_through_parse(self, d):
        reparsed = evaluate_expr(parse(render(d, "pretty")))
        assert render(reparsed, "structured") == render(d, "structured")

    def test_literal_normalizes_spacing(self):
        text = render(evaluate_expr(parse("{q=2;*=3-}")), "pretty")
        assert text == "{q=2; *=3-}"
        assert evaluate_expr(parse(text)) == DimensionType(2, DecoratedNumber(3, MINUS))

    @given(st.integers(0, 50))
    def test_integer_round_trip(self, n):
        assert evaluate_expr(parse(render(n, "pretty"))) == n

    def test_group_round_trip(self):
        groups = [
            Rationals(), Free(1), Free(4), Cyclic(9), PadicCircle(2),
            LocalizedIntegers(7), Presented(2, ((2, 0), (0, 12))),
            Cyclic(2) + PadicCircle(3) + Free(2), Presented(0, ()),
            Presented(2, ((-2, 4),)),
        ]
        for group in groups:
            assert evaluate_expr(parse(str(group))) == group
