import pytest
from hypothesis import given, settings, strategies as st

from mvmodal.syntax import (
    BOT, CLASSICAL, TOP, Box, Dia, Op, ParseError, Signature, Var, box_power, modal_rank,
    parse, size, subformulas, to_text, var_from_name, variables,
)

SIG = Signature.of(imp=2, conj=2, f=3, **{"not": 1})


def formulas(signature=SIG, letters=("p1", "p2", "q")):
    leaves = st.one_of(st.sampled_from([Var(n) for n in letters]),
                       st.builds(Var, st.sampled_from(letters), st.integers(0, 3)),
                       st.sampled_from([TOP, BOT]))
    ops = sorted((n, a) for n, a in signature.ops if a > 0)

    def extend(children):
        connective = st.sampled_from(ops).flatmap(
            lambda na: st.tuples(*[children] * na[1]).map(lambda args, name=na[0]: Op(name, args)))
        return st.one_of(connective, children.map(Dia), children.map(Box))

    return st.recursive(leaves, extend, max_leaves=12)


class TestParse:
    def test_box_implication(self):
        p1, p2 = Var("p1"), Var("p2")
        assert parse("box (p1 -> p2)", SIG) == Box(Op("imp", (p1, p2)))

    def test_and_of_modalities(self):
        assert parse("dia p1 & box p2", SIG) == Op("and", (Dia(Var("p1")), Box(Var("p2"))))

    def test_named_ternary(self):
        f = parse("f(p1,p2,p3)", SIG)
        assert f.op == "f" and len(f.args) == 3

    def test_material_sugar(self):
        assert parse("p => q", SIG) == Op("or", (Op("not", (Var("p"),)), Var("q")))
        assert parse("p -> q", CLASSICAL) == parse("p => q", CLASSICAL)

    def test_precedence(self):
        assert parse("~p & q | r -> s", CLASSICAL) == parse("(((~p) & q) | r) -> s", CLASSICAL)
        assert parse("p -> q -> r", SIG) == parse("p -> (q -> r)", SIG)

    def test_unicode_aliases(self):
        assert parse("□(p → q) ∧ ◇¬p", SIG) == parse("box (p -> q) & dia ~p", SIG)

    def test_tagged_letters(self):
        assert parse("p3@2 & q[4]@1", SIG) == Op("and", (Var("p3", 2), Var("q[4]", 1)))

    @pytest.mark.parametrize("text,position", [("p &", 3), ("(p", 2), ("p q", 2), ("p $ q", 2)])
    def test_errors_carry_position(self, text, position):
        with pytest.raises(ParseError) as info:
            parse(text, SIG)
        assert info.value.position == position

    def test_unknown_op(self):
        with pytest.raises(ParseError):
            parse("g(p)", SIG)

    def test_wrong_arity(self):
        with pytest.raises(ParseError):
            parse("f(p, q)", SIG)

    def test_var_names(self):
        assert var_from_name("p3@2") == Var("p3", 2)
        assert var_from_name("q[0]@1") == Var("q[0]", 1)
        assert var_from_name("p1") == Var("p1")


class TestMeasures:
    @pytest.mark.parametrize("text,rank", [("p1", 0), ("box (dia p1 & p2)", 2), ("box p1 & dia p2", 1)])
    def test_modal_rank(self, text, rank):
        assert modal_rank(parse(text, SIG)) == rank

    def test_subformulas(self):
        p1 = Var("p1")
        assert set(subformulas(Dia(p1))) == {p1, Dia(p1)}

    def test_box_power(self):
        assert box_power(2, Var("p1")) == Box(Box(Var("p1")))
        assert box_power(0, Var("p1")) == Var("p1")

    def test_variables(self):
        assert variables(parse("box (p1 -> p2)", SIG)) == [Var("p1"), Var("p2")]

    def test_variables_sort_numerically(self):
        assert [v.name for v in variables(parse("p10 & p2 & p1", SIG))] == ["p1", "p2", "p10"]

    def test_shared_subtrees_counted_in_size(self):
        p = Var("p")
        shared = Op("and", (p, p))
        assert size(Op("or", (shared, shared))) == 7
        assert len(subformulas(Op("or", (shared, shared)))) == 3


class TestProperties:
    @settings(max_examples=300, deadline=None)
    @given(formulas())
    def test_round_trip(self, f):
        assert parse(to_text(f), SIG) == f

    @settings(max_examples=200, deadline=None)
    @given(formulas(), st.integers(0, 4))
    def test_rank_of_box_power(self, f, m):
        assert modal_rank(box_power(m, f)) == m + modal_rank(f)

    @settings(max_examples=200, deadline=None)
    @given(formulas())
    def test_subformula_count(self, f):
        subs = subformulas(f)
        assert len(subs) <= size(f)
        assert subs[-1] == f
        assert len(set(subs)) == len(subs)
