import itertools
import random

import pytest

from mvmodal.algebra import (
    PreconditionError, SignatureError, UnaryTerm, boolean_power, godel_chain, lukasiewicz_chain,
)
from mvmodal.framelab import enumerate_frames
from mvmodal.generators import default_vars, formula_suite, random_frame, random_model
from mvmodal.semantics import Frame, Model, consequence_on_frames, evaluate, frame_validates, globally_true
from mvmodal.syntax import (
    CLASSICAL, Op, Var, box_power, conj, disj, modal_rank, neg, parse, subformulas,
)
from mvmodal.translation import (
    Translator, commutation_failures, componentwise_failures, exactly_one_violations,
    interpret_classical, phi_star, reconstruct_model, star_letter, star_model, switch_check,
    t_wrap, translate_value, tstar_theory, witness_subsets,
)

TWO = boolean_power(1)
L3 = lukasiewicz_chain(3)
G3 = godel_chain(3)
P, Q = Var("p"), Var("q")


class TestTranslateValue:
    @pytest.mark.parametrize("alg", [TWO, L3, G3], ids=lambda a: a.name)
    def test_variable(self, alg):
        for a in alg.elements:
            assert translate_value(alg, P, a) == Var("p", a)

    def test_conjunction_over_two(self):
        assert translate_value(TWO, parse("p & q", CLASSICAL), 1) == Op("and", (Var("p", 1), Var("q", 1)))

    def test_dead_end_bottom(self):
        star = star_model(Model(Frame(1), L3, {P: (2,)}))
        t = translate_value(L3, parse("dia p", L3.signature), L3.bottom)
        assert evaluate(star, t, 0) == TWO.top

    def test_value_outside_carrier(self):
        with pytest.raises(ValueError):
            translate_value(L3, P, 3)

    def test_rank_preserved(self):
        tr = Translator(L3)
        for f in formula_suite(1, 40, L3.signature, 2, 3, 5):
            for a in L3.elements:
                assert modal_rank(tr(f, a)) == modal_rank(f)

    def test_witness_subsets(self):
        assert witness_subsets(L3, 0, True) == [()]
        assert witness_subsets(L3, 2, True) == [(2,)]
        assert witness_subsets(L3, 2, True, minimal=False) == [(2,), (0, 2), (1, 2), (0, 1, 2)]
        assert witness_subsets(L3, 2, False) == [()]

    def test_all_subsets_equivalent_to_minimal(self):
        full = Translator(L3)
        full._dia = {a: witness_subsets(L3, a, True, minimal=False) for a in L3.elements}
        full._box = {a: witness_subsets(L3, a, False, minimal=False) for a in L3.elements}
        rng = random.Random(2)
        for f in formula_suite(2, 60, L3.signature, 2, 2, 4):
            m = random_model(rng, random_frame(rng, 3), L3, default_vars(2))
            assert switch_check(m, f, full)


class TestStarModel:
    def test_half(self):
        star = star_model(Model(Frame(1), L3, {P: (1,)}))
        assert [star.valuation[Var("p", a)] for a in L3.elements] == [(0,), (1,), (0,)]

    def test_all_top(self):
        star = star_model(Model(Frame(2), G3, {P: (2, 2), Q: (2, 2)}))
        true = {v for v, vals in star.valuation.items() if any(vals)}
        assert true == {Var("p", 2), Var("q", 2)}

    def test_same_frame(self):
        frame = Frame(3, [(0, 1), (2, 2)])
        assert star_model(Model(frame, L3, {P: (0, 1, 2)})).frame == frame


class TestSwitchLemma:
    def test_over_two(self):
        rng = random.Random(0)
        for f in formula_suite(0, 50, CLASSICAL, 2, 2, 4):
            assert switch_check(random_model(rng, random_frame(rng, 3), TWO, default_vars(2)), f)

    def test_l3_chain_all_valuations(self):
        f = parse("box dia p", L3.signature)
        chain = Frame(2, [(0, 1)])
        for values in itertools.product(L3.elements, repeat=2):
            assert switch_check(Model(chain, L3, {P: values}), f)

    def test_dead_end_diamond(self):
        assert switch_check(Model(Frame(1), L3, {P: (1,)}), parse("dia p", L3.signature))

    @pytest.mark.parametrize("alg", [L3, G3, boolean_power(2), lukasiewicz_chain(4)],
                             ids=lambda a: a.name)
    def test_exactly_one_and_switch_up_to_four_worlds(self, alg):
        rng = random.Random(alg.size)
        tr = Translator(alg)
        for f in formula_suite(alg.size, 40, alg.signature, 2, 3, 5):
            m = random_model(rng, random_frame(rng, rng.randint(1, 4)), alg, default_vars(2))
            assert switch_check(m, f, tr)
            assert exactly_one_violations(m, f, tr) == []


class TestTStar:
    def test_two(self):
        assert tstar_theory(TWO, [P]) == [Op("or", (Var("p", 0), Var("p", 1))),
                                          neg(Op("and", (Var("p", 0), Var("p", 1))))]

    def test_l3_count(self):
        axioms = tstar_theory(L3, [P])
        assert len(axioms) == 4 and axioms[0].op == "or"

    def test_star_models_satisfy_theory(self):
        rng = random.Random(5)
        for _ in range(30):
            m = random_model(rng, random_frame(rng, 3), L3, [P, Q])
            star = star_model(m)
            assert all(globally_true(star, ax) for ax in tstar_theory(L3, [P, Q]))

    def test_reconstruct_round_trip(self):
        m = Model(Frame(2, [(0, 1)]), L3, {P: (0, 1), Q: (2, 2)})
        assert reconstruct_model(star_model(m), L3, [P, Q]).valuation == m.valuation

    def test_reconstruct_half(self):
        n = Model(Frame(1), TWO, {Var("p", 0): (0,), Var("p", 1): (1,), Var("p", 2): (0,)})
        assert reconstruct_model(n, L3, [P]).valuation[P] == (1,)

    def test_reconstruct_violation(self):
        n = Model(Frame(1), TWO, {Var("p", 0): (1,), Var("p", 1): (1,), Var("p", 2): (0,)})
        with pytest.raises(PreconditionError, match="p at world 0"):
            reconstruct_model(n, L3, [P])


class TestPhiStar:
    def test_rank_zero_over_two(self):
        expected = disj([neg(box_power(0, conj(tstar_theory(TWO, [P])))), star_letter(P, 1)])
        assert phi_star(TWO, P) == expected

    @pytest.mark.parametrize("alg", [L3, G3], ids=lambda a: a.name)
    def test_frame_agreement_small(self, alg):
        frames = enumerate_frames(2).frames
        for f in formula_suite(8, 12, alg.signature, 2, 2, 3):
            g = phi_star(alg, f)
            for frame in frames:
                assert bool(frame_validates(frame, alg, f)) == bool(frame_validates(frame, TWO, g))


class TestInterpretation:
    def test_t_wrap(self):
        t = UnaryTerm.parse("~~x", CLASSICAL)
        assert t_wrap(t, P) == neg(neg(P))

    def test_interpret_classical_rejects_other_ops(self):
        with pytest.raises(SignatureError):
            interpret_classical(parse("p -> q", L3.signature), L3.negation)

    def test_godel_reflexive(self):
        t = UnaryTerm.parse("(x -> 0) -> 0", G3.signature)
        f = parse("box p -> p", CLASSICAL)
        g = t_wrap(t, interpret_classical(f, G3.negation))
        for frame in enumerate_frames(3):
            assert bool(frame_validates(frame, TWO, f)) == bool(frame_validates(frame, G3, g))

    def test_consequence_transport_godel(self):
        t = UnaryTerm.parse("(x -> 0) -> 0", G3.signature)
        wrap = lambda f: t_wrap(t, interpret_classical(f, G3.negation))  # noqa: E731
        frames = enumerate_frames(2).frames
        fs = formula_suite(12, 16, CLASSICAL, 2, 2, 3)
        rng = random.Random(12)
        for _ in range(20):
            gamma, f = rng.sample(fs, rng.randint(0, 2)), rng.choice(fs)
            for frame in frames:
                left = consequence_on_frames([frame], TWO, gamma, f)
                right = consequence_on_frames([frame], G3, [wrap(g) for g in gamma], wrap(f))
                assert left.holds == right.holds

    def test_commutation_godel(self):
        t = UnaryTerm.parse("(x -> 0) -> 0", G3.signature)
        rng = random.Random(9)
        for f in formula_suite(9, 40, CLASSICAL, 2, 2, 4):
            m = random_model(rng, random_frame(rng, 3), G3, default_vars(2))
            assert commutation_failures(m, f, t) == []

    def test_commutation_needs_a_congruence(self):
        t = UnaryTerm.parse("(x -> 0) -> ((x -> 0) -> x)", L3.signature)
        m = Model(Frame(1), L3, {P: (1,)})
        with pytest.raises(PreconditionError):
            commutation_failures(m, neg(P), t)

    @pytest.mark.parametrize("k", [2, 3])
    def test_power_componentwise(self, k):
        alg = boolean_power(k)
        rng = random.Random(k)
        for f in formula_suite(k, 40, alg.signature, 2, 2, 4):
            m = random_model(rng, random_frame(rng, 3), alg, default_vars(2))
            assert componentwise_failures(m, f) == []

    def test_subformulas_of_translation_are_shared(self):
        f = parse("box (p & p) | dia (p & p)", CLASSICAL)
        out = translate_value(TWO, f, 1)
        assert len(subformulas(out)) < 60
