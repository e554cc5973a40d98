import random

import pytest

from mvmodal.algebra import UnaryTerm, boolean_power, godel_chain, lukasiewicz_chain
from mvmodal.framelab import (
    FrameMap, UniverseBudgetError, bounded_morphic_images, canonical_mask, closure_check,
    compare_definability, defined_class, disjoint_union, enumerate_frames, generated_subframe,
    is_bounded_morphism,
)
from mvmodal.generators import random_frame
from mvmodal.semantics import Frame
from mvmodal.syntax import CLASSICAL, parse

TWO = boolean_power(1)
L3 = lukasiewicz_chain(3)
G3 = godel_chain(3)
U2 = enumerate_frames(2)
REFLEXIVE_2 = [i for i, f in enumerate(U2) if all((w, w) in f.edges for w in range(f.worlds))]


class TestUniverse:
    @pytest.mark.parametrize("n,size_n", [(1, 2), (2, 16), (3, 512)])
    def test_counts(self, n, size_n):
        universe = enumerate_frames(n)
        assert sum(1 for f in universe if f.worlds == n) == size_n
        assert len(universe) == sum(2 ** (k * k) for k in range(1, n + 1))

    def test_deterministic_order(self):
        assert list(enumerate_frames(2)) == list(enumerate_frames(2))

    def test_iso_reduced_counts(self):
        assert len(enumerate_frames(2, iso_reduce=True)) == 2 + 10
        assert len(enumerate_frames(3, iso_reduce=True)) == 2 + 10 + 104

    def test_index_of_iso_reduced(self):
        universe = enumerate_frames(3, iso_reduce=True)
        chain, rechain = Frame(3, [(0, 1), (1, 2)]), Frame(3, [(2, 1), (1, 0)])
        assert universe.index_of(chain) == universe.index_of(rechain) is not None
        assert canonical_mask(chain) == canonical_mask(rechain)

    def test_budget(self):
        with pytest.raises(UniverseBudgetError):
            enumerate_frames(5)


class TestConstructions:
    def test_generated_subframe_of_endpoint(self):
        assert generated_subframe(Frame(2, [(0, 1)]), 1) == Frame(1)

    def test_generated_subframe_out_of_range(self):
        with pytest.raises(IndexError):
            generated_subframe(Frame(2), 2)

    def test_generated_subframe_idempotent(self):
        rng = random.Random(1)
        for _ in range(100):
            frame = random_frame(rng, 4)
            sub = generated_subframe(frame, 0)
            assert generated_subframe(sub, 0) == sub

    def test_disjoint_union_counts(self):
        rng = random.Random(2)
        for _ in range(50):
            parts = [random_frame(rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
            union = disjoint_union(parts)
            assert union.worlds == sum(p.worlds for p in parts)
            assert len(union.edges) == sum(len(p.edges) for p in parts)

    def test_identity_is_bounded_morphism(self):
        for frame in U2:
            assert is_bounded_morphism(FrameMap(frame, frame, tuple(range(frame.worlds))))

    def test_two_cycle_onto_reflexive_point(self):
        cycle = Frame(2, [(0, 1), (1, 0)])
        assert is_bounded_morphism(FrameMap(cycle, Frame(1, [(0, 0)]), (0, 0)))

    def test_back_condition_fails(self):
        # the irreflexive point maps onto a point with a loop: forth holds vacuously, back fails
        assert not is_bounded_morphism(FrameMap(Frame(1), Frame(1, [(0, 0)]), (0,)))

    def test_map_must_be_total(self):
        with pytest.raises(ValueError):
            FrameMap(Frame(2), Frame(1), (0,))

    def test_images_are_bounded_morphisms(self):
        for frame in enumerate_frames(3, iso_reduce=True):
            for fmap, image in bounded_morphic_images(frame):
                assert is_bounded_morphism(fmap) and image.worlds == len(set(fmap.mapping))


class TestDefinability:
    def test_empty_set_defines_everything(self):
        assert defined_class(L3, [], U2) == list(range(len(U2)))

    def test_reflexive_over_two(self):
        assert defined_class(TWO, [parse("box p -> p", CLASSICAL)], U2) == REFLEXIVE_2

    def test_godel_double_negation(self):
        t = UnaryTerm.parse("(x -> 0) -> 0", G3.signature)
        f = parse("box p -> p", CLASSICAL)
        report = compare_definability(G3, f, U2, term=t)
        assert report.agree and report.left == REFLEXIVE_2

    def test_over_two_trivial(self):
        for f in [parse("box p -> box box p", CLASSICAL), parse("p -> dia p", CLASSICAL)]:
            assert compare_definability(TWO, f, U2)

    def test_l3_three_x(self):
        t = UnaryTerm.parse("(x -> 0) -> ((x -> 0) -> x)", L3.signature)
        report = compare_definability(L3, parse("box p -> p", CLASSICAL), U2, term=t)
        assert report.agree and report.left == REFLEXIVE_2

    def test_phi_star_random(self):
        from mvmodal.generators import formula_suite

        for f in formula_suite(3, 8, L3.signature, 2, 2, 3, root="imp"):
            report = compare_definability(L3, f, U2)
            assert report.mismatches == []

    def test_workers_do_not_change_result(self):
        f = parse("box p -> box box p", CLASSICAL)
        universe = enumerate_frames(3, iso_reduce=True)
        assert defined_class(TWO, [f], universe, workers=2) == defined_class(TWO, [f], universe)


class TestClosure:
    U3 = enumerate_frames(3)

    def reflexive(self, universe):
        return [i for i, f in enumerate(universe) if all((w, w) in f.edges for w in range(f.worlds))]

    @pytest.mark.parametrize("operation", ["generated_subframe", "disjoint_union", "bounded_morphic_image"])
    def test_reflexive_closed(self, operation):
        report = closure_check(self.reflexive(self.U3), self.U3, operation)
        assert report.closed and report.tested > 0

    def test_two_world_frames_not_closed(self):
        two_world = [i for i, f in enumerate(U2) if f.worlds == 2]
        report = closure_check(two_world, U2, "generated_subframe")
        assert not report
        report = closure_check(two_world, U2, "disjoint_union")
        assert report.tested == 0 and report.not_tested > 0

    def test_size_one_unions_tested(self):
        points = [i for i, f in enumerate(U2) if f.worlds == 1]
        report = closure_check(points, U2, "disjoint_union")
        assert report.violations and report.tested == 3

    def test_unknown_operation(self):
        with pytest.raises(ValueError):
            closure_check([], U2, "ultrafilter_extension")

    def test_l3_defined_class_closed(self):
        t = UnaryTerm.parse("(x -> 0) -> ((x -> 0) -> x)", L3.signature)
        f = parse("box p -> p", CLASSICAL)
        cls = compare_definability(L3, f, self.U3, term=t).left
        for operation in ("generated_subframe", "bounded_morphic_image", "disjoint_union"):
            assert closure_check(cls, self.U3, operation).closed
