"""Finite frame universes, frame constructions and definability experiments.

A universe lists every frame with 1..n worlds in a fixed order: by world
count, then by edge mask (bit ``i*n+j`` for the edge ``i -> j``).  With
``iso_reduce=True`` only the frame with the least mask in each
isomorphism class is kept, and lookups go through that canonical form.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .algebra import LatticeAlgebra, UnaryTerm, boolean_power
from .semantics import DEFAULT_BUDGET, Frame, consequence_on_frames
from .syntax import Formula
from .translation import Translator, interpret_classical, phi_star, t_wrap

__all__ = [
    "FrameUniverse", "FrameMap", "ClosureReport", "DefinabilityReport",
    "MAX_UNIVERSE_FRAMES", "enumerate_frames", "canonical_mask", "generated_subframe",
    "disjoint_union", "is_bounded_morphism", "bounded_morphic_images", "defined_class",
    "compare_definability", "closure_check", "CLOSURE_OPERATIONS",
]

MAX_UNIVERSE_FRAMES = 1 << 17


class UniverseBudgetError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def _perms(n: int) -> tuple:
    return tuple(itertools.permutations(range(n)))


def canonical_mask(frame: Frame) -> int:
    """Least edge mask over all relabelings of ``frame``."""
    n = frame.worlds
    best = None
    for perm in _perms(n):
        m = 0
        for i, j in frame.edges:
            m |= 1 << (perm[i] * n + perm[j])
        if best is None or m < best:
            best = m
    return best


@dataclass
class FrameUniverse:
    frames: list
    n: int
    iso_reduced: bool = False
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {self._key(f): i for i, f in enumerate(self.frames)}

    def _key(self, frame: Frame) -> tuple:
        mask = canonical_mask(frame) if self.iso_reduced else frame.mask
        return frame.worlds, mask

    def index_of(self, frame: Frame) -> Optional[int]:
        """Universe index of ``frame`` (of its isomorphism class when reduced)."""
        if frame.worlds > self.n or frame.worlds < 1:
            return None
        return self._index.get(self._key(frame))

    def __len__(self):
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    def __getitem__(self, i):
        return self.frames[i]


def enumerate_frames(n: int, iso_reduce: bool = False,
                     max_frames: int = MAX_UNIVERSE_FRAMES) -> FrameUniverse:
    total = sum(1 << (k * k) for k in range(1, n + 1))
    if n < 1:
        raise ValueError("a universe needs at least one world")
    if total > max_frames:
        raise UniverseBudgetError(f"{total} frames exceed the budget of {max_frames}")
    frames = []
    for k in range(1, n + 1):
        for mask in range(1 << (k * k)):
            frame = Frame.from_mask(k, mask)
            if iso_reduce and canonical_mask(frame) != mask:
                continue
            frames.append(frame)
    return FrameUniverse(frames, n, iso_reduce)


# ------------------------------------------------------------- constructions

def generated_subframe(frame: Frame, w: int) -> Frame:
    """Restriction to the worlds reachable from ``w``, relabeled in increasing order."""
    if not 0 <= w < frame.worlds:
        raise IndexError(f"world {w} out of range for a {frame.worlds}-world frame")
    reach, stack = {w}, [w]
    while stack:
        for v in frame.succ[stack.pop()]:
            if v not in reach:
                reach.add(v)
                stack.append(v)
    order = sorted(reach)
    pos = {v: i for i, v in enumerate(order)}
    return Frame(len(order), [(pos[i], pos[j]) for i, j in frame.edges if i in reach and j in reach])


def disjoint_union(frames: Sequence[Frame]) -> Frame:
    edges, offset = [], 0
    for f in frames:
        edges.extend((i + offset, j + offset) for i, j in f.edges)
        offset += f.worlds
    return Frame(offset, edges)


@dataclass(frozen=True)
class FrameMap:
    source: Frame
    target: Frame
    mapping: tuple

    def __post_init__(self):
        if len(self.mapping) != self.source.worlds:
            raise ValueError("the map must be total on the source worlds")
        if any(not 0 <= x < self.target.worlds for x in self.mapping):
            raise ValueError("the map leaves the target frame")


def is_bounded_morphism(m: FrameMap) -> bool:
    f, src, tgt = m.mapping, m.source, m.target
    for i, j in src.edges:
        if (f[i], f[j]) not in tgt.edges:
            return False
    for w in range(src.worlds):
        images = {f[v] for v in src.succ[w]}
        if any(u not in images for u in tgt.succ[f[w]]):
            return False
    return True


def bounded_morphic_images(frame: Frame):
    """Every (map, image) with the map a surjective bounded morphism.

    The image relation of a surjective bounded morphism is forced to be
    the image of the source relation, so only the back condition needs
    checking: worlds with one image must have equal successor images.
    """
    n = frame.worlds
    for k in range(1, n + 1):
        for mapping in itertools.product(range(k), repeat=n):
            if len(set(mapping)) != k:
                continue
            succ_img: dict = {}
            ok = True
            for w in range(n):
                img = frozenset(mapping[v] for v in frame.succ[w])
                if succ_img.setdefault(mapping[w], img) != img:
                    ok = False
                    break
            if ok:
                image = Frame(k, {(mapping[i], mapping[j]) for i, j in frame.edges})
                yield FrameMap(frame, image, mapping), image


# ------------------------------------------------------------- definability

def _validates_all(args) -> list:
    frames, alg, formulas, budget, method = args
    out = []
    for frame in frames:
        out.append(all(consequence_on_frames([frame], alg, [], f, budget, method).holds
                       for f in formulas))
    return out


def defined_class(alg: LatticeAlgebra, formulas: Iterable[Formula], universe: FrameUniverse,
                  budget: int = DEFAULT_BUDGET, workers: int = 1,
                  method: str = "enumerate") -> list:
    """Indices of the universe frames on which every formula is ``alg``-valid."""
    formulas = list(formulas)
    frames = list(universe.frames)
    if workers <= 1 or len(frames) < 2 * workers:
        flags = _validates_all((frames, alg, formulas, budget, method))
    else:
        size = -(-len(frames) // (4 * workers))
        parts = [frames[i:i + size] for i in range(0, len(frames), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flags = [x for part in pool.map(_validates_all,
                                            [(p, alg, formulas, budget, method) for p in parts])
                     for x in part]
    return [i for i, ok in enumerate(flags) if ok]


@dataclass
class DefinabilityReport:
    algebra: str
    formula: Formula
    compared_with: Formula
    left: list
    right: list
    universe_size: int

    @property
    def agree(self) -> bool:
        return self.left == self.right

    @property
    def mismatches(self) -> list:
        return sorted(set(self.left) ^ set(self.right))

    def __bool__(self):
        return self.agree


def compare_definability(alg: LatticeAlgebra, f: Formula, universe: FrameUniverse,
                         budget: int = DEFAULT_BUDGET, workers: int = 1,
                         term: Optional[UnaryTerm] = None,
                         negation: Optional[UnaryTerm] = None,
                         translator: Optional[Translator] = None) -> DefinabilityReport:
    """Frames defined by ``f`` over ``alg`` against frames defined over 2.

    Without ``term`` the two-valued side is ``phi_star(alg, f)``.  With a
    Boolean interpretation term ``t``, ``f`` is read as a classical formula:
    the left side becomes ``t(f)`` over ``alg`` (classical negation read as
    ``negation``, by default the algebra's) and the right side ``f`` over 2.
    """
    two = boolean_power(1)
    if term is None:
        left_formula, right_formula = f, phi_star(alg, f, translator)
        method = "auto"
    else:
        in_a = interpret_classical(f, negation or alg.negation)
        left_formula, right_formula = t_wrap(term, in_a), f
        method = "enumerate"
    left = defined_class(alg, [left_formula], universe, budget, workers)
    right = defined_class(two, [right_formula], universe, budget, workers, method)
    return DefinabilityReport(alg.name, left_formula, right_formula, left, right, len(universe))


CLOSURE_OPERATIONS = ("generated_subframe", "disjoint_union", "bounded_morphic_image")


@dataclass
class ClosureReport:
    operation: str
    violations: list = field(default_factory=list)
    tested: int = 0
    not_tested: int = 0

    @property
    def closed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.closed


def closure_check(subset: Iterable[int], universe: FrameUniverse, operation: str) -> ClosureReport:
    """Instances where ``operation`` leads from ``subset`` to a universe frame outside it.

    Violations are tuples ``(source indices, detail, result frame)``.
    Disjoint unions larger than the universe bound are counted in
    ``not_tested`` rather than treated as closed.
    """
    members = sorted(set(subset))
    inside = set(members)
    report = ClosureReport(operation)

    def judge(sources, detail, result: Frame):
        idx = universe.index_of(result)
        if idx is None:
            report.not_tested += 1
            return
        report.tested += 1
        if idx not in inside:
            report.violations.append((sources, detail, result))

    if operation == "generated_subframe":
        for i in members:
            for w in range(universe[i].worlds):
                judge((i,), w, generated_subframe(universe[i], w))
    elif operation == "bounded_morphic_image":
        for i in members:
            for fmap, image in bounded_morphic_images(universe[i]):
                judge((i,), fmap.mapping, image)
    elif operation == "disjoint_union":
        for a, b in itertools.combinations_with_replacement(members, 2):
            judge((a, b), None, disjoint_union([universe[a], universe[b]]))
    else:
        raise ValueError(f"unknown operation {operation!r}; choose from {CLOSURE_OPERATIONS}")
    return report
