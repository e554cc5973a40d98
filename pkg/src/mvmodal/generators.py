"""Seeded random formulas and models for the property suites.

The grammar is fixed: a node is a variable, a connective of the signature
(bounds excluded), ``dia`` or ``box``; modalities are only drawn while
the rank budget lasts.  Every draw goes through the ``random.Random``
passed in, so a seed reproduces a suite exactly.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .algebra import LatticeAlgebra
from .semantics import Frame, Model
from .syntax import Box, Dia, Formula, Op, Signature, Var

__all__ = ["random_formula", "random_model", "random_frame", "formula_suite", "default_vars"]


def default_vars(k: int) -> list:
    return [Var(f"p{i}") for i in range(1, k + 1)]


def random_formula(rng: random.Random, signature: Signature, vars_: Sequence[Var],
                   max_rank: int = 2, max_depth: int = 4, root: Optional[str] = None) -> Formula:
    """``root`` forces the top connective (any binary connective of the signature)."""
    ops = sorted((name, arity) for name, arity in signature.ops if arity > 0)
    if root is not None:
        if signature.arity(root) != 2:
            raise ValueError(f"root connective {root!r} must be binary in the signature")
        return Op(root, [random_formula(rng, signature, vars_, max_rank, max_depth - 1)
                         for _ in range(2)])

    def grow(depth: int, rank_left: int) -> Formula:
        if depth == 0 or rng.random() < 0.25:
            return rng.choice(list(vars_))
        kinds = ["op"] * 2 + (["dia", "box"] if rank_left > 0 else [])
        kind = rng.choice(kinds)
        if kind == "dia":
            return Dia(grow(depth - 1, rank_left - 1))
        if kind == "box":
            return Box(grow(depth - 1, rank_left - 1))
        name, arity = rng.choice(ops)
        return Op(name, [grow(depth - 1, rank_left) for _ in range(arity)])

    return grow(max_depth, max_rank)


def random_frame(rng: random.Random, worlds: int, density: float = 0.4) -> Frame:
    return Frame(worlds, [(i, j) for i in range(worlds) for j in range(worlds)
                          if rng.random() < density])


def random_model(rng: random.Random, frame: Frame, alg: LatticeAlgebra,
                 vars_: Sequence[Var]) -> Model:
    return Model(frame, alg, {v: tuple(rng.randrange(alg.size) for _ in range(frame.worlds))
                              for v in vars_})


def formula_suite(seed: int, count: int, signature: Signature, n_vars: int = 2,
                  max_rank: int = 2, max_depth: int = 4, root: Optional[str] = None) -> list:
    """``count`` distinct formulas from one seed."""
    rng = random.Random(seed)
    vars_ = default_vars(n_vars)
    out, seen = [], set()
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        f = random_formula(rng, signature, vars_, max_rank, max_depth, root)
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out
