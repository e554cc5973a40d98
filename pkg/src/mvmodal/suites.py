"""Seeded randomized property suites shared by the CLI and the tests.

A suite of ``count`` cases walks the universe of frames with at most
``max_worlds`` worlds in order (every frame is used once ``count`` reaches
the universe size), pairs frame ``i`` with formula ``i`` of a seeded
formula list, and draws the valuation from a second stream of the same
seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .algebra import LatticeAlgebra, UnaryTerm
from .framelab import enumerate_frames
from .generators import default_vars, formula_suite, random_model
from .syntax import CLASSICAL, Formula, Signature
from .translation import Translator, commutation_failures, componentwise_failures, switch_table

__all__ = ["SuiteResult", "suite_cases", "switch_suite", "commutation_suite", "componentwise_suite"]


@dataclass
class SuiteResult:
    name: str
    algebra: str
    seed: int
    cases: int = 0
    failures: list = field(default_factory=list)
    counters: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = "".join(f", {k}={v}" for k, v in sorted(self.counters.items()))
        return f"{verdict} {self.cases} cases ({self.name}, {self.algebra}, seed {self.seed}{extra})"


def suite_cases(alg: LatticeAlgebra, seed: int, count: int, max_worlds: int = 3,
                max_rank: int = 2, n_vars: int = 2, max_depth: int = 4,
                signature: Optional[Signature] = None) -> Iterator[tuple]:
    """``(index, formula, model)`` triples, deterministic in ``seed``."""
    universe = enumerate_frames(max_worlds)
    formulas = formula_suite(seed, count, signature or alg.signature, n_vars, max_rank, max_depth)
    rng = random.Random(f"valuations-{seed}")
    vars_ = default_vars(n_vars)
    for i in range(count):
        frame = universe[i % len(universe)]
        yield i, formulas[i % len(formulas)], random_model(rng, frame, alg, vars_)


def switch_suite(alg: LatticeAlgebra, seed: int = 0, count: int = 530, **kw) -> SuiteResult:
    """Switch-lemma and exactly-one checks on every case.

    ``counters['exactly_one_violations']`` counts (case, world) pairs
    where the number of true ``T^a`` differs from one.
    """
    tr = Translator(alg)
    res = SuiteResult("switch", alg.name, seed)
    violations = 0
    for i, f, model in suite_cases(alg, seed, count, **kw):
        values, truth = switch_table(model, f, tr)
        res.cases += 1
        bad = [w for w in range(model.frame.worlds)
               if any(truth[a][w] != (values[w] == a) for a in alg.elements)]
        violations += sum(1 for w in range(model.frame.worlds)
                          if sum(row[w] for row in truth) != 1)
        if bad:
            res.failures.append((i, f, model, bad))
    res.counters["exactly_one_violations"] = violations
    return res


def commutation_suite(alg: LatticeAlgebra, term: UnaryTerm, negation: Optional[UnaryTerm] = None,
                      seed: int = 0, count: int = 530, **kw) -> SuiteResult:
    """``[[t(psi)]] = t([[psi]])`` for classical ``psi`` read in ``alg`` through ``negation``."""
    res = SuiteResult(f"commutation t={term}", alg.name, seed)
    worlds = 0
    for i, f, model in suite_cases(alg, seed, count, signature=CLASSICAL, **kw):
        bad = commutation_failures(model, f, term, negation)
        res.cases += 1
        worlds += model.frame.worlds
        if bad:
            res.failures.append((i, f, model, bad))
    res.counters["worlds"] = worlds
    return res


def componentwise_suite(alg: LatticeAlgebra, seed: int = 0, count: int = 530, **kw) -> SuiteResult:
    res = SuiteResult("componentwise", alg.name, seed)
    for i, f, model in suite_cases(alg, seed, count, **kw):
        bad = componentwise_failures(model, f)
        res.cases += 1
        if bad:
            res.failures.append((i, f, model, bad))
    return res


def formulas_of(result: SuiteResult) -> list[Formula]:
    return [case[1] for case in result.failures]
