"""Polynomial-size reduction of A-valued consequence to classical consequence.

Every subformula ``psi`` gets one family of fresh letters ``q[i]@a``
(``i`` its position in the shared subformula list), and an equivalence
``E(psi)`` per element ``a`` ties ``q[i]@a`` to the letters of the
immediate subformulas.  Shared subformulas share a family, which is what
keeps the output polynomial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import LatticeAlgebra, PreconditionError
from .semantics import Model, evaluate_many
from .syntax import (
    Dia, Formula, Op, Var, box_power, conj, disj, iff, implies, modal_rank,
    neg, size, subformulas,
)
from .translation import modal_clause, witness_subsets

__all__ = [
    "DefinitionalTheory", "q_letter", "e_axioms", "reduce_consequence",
    "reduce_validity", "definitional_model", "decode_assignment",
]


def q_letter(index: int, a: int) -> Var:
    return Var(f"q[{index}]", a)


@dataclass
class DefinitionalTheory:
    algebra: LatticeAlgebra
    index: dict = field(default_factory=dict)
    exactly_one: list = field(default_factory=list)
    equivalences: dict = field(default_factory=dict)

    def letter(self, f: Formula, a: int) -> Var:
        return q_letter(self.index[f], a)

    @property
    def subformulas(self) -> list:
        return sorted(self.index, key=self.index.get)

    def axioms(self) -> list:
        """Exactly-one axioms first, then ``E`` by subformula and element."""
        return self.exactly_one + [self.equivalences[key] for key in sorted(
            self.equivalences, key=lambda k: (self.index[k[0]], k[1]))]

    def max_axiom_size(self) -> int:
        return max((size(ax) for ax in self.equivalences.values()), default=0)


def e_axioms(alg: LatticeAlgebra, formulas: Iterable[Formula]) -> DefinitionalTheory:
    """Definitional theory for every subformula of ``formulas``."""
    if isinstance(formulas, Formula):
        formulas = [formulas]
    theory = DefinitionalTheory(alg)
    for f in formulas:
        for node in subformulas(f):
            theory.index.setdefault(node, len(theory.index))
    E = list(alg.elements)
    q = theory.letter
    dia_sets = {a: witness_subsets(alg, a, True) for a in E}
    box_sets = {a: witness_subsets(alg, a, False) for a in E}
    for node in theory.subformulas:
        if isinstance(node, Var):
            letters = [q(node, a) for a in E]
            theory.exactly_one.append(disj(letters))
            for a, b in itertools.combinations(E, 2):
                theory.exactly_one.append(neg(conj([letters[a], letters[b]])))
            continue
        for a in E:
            if isinstance(node, Op):
                table = alg.table(node.op)
                arity = alg.arity(node.op)
                rows = ([()] if int(table) == a else []) if arity == 0 else [
                    b for b in itertools.product(E, repeat=arity) if table[b] == a]
                rhs = disj(conj(q(c, b) for c, b in zip(node.args, row)) for row in rows)
            else:
                inner = node.arg
                letter = lambda b: q(inner, b)  # noqa: E731
                if isinstance(node, Dia):
                    rhs = modal_clause(letter, dia_sets[a], [b for b in E if alg.leq[b, a]])
                else:
                    rhs = modal_clause(letter, box_sets[a], [b for b in E if alg.leq[a, b]])
            theory.equivalences[node, a] = iff(q(node, a), rhs)
    return theory


def reduce_consequence(alg: LatticeAlgebra, premises: Sequence[Formula], conclusion: Formula):
    """Classical premises and conclusion equivalent to ``premises |= conclusion``
    over any class of frames."""
    premises = list(premises)
    theory = e_axioms(alg, premises + [conclusion])
    classical = [theory.letter(p, alg.top) for p in premises] + theory.axioms()
    return classical, theory.letter(conclusion, alg.top)


def reduce_validity(alg: LatticeAlgebra, f: Formula) -> Formula:
    """A classical formula that is valid on a frame class iff ``f`` is A-valid there."""
    theory = e_axioms(alg, [f])
    body = conj(theory.axioms())
    guard = conj(box_power(m, body) for m in range(modal_rank(f) + 1))
    return implies(guard, theory.letter(f, alg.top))


def definitional_model(model: Model, theory: DefinitionalTheory) -> Model:
    """Classical model making ``q[i]@a`` true exactly where subformula ``i`` has value ``a``."""
    from .algebra import boolean_power

    two = boolean_power(1)
    subs = theory.subformulas
    values = evaluate_many(model, subs)
    valuation = {}
    for node, vals in zip(subs, values):
        for a in model.algebra.elements:
            valuation[theory.letter(node, a)] = tuple(int(x == a) for x in vals)
    return Model(model.frame, two, valuation)


def decode_assignment(classical: Model, theory: DefinitionalTheory) -> dict:
    """The unique tag true for each (subformula, world); errors if not unique."""
    top = classical.algebra.top
    out = {}
    for node in theory.subformulas:
        for w in range(classical.frame.worlds):
            hits = [a for a in theory.algebra.elements
                    if classical.value(theory.letter(node, a), w) == top]
            if len(hits) != 1:
                raise PreconditionError(f"subformula {node} has tags {hits} at world {w}")
            out[node, w] = hits[0]
    return out
