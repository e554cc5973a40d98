"""A tableau decision procedure for the basic modal logic K.

Formulas are put in negation normal form, each world is saturated
propositionally (conjunctions first, disjunctions with a single live
disjunct are forced, then the leftmost pending disjunction is split with
the complement of its left disjunct on the right branch), and only then is a successor opened for every
``dia`` formula together with all ``box`` bodies.  No loop check is
needed: successor labels have strictly smaller modal rank.  The model
returned on success is the tree read off the first open branch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import SignatureError, boolean_power
from .semantics import Frame, Model
from .syntax import BOT, TOP, Box, Dia, Formula, Op, Var, neg, subformulas, var_sort_key, variables

__all__ = ["TableauResult", "ValidityResult", "TableauBudgetError", "nnf", "k_tableau_sat", "k_valid", "ENGINES"]


class TableauBudgetError(RuntimeError):
    pass


def nnf(f: Formula) -> Formula:
    """Negation normal form over ``and``, ``or``, ``dia``, ``box``, literals and bounds."""
    memo: dict = {}

    def go(node: Formula, positive: bool) -> Formula:
        key = (node, positive)
        if key in memo:
            return memo[key]
        if isinstance(node, Var):
            out = node if positive else neg(node)
        elif isinstance(node, Dia):
            inner = go(node.arg, positive)
            out = Dia(inner) if positive else Box(inner)
        elif isinstance(node, Box):
            inner = go(node.arg, positive)
            out = Box(inner) if positive else Dia(inner)
        elif node.op == "not" and len(node.args) == 1:
            out = go(node.args[0], not positive)
        elif node.op in ("and", "or") and len(node.args) == 2:
            op = node.op if positive else ("or" if node.op == "and" else "and")
            out = Op(op, [go(c, positive) for c in node.args])
        elif node.op in ("0", "1") and not node.args:
            out = node if positive else (BOT if node.op == "1" else TOP)
        else:
            raise SignatureError(f"the K tableau handles classical formulas only, found {node.op!r}")
        memo[key] = out
        return out

    for sub in subformulas(f):
        go(sub, True)
        go(sub, False)
    return go(f, True)


@dataclass
class _World:
    true_letters: frozenset
    children: list = field(default_factory=list)


@dataclass
class TableauResult:
    satisfiable: bool
    model: Optional[Model] = None
    nodes: int = 0

    def __bool__(self):
        return self.satisfiable


class _Prover:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0
        self.cache: dict = {}
        self.duals: dict = {}

    def dual(self, f: Formula) -> Formula:
        """NNF of the negation of an NNF formula."""
        if f in self.duals:
            return self.duals[f]
        if isinstance(f, Var):
            out = neg(f)
        elif isinstance(f, Dia):
            out = Box(self.dual(f.arg))
        elif isinstance(f, Box):
            out = Dia(self.dual(f.arg))
        elif f.op == "not":
            out = f.args[0]
        elif f.op in ("and", "or"):
            out = Op("or" if f.op == "and" else "and", [self.dual(c) for c in f.args])
        else:
            out = BOT if f.op == "1" else TOP
        self.duals[f] = out
        return out

    def world(self, label: frozenset) -> Optional[_World]:
        if label in self.cache:
            return self.cache[label]
        out = self._open(sorted(label, key=str), frozenset(), frozenset(), frozenset(), (), ())
        self.cache[label] = out
        return out

    def _closed(self, f, seen, pos, negs) -> bool:
        if isinstance(f, Var):
            return f in negs
        if isinstance(f, Op):
            if f.op == "0":
                return True
            if f.op == "not":
                return f.args[0] in pos
        return self.dual(f) in seen

    def _open(self, queue, seen, pos, negs, betas, modal) -> Optional[_World]:
        self.nodes += 1
        if self.nodes > self.budget:
            raise TableauBudgetError(f"tableau exceeded {self.budget} nodes")
        queue = list(queue)
        while True:
            while queue:
                f = queue.pop(0)
                if f in seen:
                    continue
                seen = seen | {f}
                if isinstance(f, Var):
                    if f in negs:
                        return None
                    pos = pos | {f}
                elif isinstance(f, (Dia, Box)):
                    modal = modal + (f,)
                elif f.op == "not":
                    if f.args[0] in pos:
                        return None
                    negs = negs | {f.args[0]}
                elif f.op == "and":
                    queue.extend(f.args)
                elif f.op == "or":
                    betas = betas + (f,)
                elif f.op == "0":
                    return None
            # unit propagation: a disjunction with one live disjunct is forced
            pending = []
            for beta in betas:
                if any(d in seen for d in beta.args):
                    continue
                live = [d for d in beta.args if not self._closed(d, seen, pos, negs)]
                if not live:
                    return None
                if len(live) == 1:
                    queue.append(live[0])
                    break
                pending.append(beta)
            if not queue:
                break
        if pending:
            beta = pending[0]
            rest = tuple(b for b in betas if b is not beta)
            left, right = beta.args
            for branch in ([left], [self.dual(left), right]):
                found = self._open(branch, seen, pos, negs, rest, modal)
                if found is not None:
                    return found
            return None
        boxes = [m.arg for m in modal if isinstance(m, Box)]
        node = _World(pos)
        for m in modal:
            if isinstance(m, Dia):
                child = self.world(frozenset([m.arg, *boxes]))
                if child is None:
                    return None
                node.children.append(child)
        return node


def _to_model(root: _World, letters: list) -> Model:
    two = boolean_power(1)
    worlds, edges, stack = [], [], [(root, None)]
    while stack:
        node, parent = stack.pop(0)
        index = len(worlds)
        worlds.append(node)
        if parent is not None:
            edges.append((parent, index))
        stack.extend((c, index) for c in node.children)
    frame = Frame(len(worlds), edges)
    valuation = {v: tuple(int(v in w.true_letters) for w in worlds) for v in letters}
    return Model(frame, two, valuation)


class _SatEngine:
    """Per-world propositional search by a SAT solver.

    Modal formulas are opaque atoms of the world's propositional skeleton;
    when a successor demanded by a true ``dia`` closes, the combination of
    that ``dia`` with the true ``box`` atoms is blocked and the world is
    searched again.  Successor labels are cached as in the tableau.
    """

    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0
        self.cache: dict = {}

    def world(self, label: frozenset) -> Optional[_World]:
        if label in self.cache:
            return self.cache[label]
        out = self._search(label)
        self.cache[label] = out
        return out

    def _search(self, label: frozenset) -> Optional[_World]:
        from pysat.solvers import Solver

        ids: dict = {}
        clauses: list = []

        def lit(f: Formula) -> int:
            # positive occurrences only, so one-directional definitions suffice
            if isinstance(f, Op) and f.op == "not":
                return -atom(f.args[0])
            if isinstance(f, (Var, Dia, Box)):
                return atom(f)
            if f in ids:
                return ids[f]
            x = ids[f] = len(ids) + 1
            if f.op == "1":
                clauses.append([x])
            elif f.op == "0":
                clauses.append([-x])
            elif f.op == "and":
                clauses.extend([-x, lit(c)] for c in f.args)
            else:
                clauses.append([-x] + [lit(c) for c in f.args])
            return x

        def atom(f: Formula) -> int:
            if f not in ids:
                ids[f] = len(ids) + 1
            return ids[f]

        for f in sorted(label, key=str):
            clauses.append([lit(f)])
        modal = [f for f in ids if isinstance(f, (Dia, Box))]
        with Solver(name="m22", bootstrap_with=clauses) as solver:
            solver.set_phases([-ids[f] for f in ids])
            while True:
                self.nodes += 1
                if self.nodes > self.budget:
                    raise TableauBudgetError(f"search exceeded {self.budget} nodes")
                if not solver.solve():
                    return None
                true = {v for v in solver.get_model() if v > 0}
                boxes = [f for f in modal if isinstance(f, Box) and ids[f] in true]
                node = _World(frozenset(f for f in ids if isinstance(f, Var) and ids[f] in true))
                for d in modal:
                    if isinstance(d, Dia) and ids[d] in true:
                        child = self.world(frozenset([d.arg, *(b.arg for b in boxes)]))
                        if child is None:
                            solver.add_clause([-ids[d]] + [-ids[b] for b in boxes])
                            break
                        node.children.append(child)
                else:
                    return node


ENGINES = {"tableau": _Prover, "sat": _SatEngine}


def k_tableau_sat(f: Formula, budget: int = 200_000, engine: str = "tableau") -> TableauResult:
    """Satisfiability in K; on success the model's world 0 satisfies ``f``."""
    try:
        prover = ENGINES[engine](budget)
    except KeyError:
        raise ValueError(f"unknown engine {engine!r}; choose from {sorted(ENGINES)}") from None
    root = prover.world(frozenset([nnf(f)]))
    if root is None:
        return TableauResult(False, None, prover.nodes)
    letters = sorted(variables(f), key=var_sort_key)
    return TableauResult(True, _to_model(root, letters), prover.nodes)


@dataclass
class ValidityResult:
    valid: bool
    countermodel: Optional[Model] = None
    nodes: int = 0

    def __bool__(self):
        return self.valid


def k_valid(f: Formula, budget: int = 200_000, engine: str = "tableau") -> ValidityResult:
    """Validity as unsatisfiability of the negation; world 0 of the
    countermodel refutes ``f``."""
    res = k_tableau_sat(neg(f), budget, engine)
    return ValidityResult(not res.satisfiable, res.model, res.nodes)
