"""Translations between A-valued and classical modal logic.

``translate_value(alg, f, a)`` is a classical formula over tagged letters
``p@a`` that holds at a world of the star model exactly when ``f`` takes
value ``a`` there.  The modal clauses range over subsets of the carrier:
a subset ``S`` witnesses value ``a`` for ``dia f`` when its join is ``a``
and every element of ``S`` is attained at some successor, while all
successors stay below ``a``.  The empty subset is allowed, so dead-end
worlds get ``dia f = 0`` and ``box f = 1``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional

from .algebra import (
    LatticeAlgebra, PreconditionError, SignatureError, UnaryTerm, boolean_power,
    eq_kernel, inf_set, quotient, sup_set, term_function,
)
from .semantics import Model, evaluate_many
from .syntax import (
    BOT, TOP, Box, Dia, Formula, Op, Var, box_power, conj, disj, modal_rank, neg,
    subformulas, var_sort_key, variables,
)

__all__ = [
    "Translator", "translate_value", "star_letter", "star_model", "switch_table",
    "switch_check", "exactly_one_violations", "tstar_theory", "reconstruct_model",
    "phi_star", "interpret_classical", "t_wrap", "image_algebra", "transported_model",
    "commutation_failures", "power_components", "componentwise_failures", "simplify",
    "witness_subsets",
]


def star_letter(v: Var, a: int) -> Var:
    return Var(v.name, a)


def witness_subsets(alg: LatticeAlgebra, a: int, dia: bool, minimal: bool = True) -> list:
    """Subsets (sorted tuples, the empty one included) whose join (meet) is ``a``.

    Within ``{b <= a}`` (``{b >= a}`` for meets) every superset of such a
    subset is one too, so the inclusion-minimal subsets give an equivalent,
    shorter disjunction; ``minimal=False`` lists them all.
    """
    out = []
    elements = list(alg.elements)
    for k in range(len(elements) + 1):
        for subset in itertools.combinations(elements, k):
            bound = sup_set(alg, subset) if dia else inf_set(alg, subset)
            if bound == a and not (minimal and any(set(s) <= set(subset) for s in out)):
                out.append(subset)
    return out


def modal_clause(letter, sets: list, bound: list, dia: bool = True) -> Formula:
    """``(OR over sets of AND dia letter(b)) & box(OR letter(b) over bound)``.

    The empty witness set makes the first conjunct true, and it is dropped.
    """
    boxed = Box(disj(letter(b) for b in bound))
    if () in sets:
        return boxed
    witnesses = disj(conj(Dia(letter(b)) for b in s) for s in sets)
    return Op("and", (witnesses, boxed))


class Translator:
    """Memoizing translator for one algebra; reuse it across formulas."""

    def __init__(self, alg: LatticeAlgebra):
        self.alg = alg
        self.memo: dict = {}
        self._dia = {a: witness_subsets(alg, a, True) for a in alg.elements}
        self._box = {a: witness_subsets(alg, a, False) for a in alg.elements}
        self._preimages: dict = {}

    def _tuples(self, op: str, a: int) -> list:
        key = (op, a)
        if key not in self._preimages:
            arity = self.alg.arity(op)
            table = self.alg.table(op)
            if arity == 0:
                rows = [()] if int(table) == a else []
            else:
                rows = [b for b in itertools.product(self.alg.elements, repeat=arity)
                        if table[b] == a]
            self._preimages[key] = rows
        return self._preimages[key]

    def __call__(self, f: Formula, a: int) -> Formula:
        if not 0 <= a < self.alg.size:
            raise ValueError(f"value {a} outside the carrier of {self.alg.name}")
        for node in subformulas(f):
            if (node, 0) in self.memo:
                continue
            for b in self.alg.elements:
                self.memo[node, b] = self._clause(node, b)
        return self.memo[f, a]

    def _clause(self, node: Formula, a: int) -> Formula:
        alg, T = self.alg, self.memo
        if isinstance(node, Var):
            return star_letter(node, a)
        if isinstance(node, Op):
            if len(node.args) != alg.arity(node.op):
                raise SignatureError(f"{node.op!r} takes {alg.arity(node.op)} arguments")
            return disj(conj(T[c, b] for c, b in zip(node.args, row))
                        for row in self._tuples(node.op, a))
        inner = node.arg
        letter = lambda b: T[inner, b]  # noqa: E731
        if isinstance(node, Dia):
            return modal_clause(letter, self._dia[a], [b for b in alg.elements if alg.leq[b, a]])
        return modal_clause(letter, self._box[a], [b for b in alg.elements if alg.leq[a, b]])


def translate_value(alg: LatticeAlgebra, f: Formula, a: int, simplified: bool = False) -> Formula:
    out = Translator(alg)(f, a)
    return simplify(out) if simplified else out


def simplify(f: Formula) -> Formula:
    """Drop neutral constants, absorb dominant ones, merge duplicate operands."""
    memo: dict = {}
    for node in subformulas(f):
        if isinstance(node, Var) or (isinstance(node, Op) and not node.args):
            memo[node] = node
        elif isinstance(node, Op) and node.op in ("and", "or") and len(node.args) == 2:
            a, b = (memo[c] for c in node.args)
            unit, zero = (TOP, BOT) if node.op == "and" else (BOT, TOP)
            if a == zero or b == zero:
                memo[node] = zero
            elif a == unit:
                memo[node] = b
            elif b == unit or a == b:
                memo[node] = a
            else:
                memo[node] = Op(node.op, (a, b))
        elif isinstance(node, Op) and node.op == "not" and len(node.args) == 1:
            a = memo[node.args[0]]
            if a == TOP:
                memo[node] = BOT
            elif a == BOT:
                memo[node] = TOP
            elif isinstance(a, Op) and a.op == "not":
                memo[node] = a.args[0]
            else:
                memo[node] = Op("not", (a,))
        elif isinstance(node, Op):
            memo[node] = Op(node.op, [memo[c] for c in node.args])
        elif isinstance(node, Box):
            a = memo[node.arg]
            memo[node] = TOP if a == TOP else Box(a)
        else:
            a = memo[node.arg]
            memo[node] = BOT if a == BOT else Dia(a)
    return memo[f]


# ---------------------------------------------------------------- star models

def star_model(model: Model) -> Model:
    """Two-valued model with ``p@a`` true at ``w`` iff ``V(p, w) = a``."""
    two = boolean_power(1)
    valuation = {}
    for v in sorted(model.valuation, key=var_sort_key):
        values = model.valuation[v]
        for a in model.algebra.elements:
            valuation[star_letter(v, a)] = tuple(two.top if x == a else two.bottom for x in values)
    return Model(model.frame, two, valuation)


def switch_table(model: Model, f: Formula, translator: Optional[Translator] = None):
    """Values of ``f`` per world and the truth of every ``T^a(f)`` in the star model."""
    tr = translator or Translator(model.algebra)
    values = evaluate_many(model, [f])[0]
    star = star_model(model)
    translated = [tr(f, a) for a in model.algebra.elements]
    truth = evaluate_many(star, translated)
    top = star.algebra.top
    return values, [tuple(x == top for x in row) for row in truth]


def switch_check(model: Model, f: Formula, translator: Optional[Translator] = None) -> bool:
    """``[[f]]_w = a`` iff the star model satisfies ``T^a(f)`` at ``w``, for all ``w, a``."""
    values, truth = switch_table(model, f, translator)
    return all(truth[a][w] == (values[w] == a)
               for a in model.algebra.elements for w in range(model.frame.worlds))


def exactly_one_violations(model: Model, f: Formula, translator: Optional[Translator] = None) -> list:
    """Worlds where the number of tags ``a`` with ``T^a(f)`` true is not one."""
    _, truth = switch_table(model, f, translator)
    return [w for w in range(model.frame.worlds) if sum(row[w] for row in truth) != 1]


def tstar_theory(alg: LatticeAlgebra, vars_: Iterable[Var]) -> list:
    """Exactly-one-value axioms, ordered by variable then element."""
    out = []
    for v in sorted(set(vars_), key=var_sort_key):
        letters = [star_letter(v, a) for a in alg.elements]
        out.append(disj(letters))
        for a, b in itertools.combinations(alg.elements, 2):
            out.append(neg(conj([letters[a], letters[b]])))
    return out


def reconstruct_model(classical: Model, alg: LatticeAlgebra, vars_: Iterable[Var]) -> Model:
    """The A-valued model whose star model agrees with ``classical`` on ``vars_``."""
    top = classical.algebra.top
    valuation = {}
    for v in sorted(set(vars_), key=var_sort_key):
        values = []
        for w in range(classical.frame.worlds):
            hits = [a for a in alg.elements if classical.value(star_letter(v, a), w) == top]
            if len(hits) != 1:
                raise PreconditionError(
                    f"exactly-one axiom fails for {v.name} at world {w}: true tags {hits}")
            values.append(hits[0])
        valuation[v] = tuple(values)
    return Model(classical.frame, alg, valuation)


def phi_star(alg: LatticeAlgebra, f: Formula, translator: Optional[Translator] = None) -> Formula:
    """Classical formula 2-defining the frames on which ``f`` is A-valid."""
    tr = translator or Translator(alg)
    target = tr(f, alg.top)
    axioms = conj(tstar_theory(alg, variables(f)))
    guards = [neg(box_power(m, axioms)) for m in range(modal_rank(target) + 1)]
    return disj(guards + [target])


# ---------------------------------------------------------------- classical into A

def interpret_classical(f: Formula, negation: UnaryTerm) -> Formula:
    """Read a classical formula in A, with ``~`` becoming the negation term."""
    memo: dict = {}
    for node in subformulas(f):
        if isinstance(node, Var):
            memo[node] = node
        elif isinstance(node, Dia):
            memo[node] = Dia(memo[node.arg])
        elif isinstance(node, Box):
            memo[node] = Box(memo[node.arg])
        elif node.op == "not" and len(node.args) == 1:
            memo[node] = negation.apply_to(memo[node.args[0]])
        elif node.op in ("and", "or") and len(node.args) == 2:
            memo[node] = Op(node.op, [memo[c] for c in node.args])
        elif node.op in ("0", "1") and not node.args:
            memo[node] = node
        else:
            raise SignatureError(f"classical formulas may not use {node.op!r}")
    return memo[f]


def t_wrap(term: UnaryTerm, g: Formula) -> Formula:
    return term.apply_to(g)


def image_algebra(alg: LatticeAlgebra, term: UnaryTerm, negation: Optional[UnaryTerm] = None):
    """The algebra induced on ``t(A)`` and the element of ``A`` behind each index.

    Index ``i`` of the returned algebra stands for the ``i``-th block of
    ``Eq(t)``, whose members all share the value ``elements[i]`` under ``t``.
    """
    part = eq_kernel(alg, term)
    quo = quotient(alg, part, negation or alg.negation)
    fn = term_function(alg, term)
    elements = [fn[block[0]] for block in part.blocks]
    quo.labels = [alg.labels[e] for e in elements]
    quo.name = f"{alg.name}|{term}"
    return quo, elements


def transported_model(model: Model, term: UnaryTerm, negation: Optional[UnaryTerm] = None):
    """The model with valuation ``t o V`` over the image algebra."""
    quo, elements = image_algebra(model.algebra, term, negation)
    part = eq_kernel(model.algebra, term).block_of
    valuation = {v: tuple(part[x] for x in vals) for v, vals in model.valuation.items()}
    return Model(model.frame, quo, valuation), elements


def commutation_failures(model: Model, psi: Formula, term: UnaryTerm,
                         negation: Optional[UnaryTerm] = None) -> list:
    """Worlds where the image-model value of ``psi``, ``t([[psi]])`` and
    ``[[t(psi)]]`` do not all coincide (``psi`` classical)."""
    u = negation or model.algebra.negation
    moved, elements = transported_model(model, term, u)
    in_a = interpret_classical(psi, u)
    plain, wrapped = evaluate_many(model, [in_a, t_wrap(term, in_a)])
    image = evaluate_many(moved, [psi])[0]
    fn = term_function(model.algebra, term)
    return [w for w in range(model.frame.worlds)
            if not (elements[image[w]] == fn[plain[w]] == wrapped[w])]


def power_components(model: Model) -> list:
    """Split a model over ``2^n`` (bit masks) into its ``n`` coordinate models."""
    alg = model.algebra
    n = alg.size.bit_length() - 1
    if alg.size != 1 << n or alg.bottom != 0 or alg.top != alg.size - 1:
        raise ValueError(f"{alg.name} is not a Boolean power in bit-mask form")
    two = boolean_power(1)
    return [Model(model.frame, two, {v: tuple(x >> i & 1 for x in vals)
                                     for v, vals in model.valuation.items()})
            for i in range(n)]


def componentwise_failures(model: Model, f: Formula) -> list:
    """Worlds where ``[[f]]`` differs from the tuple of coordinate values."""
    whole = evaluate_many(model, [f])[0]
    parts = [evaluate_many(m, [f])[0] for m in power_components(model)]
    return [w for w in range(model.frame.worlds)
            if whole[w] != sum(p[w] << i for i, p in enumerate(parts))]
