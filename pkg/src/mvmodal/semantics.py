"""Crisp frames, A-valued models, evaluation, validity and global consequence.

Validity and consequence enumerate every valuation of the relevant
variables.  Valuations are numbered in mixed radix over the
``(variable, world)`` positions sorted lexicographically, first position
most significant, so the first counterexample reported is reproducible.
Enumeration is vectorized: two-element algebras evaluate all valuations of
a chunk at once as bitsets, larger algebras as numpy arrays.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import LatticeAlgebra, SignatureError
from .syntax import Dia, Formula, Op, Var, subformulas, var_from_name, var_sort_key, variables

__all__ = [
    "Frame", "Model", "Verdict", "DomainError", "EnumerationBudgetError",
    "DEFAULT_BUDGET", "evaluate", "evaluate_all", "evaluate_many", "globally_true",
    "frame_validates", "consequence_on_frames", "valuation_count",
    "classical_consequence_sat", "frame_to_text", "frame_from_text", "load_frame",
    "model_to_dict", "model_from_dict", "load_model",
]

DEFAULT_BUDGET = int(os.environ.get("MVMODAL_BUDGET", 10**7))


class DomainError(ValueError):
    """A variable is used that the valuation does not cover."""


class EnumerationBudgetError(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} valuations, budget is {budget}")
        self.required = required
        self.budget = budget


class Frame:
    """Worlds ``0 .. n-1`` with a crisp accessibility relation."""

    __slots__ = ("worlds", "edges", "succ", "_key")

    def __init__(self, worlds: int, edges: Iterable[tuple[int, int]] = ()):
        if worlds < 1:
            raise ValueError("a frame needs at least one world")
        edges = frozenset((int(a), int(b)) for a, b in edges)
        for a, b in edges:
            if not (0 <= a < worlds and 0 <= b < worlds):
                raise ValueError(f"edge {(a, b)} outside {worlds} worlds")
        self.worlds = worlds
        self.edges = edges
        self.succ = tuple(tuple(sorted(b for a, b in edges if a == w)) for w in range(worlds))
        self._key = (worlds, self.mask)

    @classmethod
    def from_mask(cls, worlds: int, mask: int) -> "Frame":
        """Edge ``(i, j)`` is bit ``i * worlds + j`` of ``mask``."""
        return cls(worlds, [(i, j) for i in range(worlds) for j in range(worlds)
                            if mask >> (i * worlds + j) & 1])

    @property
    def mask(self) -> int:
        return sum(1 << (a * self.worlds + b) for a, b in self.edges)

    def __eq__(self, other):
        return isinstance(other, Frame) and other._key == self._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Frame({self.worlds}, {sorted(self.edges)})"

    def is_reflexive(self) -> bool:
        return all((w, w) in self.edges for w in range(self.worlds))

    def is_transitive(self) -> bool:
        return all((a, c) in self.edges for a, b in self.edges for b2, c in self.edges if b == b2)

    def is_symmetric(self) -> bool:
        return all((b, a) in self.edges for a, b in self.edges)


@dataclass
class Model:
    """A frame, an algebra and a valuation ``var -> values per world``."""

    frame: Frame
    algebra: LatticeAlgebra
    valuation: dict = field(default_factory=dict)

    def __post_init__(self):
        fixed = {}
        for v, values in self.valuation.items():
            if isinstance(v, str):
                v = var_from_name(v)
            values = tuple(int(x) for x in values)
            if len(values) != self.frame.worlds:
                raise ValueError(f"valuation of {v.name} must give {self.frame.worlds} values")
            if any(not 0 <= x < self.algebra.size for x in values):
                raise ValueError(f"valuation of {v.name} leaves the carrier")
            fixed[v] = values
        self.valuation = fixed

    def value(self, v: Var, w: int) -> int:
        try:
            return self.valuation[v][w]
        except KeyError:
            raise DomainError(f"no valuation for {v.name}") from None


@dataclass
class Verdict:
    """Outcome of an exhaustive check; falsy when a counterexample exists."""

    holds: bool
    checked: int = 0
    counterexample: Optional[Model] = None
    frame_index: Optional[int] = None
    world: Optional[int] = None

    def __bool__(self):
        return self.holds


# ---------------------------------------------------------------- pointwise

def evaluate_many(model: Model, formulas: Sequence[Formula]) -> list:
    """Values at every world for several formulas, sharing common subterms."""
    alg, frame = model.algebra, model.frame
    worlds = range(frame.worlds)
    val: dict = {}
    for f in formulas:
        for node in subformulas(f):
            if node in val:
                continue
            if isinstance(node, Var):
                if node not in model.valuation:
                    raise DomainError(f"no valuation for {node.name}")
                val[node] = model.valuation[node]
            elif isinstance(node, Op):
                if len(node.args) != alg.arity(node.op):
                    raise SignatureError(f"{node.op!r} takes {alg.arity(node.op)} arguments")
                table = alg.table(node.op)
                if not node.args:
                    val[node] = (int(table),) * frame.worlds
                else:
                    cols = [val[c] for c in node.args]
                    val[node] = tuple(int(table[tuple(col[w] for col in cols)]) for w in worlds)
            else:
                inner = val[node.arg]
                if isinstance(node, Dia):
                    table, start = alg.join, alg.bottom
                else:
                    table, start = alg.meet, alg.top
                out = []
                for w in worlds:
                    acc = start
                    for v in frame.succ[w]:
                        acc = int(table[acc, inner[v]])
                    out.append(acc)
                val[node] = tuple(out)
    return [val[f] for f in formulas]


def evaluate_all(model: Model, f: Formula) -> tuple:
    """Truth values of ``f`` at every world of ``model``."""
    return evaluate_many(model, [f])[0]


def evaluate(model: Model, f: Formula, w: int) -> int:
    """``[[f]]`` at world ``w``."""
    return evaluate_all(model, f)[w]


def globally_true(model: Model, f: Formula) -> bool:
    return all(v == model.algebra.top for v in evaluate_all(model, f))


# ---------------------------------------------------------------- enumeration

def valuation_count(alg: LatticeAlgebra, n_vars: int, worlds: int) -> int:
    return alg.size ** (n_vars * worlds)


def _positions(vars_: Sequence[Var], worlds: int) -> list:
    return [(v, w) for v in sorted(vars_, key=var_sort_key) for w in range(worlds)]


def _bit_pattern(shift: int, width: int) -> int:
    """Bits ``k < 2**width`` set exactly when bit ``shift`` of ``k`` is set."""
    half = 1 << shift
    unit = ((1 << half) - 1) << half
    block = 2 * half
    total = 1 << width
    out = unit
    while block < total:
        out |= out << block
        block *= 2
    return out


class _Batch:
    """Evaluate formulas on one frame for a chunk of consecutive valuations."""

    def __init__(self, frame: Frame, alg: LatticeAlgebra, positions: list, low: int, chunk: int):
        self.frame, self.alg = frame, alg
        self.positions = positions
        self.P = len(positions)
        self.low = low
        self.chunk = chunk
        self.boolean = alg.size == 2
        self.C = alg.size ** low
        if self.boolean:
            self.mask = (1 << self.C) - 1
        r = np.arange(self.C, dtype=np.int64)
        high_digits = []
        c = chunk
        for _ in range(self.P - low):
            high_digits.append(c % alg.size)
            c //= alg.size
        high_digits.reverse()
        self.leaf = {}
        for i, (v, w) in enumerate(positions):
            shift = self.P - 1 - i
            if i >= self.P - low:
                if self.boolean:
                    bits = _bit_pattern(shift, low)
                    if alg.top == 0:
                        bits ^= self.mask
                    self.leaf[v, w] = bits
                else:
                    self.leaf[v, w] = (r // alg.size ** shift) % alg.size
            else:
                d = high_digits[i]
                if self.boolean:
                    self.leaf[v, w] = self.mask if d == alg.top else 0
                else:
                    self.leaf[v, w] = np.full(self.C, d, dtype=np.int64)
        self.memo: dict = {}

    def const(self, element: int):
        if self.boolean:
            return self.mask if element == self.alg.top else 0
        return np.full(self.C, element, dtype=np.int64)

    def values(self, f: Formula) -> list:
        """Per-world value vectors (bitsets of 'is top' in the Boolean case)."""
        alg, frame, memo = self.alg, self.frame, self.memo
        worlds = range(frame.worlds)
        for node in subformulas(f):
            if node in memo:
                continue
            if isinstance(node, Var):
                if (node, 0) not in self.leaf:
                    raise DomainError(f"no valuation for {node.name}")
                memo[node] = [self.leaf[node, w] for w in worlds]
            elif isinstance(node, Op):
                memo[node] = self._op(node, [memo[c] for c in node.args])
            else:
                inner = memo[node.arg]
                is_dia = isinstance(node, Dia)
                out = []
                for w in worlds:
                    succ = frame.succ[w]
                    if self.boolean:
                        if is_dia:
                            acc = 0
                            for v in succ:
                                acc |= inner[v]
                        else:
                            acc = self.mask
                            for v in succ:
                                acc &= inner[v]
                    else:
                        table = alg.join if is_dia else alg.meet
                        acc = self.const(alg.bottom if is_dia else alg.top)
                        for v in succ:
                            acc = table[acc, inner[v]]
                    out.append(acc)
                memo[node] = out
        return memo[f]

    def _op(self, node: Op, args: list) -> list:
        alg = self.alg
        arity = alg.arity(node.op)
        if len(args) != arity:
            raise SignatureError(f"{node.op!r} takes {arity} arguments")
        table = alg.table(node.op)
        worlds = range(self.frame.worlds)
        if arity == 0:
            return [self.const(int(table))] * self.frame.worlds
        if not self.boolean:
            return [table[tuple(a[w] for a in args)] for w in worlds]
        if node.op == "and":
            return [args[0][w] & args[1][w] for w in worlds]
        if node.op == "or":
            return [args[0][w] | args[1][w] for w in worlds]
        top = alg.top
        rows = [combo for combo in itertools.product(range(2), repeat=arity) if table[combo] == top]
        out = []
        for w in worlds:
            acc = 0
            for combo in rows:
                term = self.mask
                for a, digit in zip(args, combo):
                    term &= a[w] if digit == top else (self.mask ^ a[w])
                acc |= term
            out.append(acc)
        return out

    def globally_top(self, f: Formula):
        """Vector marking valuations where ``f`` is top at every world."""
        vals = self.values(f)
        if self.boolean:
            acc = self.mask
            for v in vals:
                acc &= v
            return acc
        acc = np.ones(self.C, dtype=bool)
        for v in vals:
            acc &= v == self.alg.top
        return acc

    def first(self, bad) -> Optional[int]:
        if self.boolean:
            return None if bad == 0 else (bad & -bad).bit_length() - 1
        idx = np.flatnonzero(bad)
        return int(idx[0]) if idx.size else None

    def model_at(self, r: int) -> Model:
        k = self.chunk * self.C + r
        digits = []
        for _ in range(self.P):
            digits.append(k % self.alg.size)
            k //= self.alg.size
        digits.reverse()
        val: dict = {}
        for (v, w), d in zip(self.positions, digits):
            val.setdefault(v, [0] * self.frame.worlds)[w] = d
        return Model(self.frame, self.alg, {v: tuple(x) for v, x in val.items()})


def _chunks(frame: Frame, alg: LatticeAlgebra, vars_: Sequence[Var], budget: int):
    positions = _positions(vars_, frame.worlds)
    total = alg.size ** len(positions)
    if total > budget:
        raise EnumerationBudgetError(total, budget)
    limit = 20 if alg.size == 2 else 16
    low = 0
    while low < len(positions) and alg.size ** (low + 1) <= 2 ** limit:
        low += 1
    n_chunks = alg.size ** (len(positions) - low)
    for c in range(n_chunks):
        yield _Batch(frame, alg, positions, low, c)


def _check(frames, alg, premises, conclusion, budget) -> Verdict:
    formulas = list(premises) + [conclusion]
    vars_ = sorted({v for f in formulas for v in variables(f)}, key=var_sort_key)
    checked = 0
    for index, frame in enumerate(frames):
        for batch in _chunks(frame, alg, vars_, budget):
            ok = batch.globally_top(conclusion)
            if batch.boolean:
                bad = batch.mask ^ ok
                for p in premises:
                    bad &= batch.globally_top(p)
            else:
                bad = ~ok
                for p in premises:
                    bad &= batch.globally_top(p)
            r = batch.first(bad)
            if r is not None:
                model = batch.model_at(r)
                values = evaluate_all(model, conclusion)
                world = next(w for w, v in enumerate(values) if v != alg.top)
                return Verdict(False, checked + r + 1, model, index, world)
            checked += batch.C
    return Verdict(True, checked)


def frame_validates(frame: Frame, alg: LatticeAlgebra, f: Formula,
                    budget: int = DEFAULT_BUDGET) -> Verdict:
    """Whether every valuation on ``frame`` makes ``f`` globally true."""
    return _check([frame], alg, [], f, budget)


def consequence_on_frames(frames: Sequence[Frame], alg: LatticeAlgebra,
                          premises: Iterable[Formula], conclusion: Formula,
                          budget: int = DEFAULT_BUDGET, method: str = "enumerate") -> Verdict:
    """Global consequence over the listed frames.

    ``method="enumerate"`` walks all valuations; ``"sat"`` (two-element
    algebras only) asks a SAT solver for a model of the premises refuting
    the conclusion on each frame; ``"auto"`` enumerates within budget and
    falls back to SAT otherwise.
    """
    premises = list(premises)
    if method == "enumerate":
        return _check(frames, alg, premises, conclusion, budget)
    if method not in ("sat", "auto"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        vars_ = {v for f in premises + [conclusion] for v in variables(f)}
        if all(valuation_count(alg, len(vars_), fr.worlds) <= budget for fr in frames):
            return _check(frames, alg, premises, conclusion, budget)
    if alg.size != 2:
        raise SignatureError("the SAT route handles two-element algebras only")
    for index, frame in enumerate(frames):
        verdict = classical_consequence_sat(frame, premises, conclusion, alg)
        if not verdict:
            verdict.frame_index = index
            return verdict
    return Verdict(True)


# ---------------------------------------------------------------- SAT route

class _Tseitin:
    def __init__(self, frame: Frame):
        self.frame = frame
        self.clauses: list = []
        self.n = 0
        self.lit: dict = {}
        self.letters: dict = {}
        self.true = self.fresh()
        self.clauses.append([self.true])

    def fresh(self) -> int:
        self.n += 1
        return self.n

    def _and(self, lits):
        if not lits:
            return self.true
        if len(lits) == 1:
            return lits[0]
        out = self.fresh()
        for a in lits:
            self.clauses.append([-out, a])
        self.clauses.append([out] + [-a for a in lits])
        return out

    def _or(self, lits):
        if not lits:
            return -self.true
        if len(lits) == 1:
            return lits[0]
        out = self.fresh()
        for a in lits:
            self.clauses.append([out, -a])
        self.clauses.append([-out] + list(lits))
        return out

    def encode(self, f: Formula) -> list:
        worlds = range(self.frame.worlds)
        for node in subformulas(f):
            if node in self.lit:
                continue
            if isinstance(node, Var):
                lits = []
                for w in worlds:
                    if (node, w) not in self.letters:
                        self.letters[node, w] = self.fresh()
                    lits.append(self.letters[node, w])
            elif isinstance(node, Op):
                args = [self.lit[c] for c in node.args]
                if node.op == "1" and not args:
                    lits = [self.true] * len(worlds)
                elif node.op == "0" and not args:
                    lits = [-self.true] * len(worlds)
                elif node.op == "not" and len(args) == 1:
                    lits = [-x for x in args[0]]
                elif node.op == "and" and len(args) == 2:
                    lits = [self._and([args[0][w], args[1][w]]) for w in worlds]
                elif node.op == "or" and len(args) == 2:
                    lits = [self._or([args[0][w], args[1][w]]) for w in worlds]
                else:
                    raise SignatureError(f"SAT route does not support {node.op!r}")
            else:
                inner = self.lit[node.arg]
                build = self._or if isinstance(node, Dia) else self._and
                lits = [build([inner[v] for v in self.frame.succ[w]]) for w in worlds]
            self.lit[node] = lits
        return self.lit[f]


def classical_consequence_sat(frame: Frame, premises: Sequence[Formula], conclusion: Formula,
                              alg: Optional[LatticeAlgebra] = None) -> Verdict:
    """Two-valued global consequence on one frame, decided by SAT."""
    from pysat.solvers import Solver

    from .algebra import boolean_power

    alg = alg or boolean_power(1)
    enc = _Tseitin(frame)
    for p in premises:
        for lit in enc.encode(p):
            enc.clauses.append([lit])
    concl = enc.encode(conclusion)
    enc.clauses.append([-lit for lit in concl])
    with Solver(name="m22", bootstrap_with=enc.clauses) as solver:
        if not solver.solve():
            return Verdict(True)
        model = set(x for x in solver.get_model() if x > 0)
    vars_ = sorted({v for v, _ in enc.letters}, key=var_sort_key)
    top, bottom = alg.top, alg.bottom
    valuation = {v: tuple(top if enc.letters[v, w] in model else bottom
                          for w in range(frame.worlds)) for v in vars_}
    m = Model(frame, alg, valuation)
    holds = [(x in model) if x > 0 else (-x not in model) for x in concl]
    world = holds.index(False)
    return Verdict(False, 0, m, 0, world)


# ---------------------------------------------------------------- file formats
#
# Frame file (text): blank lines and '#' comments are ignored; the first
# line is "worlds N", every further line "i j" is an edge i -> j.
#
# Model file (JSON): {"algebra": name, path or inline algebra object,
#                     "frame": frame-file path or {"worlds": N, "edges": [[i, j], ...]},
#                     "valuation": {"p1": [v0, v1, ...], "p3@2": [...]}}
# Values are element indices or labels.  Relative paths resolve against
# the model file's directory.

def frame_to_text(frame: Frame) -> str:
    lines = [f"worlds {frame.worlds}"] + [f"{i} {j}" for i, j in sorted(frame.edges)]
    return "\n".join(lines) + "\n"


def frame_from_text(text: str) -> Frame:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows or rows[0][1][0] != "worlds" or len(rows[0][1]) != 2:
        raise ValueError("a frame file starts with 'worlds N'")
    try:
        n = int(rows[0][1][1])
    except ValueError:
        raise ValueError(f"line {rows[0][0]}: world count must be an integer") from None
    edges = []
    for lineno, parts in rows[1:]:
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"line {lineno}: expected an edge 'i j'")
        i, j = int(parts[0]), int(parts[1])
        if not (i < n and j < n):
            raise ValueError(f"line {lineno}: edge {i} {j} outside {n} worlds")
        edges.append((i, j))
    return Frame(n, edges)


def load_frame(path) -> Frame:
    with open(path, encoding="utf-8") as fh:
        return frame_from_text(fh.read())


def model_to_dict(model: Model, algebra_ref=None) -> dict:
    """``algebra_ref`` (a name or path) replaces the inline algebra object."""
    from .algebra import algebra_to_dict

    alg = model.algebra
    return {
        "algebra": algebra_ref if algebra_ref is not None else algebra_to_dict(alg),
        "frame": {"worlds": model.frame.worlds, "edges": [list(e) for e in sorted(model.frame.edges)]},
        "valuation": {v.name: [alg.labels[x] for x in vals]
                      for v, vals in sorted(model.valuation.items(), key=lambda kv: var_sort_key(kv[0]))},
    }


def model_from_dict(data: dict, base_dir: str = ".") -> Model:
    from .algebra import algebra_from_dict, resolve_algebra

    def local(ref: str) -> str:
        path = os.path.join(base_dir, ref)
        return path if os.path.exists(path) else ref

    ref = data.get("algebra")
    if isinstance(ref, dict):
        alg = algebra_from_dict(ref)
    elif isinstance(ref, str):
        alg = resolve_algebra(local(ref))
    else:
        raise ValueError("a model needs an 'algebra' name, path or object")
    fr = data.get("frame")
    if isinstance(fr, dict):
        frame = Frame(int(fr["worlds"]), [tuple(e) for e in fr.get("edges", [])])
    elif isinstance(fr, str):
        frame = load_frame(local(fr))
    else:
        raise ValueError("a model needs a 'frame' path or object")
    valuation = {name: [alg.element(str(x)) for x in vals]
                 for name, vals in (data.get("valuation") or {}).items()}
    return Model(frame, alg, valuation)


def load_model(path) -> Model:
    import json

    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return model_from_dict(data, os.path.dirname(os.path.abspath(path)))
