"""Finite lattice algebras, unary terms, congruence kernels and quotients.

Elements are the integers ``0 .. n-1``.  Every algebra carries its lattice
order, meet/join tables, bounds, and any number of extra operations given
by tables (``imp``, ``conj``, ``not``, ...).  Term interpretation follows
the reduct ``<A, and, or, 0, 1, ~>`` where ``~x`` is a distinguished unary
term (``x -> 0`` by default when the algebra has an implication).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np

from .syntax import BOT, TOP, Box, Dia, Formula, Op, Signature, Var, parse, size, substitute, to_text

__all__ = [
    "AlgebraError", "StructuralError", "SignatureError", "PreconditionError",
    "LatticeError", "LatticeAlgebra", "ValidationReport", "Violation",
    "UnaryTerm", "Partition", "ClassCheck", "X",
    "validate_lattice", "sup_set", "inf_set", "eval_term", "term_function",
    "class_check", "eq_kernel", "is_congruence", "quotient",
    "find_boolean_interpretation", "is_boolean_interpretation",
    "boolean_power", "lukasiewicz_chain", "godel_chain", "kleene_chain",
    "product", "builtin", "algebra_from_dict", "algebra_to_dict", "load_algebra",
    "resolve_algebra",
]

X = Var("x")
CLASSES = ("boolean", "pseudocomplemented", "stone", "heyting", "mv")


class AlgebraError(Exception):
    pass


class StructuralError(AlgebraError):
    """Tables have the wrong shape or hold out-of-range entries."""


class SignatureError(AlgebraError):
    """An operation is used that the algebra does not provide."""


class PreconditionError(AlgebraError):
    pass


class LatticeError(AlgebraError):
    def __init__(self, report: "ValidationReport"):
        super().__init__(str(report))
        self.report = report


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def __str__(self):
        if self.ok:
            return "bounded lattice: ok"
        return "; ".join(str(v) for v in self.violations)


class LatticeAlgebra:
    """A finite lattice expanded with table-given operations.

    Use :meth:`from_order` or :meth:`from_tables` unless all tables are at
    hand.  Construction does not validate; call :func:`validate_lattice`
    (or :meth:`checked`) for that.
    """

    def __init__(self, size, leq, meet, join, bottom, top, ops=None,
                 name="A", labels=None, negation=None):
        self.size = int(size)
        self.leq = np.asarray(leq, dtype=bool)
        self.meet = np.asarray(meet, dtype=np.int64)
        self.join = np.asarray(join, dtype=np.int64)
        self.bottom = int(bottom)
        self.top = int(top)
        self.ops = {}
        for op_name, (arity, table) in (ops or {}).items():
            self.ops[op_name] = (int(arity), np.asarray(table, dtype=np.int64))
        self.name = name
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.size)]
        self._negation = negation
        for arr in (self.leq, self.meet, self.join, *(t for _, t in self.ops.values())):
            arr.setflags(write=False)

    # -- construction helpers
    @classmethod
    def from_order(cls, size: int, leq, **kw) -> "LatticeAlgebra":
        """Derive meet/join/bounds from an order given as a matrix or pair list."""
        leq = _as_relation(size, leq)
        meet = np.full((size, size), -1, dtype=np.int64)
        join = np.full((size, size), -1, dtype=np.int64)
        for a in range(size):
            for b in range(size):
                lower = [c for c in range(size) if leq[c, a] and leq[c, b]]
                upper = [c for c in range(size) if leq[a, c] and leq[b, c]]
                glb = [c for c in lower if all(leq[d, c] for d in lower)]
                lub = [c for c in upper if all(leq[c, d] for d in upper)]
                if len(glb) == 1:
                    meet[a, b] = glb[0]
                if len(lub) == 1:
                    join[a, b] = lub[0]
        least = [c for c in range(size) if all(leq[c, d] for d in range(size))]
        most = [c for c in range(size) if all(leq[d, c] for d in range(size))]
        kw.setdefault("bottom", least[0] if len(least) == 1 else -1)
        kw.setdefault("top", most[0] if len(most) == 1 else -1)
        return cls(size, leq, meet, join, **kw)

    @classmethod
    def from_tables(cls, size: int, meet, join, **kw) -> "LatticeAlgebra":
        """Read the order off the meet table (``a <= b`` iff ``a & b = a``)."""
        meet = np.asarray(meet, dtype=np.int64)
        if meet.shape != (size, size):
            raise StructuralError(f"meet table must be {size}x{size}, got {meet.shape}")
        leq = np.array([[meet[a, b] == a for b in range(size)] for a in range(size)])
        if "bottom" not in kw or "top" not in kw:
            least = [c for c in range(size) if leq[c].all()]
            most = [c for c in range(size) if leq[:, c].all()]
            kw.setdefault("bottom", least[0] if len(least) == 1 else -1)
            kw.setdefault("top", most[0] if len(most) == 1 else -1)
        return cls(size, leq, meet, join, **kw)

    def checked(self) -> "LatticeAlgebra":
        report = validate_lattice(self)
        if not report.ok:
            raise LatticeError(report)
        return self

    # -- signature and tables
    @property
    def signature(self) -> Signature:
        return Signature(frozenset((n, a) for n, (a, _) in self.ops.items()))

    def table(self, name: str) -> np.ndarray:
        if name == "and":
            return self.meet
        if name == "or":
            return self.join
        if name == "0":
            return np.array(self.bottom)
        if name == "1":
            return np.array(self.top)
        try:
            return self.ops[name][1]
        except KeyError:
            raise SignatureError(f"{self.name} has no operation {name!r}") from None

    def arity(self, name: str) -> int:
        if name in ("and", "or"):
            return 2
        if name in ("0", "1"):
            return 0
        if name in self.ops:
            return self.ops[name][0]
        raise SignatureError(f"{self.name} has no operation {name!r}")

    def apply(self, name: str, *args: int) -> int:
        if len(args) != self.arity(name):
            raise SignatureError(f"{name!r} takes {self.arity(name)} arguments")
        return int(self.table(name)[tuple(args)])

    def leq_(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    @property
    def elements(self) -> range:
        return range(self.size)

    def label(self, a: int) -> str:
        return self.labels[a]

    def element(self, text: str) -> int:
        """Element index from its label or decimal index."""
        if text in self.labels:
            return self.labels.index(text)
        try:
            a = int(text)
        except ValueError:
            raise ValueError(f"{text!r} is not an element of {self.name}") from None
        if not 0 <= a < self.size:
            raise ValueError(f"element {a} outside carrier of size {self.size}")
        return a

    @property
    def negation(self) -> "UnaryTerm":
        """The distinguished negation term used by the reduct."""
        if self._negation is not None:
            return self._negation
        if self.ops.get("imp", (0,))[0] == 2:
            return UnaryTerm(Op("imp", (X, BOT)))
        if self.ops.get("not", (0,))[0] == 1:
            return UnaryTerm(Op("not", (X,)))
        raise SignatureError(f"{self.name} has neither 'imp' nor 'not'; declare a negation term")

    def with_negation(self, term: "UnaryTerm") -> "LatticeAlgebra":
        ops = {k: (a, t) for k, (a, t) in self.ops.items()}
        return LatticeAlgebra(self.size, self.leq, self.meet, self.join, self.bottom,
                              self.top, ops, self.name, self.labels, term)

    def __repr__(self):
        ops = ", ".join(sorted(self.ops))
        return f"LatticeAlgebra({self.name!r}, size={self.size}, ops=[{ops}])"


def _as_relation(size: int, leq) -> np.ndarray:
    arr = np.asarray(leq)
    if arr.ndim == 2 and arr.shape == (size, size) and arr.dtype == bool:
        return arr.copy()
    rel = np.zeros((size, size), dtype=bool)
    for pair in leq:
        if len(pair) != 2:
            raise StructuralError(f"order entry {pair!r} is not a pair")
        a, b = int(pair[0]), int(pair[1])
        if not (0 <= a < size and 0 <= b < size):
            raise StructuralError(f"order pair {pair!r} outside carrier of size {size}")
        rel[a, b] = True
    return rel


def validate_lattice(alg: LatticeAlgebra) -> ValidationReport:
    """Report every violated bounded-lattice invariant.

    Malformed tables (wrong shape, entries outside the carrier) raise
    :class:`StructuralError` instead of being reported.
    """
    n = alg.size
    if n < 1:
        raise StructuralError("carrier must be non-empty")
    for label, arr in (("leq", alg.leq), ("meet", alg.meet), ("join", alg.join)):
        if arr.shape != (n, n):
            raise StructuralError(f"{label} table must be {n}x{n}, got {arr.shape}")
    for op_name, (arity, table) in alg.ops.items():
        if table.shape != (n,) * arity:
            raise StructuralError(f"table of {op_name!r} must have shape {(n,) * arity}, got {table.shape}")

    out = []
    leq = alg.leq
    for a in range(n):
        if not leq[a, a]:
            out.append(Violation("reflexivity", f"not {a} <= {a}"))
    for a, b in itertools.combinations(range(n), 2):
        if leq[a, b] and leq[b, a]:
            out.append(Violation("antisymmetry", f"{a} <= {b} and {b} <= {a}"))
    for a, b, c in itertools.product(range(n), repeat=3):
        if leq[a, b] and leq[b, c] and not leq[a, c]:
            out.append(Violation("transitivity", f"{a} <= {b} <= {c} but not {a} <= {c}"))
            break

    for a, b in itertools.product(range(n), repeat=2):
        lower = [c for c in range(n) if leq[c, a] and leq[c, b]]
        upper = [c for c in range(n) if leq[a, c] and leq[b, c]]
        m, j = int(alg.meet[a, b]), int(alg.join[a, b])
        if not (0 <= m < n and m in lower and all(leq[d, m] for d in lower)):
            out.append(Violation("meet", f"meet({a},{b}) = {m} is not the greatest lower bound"))
        if not (0 <= j < n and j in upper and all(leq[j, d] for d in upper)):
            out.append(Violation("join", f"join({a},{b}) = {j} is not the least upper bound"))

    for label, e in (("bottom", alg.bottom), ("top", alg.top)):
        if not 0 <= e < n:
            out.append(Violation(label, f"{label} index {e} outside carrier"))
    if 0 <= alg.bottom < n and not leq[alg.bottom].all():
        out.append(Violation("bottom", f"{alg.bottom} is not below every element"))
    if 0 <= alg.top < n and not leq[:, alg.top].all():
        out.append(Violation("top", f"{alg.top} is not above every element"))

    for op_name, (arity, table) in alg.ops.items():
        if table.size and (table.min() < 0 or table.max() >= n):
            out.append(Violation("closure", f"table of {op_name!r} leaves the carrier"))
    return ValidationReport(out)


def sup_set(alg: LatticeAlgebra, elements: Iterable[int]) -> int:
    return reduce(lambda a, b: int(alg.join[a, b]), elements, alg.bottom)


def inf_set(alg: LatticeAlgebra, elements: Iterable[int]) -> int:
    return reduce(lambda a, b: int(alg.meet[a, b]), elements, alg.top)


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class UnaryTerm:
    """A modality-free term in the single variable ``x``."""

    body: Formula

    def __post_init__(self):
        stack = [self.body]
        while stack:
            node = stack.pop()
            if isinstance(node, (Dia, Box)):
                raise ValueError("unary terms cannot contain modalities")
            if isinstance(node, Var) and node != X:
                raise ValueError(f"unary terms use only the variable x, found {node.name}")
            stack.extend(node.children())

    @classmethod
    def parse(cls, text: str, signature: Signature) -> "UnaryTerm":
        return cls(parse(text, signature))

    @property
    def size(self) -> int:
        return size(self.body)

    def apply_to(self, f: Formula) -> Formula:
        """The formula ``t(f)``: ``f`` substituted for ``x``."""
        return substitute(self.body, {X: f})

    def compose(self, inner: "UnaryTerm") -> "UnaryTerm":
        return UnaryTerm(self.apply_to(inner.body))

    def __str__(self):
        return to_text(self.body)


IDENTITY = UnaryTerm(X)


def _eval_body(alg: LatticeAlgebra, body: Formula, xs: np.ndarray) -> np.ndarray:
    memo: dict = {}

    def go(node):
        if node in memo:
            return memo[node]
        if isinstance(node, Var):
            out = xs
        elif isinstance(node, Op):
            table = alg.table(node.op)
            if len(node.args) != table.ndim:
                raise SignatureError(f"{node.op!r} takes {table.ndim} arguments")
            args = tuple(go(c) for c in node.args)
            out = np.broadcast_to(table[args] if args else table, xs.shape)
        else:
            raise ValueError("modal node inside a term")
        memo[node] = out
        return out

    return go(body)


def term_function(alg: LatticeAlgebra, term: UnaryTerm) -> tuple:
    """Values of ``term`` on every element, in carrier order."""
    return tuple(int(v) for v in _eval_body(alg, term.body, np.arange(alg.size)))


def eval_term(alg: LatticeAlgebra, term: UnaryTerm, a: int) -> int:
    return int(_eval_body(alg, term.body, np.array(a)))


# ---------------------------------------------------------------- classes

@dataclass(frozen=True)
class ClassCheck:
    holds: bool
    witness: Optional[tuple] = None
    reason: str = ""

    def __bool__(self):
        return self.holds


def _distributive(alg) -> Optional[tuple]:
    m, j = alg.meet, alg.join
    for a, b, c in itertools.product(alg.elements, repeat=3):
        if m[a, j[b, c]] != j[m[a, b], m[a, c]]:
            return (a, b, c)
    return None


def _max_of(alg, candidates: list) -> Optional[int]:
    for c in candidates:
        if all(alg.leq[d, c] for d in candidates):
            return c
    return None


def _residuated(alg, product_table, imp) -> Optional[tuple]:
    for a, b in itertools.product(alg.elements, repeat=2):
        cands = [c for c in alg.elements if alg.leq[product_table[a, c], b]]
        if _max_of(alg, cands) != imp[a, b]:
            return (a, b)
    return None


def class_check(alg: LatticeAlgebra, cls: str) -> ClassCheck:
    """Exhaustively test membership in one of the named classes.

    ``boolean``, ``pseudocomplemented`` and ``stone`` use the algebra's
    negation term; ``heyting`` needs ``imp``; ``mv`` needs ``conj`` and
    ``imp``.
    """
    if cls not in CLASSES:
        raise ValueError(f"unknown class {cls!r}; expected one of {CLASSES}")
    E = alg.elements
    if cls in ("boolean", "pseudocomplemented", "stone"):
        neg = term_function(alg, alg.negation)
        if cls == "boolean":
            w = _distributive(alg)
            if w is not None:
                return ClassCheck(False, w, "not distributive")
            for a in E:
                if alg.join[a, neg[a]] != alg.top:
                    return ClassCheck(False, (a,), "a | ~a != 1")
                if alg.meet[a, neg[a]] != alg.bottom:
                    return ClassCheck(False, (a,), "a & ~a != 0")
            return ClassCheck(True)
        for a in E:
            cands = [b for b in E if alg.meet[a, b] == alg.bottom]
            if _max_of(alg, cands) != neg[a]:
                return ClassCheck(False, (a,), "~a is not the pseudocomplement")
        if cls == "stone":
            w = _distributive(alg)
            if w is not None:
                return ClassCheck(False, w, "not distributive")
            for a in E:
                if alg.join[neg[a], neg[neg[a]]] != alg.top:
                    return ClassCheck(False, (a,), "~a | ~~a != 1")
        return ClassCheck(True)

    missing = [op for op in (("imp",) if cls == "heyting" else ("imp", "conj")) if op not in alg.ops]
    if missing:
        return ClassCheck(False, None, f"no operation {missing[0]!r}")
    imp = alg.table("imp")
    if cls == "heyting":
        w = _residuated(alg, alg.meet, imp)
        return ClassCheck(w is None, w, "" if w is None else "a -> b is not max{c | a & c <= b}")

    prod = alg.table("conj")
    for a, b in itertools.product(E, repeat=2):
        if prod[a, b] != prod[b, a]:
            return ClassCheck(False, (a, b), "conj not commutative")
    for a, b, c in itertools.product(E, repeat=3):
        if alg.leq[a, b] and not alg.leq[prod[a, c], prod[b, c]]:
            return ClassCheck(False, (a, b, c), "conj not monotone")
    for a in E:
        if prod[a, alg.top] != a:
            return ClassCheck(False, (a,), "1 is not neutral for conj")
    w = _residuated(alg, prod, imp)
    if w is not None:
        return ClassCheck(False, w, "a -> b is not max{c | a * c <= b}")
    for a, b in itertools.product(E, repeat=2):
        if alg.join[imp[a, b], imp[b, a]] != alg.top:
            return ClassCheck(False, (a, b), "prelinearity fails")
        if alg.join[a, b] != imp[imp[a, b], b]:
            return ClassCheck(False, (a, b), "a | b != (a -> b) -> b")
    return ClassCheck(True)


# ---------------------------------------------------------------- congruences

@dataclass(frozen=True)
class Partition:
    """Blocks of the carrier; block ids are numbered by first element."""

    block_of: tuple

    def __post_init__(self):
        relabel: dict = {}
        canon = tuple(relabel.setdefault(b, len(relabel)) for b in self.block_of)
        object.__setattr__(self, "block_of", canon)

    @classmethod
    def from_blocks(cls, n: int, blocks: Sequence[Iterable[int]]) -> "Partition":
        ids = [-1] * n
        for i, block in enumerate(blocks):
            for a in block:
                if ids[a] != -1:
                    raise ValueError(f"element {a} appears in two blocks")
                ids[a] = i
        if -1 in ids:
            raise ValueError(f"element {ids.index(-1)} is in no block")
        return cls(tuple(ids))

    @classmethod
    def identity(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @property
    def blocks(self) -> list:
        out: list = [[] for _ in range(max(self.block_of) + 1)]
        for a, b in enumerate(self.block_of):
            out[b].append(a)
        return [tuple(b) for b in out]

    def __len__(self):
        return max(self.block_of) + 1


def eq_kernel(alg: LatticeAlgebra, term: UnaryTerm) -> Partition:
    return Partition(term_function(alg, term))


def _kernel_compatible(alg, labels: np.ndarray, neg: np.ndarray) -> bool:
    for table in (alg.meet, alg.join):
        images = labels[table]
        for block in np.unique(labels):
            rows = images[labels == block]
            if not (rows == rows[0]).all():
                return False
    img = labels[neg]
    for block in np.unique(labels):
        if len(set(img[labels == block].tolist())) > 1:
            return False
    return True


def is_congruence(alg: LatticeAlgebra, partition: Partition,
                  negation: Optional[UnaryTerm] = None) -> bool:
    """Compatibility with ``and``, ``or`` and the negation term only."""
    u = negation or alg.negation
    neg = np.array(term_function(alg, u))
    return _kernel_compatible(alg, np.array(partition.block_of), neg)


def quotient(alg: LatticeAlgebra, partition: Partition,
             negation: Optional[UnaryTerm] = None) -> LatticeAlgebra:
    """The reduct ``<A, and, or, 0, 1, ~>`` divided by a congruence."""
    u = negation or alg.negation
    if not is_congruence(alg, partition, u):
        raise PreconditionError("partition is not a congruence of the reduct")
    labels = partition.block_of
    blocks = partition.blocks
    k = len(blocks)
    neg = term_function(alg, u)
    meet = [[labels[alg.meet[b1[0], b2[0]]] for b2 in blocks] for b1 in blocks]
    join = [[labels[alg.join[b1[0], b2[0]]] for b2 in blocks] for b1 in blocks]
    not_table = [labels[neg[b[0]]] for b in blocks]
    names = ["{" + ",".join(alg.labels[a] for a in b) + "}" for b in blocks]
    return LatticeAlgebra.from_tables(
        k, meet, join,
        bottom=labels[alg.bottom], top=labels[alg.top],
        ops={"not": (1, not_table)}, name=f"{alg.name}/~", labels=names,
    )


def _interpretation_ok(alg, values: np.ndarray, neg: np.ndarray) -> bool:
    if values[alg.top] != alg.top or values[alg.bottom] == values[alg.top]:
        return False
    _, labels = np.unique(values, return_inverse=True)
    if not _kernel_compatible(alg, labels, neg):
        return False
    part = Partition(tuple(labels.tolist()))
    blocks = part.blocks
    reps = [b[0] for b in blocks]
    lab = part.block_of
    k = len(blocks)
    meet = np.array([[lab[alg.meet[a, b]] for b in reps] for a in reps])
    join = np.array([[lab[alg.join[a, b]] for b in reps] for a in reps])
    comp = np.array([lab[neg[a]] for a in reps])
    bot, top = lab[alg.bottom], lab[alg.top]
    for a in range(k):
        if join[a, comp[a]] != top or meet[a, comp[a]] != bot:
            return False
    for a, b, c in itertools.product(range(k), repeat=3):
        if meet[a, join[b, c]] != join[meet[a, b], meet[a, c]]:
            return False
    return True


def is_boolean_interpretation(alg: LatticeAlgebra, term: UnaryTerm,
                              negation: Optional[UnaryTerm] = None) -> bool:
    """``t(1) = 1``, ``Eq(t)`` is a congruence and the quotient is a
    non-trivial Boolean algebra."""
    u = negation or alg.negation
    if term_function(alg, term)[alg.top] != alg.top:
        return False
    part = eq_kernel(alg, term)
    if len(part) < 2 or not is_congruence(alg, part, u):
        return False
    return bool(class_check(quotient(alg, part, u), "boolean"))


def find_boolean_interpretation(alg: LatticeAlgebra, negation: Optional[UnaryTerm] = None,
                                max_size: int = 9) -> Optional[UnaryTerm]:
    """Smallest term interpreting a non-trivial Boolean algebra, or ``None``.

    Terms are enumerated by node count over the algebra's own operations
    plus the constants ``0`` and ``1``; for each term function only the
    first representative (by serialization) is kept.
    """
    u = negation or alg.negation
    neg = np.array(term_function(alg, u))
    n = alg.size
    ops = sorted(
        [(name, alg.arity(name)) for name in ["and", "or", *alg.ops]],
        key=lambda t: t[0],
    )
    seen: dict = {}
    levels: list = [[]]
    xs = np.arange(n)

    leaves = sorted([X, BOT, TOP], key=to_text)
    level = []
    for leaf in leaves:
        vals = np.broadcast_to(_eval_body(alg, leaf, xs), (n,)).copy()
        key = vals.tobytes()
        if key not in seen:
            seen[key] = leaf
            level.append((leaf, vals))
    levels.append(level)

    for s in range(1, max_size + 1):
        if s > 1:
            candidates = []
            for name, arity in ops:
                if arity == 0:
                    continue
                table = alg.table(name)
                for parts in _compositions(s - 1, arity):
                    pools = [levels[p] for p in parts]
                    if any(not pool for pool in pools):
                        continue
                    if arity == 2:
                        left = np.array([v for _, v in pools[0]])
                        right = np.array([v for _, v in pools[1]])
                        grid = table[left[:, None, :], right[None, :, :]]
                        for i, j in itertools.product(range(len(pools[0])), range(len(pools[1]))):
                            candidates.append((Op(name, (pools[0][i][0], pools[1][j][0])), grid[i, j]))
                    else:
                        for combo in itertools.product(*pools):
                            vals = table[tuple(v for _, v in combo)]
                            candidates.append((Op(name, [t for t, _ in combo]), vals))
            candidates.sort(key=lambda c: to_text(c[0]))
            level = []
            for term, vals in candidates:
                key = np.ascontiguousarray(vals).tobytes()
                if key not in seen:
                    seen[key] = term
                    level.append((term, np.ascontiguousarray(vals)))
            levels.append(level)
        for term, vals in levels[s]:
            if _interpretation_ok(alg, vals, neg):
                return UnaryTerm(term)
    return None


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


# ---------------------------------------------------------------- builtins

def _chain_labels(n: int) -> list:
    return [str(Fraction(i, n - 1)) for i in range(n)]


def _chain_order(n: int) -> np.ndarray:
    return np.array([[a <= b for b in range(n)] for a in range(n)])


def _require(n: int, least: int = 2):
    if n < least:
        raise ValueError(f"parameter must be at least {least}, got {n}")


def lukasiewicz_chain(n: int) -> LatticeAlgebra:
    """The n-element MV-chain with strong conjunction and residuum."""
    _require(n)
    top = n - 1
    E = range(n)
    conj = [[max(0, a + b - top) for b in E] for a in E]
    imp = [[min(top, top - a + b) for b in E] for a in E]
    return LatticeAlgebra.from_order(
        n, _chain_order(n), ops={"conj": (2, conj), "imp": (2, imp)},
        name=f"L{n}", labels=_chain_labels(n),
    ).checked()


def godel_chain(n: int) -> LatticeAlgebra:
    """The n-element Goedel (Heyting) chain."""
    _require(n)
    E = range(n)
    imp = [[n - 1 if a <= b else b for b in E] for a in E]
    return LatticeAlgebra.from_order(
        n, _chain_order(n), ops={"imp": (2, imp)}, name=f"G{n}", labels=_chain_labels(n),
    ).checked()


def kleene_chain(n: int) -> LatticeAlgebra:
    """An n-chain whose only extra operation is the order-reversing involution."""
    _require(n)
    return LatticeAlgebra.from_order(
        n, _chain_order(n), ops={"not": (1, [n - 1 - a for a in range(n)])},
        name=f"K{n}", labels=_chain_labels(n),
    ).checked()


def boolean_power(k: int) -> LatticeAlgebra:
    """``2^k`` as bit masks ordered by inclusion, with complement ``not``."""
    _require(k, 1)
    n = 1 << k
    full = n - 1
    leq = np.array([[(a & b) == a for b in range(n)] for a in range(n)])
    name = "2" if k == 1 else f"2^{k}"
    labels = [format(a, f"0{k}b") for a in range(n)] if k > 1 else ["0", "1"]
    return LatticeAlgebra(
        n, leq,
        [[a & b for b in range(n)] for a in range(n)],
        [[a | b for b in range(n)] for a in range(n)],
        0, full, ops={"not": (1, [full ^ a for a in range(n)])},
        name=name, labels=labels,
    ).checked()


def product(a: LatticeAlgebra, b: LatticeAlgebra) -> LatticeAlgebra:
    """Componentwise product over the operations both factors share."""
    na, nb = a.size, b.size
    n = na * nb
    pairs = [(i, j) for i in range(na) for j in range(nb)]

    def idx(i, j):
        return int(i) * nb + int(j)

    leq = [[a.leq[p[0], q[0]] and b.leq[p[1], q[1]] for q in pairs] for p in pairs]
    meet = [[idx(a.meet[p[0], q[0]], b.meet[p[1], q[1]]) for q in pairs] for p in pairs]
    join = [[idx(a.join[p[0], q[0]], b.join[p[1], q[1]]) for q in pairs] for p in pairs]
    ops = {}
    for name in sorted(set(a.ops) & set(b.ops)):
        arity = a.ops[name][0]
        if b.ops[name][0] != arity:
            continue
        ta, tb = a.ops[name][1], b.ops[name][1]
        table = np.zeros((n,) * arity, dtype=np.int64)
        for args in itertools.product(range(n), repeat=arity):
            left = tuple(pairs[x][0] for x in args)
            right = tuple(pairs[x][1] for x in args)
            table[args] = idx(ta[left], tb[right])
        ops[name] = (arity, table)
    labels = [f"({a.labels[i]},{b.labels[j]})" for i, j in pairs]
    return LatticeAlgebra(
        n, leq, meet, join, idx(a.bottom, b.bottom), idx(a.top, b.top),
        ops=ops, name=f"{a.name}x{b.name}", labels=labels,
    ).checked()


def builtin(name: str, *params) -> LatticeAlgebra:
    """Dispatch ``boolean_power``, ``lukasiewicz_chain``, ``godel_chain``,
    ``kleene_chain`` and ``product`` by name.

    ``product`` takes two algebras or two Boolean-power exponents.
    """
    simple = {
        "boolean_power": boolean_power,
        "lukasiewicz_chain": lukasiewicz_chain,
        "godel_chain": godel_chain,
        "kleene_chain": kleene_chain,
    }
    if name in simple:
        if len(params) != 1:
            raise ValueError(f"{name} takes one parameter")
        return simple[name](int(params[0]))
    if name == "product":
        if len(params) != 2:
            raise ValueError("product takes two factors")
        factors = [p if isinstance(p, LatticeAlgebra) else boolean_power(int(p)) for p in params]
        return product(*factors)
    raise ValueError(f"unknown builtin algebra {name!r}")


# ---------------------------------------------------------------- file format
#
# An algebra file is a JSON object:
#   size      carrier size n (required)
#   order     list of [a, b] pairs meaning a <= b; it must be transitive,
#             reflexive pairs are implied
#   meet/join n x n tables, an alternative to "order" (both must be given)
#   bottom, top   optional indices, derived from the order when absent
#   ops       {name: {"arity": k, "table": nested k-deep list}}
#   negation  optional term text in x, e.g. "x -> 0"
#   name, labels  optional
# Non-lattices are rejected with the full validation report.

def algebra_from_dict(data: dict) -> LatticeAlgebra:
    if not isinstance(data, dict) or "size" not in data:
        raise StructuralError("an algebra file needs a JSON object with 'size'")
    n = int(data["size"])
    ops = {}
    for name, spec in (data.get("ops") or {}).items():
        if not isinstance(spec, dict) or "arity" not in spec or "table" not in spec:
            raise StructuralError(f"operation {name!r} needs 'arity' and 'table'")
        table = np.asarray(spec["table"], dtype=np.int64)
        arity = int(spec["arity"])
        if table.shape != (n,) * arity:
            raise StructuralError(f"table of {name!r} must have shape {(n,) * arity}, got {table.shape}")
        ops[name] = (arity, table)
    kw = {"ops": ops, "name": data.get("name", "A"), "labels": data.get("labels")}
    for bound in ("bottom", "top"):
        if bound in data:
            kw[bound] = int(data[bound])
    if "order" in data:
        order = [tuple(p) for p in data["order"]] + [(a, a) for a in range(n)]
        alg = LatticeAlgebra.from_order(n, order, **kw)
    elif "meet" in data and "join" in data:
        alg = LatticeAlgebra.from_tables(n, data["meet"], data["join"], **kw)
    else:
        raise StructuralError("give either 'order' or both 'meet' and 'join'")
    alg.checked()
    if data.get("negation"):
        alg = alg.with_negation(UnaryTerm.parse(data["negation"], alg.signature))
    return alg


def algebra_to_dict(alg: LatticeAlgebra) -> dict:
    out = {
        "name": alg.name,
        "size": alg.size,
        "labels": list(alg.labels),
        "meet": alg.meet.tolist(),
        "join": alg.join.tolist(),
        "bottom": alg.bottom,
        "top": alg.top,
        "ops": {name: {"arity": arity, "table": table.tolist()}
                for name, (arity, table) in sorted(alg.ops.items())},
    }
    if alg._negation is not None:
        out["negation"] = str(alg._negation)
    return out


def load_algebra(path) -> LatticeAlgebra:
    import json

    with open(path, encoding="utf-8") as fh:
        return algebra_from_dict(json.load(fh))


def resolve_algebra(spec: str) -> LatticeAlgebra:
    """Algebra from a short name or a file path.

    Names: ``2``, ``2^k``, ``l<n>`` / ``lukasiewicz<n>``, ``g<n>`` /
    ``godel<n>``, ``kleene<n>``; anything else is read as a file.
    """
    import os
    import re

    text = spec.strip().lower()
    if text == "2":
        return boolean_power(1)
    patterns = [
        (r"2\^(\d+)", boolean_power),
        (r"(?:l|lukasiewicz|ł)(\d+)", lukasiewicz_chain),
        (r"(?:g|godel|gödel)(\d+)", godel_chain),
        (r"(?:k|kleene)(\d+)", kleene_chain),
    ]
    for pattern, make in patterns:
        m = re.fullmatch(pattern, text)
        if m:
            return make(int(m.group(1)))
    if os.path.exists(spec):
        return load_algebra(spec)
    raise ValueError(f"unknown algebra {spec!r}: not a builtin name and no such file")
