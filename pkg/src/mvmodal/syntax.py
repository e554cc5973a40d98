"""Modal formula ASTs, the text grammar, and structural measures.

Formulas are immutable trees with cached hashes so that large translated
formulas can be shared as DAGs and memoized cheaply.

Grammar (lowest to highest precedence)::

    iff   := imp (('<->' | '<=>') imp)*          # sugar, expanded
    imp   := or  (('->' | '=>') imp)?            # right associative
    or    := and ('|' and)*
    and   := unary (('&' | '*') unary)*
    unary := ('~' | 'dia' | 'box') unary | atom
    atom  := '(' iff ')' | '0' | '1' | 'top' | 'bot'
           | name '(' iff (',' iff)* ')'         # named connective
           | name ['@' int]                      # variable, optionally tagged
           | 'q[' int ']' '@' int                # definitional letter

``->`` builds the algebra's own ``imp`` connective when the signature has
one; otherwise it is material implication ``~a | b``.  ``=>`` and ``<=>``
are always material and need ``not``.  Unicode ``∧ ∨ ¬ → ⊙ ◇ □ ↔ ⇒ ⇔``
are accepted as aliases.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

__all__ = [
    "Formula", "Var", "Op", "Dia", "Box", "Signature", "ParseError",
    "parse", "to_text", "modal_rank", "subformulas", "variables",
    "box_power", "size", "conj", "disj", "neg", "implies", "iff",
    "TOP", "BOT", "var_sort_key", "substitute", "CLASSICAL", "var_from_name",
]

INFIX = {"and": "&", "or": "|", "imp": "->", "conj": "*"}


class Formula:
    """Base class of formula nodes."""

    __slots__ = ("_hash",)

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {to_text(self)}>"


class Var(Formula):
    """A propositional letter; ``tag`` marks translated letters ``p^a``."""

    __slots__ = ("base", "tag")

    def __init__(self, base: str, tag: Optional[int] = None):
        self.base = base
        self.tag = tag
        self._hash = hash(("var", base, tag))

    def __eq__(self, other):
        return self is other or (
            type(other) is Var and other.base == self.base and other.tag == self.tag
        )

    __hash__ = Formula.__hash__

    def __reduce__(self):
        return (Var, (self.base, self.tag))

    @property
    def name(self) -> str:
        return self.base if self.tag is None else f"{self.base}@{self.tag}"


def var_from_name(name: str) -> Var:
    """Inverse of ``Var.name``: ``p3@2`` is the letter ``p3`` tagged 2."""
    base, at, tag = name.rpartition("@")
    if at and base and tag.isdigit():
        return Var(base, int(tag))
    return Var(name)


class Op(Formula):
    """Connective application; nullary ops ``0``/``1`` are the bounds."""

    __slots__ = ("op", "args")

    def __init__(self, op: str, args: Iterable[Formula] = ()):
        self.op = op
        self.args = tuple(args)
        self._hash = hash(("op", op, self.args))

    def children(self):
        return self.args

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Op
            and other._hash == self._hash
            and other.op == self.op
            and other.args == self.args
        )

    __hash__ = Formula.__hash__

    def __reduce__(self):
        return (Op, (self.op, self.args))


class _Modal(Formula):
    __slots__ = ("arg",)
    _kind = ""

    def __init__(self, arg: Formula):
        self.arg = arg
        self._hash = hash((self._kind, arg))

    def children(self):
        return (self.arg,)

    def __eq__(self, other):
        if self is other:
            return True
        return type(other) is type(self) and other._hash == self._hash and other.arg == self.arg

    __hash__ = Formula.__hash__

    def __reduce__(self):
        return (type(self), (self.arg,))


class Dia(_Modal):
    __slots__ = ()
    _kind = "dia"


class Box(_Modal):
    __slots__ = ()
    _kind = "box"


TOP = Op("1")
BOT = Op("0")


@dataclass(frozen=True)
class Signature:
    """Connective names with arities; ``and``/``or`` and the bounds are implicit."""

    ops: frozenset

    def __post_init__(self):
        ops = set(self.ops) | {("and", 2), ("or", 2), ("0", 0), ("1", 0)}
        names = [name for name, _ in ops]
        if len(names) != len(set(names)):
            raise ValueError(f"conflicting arities in signature {sorted(ops)}")
        object.__setattr__(self, "ops", frozenset(ops))

    @classmethod
    def of(cls, **arities: int) -> "Signature":
        return cls(frozenset(arities.items()))

    def arity(self, name: str) -> Optional[int]:
        for op, n in self.ops:
            if op == name:
                return n
        return None

    def __contains__(self, name: str) -> bool:
        return self.arity(name) is not None


CLASSICAL = Signature.of(**{"not": 1})


# ---------------------------------------------------------------- builders

def neg(f: Formula) -> Formula:
    return Op("not", (f,))


def conj(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``1``."""
    items = list(items)
    if not items:
        return TOP
    out = items[0]
    for f in items[1:]:
        out = Op("and", (out, f))
    return out


def disj(items: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``0``."""
    items = list(items)
    if not items:
        return BOT
    out = items[0]
    for f in items[1:]:
        out = Op("or", (out, f))
    return out


def implies(a: Formula, b: Formula) -> Formula:
    """Material implication ``~a | b``."""
    return Op("or", (neg(a), b))


def iff(a: Formula, b: Formula) -> Formula:
    """Material equivalence ``(a => b) & (b => a)``."""
    return Op("and", (implies(a, b), implies(b, a)))


def box_power(m: int, f: Formula) -> Formula:
    if m < 0:
        raise ValueError("box power must be non-negative")
    for _ in range(m):
        f = Box(f)
    return f


# ---------------------------------------------------------------- measures

def _postorder(f: Formula) -> Iterator[Formula]:
    """Distinct subformulas, children before parents, first-visit order."""
    seen = set()
    stack = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded:
            seen.add(node)
            yield node
            continue
        stack.append((node, True))
        for child in reversed(node.children()):
            if child not in seen:
                stack.append((child, False))


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas of ``f`` in post-order (``f`` itself last)."""
    return list(_postorder(f))


def modal_rank(f: Formula) -> int:
    rank: dict[Formula, int] = {}
    for node in _postorder(f):
        inner = max((rank[c] for c in node.children()), default=0)
        rank[node] = inner + 1 if isinstance(node, _Modal) else inner
    return rank[f]


def size(f: Formula) -> int:
    """Node count of the formula tree (shared subtrees counted every time)."""
    total: dict[Formula, int] = {}
    for node in _postorder(f):
        total[node] = 1 + sum(total[c] for c in node.children())
    return total[f]


def var_sort_key(v: Var):
    m = re.fullmatch(r"(.*?)(\d*)", v.base)
    prefix, digits = m.group(1), m.group(2)
    return (prefix, int(digits) if digits else -1, v.base, -1 if v.tag is None else v.tag)


def variables(f: Formula) -> list[Var]:
    """Variables of ``f``, sorted by name (numeric suffixes compare as numbers)."""
    found = {node for node in _postorder(f) if isinstance(node, Var)}
    return sorted(found, key=var_sort_key)


def substitute(f: Formula, mapping: dict) -> Formula:
    """Simultaneously replace variables according to ``mapping``."""
    memo: dict[Formula, Formula] = {}
    for node in _postorder(f):
        if isinstance(node, Var):
            memo[node] = mapping.get(node, node)
        elif isinstance(node, Op):
            memo[node] = Op(node.op, [memo[c] for c in node.args])
        else:
            memo[node] = type(node)(memo[node.arg])
    return memo[f]


# ---------------------------------------------------------------- printing

def to_text(f: Formula) -> str:
    """Canonical, fully parenthesized, re-parseable rendering."""
    out: dict[Formula, str] = {}
    for node in _postorder(f):
        if isinstance(node, Var):
            out[node] = node.name
        elif isinstance(node, Dia):
            out[node] = f"dia {out[node.arg]}"
        elif isinstance(node, Box):
            out[node] = f"box {out[node.arg]}"
        elif not node.args:
            out[node] = node.op
        elif node.op == "not" and len(node.args) == 1:
            out[node] = f"~{out[node.args[0]]}"
        elif node.op in INFIX and len(node.args) == 2:
            a, b = (out[c] for c in node.args)
            out[node] = f"({a} {INFIX[node.op]} {b})"
        else:
            out[node] = f"{node.op}({', '.join(out[c] for c in node.args)})"
    return out[f]


# ---------------------------------------------------------------- parsing

class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(
    r"\s*(?:(?P<sym><->|<=>|->|=>|[()&|*~,∧∨¬→⊙◇□↔⇒⇔])"
    r"|(?P<q>q\[\d+\]@\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:@\d+)?)"
    r"|(?P<num>[01]))"
)
_ALIASES = {"∧": "&", "∨": "|", "¬": "~", "→": "->", "⊙": "*", "◇": "dia",
            "□": "box", "↔": "<->", "⇒": "=>", "⇔": "<=>"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        tok = m.group(m.lastgroup)
        tokens.append((_ALIASES.get(tok, tok), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, signature: Signature):
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = signature

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def need(self, op: str, arity: int, pos: int):
        have = self.sig.arity(op)
        if have is None:
            raise ParseError(f"unknown connective {op!r}", pos)
        if have != arity:
            raise ParseError(f"connective {op!r} has arity {have}, got {arity} arguments", pos)

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() != "<eof>":
            raise ParseError(f"unexpected token {self.peek()!r}", self.pos())
        return f

    def iff(self) -> Formula:
        left = self.imp()
        while self.peek() in ("<->", "<=>"):
            pos = self.pos()
            tok = self.take()
            right = self.imp()
            if tok == "<->" and "imp" in self.sig:
                left = Op("and", (Op("imp", (left, right)), Op("imp", (right, left))))
            else:
                self.need("not", 1, pos)
                left = iff(left, right)
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() in ("->", "=>"):
            pos = self.pos()
            tok = self.take()
            right = self.imp()
            if tok == "->" and "imp" in self.sig:
                return Op("imp", (left, right))
            self.need("not", 1, pos)
            return implies(left, right)
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek() == "|":
            self.take()
            left = Op("or", (left, self.conj()))
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek() in ("&", "*"):
            pos = self.pos()
            op = "and" if self.take() == "&" else "conj"
            if op == "conj":
                self.need("conj", 2, pos)
            left = Op(op, (left, self.unary()))
        return left

    def unary(self) -> Formula:
        tok, pos = self.peek(), self.pos()
        if tok == "~":
            self.take()
            self.need("not", 1, pos)
            return Op("not", (self.unary(),))
        if tok == "dia":
            self.take()
            return Dia(self.unary())
        if tok == "box":
            self.take()
            return Box(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok, pos = self.peek(), self.pos()
        if tok == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if tok in ("0", "bot"):
            self.take()
            return BOT
        if tok in ("1", "top"):
            self.take()
            return TOP
        if tok.startswith("q["):
            self.take()
            base, tag = tok.split("@")
            return Var(base, int(tag))
        if tok == "<eof>" or not re.match(r"[A-Za-z_]", tok):
            raise ParseError(f"unexpected token {tok!r}", pos)
        self.take()
        if self.peek() == "(" and "@" not in tok:
            self.take()
            args = [self.iff()]
            while self.peek() == ",":
                self.take()
                args.append(self.iff())
            self.take(")")
            self.need(tok, len(args), pos)
            return Op(tok, args)
        if tok in self.sig and self.sig.arity(tok) == 0:
            return Op(tok)
        if "@" in tok:
            base, tag = tok.split("@")
            return Var(base, int(tag))
        return Var(tok)


def parse(text: str, signature: Signature = CLASSICAL) -> Formula:
    """Parse ``text`` against ``signature`` (classical by default)."""
    return _Parser(text, signature).parse()
