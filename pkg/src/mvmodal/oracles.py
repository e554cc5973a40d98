"""Exhaustive tree-model search for classical K-satisfiability.

Independent of the tableau: it never decomposes formulas into branches.
A *type* is the truth vector of all subformulas at the root of some tree
model.  Level-0 types come from letter assignments with no successors
available; a level-``d`` type is produced by a letter assignment together
with a finite set of level-``d-1`` types for the successors.  Only the
(``any``, ``all``) summary of a successor set over the modal arguments
matters, so the reachable summaries are closed under adding one type at a
time.  Every K model of depth at most ``rank(f)`` is captured, and by the
tree-model property that suffices.
"""

from __future__ import annotations

import itertools

from .syntax import Box, Dia, Formula, Var, modal_rank, subformulas, var_sort_key, variables

__all__ = ["tree_types", "tree_satisfiable", "tree_valid"]


def _evaluator(f: Formula):
    subs = list(subformulas(f))
    pos = {s: i for i, s in enumerate(subs)}
    args = sorted({s.arg for s in subs if isinstance(s, (Dia, Box))}, key=pos.get)
    arg_bit = {a: k for k, a in enumerate(args)}
    letters = sorted(variables(f), key=var_sort_key)

    def evaluate(assign: dict, any_mask: int, all_mask: int) -> tuple:
        vals = [False] * len(subs)
        for i, s in enumerate(subs):
            if isinstance(s, Var):
                v = assign[s]
            elif isinstance(s, Dia):
                v = bool(any_mask >> arg_bit[s.arg] & 1)
            elif isinstance(s, Box):
                v = bool(all_mask >> arg_bit[s.arg] & 1)
            else:
                a = [vals[pos[c]] for c in s.args]
                if s.op == "and":
                    v = all(a)
                elif s.op == "or":
                    v = any(a)
                elif s.op == "not":
                    v = not a[0]
                elif s.op == "1":
                    v = True
                elif s.op == "0":
                    v = False
                else:
                    raise ValueError(f"classical formulas only, found {s.op!r}")
            vals[i] = v
        return tuple(vals)

    def project(vec: tuple) -> int:
        return sum(1 << k for k, a in enumerate(args) if vec[pos[a]])

    return subs, pos, letters, len(args), evaluate, project


def tree_types(f: Formula, depth: int | None = None) -> set:
    """Realizable truth vectors (over ``subformulas(f)``) at tree roots of height <= depth."""
    subs, pos, letters, n_args, evaluate, project = _evaluator(f)
    depth = modal_rank(f) if depth is None else depth
    full = (1 << n_args) - 1
    assignments = [dict(zip(letters, bits))
                   for bits in itertools.product((False, True), repeat=len(letters))]
    profiles = {(0, full)}
    types: set = set()
    for level in range(depth + 1):
        types = {evaluate(a, anym, allm) for a in assignments for anym, allm in profiles}
        if level == depth:
            break
        masks = {project(t) for t in types}
        profiles = {(0, full)}
        frontier = list(profiles)
        while frontier:
            anym, allm = frontier.pop()
            for m in masks:
                nxt = (anym | m, allm & m)
                if nxt not in profiles:
                    profiles.add(nxt)
                    frontier.append(nxt)
    return types


def tree_satisfiable(f: Formula) -> bool:
    subs = list(subformulas(f))
    root = subs.index(f)
    return any(t[root] for t in tree_types(f))


def tree_valid(f: Formula) -> bool:
    subs = list(subformulas(f))
    root = subs.index(f)
    return all(t[root] for t in tree_types(f))
