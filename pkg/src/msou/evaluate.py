"""Brute-force evaluation of MSO+U formulas on finite words.

Quantifiers are evaluated by enumeration: positions range over the word,
sets over all subsets of positions.  ``U X. phi`` is read with a finite
surrogate: *some* X with ``|X| >= u_threshold`` satisfies phi.  This is a
testing device for finite windows, never a decision procedure for the
unbounded semantics on infinite words.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Sequence

from . import _backend
from .logic import (And, ExistsPos, ExistsSet, ForallPos, ForallSet, Implies, In,
                    Label, LessEq, Not, Or, SET_QUANTIFIERS, Unbounded, analyze, children)

_KIND = {LessEq: 0, Label: 1, In: 2, Not: 3, And: 4, Or: 5, Implies: 6,
         ExistsPos: 7, ForallPos: 8, ExistsSet: 9, ForallSet: 10, Unbounded: 11}


class BudgetExceeded(RuntimeError):
    pass


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class EvalBudget:
    u_threshold: int = 2
    max_word_length: int = 16
    max_set_depth: int = 3

    def __post_init__(self):
        if min(self.u_threshold, self.max_word_length, self.max_set_depth) < 0:
            raise ValueError("budget fields must be >= 0")


@dataclass(frozen=True)
class Disagreement:
    word: tuple
    assignment: dict
    expected: bool
    got: bool

    def to_json(self) -> dict:
        return {
            "word": list(self.word),
            "assignment": {k: sorted(v) if isinstance(v, frozenset) else v
                           for k, v in self.assignment.items()},
            "expected": self.expected,
            "got": self.got,
        }


class _Compiled:
    def __init__(self, f):
        stats = analyze(f)
        self.free_pos = sorted(stats.free_position_vars)
        self.free_set = sorted(stats.free_set_vars)
        self.set_depth = _set_depth(f)
        self.kind, self.a1, self.a2 = [], [], []
        self.kstart, self.kcount, self.kids = [], [], []
        self.n_pos = len(self.free_pos)
        self.n_set = len(self.free_set)
        pos_scope = {v: i for i, v in enumerate(self.free_pos)}
        set_scope = {v: i for i, v in enumerate(self.free_set)}
        self.root = self._emit(f, pos_scope, set_scope)
        self.program = _backend.CompiledProgram(
            self.kind, self.a1, self.a2, self.kstart, self.kcount, self.kids,
            self.root, self.n_pos, self.n_set)

    def _emit(self, g, ps, ss) -> int:
        x = y = 0
        if isinstance(g, LessEq):
            x, y = ps[g.x], ps[g.y]
        elif isinstance(g, Label):
            x, y = g.letter, ps[g.x]
        elif isinstance(g, In):
            x, y = ps[g.x], ss[g.X]
        elif isinstance(g, (ExistsPos, ForallPos)):
            x = self.n_pos
            self.n_pos += 1
            ps = {**ps, g.var: x}
        elif isinstance(g, SET_QUANTIFIERS):
            x = self.n_set
            self.n_set += 1
            ss = {**ss, g.var: x}
        kid_nodes = [self._emit(c, ps, ss) for c in children(g)]
        self.kstart.append(len(self.kids))
        self.kcount.append(len(kid_nodes))
        self.kids.extend(kid_nodes)
        self.kind.append(_KIND[type(g)])
        self.a1.append(x)
        self.a2.append(y)
        return len(self.kind) - 1


def _set_depth(f) -> int:
    best = 0
    stack = [(f, 0)]
    while stack:
        g, d = stack.pop()
        if isinstance(g, SET_QUANTIFIERS):
            d += 1
            best = max(best, d)
        stack.extend((c, d) for c in children(g))
    return best


@lru_cache(maxsize=512)
def compile_formula(f) -> _Compiled:
    return _Compiled(f)


def label_masks(word: Sequence[int]) -> list:
    top = max(word, default=0)
    masks = [0] * (top + 1)
    for p, a in enumerate(word):
        masks[a] |= 1 << p
    return masks


def _mask(s) -> int:
    m = 0
    for p in s:
        m |= 1 << p
    return m


def evaluate(f, word: Sequence[int], assignment: Optional[Mapping] = None,
             budget: EvalBudget = EvalBudget()) -> bool:
    comp = compile_formula(f)
    _check_budget(comp, len(word), budget)
    pos_vals, set_vals = _bind(comp, len(word), assignment or {})
    return comp.program.evaluate(label_masks(word), len(word), pos_vals, set_vals,
                                 budget.u_threshold)


def _check_budget(comp, length, budget):
    if length > budget.max_word_length:
        raise BudgetExceeded(f"word length {length} exceeds budget {budget.max_word_length}")
    if comp.set_depth > budget.max_set_depth:
        raise BudgetExceeded(
            f"set-quantifier nesting {comp.set_depth} exceeds budget {budget.max_set_depth}")


def _bind(comp, length, assignment):
    pos_vals = []
    for v in comp.free_pos:
        if v not in assignment:
            raise EvaluationError(f"free position variable {v!r} is not assigned")
        p = assignment[v]
        if not 0 <= p < length:
            raise EvaluationError(f"position {p} for {v!r} is outside the word")
        pos_vals.append(p)
    set_vals = []
    for v in comp.free_set:
        if v not in assignment:
            raise EvaluationError(f"free set variable {v!r} is not assigned")
        s = assignment[v]
        if any(not 0 <= p < length for p in s):
            raise EvaluationError(f"set {v!r} has positions outside the word")
        set_vals.append(_mask(s))
    return pos_vals, set_vals


def all_words(n: int, max_len: int, min_len: int = 0) -> Iterable[tuple]:
    """Words over 1..n by length, then lexicographically."""
    for length in range(min_len, max_len + 1):
        yield from itertools.product(range(1, n + 1), repeat=length)


def all_assignments(f, length: int) -> Iterable[dict]:
    comp = compile_formula(f)
    subsets = [frozenset(p for p in range(length) if m >> p & 1) for m in range(1 << length)]
    pos_choices = [range(length)] * len(comp.free_pos)
    set_choices = [subsets] * len(comp.free_set)
    for ps in itertools.product(*pos_choices):
        for ss in itertools.product(*set_choices):
            env = dict(zip(comp.free_pos, ps))
            env.update(zip(comp.free_set, ss))
            yield env


def exhaustive_check(f, predicate: Callable[[tuple, dict], bool], n: int, max_len: int,
                     budget: EvalBudget = EvalBudget(),
                     word_filter: Optional[Callable[[tuple], bool]] = None,
                     assignments: Optional[Callable[[tuple], Iterable[dict]]] = None,
                     stop_after: Optional[int] = None) -> list:
    """Every (word, assignment) with ``len(word) <= max_len`` where
    :func:`evaluate` and ``predicate`` disagree, in enumeration order.

    ``word_filter`` narrows the words (e.g. to decodable ones),
    ``assignments`` narrows the assignments per word; by default every
    valuation of the free variables is tried.
    """
    comp = compile_formula(f)
    if max_len > budget.max_word_length:
        raise BudgetExceeded(f"max length {max_len} exceeds budget {budget.max_word_length}")
    _check_budget(comp, 0, budget)
    program = comp.program
    out = []
    for word in all_words(n, max_len):
        if word_filter is not None and not word_filter(word):
            continue
        masks = label_masks(word)
        length = len(word)
        envs = assignments(word) if assignments is not None else all_assignments(f, length)
        for env in envs:
            pos_vals, set_vals = _bind(comp, length, env)
            got = program.evaluate(masks, length, pos_vals, set_vals, budget.u_threshold)
            expected = bool(predicate(word, env))
            if got != expected:
                out.append(Disagreement(tuple(word), dict(env), expected, got))
                if stop_after is not None and len(out) >= stop_after:
                    return out
    return out
