"""From two-counter machines to MSO+U formulas over words in ``{1,2,3,4}``.

Node encoding: a depth-k node of the decoded tree sequence is represented by
its first leaf (its *leader*); a set of nodes is a set of leader positions.
Degrees are never counted in the logic.  "Unbounded degree" is a ``U``
over sets of children, and equality of degrees goes through the ruler
construction (well-formed plus almost constant degree) on a restricted
*view* of the word.

A :class:`View` fixes which letters separate blocks at each view depth and
which positions count as leaves.  The ruler construction is written once
against a view and reused for the flattening, the selector restriction, and
the increment/copy restrictions.

Besides the formula builders, this module holds the direct combinatorial
checkers for the finite conditions (a)-(d) and the witness generator.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .codec import LEAF, TreeSeq, degree_sequence, nodes_at_depth
from .logic import (FALSE, And, ExistsPos, ExistsSet, ForallPos, ForallSet, Implies,
                    In, Label, LessEq, Not, Or, Unbounded, conj, disj, eq, lt)
from .minsky import OPS, MinskyMachine, validate_description


class Namer:
    """Deterministic fresh variable names that avoid the caller's names."""

    def __init__(self, taken=()):
        self.taken = set(taken)
        self.counts = {"p": 0, "P": 0}

    def _fresh(self, prefix):
        while True:
            self.counts[prefix] += 1
            name = f"{prefix}{self.counts[prefix]}"
            if name not in self.taken:
                self.taken.add(name)
                return name

    def pos(self) -> str:
        return self._fresh("p")

    def set(self) -> str:
        return self._fresh("P")


def _forall(nm, body_fn):
    x = nm.pos()
    return ForallPos(x, body_fn(x))


def _exists(nm, body_fn):
    x = nm.pos()
    return ExistsPos(x, body_fn(x))


def labels(letters, x):
    return disj(*(Label(a, x) for a in sorted(letters)))


def infinite_set(X, nm):
    """Cofinal in the positions; on omega-words this is 'X is infinite'."""
    return _forall(nm, lambda x: _exists(nm, lambda y: And(LessEq(x, y), In(y, X))))


def infinitely_many(letter, nm):
    return _forall(nm, lambda x: _exists(nm, lambda y: And(LessEq(x, y), Label(letter, y))))


def almost(X, prop, nm):
    """All members of X past some position satisfy ``prop``."""
    p = nm.pos()
    return ExistsPos(p, _forall(nm, lambda x: Implies(And(In(x, X), lt(p, x)), prop(x))))


def alternating(X, Y, nm):
    """Any two members of one set are separated by a member of the other."""
    def sep(A, B):
        return _forall(nm, lambda x: _forall(nm, lambda x2: Implies(
            And(In(x, A), In(x2, A), lt(x, x2)),
            _exists(nm, lambda y: And(In(y, B), lt(x, y), lt(y, x2))))))
    return And(sep(X, Y), sep(Y, X))


# -- views -----------------------------------------------------------------

@dataclass(frozen=True)
class View:
    """``seps[k-1]``: letters that close a depth-k block; leaves are positions
    labeled ``leaf_label`` that pass ``keep``."""
    seps: tuple
    leaf_label: int
    keep: Optional[Callable] = field(default=None, compare=False)
    name: str = "base"

    @property
    def levels(self) -> int:
        return len(self.seps) + 1

    def same(self, k, x, y, nm):
        """No separator of depth k strictly after min(x,y) up to max(x,y)."""
        z = nm.pos()
        between = Or(And(lt(x, z), LessEq(z, y)), And(lt(y, z), LessEq(z, x)))
        return ForallPos(z, Implies(between, Not(labels(self.seps[k - 1], z))))

    def leaf(self, x, nm):
        if self.keep is None:
            return Label(self.leaf_label, x)
        return And(Label(self.leaf_label, x), self.keep(x, nm))

    def leader(self, k, x, nm):
        if k == self.levels:
            return self.leaf(x, nm)
        return And(self.leaf(x, nm), Not(_exists(
            nm, lambda y: And(lt(y, x), self.leaf(y, nm), self.same(k, y, x, nm)))))

    def child(self, k, x, y, nm):
        return And(self.leader(k, x, nm), self.leader(k + 1, y, nm), self.same(k, x, y, nm))

    def node_set(self, k, X, nm):
        return _forall(nm, lambda x: Implies(In(x, X), self.leader(k, x, nm)))


def base_view(n: int) -> View:
    return View(tuple(frozenset(range(1, k + 1)) for k in range(1, n)), n)


BASE3 = base_view(3)
BASE4 = base_view(4)
FLAT = View((frozenset({1}), frozenset({1, 2})), 4, name="flat")


def keep_view(X) -> View:
    """Nodes of the depth-2 set X and their descendants, as depth-3 trees
    rooted at the X nodes."""
    def keep(x, nm):
        return _exists(nm, lambda r: And(In(r, X), BASE4.same(2, r, x, nm)))
    return View((frozenset({1, 2}), frozenset({1, 2, 3})), 4, keep, f"keep[{X}]")


def selector_view(X) -> View:
    """Flattening restricted to depth-2 nodes that are in X or have a
    sibling from X to their right."""
    def keep(x, nm):
        return _exists(nm, lambda r: And(
            In(r, X), BASE4.same(1, r, x, nm), Or(lt(x, r), BASE4.same(2, r, x, nm))))
    return View((frozenset({1}), frozenset({1, 2})), 4, keep, f"sel[{X}]")


def increment_view(X, Y) -> View:
    """Nodes of X and Y with descendants, minus the first subtree of every
    Y node."""
    def keep(x, nm):
        return Or(
            _exists(nm, lambda r: And(In(r, X), BASE4.same(2, r, x, nm))),
            _exists(nm, lambda r: And(In(r, Y), BASE4.same(2, r, x, nm),
                                      Not(BASE4.same(3, r, x, nm)))))
    return View((frozenset({1, 2}), frozenset({1, 2, 3})), 4, keep, f"inc[{X},{Y}]")


def copy_view(X, Y) -> View:
    def keep(x, nm):
        return _exists(nm, lambda r: And(Or(In(r, X), In(r, Y)), BASE4.same(2, r, x, nm)))
    return View((frozenset({1, 2}), frozenset({1, 2, 3})), 4, keep, f"copy[{X},{Y}]")


# -- the ruler construction on a three-level view ----------------------------

def degrees_tend_to_infinity(view: View, k: int, nm) -> And:
    """Every infinite set of depth-k nodes has unbounded degree."""
    A = nm.set()
    Z = nm.set()
    unbounded = Unbounded(Z, _exists(nm, lambda a: And(
        In(a, A), _forall(nm, lambda z: Implies(In(z, Z), view.child(k, a, z, nm))))))
    return ForallSet(A, Implies(And(view.node_set(k, A, nm), infinite_set(A, nm)), unbounded))


def bounded_root_degree(view: View, nm):
    Z = nm.set()
    return Not(Unbounded(Z, _exists(nm, lambda r: And(
        view.leader(1, r, nm),
        _forall(nm, lambda z: Implies(In(z, Z), view.child(1, r, z, nm)))))))


def child_choice(view: View, X, S, nm):
    """S picks exactly one depth-2 node in every tree led by a member of X."""
    covers = _forall(nm, lambda x: Implies(In(x, X), _exists(
        nm, lambda s: And(In(s, S), view.same(1, x, s, nm)))))
    inside = _forall(nm, lambda s: Implies(In(s, S), And(
        view.leader(2, s, nm),
        _exists(nm, lambda x: And(In(x, X), view.same(1, x, s, nm))))))
    unique = _forall(nm, lambda s: _forall(nm, lambda s2: Implies(
        And(In(s, S), In(s2, S), view.same(1, s, s2, nm)), eq(s, s2))))
    return And(covers, inside, unique)


def _selected_count_unbounded(view, owners, Gs, S, nm, owner_filter=None):
    """The number of G-leaves under the S-chosen child is unbounded over the
    owners (tree leaders) admitted by ``owner_filter``."""
    Z = nm.set()

    def body(o):
        parts = [In(o, owners)]
        if owner_filter is not None:
            parts.append(owner_filter(o))
        parts.append(_forall(nm, lambda z: Implies(In(z, Z), And(
            In(z, Gs), view.leaf(z, nm),
            _exists(nm, lambda s: And(In(s, S), view.same(1, o, s, nm),
                                      view.same(2, s, z, nm)))))))
        return And(*parts)
    return Unbounded(Z, _exists(nm, body))


def _equivalent_selections(view, X, Y, G1, S1, G2, S2, nm):
    """The two number sequences read off (G1, S1) along X and (G2, S2) along
    Y are bounded on the same index sets; the i-th member of X is paired
    with the first member of Y after it."""
    P = nm.set()

    def partner_in_p(y):
        return _exists(nm, lambda x: And(In(x, P), lt(x, y), Not(_exists(
            nm, lambda x2: And(In(x2, X), lt(x, x2), lt(x2, y))))))

    left = _selected_count_unbounded(view, P, G1, S1, nm)
    right = _selected_count_unbounded(view, Y, G2, S2, nm, owner_filter=partner_in_p)
    subset = _forall(nm, lambda x: Implies(In(x, P), In(x, X)))
    return ForallSet(P, Implies(subset, And(Implies(left, right), Implies(right, left))))


def dimension_gap(view: View, X, Y, nm):
    """Some choice below the child degrees along X is no asymptotic mix of
    any choice below the child degrees along Y."""
    G1, G2, S1, S2 = nm.set(), nm.set(), nm.set(), nm.set()
    not_mix = ExistsSet(S1, And(
        child_choice(view, X, S1, nm),
        ForallSet(S2, Implies(child_choice(view, Y, S2, nm),
                              Not(_equivalent_selections(view, X, Y, G1, S1, G2, S2, nm))))))
    return ExistsSet(G1, ForallSet(G2, not_mix))


def no_alternating_gap(view: View, nm):
    X, Y = nm.set(), nm.set()
    return Not(ExistsSet(X, ExistsSet(Y, And(
        view.node_set(1, X, nm), view.node_set(1, Y, nm),
        infinite_set(X, nm), infinite_set(Y, nm),
        alternating(X, Y, nm), dimension_gap(view, X, Y, nm)))))


def almost_constant_degree(view: View, nm):
    return And(bounded_root_degree(view, nm), no_alternating_gap(view, nm))


def ruler_on(view: View, nm):
    """Well-formed (depth-2 degrees tend to infinity) and almost constant
    root degree."""
    return And(degrees_tend_to_infinity(view, 2, nm), almost_constant_degree(view, nm))


def ruler_formula():
    """Closed formula over {1,2,3}: infinitely many 1s, depth-2 degrees tend
    to infinity, almost all depth-1 nodes share one degree."""
    nm = Namer()
    return And(infinitely_many(1, nm), ruler_on(BASE3, nm))


# -- selectors and counters (alphabet {1,2,3,4}) ---------------------------

def one_child_per_root(X, nm, view: View = BASE4):
    every = _forall(nm, lambda r: Implies(view.leader(1, r, nm), _exists(
        nm, lambda x: And(In(x, X), view.same(1, r, x, nm)))))
    at_most = _forall(nm, lambda x: _forall(nm, lambda x2: Implies(
        And(In(x, X), In(x2, X), view.same(1, x, x2, nm)), eq(x, x2))))
    return And(every, at_most)


def selector_skeleton(X, nm, view: View = BASE4):
    """U-free part of being a depth-2 selector: a set of depth-2 nodes with
    exactly one child of every root."""
    return And(view.node_set(2, X, nm), one_child_per_root(X, nm, view))


def _selector(X, nm):
    return And(selector_skeleton(X, nm), ruler_on(selector_view(X), nm))


def selector_formula(X: str = "X"):
    """X is a depth-2 selector: one child per root, almost always at the
    same offset."""
    return _selector(X, Namer({X}))


def has_degree_one(x, nm):
    return _forall(nm, lambda y: _forall(nm, lambda y2: Implies(
        And(BASE4.child(2, x, y, nm), BASE4.child(2, x, y2, nm)), eq(y, y2))))


def _zero(X, nm):
    return almost(X, lambda x: has_degree_one(x, nm), nm)


def zero_formula(X: str = "X"):
    """All but finitely many nodes of X have degree one (counter value 0).
    First-order: no set quantifier, no U."""
    return _zero(X, Namer({X}))


def zero_skeleton(X, nm):
    return And(BASE4.node_set(2, X, nm),
               _forall(nm, lambda x: Implies(In(x, X), has_degree_one(x, nm))))


def _increment(X, Y, nm):
    return And(Not(_zero(Y, nm)), ruler_on(increment_view(X, Y), nm))


def increment_formula(X: str = "X", Y: str = "Y"):
    """Y's degrees are eventually X's plus one: dropping one subtree under
    every Y node leaves an almost-constant-degree sequence."""
    return _increment(X, Y, Namer({X, Y}))


def _copy(X, Y, nm):
    return ruler_on(copy_view(X, Y), nm)


def copy_formula(X: str = "X", Y: str = "Y"):
    return _copy(X, Y, Namer({X, Y}))


def next_sibling(x, y, nm):
    return And(BASE4.leader(2, x, nm), BASE4.leader(2, y, nm), BASE4.same(1, x, y, nm),
               lt(x, y), Not(_exists(nm, lambda z: And(BASE4.leader(2, z, nm),
                                                      lt(x, z), lt(z, y)))))


def next_column(X, Y, nm):
    """Eventually every Y node is the right sibling of the X node of its tree."""
    p = nm.pos()
    return ExistsPos(p, _forall(nm, lambda x: _forall(nm, lambda y: Implies(
        And(In(x, X), In(y, Y), lt(p, x), BASE4.same(1, x, y, nm)),
        next_sibling(x, y, nm)))))


def next_column_skeleton(X, Y, nm):
    return And(selector_skeleton(X, nm), selector_skeleton(Y, nm),
               _forall(nm, lambda x: _forall(nm, lambda y: Implies(
                   And(In(x, X), In(y, Y), BASE4.same(1, x, y, nm)),
                   next_sibling(x, y, nm)))))


def first_column(X, nm):
    return almost(X, lambda x: BASE4.leader(1, x, nm), nm)


def last_column(X, nm):
    return almost(X, lambda x: Not(_exists(nm, lambda z: next_sibling(x, z, nm))), nm)


def in_column(X, S, nm):
    return almost(X, lambda x: In(x, S), nm)


def _op_relation(op, X, Y, Z, W, nm):
    """Counter effect of ``op`` from configuration columns (X, Y) to (Z, W)."""
    if op == "inc1":
        return And(_increment(X, Z, nm), _copy(Y, W, nm))
    if op == "inc2":
        return And(_copy(X, Z, nm), _increment(Y, W, nm))
    if op == "dec1":
        return And(_increment(Z, X, nm), _copy(Y, W, nm))
    if op == "dec2":
        return And(_copy(X, Z, nm), _increment(W, Y, nm))
    if op == "zero1":
        return And(_zero(X, nm), _copy(X, Z, nm), _copy(Y, W, nm))
    if op == "zero2":
        return And(_zero(Y, nm), _copy(X, Z, nm), _copy(Y, W, nm))
    raise ValueError(op)


def state_set_names(m: MinskyMachine) -> dict:
    return {q: f"S{i}" for i, q in enumerate(m.states)}


def op_set_names() -> dict:
    return {op: f"O{op}" for op in OPS}


def run_condition(m: MinskyMachine, nm):
    """The root degrees minus one describe an accepting run of m.  State
    and operation labels of the configuration columns are guessed as sets."""
    S = state_set_names(m)
    O = op_set_names()
    nm.taken.update(S.values())
    nm.taken.update(O.values())

    def sel(*names):
        return [_selector(v, nm) for v in names]

    X, Y = nm.set(), nm.set()
    first = ForallSet(X, ForallSet(Y, Implies(
        And(*sel(X, Y), first_column(X, nm), next_column(X, Y, nm)),
        And(in_column(X, S[m.initial], nm), _zero(X, nm), _zero(Y, nm)))))
    X1 = nm.set()
    exists_first = ExistsSet(X1, And(*sel(X1), first_column(X1, nm)))

    state_clauses = []
    for q in m.states:
        X, Y, Z = nm.set(), nm.set(), nm.set()
        moves = [And(in_column(X, O[t.op], nm), in_column(Z, S[t.target], nm))
                 for t in m.transitions if t.source == q]
        go_on = ExistsSet(Z, And(*sel(Z), next_column(Y, Z, nm), disj(*moves)))
        options = [last_column(Y, nm), go_on] if q == m.final else [go_on]
        state_clauses.append(ForallSet(X, Implies(
            And(*sel(X), in_column(X, S[q], nm)),
            ExistsSet(Y, And(*sel(Y), next_column(X, Y, nm), disj(*options))))))

    op_clauses = []
    for op in OPS:
        X, Y, Z, W = nm.set(), nm.set(), nm.set(), nm.set()
        guard = And(*sel(X, Y, Z, W), next_column(X, Y, nm), next_column(Y, Z, nm),
                    next_column(Z, W, nm), in_column(X, O[op], nm))
        op_clauses.append(ForallSet(X, ForallSet(Y, ForallSet(Z, ForallSet(W, Implies(
            guard, _op_relation(op, X, Y, Z, W, nm)))))))

    body = And(first, exists_first, *state_clauses, *op_clauses)
    for name in [O[op] for op in reversed(OPS)] + [S[q] for q in reversed(m.states)]:
        body = ExistsSet(name, body)
    return body


def machine_to_formula(m: MinskyMachine):
    """Closed formula over {1,2,3,4} satisfiable iff m has an accepting run:
    (a) depth-3 degrees tend to infinity, (b) the flattening is a ruler,
    (c) every selector keeps an almost-constant degree, (d) the column
    degrees minus one describe an accepting run."""
    nm = Namer()
    ones = infinitely_many(1, nm)
    cond_a = degrees_tend_to_infinity(BASE4, 3, nm)
    cond_b = ruler_on(FLAT, nm)
    X = nm.set()
    cond_c = ForallSet(X, Implies(_selector(X, nm), ruler_on(keep_view(X), nm)))
    cond_d = run_condition(m, nm)
    return And(ones, cond_a, cond_b, cond_c, cond_d)


# -- witnesses and direct checkers ------------------------------------------

def _default_growth(t: int) -> int:
    return t + 1


@dataclass(frozen=True)
class WitnessParams:
    description: tuple
    trees: int
    growth: Callable[[int], int] = field(default=_default_growth, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "description", tuple(self.description))
        if self.trees < 1:
            raise ValueError("need at least one tree")
        if not self.description or len(self.description) % 2:
            raise ValueError("a run description has even, nonzero length")
        if any(not isinstance(v, int) or v < 0 for v in self.description):
            raise ValueError("description entries must be natural numbers")
        g = [self.growth(t) for t in range(1, self.trees + 1)]
        if g[0] < 1:
            raise ValueError("depth-3 degrees must be >= 1")
        if any(a >= b for a, b in zip(g, g[1:])):
            raise ValueError("growth must be strictly increasing")


def witness_tree_sequence(p: WitnessParams) -> TreeSeq:
    """T trees of depth 4: root degree len(description), i-th child of
    degree description[i] + 1, depth-3 nodes of tree t with degree g(t)."""
    trees = []
    for t in range(1, p.trees + 1):
        d3 = (LEAF,) * p.growth(t)
        trees.append(tuple((d3,) * (v + 1) for v in p.description))
    return TreeSeq(4, tuple(trees))


@dataclass
class ConditionReport:
    a: bool
    b: bool
    c: bool
    d: bool
    ignore_prefix: int
    root_degrees: list
    child_degrees: list
    depth3_min_degrees: list
    description: Optional[list]

    @property
    def all_true(self) -> bool:
        return self.a and self.b and self.c and self.d

    def to_json(self) -> dict:
        return {
            "a": self.a, "b": self.b, "c": self.c, "d": self.d,
            "ignore_prefix": self.ignore_prefix,
            "semantics": "finite window; 'all but finitely many' = after ignore_prefix trees",
            "trees": [
                {"root_degree": r, "child_degrees": c, "depth3_min_degree": g}
                for r, c, g in zip(self.root_degrees, self.child_degrees,
                                   self.depth3_min_degrees)
            ],
            "description": self.description,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def check_conditions(t: TreeSeq, m: MinskyMachine, ignore_prefix: int = 0) -> ConditionReport:
    """Window reading of conditions (a)-(d) on the trees after the first
    ``ignore_prefix`` ones."""
    if t.depth != 4:
        raise ValueError(f"expected depth-4 trees, got depth {t.depth}")
    if not 0 <= ignore_prefix < len(t.trees):
        raise ValueError(f"ignore_prefix must be in 0..{len(t.trees) - 1}")
    kept = TreeSeq(4, t.trees[ignore_prefix:])
    roots = [len(tree) for tree in kept.trees]
    children = [[len(c) for c in tree] for tree in kept.trees]
    d3_min = [min(len(g) for c in tree for g in c) for tree in kept.trees]

    a = (all(x <= y for x, y in zip(d3_min, d3_min[1:]))
         and d3_min[-1] >= d3_min[0] + 1)
    b = len(set(roots)) == 1
    c = True
    for i in range(max(roots)):
        column = {row[i] for row in children if i < len(row)}
        if len(column) > 1:
            c = False
    desc = [v - 1 for v in children[0]]
    d = len(desc) % 2 == 0 and validate_description(m, desc)
    return ConditionReport(a, b, c, d, ignore_prefix, roots, children, d3_min, desc)


# -- direct predicates mirrored by the formulas ------------------------------

def is_selector_window(t: TreeSeq, chosen: Sequence[int], ignore_prefix: int = 0) -> bool:
    """``chosen[j]`` is the child index picked in tree j; a selector window
    picks the same offset in every tree after the prefix."""
    if len(chosen) != len(t.trees):
        return False
    if any(not 0 <= c < len(tree) for c, tree in zip(chosen, t.trees)):
        return False
    return len(set(chosen[ignore_prefix:])) <= 1


def represents_zero_window(t: TreeSeq, chosen, ignore_prefix: int = 0) -> bool:
    return all(len(t.trees[j][c]) == 1 for j, c in enumerate(chosen) if j >= ignore_prefix)


def increments_window(t: TreeSeq, xs, ys, ignore_prefix: int = 0) -> bool:
    """Dropping one subtree of every Y node leaves the kept X and Y nodes
    with one common degree."""
    degs = set()
    for j in range(ignore_prefix, len(t.trees)):
        tree = t.trees[j]
        dx, dy = len(tree[xs[j]]), len(tree[ys[j]])
        if dy < 2:
            return False
        degs.update((dx, dy - 1))
    return len(degs) <= 1


def copies_window(t: TreeSeq, xs, ys, ignore_prefix: int = 0) -> bool:
    degs = {len(t.trees[j][c]) for cols in (xs, ys)
            for j, c in enumerate(cols) if j >= ignore_prefix}
    return len(degs) <= 1


def flatten(t: TreeSeq) -> TreeSeq:
    """Remove depth-3 nodes, hanging their leaves under the depth-2 nodes."""
    if t.depth != 4:
        raise ValueError("flattening is defined for depth-4 trees")
    return TreeSeq(3, tuple(tuple(tuple(LEAF for g in c for _ in g) for c in tree)
                            for tree in t.trees))


def degree_table(t: TreeSeq) -> dict:
    return {k: degree_sequence(t, k) for k in range(1, t.depth)}

