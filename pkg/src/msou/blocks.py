"""Registry of the first-order and U-free pieces the reduction is built from.

Each entry pairs a formula with a checker that answers the same question
from the decoded tree sequence (leaf paths), never from the raw letters.
Cross-checking the two on every small decodable word is what gives
confidence in the larger formulas assembled from these pieces.

Assignment domains: position variables range over all positions unless the
block is about view leaves, in which case they range over positions labeled
``n`` (everything else fails the leaf guard on both sides).  Set variables
range over subsets of the nodes they are meant to denote (depth-k leaders),
which is also what the guards of each block require.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from . import reduction as R
from .codec import CodecError, decode_tree_sequence
from .evaluate import EvalBudget, exhaustive_check
from .logic import And, In, Label


class WordTree:
    """Leaf paths of ``decode(word)``: position -> (tree, c2, ..., cn)."""

    def __init__(self, word, n):
        self.word = tuple(word)
        self.n = n
        t = decode_tree_sequence(word, n)
        self.paths = dict(zip(t.leaf_positions, t.leaf_paths()))
        self.leaves = sorted(self.paths)
        self._first = {}
        for p in self.leaves:
            for k in range(1, n + 1):
                self._first.setdefault(self.paths[p][:k], p)
        self.degree = {}
        for p in self.leaves:
            path = self.paths[p]
            for k in range(1, n):
                self.degree.setdefault(path[:k], set()).add(path[k])
        self.degree = {node: len(kids) for node, kids in self.degree.items()}

    def is_leaf(self, p):
        return p in self.paths

    def node(self, p, k):
        return self.paths[p][:k]

    def is_leader(self, k, p):
        return p in self.paths and self._first[self.paths[p][:k]] == p

    def leaders(self, k):
        return [p for p in self.leaves if self.is_leader(k, p)]

    def same(self, k, x, y):
        return self.is_leaf(x) and self.is_leaf(y) and self.node(x, k) == self.node(y, k)


@lru_cache(maxsize=None)
def word_tree(word, n):
    return WordTree(word, n)


def decodable(n):
    def check(word):
        try:
            word_tree(tuple(word), n)
        except CodecError:
            return False
        return True
    return check


# -- views over the tree: which leaves are kept, how view nodes are formed ---

class TreeView:
    """``shift`` = 0: view depth k is tree depth k; shift = 1: view depth k
    is tree depth k + 1 (the first level is cut away)."""

    def __init__(self, wt, shift, kept):
        self.wt, self.shift, self.kept = wt, shift, kept

    def node(self, p, k):
        return self.wt.node(p, k + self.shift)

    def leaf(self, p):
        return p in self.kept

    def leader(self, k, p):
        if not self.leaf(p):
            return False
        if k == 3:
            return True
        return all(q >= p for q in self.kept if self.node(q, k) == self.node(p, k))

    def child(self, k, x, y):
        return (self.leader(k, x) and self.leader(k + 1, y)
                and self.node(x, k) == self.node(y, k))


def _tv_flat(wt, env):
    return TreeView(wt, 0, set(wt.leaves))


def _nodes2(wt, names, env):
    return {wt.node(r, 2) for v in names for r in env[v]}


def _tv_keep(wt, env):
    chosen = _nodes2(wt, "X", env)
    return TreeView(wt, 1, {p for p in wt.leaves if wt.node(p, 2) in chosen})


def _tv_sel(wt, env):
    kept = {p for p in wt.leaves for r in env["X"]
            if wt.paths[p][0] == wt.paths[r][0] and wt.paths[p][1] <= wt.paths[r][1]}
    return TreeView(wt, 0, kept)


def _tv_inc(wt, env):
    xs, ys = _nodes2(wt, "X", env), _nodes2(wt, "Y", env)
    kept = {p for p in wt.leaves
            if wt.node(p, 2) in xs or (wt.node(p, 2) in ys and wt.paths[p][2] != 0)}
    return TreeView(wt, 1, kept)


def _tv_copy(wt, env):
    both = _nodes2(wt, "XY", env)
    return TreeView(wt, 1, {p for p in wt.leaves if wt.node(p, 2) in both})


VIEWS = {
    "flat": (lambda: R.FLAT, (), _tv_flat),
    "keep": (lambda: R.keep_view("X"), ("X",), _tv_keep),
    "sel": (lambda: R.selector_view("X"), ("X",), _tv_sel),
    "inc": (lambda: R.increment_view("X", "Y"), ("X", "Y"), _tv_inc),
    "copy": (lambda: R.copy_view("X", "Y"), ("X", "Y"), _tv_copy),
}


# -- domains ----------------------------------------------------------------

def _subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        for c in itertools.combinations(items, r):
            yield frozenset(c)


def domain(pos=(), sets=(), pos_from="all"):
    """``sets``: tuples (name, depth) with subsets of depth-k leaders;
    depth 0 means all subsets of positions."""
    def gen(wt):
        positions = range(len(wt.word)) if pos_from == "all" else wt.leaves
        set_choices = []
        for _, k in sets:
            base = range(len(wt.word)) if k == 0 else wt.leaders(k)
            set_choices.append(list(_subsets(base)))
        for ps in itertools.product(positions, repeat=len(pos)):
            for ss in itertools.product(*set_choices):
                env = dict(zip(pos, ps))
                env.update(zip((name for name, _ in sets), ss))
                yield env
    return gen


@dataclass(frozen=True)
class Block:
    name: str
    n: int
    build: Callable  # Namer -> Formula
    check: Callable  # (WordTree, env) -> bool
    domain: Callable  # WordTree -> iterable of envs

    def formula(self):
        return self.build(R.Namer({"x", "y", "X", "Y", "S"}))


def _registry():
    out = []

    def add(name, n, build, check, dom):
        out.append(Block(name, n, build, check, dom))

    for n in (3, 4):
        V = R.base_view(n)
        add(f"leaf/n{n}", n, lambda nm, V=V: V.leaf("x", nm),
            lambda wt, e: wt.is_leaf(e["x"]), domain(("x",)))
        for k in range(1, n):
            add(f"same{k}/n{n}", n,
                lambda nm, V=V, k=k: And(V.leaf("x", nm), V.leaf("y", nm),
                                         V.same(k, "x", "y", nm)),
                lambda wt, e, k=k: wt.same(k, e["x"], e["y"]), domain(("x", "y")))
            add(f"child{k}/n{n}", n, lambda nm, V=V, k=k: V.child(k, "x", "y", nm),
                lambda wt, e, k=k: (wt.is_leader(k, e["x"]) and wt.is_leader(k + 1, e["y"])
                                    and wt.node(e["x"], k) == wt.node(e["y"], k)),
                domain(("x", "y")))
        for k in range(1, n + 1):
            add(f"leader{k}/n{n}", n, lambda nm, V=V, k=k: V.leader(k, "x", nm),
                lambda wt, e, k=k: wt.is_leader(k, e["x"]), domain(("x",)))

    V3 = R.BASE3
    for k in (1, 2):
        add(f"node_set{k}/n3", 3, lambda nm, k=k: V3.node_set(k, "X", nm),
            lambda wt, e, k=k: all(wt.is_leader(k, p) for p in e["X"]),
            domain(sets=[("X", 0)]))
    add("infinite_set/n3", 3, lambda nm: R.infinite_set("X", nm),
        lambda wt, e: all(any(q >= p for q in e["X"]) for p in range(len(wt.word))),
        domain(sets=[("X", 0)]))
    add("infinitely_many_1/n3", 3, lambda nm: R.infinitely_many(1, nm),
        lambda wt, e: wt.word[-1] == 1, domain())

    def alt_check(wt, e):
        X, Y = sorted(e["X"]), sorted(e["Y"])
        def sep(A, B):
            return all(any(a < b < a2 for b in B) for a, a2 in zip(A, A[1:]))
        return sep(X, Y) and sep(Y, X)
    add("alternating/n3", 3, lambda nm: R.alternating("X", "Y", nm), alt_check,
        domain(sets=[("X", 1), ("Y", 1)]))

    def choice_check(wt, e):
        trees = {wt.paths[x][0] for x in e["X"]}
        picks = [wt.paths[s][0] for s in e["S"]]
        return sorted(picks) == sorted(trees)
    add("child_choice/n3", 3,
        lambda nm: And(V3.node_set(1, "X", nm), R.child_choice(V3, "X", "S", nm)),
        choice_check, domain(sets=[("X", 1), ("S", 2)]))

    V4 = R.BASE4

    def one_per_tree(wt, S):
        return sorted(wt.paths[s][0] for s in S) == sorted({wt.paths[p][0] for p in wt.leaves})

    add("selector_skeleton/n4", 4, lambda nm: R.selector_skeleton("X", nm),
        lambda wt, e: one_per_tree(wt, e["X"]), domain(sets=[("X", 2)]))
    add("degree_one/n4", 4,
        lambda nm: And(V4.leader(2, "x", nm), R.has_degree_one("x", nm)),
        lambda wt, e: wt.is_leader(2, e["x"]) and wt.degree[wt.node(e["x"], 2)] == 1,
        domain(("x",)))
    add("zero_skeleton/n4", 4, lambda nm: R.zero_skeleton("X", nm),
        lambda wt, e: all(wt.degree[wt.node(x, 2)] == 1 for x in e["X"]),
        domain(sets=[("X", 2)]))

    def almost(wt, members, prop):
        return any(all(prop(x) for x in members if x > p) for p in range(len(wt.word)))

    add("zero/n4", 4, lambda nm: R._zero("X", nm),
        lambda wt, e: almost(wt, e["X"], lambda x: wt.degree[wt.node(x, 2)] == 1),
        domain(sets=[("X", 2)]))

    def sibling(wt, x, y):
        return (wt.is_leader(2, x) and wt.is_leader(2, y) and wt.paths[x][0] == wt.paths[y][0]
                and wt.paths[y][1] == wt.paths[x][1] + 1)

    add("next_sibling/n4", 4, lambda nm: R.next_sibling("x", "y", nm),
        lambda wt, e: sibling(wt, e["x"], e["y"]), domain(("x", "y")))

    def nxt_skel(wt, e):
        return (one_per_tree(wt, e["X"]) and one_per_tree(wt, e["Y"])
                and all(sibling(wt, x, y) for x in e["X"] for y in e["Y"]
                        if wt.paths[x][0] == wt.paths[y][0]))
    add("next_column_skeleton/n4", 4, lambda nm: R.next_column_skeleton("X", "Y", nm),
        nxt_skel, domain(sets=[("X", 2), ("Y", 2)]))

    def nxt(wt, e):
        return any(all(sibling(wt, x, y) for x in e["X"] for y in e["Y"]
                       if x > p and wt.paths[x][0] == wt.paths[y][0])
                   for p in range(len(wt.word)))
    add("next_column/n4", 4, lambda nm: R.next_column("X", "Y", nm), nxt,
        domain(sets=[("X", 2), ("Y", 2)]))
    add("first_column/n4", 4, lambda nm: R.first_column("X", nm),
        lambda wt, e: almost(wt, e["X"], lambda x: wt.is_leader(1, x)),
        domain(sets=[("X", 2)]))
    add("last_column/n4", 4, lambda nm: R.last_column("X", nm),
        lambda wt, e: almost(wt, e["X"], lambda x: not any(
            sibling(wt, x, z) for z in range(len(wt.word)))),
        domain(sets=[("X", 2)]))
    add("in_column/n4", 4, lambda nm: R.in_column("X", "S", nm),
        lambda wt, e: almost(wt, e["X"], lambda x: x in e["S"]),
        domain(sets=[("X", 2), ("S", 2)]))

    for vname, (mk, set_names, tview) in VIEWS.items():
        sets = [(s, 2) for s in set_names]

        def guarded(nm, body, set_names=set_names):
            return And(*[V4.node_set(2, s, nm) for s in set_names], body)

        add(f"{vname}.leaf/n4", 4,
            lambda nm, mk=mk, guarded=guarded: guarded(nm, mk().leaf("x", nm)),
            lambda wt, e, tview=tview: tview(wt, e).leaf(e["x"]),
            domain(("x",), sets, pos_from="leaves"))
        for k in (1, 2):
            add(f"{vname}.leader{k}/n4", 4,
                lambda nm, mk=mk, k=k, guarded=guarded: guarded(nm, mk().leader(k, "x", nm)),
                lambda wt, e, tview=tview, k=k: tview(wt, e).leader(k, e["x"]),
                domain(("x",), sets, pos_from="leaves"))
            add(f"{vname}.child{k}/n4", 4,
                lambda nm, mk=mk, k=k, guarded=guarded: guarded(
                    nm, mk().child(k, "x", "y", nm)),
                lambda wt, e, tview=tview, k=k: tview(wt, e).child(k, e["x"], e["y"]),
                domain(("x", "y"), sets, pos_from="leaves"))
    return out


BLOCKS = _registry()


@dataclass
class BlockResult:
    name: str
    words: int
    checks: int
    disagreements: list


def check_block(block: Block, max_len: int = 8, u_threshold: int = 2,
                stop_after: int = 5) -> BlockResult:
    keep = decodable(block.n)
    counted = {"words": 0, "checks": 0}

    def word_filter(word):
        ok = keep(word)
        counted["words"] += ok
        return ok

    def predicate(word, env):
        counted["checks"] += 1
        return block.check(word_tree(tuple(word), block.n), env)

    bad = exhaustive_check(block.formula(), predicate, block.n, max_len,
                           EvalBudget(u_threshold=u_threshold, max_word_length=max_len),
                           word_filter=word_filter,
                           assignments=lambda w: block.domain(word_tree(tuple(w), block.n)),
                           stop_after=stop_after)
    return BlockResult(block.name, counted["words"], counted["checks"], bad)
