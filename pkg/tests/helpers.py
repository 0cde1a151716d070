"""Shared generators for the test suite."""
import random
from pathlib import Path

from hypothesis import strategies as st

from msou.codec import LEAF, TreeSeq
from msou.logic import (And, ExistsPos, ExistsSet, ForallPos, ForallSet, Implies, In,
                        Label, LessEq, Not, Or, Unbounded)
from msou.minsky import OPS, MinskyMachine, Transition

MACHINES = Path(__file__).resolve().parent.parent / "machines"


def random_node(rng, depth, n, budget):
    """A depth-``depth`` node of an n-level tree using at most ``budget[0]``
    more leaves (at least one)."""
    if depth == n:
        budget[0] -= 1
        return LEAF
    kids = [random_node(rng, depth + 1, n, budget)]
    while budget[0] > 0 and rng.random() < 0.45:
        kids.append(random_node(rng, depth + 1, n, budget))
    return tuple(kids)


def random_treeseq(rng, max_n=4, max_leaves=25):
    n = rng.randint(2, max_n)
    budget = [rng.randint(1, max_leaves)]
    trees = [random_node(rng, 1, n, budget)]
    while budget[0] > 0 and rng.random() < 0.5:
        trees.append(random_node(rng, 1, n, budget))
    return TreeSeq(n, tuple(trees))


def random_machine(rng, max_states=5, max_trans=8):
    k = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(k))
    trans = tuple(Transition(rng.choice(states), rng.choice(OPS), rng.choice(states))
                  for _ in range(rng.randint(0, max_trans)))
    return MinskyMachine(states, states[0], rng.choice(states), trans)


POS_NAMES = ("x", "y", "z")
SET_NAMES = ("X", "Y")


def formulas(max_depth=8, n=3):
    """Closed-or-open formulas over a small variable pool (all declared free
    when parsing)."""
    pos = st.sampled_from(POS_NAMES)
    sets = st.sampled_from(SET_NAMES)
    atoms = st.one_of(
        st.builds(LessEq, pos, pos),
        st.builds(Label, st.integers(1, n), pos),
        st.builds(In, pos, sets),
    )

    def extend(inner):
        many = st.lists(inner, min_size=0, max_size=3)
        return st.one_of(
            st.builds(Not, inner),
            many.map(lambda xs: And(*xs)),
            many.map(lambda xs: Or(*xs)),
            st.builds(Implies, inner, inner),
            st.builds(ExistsPos, pos, inner),
            st.builds(ForallPos, pos, inner),
            st.builds(ExistsSet, sets, inner),
            st.builds(ForallSet, sets, inner),
            st.builds(Unbounded, sets, inner),
        )
    return st.recursive(atoms, extend, max_leaves=max_depth * 2)


def seeded(seed):
    return random.Random(seed)


# -- witness mutations: each should break exactly one of (a)-(d) -------------

def _retree(t, trees):
    return TreeSeq(t.depth, tuple(trees))


def bump_child_degree(t, tree_index=-1, child=0):
    """One more depth-3 node under one depth-2 node: breaks (c)."""
    trees = list(t.trees)
    tree = list(trees[tree_index])
    node = tree[child]
    tree[child] = node + (node[0],)
    trees[tree_index] = tuple(tree)
    return _retree(t, trees)


def extra_root_child(t, tree_index=-1):
    """A new last child under one root: breaks (b)."""
    trees = list(t.trees)
    tree = trees[tree_index]
    trees[tree_index] = tree + ((tree[0][0],),)
    return _retree(t, trees)


def flatten_growth(t):
    """Every depth-3 node gets the degree of the first one: breaks (a)."""
    g = len(t.trees[0][0][0])
    return _retree(t, [tuple(tuple((LEAF,) * g for _ in c) for c in tree) for tree in t.trees])


def shrink_last_growth(t):
    """One depth-3 node of the last tree drops to degree 1: breaks (a)."""
    trees = list(t.trees)
    tree = list(trees[-1])
    tree[0] = ((LEAF,),) + tree[0][1:]
    trees[-1] = tuple(tree)
    return _retree(t, trees)


def shift_column(t, child=0):
    """Column ``child`` gets one more depth-3 node in every tree; the
    description starts off nonzero and (d) fails."""
    for i in range(len(t.trees)):
        t = bump_child_degree(t, i, child)
    return t


MUTATIONS = {
    "a": [flatten_growth, shrink_last_growth],
    "b": [extra_root_child],
    "c": [bump_child_degree],
    "d": [shift_column],
}


# lines printed by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []
