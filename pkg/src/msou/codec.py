"""Words over ``{1..n}`` as sequences of depth-n trees.

A tree is a nested tuple: a node at depth ``k < n`` is the tuple of its
children, a leaf (depth ``n``) is the empty tuple.  Roots sit at depth 1.

Leaves are the positions labeled ``n``.  Two leaves share an ancestor at
depth ``i`` iff no position strictly between them carries a label in
``1..i``; a label 1 in between puts them in different trees.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

LEAF = ()


class CodecError(ValueError):
    pass


@dataclass(frozen=True)
class TreeSeq:
    """Finite sequence of trees of uniform depth.

    Equality compares shapes only; ``leaf_positions`` (word positions of the
    leaves in leaf order) and ``incomplete_tail`` are bookkeeping.
    """
    depth: int
    trees: tuple
    leaf_positions: Optional[tuple] = field(default=None, compare=False)
    # set by decode: the last tree of a prefix may still grow
    incomplete_tail: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.depth < 2:
            raise CodecError("tree sequences need depth >= 2")
        for t in self.trees:
            _check_node(t, 1, self.depth)
        if self.leaf_positions is not None:
            if len(self.leaf_positions) != self.num_leaves():
                raise CodecError("leaf_positions does not match the number of leaves")
            if any(a >= b for a, b in zip(self.leaf_positions, self.leaf_positions[1:])):
                raise CodecError("leaf positions must increase in leaf order")

    def num_leaves(self) -> int:
        return sum(_count_leaves(t) for t in self.trees)

    def positions(self) -> tuple:
        if self.leaf_positions is not None:
            return self.leaf_positions
        return tuple(range(self.num_leaves()))

    def complete_trees(self) -> tuple:
        return self.trees[:-1] if self.incomplete_tail else self.trees

    def leaf_paths(self) -> list:
        """Per leaf (leaf order): the child-index path ``(tree, c2, ..., cn)``."""
        paths = []

        def walk(node, path):
            if node == LEAF and len(path) == self.depth:
                paths.append(tuple(path))
                return
            for i, c in enumerate(node):
                walk(c, path + [i])

        for t_index, t in enumerate(self.trees):
            walk(t, [t_index])
        return paths


def _check_node(node, k, n):
    if not isinstance(node, tuple):
        raise CodecError(f"tree nodes must be tuples, got {type(node).__name__}")
    if k == n:
        if node != LEAF:
            raise CodecError("leaves must sit exactly at depth n")
        return
    if not node:
        raise CodecError(f"internal node at depth {k} has no children")
    for c in node:
        _check_node(c, k + 1, n)


def _count_leaves(node) -> int:
    if node == LEAF:
        return 1
    return sum(_count_leaves(c) for c in node)


def nodes_at_depth(t: TreeSeq, k: int) -> list:
    """All depth-k nodes in leaf order."""
    if not 1 <= k <= t.depth:
        raise CodecError(f"depth {k} out of range 1..{t.depth}")
    level = list(t.trees)
    for _ in range(k - 1):
        level = [c for node in level for c in node]
    return level


def check_word(letters: Sequence[int], n: int) -> None:
    for i, a in enumerate(letters):
        if not isinstance(a, int) or not 1 <= a <= n:
            raise CodecError(f"letter {a!r} at position {i} is outside 1..{n}")


def decode_tree_sequence(letters: Sequence[int], n: int) -> TreeSeq:
    check_word(letters, n)
    if n < 2:
        raise CodecError("decoding needs an alphabet of size >= 2")
    if not letters or letters[0] != 1:
        raise CodecError("word must start with letter 1")
    if n not in letters:
        raise CodecError(f"word has no position labeled {n}")

    trees: list = []
    # stack[k-1] is the open depth-k node (list of children) of the current tree
    stack: list = []
    positions = []
    pending = 1
    for pos, a in enumerate(letters):
        if a < n:
            pending = min(pending, a)
            continue
        if pending == 1 or not stack:
            root: list = []
            trees.append(root)
            stack = [root]
        else:
            # shares the ancestors at depths < pending with the previous leaf
            del stack[pending - 1:]
        while len(stack) < n - 1:
            child: list = []
            stack[-1].append(child)
            stack.append(child)
        stack[-1].append(LEAF)
        positions.append(pos)
        pending = n

    return TreeSeq(n, tuple(_freeze(t) for t in trees), tuple(positions), incomplete_tail=True)


def _freeze(node):
    if node == LEAF:
        return LEAF
    return tuple(_freeze(c) for c in node)


def encode_tree_sequence(t: TreeSeq) -> list:
    """Canonical word: one 1 per tree, one separator ``k+1`` between siblings
    at depth ``k+1``, nothing redundant."""
    n = t.depth
    word: list = []

    def emit(node, k):
        if k == n:
            word.append(n)
            return
        for i, c in enumerate(node):
            if i and k + 1 < n:
                word.append(k + 1)
            emit(c, k + 1)

    for tree in t.trees:
        word.append(1)
        emit(tree, 1)
    return word


def degree_sequence(t: TreeSeq, k: int) -> list:
    if not 1 <= k < t.depth:
        raise CodecError(f"depth {k} out of range 1..{t.depth - 1}")
    return [len(node) for node in nodes_at_depth(t, k)]


def lca_depth(t: TreeSeq, x: int, y: int) -> Optional[int]:
    """Depth of the deepest common ancestor of leaves x and y (given by word
    position), or None when they lie in different trees."""
    pos = t.positions()
    index = {p: i for i, p in enumerate(pos)}
    if x not in index or y not in index:
        raise CodecError(f"unknown leaf: {x if x not in index else y}")
    paths = t.leaf_paths()
    px, py = paths[index[x]], paths[index[y]]
    if x == y:
        return t.depth
    common = 0
    for a, b in zip(px, py):
        if a != b:
            break
        common += 1
    return common or None


def word_lca_depth(letters: Sequence[int], n: int, x: int, y: int) -> Optional[int]:
    """The same quantity read straight off the word."""
    if x == y:
        return n
    lo, hi = min(x, y), max(x, y)
    between = letters[lo + 1:hi]
    m = min(between, default=n)
    return (min(m, n) - 1) or None


# -- text forms ------------------------------------------------------------

def parse_word(text: str) -> list:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise CodecError(f"bad word: {exc}") from None


def format_word(letters: Sequence[int]) -> str:
    return " ".join(str(a) for a in letters)


def tree_to_text(t: TreeSeq) -> str:
    """Indented form: ``node`` lines for internal nodes, ``leaf [@pos]`` lines."""
    lines = [f"treeseq depth={t.depth}"]
    positions = iter(t.leaf_positions) if t.leaf_positions is not None else None

    def walk(node, k):
        pad = "  " * (k - 1)
        if k == t.depth:
            lines.append(pad + ("leaf" if positions is None else f"leaf @{next(positions)}"))
            return
        lines.append(pad + "node")
        for c in node:
            walk(c, k + 1)

    for tree in t.trees:
        walk(tree, 1)
    return "\n".join(lines) + "\n"


def tree_from_text(text: str) -> TreeSeq:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("treeseq"):
        raise CodecError("missing 'treeseq depth=N' header")
    try:
        depth = int(lines[0].split("depth=")[1])
    except (IndexError, ValueError):
        raise CodecError("bad header, expected 'treeseq depth=N'") from None

    trees: list = []
    stack: list = []
    positions: list = []
    for lineno, line in enumerate(lines[1:], start=2):
        indent = len(line) - len(line.lstrip(" "))
        if indent % 2:
            raise CodecError(f"line {lineno}: odd indentation")
        k = indent // 2 + 1
        word = line.split()
        if k > depth or k > len(stack) + 1:
            raise CodecError(f"line {lineno}: bad nesting")
        del stack[k - 1:]
        if word[0] == "node":
            if k == depth:
                raise CodecError(f"line {lineno}: internal node at leaf depth")
            node: list = []
            (trees if k == 1 else stack[-1]).append(node)
            stack.append(node)
        elif word[0] == "leaf":
            if k != depth:
                raise CodecError(f"line {lineno}: leaf at depth {k}, expected {depth}")
            stack[-1].append(LEAF)
            if len(word) > 1:
                positions.append(int(word[1].lstrip("@")))
        else:
            raise CodecError(f"line {lineno}: expected 'node' or 'leaf'")
    frozen = tuple(_freeze(tr) for tr in trees)
    leaf_pos = tuple(positions) if positions else None
    return TreeSeq(depth, frozen, leaf_pos)


def tree_to_dot(t: TreeSeq, name: str = "treeseq") -> str:
    out = [f"digraph {name} {{", "  node [shape=circle, label=\"\"];"]
    counter = iter(range(1 << 62))
    positions: Iterator = iter(t.positions())

    def walk(node, k, tree_index, parent):
        nid = f"n{next(counter)}"
        attrs = [f"tree={tree_index}", f"depth={k}"]
        if k == t.depth:
            p = next(positions)
            attrs += [f"pos={p}", f"label=\"{p}\"", "shape=box"]
        out.append(f"  {nid} [{', '.join(attrs)}];")
        if parent is not None:
            out.append(f"  {parent} -> {nid};")
        if k < t.depth:
            for c in node:
                walk(c, k + 1, tree_index, nid)

    for i, tree in enumerate(t.trees):
        walk(tree, 1, i, None)
    out.append("}")
    return "\n".join(out) + "\n"
