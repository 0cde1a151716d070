"""Nondeterministic two-counter Minsky machines.

Counters start at zero; ``inc_k`` adds one, ``dec_k`` subtracts one and is
blocked on zero, ``zero_k`` is a guard that passes only on zero.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

OPS = ("inc1", "inc2", "dec1", "dec2", "zero1", "zero2")


class MachineError(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    source: str
    op: str
    target: str


@dataclass(frozen=True)
class MinskyMachine:
    states: tuple
    initial: str
    final: str
    transitions: tuple

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            dup = sorted({s for s in self.states if self.states.count(s) > 1})
            raise MachineError(f"duplicate state names: {', '.join(dup)}")
        known = set(self.states)
        for name, s in (("initial", self.initial), ("final", self.final)):
            if s not in known:
                raise MachineError(f"{name} state {s!r} is not declared")
        for t in self.transitions:
            if t.op not in OPS:
                raise MachineError(f"unknown operation {t.op!r}")
            for s in (t.source, t.target):
                if s not in known:
                    raise MachineError(f"transition {t.source} {t.op} {t.target}: "
                                       f"unknown state {s!r}")


@dataclass(frozen=True)
class Configuration:
    state: str
    c1: int
    c2: int


@dataclass(frozen=True)
class Run:
    configurations: tuple
    transitions: tuple = ()

    def __len__(self):
        return len(self.configurations)

    def to_json(self) -> dict:
        return {
            "configurations": [[c.state, c.c1, c.c2] for c in self.configurations],
            "transitions": [[t.source, t.op, t.target] for t in self.transitions],
        }


def parse_machine(text: str) -> MinskyMachine:
    """Line format: ``states: ...``, ``init: q``, ``final: q``, then
    ``trans: <from> <op> <to>`` lines.  ``#`` starts a comment."""
    states = None
    initial = final = None
    transitions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise MachineError(f"line {lineno}: expected 'key: value'")
        key, words = key.strip(), rest.split()
        if key == "states":
            if states is not None:
                raise MachineError(f"line {lineno}: states declared twice")
            states = tuple(words)
        elif key in ("init", "final"):
            if len(words) != 1:
                raise MachineError(f"line {lineno}: {key} takes one state")
            if key == "init":
                initial = words[0]
            else:
                final = words[0]
        elif key == "trans":
            if len(words) != 3:
                raise MachineError(f"line {lineno}: expected 'trans: <from> <op> <to>'")
            transitions.append(Transition(*words))
        else:
            raise MachineError(f"line {lineno}: unknown key {key!r}")
    if states is None:
        raise MachineError("missing 'states:' line")
    if initial is None:
        raise MachineError("missing 'init:' line")
    if final is None:
        raise MachineError("missing 'final:' line")
    return MinskyMachine(states, initial, final, tuple(transitions))


def format_machine(m: MinskyMachine) -> str:
    lines = [f"states: {' '.join(m.states)}", f"init: {m.initial}", f"final: {m.final}"]
    lines += [f"trans: {t.source} {t.op} {t.target}" for t in m.transitions]
    return "\n".join(lines) + "\n"


def apply_op(op: str, c1: int, c2: int) -> Optional[tuple]:
    """Counter values after ``op``, or None when the op is blocked."""
    if op == "inc1":
        return c1 + 1, c2
    if op == "inc2":
        return c1, c2 + 1
    if op == "dec1":
        return (c1 - 1, c2) if c1 > 0 else None
    if op == "dec2":
        return (c1, c2 - 1) if c2 > 0 else None
    if op == "zero1":
        return (c1, c2) if c1 == 0 else None
    if op == "zero2":
        return (c1, c2) if c2 == 0 else None
    raise MachineError(f"unknown operation {op!r}")


def _successors(m: MinskyMachine, c: Configuration):
    for t in m.transitions:
        if t.source != c.state:
            continue
        after = apply_op(t.op, c.c1, c.c2)
        if after is not None:
            yield t, Configuration(t.target, *after)


def step(m: MinskyMachine, c: Configuration) -> list:
    return [nxt for _, nxt in _successors(m, c)]


def find_accepting_run(m: MinskyMachine, max_len: int, max_counter: int) -> Optional[Run]:
    """Shortest accepting run with at most ``max_len`` configurations and
    counters never above ``max_counter``.  None proves nothing about runs
    outside those bounds."""
    if max_len < 1 or max_counter < 1:
        raise ValueError("bounds must be >= 1")
    start = Configuration(m.initial, 0, 0)
    parent = {start: None}
    frontier = deque([(start, 1)])
    while frontier:
        c, length = frontier.popleft()
        if c.state == m.final:
            return _rebuild(parent, c)
        if length == max_len:
            continue
        for t, nxt in _successors(m, c):
            if nxt.c1 > max_counter or nxt.c2 > max_counter or nxt in parent:
                continue
            parent[nxt] = (c, t)
            frontier.append((nxt, length + 1))
    return None


def _rebuild(parent, c) -> Run:
    configs, trans = [c], []
    while parent[c] is not None:
        c, t = parent[c]
        configs.append(c)
        trans.append(t)
    return Run(tuple(reversed(configs)), tuple(reversed(trans)))


def describe_run(r: Run) -> tuple:
    """Counter pairs of the configurations, flattened; states are dropped."""
    return tuple(v for c in r.configurations for v in (c.c1, c.c2))


def validate_description(m: MinskyMachine, v: Sequence[int]) -> bool:
    """Is there a choice of states making ``v`` an accepting run of ``m``?"""
    v = tuple(v)
    if len(v) < 2 or len(v) % 2:
        raise ValueError("a run description has even length >= 2")
    if v[0] != 0 or v[1] != 0:
        return False
    possible = {m.initial}
    for i in range(2, len(v), 2):
        before, after = (v[i - 2], v[i - 1]), (v[i], v[i + 1])
        possible = {t.target for t in m.transitions
                    if t.source in possible and apply_op(t.op, *before) == after}
        if not possible:
            return False
    return m.final in possible


def accepted_descriptions(m: MinskyMachine, max_entry: int, max_len: int) -> tuple:
    """Every description with entries ``<= max_entry`` and even length
    ``<= max_len`` that :func:`validate_description` accepts, plus the
    number of prefixes visited.

    Walks the tree of descriptions pair by pair with the same state-set
    recurrence; a prefix whose state set is empty cannot be extended into
    an accepted description, so its subtree is skipped without loss.
    """
    found = []
    visited = 0
    if max_len < 2:
        return found, visited
    stack = [((0, 0), frozenset({m.initial}))]
    values = range(max_entry + 1)
    while stack:
        prefix, states = stack.pop()
        visited += 1
        if m.final in states:
            found.append(prefix)
        if len(prefix) + 2 > max_len:
            continue
        before = prefix[-2:]
        for a in values:
            for b in values:
                nxt = frozenset(t.target for t in m.transitions
                                if t.source in states and apply_op(t.op, *before) == (a, b))
                if nxt:
                    stack.append((prefix + (a, b), nxt))
    found.sort(key=lambda v: (len(v), v))
    return found, visited


def run_from_json(data: dict) -> Run:
    configs = tuple(Configuration(s, int(a), int(b)) for s, a, b in data["configurations"])
    trans = tuple(Transition(*t) for t in data.get("transitions", ()))
    return Run(configs, trans)


def description_to_json(v: Sequence[int]) -> str:
    return json.dumps(list(v))
