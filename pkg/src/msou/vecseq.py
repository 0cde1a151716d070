"""Finite windows of number and vector sequences under boundedness semantics.

Two number sequences are asymptotically equivalent when they are bounded on
the same sets of positions.  On a finite window this is checked through a
fixed transfer pair ``(B, B')``: wherever one side is ``<= B`` the other must
be ``<= B'``.  Growing windows with fixed parameters is how callers probe
stabilisation.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from . import _backend

DEFAULT_MIX_BUDGET = 1 << 20


class WindowError(ValueError):
    pass


class MixBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EquivParams:
    B: int
    B_prime: int

    def __post_init__(self):
        if self.B < 0 or self.B_prime < 0:
            raise WindowError("transfer bounds must be natural numbers")
        if self.B > self.B_prime:
            raise WindowError(f"need B <= B', got B={self.B}, B'={self.B_prime}")


@dataclass(frozen=True)
class MixResult:
    is_mix: bool
    counterexample: Optional[tuple] = None

    def __bool__(self):
        return self.is_mix


def check_number_window(f: Sequence[int]) -> tuple:
    f = tuple(f)
    if not f:
        raise WindowError("a window needs at least one position")
    if any(not isinstance(v, int) or v < 0 for v in f):
        raise WindowError("window entries must be natural numbers")
    return f


def check_vector_window(F: Sequence[Sequence[int]], allow_empty: bool = False) -> tuple:
    F = tuple(tuple(v) for v in F)
    if not F:
        raise WindowError("a window needs at least one position")
    for i, v in enumerate(F):
        if not v and not allow_empty:
            raise WindowError(f"vector at position {i} is empty")
        if any(not isinstance(x, int) or x < 0 for x in v):
            raise WindowError(f"vector at position {i} has a non-natural entry")
    return F


def _same_length(a, b):
    if len(a) != len(b):
        raise WindowError(f"window lengths differ: {len(a)} vs {len(b)}")


def select(F, s: Sequence[int]) -> tuple:
    """The number window picking coordinate ``s[i]`` of the i-th vector."""
    F = check_vector_window(F)
    _same_length(F, s)
    for i, (v, j) in enumerate(zip(F, s)):
        if not 0 <= j < len(v):
            raise WindowError(f"selection index {j} out of range at position {i}")
    return tuple(v[j] for v, j in zip(F, s))


def selections(F) -> Iterator[tuple]:
    """All selections of F, lexicographically (last position varies fastest)."""
    F = check_vector_window(F)
    return itertools.product(*(range(len(v)) for v in F))


def selection_count(F) -> int:
    return math.prod(len(v) for v in F)


def window_equiv(f, g, p: EquivParams) -> bool:
    f, g = check_number_window(f), check_number_window(g)
    _same_length(f, g)
    B, Bp = p.B, p.B_prime
    return all(not (a <= B and b > Bp) and not (b <= B and a > Bp) for a, b in zip(f, g))


def is_window_mix(F, G, p: EquivParams, budget: int = DEFAULT_MIX_BUDGET) -> MixResult:
    """Is every selection of F window-equivalent to some selection of G?

    Exhaustive in both quantifiers; refuses (rather than truncating) when
    either side has more than ``budget`` selections.  A negative answer
    carries the least violating selection of F.
    """
    F, G = check_vector_window(F), check_vector_window(G)
    _same_length(F, G)
    for name, W in (("F", F), ("G", G)):
        if selection_count(W) > budget:
            raise MixBudgetExceeded(
                f"{name} has {selection_count(W)} selections, budget is {budget}")
    f_vals, f_off = _flatten(F)
    g_vals, g_off = _flatten(G)
    witness = _backend.mix_search(f_vals, f_off, g_vals, g_off, p.B, p.B_prime)
    if witness is None:
        return MixResult(True)
    return MixResult(False, tuple(witness))


def _flatten(W):
    vals, offsets = [], [0]
    for v in W:
        vals.extend(v)
        offsets.append(len(vals))
    return vals, offsets


def min_dominate(h, f) -> tuple:
    """Pointwise minimum: a window below ``f`` that agrees with ``h`` wherever
    ``f`` is large."""
    h, f = check_number_window(h), check_number_window(f)
    _same_length(h, f)
    return tuple(min(a, b) for a, b in zip(h, f))


def min_dominate_vectors(H, F) -> tuple:
    H, F = check_vector_window(H), check_vector_window(F)
    _same_length(H, F)
    if any(len(a) != len(b) for a, b in zip(H, F)):
        raise WindowError("vector windows must have matching dimensions")
    return tuple(tuple(min(x, y) for x, y in zip(a, b)) for a, b in zip(H, F))


def tends_to_infinity_window(F, thresholds: Iterable[tuple]) -> bool:
    """For each ``(n, c)``: every vector at position ``>= c`` has all
    coordinates ``>= n``."""
    F = check_vector_window(F, allow_empty=True)
    for n, cutoff in thresholds:
        if not 0 <= cutoff <= len(F):
            raise WindowError(f"cutoff {cutoff} outside the window")
        if any(x < n for v in F[cutoff:] for x in v):
            return False
    return True


def dimension_compare(F1, F2) -> list:
    F1 = check_vector_window(F1, allow_empty=True)
    F2 = check_vector_window(F2, allow_empty=True)
    _same_length(F1, F2)
    return [i for i, (a, b) in enumerate(zip(F1, F2)) if len(a) > len(b)]


def identity_grid_window(d: int, side: int) -> tuple:
    """All points of ``{0..side-1}^d``, each as its own vector, ordered by
    coordinate sum and then lexicographically."""
    if d < 1 or side < 1:
        raise WindowError("need d >= 1 and side >= 1")
    points = itertools.product(range(side), repeat=d)
    return tuple(sorted(points, key=lambda pt: (sum(pt), pt)))


def scale_window(F, factor: int) -> tuple:
    return tuple(tuple(x * factor for x in v) for v in F)


def projection_candidates(F, keep: int) -> Iterator[tuple]:
    """Every window obtained by keeping ``keep`` coordinates of each vector
    (in their original order)."""
    F = check_vector_window(F)
    choices = [list(itertools.combinations(range(len(v)), keep)) for v in F]
    for pick in itertools.product(*choices):
        yield tuple(tuple(v[j] for j in idx) for v, idx in zip(F, pick))


@dataclass(frozen=True)
class IdentityHarnessResult:
    d: int
    side: int
    params: EquivParams
    candidates: int
    refuted: int
    # candidate window -> least counterexample selection of the identity grid
    counterexamples: tuple

    @property
    def all_refuted(self) -> bool:
        return self.refuted == self.candidates


def identity_mix_harness(side: int, d: int = 2, budget: int = DEFAULT_MIX_BUDGET,
                         keep_examples: int = 0) -> IdentityHarnessResult:
    """Finite evidence that the d-dimensional identity is no mix of any
    (d-1)-dimensional coordinate projection of itself.

    The grid is scaled by ``side`` so every nonzero entry exceeds
    ``B' = side - 1``; the transfer pair is ``(0, side - 1)``.
    """
    F = scale_window(identity_grid_window(d, side), side)
    p = EquivParams(0, side - 1)
    refuted = total = 0
    examples = []
    for G in projection_candidates(F, d - 1):
        total += 1
        r = is_window_mix(F, G, p, budget)
        if not r.is_mix:
            refuted += 1
            if len(examples) < keep_examples:
                examples.append((G, r.counterexample))
    return IdentityHarnessResult(d, side, p, total, refuted, tuple(examples))


# -- JSON ------------------------------------------------------------------

def window_to_json(F) -> str:
    return json.dumps([list(v) for v in F])


def window_from_json(text: str) -> tuple:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WindowError(f"bad JSON: {exc}") from None
    if not isinstance(data, list) or not all(isinstance(v, list) for v in data):
        raise WindowError("expected a JSON list of lists of naturals")
    return check_vector_window(data, allow_empty=True)


def number_window_from_json(text: str) -> tuple:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WindowError(f"bad JSON: {exc}") from None
    if not isinstance(data, list):
        raise WindowError("expected a JSON list of naturals")
    return check_number_window(data)
