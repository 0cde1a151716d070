import itertools

import pytest
from hypothesis import given, settings, strategies as st

from msou import reduction as R
from msou.codec import decode_tree_sequence, lca_depth
from msou.evaluate import (BudgetExceeded, EvalBudget, EvaluationError, all_words,
                           evaluate, exhaustive_check)
from msou.logic import Alphabet, And, parse_formula

A3 = Alphabet(3)
U_ALL3 = "(U X (forall x (implies (in x X) (label 3 x))))"


def f(text, free=()):
    return parse_formula(text, A3, free=free)


def test_exists_label():
    assert evaluate(f("(exists x (label 3 x))"), [1, 2, 3])


def test_unbounded_threshold():
    assert evaluate(f(U_ALL3), [1, 2, 3, 3], budget=EvalBudget(u_threshold=2))
    assert not evaluate(f(U_ALL3), [1, 2, 3, 3], budget=EvalBudget(u_threshold=3))


@pytest.mark.parametrize("word", [[], [1], [2, 3, 1]])
def test_reflexivity(word):
    assert evaluate(f("(forall x (<= x x))"), word)


def test_label_predicate_no_disagreement():
    g = f("(label 1 x)", ["x"])
    assert exhaustive_check(g, lambda w, e: w[e["x"]] == 1, 2, 4) == []


def test_negated_predicate_caught_first():
    g = f("(label 1 x)", ["x"])
    bad = exhaustive_check(g, lambda w, e: w[e["x"]] != 1, 2, 4, stop_after=1)
    assert len(bad) == 1
    assert bad[0].word == (1,) and bad[0].assignment == {"x": 0}
    assert bad[0].got is True and bad[0].expected is False


def test_same_block_vs_lca_n3_len8():
    nm = R.Namer({"x", "y"})
    same2 = R.BASE3.same(2, "x", "y", nm)
    leafy = R.BASE3.leaf("x", nm)

    def decodable(w):
        return bool(w) and w[0] == 1 and 3 in w

    def oracle(w, e):
        t = decode_tree_sequence(w, 3)
        x, y = e["x"], e["y"]
        if w[x] != 3 or w[y] != 3:
            return False
        if x == y:
            return True
        d = lca_depth(t, x, y)
        return d is not None and d >= 2

    g = And(leafy, R.BASE3.leaf("y", nm), same2)
    assert exhaustive_check(g, oracle, 3, 8, word_filter=decodable) == []


def test_free_variable_errors():
    g = f("(in x X)", ["x", "X"])
    with pytest.raises(EvaluationError):
        evaluate(g, [1, 2], {"x": 0})
    with pytest.raises(EvaluationError):
        evaluate(g, [1, 2], {"x": 5, "X": frozenset()})


def test_budgets():
    with pytest.raises(BudgetExceeded):
        evaluate(f("(forall x (<= x x))"), [1] * 20, budget=EvalBudget(max_word_length=16))
    deep = f("(existsS X (existsS Y (existsS Z (existsS W (and)))))")
    with pytest.raises(BudgetExceeded):
        evaluate(deep, [1], budget=EvalBudget(max_set_depth=3))
    assert evaluate(deep, [1], budget=EvalBudget(max_set_depth=4))


def test_set_quantifiers_brute_force():
    # "some set holds exactly the 2-labelled positions and is nonempty"
    g = f("(existsS X (and (exists x (in x X)) (forall x (and (implies (in x X) (label 2 x))"
          " (implies (label 2 x) (in x X))))))")
    for w in all_words(3, 5):
        assert evaluate(g, w) == (2 in w)


def _upward_closed_u(letter):
    # "U X. X is nonempty and all of X carries ``letter``" is monotone in the threshold
    return f(f"(U X (and (exists x (in x X)) (forall x (implies (in x X) (label {letter} x)))))")


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 3), max_size=8), st.integers(1, 3), st.integers(0, 6))
def test_bounded_u_monotone(word, letter, b):
    g = _upward_closed_u(letter)
    if evaluate(g, word, budget=EvalBudget(u_threshold=b + 1)):
        assert evaluate(g, word, budget=EvalBudget(u_threshold=b))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=7), st.integers(1, 3))
def test_u_counts_letters(word, letter):
    count = word.count(letter)
    g = f(f"(U X (forall x (implies (in x X) (label {letter} x))))")
    for b in range(0, 8):
        assert evaluate(g, word, budget=EvalBudget(u_threshold=b)) == (count >= b)


def test_deterministic():
    g = f(U_ALL3)
    words = list(itertools.islice(all_words(3, 6), 500))
    assert [evaluate(g, w) for w in words] == [evaluate(g, w) for w in words]
