"""The compiled kernels and the pure-Python fallback must agree exactly."""
import pytest
from hypothesis import given, settings, strategies as st

from helpers import formulas
from msou import _backend, _fallback
from msou.evaluate import compile_formula, label_masks

kernels = pytest.importorskip("msou._kernels")


def _programs(f):
    comp = compile_formula(f)
    args = (comp.kind, comp.a1, comp.a2, comp.kstart, comp.kcount, comp.kids,
            comp.root, comp.n_pos, comp.n_set)
    return comp, kernels.CompiledProgram(*args), _fallback.CompiledProgram(*args)


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")


@settings(max_examples=300, deadline=None)
@given(formulas(max_depth=6), st.lists(st.integers(1, 3), max_size=6),
       st.integers(0, 3), st.data())
def test_evaluate_parity(f, word, u, data):
    comp, fast, slow = _programs(f)
    n = len(word)
    pos = [data.draw(st.integers(0, max(n - 1, 0))) for _ in comp.free_pos]
    sets = [data.draw(st.integers(0, (1 << n) - 1)) for _ in comp.free_set]
    if comp.free_pos and n == 0:
        return
    masks = label_masks(word)
    assert fast.evaluate(masks, n, pos, sets, u) == slow.evaluate(masks, n, pos, sets, u)


vectors = st.lists(st.integers(0, 9), min_size=1, max_size=3)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(vectors, min_size=n, max_size=n), st.lists(vectors, min_size=n, max_size=n))),
    st.integers(0, 5), st.integers(0, 5))
def test_mix_search_parity(FG, b, extra):
    F, G = FG

    def flat(W):
        vals, off = [], [0]
        for v in W:
            vals += v
            off.append(len(vals))
        return vals, off

    fv, fo = flat(F)
    gv, go = flat(G)
    assert (kernels.mix_search(fv, fo, gv, go, b, b + extra)
            == _fallback.mix_search(fv, fo, gv, go, b, b + extra))


def test_env_forces_fallback():
    import subprocess
    import sys
    code = "from msou import _backend; print(_backend.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"MSOU_PURE_PYTHON": "1", "PATH": ""}, check=True).stdout
    assert out.strip() == "python"
