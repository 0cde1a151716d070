"""Compiled kernels vs the pure-Python fallback on the two hot loops.

    python benchmarks/bench_kernels.py [--repeat N]

Each workload runs against both backends with identical inputs; results are
compared before timings are reported.
"""
import argparse
import itertools
import statistics
import time

from msou import _fallback
from msou.blocks import BLOCKS, word_tree
from msou.evaluate import compile_formula, label_masks, _bind
from msou.vecseq import identity_grid_window, projection_candidates, scale_window, _flatten

try:
    from msou import _kernels
except ImportError:  # not built
    _kernels = None


def eval_workload(module, block_name="inc.child1/n4", max_len=7):
    block = next(b for b in BLOCKS if b.name == block_name)
    comp = compile_formula(block.formula())
    args = (comp.kind, comp.a1, comp.a2, comp.kstart, comp.kcount, comp.kids,
            comp.root, comp.n_pos, comp.n_set)
    program = module.CompiledProgram(*args)
    jobs = []
    for length in range(1, max_len + 1):
        for w in itertools.product(range(1, 5), repeat=length):
            if w[0] != 1 or 4 not in w:
                continue
            masks = label_masks(w)
            for env in block.domain(word_tree(w, 4)):
                jobs.append((masks, length) + tuple(_bind(comp, length, env)))

    def run():
        return [program.evaluate(m, n, p, s, 2) for m, n, p, s in jobs]
    return run, len(jobs)


def mix_workload(module, side=4):
    F = scale_window(identity_grid_window(2, side), side)
    fv, fo = _flatten(F)
    gs = [_flatten(G) for G in projection_candidates(F, 1)]

    def run():
        return [module.mix_search(fv, fo, gv, go, 0, side - 1) for gv, go in gs]
    return run, len(gs)


def timed(fn, repeat):
    out = None
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        samples.append(time.perf_counter() - start)
    return out, statistics.median(samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernels are not built; only the fallback is available")
        return
    print(f"{'workload':28s} {'items':>8s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s}")
    for name, make in (("bounded evaluation", eval_workload), ("window-mix search", mix_workload)):
        fast_fn, items = make(_kernels)
        slow_fn, _ = make(_fallback)
        fast_out, fast_t = timed(fast_fn, args.repeat)
        slow_out, slow_t = timed(slow_fn, args.repeat)
        if fast_out != slow_out:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:28s} {items:8d} {fast_t:10.3f} {slow_t:10.3f} {slow_t / fast_t:7.1f}x")


if __name__ == "__main__":
    main()
