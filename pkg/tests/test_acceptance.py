"""Acceptance suite: eight criteria, each with its own time limit.

Every criterion prints one line ``criterion N PASS|FAIL ...``; the lines are
also repeated in the pytest terminal summary.  Run on its own with

    pytest tests/test_acceptance.py -v
"""
import itertools
import time
from contextlib import contextmanager

from helpers import ACCEPTANCE_LINES, MACHINES, MUTATIONS, random_machine, random_treeseq, seeded
from msou import reduction as R
from msou.blocks import BLOCKS, check_block
from msou.codec import decode_tree_sequence, encode_tree_sequence
from msou.logic import analyze, render_formula
from msou.minsky import (accepted_descriptions, describe_run, find_accepting_run,
                         parse_machine, validate_description)
from msou.vecseq import (EquivParams, identity_grid_window, identity_mix_harness,
                         min_dominate, scale_window, select, selections, window_equiv)


@contextmanager
def criterion(number, title, limit):
    info = {}
    start = time.perf_counter()
    try:
        yield info
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        _report(number, "FAIL", title, f"{type(exc).__name__}: {exc}".splitlines()[0],
                elapsed, limit)
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed <= limit
    _report(number, "PASS" if ok else "FAIL", title, info.get("summary", ""), elapsed, limit)
    assert ok, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"


def _report(number, verdict, title, summary, elapsed, limit):
    line = f"criterion {number} {verdict} {title}: {summary} ({elapsed:.1f}s of {limit}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)


def _machine(name):
    return parse_machine((MACHINES / name).read_text())


def _chain(k, ops=("inc1", "inc2", "dec1", "dec2", "zero1", "zero2")):
    states = [f"q{i}" for i in range(k + 1)]
    lines = [f"states: {' '.join(states)}", "init: q0", f"final: q{k}"]
    lines += [f"trans: q{i} {ops[i % len(ops)]} q{i + 1}" for i in range(k)]
    return "\n".join(lines) + "\n"


def test_1_codec_exactness():
    with criterion(1, "codec exactness", 60) as info:
        violations = pairs = words = 0
        for length in range(1, 9):
            for w in itertools.product((1, 2, 3), repeat=length):
                if w[0] != 1 or 3 not in w:
                    continue
                words += 1
                t = decode_tree_sequence(w, 3)
                paths = dict(zip(t.leaf_positions, t.leaf_paths()))
                for x, y in itertools.combinations(t.leaf_positions, 2):
                    pairs += 1
                    between = min(w[x + 1:y], default=3)
                    for i in (1, 2):
                        # shared depth-i ancestor iff no label <= i strictly between
                        if (paths[x][:i] == paths[y][:i]) != (between > i):
                            violations += 1
        rng = seeded(20261016)
        round_trip_failures = 0
        for _ in range(1000):
            t = random_treeseq(rng, max_n=4, max_leaves=25)
            if decode_tree_sequence(encode_tree_sequence(t), t.depth) != t:
                round_trip_failures += 1
        info["summary"] = (f"{violations} rule violations over {words} words / {pairs} leaf pairs;"
                           f" {round_trip_failures}/1000 round-trip failures")
        assert violations == 0 and round_trip_failures == 0


def test_2_building_block_equivalence():
    with criterion(2, "building-block equivalence", 600) as info:
        bad = []
        checks = 0
        for block in BLOCKS:
            r = check_block(block, max_len=8)
            checks += r.checks
            if r.disagreements:
                bad.append((block.name, r.disagreements[0].to_json()))
        info["summary"] = (f"{len(BLOCKS)} blocks, {checks} (word, assignment) checks,"
                           f" {len(bad)} blocks with disagreements")
        assert not bad, bad[:3]


RUNNING = ["sample.mm", "transfer.mm", "branching.mm", "countdown.mm"]


def test_3_witness_soundness():
    with criterion(3, "end-to-end witness soundness", 60) as info:
        machines = [_machine(name) for name in RUNNING] + [parse_machine(_chain(5))]
        runs = checks = 0
        problems = []
        for m in machines:
            r = find_accepting_run(m, 30, 6)
            assert r is not None
            runs += 1
            desc = describe_run(r)
            for T in (5, 10, 20):
                t = R.witness_tree_sequence(R.WitnessParams(desc, T))
                t = decode_tree_sequence(encode_tree_sequence(t), 4)
                for prefix in (0, 1):
                    checks += 1
                    rep = R.check_conditions(t, m, prefix)
                    if not rep.all_true:
                        problems.append(("witness", T, prefix))
                    for cond, mutators in MUTATIONS.items():
                        for mutate in mutators:
                            checks += 1
                            got = R.check_conditions(mutate(t), m, prefix)
                            flags = {k: getattr(got, k) for k in "abcd"}
                            if flags != {k: k != cond for k in "abcd"}:
                                problems.append((mutate.__name__, T, prefix, flags))
        info["summary"] = f"{runs} machines, {checks} condition reports, {len(problems)} problems"
        assert not problems, problems[:3]


def _no_run_machines():
    return [
        _machine("empty.mm"),
        # needs counter 1 at 5 before it may stop
        parse_machine(_chain(5, ops=("inc1",)) + "trans: q5 zero2 q5\n"),
        # the final state has no incoming transition
        parse_machine("states: q0 qf\ninit: q0\nfinal: qf\n"
                      "trans: q0 inc1 q0\ntrans: q0 inc2 q0\ntrans: q0 dec1 q0\n"),
        # zero test right after an increment of the same counter
        parse_machine("states: q0 q1 qf\ninit: q0\nfinal: qf\n"
                      "trans: q0 inc1 q1\ntrans: q1 zero1 qf\ntrans: q1 inc2 q1\n"),
    ]


def test_4_refutation_at_bound():
    with criterion(4, "refutation at bound", 300) as info:
        literal = pruned = 0
        accepted = []
        for m in _no_run_machines():
            assert find_accepting_run(m, 6, 4) is None
            # lengths <= 8: every description, one by one
            for length in (2, 4, 6, 8):
                for v in itertools.product(range(5), repeat=length):
                    literal += 1
                    if validate_description(m, v):
                        accepted.append(v)
            # lengths 10 and 12: prefix tree with empty-state-set subtrees cut
            found, visited = accepted_descriptions(m, 4, 12)
            pruned += visited
            accepted.extend(found)
        info["summary"] = (f"{len(_no_run_machines())} machines, {literal} descriptions checked"
                           f" literally (length <= 8), {pruned} prefixes visited up to length 12,"
                           f" {len(accepted)} accepted")
        assert accepted == []


def test_5_identity_mix_harness():
    with criterion(5, "identity is no mix of its projections (d=2)", 120) as info:
        parts = []
        for side in (3, 4):
            res = identity_mix_harness(side, d=2, keep_examples=3)
            assert res.all_refuted, (side, res.refuted, res.candidates)
            F = scale_window(identity_grid_window(2, side), side)
            for G, cex in res.counterexamples:
                f = select(F, cex)
                assert not any(window_equiv(f, select(G, s), res.params) for s in selections(G))
            parts.append(f"s={side}: {res.refuted}/{res.candidates} refuted")
        info["summary"] = "; ".join(parts)


def test_6_min_construction():
    with criterion(6, "min construction", 10) as info:
        rng = seeded(6)
        failures = 0
        for _ in range(1000):
            B = rng.randint(0, 6)
            Bp = rng.randint(B, 12)
            n = rng.randint(1, 20)
            h = tuple(rng.randint(0, 30) for _ in range(n))
            # f >= B' everywhere, and strictly above B (matters only when B == B')
            f = tuple(rng.randint(max(Bp, B + 1), 40) for _ in range(n))
            g = min_dominate(h, f)
            if not (all(a <= b for a, b in zip(g, f)) and window_equiv(g, h, EquivParams(B, Bp))):
                failures += 1
        info["summary"] = f"{failures} failures over 1000 windows"
        assert failures == 0


def test_7_minsky_round_trip():
    with criterion(7, "Minsky round-trip", 60) as info:
        rng = seeded(7)
        tried = accepted = 0
        failures = 0
        while accepted < 100:
            tried += 1
            m = random_machine(rng, max_states=5, max_trans=8)
            r = find_accepting_run(m, 10, 6)
            if r is None:
                continue
            accepted += 1
            if not validate_description(m, describe_run(r)):
                failures += 1
        info["summary"] = f"{accepted} machines with runs (of {tried} sampled), {failures} failures"
        assert failures == 0


def test_8_compiler_determinism_and_scaling():
    with criterion(8, "compiler determinism and affine size", 120) as info:
        text = (MACHINES / "transfer.mm").read_text()
        first = render_formula(R.machine_to_formula(parse_machine(text)))
        second = render_formula(R.machine_to_formula(parse_machine(text)))
        assert first.encode() == second.encode()
        sizes = {k: analyze(R.machine_to_formula(parse_machine(_chain(k)))).size
                 for k in (3, 6, 12)}
        # least-squares line through the three points, exact arithmetic
        xs, ys = list(sizes), list(sizes.values())
        mx, my = sum(xs) / 3, sum(ys) / 3
        slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
        residual = max(abs(y - (my + slope * (x - mx))) for x, y in zip(xs, ys))
        info["summary"] = (f"byte-identical output; sizes {sizes}, slope {slope:g} per transition,"
                           f" max residual {residual:g}")
        assert residual == 0
