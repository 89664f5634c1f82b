"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line (also listed
in the pytest terminal summary).  Constants that bound operation counts were
measured once on these seeds and are fixed here.
"""
import math
import random
import time


from mongepaths import checks
from mongepaths.harness import square_block
from mongepaths.ddg import grid_instance
from mongepaths.sssp import make_instance, sssp_monge

from conftest import ACCEPTANCE_LINES

SCAN_C = 3  # candidate scans <= SCAN_C * (k * delta + l)
NIL_C = 4  # nil returns <= NIL_C * sum(l_i) / delta


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def run_all(fn, seeds):
    failures = []
    results = []
    for s in seeds:
        try:
            results.append(fn(s))
        except checks.CheckFailure as exc:
            failures.append(str(exc))
    return results, failures


def test_1_smawk():
    t = time.perf_counter()
    res, bad = run_all(checks.check_smawk, range(1000))
    took = time.perf_counter() - t
    largest = max(r["k"] * r["l"] for r in res) if res else 0
    report(1, not bad and took < 60,
           f"1000 matrices up to 200x200 (largest {largest} cells), {len(bad)} mismatches, {took:.1f}s")


def test_2_online_rect():
    res, bad = run_all(checks.check_rect, range(500))
    exact_l = all(r["ensures"] == r["l"] for r in res)
    report(2, not bad and exact_l, f"500 interleavings <= 64x64, invariants after every op, {len(bad)} failures")


def test_3_online_block():
    res, bad = run_all(checks.check_block, range(500))
    changes = all(r["max_changes"] <= 2 * r["delta"] for r in res)
    ratio = max(r["scans"] / r["scan_budget"] for r in res)
    report(3, not bad and changes and ratio <= SCAN_C,
           f"500 interleavings, change count <= 2*delta: {changes}, max scans/(k*delta+l) = {ratio:.2f} <= {SCAN_C}")


def test_4_partition():
    bad = 0
    count = 0
    for eps in (0.25, 0.5, 0.75):
        for m in range(1, 4097):
            try:
                checks.check_partition(m, eps, full_grid=m <= 256)
            except checks.CheckFailure:
                bad += 1
            count += 1
    report(4, bad == 0, f"{count} partitions (m <= 4096, three eps values), {bad} violations")


def test_5_online_staircase():
    res, bad = run_all(lambda s: checks.check_staircase(s, 128), range(200))
    ratio = max(r["nil"] / r["nil_budget"] for r in res)
    report(5, not bad and ratio <= NIL_C,
           f"200 drains <= 128x128, monotone keys, max nil/(sum l_i/delta) = {ratio:.2f} <= {NIL_C}")


def test_6_end_to_end():
    rng = random.Random(6)
    configs = []
    for s in range(110):
        n = rng.choice([8, 16, 24, 32])
        configs.append((s, n, rng.choice([4, 8]), "int"))
    for s in range(110, 130):
        configs.append((s, rng.choice([8, 16]), 4, "float"))
    bad = []
    for s, n, block, mode in configs:
        try:
            checks.check_sssp(s, n, block, mode, skew=5 * (s % 4 == 3))
        except checks.CheckFailure as exc:
            bad.append(str(exc))
    report(6, not bad, f"{len(configs)} grid instances (110 int exact, 20 float at 1e-9), {len(bad)} mismatches")


def test_7_decomposition_monge():
    res, bad = run_all(lambda s: checks.check_decompose(s, (8, 16)[s % 2], (4, 8)[s % 3 == 0], 4 * (s % 2)),
                       range(100))
    report(7, not bad, f"100 regions, both staircase halves Monge, {len(bad)} failures")


def test_8_scaling():
    eps = 0.5
    ratios = {}
    for n in (16, 32, 64, 128):
        grid = grid_instance(n, square_block(n), 8)
        inst = make_instance(grid, 8)
        res = sssp_monge(inst, eps)
        denom = sum(g.size * math.log2(g.size) ** eps for g in inst.ddgs)
        ratios[n] = res.counters["ensure_calls"] / denom
    band = max(ratios.values()) / min(ratios.values())
    shown = ", ".join(f"n={n}: {r:.3f}" for n, r in ratios.items())
    report(8, band <= 3, f"ensure ratio band {band:.2f} <= 3 ({shown})")
