"""Command line: validation suites, benchmarks and operation-count scaling.

Every subcommand writes one record per trial (JSON lines by default, CSV on
request).  Wall-clock times live under the ``timing`` key only, so two runs
with the same configuration produce identical records once that key is
dropped.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import checks
from .ddg import grid_instance
from .monge import anti_monge_fixture, brute_column_minima, is_monge, load_matrix, smawk_bottommost_minima
from .sssp import boundary_size_sum, make_instance, sssp_monge, sssp_naive

log = logging.getLogger("mongepaths")


@dataclass
class RunConfig:
    command: str
    n: list[int] = field(default_factory=lambda: [16])
    block: int | None = None
    seed: int = 0
    trials: int = 3
    eps: float = 0.5
    delta: int | None = None
    weights: tuple = (1, 10)
    mode: str = "int"
    out: str | None = None
    format: str = "jsonl"
    jobs: int = 1
    matrix: str | None = None
    anti_monge: bool = False

    def block_for(self, n: int) -> int:
        if self.block is not None:
            if n % self.block:
                raise ValueError(f"block {self.block} does not divide n={n}")
            return self.block
        return square_block(n)


def square_block(n: int) -> int:
    """Divisor of ``n`` nearest to sqrt(n); ties go to the smaller one."""
    root = math.sqrt(n)
    return min((d for d in range(1, n + 1) if n % d == 0), key=lambda d: (abs(d - root), d))


# -- validate -------------------------------------------------------------------

SUITES = [
    ("smawk", lambda s: checks.check_smawk(s, 60, 60)),
    ("online_rect", lambda s: checks.check_rect(s, 24, 24)),
    ("online_block", lambda s: checks.check_block(s, 24, 24)),
    ("online_staircase", lambda s: checks.check_staircase(s, 32, invariants=True)),
    ("partition", lambda s: checks.check_partition(1 + s * 37 % 300, (0.25, 0.5, 0.75)[s % 3], True)),
    ("decompose_hole", lambda s: checks.check_decompose(s, 8, 4, skew=3 * (s % 2))),
    ("sssp", lambda s: checks.check_sssp(s, 8, 4, ("int", "float")[s % 2])),
]


def _validate_matrix(m, name: str) -> dict:
    ok = is_monge(m)
    rec = {"suite": "matrix", "source": name, "monge": ok}
    if ok:
        ok = smawk_bottommost_minima(m) == brute_column_minima(m)
    rec["ok"] = ok
    return rec


def cmd_validate(cfg: RunConfig) -> list[dict]:
    out = []
    if cfg.anti_monge:
        out.append(_validate_matrix(anti_monge_fixture(), "anti-monge-fixture"))
    if cfg.matrix:
        with open(cfg.matrix) as fh:
            out.append(_validate_matrix(load_matrix(fh), cfg.matrix))
    if out:
        return out
    for name, fn in SUITES:
        for t in range(cfg.trials):
            seed = cfg.seed + t
            rec = {"suite": name, "seed": seed}
            try:
                rec.update(fn(seed))
                rec["ok"] = True
            except checks.CheckFailure as exc:
                rec.update(ok=False, error=str(exc))
            out.append(rec)
    return out


# -- bench / scaling ------------------------------------------------------------

def _trial(args) -> dict:
    cfg, n, seed, naive = args
    block = cfg.block_for(n)
    t0 = time.perf_counter()
    grid = grid_instance(n, block, seed, cfg.weights, cfg.mode)
    inst = make_instance(grid, seed)
    t1 = time.perf_counter()
    a = sssp_monge(inst, cfg.eps, cfg.delta)
    t2 = time.perf_counter()
    rec = {
        "n": n, "block": block, "seed": seed, "eps": cfg.eps, "mode": cfg.mode,
        "regions": len(inst.ddgs), "boundary_sum": boundary_size_sum(inst),
        "boundary_vertices": len(inst.boundary), "p_edges": len(inst.P),
        "boundary_weight": sum(g.size * math.log2(g.size) ** cfg.eps for g in inst.ddgs if g.size > 1),
        "counters": dict(sorted(a.counters.items())),
    }
    timing = {"build": t1 - t0, "monge": t2 - t1}
    if naive:
        b = sssp_naive(inst)
        timing["naive"] = time.perf_counter() - t2
        tol = 1e-9 if cfg.mode == "float" else 0
        same = all(abs(a.d[v] - b.d[v]) <= tol or a.d[v] == b.d[v] for v in inst.boundary)
        rec["verdict"] = "equal" if same else "differ"
        rec["ok"] = same
        rec["naive_counters"] = dict(sorted(b.counters.items()))
    rec["timing"] = timing
    return rec


def _fan_out(cfg: RunConfig, naive: bool) -> list[dict]:
    jobs = [(cfg, n, cfg.seed + t, naive) for n in cfg.n for t in range(cfg.trials)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            return list(ex.map(_trial, jobs))
    return [_trial(j) for j in jobs]


def cmd_bench(cfg: RunConfig) -> list[dict]:
    return _fan_out(cfg, naive=True)


def cmd_scaling(cfg: RunConfig) -> list[dict]:
    recs = _fan_out(cfg, naive=False)
    out = []
    for r in recs:
        denom = r["boundary_weight"] or 1
        c = r["counters"]
        r["ratio_ensure"] = c.get("ensure_calls", 0) / denom
        r["ratio_extract"] = c.get("extractions", 0) / denom
        out.append(r)
    by_n = {}
    for r in out:
        by_n.setdefault(r["n"], []).append(r["ratio_ensure"])
    means = [sum(v) / len(v) for v in by_n.values()]
    band = max(means) / min(means) if means and min(means) > 0 else math.inf
    for r in out:
        r["band"] = band
        r["ok"] = band <= 3
    return out


# -- output -----------------------------------------------------------------------

def _flat(rec: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in rec.items():
        if isinstance(v, dict):
            out.update(_flat(v, f"{prefix}{k}."))
        else:
            out[prefix + k] = v
    return out


def render(records: list[dict], fmt: str) -> str:
    if fmt == "jsonl":
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    rows = [_flat(r) for r in records]
    cols = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _weights(s: str):
    lo, _, hi = s.partition(":")
    if not hi:
        raise argparse.ArgumentTypeError("weights must look like lo:hi")
    num = float if "." in s else int
    return num(lo), num(hi)


def _sizes(s: str):
    return [int(x) for x in s.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mongepaths", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("validate", "run the seeded invariant suites"),
                           ("bench", "time the structure-driven solver against plain Dijkstra"),
                           ("scaling", "ensure-call ratios across grid sizes")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--n", type=_sizes, default=[16], help="grid side(s), comma separated")
        sp.add_argument("--block", type=int, help="tile side; defaults to the divisor nearest sqrt(n)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=3)
        sp.add_argument("--eps", type=float, default=0.5)
        sp.add_argument("--delta", type=int, help="override the block width of the staircase pieces")
        sp.add_argument("--weights", type=_weights, default=(1, 10), metavar="LO:HI")
        sp.add_argument("--mode", choices=("int", "float"), default="int")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for independent trials")
        if name == "validate":
            sp.add_argument("--matrix", help="check a dumped matrix file instead of the suites")
            sp.add_argument("--anti-monge", action="store_true", help="check the built-in anti-Monge fixture")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if not 0 < args.eps < 1:
        print("eps must lie in (0, 1)", file=sys.stderr)
        return 2
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k != "verbose"})
    try:
        run = {"validate": cmd_validate, "bench": cmd_bench, "scaling": cmd_scaling}[cfg.command]
        records = run(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(records, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r for r in records if not r.get("ok", True)]
    log.info("%d records, %d failed", len(records), len(failed))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
