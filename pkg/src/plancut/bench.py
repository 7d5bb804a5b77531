"""Benchmark harness: runs algorithms over a configured corpus and emits
CSV rows with timings and instrumentation counters.

Config is JSON:

    {
      "graphs": [
        {"kind": "grid", "rows": 64, "cols": 64, "weights": "unit", "seed": 0},
        {"kind": "random_maximal", "n": 200, "weights": "uniform:1:100", "seed": 7}
      ],
      "algorithms": ["oracle", "cfn", "batched", "ddg"],
      "repetitions": 3,
      "oracle_max_n": 50000
    }

Answers are cross-checked within each graph before any row is emitted.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Optional

from .core import INF, PlanarGraph, generate, normalize
from .ddg_solver import shortest_cycle_ddg
from .errors import AgreementFailure, BadParams
from .oracles import oracle_shortest_cycle
from .static_solver import RunStats, shortest_cycle_batched, shortest_cycle_cfn

CSV_HEADER = "algo,n,m,seed,rep,answer,micros"

DEFAULT_ORACLE_MAX_N = 50_000


@dataclass
class BenchRecord:
    algo: str
    n: int
    m: int
    seed: int
    rep: int
    answer: object
    micros: int
    counters: dict

    def csv(self) -> str:
        ans = "inf" if self.answer == INF else str(self.answer)
        base = f"{self.algo},{self.n},{self.m},{self.seed},{self.rep},{ans},{self.micros}"
        extras = [f"counter:{k}={self.counters[k]}" for k in sorted(self.counters)]
        return ",".join([base] + extras)


def _build_graph(spec: dict) -> tuple[PlanarGraph, int, int, int]:
    kind = spec.get("kind")
    seed = int(spec.get("seed", 0))
    weights = spec.get("weights", "unit")
    if kind == "grid":
        g = generate("grid", rows=int(spec["rows"]), cols=int(spec["cols"]), weights=weights, seed=seed)
    elif kind == "random_maximal":
        g = generate("random_maximal", n=int(spec["n"]), weights=weights, seed=seed)
    else:
        raise BadParams(f"unknown graph kind {kind!r}")
    return g, g.n, g.m, seed


def _run_one(algo: str, g: PlanarGraph, normalized: PlanarGraph) -> tuple[object, int, dict]:
    stats = RunStats()
    t0 = time.perf_counter_ns()
    if algo == "oracle":
        val, _ = oracle_shortest_cycle(g)
    elif algo == "cfn":
        val, _ = shortest_cycle_cfn(normalized, stats=stats)
    elif algo == "batched":
        val, _ = shortest_cycle_batched(normalized, stats=stats)
    elif algo == "ddg":
        val, _ = shortest_cycle_ddg(normalized, stats=stats)
    else:
        raise BadParams(f"unknown algorithm {algo!r}")
    micros = (time.perf_counter_ns() - t0) // 1000
    return val, micros, dict(stats.counters)


def bench_run(config: dict, verbose: bool = False) -> list[str]:
    """Run the configured benchmark; returns CSV lines (header first)."""
    graphs = config.get("graphs", [])
    algorithms = config.get("algorithms", ["cfn"])
    reps = int(config.get("repetitions", 1))
    oracle_max_n = int(config.get("oracle_max_n", DEFAULT_ORACLE_MAX_N))
    rows = [CSV_HEADER]
    for spec in graphs:
        g, n, m, seed = _build_graph(spec)
        if "oracle" in algorithms and n > oracle_max_n:
            raise BadParams(f"oracle rejected by the size guard: n={n} > {oracle_max_n}")
        normalized = normalize(g).graph if any(a != "oracle" for a in algorithms) else None
        records = []
        answers = {}
        for algo in algorithms:
            for rep in range(reps):
                val, micros, counters = _run_one(algo, g, normalized)
                records.append(BenchRecord(algo, n, m, seed, rep, val, micros, counters))
                answers.setdefault(algo, val)
                if answers[algo] != val:
                    raise AgreementFailure(f"{algo} disagreed with itself on seed {seed}")
        distinct = set(answers.values())
        if len(distinct) > 1:
            raise AgreementFailure(f"answers diverge on seed {seed}: {answers}")
        for rec in records:
            rows.append(rec.csv())
            if verbose:
                print(rec.csv())
    return rows


def load_config(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)
