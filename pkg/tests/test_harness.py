"""Oracles, benchmark harness, and the command-line interface."""

from __future__ import annotations

import json
import random

import pytest

from plancut.cli import main
from plancut.core import INF, dual, encode, generate, walk_is_closed
from plancut.errors import AgreementFailure, BadParams
from plancut.bench import bench_run
from plancut.oracles import oracle_min_cut, oracle_shortest_cycle

from conftest import corpus


class TestOracleShortestCycle:
    def test_fixtures(self, tri, grid3, k4):
        assert oracle_shortest_cycle(tri)[0] == 6
        assert oracle_shortest_cycle(grid3)[0] == 4
        assert oracle_shortest_cycle(k4)[0] == 3

    def test_forest(self):
        from plancut.core import build_graph

        g = build_graph([[1], [0, 2], [1]], [2, 3])
        val, cyc = oracle_shortest_cycle(g)
        assert val == INF and cyc is None

    def test_cycle_is_valid(self):
        for _n, _seed, g in corpus(5, hi=60, seed0=9100):
            val, cyc = oracle_shortest_cycle(g)
            assert walk_is_closed(g, cyc.darts)
            assert sum(g.weight[d >> 1] for d in cyc.darts) == val


class TestOracleMinCut:
    def test_fixtures(self, tri, grid3, k4):
        assert oracle_min_cut(tri) == 3
        assert oracle_min_cut(grid3) == 2
        assert oracle_min_cut(k4) == 3

    def test_duality_cross_check(self):
        for _n, _seed, g in corpus(8, hi=80, seed0=9200):
            val, _ = oracle_shortest_cycle(dual(g).graph)
            assert oracle_min_cut(g) == val


class TestBench:
    def test_rows_and_agreement(self, tmp_path):
        config = {
            "graphs": [{"kind": "grid", "rows": 6, "cols": 6, "weights": "unit", "seed": 0}],
            "algorithms": ["cfn", "ddg"],
            "repetitions": 3,
        }
        rows = bench_run(config)
        assert rows[0].startswith("algo,n,m,seed,rep,answer,micros")
        assert len(rows) == 1 + 2 * 3
        answers = {line.split(",")[5] for line in rows[1:]}
        assert answers == {"4"}

    def test_oracle_size_guard(self):
        config = {
            "graphs": [{"kind": "grid", "rows": 1000, "cols": 1000}],
            "algorithms": ["oracle"],
            "oracle_max_n": 10_000,
        }
        with pytest.raises(BadParams):
            bench_run(config)

    def test_scaling_rows(self):
        config = {
            "graphs": [
                {"kind": "grid", "rows": 8, "cols": 8},
                {"kind": "grid", "rows": 8, "cols": 16},
            ],
            "algorithms": ["ddg"],
            "repetitions": 2,
        }
        rows = bench_run(config)
        assert len(rows) == 5
        micros = [int(line.split(",")[6]) for line in rows[1:]]
        assert all(x > 0 for x in micros)


class TestCli:
    def test_gen_validate_solve_roundtrip(self, tmp_path, capsys):
        path = tmp_path / "g.plg"
        assert main(["gen", "grid", "--rows", "4", "--cols", "4", "-o", str(path)]) == 0
        assert main(["validate", "-i", str(path)]) == 0
        capsys.readouterr()
        assert main(["solve", "--algo", "cfn", "-i", str(path)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "4"
        darts = [int(x) for x in out[1].split()]
        assert len(darts) == 4

    def test_solve_oracle_and_ddg_agree(self, tmp_path, capsys):
        path = tmp_path / "g.plg"
        g = generate("random_maximal", n=40, weights="uniform:1:30", seed=5)
        path.write_text(encode(g))
        vals = []
        for algo in ("oracle", "cfn", "batched", "ddg"):
            assert main(["solve", "--algo", algo, "-i", str(path)]) == 0
            vals.append(capsys.readouterr().out.splitlines()[0])
        assert len(set(vals)) == 1

    def test_mincut(self, tmp_path, capsys):
        path = tmp_path / "g.plg"
        assert main(["gen", "grid", "--rows", "3", "--cols", "3", "-o", str(path)]) == 0
        capsys.readouterr()
        assert main(["mincut", "--algo", "cfn", "-i", str(path)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "2"
        assert len(out[1].split()) == 2

    def test_validate_bad_file(self, tmp_path, capsys):
        path = tmp_path / "bad.plg"
        # two interleaved loops at one vertex embed on the torus, not the sphere
        path.write_text("plg 1 1 2\nv 0 0 2 1 3\ne 0 0 1 5\ne 1 2 3 7\n")
        assert main(["validate", "-i", str(path)]) == 1

    def test_usage_error(self):
        assert main(["solve"]) == 2

    def test_dynamic_script(self, tmp_path, capsys):
        gpath = tmp_path / "g.plg"
        assert main(["gen", "grid", "--rows", "3", "--cols", "3", "-o", str(gpath)]) == 0
        script = tmp_path / "ops.txt"
        script.write_text("query\ndelete 0 1\nquery\nquery-edge 4 5\n")
        capsys.readouterr()
        assert main(["dynamic", "-i", str(gpath), "--script", str(script)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "4"
        assert out[1] == "ok"
        assert out[2] == "4"
        assert out[3].isdigit() or out[3] == "inf"

    def test_bench_cli(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "graphs": [{"kind": "grid", "rows": 4, "cols": 4}],
            "algorithms": ["cfn"],
            "repetitions": 1,
        }))
        out_path = tmp_path / "out.csv"
        assert main(["bench", "--config", str(cfg), "-o", str(out_path)]) == 0
        lines = out_path.read_text().splitlines()
        assert len(lines) == 2
