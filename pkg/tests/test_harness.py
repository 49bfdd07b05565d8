import json

import numpy as np
import pytest

from psdfact.cd import CdConfig, cd_solve
from psdfact.fpgm import FpgmConfig
from psdfact.harness import (
    TABLE1,
    BenchmarkReport,
    multi_start,
    run_solver,
    save_reports,
    table1_cells,
)
from psdfact.instances import fixture_square, gen_pn
from psdfact.model import RankProfile
from psdfact.trace import RunTrace, average_E


class TestAverageE:
    def test_single_trace_resamples(self):
        tr = RunTrace(e0=2.0)
        tr.record(1.0, 1.0)
        tr.record(2.0, 0.5)
        curve = average_E([tr], [0.0, 0.5, 1.0, 1.5, 2.0, 3.0])
        assert np.allclose(curve, [1.0, 1.0, 0.5, 0.5, 0.25, 0.25])

    def test_identical_traces_average_to_themselves(self):
        traces = []
        for _ in range(2):
            tr = RunTrace(e0=4.0)
            tr.record(1.0, 2.0)
            traces.append(tr)
        one = average_E(traces[:1], [0.0, 1.0, 2.0])
        two = average_E(traces, [0.0, 1.0, 2.0])
        assert np.array_equal(one, two)

    def test_unit_start(self):
        tr = RunTrace(e0=7.0)
        tr.record(0.5, 3.0)
        assert average_E([tr], [0.0])[0] == 1.0

    def test_running_minimum_is_enforced(self):
        tr = RunTrace(e0=1.0)
        tr.record(1.0, 0.25)
        tr.record(2.0, 0.75)  # worse value cannot raise the curve
        assert tr.errors().tolist() == [1.0, 0.25, 0.25]

    def test_empty_traces_rejected(self):
        with pytest.raises(ValueError):
            average_E([], [0.0])


class TestMultiStart:
    def test_single_restart_reproduces_solver_call(self):
        fx = fixture_square()
        prof = RankProfile.uniform(4, 4, 3, 2)
        cfg = CdConfig(variant="gauss_southwell", max_outer=15, seed=11)
        report = multi_start(fx.instance, prof, cfg, restarts=1)
        direct, _ = cd_solve(fx.instance, prof, cfg)
        rec = report.records[0]
        for x, y in zip(rec.factors.a + rec.factors.b, direct.a + direct.b):
            assert np.array_equal(x, y)

    def test_best_dominates_every_run(self):
        fx = fixture_square()
        prof = RankProfile.uniform(4, 4, 3, 2)
        cfg = CdConfig(variant="cyclic", max_outer=10, seed=0)
        report = multi_start(fx.instance, prof, cfg, restarts=5)
        assert len(report.records) == 5
        assert all(report.best.rel_error <= r.rel_error for r in report.records)
        seeds = [r.seed for r in report.records]
        assert seeds == [0, 1, 2, 3, 4]

    def test_parallel_matches_serial(self):
        fx = fixture_square()
        prof = RankProfile.uniform(4, 4, 3, 2)
        cfg = CdConfig(variant="gauss_southwell", max_outer=8, seed=5)
        serial = multi_start(fx.instance, prof, cfg, restarts=4, jobs=1)
        parallel = multi_start(fx.instance, prof, cfg, restarts=4, jobs=2)
        for r1, r2 in zip(serial.records, parallel.records):
            assert r1.seed == r2.seed
            assert r1.rel_error == r2.rel_error
            for x, y in zip(r1.factors.a + r1.factors.b,
                            r2.factors.a + r2.factors.b):
                assert np.array_equal(x, y)

    def test_fpgm_dispatch(self):
        fx = fixture_square()
        prof = RankProfile.full(4, 4, 3)
        cfg = FpgmConfig(delta=2.0, max_outer=5, seed=1)
        report = multi_start(fx.instance, prof, cfg, restarts=2)
        assert report.solver == "fpgm"
        assert all(np.isfinite(r.rel_error) for r in report.records)

    def test_sym_gap_recorded_in_symmetric_mode(self):
        inst = gen_pn(4)
        prof = RankProfile.uniform(6, 6, 4, 2)
        cfg = CdConfig(variant="gauss_southwell", gamma=1.0, max_outer=20, seed=2)
        report = multi_start(inst, prof, cfg, restarts=2)
        assert all(r.sym_gap is not None and r.sym_gap >= 0 for r in report.records)

    def test_restarts_validated(self):
        fx = fixture_square()
        prof = RankProfile.full(4, 4, 3)
        cfg = FpgmConfig(max_outer=2)
        with pytest.raises(ValueError):
            multi_start(fx.instance, prof, cfg, restarts=0)

    def test_unknown_config_type_rejected(self):
        fx = fixture_square()
        with pytest.raises(TypeError):
            run_solver(fx.instance, RankProfile.full(4, 4, 3), object())


class TestReports:
    def test_table1_cells_cover_every_row(self):
        cells = table1_cells()
        assert len(cells) == len(TABLE1)
        for (inst, prof), (family, n, k) in zip(cells, TABLE1):
            assert prof.k == k
            assert prof.r_a == (k,) * inst.m

    def test_save_reports(self, tmp_path):
        fx = fixture_square()
        prof = RankProfile.uniform(4, 4, 3, 2)
        cfg = CdConfig(variant="cyclic", max_outer=5, seed=0)
        report = multi_start(fx.instance, prof, cfg, restarts=2)
        path = tmp_path / "report.json"
        save_reports(path, [report])
        doc = json.loads(path.read_text())
        assert doc[0]["instance"] == "S4"
        assert doc[0]["solver"] == "cd-cyclic"
        assert len(doc[0]["runs"]) == 2
        assert doc[0]["best"]["rel_error"] == report.best.rel_error

    def test_report_requires_records(self):
        with pytest.raises(ValueError):
            BenchmarkReport("x", "y", ())
