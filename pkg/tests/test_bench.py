import csv
import json

import numpy as np
import pytest

import so3fft as sf
from so3fft.bench import _check_oracle, main


# ---------------------------------------------------------------------------
# random spectra
# ---------------------------------------------------------------------------

def test_random_coefficients_deterministic():
    a = sf.random_coefficients(5, seed=42)
    b = sf.random_coefficients(5, seed=42)
    c = sf.random_coefficients(5, seed=43)
    assert np.array_equal(a.data, b.data)
    assert not np.array_equal(a.data, c.data)
    assert a.data.shape == (sf.coeff_count(5),)
    assert np.all(np.abs(a.data.real) <= 1.0) and np.all(np.abs(a.data.imag) <= 1.0)


def test_random_coefficients_stream_rule():
    """Slot k consumes draws 2k (real) and 2k+1 (imaginary) of the stream."""
    b, seed = 3, 9
    gen = np.random.Generator(np.random.PCG64(seed))
    draws = gen.uniform(-1.0, 1.0, size=2 * sf.coeff_count(b))
    coeffs = sf.random_coefficients(b, seed)
    for k in (0, 1, 7, sf.coeff_count(b) - 1):
        assert coeffs.data[k] == draws[2 * k] + 1j * draws[2 * k + 1]


# ---------------------------------------------------------------------------
# error metrics and the oracle check
# ---------------------------------------------------------------------------

def test_error_metrics():
    ref = sf.So3Coefficients.zeros(2)
    rec = sf.So3Coefficients.zeros(2)
    ref.data[0] = 2.0
    rec.data[0] = 2.0 + 1e-3
    rec.data[1] = 4e-3  # zero reference slot: absolute only
    max_abs, max_rel = sf.error_metrics(ref, rec)
    assert max_abs == pytest.approx(4e-3)
    assert max_rel == pytest.approx(5e-4)
    with pytest.raises(ValueError):
        sf.error_metrics(ref, sf.So3Coefficients.zeros(3))


def test_error_metrics_all_zero_reference():
    ref = sf.So3Coefficients.zeros(2)
    rec = sf.So3Coefficients.zeros(2)
    assert sf.error_metrics(ref, rec) == (0.0, 0.0)


def test_oracle_check_passes_on_consistent_round_trip():
    b = 3
    plan = sf.make_plan(b)
    coeffs = sf.random_coefficients(b, seed=0)
    grid = sf.ifsoft_sequential(coeffs, plan)
    recovered = sf.fsoft_sequential(grid, plan)
    _check_oracle(b, grid, recovered, coeffs)


def test_oracle_check_raises_on_doctored_result():
    b = 3
    plan = sf.make_plan(b)
    coeffs = sf.random_coefficients(b, seed=0)
    grid = sf.ifsoft_sequential(coeffs, plan)
    recovered = sf.fsoft_sequential(grid, plan)
    doctored = sf.So3Coefficients(b, recovered.data + 1e-6)
    with pytest.raises(sf.OracleMismatchError):
        _check_oracle(b, grid, doctored, coeffs)


# ---------------------------------------------------------------------------
# the protocol
# ---------------------------------------------------------------------------

def _small_config(**overrides):
    defaults = dict(bandwidths=[2, 3], thread_counts=[1, 2], runs=2, seed=7)
    defaults.update(overrides)
    return sf.BenchConfig(**defaults)


def test_run_benchmark_record_grid():
    config = _small_config()
    records = sf.run_benchmark(config)
    assert len(records) == 2 * 2 * 2 * 2  # bandwidths x runs x threads x directions
    keys = [(r.bandwidth, r.run_index, r.threads, r.direction) for r in records]
    assert keys == [
        (b, run, t, d)
        for b in (2, 3)
        for run in (0, 1)
        for t in (1, 2)
        for d in ("forward", "inverse")
    ]


def test_single_thread_rows_are_their_own_baseline():
    records = sf.run_benchmark(_small_config())
    for r in records:
        assert r.wall_seconds > 0
        assert r.efficiency == pytest.approx(r.speedup / r.threads)
        if r.threads == 1:
            assert r.speedup == 1.0


def test_errors_identical_across_thread_counts():
    records = sf.run_benchmark(_small_config())
    by_key = {}
    for r in records:
        by_key.setdefault((r.bandwidth, r.run_index, r.direction), []).append(r)
    for group in by_key.values():
        assert len({(g.max_abs_error, g.max_rel_error) for g in group}) == 1


def test_run_benchmark_reproducible_metrics():
    first = sf.run_benchmark(_small_config())
    second = sf.run_benchmark(_small_config())
    for a, b in zip(first, second):
        assert (a.max_abs_error, a.max_rel_error) == (b.max_abs_error, b.max_rel_error)


def test_run_benchmark_with_oracle_enabled():
    records = sf.run_benchmark(_small_config(bandwidths=[2], oracle=True))
    assert all(r.max_abs_error < 1e-10 for r in records)


def test_run_benchmark_saves_artifacts(tmp_path):
    samples_path = tmp_path / "grid.sofg"
    coeffs_path = tmp_path / "coeffs.sofc"
    config = _small_config(bandwidths=[2, 3], runs=1)
    sf.run_benchmark(config, save_samples_path=str(samples_path), save_coeffs_path=str(coeffs_path))
    # artifacts hold the last bandwidth's first run
    coeffs = sf.read_coefficients(str(coeffs_path))
    assert coeffs.bandwidth == 3
    assert np.array_equal(coeffs.data, sf.random_coefficients(3, seed=7).data)
    grid = sf.read_samples(str(samples_path))
    assert grid.bandwidth == 3
    plan = sf.make_plan(3)
    assert np.array_equal(grid.data, sf.ifsoft_sequential(coeffs, plan).data)


def test_config_validation():
    with pytest.raises(ValueError):
        sf.BenchConfig(bandwidths=[], thread_counts=[1])
    with pytest.raises(ValueError):
        sf.BenchConfig(bandwidths=[2], thread_counts=[0])
    with pytest.raises(ValueError):
        sf.BenchConfig(bandwidths=[2], thread_counts=[1], runs=0)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def test_csv_report_round_trip(tmp_path):
    records = sf.run_benchmark(_small_config(bandwidths=[2], runs=1))
    path = tmp_path / "report.csv"
    sf.write_report(records, str(path), format="csv")
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(records)
    assert list(rows[0]) == [
        "bandwidth", "threads", "direction", "run",
        "wall_seconds", "speedup", "efficiency", "max_abs_error", "max_rel_error",
    ]
    for row, record in zip(rows, records):
        assert int(row["bandwidth"]) == record.bandwidth
        assert int(row["threads"]) == record.threads
        assert row["direction"] == record.direction
        assert int(row["run"]) == record.run_index
        assert float(row["wall_seconds"]) == pytest.approx(record.wall_seconds)
        assert float(row["max_abs_error"]) == pytest.approx(record.max_abs_error)


def test_json_report_round_trip(tmp_path):
    records = sf.run_benchmark(_small_config(bandwidths=[2], runs=1))
    path = tmp_path / "report.json"
    sf.write_report(records, str(path), format="json")
    with open(path) as fh:
        rows = json.load(fh)
    assert len(rows) == len(records)
    for row, record in zip(rows, records):
        assert row["bandwidth"] == record.bandwidth
        assert row["speedup"] == pytest.approx(record.speedup)
        assert set(row) == {
            "bandwidth", "threads", "direction", "run",
            "wall_seconds", "speedup", "efficiency", "max_abs_error", "max_rel_error",
        }


def test_write_report_rejects_bad_input(tmp_path):
    path = tmp_path / "never.csv"
    with pytest.raises(ValueError):
        sf.write_report([], str(path))
    assert not path.exists()
    records = sf.run_benchmark(_small_config(bandwidths=[2], runs=1, thread_counts=[1]))
    with pytest.raises(ValueError):
        sf.write_report(records, str(path), format="yaml")
    assert not path.exists()


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

def test_cli_writes_report_and_summary(tmp_path, capsys):
    out = tmp_path / "cli.csv"
    code = main([
        "--bandwidths", "2", "--threads", "1,2", "--runs", "1",
        "--seed", "3", "--output", str(out),
    ])
    assert code == 0
    captured = capsys.readouterr()
    assert "B=2" in captured.out
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4  # 1 bandwidth x 1 run x 2 thread counts x 2 directions


def test_cli_stdout_json(capsys):
    code = main(["--bandwidths", "1", "--threads", "1", "--runs", "1", "--format", "json"])
    assert code == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 2
    assert rows[0]["bandwidth"] == 1


def test_cli_oracle_and_artifacts(tmp_path):
    out = tmp_path / "r.csv"
    code = main([
        "--bandwidths", "2", "--threads", "1", "--runs", "1", "--oracle",
        "--output", str(out),
        "--save-samples", str(tmp_path / "g.sofg"),
        "--save-coeffs", str(tmp_path / "c.sofc"),
    ])
    assert code == 0
    assert sf.read_samples(str(tmp_path / "g.sofg")).bandwidth == 2
    assert sf.read_coefficients(str(tmp_path / "c.sofc")).bandwidth == 2


def test_cli_error_exit_code(tmp_path, capsys):
    # unwritable output directory -> OSError -> exit code 2
    code = main([
        "--bandwidths", "1", "--threads", "1", "--runs", "1",
        "--output", str(tmp_path / "missing" / "report.csv"),
    ])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_cli_rejects_malformed_int_list():
    with pytest.raises(SystemExit):
        main(["--bandwidths", "2,x"])
