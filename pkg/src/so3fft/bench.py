"""Benchmark harness and command-line entry point.

Protocol, per bandwidth and repetition: draw random coefficients, synthesize
samples with the inverse transform, then recover coefficients with the
forward transform; time the two directions separately on a monotonic clock
and compare the recovered coefficients against the generated ones.  The
sequential run of the same process invocation is both the threads=1 record
and the speedup baseline for the parallel runs, so speedup at one thread is
exactly 1.  Plan construction (grid, weights, clusters) is timed separately
and excluded from the headline walls; ``--include-plan`` adds it back.

Reports are CSV (columns exactly ``bandwidth,threads,direction,run,
wall_seconds,speedup,efficiency,max_abs_error,max_rel_error``) or JSON (an
array of objects with the same keys).
"""

from __future__ import annotations

import os

for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    # Pin BLAS pools before numpy loads, so measured speedup comes from the
    # work partitioning and not from library-internal oversubscription.
    os.environ.setdefault(_var, "1")

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .core import So3Coefficients, coeff_count, write_coefficients, write_samples
from .soft import (
    DIRECT_BANDWIDTH_CAP,
    TransformPlan,
    fsoft_direct,
    fsoft_parallel,
    fsoft_sequential,
    ifsoft_direct,
    ifsoft_parallel,
    ifsoft_sequential,
    make_plan,
)

_ORACLE_TOLERANCE = 1e-10

REPORT_FIELDS = (
    "bandwidth",
    "threads",
    "direction",
    "run",
    "wall_seconds",
    "speedup",
    "efficiency",
    "max_abs_error",
    "max_rel_error",
)


class OracleMismatchError(RuntimeError):
    """Fast and direct transforms disagreed beyond tolerance."""


@dataclass(frozen=True)
class BenchConfig:
    bandwidths: list[int]
    thread_counts: list[int]
    runs: int = 10
    seed: int = 0
    oracle: bool = False
    include_plan: bool = False

    def __post_init__(self) -> None:
        if not self.bandwidths or any(b < 1 for b in self.bandwidths):
            raise ValueError("bandwidths must be a nonempty list of integers >= 1")
        if not self.thread_counts or any(t < 1 for t in self.thread_counts):
            raise ValueError("thread counts must be a nonempty list of integers >= 1")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


@dataclass(frozen=True)
class BenchRecord:
    bandwidth: int
    threads: int
    direction: str  # "forward" | "inverse"
    run_index: int
    wall_seconds: float
    speedup: float
    efficiency: float
    max_abs_error: float
    max_rel_error: float

    def as_row(self) -> dict:
        return {
            "bandwidth": self.bandwidth,
            "threads": self.threads,
            "direction": self.direction,
            "run": self.run_index,
            "wall_seconds": self.wall_seconds,
            "speedup": self.speedup,
            "efficiency": self.efficiency,
            "max_abs_error": self.max_abs_error,
            "max_rel_error": self.max_rel_error,
        }


def random_coefficients(bandwidth: int, seed: int) -> So3Coefficients:
    """Random spectrum: re and im uniform on [-1, 1], PCG64 stream.

    Stream rule: coefficient slot k consumes draws 2k (real part) and 2k+1
    (imaginary part) of the generator seeded exactly with ``seed``.
    """
    gen = np.random.Generator(np.random.PCG64(seed))
    draws = gen.uniform(-1.0, 1.0, size=2 * coeff_count(bandwidth))
    return So3Coefficients(bandwidth, draws[0::2] + 1j * draws[1::2])


def error_metrics(reference: So3Coefficients, reconstructed: So3Coefficients) -> tuple[float, float]:
    """(max absolute, max relative) error; relative skips zero reference slots."""
    if reference.bandwidth != reconstructed.bandwidth:
        raise ValueError("bandwidth mismatch between reference and reconstruction")
    diff = np.abs(reconstructed.data - reference.data)
    magnitude = np.abs(reference.data)
    nonzero = magnitude > 0.0
    max_abs = float(diff.max()) if diff.size else 0.0
    max_rel = float((diff[nonzero] / magnitude[nonzero]).max()) if np.any(nonzero) else 0.0
    return max_abs, max_rel


def _check_oracle(bandwidth: int, plan_grid, reconstructed, reference_coeffs) -> None:
    direct_fwd = fsoft_direct(plan_grid)
    gap_fwd = float(np.max(np.abs(direct_fwd.data - reconstructed.data)))
    direct_inv = ifsoft_direct(reference_coeffs)
    gap_inv = float(np.max(np.abs(direct_inv.data - plan_grid.data)))
    if gap_fwd >= _ORACLE_TOLERANCE or gap_inv >= _ORACLE_TOLERANCE:
        raise OracleMismatchError(
            f"B={bandwidth}: fast vs direct max abs {max(gap_fwd, gap_inv):.3e} "
            f"exceeds {_ORACLE_TOLERANCE:.0e}"
        )


def run_benchmark(
    config: BenchConfig,
    save_samples_path: str | None = None,
    save_coeffs_path: str | None = None,
) -> list[BenchRecord]:
    """Execute the protocol and return one record per (bandwidth, threads,
    direction, run).  Optional paths persist the sequential round-trip
    artifacts of the last bandwidth processed."""
    records: list[BenchRecord] = []
    for bandwidth in config.bandwidths:
        t0 = time.perf_counter()
        plan = make_plan(bandwidth)
        plan_seconds = time.perf_counter() - t0 if config.include_plan else 0.0

        for run_index in range(config.runs):
            coeffs = random_coefficients(bandwidth, config.seed + run_index)

            t0 = time.perf_counter()
            grid_seq = ifsoft_sequential(coeffs, plan)
            inverse_base = time.perf_counter() - t0 + plan_seconds
            t0 = time.perf_counter()
            recovered_seq = fsoft_sequential(grid_seq, plan)
            forward_base = time.perf_counter() - t0 + plan_seconds
            metrics_seq = error_metrics(coeffs, recovered_seq)

            if config.oracle and bandwidth <= DIRECT_BANDWIDTH_CAP:
                _check_oracle(bandwidth, grid_seq, recovered_seq, coeffs)

            for threads in config.thread_counts:
                if threads == 1:
                    walls = {"forward": forward_base, "inverse": inverse_base}
                    metrics = metrics_seq
                else:
                    t0 = time.perf_counter()
                    grid_par = ifsoft_parallel(coeffs, plan, threads)
                    inverse_wall = time.perf_counter() - t0 + plan_seconds
                    t0 = time.perf_counter()
                    recovered_par = fsoft_parallel(grid_par, plan, threads)
                    forward_wall = time.perf_counter() - t0 + plan_seconds
                    walls = {"forward": forward_wall, "inverse": inverse_wall}
                    metrics = error_metrics(coeffs, recovered_par)
                bases = {"forward": forward_base, "inverse": inverse_base}
                for direction in ("forward", "inverse"):
                    speedup = bases[direction] / walls[direction]
                    records.append(
                        BenchRecord(
                            bandwidth=bandwidth,
                            threads=threads,
                            direction=direction,
                            run_index=run_index,
                            wall_seconds=walls[direction],
                            speedup=speedup,
                            efficiency=speedup / threads,
                            max_abs_error=metrics[0],
                            max_rel_error=metrics[1],
                        )
                    )

            if run_index == 0:
                if save_samples_path is not None:
                    write_samples(save_samples_path, grid_seq)
                if save_coeffs_path is not None:
                    write_coefficients(save_coeffs_path, coeffs)
    return records


def _format_csv(records: list[BenchRecord]) -> str:
    import io

    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for record in records:
        writer.writerow(record.as_row())
    return buffer.getvalue()


def _format_json(records: list[BenchRecord]) -> str:
    return json.dumps([record.as_row() for record in records], indent=2) + "\n"


def write_report(records: list[BenchRecord], path: str, format: str = "csv") -> None:
    """Persist records; empty record lists and unknown formats are rejected
    before any file is created."""
    if not records:
        raise ValueError("refusing to write an empty report")
    if format == "csv":
        text = _format_csv(records)
    elif format == "json":
        text = _format_json(records)
    else:
        raise ValueError(f"unknown report format {format!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _summary_lines(records: list[BenchRecord]) -> list[str]:
    lines = []
    keys = sorted({(r.bandwidth, r.direction, r.threads) for r in records})
    for bandwidth, direction, threads in keys:
        group = [
            r for r in records
            if (r.bandwidth, r.direction, r.threads) == (bandwidth, direction, threads)
        ]
        walls = np.array([r.wall_seconds for r in group])
        speedups = np.array([r.speedup for r in group])
        abs_errors = np.array([r.max_abs_error for r in group])
        lines.append(
            f"B={bandwidth:<4d} {direction:<7s} threads={threads:<2d} "
            f"wall {walls.mean():.4f}s ± {walls.std():.4f}  "
            f"speedup {speedups.mean():.2f}  eff {speedups.mean() / threads:.2f}  "
            f"max_abs {abs_errors.mean():.2e} ± {abs_errors.std():.2e}"
        )
    return lines


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="so3fft-bench",
        description="Round-trip benchmark of the fast transforms on the rotation group.",
    )
    parser.add_argument("--bandwidths", type=_int_list, default=[8, 16, 32],
                        help="comma-separated bandwidths (default: 8,16,32)")
    parser.add_argument("--threads", type=_int_list, default=[1, 2, 4],
                        help="comma-separated worker counts (default: 1,2,4)")
    parser.add_argument("--runs", type=int, default=10, help="repetitions per configuration (default: 10)")
    parser.add_argument("--seed", type=int, default=0, help="base RNG seed (default: 0)")
    parser.add_argument("--output", type=str, default=None, help="report file path (default: print to stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv", help="report format (default: csv)")
    parser.add_argument("--oracle", action="store_true",
                        help=f"also check fast vs direct transforms for B <= {DIRECT_BANDWIDTH_CAP}")
    parser.add_argument("--include-plan", action="store_true",
                        help="add plan construction time to each wall clock")
    parser.add_argument("--save-samples", type=str, default=None, metavar="PATH",
                        help="write the sequential round trip's sample grid (last bandwidth) as SOFG")
    parser.add_argument("--save-coeffs", type=str, default=None, metavar="PATH",
                        help="write the generated coefficients (last bandwidth) as SOFC")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    config = BenchConfig(
        bandwidths=args.bandwidths,
        thread_counts=args.threads,
        runs=args.runs,
        seed=args.seed,
        oracle=args.oracle,
        include_plan=args.include_plan,
    )
    try:
        records = run_benchmark(
            config,
            save_samples_path=args.save_samples,
            save_coeffs_path=args.save_coeffs,
        )
        if args.output is not None:
            write_report(records, args.output, args.format)
            for line in _summary_lines(records):
                print(line)
        else:
            text = _format_csv(records) if args.format == "csv" else _format_json(records)
            sys.stdout.write(text)
    except (OracleMismatchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
