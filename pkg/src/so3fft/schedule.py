"""Work partitioning: order-pair indexing, symmetry clusters, and execution.

Order pairs (m, m') with 0 <= m' <= m form a triangle that two different
schemes flatten to consecutive integers:

* sigma: row-major triangle number, ``sigma = m(m+1)/2 + m'``; the inverse
  needs floating point (``m = floor(sqrt(2 sigma + 1/4) - 1/2)``).
* kappa: the strict lower triangle (0 < m' < m) is first rearranged into a
  dense rectangle of ``B-2`` columns and ``floor((B-1)/2)`` rows, so that
  ``kappa`` splits with one integer divmod and no square root:
  ``i = kappa // (B-1) + 1``, ``j = kappa % (B-1) + 1``; the rectangle cell
  (i, j) maps to orders ``(B-i, B-j)`` when j > i, else ``(i+1, j)``.
  Valid kappa run over ``[0, (B-1)(B-2)/2)`` (exclusive upper bound).

Each base pair expands into a symmetry cluster (1, 4, or 8 order pairs whose
Wigner columns derive from the base by exact sign/reflection rules), and the
clusters partition the full (2B-1)^2 order square.  ``run_items`` executes
per-cluster work sequentially or on a dynamically scheduled worker pool with
deterministic, order-independent results.
"""

from __future__ import annotations

import math
import multiprocessing
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

from .core import validate_bandwidth
from .wigner import SYMMETRY_RELATIONS, SymmetryRelation


class OrderPair(NamedTuple):
    m: int
    mp: int


def sigma_index(m: int, mp: int) -> int:
    """Triangle index sigma of a pair with 0 <= m' <= m."""
    if not 0 <= mp <= m:
        raise ValueError(f"require 0 <= m' <= m, got (m={m}, m'={mp})")
    return m * (m + 1) // 2 + mp


def sigma_inverse(sigma: int) -> OrderPair:
    """Invert the triangle index; uses the floating-point closed form."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    m = int(math.floor(math.sqrt(2.0 * sigma + 0.25) - 0.5))
    return OrderPair(m, sigma - m * (m + 1) // 2)


def _rect_rows(bandwidth: int) -> int:
    return (bandwidth - 1) // 2


def rect_to_orders(i: int, j: int, bandwidth: int) -> OrderPair:
    """Map a rectangle cell (i, j) to its strict-lower-triangle order pair."""
    b = validate_bandwidth(bandwidth)
    if not 1 <= i <= _rect_rows(b):
        raise ValueError(f"row i={i} outside [1, {_rect_rows(b)}] for B={b}")
    if not 1 <= j <= b - 1:
        raise ValueError(f"column j={j} outside [1, {b - 1}] for B={b}")
    if b % 2 == 1 and i == _rect_rows(b) and j > _rect_rows(b):
        raise ValueError(f"cell (i={i}, j={j}) beyond the half row of odd B={b}")
    if j > i:
        return OrderPair(b - i, b - j)
    return OrderPair(i + 1, j)


def kappa_count(bandwidth: int) -> int:
    """Number of strict-lower-triangle pairs: (B-1)(B-2)/2."""
    b = validate_bandwidth(bandwidth)
    return (b - 1) * (b - 2) // 2


def kappa_split(kappa: int, bandwidth: int) -> tuple[int, int]:
    """Integer-only split of kappa into a rectangle cell (i, j)."""
    b = validate_bandwidth(bandwidth)
    if not 0 <= kappa < kappa_count(b):
        raise ValueError(f"kappa={kappa} outside [0, {kappa_count(b)}) for B={b}")
    return kappa // (b - 1) + 1, kappa % (b - 1) + 1


def kappa_to_orders(kappa: int, bandwidth: int) -> OrderPair:
    """Order pair of work unit kappa."""
    i, j = kappa_split(kappa, bandwidth)
    return rect_to_orders(i, j, bandwidth)


@dataclass(frozen=True)
class SymmetryCluster:
    """A base order pair and the orbit derivable from it by symmetry.

    ``members`` holds (pair, relation) entries, base (identity) first; each
    member's Wigner column follows from the base column via its relation.
    """

    kind: str  # "origin" | "axis" | "diagonal" | "full"
    base: OrderPair
    members: tuple[tuple[OrderPair, SymmetryRelation], ...]


def _make_cluster(kind: str, m: int, mp: int, tags: Sequence[str]) -> SymmetryCluster:
    base = OrderPair(m, mp)
    members = tuple(
        (OrderPair(*SYMMETRY_RELATIONS[tag].target(m, mp)), SYMMETRY_RELATIONS[tag])
        for tag in tags
    )
    return SymmetryCluster(kind, base, members)


_AXIS_TAGS = ("identity", "negate_both", "swap", "swap_negate_both")
_DIAGONAL_TAGS = ("identity", "negate_both", "negate_m", "negate_mp")
_FULL_TAGS = (
    "identity", "negate_both", "swap", "swap_negate_both",
    "negate_m", "negate_mp", "swap_negate_m", "swap_negate_mp",
)


def cluster_for_base(m: int, mp: int) -> SymmetryCluster:
    """Cluster of the base pair (m, m') with 0 <= m' <= m."""
    if not 0 <= mp <= m:
        raise ValueError(f"base pair must satisfy 0 <= m' <= m, got ({m}, {mp})")
    if m == 0:
        return _make_cluster("origin", 0, 0, ("identity",))
    if mp == 0:
        return _make_cluster("axis", m, 0, _AXIS_TAGS)
    if mp == m:
        return _make_cluster("diagonal", m, m, _DIAGONAL_TAGS)
    return _make_cluster("full", m, mp, _FULL_TAGS)


def enumerate_clusters(bandwidth: int, partitioner: str = "kappa") -> list[SymmetryCluster]:
    """All symmetry clusters below the bandwidth; together they cover the
    (2B-1)^2 order pairs exactly once.

    ``partitioner`` picks the enumeration route for the interior ("full")
    clusters: "kappa" (integer divmod split; default) or "sigma" (triangle
    index with its floating-point inverse).  Both yield the same clusters;
    kappa lists origin/axis/diagonal first, sigma runs in triangle order.
    """
    b = validate_bandwidth(bandwidth)
    if partitioner == "kappa":
        clusters = [cluster_for_base(0, 0)]
        clusters += [cluster_for_base(m, 0) for m in range(1, b)]
        clusters += [cluster_for_base(m, m) for m in range(1, b)]
        clusters += [
            cluster_for_base(*kappa_to_orders(kappa, b)) for kappa in range(kappa_count(b))
        ]
        return clusters
    if partitioner == "sigma":
        return [
            cluster_for_base(*sigma_inverse(sigma)) for sigma in range(b * (b + 1) // 2)
        ]
    raise ValueError(f"unknown partitioner {partitioner!r}")


@dataclass(frozen=True)
class WorkItem:
    """One schedulable unit: a cluster plus the order pairs it writes.

    Regions of distinct items are disjoint — every order pair belongs to
    exactly one item — so items may complete in any order.
    """

    index: int
    cluster: SymmetryCluster

    @property
    def regions(self) -> tuple[OrderPair, ...]:
        return tuple(pair for pair, _ in self.cluster.members)


def make_work_items(clusters: Sequence[SymmetryCluster]) -> list[WorkItem]:
    return [WorkItem(index, cluster) for index, cluster in enumerate(clusters)]


class WorkItemError(RuntimeError):
    """A worker failed; carries the index of the offending item."""

    def __init__(self, index: int, detail: str):
        super().__init__(f"work item {index} failed:\n{detail}")
        self.index = index


_FORK_STATE: tuple[Callable, Sequence] | None = None


def _invoke_item(index: int):
    worker, items = _FORK_STATE
    try:
        return index, True, worker(items[index])
    except Exception:
        return index, False, traceback.format_exc()


def run_items(items: Sequence, worker: Callable, threads: int = 1, chunksize: int | None = None) -> list:
    """Run ``worker`` over ``items`` and return results in item order.

    ``threads == 1`` executes a plain loop.  Larger counts dispatch item
    batches dynamically from a shared queue to a pool of forked worker
    processes — each inherits ``items`` read-only, so only item indices and
    results cross process boundaries — falling back to an in-process thread
    pool where fork is unavailable.  ``chunksize`` is the queue batch size
    (default: enough for ~8 batches per worker, floor 1; smaller batches
    balance better, larger ones amortize queue traffic).  Results are
    collected into item order before returning (full barrier), so for a
    pure worker the output is identical, value for value, to the sequential
    loop regardless of scheduling.  A failing item aborts the batch with
    ``WorkItemError``.
    """
    global _FORK_STATE
    if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
        raise ValueError(f"threads must be an integer >= 1, got {threads!r}")
    items = list(items)
    if threads == 1 or len(items) <= 1:
        results = []
        for index, item in enumerate(items):
            try:
                results.append(worker(item))
            except Exception:
                raise WorkItemError(index, traceback.format_exc()) from None
        return results

    if chunksize is None:
        chunksize = max(1, len(items) // (threads * 8))
    elif chunksize < 1:
        raise ValueError(f"chunksize must be >= 1, got {chunksize}")

    results = [None] * len(items)
    if "fork" in multiprocessing.get_all_start_methods():
        if _FORK_STATE is not None:
            raise RuntimeError("nested parallel run_items is not supported")
        _FORK_STATE = (worker, items)
        try:
            with multiprocessing.get_context("fork").Pool(processes=threads) as pool:
                for index, ok, payload in pool.imap_unordered(
                    _invoke_item, range(len(items)), chunksize=chunksize
                ):
                    if not ok:
                        raise WorkItemError(index, payload)
                    results[index] = payload
        finally:
            _FORK_STATE = None
        return results

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(worker, item): index for index, item in enumerate(items)}
        for future, index in futures.items():
            try:
                results[index] = future.result()
            except Exception:
                raise WorkItemError(index, traceback.format_exc()) from None
    return results
