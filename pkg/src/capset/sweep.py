"""Exhaustive unordered-pair sweep over a point set.

For every unordered pair of distinct members the sweep computes the third
point of their line in packed rank form, tests it for membership (cap
violation), and optionally marks it in a coverage bitmap (completeness).

The kernel splits each rank into base-3 digit groups of width at most 5 and
uses per-group "negated digit sum" lookup tables scaled by the group's place
value, so the third-point rank of a whole tail block is three row-gathers and
two adds. Membership is a byte gather into the packed space bitmap.

Work is partitioned into fixed chunks (about 10 million pairs) of contiguous
anchor indices; the chunk list does not depend on the worker count, each
worker owns a private coverage buffer merged by OR at the end, and the
reported violation is the minimum in canonical pair order, so outcomes are
bit-identical for any number of workers.
"""
from __future__ import annotations

import multiprocessing as mp
import os
import sys
import time
from dataclasses import dataclass
from multiprocessing.connection import wait as mp_wait

import numpy as np

from .errors import CapacityError
from .f3core import MAX_BITMAP_DIM, POW3, PointSet, SpaceBitmap

DEFAULT_CHUNK_PAIRS = 10_000_000

# uint8 coverage scratch of 3^dim bytes is kept only while it fits easily in
# memory; beyond dim 18 coverage falls back to bit-packed scatter.
_SCRATCH_DIM_LIMIT = 18

_BIT8 = (1 << np.arange(8, dtype=np.uint8)).astype(np.uint8)


def resolve_threads(threads: int | None = None) -> int:
    """Explicit argument, else CAPSET_THREADS, else the CPU count."""
    if threads is not None:
        if threads < 1:
            raise ValueError(f"thread count must be >= 1, got {threads}")
        return threads
    env = os.environ.get("CAPSET_THREADS")
    if env:
        try:
            val = int(env)
        except ValueError as exc:
            raise ValueError(f"CAPSET_THREADS must be an integer, got {env!r}") from exc
        if val < 1:
            raise ValueError(f"CAPSET_THREADS must be >= 1, got {val}")
        return val
    return os.cpu_count() or 1


def pairs_total(m: int) -> int:
    return m * (m - 1) // 2


def pairs_before_anchor(m: int, i: int) -> int:
    """Number of pairs whose first member index is below i."""
    return i * (m - 1) - i * (i - 1) // 2


def pair_index(m: int, i: int, j: int) -> int:
    """Canonical 0-based index of the pair (i, j), i < j."""
    return pairs_before_anchor(m, i) + (j - i - 1)


def make_chunks(m: int, chunk_pairs: int = DEFAULT_CHUNK_PAIRS) -> list[tuple[int, int]]:
    """Split anchors [0, m-1) into ranges of roughly chunk_pairs pairs each."""
    chunks: list[tuple[int, int]] = []
    start = 0
    acc = 0
    for i in range(m - 1):
        acc += m - 1 - i
        if acc >= chunk_pairs:
            chunks.append((start, i + 1))
            start = i + 1
            acc = 0
    if start < m - 1:
        chunks.append((start, m - 1))
    return chunks


@dataclass
class SweepTask:
    points: PointSet
    mode: str = "cap"  # "cap" (early exit) or "coverage" (full sweep)
    chunk_pairs: int = DEFAULT_CHUNK_PAIRS
    threads: int | None = None
    progress: bool = False
    progress_interval: float = 1.0


@dataclass
class SweepOutcome:
    violation: tuple[int, int, int] | None  # ranks (p, q, third)
    coverage: SpaceBitmap | None
    pairs_examined: int


class _Kernel:
    """Per-process sweep state: digit groups, tables, membership bytes."""

    def __init__(self, ranks: np.ndarray, dim: int):
        if dim > MAX_BITMAP_DIM:
            raise CapacityError(
                f"dimension {dim} exceeds bitmap capacity {MAX_BITMAP_DIM}"
            )
        self.m = int(ranks.size)
        self.dim = dim
        self.nbits = POW3[dim]
        self.dtype = np.int32 if self.nbits < 2**31 else np.int64
        self.groups = []  # (coord array, table) most significant first
        shift = dim
        while shift > 0:
            width = min(5, shift)
            shift -= width
            gsize = POW3[width]
            gvals = ((ranks // POW3[shift]) % gsize).astype(self.dtype)
            self.groups.append((gvals, self._negadd_table(width, shift)))
        self.member_bytes = SpaceBitmap.from_ranks(ranks, dim).buf

    def _negadd_table(self, width: int, shift: int) -> np.ndarray:
        size = POW3[width]
        x = np.arange(size, dtype=np.int64)
        table = np.zeros((size, size), dtype=np.int64)
        for i in range(width):
            di = (x // POW3[i]) % 3
            table += ((-(di[:, None] + di[None, :])) % 3) * POW3[i]
        return (table * POW3[shift]).astype(self.dtype)

    def scan_chunk(
        self,
        a0: int,
        a1: int,
        cov_u8: np.ndarray | None,
        cov_bits: SpaceBitmap | None,
        progress_cb=None,
    ) -> tuple[int, int] | None:
        """Scan anchors [a0, a1); return the first violating (i, j) or None.

        In coverage mode (cov_u8 or cov_bits given) the whole chunk is always
        scanned; in cap mode the scan stops at the first violation.
        """
        m = self.m
        coverage = cov_u8 is not None or cov_bits is not None
        t = np.empty(m, self.dtype)
        tmp = np.empty(m, self.dtype)
        byt = np.empty(m, np.uint8)
        bit = np.empty(m, np.uint8)
        first: tuple[int, int] | None = None
        done = 0
        for i in range(a0, a1):
            length = m - 1 - i
            if length <= 0:
                break
            tail = slice(i + 1, m)
            tv = t[:length]
            tmpv = tmp[:length]
            gvals0, table0 = self.groups[0]
            np.take(table0[gvals0[i]], gvals0[tail], out=tv)
            for gvals, table in self.groups[1:]:
                np.take(table[gvals[i]], gvals[tail], out=tmpv)
                tv += tmpv
            if cov_u8 is not None:
                cov_u8[tv] = 1
            elif cov_bits is not None:
                np.bitwise_or.at(cov_bits.buf, tv >> 3, _BIT8[tv & 7])
            bytv = byt[:length]
            bitv = bit[:length]
            np.right_shift(tv, 3, out=tmpv)
            np.take(self.member_bytes, tmpv, out=bytv)
            np.bitwise_and(tv, 7, out=tmpv)
            np.take(_BIT8, tmpv, out=bitv)
            np.bitwise_and(bytv, bitv, out=bytv)
            if first is None and bytv.any():
                j = i + 1 + int(np.flatnonzero(bytv)[0])
                first = (i, j)
                if not coverage:
                    break
            done += length
            if progress_cb is not None and done >= (1 << 23):
                progress_cb(done)
                done = 0
        if progress_cb is not None and done:
            progress_cb(done)
        return first


def _third_rank(ranks: np.ndarray, dim: int, i: int, j: int) -> int:
    r = 0
    for k in range(dim):
        w = POW3[dim - 1 - k]
        a = (int(ranks[i]) // w) % 3
        b = (int(ranks[j]) // w) % 3
        r += ((-(a + b)) % 3) * w
    return r


class _Progress:
    """Throttled progress lines on stderr."""

    def __init__(self, total: int, enabled: bool, interval: float):
        self.total = total
        self.enabled = enabled
        self.interval = interval
        self.done = 0
        self.emitted = False
        self._last = time.monotonic()

    def add(self, pairs: int) -> None:
        self.done += pairs
        self.maybe_emit(self.done)

    def maybe_emit(self, done: int) -> None:
        if not self.enabled:
            return
        now = time.monotonic()
        if now - self._last >= self.interval:
            self._last = now
            self.emit(done)

    def emit(self, done: int) -> None:
        if not self.enabled:
            return
        self.emitted = True
        pct = 100.0 * done / self.total if self.total else 100.0
        print(f"sweep: {done}/{self.total} ({pct:.1f}%)", file=sys.stderr, flush=True)

    def finish(self, done: int) -> None:
        # Close out a run that already showed progress; stay silent otherwise.
        if self.emitted:
            self.emit(done)


def _new_coverage_buffers(dim: int) -> tuple[np.ndarray | None, SpaceBitmap | None]:
    if POW3[dim] <= POW3[_SCRATCH_DIM_LIMIT]:
        return np.zeros(POW3[dim], dtype=np.uint8), None
    return None, SpaceBitmap(dim)


def _pack_coverage(cov_u8: np.ndarray | None, cov_bits: SpaceBitmap | None, dim: int) -> SpaceBitmap:
    if cov_u8 is not None:
        return SpaceBitmap(dim, np.packbits(cov_u8, bitorder="little"))
    assert cov_bits is not None
    return cov_bits


def _worker_main(conn, ranks, dim, mode, chunks, indices, stop, counter) -> None:
    kernel = _Kernel(ranks, dim)
    coverage = mode == "coverage"
    cov_u8, cov_bits = _new_coverage_buffers(dim) if coverage else (None, None)

    def progress_cb(done: int) -> None:
        with counter.get_lock():
            counter.value += done

    first: tuple[int, int] | None = None
    for idx in indices:
        if not coverage and stop.value < idx:
            break
        a0, a1 = chunks[idx]
        hit = kernel.scan_chunk(a0, a1, cov_u8, cov_bits, progress_cb)
        if hit is not None:
            first = hit
            if not coverage:
                with stop.get_lock():
                    if idx < stop.value:
                        stop.value = idx
                break
    packed = _pack_coverage(cov_u8, cov_bits, dim).tobytes() if coverage else None
    conn.send((first, packed))
    conn.close()


def run_sweep(task: SweepTask) -> SweepOutcome:
    """Examine every unordered pair of the task's point set exactly once."""
    if task.mode not in ("cap", "coverage"):
        raise ValueError(f"unknown sweep mode {task.mode!r}")
    ps = task.points
    if ps.dim > MAX_BITMAP_DIM:
        raise CapacityError(
            f"dimension {ps.dim} exceeds bitmap capacity {MAX_BITMAP_DIM}"
        )
    coverage = task.mode == "coverage"
    m = len(ps)
    total = pairs_total(m)
    if m < 2:
        cov = SpaceBitmap(ps.dim) if coverage else None
        return SweepOutcome(None, cov, 0)

    chunks = make_chunks(m, task.chunk_pairs)
    workers = min(resolve_threads(task.threads), len(chunks))
    progress = _Progress(total, task.progress, task.progress_interval)

    if workers <= 1:
        first, cov = _run_inline(ps, task, chunks, progress)
    else:
        first, cov = _run_workers(ps, task, chunks, workers, progress)

    violation = None
    pairs = total
    if first is not None:
        i, j = first
        tr = _third_rank(ps.ranks, ps.dim, i, j)
        violation = (int(ps.ranks[i]), int(ps.ranks[j]), tr)
        if not coverage:
            pairs = pair_index(m, i, j) + 1
    if first is None or coverage:
        progress.finish(total)
    return SweepOutcome(violation, cov, pairs)


def _run_inline(
    ps: PointSet, task: SweepTask, chunks, progress
) -> tuple[tuple[int, int] | None, SpaceBitmap | None]:
    kernel = _Kernel(np.asarray(ps.ranks), ps.dim)
    coverage = task.mode == "coverage"
    cov_u8, cov_bits = _new_coverage_buffers(ps.dim) if coverage else (None, None)
    first: tuple[int, int] | None = None
    for a0, a1 in chunks:
        hit = kernel.scan_chunk(a0, a1, cov_u8, cov_bits, progress.add)
        if hit is not None and first is None:
            first = hit
            if not coverage:
                break
    cov = _pack_coverage(cov_u8, cov_bits, ps.dim) if coverage else None
    return first, cov


def _run_workers(
    ps: PointSet, task: SweepTask, chunks, workers, progress
) -> tuple[tuple[int, int] | None, SpaceBitmap | None]:
    ctx = mp.get_context("spawn")
    coverage = task.mode == "coverage"
    stop = ctx.Value("q", len(chunks))
    counter = ctx.Value("q", 0)
    splits = np.array_split(np.arange(len(chunks)), workers)
    procs = []
    conns = []
    for part in splits:
        if part.size == 0:
            continue
        parent_conn, child_conn = ctx.Pipe(duplex=False)
        proc = ctx.Process(
            target=_worker_main,
            args=(
                child_conn,
                np.asarray(ps.ranks),
                ps.dim,
                task.mode,
                chunks,
                [int(x) for x in part],
                stop,
                counter,
            ),
        )
        proc.start()
        child_conn.close()
        procs.append(proc)
        conns.append(parent_conn)

    merged: SpaceBitmap | None = SpaceBitmap(ps.dim) if coverage else None
    first: tuple[int, int] | None = None
    pending = list(conns)
    try:
        while pending:
            ready = mp_wait(pending, timeout=0.5)
            for conn in ready:
                hit, packed = conn.recv()
                conn.close()
                pending.remove(conn)
                if hit is not None and (first is None or hit < first):
                    first = hit
                if packed is not None and merged is not None:
                    merged.or_inplace(
                        SpaceBitmap(ps.dim, np.frombuffer(packed, dtype=np.uint8))
                    )
            progress.maybe_emit(int(counter.value))
    finally:
        for proc in procs:
            proc.join()
    return first, merged
