"""Certificate-producing checkers for every property the constructions claim.

Every checker returns a VerifyReport whose witness, when present, re-triggers
the failure through the scalar primitives: a cap witness is a collinear
triple, a pair-condition witness is a pair with disjoint zero supports, a
completeness witness is an extension point, and so on. Scans run in canonical
rank order, so witnesses and work counts are reproducible across runs and
worker counts.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ConstructionError, DimensionError, PreconditionError
from .f3core import (
    MAX_BITMAP_DIM,
    POW3,
    Point,
    PointSet,
    SpaceBitmap,
    coords_from_ranks,
    ranks_from_coords,
    support_class,
    unrank,
    zero_masks,
)
from .sweep import SweepOutcome, SweepTask, pair_index, pairs_total, resolve_threads, run_sweep

NAIVE_SIZE_LIMIT = 512


@dataclass
class VerifyReport:
    property: str
    passed: bool
    witness: tuple[Point, ...] | None
    pairs_examined: int
    elapsed: float
    workers: int = 1


def _report(prop: str, passed: bool, witness, count: int, t0: float, workers: int = 1) -> VerifyReport:
    return VerifyReport(prop, passed, witness, count, time.perf_counter() - t0, workers)


def _naive_cap_scan(coords: np.ndarray) -> tuple[tuple[int, int, int] | None, int]:
    """Direct triple-sum scan in lexicographic (i, j, k) order.

    Tests (a + b + c) mod 3 = 0 on raw coordinates and never consults
    third-point or membership logic, keeping it independent of the sweep.
    """
    m = coords.shape[0]
    work = coords.astype(np.int16)
    count = 0
    for i in range(m - 2):
        ci = work[i]
        for j in range(i + 1, m - 1):
            sums = (ci + work[j] + work[j + 1 :]) % 3
            hits = ~sums.any(axis=1)
            if hits.any():
                k = j + 1 + int(np.flatnonzero(hits)[0])
                count += k - j
                return (i, j, k), count
            count += m - 1 - j
    return None, count


def is_cap(
    s: PointSet,
    mode: str = "auto",
    threads: int | None = None,
    progress: bool = False,
) -> VerifyReport:
    """No three distinct members sum to zero coordinatewise."""
    t0 = time.perf_counter()
    if mode == "auto":
        mode = "naive" if (len(s) <= NAIVE_SIZE_LIMIT or s.dim > MAX_BITMAP_DIM) else "fast"
    if mode == "naive":
        hit, count = _naive_cap_scan(s.coords())
        witness = None
        if hit is not None:
            witness = tuple(s.point(i) for i in hit)
        return _report("cap", hit is None, witness, count, t0)
    if mode != "fast":
        raise ValueError(f"unknown is_cap mode {mode!r}")
    outcome = run_sweep(SweepTask(points=s, mode="cap", threads=threads, progress=progress))
    witness = None
    if outcome.violation is not None:
        witness = tuple(unrank(r, s.dim) for r in outcome.violation)
    return _report(
        "cap",
        outcome.violation is None,
        witness,
        outcome.pairs_examined,
        t0,
        resolve_threads(threads),
    )


def coverage_complete(s: PointSet, coverage: SpaceBitmap, pairs: int = 0, t0: float | None = None, workers: int = 1) -> VerifyReport:
    """Every rank outside s is the third point of some pair of s."""
    if t0 is None:
        t0 = time.perf_counter()
    if coverage.dim != s.dim:
        raise DimensionError("coverage bitmap dimension differs from the set")
    merged = coverage.copy()
    merged.or_inplace(s.bitmap())
    missing = merged.first_missing()
    witness = (unrank(missing, s.dim),) if missing is not None else None
    return _report("complete_cap", missing is None, witness, pairs, t0, workers)


def verify_cap_and_complete(
    s: PointSet, threads: int | None = None, progress: bool = False
) -> tuple[VerifyReport, VerifyReport | None]:
    """Cap and completeness reports from one shared coverage sweep.

    When the cap check fails, completeness is undefined and None is returned
    in its place.
    """
    t0 = time.perf_counter()
    workers = resolve_threads(threads)
    outcome = run_sweep(
        SweepTask(points=s, mode="coverage", threads=threads, progress=progress)
    )
    if outcome.violation is not None:
        witness = tuple(unrank(r, s.dim) for r in outcome.violation)
        return _report("cap", False, witness, outcome.pairs_examined, t0, workers), None
    cap_rep = _report("cap", True, None, outcome.pairs_examined, t0, workers)
    comp_rep = coverage_complete(s, outcome.coverage, outcome.pairs_examined, t0, workers)
    return cap_rep, comp_rep


def is_complete_cap(s: PointSet, threads: int | None = None, progress: bool = False) -> VerifyReport:
    """Complete cap check; requires a cap and raises otherwise."""
    cap_rep, comp_rep = verify_cap_and_complete(s, threads, progress)
    if not cap_rep.passed:
        raise PreconditionError(
            "is_cap", "completeness is defined only for cap sets", cap_rep.witness
        )
    assert comp_rep is not None
    return comp_rep


def pset_pair_condition(s: PointSet) -> VerifyReport:
    """Every two distinct members share a zero coordinate."""
    t0 = time.perf_counter()
    zm = s.zero_masks()
    m = len(s)
    count = 0
    for i in range(m - 1):
        bad = (zm[i] & zm[i + 1 :]) == 0
        if bad.any():
            j = i + 1 + int(np.flatnonzero(bad)[0])
            count += j - i
            return _report(
                "pset_pair_condition", False, (s.point(i), s.point(j)), count, t0
            )
        count += m - 1 - i
    return _report("pset_pair_condition", True, None, count, t0)


def is_pset(s: PointSet, threads: int | None = None) -> VerifyReport:
    """Pair condition plus cap-ness."""
    t0 = time.perf_counter()
    pair_rep = pset_pair_condition(s)
    if not pair_rep.passed:
        return _report("pset", False, pair_rep.witness, pair_rep.pairs_examined, t0)
    cap_rep = is_cap(s, threads=threads)
    count = pair_rep.pairs_examined + cap_rep.pairs_examined
    return _report("pset", cap_rep.passed, cap_rep.witness, count, t0)


def is_odd_pset(s: PointSet) -> VerifyReport:
    """Every member has an odd number of zero coordinates."""
    t0 = time.perf_counter()
    zeros = (s.coords() == 0).sum(axis=1)
    bad = np.flatnonzero(zeros % 2 == 0)
    if bad.size:
        i = int(bad[0])
        return _report("odd_pset", False, (s.point(i),), i + 1, t0)
    return _report("odd_pset", True, None, len(s), t0)


def is_b_saturated(s: PointSet) -> VerifyReport:
    """The full support class of every member lies inside the set."""
    t0 = time.perf_counter()
    m = len(s)
    if m == 0:
        return _report("b_saturated", True, None, 0, t0)
    zm = s.zero_masks()
    zeros = (s.coords() == 0).sum(axis=1).astype(np.int64)
    expected = np.int64(1) << (s.dim - zeros)
    _, inverse, counts = np.unique(zm, return_inverse=True, return_counts=True)
    bad = np.flatnonzero(counts[inverse] != expected)
    if bad.size:
        i = int(bad[0])
        member = s.point(i)
        for q in support_class(member):
            if q not in s:
                return _report("b_saturated", False, (q,), i + 1, t0)
    return _report("b_saturated", True, None, m, t0)


def is_complete_pset(s: PointSet, precheck: bool = True) -> VerifyReport:
    """No external point can be added while keeping the P-set conditions.

    The witness of a failure is an extension point. The count reports how
    many external candidates were examined.
    """
    t0 = time.perf_counter()
    if precheck:
        rep = is_pset(s)
        if not rep.passed:
            raise PreconditionError(
                "is_pset", "completeness is defined only for P-sets", rep.witness
            )
    if s.dim > MAX_BITMAP_DIM:
        raise CapacityError(
            f"dimension {s.dim} exceeds bitmap capacity {MAX_BITMAP_DIM}"
        )
    m = len(s)
    zm = s.zero_masks()
    mem_coords = s.coords().astype(np.int16)
    member_bitmap = s.bitmap()
    nbits = POW3[s.dim]
    chunk = max(64, (1 << 21) // max(m * s.dim, 1))
    count = 0
    for lo in range(0, nbits, chunk):
        ranks = np.arange(lo, min(lo + chunk, nbits), dtype=np.int64)
        external = ranks[~np.isin(ranks, s.ranks)] if m else ranks
        if external.size == 0:
            continue
        coords = coords_from_ranks(external, s.dim)
        cand_zm = zero_masks(coords)
        ok = np.ones(external.size, dtype=bool)
        if m:
            # pair condition against every member
            ok &= ((cand_zm[:, None] & zm[None, :]) != 0).all(axis=1)
            # no member pair completes a line through the candidate
            thirds = (-(coords[:, None, :].astype(np.int16) + mem_coords[None, :, :])) % 3
            trank = ranks_from_coords(thirds.reshape(-1, s.dim)).reshape(external.size, m)
            in_set = (member_bitmap.buf[trank >> 3] & (1 << (trank & 7)).astype(np.uint8)) != 0
            ok &= ~in_set.any(axis=1)
        hits = np.flatnonzero(ok)
        if hits.size:
            i = int(hits[0])
            count += i + 1
            witness = (unrank(int(external[i]), s.dim),)
            return _report("complete_pset", False, witness, count, t0)
        count += int(external.size)
    return _report("complete_pset", True, None, count, t0)


def pset_characterization(s: PointSet) -> VerifyReport:
    """Zero-support shape conditions over all pairs and triples.

    Condition over pairs: shared zero coordinate. Condition over triples: all
    three zero supports equal, or some pair of the triple shares a zero index
    at which the remaining point is nonzero.
    """
    t0 = time.perf_counter()
    pair_rep = pset_pair_condition(s)
    count = pair_rep.pairs_examined
    if not pair_rep.passed:
        return _report("characterization", False, pair_rep.witness, count, t0)
    zm = s.zero_masks()
    m = len(s)
    for i in range(m - 2):
        zi = zm[i]
        for j in range(i + 1, m - 1):
            zj = zm[j]
            tail = zm[j + 1 :]
            ok = (
                ((zi & zj & ~tail) != 0)
                | ((zi & tail & ~zj) != 0)
                | ((zj & tail & ~zi) != 0)
                | ((zi == zj) & (tail == zi))
            )
            bad = np.flatnonzero(~ok)
            if bad.size:
                k = j + 1 + int(bad[0])
                count += k - j
                witness = (s.point(i), s.point(j), s.point(k))
                return _report("characterization", False, witness, count, t0)
            count += m - 1 - j
    return _report("characterization", True, None, count, t0)


def _check_dims(*sets: PointSet) -> int:
    dims = {s.dim for s in sets}
    if len(dims) != 1:
        raise DimensionError(f"point sets of mixed dimensions {sorted(dims)}")
    return dims.pop()


def check_condition1(p1: PointSet, p2: PointSet, p3: PointSet) -> VerifyReport:
    """No zero-sum triple across the product p1 x p2 x p3."""
    t0 = time.perf_counter()
    _check_dims(p1, p2, p3)
    c1 = p1.coords().astype(np.int16)
    c2 = p2.coords().astype(np.int16)
    c3 = p3.coords().astype(np.int16)
    n2, n3 = len(p2), len(p3)
    count = 0
    for ix in range(len(p1)):
        sums = (c1[ix] + c2[:, None, :] + c3[None, :, :]) % 3
        hits = ~sums.any(axis=2)
        if hits.any():
            iy, iz = np.unravel_index(int(np.flatnonzero(hits.ravel())[0]), hits.shape)
            count += (int(iy) * n3 + int(iz)) + 1
            witness = (p1.point(ix), p2.point(int(iy)), p3.point(int(iz)))
            return _report("condition1", False, witness, count, t0)
        count += n2 * n3
    return _report("condition1", True, None, count, t0)


def check_condition2(p1: PointSet, p3: PointSet) -> VerifyReport:
    """No zero sum of a p1 member with an unordered distinct pair from p3."""
    t0 = time.perf_counter()
    _check_dims(p1, p3)
    c1 = p1.coords().astype(np.int16)
    c3 = p3.coords().astype(np.int16)
    n3 = len(p3)
    per_x = pairs_total(n3)
    for ix in range(len(p1)):
        for iy in range(n3 - 1):
            sums = (c1[ix] + c3[iy] + c3[iy + 1 :]) % 3
            hits = ~sums.any(axis=1)
            if hits.any():
                iz = iy + 1 + int(np.flatnonzero(hits)[0])
                count = ix * per_x + pair_index(n3, iy, iz) + 1
                witness = (p1.point(ix), p3.point(iy), p3.point(iz))
                return _report("condition2", False, witness, count, t0)
    return _report("condition2", True, None, len(p1) * per_x, t0)


def check_condition3(p12: PointSet, p3: PointSet) -> VerifyReport:
    """Every cross pair shares a zero coordinate."""
    t0 = time.perf_counter()
    _check_dims(p12, p3)
    zma = p12.zero_masks()
    zmb = p3.zero_masks()
    nb = len(p3)
    count = 0
    for ix in range(len(p12)):
        bad = (zma[ix] & zmb) == 0
        if bad.any():
            iy = int(np.flatnonzero(bad)[0])
            count += iy + 1
            witness = (p12.point(ix), p3.point(iy))
            return _report("condition3", False, witness, count, t0)
        count += nb
    return _report("condition3", True, None, count, t0)


def _rank_mod3(rows: list[np.ndarray]) -> int:
    mat = np.array(rows, dtype=np.int64) % 3
    rank_count = 0
    cols = mat.shape[1]
    row = 0
    for col in range(cols):
        pivot = None
        for r in range(row, mat.shape[0]):
            if mat[r, col] % 3:
                pivot = r
                break
        if pivot is None:
            continue
        mat[[row, pivot]] = mat[[pivot, row]]
        inv = 1 if mat[row, col] % 3 == 1 else 2  # inverse of 1 is 1, of 2 is 2
        mat[row] = (mat[row] * inv) % 3
        for r in range(mat.shape[0]):
            if r != row and mat[r, col] % 3:
                mat[r] = (mat[r] - mat[r, col] * mat[row]) % 3
        row += 1
        rank_count += 1
        if row == mat.shape[0]:
            break
    return rank_count


def is_projective_cap(a) -> VerifyReport:
    """Every distinct triple of representative vectors is independent mod 3.

    Accepts a ProjectiveCap or a plain PointSet of representatives. The type
    invariants (nonzero vectors, no two proportional) are re-checked and their
    violation is an input error, not a failed report.
    """
    t0 = time.perf_counter()
    members: PointSet = getattr(a, "members", a)
    ranks = members.ranks
    if ranks.size and int(ranks[0]) == 0:
        raise ConstructionError("projective representatives must be nonzero")
    from .f3core import neg_ranks

    negs = neg_ranks(ranks, members.dim)
    if np.isin(ranks, negs).any():
        raise ConstructionError("projective representatives contain a proportional pair")
    coords = members.coords().astype(np.int64)
    m = len(members)
    count = 0
    for i in range(m - 2):
        for j in range(i + 1, m - 1):
            for k in range(j + 1, m):
                count += 1
                if _rank_mod3([coords[i], coords[j], coords[k]]) < 3:
                    witness = (members.point(i), members.point(j), members.point(k))
                    return _report("projective_cap", False, witness, count, t0)
    return _report("projective_cap", True, None, count, t0)
