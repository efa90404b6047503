"""Independent small-scale verifiers for the counting pipeline.

Three routes that share no code with the finite-field counter:

* the intersection lattice of the arrangement over the rationals, with
  the Mobius recursion, giving the characteristic polynomial directly;
* random sampling of ascending configurations, collecting distinct
  midpoint orders until saturation, giving the ranking-pattern count;
* the monotone-labeling count (linear extensions of the midpoint poset),
  a combinatorial upper bound for the number of midpoint orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arrangement import build_arrangement
from .charpoly import CharPoly
from .errors import GuardError, InvariantViolation
from .ranking import MidpointOrder

LATTICE_GUARD_M = 5
THRALL_GUARD_M = 7
SAMPLE_MIN_GAP = 1e-9


def _rank_int(rows: list[tuple[int, ...]]) -> int:
    """Rank of an integer matrix, exact (fraction-free Gaussian elimination)."""
    mat = [list(r) for r in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for r in range(rank + 1, len(mat)):
            if mat[r][col]:
                a, b = mat[rank][col], mat[r][col]
                mat[r] = [a * y - b * x for x, y in zip(mat[rank], mat[r])]
        rank += 1
        if rank == len(mat):
            break
    return rank


@dataclass(frozen=True)
class LatticeEdge:
    """An intersection subspace, canonicalized by the set of hyperplane
    indices that contain it; dim is its dimension in R^m."""

    planes: frozenset[int]
    dim: int
    mobius: int


@dataclass(frozen=True)
class IntersectionLattice:
    m: int
    edges: tuple[LatticeEdge, ...]

    def charpoly_coeffs(self) -> tuple[int, ...]:
        coeffs = [0] * (self.m + 1)
        for e in self.edges:
            coeffs[self.m - e.dim] += e.mobius
        return tuple(coeffs)


def intersection_lattice(m: int) -> IntersectionLattice:
    """Close the hyperplane set under intersection and run the Mobius
    recursion mu(V) = 1, sum_{Y <= X} mu(Y) = 0.

    Subspace equality is set equality of the containing hyperplanes, and
    the partial order (reverse inclusion of subspaces) is subset order on
    those sets, so no basis comparisons are needed.  Exponential in m;
    guarded to m <= 5 where the lattice has a few hundred edges.
    """
    if m > LATTICE_GUARD_M:
        raise GuardError(f"lattice construction is guarded to m <= {LATTICE_GUARD_M}")
    normals = [h.coeffs for h in build_arrangement(m, "mid")]
    n = len(normals)

    def closure(planes: frozenset[int]) -> tuple[frozenset[int], int]:
        rows = [normals[i] for i in planes]
        r = _rank_int(rows)
        full = frozenset(
            i for i in range(n)
            if i in planes or _rank_int(rows + [normals[i]]) == r
        )
        return full, m - r

    edges: dict[frozenset[int], int] = {frozenset(): m}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for planes in frontier:
            for i in range(n):
                if i in planes:
                    continue
                key, dim = closure(planes | {i})
                if key not in edges:
                    edges[key] = dim
                    nxt.append(key)
        frontier = nxt
    # Mobius recursion over subset order, smallest supports first
    by_size = sorted(edges, key=len)
    mobius: dict[frozenset[int], int] = {}
    for key in by_size:
        if not key:
            mobius[key] = 1
        else:
            mobius[key] = -sum(mu for other, mu in mobius.items() if other < key)
    return IntersectionLattice(
        m, tuple(LatticeEdge(k, edges[k], mobius[k]) for k in by_size)
    )


def lattice_charpoly(m: int) -> CharPoly:
    """Characteristic polynomial straight from the intersection lattice;
    must agree coefficient-for-coefficient with the interpolated one."""
    return CharPoly(m, intersection_lattice(m).charpoly_coeffs())


def _orders_from_draws(draws: np.ndarray) -> set[MidpointOrder]:
    """Distinct midpoint orders of already-sorted sample rows."""
    m = draws.shape[1]
    pairs = [(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)]
    ii = np.array([p[0] - 1 for p in pairs])
    jj = np.array([p[1] - 1 for p in pairs])
    sums = draws[:, ii] + draws[:, jj]
    gaps = np.diff(np.sort(sums, axis=1), axis=1)
    # sums are twice the midpoints, hence the factor on the gap threshold
    ok = gaps.min(axis=1) >= 2 * SAMPLE_MIN_GAP  # reject near-degenerate draws
    ranks = np.argsort(sums[ok], axis=1)
    return {MidpointOrder(tuple(pairs[k] for k in row)) for row in ranks}


def sample_patterns(m: int, samples: int, seed: int) -> set[MidpointOrder]:
    """Distinct midpoint orders of `samples` random ascending
    configurations (sorted standard normals); deterministic under seed."""
    rng = np.random.default_rng(seed)
    found: set[MidpointOrder] = set()
    block = 4096
    remaining = samples
    while remaining > 0:
        k = min(block, remaining)
        draws = np.sort(rng.standard_normal((k, m)), axis=1)
        found |= _orders_from_draws(draws)
        remaining -= k
    return found


def saturate_patterns(m: int, seed: int, known_r: int | None = None,
                      max_draws: int = 5_000_000) -> set[MidpointOrder]:
    """Sample until saturation: stop once no new midpoint order appears in
    the last 10x-current-count draws (and, when known_r is given, the
    count matches it).  Raises on exceeding max_draws without saturating.
    """
    rng = np.random.default_rng(seed)
    found: set[MidpointOrder] = set()
    drawn = 0
    since_new = 0
    block = 4096
    while drawn < max_draws:
        draws = np.sort(rng.standard_normal((block, m)), axis=1)
        before = len(found)
        found |= _orders_from_draws(draws)
        drawn += block
        since_new = 0 if len(found) > before else since_new + block
        saturated = since_new >= 10 * max(len(found), 1)
        if saturated and (known_r is None or len(found) == known_r):
            return found
        if known_r is not None and len(found) > known_r:
            raise InvariantViolation(
                f"found {len(found)} midpoint orders for m={m}, more than r={known_r}"
            )
    raise InvariantViolation(
        f"no saturation after {max_draws} draws (found {len(found)} orders)"
    )


@lru_cache(maxsize=None)
def _extensions(heights: tuple[int, ...]) -> int:
    """Linear extensions of the downset of the midpoint poset described by
    heights: row i (1-based) of pairs (i, j) contains j = i+1 .. heights[i-1],
    with heights[i-1] = i meaning the row is empty.  Downsets are exactly
    the weakly decreasing height vectors, so memoization is on few states.
    """
    if all(h == i + 1 for i, h in enumerate(heights)):
        return 1
    total = 0
    for i, h in enumerate(heights):
        if h == i + 1:
            continue  # empty row (0-based i is 1-based row i+1)
        # (row, h) is maximal unless the pair one row down, (row+1, h),
        # exists (h >= i+3) and is still present (heights[i+1] >= h)
        if i + 1 < len(heights) and h >= i + 3 and heights[i + 1] >= h:
            continue
        total += _extensions(heights[:i] + (h - 1,) + heights[i + 1 :])
    return total


def thrall_count(m: int) -> int:
    """Number of monotone labelings of the C(m,2) pairs: bijective labels
    increasing in each index.  Counts linear extensions of the pair poset
    by memoized deletion of maximal elements; an upper bound for the
    number of midpoint orders, tight for m <= 4."""
    if m > THRALL_GUARD_M:
        raise GuardError(f"thrall_count is guarded to m <= {THRALL_GUARD_M}")
    if m < 3:
        raise GuardError(f"need m >= 3, got {m}")
    full = tuple(m for _ in range(1, m))
    return _extensions(full)
