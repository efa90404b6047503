"""Point counting for the mid-hyperplane arrangement over Z_q.

Counts tuples (0, 1, x_3, ..., x_m) in (Z_q)^m avoiding every hyperplane:
x_i != x_j for all i < j and x_p + x_q != x_r + x_s for every I4 tuple.
Fixing the first two coordinates to 0 and 1 is valid because translation
and scaling act freely on the solution set, contributing the factor
q(q-1) that the characteristic-polynomial module restores.

The counter is a depth-first search over x_3..x_m.  Every hyperplane is
checked exactly once, at the depth of its maximal coordinate index, where
it forbids exactly one residue; the forbidden residues at each depth form
a bitmap of q bits, and the final depth is resolved in bulk by popcount
instead of iteration.  Subtrees rooted at the q-2 admissible values of
x_3 are independent, which gives the parallel partitioning and the
checkpoint granularity.  Results are exact integer sums, identical for
any thread count.
"""

from __future__ import annotations

import hashlib
import os
import time
from dataclasses import dataclass, field

import numba
import numpy as np
from numba import njit, prange

from .arrangement import _is_prime, i4_tuples, prime_threshold
from .errors import (
    CheckpointError,
    GuardError,
    InvalidParameterError,
    UnsafePrimeError,
)

NAIVE_GUARD = 10**8


def build_schedule(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-depth mid-hyperplane constraint schedule.

    Returns (mid_idx, mid_off): mid_idx[t] = (a, b, c) are 0-based
    coordinate positions meaning "x at the scheduled depth must differ
    from x[a] + x[b] - x[c] (mod q)"; constraints for depth d (0-based
    coordinate position) occupy mid_idx[mid_off[d]:mid_off[d+1]].  Braid
    constraints need no table: at depth d every already-assigned value is
    forbidden.  Each hyperplane appears exactly once, at the depth of its
    maximal coordinate index.
    """
    per_depth: list[list[tuple[int, int, int]]] = [[] for _ in range(m)]
    for (p, q_, r, s) in i4_tuples(m):
        if q_ > s:
            # x_q = x_r + x_s - x_p is the excluded residue
            per_depth[q_ - 1].append((r - 1, s - 1, p - 1))
        else:
            per_depth[s - 1].append((p - 1, q_ - 1, r - 1))
    flat: list[tuple[int, int, int]] = []
    off = [0]
    for d in range(m):
        flat.extend(per_depth[d])
        off.append(len(flat))
    mid_idx = np.array(flat, dtype=np.int64).reshape(-1, 3)
    mid_off = np.array(off, dtype=np.int64)
    return mid_idx, mid_off


def schedule_hash(m: int) -> str:
    """Stable fingerprint of the constraint schedule; checkpoints written
    under a different schedule must not be resumed."""
    mid_idx, mid_off = build_schedule(m)
    payload = f"m={m};idx={mid_idx.tolist()};off={mid_off.tolist()}"
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class CountJob:
    """One counting task: arrangement size m at prime q."""

    m: int
    q: int
    threads: int | None = None
    checkpoint_path: str | None = None
    override_threshold: int | None = None
    schedule: tuple[np.ndarray, np.ndarray] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.m < 3:
            raise InvalidParameterError(f"need m >= 3, got {self.m}")
        if not _is_prime(self.q):
            raise InvalidParameterError(f"q = {self.q} is not prime")
        if self.threads is not None and self.threads < 1:
            raise InvalidParameterError("threads must be >= 1")
        threshold = prime_threshold(self.m)
        if not self.safe:
            if self.override_threshold is None:
                raise UnsafePrimeError(
                    f"q = {self.q} does not exceed the admissibility threshold "
                    f"{threshold} for m = {self.m}; pass override_threshold to "
                    "count anyway (result will be flagged unsafe)"
                )
            if self.q <= self.override_threshold:
                raise UnsafePrimeError(
                    f"q = {self.q} does not exceed even the override threshold "
                    f"{self.override_threshold}"
                )
        object.__setattr__(self, "schedule", build_schedule(self.m))

    @property
    def safe(self) -> bool:
        """True when q is large enough that the modular arrangement is
        guaranteed to have the same intersection lattice as the real one."""
        return self.q > prime_threshold(self.m)


@dataclass(frozen=True)
class CountResult:
    m: int
    q: int
    count: int
    elapsed: float
    nodes_visited: int
    safe: bool

    def __post_init__(self):
        assert 0 <= self.count <= self.q ** (self.m - 2)


@njit(inline="always")
def _popcount(v):
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((v * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, nogil=True)
def _subtree_count(m, q, x3, mid_idx, mid_off, limit):
    """Count completions of (0, 1, x3, *, ..., *); returns (count, nodes).

    Iterative DFS.  masks[pos] is the forbidden-residue bitmap for the
    coordinate at `pos`; interior positions iterate allowed residues by
    scanning set bits of the complement, the leaf position is counted by
    popcount without iterating.
    """
    if m == 3:
        return 1, 1
    words = limit.shape[0]
    x = np.empty(m, np.int64)
    x[0] = 0
    x[1] = 1
    x[2] = x3
    masks = np.zeros((m, words), np.uint64)
    cur_word = np.empty(m, np.int64)
    cur_bits = np.empty(m, np.uint64)
    one = np.uint64(1)
    count = 0
    nodes = 0
    pos = 3
    entering = True
    while pos >= 3:
        if entering:
            nodes += 1
            for w in range(words):
                masks[pos, w] = np.uint64(0)
            for t in range(pos):
                v = x[t]
                masks[pos, v >> 6] |= one << np.uint64(v & 63)
            for t in range(mid_off[pos], mid_off[pos + 1]):
                v = (x[mid_idx[t, 0]] + x[mid_idx[t, 1]] - x[mid_idx[t, 2]]) % q
                masks[pos, v >> 6] |= one << np.uint64(v & 63)
            if pos == m - 1:
                allowed = 0
                for w in range(words):
                    allowed += _popcount(~masks[pos, w] & limit[w])
                count += allowed
                pos -= 1
                entering = False
                continue
            cur_word[pos] = 0
            cur_bits[pos] = ~masks[pos, 0] & limit[0]
        # advance to the next allowed value at this position
        value = -1
        while True:
            b = cur_bits[pos]
            if b != np.uint64(0):
                low = b & (np.uint64(0) - b)
                value = (cur_word[pos] << 6) + _popcount(low - one)
                cur_bits[pos] = b ^ low
                break
            cur_word[pos] += 1
            if cur_word[pos] >= words:
                break
            cur_bits[pos] = ~masks[pos, cur_word[pos]] & limit[cur_word[pos]]
        if value < 0:
            pos -= 1
            entering = False
            continue
        x[pos] = value
        pos += 1
        entering = True
    return count, nodes


@njit(cache=True, parallel=True)
def _count_all(m, q, mid_idx, mid_off, limit):
    total = 0
    nodes = 0
    for v in prange(2, q):  # x3 != 0, 1
        c, n = _subtree_count(m, q, v, mid_idx, mid_off, limit)
        total += c
        nodes += n
    return total, nodes


@njit(cache=True, parallel=True)
def _count_partitions(m, q, x3_values, mid_idx, mid_off, limit):
    counts = np.zeros(x3_values.shape[0], np.int64)
    nodes = np.zeros(x3_values.shape[0], np.int64)
    for k in prange(x3_values.shape[0]):
        c, n = _subtree_count(m, q, x3_values[k], mid_idx, mid_off, limit)
        counts[k] = c
        nodes[k] = n
    return counts, nodes


def _range_limit(q: int) -> np.ndarray:
    """Bitmap with the low q bits set, as uint64 words."""
    words = (q + 63) // 64
    limit = np.full(words, np.uint64(0xFFFFFFFFFFFFFFFF))
    if q % 64:
        limit[-1] = np.uint64((1 << (q % 64)) - 1)
    return limit


class _threads:
    """Temporarily set the numba thread count."""

    def __init__(self, n: int | None):
        self.n = min(n, numba.config.NUMBA_NUM_THREADS) if n else None

    def __enter__(self):
        if self.n is not None:
            self.saved = numba.get_num_threads()
            numba.set_num_threads(self.n)

    def __exit__(self, *exc):
        if self.n is not None:
            numba.set_num_threads(self.saved)


def count_points(job: CountJob) -> CountResult:
    """|{(0,1,x_3,...,x_m) avoiding every hyperplane mod q}|, exactly."""
    mid_idx, mid_off = job.schedule
    limit = _range_limit(job.q)
    start = time.perf_counter()
    with _threads(job.threads):
        count, nodes = _count_all(job.m, job.q, mid_idx, mid_off, limit)
    elapsed = time.perf_counter() - start
    return CountResult(job.m, job.q, int(count), elapsed, int(nodes), job.safe)


def count_m1(m: int, q: int, threads: int | None = None,
             override_threshold: int | None = None) -> CountResult:
    """Convenience wrapper building the job and counting."""
    return count_points(CountJob(m, q, threads=threads, override_threshold=override_threshold))


def count_points_naive(m: int, q: int) -> int:
    """Unpruned oracle: enumerate all q^(m-2) tuples and test every
    hyperplane on every point by a plain dot product.  Shares nothing
    with the fast counter except the arrangement definition."""
    from .arrangement import build_arrangement

    if m < 3:
        raise InvalidParameterError(f"need m >= 3, got {m}")
    if not _is_prime(q):
        raise InvalidParameterError(f"q = {q} is not prime")
    if q ** (m - 2) > NAIVE_GUARD:
        raise GuardError(
            f"q^(m-2) = {q ** (m - 2)} exceeds the naive-enumeration guard {NAIVE_GUARD}"
        )
    planes = [h.coeffs for h in build_arrangement(m, "mid")]
    count = 0
    import itertools

    for tail in itertools.product(range(q), repeat=m - 2):
        x = (0, 1) + tail
        for coeffs in planes:
            if sum(c * v for c, v in zip(coeffs, x)) % q == 0:
                break
        else:
            count += 1
    return count


_CHECKPOINT_MAGIC = "# midhyp-checkpoint"


def _read_checkpoint(path: str, job: CountJob) -> dict[int, int]:
    done: dict[int, int] = {}
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        expected = f"{_CHECKPOINT_MAGIC} m={job.m} q={job.q} schedule={schedule_hash(job.m)}"
        if header != expected:
            raise CheckpointError(
                f"checkpoint header mismatch in {path!r}:\n  found    {header!r}\n"
                f"  expected {expected!r}"
            )
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise CheckpointError(f"{path}:{lineno}: expected 3 tab-separated fields")
            try:
                x3, subtotal, flag = int(parts[0]), int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise CheckpointError(f"{path}:{lineno}: non-integer field") from exc
            if flag not in (0, 1):
                raise CheckpointError(f"{path}:{lineno}: done-flag must be 0 or 1")
            if not 2 <= x3 < job.q:
                raise CheckpointError(f"{path}:{lineno}: x3 = {x3} out of range")
            if flag == 0:
                continue  # in-progress marker; recount this partition
            if x3 in done and done[x3] != subtotal:
                raise CheckpointError(f"{path}:{lineno}: conflicting subtotals for x3 = {x3}")
            done[x3] = subtotal
    return done


def checkpointed_count(job: CountJob) -> CountResult:
    """count_points with resumable persistence, partitioned by x_3.

    One line is appended per finished partition; a matching header
    (including the schedule hash) is required to resume.  Corrupt or
    mismatched files raise CheckpointError rather than recounting.
    """
    path = job.checkpoint_path
    if not path:
        raise InvalidParameterError("checkpointed_count needs job.checkpoint_path")
    start = time.perf_counter()
    if os.path.exists(path):
        done = _read_checkpoint(path, job)
        fh = open(path, "a")
    else:
        done = {}
        fh = open(path, "w")
        fh.write(f"{_CHECKPOINT_MAGIC} m={job.m} q={job.q} schedule={schedule_hash(job.m)}\n")
        fh.flush()
    nodes = 0
    try:
        pending = np.array([v for v in range(2, job.q) if v not in done], dtype=np.int64)
        mid_idx, mid_off = job.schedule
        limit = _range_limit(job.q)
        chunk = max(4 * (job.threads or os.cpu_count() or 1), 8)
        with _threads(job.threads):
            for k in range(0, pending.size, chunk):
                xs = pending[k:k + chunk]
                counts, node_counts = _count_partitions(job.m, job.q, xs, mid_idx, mid_off, limit)
                for x3, c in zip(xs.tolist(), counts.tolist()):
                    done[x3] = c
                    fh.write(f"{x3}\t{c}\t1\n")
                fh.flush()
                nodes += int(node_counts.sum())
    finally:
        fh.close()
    elapsed = time.perf_counter() - start
    return CountResult(job.m, job.q, sum(done.values()), elapsed, nodes, job.safe)
