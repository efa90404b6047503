"""Construction of the braid and mid-hyperplane arrangements.

The braid arrangement on m coordinates consists of the hyperplanes
x_i = x_j.  The mid-hyperplane arrangement adds, for every 4-tuple of
distinct coordinates, the hyperplanes x_p + x_q = x_r + x_s; the tuple
set I4 below indexes each such hyperplane exactly once.  The starred
variant adjoins x_1 = 0, which makes the arrangement essential and is
the form used for point counting over finite fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator, Literal

import numpy as np

from .errors import InvalidParameterError

Variant = Literal["braid", "mid", "midstar"]


@dataclass(frozen=True)
class Hyperplane:
    """A central hyperplane {x : coeffs . x = 0} with integer normal.

    kind is "braid" (indices (i, j), normal +1 at i, -1 at j),
    "mid" (indices (p, q, r, s) in I4, normal +1 at p and q, -1 at r and s)
    or "origin" (the hyperplane x_1 = 0).  Indices are 1-based.
    """

    coeffs: tuple[int, ...]
    kind: str
    indices: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("braid", "mid", "origin"):
            raise InvalidParameterError(f"unknown hyperplane kind {self.kind!r}")


@dataclass(frozen=True)
class Arrangement:
    """An ordered list of hyperplanes in R^m."""

    m: int
    variant: Variant
    hyperplanes: tuple[Hyperplane, ...]

    def __len__(self) -> int:
        return len(self.hyperplanes)

    def __iter__(self) -> Iterator[Hyperplane]:
        return iter(self.hyperplanes)


def i4_tuples(m: int) -> list[tuple[int, int, int, int]]:
    """Enumerate I4 = {(p,q,r,s) : 1<=p<q<=m, p<r<s<=m, all distinct}.

    The enumeration is lexicographic in (p, q, r, s), which fixes the
    hyperplane order everywhere downstream (coefficient matrices, counting
    schedules, golden tests).
    """
    out = []
    for p in range(1, m + 1):
        for q in range(p + 1, m + 1):
            for r in range(p + 1, m + 1):
                if r == q:
                    continue
                for s in range(r + 1, m + 1):
                    if s == q:
                        continue
                    out.append((p, q, r, s))
    return out


def _braid_plane(m: int, i: int, j: int) -> Hyperplane:
    c = [0] * m
    c[i - 1] = 1
    c[j - 1] = -1
    return Hyperplane(tuple(c), "braid", (i, j))


def _mid_plane(m: int, p: int, q: int, r: int, s: int) -> Hyperplane:
    c = [0] * m
    c[p - 1] = 1
    c[q - 1] = 1
    c[r - 1] = -1
    c[s - 1] = -1
    return Hyperplane(tuple(c), "mid", (p, q, r, s))


def build_arrangement(m: int, variant: Variant = "mid") -> Arrangement:
    """Build the braid / mid-hyperplane / starred arrangement on R^m.

    Hyperplane order: the origin plane first (midstar only), then braid
    planes lexicographic in (i, j), then mid planes lexicographic in
    (p, q, r, s).
    """
    if m < 3:
        raise InvalidParameterError(f"need m >= 3, got {m}")
    if variant not in ("braid", "mid", "midstar"):
        raise InvalidParameterError(f"unknown variant {variant!r}")
    planes: list[Hyperplane] = []
    if variant == "midstar":
        planes.append(Hyperplane((1,) + (0,) * (m - 1), "origin", ()))
    planes.extend(_braid_plane(m, i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1))
    if variant != "braid":
        planes.extend(_mid_plane(m, *t) for t in i4_tuples(m))
    arr = Arrangement(m, variant, tuple(planes))
    expected = {
        "braid": comb(m, 2),
        "mid": comb(m, 2) + 3 * comb(m, 4),
        "midstar": comb(m, 2) + 3 * comb(m, 4) + 1,
    }[variant]
    assert len(arr) == expected, (len(arr), expected)
    return arr


def coefficient_matrix(m: int) -> np.ndarray:
    """The m x (C(m,2)+3C(m,4)+1) coefficient matrix of the starred
    arrangement: the first column is (1,0,...,0)^T, the rest are the
    hyperplane normals in build_arrangement order."""
    arr = build_arrangement(m, "midstar")
    return np.array([h.coeffs for h in arr], dtype=np.int64).T


def prime_threshold(m: int) -> int:
    """Strict lower bound that a prime must exceed for the finite-field
    count to be guaranteed faithful: 2^(m-2) for m <= 5, 8*3^(m-5) after."""
    if m < 3:
        raise InvalidParameterError(f"need m >= 3, got {m}")
    if m <= 5:
        return 2 ** (m - 2)
    return 8 * 3 ** (m - 5)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def select_primes(m: int, count: int, override_threshold: int | None = None) -> list[int]:
    """The `count` smallest primes strictly greater than the admissibility
    threshold (or an explicit override, which callers must flag unsafe)."""
    if count < 1:
        raise InvalidParameterError(f"need count >= 1, got {count}")
    threshold = prime_threshold(m) if override_threshold is None else override_threshold
    primes: list[int] = []
    n = threshold + 1
    while len(primes) < count:
        if _is_prime(n):
            primes.append(n)
        n += 1
    return primes
