"""The three independent verifiers against the counting pipeline."""

from functools import lru_cache

import pytest

from midhyp import known_values as kv
from midhyp.errors import GuardError, InvariantViolation
from midhyp.oracle import (
    intersection_lattice,
    lattice_charpoly,
    sample_patterns,
    saturate_patterns,
    thrall_count,
)


@pytest.mark.parametrize("m", (3, 4, 5))
def test_lattice_charpoly_matches_published(m):
    assert lattice_charpoly(m).coeffs == kv.chi_coefficients(m)


def test_lattice_guard():
    with pytest.raises(GuardError):
        lattice_charpoly(6)


def test_lattice_mobius_recursion_holds():
    lat = intersection_lattice(4)
    edges = {e.planes: e for e in lat.edges}
    assert edges[frozenset()].mobius == 1
    for e in lat.edges:
        if e.planes:
            below = sum(o.mobius for o in lat.edges if o.planes <= e.planes)
            assert below == 0
    # the braid-only triple intersections exist and the minimal element is V
    dims = sorted({e.dim for e in lat.edges}, reverse=True)
    assert dims[0] == 4 and dims[-1] == 1  # every hyperplane contains span{1}


class TestSampling:
    def test_deterministic_under_seed(self):
        a = sample_patterns(4, 2000, seed=9)
        b = sample_patterns(4, 2000, seed=9)
        assert a == b

    def test_monotone_and_bounded(self):
        found = sample_patterns(5, 3000, seed=5)
        assert all(order.is_monotone() for order in found)
        assert len(found) <= kv.RANKING_PATTERNS[5]

    def test_nondecreasing_in_samples(self):
        small = len(sample_patterns(5, 300, seed=3))
        large = len(sample_patterns(5, 6000, seed=3))
        assert small <= large

    @pytest.mark.parametrize("m,r", [(4, 2), (5, 12), (6, 168)])
    def test_saturation_finds_exactly_r(self, m, r):
        assert len(saturate_patterns(m, seed=7, known_r=r)) == r

    def test_saturation_without_target(self):
        assert len(saturate_patterns(4, seed=1)) == 2


def brute_force_extensions(m):
    """Bitmask DP over arbitrary downsets; independent of the height-vector
    encoding used by thrall_count."""
    pairs = [(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)]
    n = len(pairs)
    below = [0] * n
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            if (k, l) != (i, j) and k <= i and l <= j:
                below[a] |= 1 << b

    @lru_cache(maxsize=None)
    def count(mask):
        if mask == 0:
            return 1
        total = 0
        for a in range(n):
            if not mask >> a & 1:
                continue
            if any(mask >> b & 1 and below[b] >> a & 1 for b in range(n)):
                continue  # not maximal
            total += count(mask & ~(1 << a))
        return total

    return count((1 << n) - 1)


class TestThrall:
    def test_small_values(self):
        assert thrall_count(3) == 1
        assert thrall_count(4) == 2
        assert thrall_count(5) >= 12

    @pytest.mark.parametrize("m", (3, 4, 5))
    def test_matches_brute_force(self, m):
        assert thrall_count(m) == brute_force_extensions(m)

    def test_upper_bounds_r(self):
        for m, r in kv.RANKING_PATTERNS.items():
            assert thrall_count(m) >= r
        assert thrall_count(3) == kv.RANKING_PATTERNS[3]
        assert thrall_count(4) == kv.RANKING_PATTERNS[4]

    def test_guard(self):
        with pytest.raises(GuardError):
            thrall_count(8)
        with pytest.raises(GuardError):
            thrall_count(2)
