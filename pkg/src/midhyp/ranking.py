"""The ranking map of the unidimensional unfolding model.

An individual with ideal point y ranks objects x_1..x_m by distance from
y.  Sweeping y across the real line, the ranking changes by one adjacent
transposition each time y passes a midpoint (x_i + x_j)/2, so an
ascending configuration admits exactly C(m,2)+1 rankings, ordered by
inversion count.  The sequence of those rankings is the configuration's
ranking pattern, and it is determined by the ascending order of the
midpoints alone.

Rational inputs are compared exactly; floating-point inputs are accepted
but any midpoint comparison within 1e-12 of a tie is rejected as
degenerate, because chamber membership is a strict-inequality notion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterator, Sequence

from .errors import (
    DegenerateConfigError,
    InvalidParameterError,
    InvariantViolation,
    TieError,
)

FLOAT_TIE_TOL = 1e-12


def _as_point(value):
    """Coerce one coordinate: exact for Rational/str/int, float otherwise."""
    if isinstance(value, bool):
        raise InvalidParameterError("bool is not a coordinate")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return value
    raise InvalidParameterError(f"cannot interpret {value!r} as a coordinate")


@dataclass(frozen=True)
class ObjectConfig:
    """Positions of the m objects on the joint scale.

    points are either all Fraction (exact mode) or all float.  The
    constructor enforces general position: objects pairwise distinct and
    all C(m,2) midpoints pairwise distinct.
    """

    points: tuple

    def __post_init__(self):
        if len(self.points) < 3:
            raise InvalidParameterError("need at least 3 objects")
        mids = sorted(x + y for x, y in itertools.combinations(self.points, 2))
        # pairwise-distinct objects follow from distinct midpoints
        # (x_i + x_i-style sums never appear), so check objects directly too
        if len(set(self.points)) != len(self.points):
            raise DegenerateConfigError("objects are not pairwise distinct")
        tol = 0 if self.exact else 2 * FLOAT_TIE_TOL
        for a, b in zip(mids, mids[1:]):
            if b - a <= tol:
                raise DegenerateConfigError(
                    f"two midpoints coincide (sum gap {b - a!r}); "
                    "configuration is not in general position"
                )

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def exact(self) -> bool:
        return isinstance(self.points[0], Fraction)

    @property
    def ascending(self) -> bool:
        return all(a < b for a, b in zip(self.points, self.points[1:]))

    def midpoint(self, i: int, j: int):
        """Midpoint of objects i and j (1-based)."""
        half = Fraction(1, 2) if self.exact else 0.5
        return (self.points[i - 1] + self.points[j - 1]) * half


def object_config(points: Sequence) -> ObjectConfig:
    """Build an ObjectConfig, exact when every coordinate is exact.

    int/Fraction/decimal-string coordinates give exact rational arithmetic;
    any float coordinate switches the whole configuration to float mode.
    """
    coerced = [_as_point(p) for p in points]
    if any(isinstance(p, float) for p in coerced):
        coerced = [float(p) for p in coerced]
    return ObjectConfig(tuple(coerced))


@dataclass(frozen=True)
class Ranking:
    """A full ranking of the m objects, best to worst, as a permutation
    of 1..m in one-line notation."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise InvalidParameterError(f"{self.perm} is not a permutation of 1..m")

    def __iter__(self) -> Iterator[int]:
        return iter(self.perm)

    def __len__(self) -> int:
        return len(self.perm)

    def __str__(self) -> str:
        if len(self.perm) < 10:
            return "(" + "".join(map(str, self.perm)) + ")"
        return "(" + " ".join(map(str, self.perm)) + ")"


@dataclass(frozen=True)
class MidpointOrder:
    """The C(m,2) index pairs (i, j), i < j, sorted by midpoint value."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        m = self.m
        if sorted(self.pairs) != [(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)]:
            raise InvalidParameterError("pairs must contain each (i, j), i < j, exactly once")

    @property
    def m(self) -> int:
        # |pairs| = C(m, 2)
        n = len(self.pairs)
        m = round((1 + (1 + 8 * n) ** 0.5) / 2)
        if comb(m, 2) != n:
            raise InvalidParameterError(f"{n} pairs is not a triangular number")
        return m

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def is_monotone(self) -> bool:
        """Rank of (i, j) strictly increasing in i for fixed j and in j for
        fixed i; every midpoint order of an ascending configuration has
        this property."""
        rank = {pair: k for k, pair in enumerate(self.pairs)}
        for (i, j), r in rank.items():
            if (i + 1, j) in rank and rank[(i + 1, j)] <= r:
                return False
            if (i, j + 1) in rank and rank[(i, j + 1)] <= r:
                return False
        return True

    def reversed_relabeled(self) -> "MidpointOrder":
        """The midpoint order of the mirrored configuration: reverse the
        list and send each pair (i, j) to (m+1-j, m+1-i)."""
        m = self.m
        return MidpointOrder(tuple((m + 1 - j, m + 1 - i) for (i, j) in reversed(self.pairs)))


@dataclass(frozen=True)
class RankingPattern:
    """The C(m,2)+1 rankings admitted by a configuration, in order of the
    ideal point from -inf to +inf."""

    rankings: tuple[Ranking, ...]

    def __iter__(self) -> Iterator[Ranking]:
        return iter(self.rankings)

    def __len__(self) -> int:
        return len(self.rankings)

    def __getitem__(self, k: int) -> Ranking:
        return self.rankings[k]


def rank_at(config: ObjectConfig, y) -> Ranking:
    """Rank objects by increasing distance from the ideal point y.

    Raises TieError when y sits exactly on a midpoint (two distances tie);
    the error carries the offending pair.
    """
    y = _as_point(y)
    pts = config.points
    if isinstance(y, float) or not config.exact:
        y = float(y)
        pts = tuple(float(p) for p in pts)
        tol = FLOAT_TIE_TOL
    else:
        tol = 0
    dists = sorted((abs(y - p), k + 1) for k, p in enumerate(pts))
    for (da, ia), (db, ib) in zip(dists, dists[1:]):
        if db - da <= tol:
            pair = (min(ia, ib), max(ia, ib))
            raise TieError(
                f"ideal point {y} ties objects {pair[0]} and {pair[1]} "
                f"(it coincides with their midpoint)",
                pair=pair,
            )
    return Ranking(tuple(k for _, k in dists))


def midpoint_order(config: ObjectConfig) -> MidpointOrder:
    """Sort the index pairs by midpoint value, ascending.

    Exact comparison for rational configs; float configs raise
    DegenerateConfigError on near-ties (the ObjectConfig constructor
    already guarantees separation, so this cannot fire for valid input).
    """
    m = config.m
    keyed = sorted(
        ((config.points[i - 1] + config.points[j - 1], (i, j)) for i in range(1, m + 1) for j in range(i + 1, m + 1)),
    )
    tol = 0 if config.exact else 2 * FLOAT_TIE_TOL
    for (a, pa), (b, pb) in zip(keyed, keyed[1:]):
        if b - a <= tol:
            raise DegenerateConfigError(f"midpoints of {pa} and {pb} coincide")
    return MidpointOrder(tuple(pair for _, pair in keyed))


def ranking_pattern(config: ObjectConfig, verify: bool = False) -> RankingPattern:
    """All C(m,2)+1 rankings of an ascending configuration.

    Construction walks the adjacent-transposition sequence: start from the
    identity ranking and, for each midpoint in ascending order, swap the
    two objects whose midpoint is being crossed.  The two must be adjacent
    in the current ranking at that moment; a violation indicates a bug.

    verify=True additionally samples an ideal point strictly between each
    pair of consecutive midpoints and checks rank_at agrees with the walk.
    Non-ascending configurations are rejected; use normalize_config to
    sort and obtain the relabeling permutation.
    """
    if not config.ascending:
        raise InvalidParameterError(
            "ranking_pattern requires x_1 < ... < x_m; "
            "normalize_config(points) sorts and returns the relabeling"
        )
    order = midpoint_order(config)
    current = list(range(1, config.m + 1))
    rankings = [Ranking(tuple(current))]
    for (i, j) in order:
        pos_i = current.index(i)
        pos_j = current.index(j)
        if abs(pos_i - pos_j) != 1:
            raise InvariantViolation(
                f"objects {i} and {j} are not adjacent when their midpoint is crossed"
            )
        current[pos_i], current[pos_j] = current[pos_j], current[pos_i]
        rankings.append(Ranking(tuple(current)))
    pattern = RankingPattern(tuple(rankings))
    if verify:
        _verify_pattern_by_sampling(config, order, pattern)
    return pattern


def _verify_pattern_by_sampling(config, order, pattern):
    half = Fraction(1, 2) if config.exact else 0.5
    mids = [(config.points[i - 1] + config.points[j - 1]) * half for (i, j) in order]
    probes = [mids[0] - 1]
    probes += [(a + b) * half for a, b in zip(mids, mids[1:])]
    probes += [mids[-1] + 1]
    for probe, expected in zip(probes, pattern):
        got = rank_at(config, probe)
        if got != expected:
            raise InvariantViolation(
                f"transposition walk gives {expected} but rank_at({probe}) gives {got}"
            )


def apply_sigma(sigma: Sequence[int], ranking: Ranking) -> Ranking:
    """Relabel a ranking by the permutation sigma: entry i becomes sigma(i).

    sigma is given in one-line notation, sigma[k-1] = sigma(k).  Relabeling
    objects of the configuration by sigma relabels every ranking the same
    way: the ranking map commutes with the symmetric-group action.
    """
    if sorted(sigma) != list(range(1, len(ranking) + 1)):
        raise InvalidParameterError("sigma must be a permutation of 1..m")
    return Ranking(tuple(sigma[i - 1] for i in ranking))


def permute_config(sigma: Sequence[int], config: ObjectConfig) -> ObjectConfig:
    """The symmetric-group action on configurations: object sigma(k) of the
    result sits where object k of the input sat, i.e. result[k] =
    input[sigma^{-1}(k)]."""
    if sorted(sigma) != list(range(1, config.m + 1)):
        raise InvalidParameterError("sigma must be a permutation of 1..m")
    inv = {sigma[k]: k + 1 for k in range(len(sigma))}
    return ObjectConfig(tuple(config.points[inv[k] - 1] for k in range(1, config.m + 1)))


def normalize_config(points: Sequence) -> tuple[ObjectConfig, tuple[int, ...]]:
    """Sort points ascending and return (sorted config, sigma) where sigma
    relabels rankings of the sorted config into rankings of the original:
    rank_at(original, y) == apply_sigma(sigma, rank_at(sorted, y))."""
    config = points if isinstance(points, ObjectConfig) else object_config(points)
    order = sorted(range(config.m), key=lambda k: config.points[k])
    sigma = tuple(k + 1 for k in order)
    sorted_cfg = ObjectConfig(tuple(config.points[k] for k in order))
    return sorted_cfg, sigma


def mirror_config(config: ObjectConfig) -> ObjectConfig:
    """Negate and reverse: object i of the result is -x_{m+1-i}.  Keeps an
    ascending configuration ascending and reverses its midpoint order."""
    return ObjectConfig(tuple(-p for p in reversed(config.points)))


def inversions(ranking: Ranking) -> int:
    """Number of inverted pairs; consecutive rankings of a pattern have
    inversion counts 0, 1, ..., C(m,2)."""
    perm = ranking.perm
    return sum(
        1
        for a in range(len(perm))
        for b in range(a + 1, len(perm))
        if perm[a] > perm[b]
    )


def majority_ranking(config: ObjectConfig, ideals: Sequence) -> Ranking:
    """Collective ranking of an odd panel by pairwise simple majority.

    Under unfolding-model preferences the pairwise majority relation is a
    total order (it equals the median individual's ranking), so an
    intransitive outcome is an internal invariant violation, not a user
    error.
    """
    if len(ideals) % 2 == 0:
        raise InvalidParameterError("majority rule needs an odd number of individuals")
    panel = [rank_at(config, y) for y in ideals]
    m = config.m
    wins = [[0] * (m + 1) for _ in range(m + 1)]
    for ranking in panel:
        pos = {obj: k for k, obj in enumerate(ranking)}
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                if pos[i] < pos[j]:
                    wins[i][j] += 1
                else:
                    wins[j][i] += 1
    # strict preferences only: ties are impossible with an odd panel
    beats = {
        (i, j)
        for i in range(1, m + 1)
        for j in range(1, m + 1)
        if i != j and wins[i][j] > len(panel) / 2
    }
    order = sorted(range(1, m + 1), key=lambda i: -sum((i, j) in beats for j in range(1, m + 1)))
    for a in range(m):
        for b in range(a + 1, m):
            if (order[a], order[b]) not in beats:
                raise InvariantViolation("pairwise majority relation is not a total order")
    return Ranking(tuple(order))
