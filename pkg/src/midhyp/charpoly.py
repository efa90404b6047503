"""Characteristic polynomials of mid-hyperplane arrangements.

chi(m, t) is divisible by t(t-1) and chi(m, t)/(t(t-1)) is monic of
degree m-2, so m-2 point counts at distinct admissible primes determine
it.  Interpolation is exact (Fractions throughout) and any non-integer
coefficient is reported as an inconsistency rather than rounded away:
it is the signature of an inadmissible prime.  Evaluation at -1 gives
the chamber count and, after division by m!, the number of ranking
patterns of an ascending configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import (
    InconsistentCountsError,
    InvalidParameterError,
    InvariantViolation,
    UnderdeterminedError,
)


def _eval_int_poly(coeffs, t):
    """Horner evaluation; coeffs are highest power first."""
    acc = 0
    for c in coeffs:
        acc = acc * t + c
    return acc


@dataclass(frozen=True)
class CharPoly:
    """chi(m, t) = sum_k coeffs[k] t^(m-k), exact integer coefficients.

    provenance lists the (q, count) pairs the polynomial was interpolated
    from (empty when injected from the published table).  The constructor
    enforces the structural facts: monic, zero constant term, linear
    coefficient -(number of hyperplanes), chi(0) = chi(1) = 0, and
    chi(q) = q(q-1) count for every provenance pair.
    """

    m: int
    coeffs: tuple[int, ...]
    provenance: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        m, c = self.m, self.coeffs
        if len(c) != m + 1:
            raise InvalidParameterError(f"need {m + 1} coefficients, got {len(c)}")
        if any(not isinstance(v, int) for v in c):
            raise InvalidParameterError("coefficients must be exact integers")
        if c[0] != 1:
            raise InvariantViolation("chi is not monic")
        if c[m] != 0:
            raise InvariantViolation("chi(0) != 0")
        n_planes = comb(m, 2) + 3 * comb(m, 4)
        if c[1] != -n_planes:
            raise InvariantViolation(
                f"linear coefficient {c[1]} != -(C(m,2)+3C(m,4)) = {-n_planes}"
            )
        if self(1) != 0:
            raise InvariantViolation("chi(1) != 0")
        for q, count in self.provenance:
            if self(q) != q * (q - 1) * count:
                raise InvariantViolation(f"chi({q}) != {q}*{q - 1}*{count}")

    def __call__(self, t):
        return _eval_int_poly(self.coeffs, t)

    def reduced(self) -> tuple[int, ...]:
        """Coefficients of chi(t)/(t(t-1)), the monic degree m-2 part."""
        # divide by t (drop constant 0), then synthetic-divide by (t-1)
        c = list(self.coeffs[:-1])
        out = []
        acc = 0
        for v in c:
            acc += v
            out.append(acc)
        if out.pop() != 0:
            raise InvariantViolation("chi not divisible by t-1")
        return tuple(out)


@dataclass(frozen=True)
class RankingCount:
    """Chamber count of the arrangement and ranking-pattern count r of an
    ascending configuration; chambers = r * m!."""

    m: int
    chambers: int
    r: int

    def __post_init__(self):
        if self.chambers != self.r * factorial(self.m):
            raise InvariantViolation("chambers != r * m!")


def interpolate_charpoly(m: int, counts) -> CharPoly:
    """Recover chi from point counts at distinct primes.

    counts is an iterable of (q, count).  Exactly m-2 pairs determine the
    monic degree m-2 polynomial p with p(q_i) = count_i via Newton divided
    differences over the rationals; chi = t(t-1) p(t).  Extra pairs are
    consistency checks.  Non-integer coefficients or a failed check raise
    InconsistentCountsError: some prime was too small.
    """
    items = [(int(q), int(c)) for q, c in counts]
    if len({q for q, _ in items}) != len(items):
        raise InvalidParameterError("duplicate primes in counts")
    if len(items) < m - 2:
        raise UnderdeterminedError(
            f"need at least m-2 = {m - 2} point counts, got {len(items)}"
        )
    pairs = sorted(items)
    base, extra = pairs[: m - 2], pairs[m - 2 :]
    xs = [Fraction(q) for q, _ in base]
    # p(t) = t^(m-2) + r(t) with deg r <= m-3; interpolate r exactly
    ys = [Fraction(count) - Fraction(q) ** (m - 2) for q, count in base]
    # Newton divided differences: dd[k] becomes the k-th leading coefficient
    dd = list(ys)
    for level in range(1, len(xs)):
        for k in range(len(xs) - 1, level - 1, -1):
            dd[k] = (dd[k] - dd[k - 1]) / (xs[k] - xs[k - level])
    # expand r(t) = dd[0] + dd[1](t-x_0) + ... to dense descending coefficients
    r_coeffs = [dd[-1]]
    for k in reversed(range(len(xs) - 1)):
        shifted = r_coeffs + [Fraction(0)]
        scaled = [Fraction(0)] + [xs[k] * c for c in r_coeffs]
        r_coeffs = [a - b for a, b in zip(shifted, scaled)]
        r_coeffs[-1] += dd[k]
    # pad to degree m-3 and prepend the monic leading term
    r_coeffs = [Fraction(0)] * (m - 2 - len(r_coeffs)) + r_coeffs
    p = [Fraction(1)] + r_coeffs  # monic degree m-2
    if any(c.denominator != 1 for c in p):
        raise InconsistentCountsError(
            "interpolated polynomial has non-integer coefficients; "
            "at least one prime is below the admissibility threshold"
        )
    p_int = [int(c) for c in p]
    for q, count in extra:
        if _eval_int_poly(p_int, q) != count:
            raise InconsistentCountsError(
                f"count at extra prime {q} disagrees with the interpolated polynomial"
            )
    # chi = t(t-1) p = (t^2 - t) p
    chi = [0] * (m + 1)
    for k, c in enumerate(p_int):  # c multiplies t^(m-2-k)
        chi[k] += c
        chi[k + 1] -= c
    return CharPoly(m, tuple(chi), tuple(pairs))


def chambers_and_r(cp: CharPoly) -> RankingCount:
    """Chamber count |chi(-1)| and ranking-pattern count r = chambers/m!.

    Python integers are exact at any size, so the m = 8 magnitudes
    (~9.2e9 chambers) need no special handling.  Non-divisibility by m!
    indicates a wrong polynomial and raises InvariantViolation.
    """
    chambers = abs(cp(-1))
    fact = factorial(cp.m)
    if chambers % fact:
        raise InvariantViolation(f"|chi(-1)| = {chambers} is not divisible by {cp.m}!")
    return RankingCount(cp.m, chambers, chambers // fact)


def mu2_formula(m: int) -> int:
    """Closed form for the t^(m-2) coefficient of chi."""
    if m < 3:
        raise InvalidParameterError(f"need m >= 3, got {m}")
    return (
        2 * comb(m, 3)
        + 15 * comb(m, 4)
        + 120 * comb(m, 5)
        + 375 * comb(m, 6)
        + 630 * comb(m, 7)
        + 315 * comb(m, 8)
    )


@dataclass(frozen=True)
class Factorization:
    """Integer roots of chi with multiplicity plus the leftover factor.

    remainder holds the monic non-linear part (highest power first);
    (1,) means chi splits into linear factors over the integers.
    """

    roots: tuple[tuple[int, int], ...]
    remainder: tuple[int, ...]

    @property
    def is_split(self) -> bool:
        return self.remainder == (1,)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def factor_over_Z(cp: CharPoly) -> Factorization:
    """All integer roots by trial division over divisors of the constant
    term (with sign and multiplicity), plus the remaining factor."""
    coeffs = list(cp.coeffs)
    roots: dict[int, int] = {}
    # strip roots at 0
    while coeffs[-1] == 0 and len(coeffs) > 1:
        roots[0] = roots.get(0, 0) + 1
        coeffs.pop()
    candidates = _divisors(coeffs[-1]) if len(coeffs) > 1 else []
    for d in candidates:
        for root in (d, -d):
            while len(coeffs) > 1 and _eval_int_poly(coeffs, root) == 0:
                # synthetic division by (t - root)
                out = [coeffs[0]]
                for c in coeffs[1:-1]:
                    out.append(c + root * out[-1])
                coeffs = out
                roots[root] = roots.get(root, 0) + 1
    return Factorization(tuple(sorted(roots.items())), tuple(coeffs))


def h_poly(m: int) -> Fraction:
    """Degree-8 polynomial whose sign decides whether chi can split into
    integer linear factors; negative value rules a split out.

    This is the closed form; h_from_moments evaluates the defining
    expression in the hyperplane count and mu_2, and the two must agree.
    """
    if m < 3:
        raise InvalidParameterError(f"need m >= 3, got {m}")
    x = Fraction(m)
    return (
        1
        + Fraction(98, 3) * x
        - Fraction(1573, 16) * x**2
        + Fraction(5423, 48) * x**3
        - Fraction(12787, 192) * x**4
        + Fraction(527, 24) * x**5
        - Fraction(391, 96) * x**6
        + Fraction(19, 48) * x**7
        - Fraction(1, 64) * x**8
    )


def h_from_moments(m: int) -> Fraction:
    """Same quantity from its definition: with S the sum of the putative
    integer roots b_2..b_{m-1} (= |A_m| - 1) and P their pairwise-product
    sum (= mu_2 - S), h = (m-3) S^2 - 2 (m-2) P."""
    if m < 3:
        raise InvalidParameterError(f"need m >= 3, got {m}")
    s = comb(m, 2) + 3 * comb(m, 4) - 1
    p = mu2_formula(m) - s
    return Fraction((m - 3) * s * s - 2 * (m - 2) * p)


def a_sequence(n: int) -> int:
    """n (n^(n-1) - 1) (n-2)! / (n-1), an exact integer for n >= 2.

    The formula is 0/0 at n = 1; its limit there is 1, which is also what
    the coincidence a_{m-2} = r(m) for m = 3..7 needs at m = 3, so a_1 = 1
    by convention.  It coincides with r(n+2) for n = 1..5 and departs at
    n = 6.
    """
    if n < 1:
        raise InvalidParameterError(f"need n >= 1, got {n}")
    if n == 1:
        return 1
    numerator = n * (n ** (n - 1) - 1) * factorial(n - 2)
    if numerator % (n - 1):
        raise InvariantViolation(f"a_{n} is not an integer")
    return numerator // (n - 1)


def pipeline(m: int, primes=None, threads: int | None = None,
             extra_primes: int = 0) -> tuple[CharPoly, RankingCount]:
    """select primes -> count points -> interpolate -> chambers and r."""
    from .arrangement import select_primes
    from .ffcount import count_m1

    if primes is None:
        primes = select_primes(m, m - 2 + extra_primes)
    results = [count_m1(m, q, threads=threads) for q in primes]
    cp = interpolate_charpoly(m, [(res.q, res.count) for res in results])
    return cp, chambers_and_r(cp)
