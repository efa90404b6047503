"""Published reference values, embedded for verification and reporting.

Everything here is data, versioned as a unit: characteristic-polynomial
factorizations, chamber and ranking-pattern counts for m <= 8, the two
intermediate point counts for m = 4, and the spherical volumes and
conditional probabilities for m = 5.  `verify` and `prob5` diff computed
results against this table.
"""

from __future__ import annotations

VERSION = "2004.1"

#: Integer roots of chi(m, t); m = 8 additionally carries the monic
#: quadratic factor below.
CHI_LINEAR_ROOTS = {
    3: (0, 1, 2),
    4: (0, 1, 3, 5),
    5: (0, 1, 7, 8, 9),
    6: (0, 1, 13, 14, 15, 17),
    7: (0, 1, 23, 24, 25, 26, 27),
    8: (0, 1, 35, 37, 39, 41),
}

CHI_QUADRATIC = {8: (1, -85, 1926)}

CHAMBERS = {
    3: 6,
    4: 48,
    5: 1440,
    6: 120960,
    7: 23587200,
    8: 9248117760,
}

RANKING_PATTERNS = {
    3: 1,
    4: 2,
    5: 12,
    6: 168,
    7: 4680,
}

#: The published m = 8 pattern count.  It is inconsistent with the
#: published chamber count above: 9248117760 / 8! = 229368 exactly,
#: and the chamber count is corroborated by the published polynomial
#: and the mu_1/mu_2 closed forms.  Both numbers are recorded; the
#: pipeline reports the quotient.
R8_PUBLISHED = 229386
R8_FROM_CHAMBERS = 229368

#: |M_1(m, q)| values quoted for m = 4.
M1_COUNTS = {(4, 5): 0, (4, 7): 8}

#: Primes used for the m = 8 count.
M8_PRIMES = (223, 227, 229, 233, 239, 241)

#: Spherical tetrahedron volumes (m = 5), keyed by vertex string.
TETRA_VOLUMES = {
    "FBGH": 0.00628091,
    "FEDG": 0.00486715,
    "FDGH": 0.00481365,
    "AFED": 0.0189182,
    "FBGC": 0.0146084,
    "CGFE": 0.00650684,
    "AFCE": 0.0262516,
}

#: Vol(T) = 2 pi^2 / 240, as printed.
T_VOLUME = 0.0822467

#: Conditional probabilities of the six midpoint orders given an
#: ascending configuration; each mirror chamber has the same value.
PROBABILITIES = {
    "I": 0.0381834,
    "II": 0.0588522,
    "III": 0.1150086,
    "IV": 0.0888085,
    "V": 0.0395569,
    "VI": 0.1595905,
}


def chi_coefficients(m: int) -> tuple[int, ...]:
    """Dense descending coefficients of the published chi(m, t)."""
    coeffs = [1]
    for root in CHI_LINEAR_ROOTS[m]:
        coeffs = [a - root * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    for quad in ([CHI_QUADRATIC[m]] if m in CHI_QUADRATIC else []):
        out = [0] * (len(coeffs) + 2)
        for i, c in enumerate(coeffs):
            for j, d in enumerate(quad):
                out[i + j] += c * d
        coeffs = out
    return tuple(coeffs)
