"""Ranking-pattern probabilities for five objects.

For a spherically distributed configuration, the probability of each
ranking pattern is proportional to the volume its chamber cuts out of
the unit 3-sphere inside the sum-zero hyperplane of R^5.  Conditioning
on the ascending order x_1 < ... < x_5 leaves twelve chambers in
mirror-symmetric pairs; the six representatives are spherical tetrahedra
except one quadrilateral pyramid, which splits into two tetrahedra.

Tetrahedron volumes come from the Schlafli differential identity
dVol/dlambda_ij = theta_ij / 2: deform the cone along a path a -> T(a)
with T(0) degenerate (volume zero) and integrate
(1/2) sum theta_ij(a) lambda_ij'(a) over a in [0, 1].  A Monte Carlo
solid-angle estimator provides an independent check of every volume.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import (
    DegenerateConeError,
    EmptyTetrahedronError,
    InvalidParameterError,
    InvariantViolation,
    PathError,
    ToleranceError,
)

#: Orthonormal basis of the sum-zero hyperplane in R^5 (rows).
SUM_ZERO_BASIS = np.array(
    [
        [1, -1, 0, 0, 0] / np.sqrt(2),
        [1, 1, -2, 0, 0] / np.sqrt(6),
        [1, 1, 1, -3, 0] / np.sqrt(12),
        [1, 1, 1, 1, -4] / np.sqrt(20),
    ]
)

#: Chamber-cone vertices on the sphere, in R^5 coordinates.
VERTICES_R5 = {
    "A": np.array([-1, -1, -1, -1, 4]) / np.sqrt(20),
    "B": np.array([-3, -3, 2, 2, 2]) / np.sqrt(30),
    "C": np.array([-2, -2, -2, 3, 3]) / np.sqrt(30),
    "D": np.array([-1, 0, 0, 0, 1]) / np.sqrt(2),
    "E": np.array([-7, -2, -2, 3, 8]) / np.sqrt(130),
    "F": np.array([-4, -4, 1, 1, 6]) / np.sqrt(70),
    "G": np.array([-2, -1, 0, 1, 2]) / np.sqrt(10),
    "H": np.array([-8, -3, 2, 2, 7]) / np.sqrt(130),
}

# Binding inequalities of the six chambers of the ascending region with
# x_24 < x_15.  ("mid", (p,q), (r,s)) reads x_pq < x_rs; ("ord", i, j)
# reads x_i < x_j.  All but II cut spherical tetrahedra; II is a
# quadrilateral pyramid split into the tetrahedra FEDG and FDGH.
CHAMBER_INEQUALITIES = {
    "I": (("mid", (1, 4), (2, 3)), ("mid", (2, 5), (3, 4)), ("ord", 3, 4), ("mid", (2, 4), (1, 5))),
    "II": (("mid", (1, 5), (3, 4)), ("mid", (1, 4), (2, 3)), ("mid", (2, 4), (1, 5)), ("ord", 3, 4), ("mid", (3, 4), (2, 5))),
    "III": (("mid", (1, 4), (2, 3)), ("ord", 2, 3), ("ord", 3, 4), ("mid", (3, 4), (1, 5))),
    "IV": (("ord", 1, 2), ("mid", (2, 5), (3, 4)), ("mid", (2, 3), (1, 4)), ("mid", (2, 4), (1, 5))),
    "V": (("mid", (1, 5), (3, 4)), ("mid", (2, 3), (1, 4)), ("mid", (2, 4), (1, 5)), ("mid", (3, 4), (2, 5))),
    "VI": (("ord", 1, 2), ("ord", 2, 3), ("mid", (2, 3), (1, 4)), ("mid", (3, 4), (1, 5))),
}

CHAMBER_VERTEX_NAMES = {
    "I": "FBGH",
    "II": "FEDHG",
    "III": "AFED",
    "IV": "FBGC",
    "V": "CGFE",
    "VI": "AFCE",
}

#: Midpoint order of each chamber (and mirror), ascending.
CHAMBER_MIDPOINT_ORDERS = {
    "I": ((1, 4), (2, 3), (2, 4), (1, 5), (2, 5), (3, 4)),
    "II": ((1, 4), (2, 3), (2, 4), (1, 5), (3, 4), (2, 5)),
    "III": ((1, 4), (2, 3), (2, 4), (3, 4), (1, 5), (2, 5)),
    "IV": ((2, 3), (1, 4), (2, 4), (1, 5), (2, 5), (3, 4)),
    "V": ((2, 3), (1, 4), (2, 4), (1, 5), (3, 4), (2, 5)),
    "VI": ((2, 3), (1, 4), (2, 4), (3, 4), (1, 5), (2, 5)),
    "I'": ((2, 3), (1, 4), (1, 5), (2, 4), (3, 4), (2, 5)),
    "II'": ((1, 4), (2, 3), (1, 5), (2, 4), (3, 4), (2, 5)),
    "III'": ((1, 4), (1, 5), (2, 3), (2, 4), (3, 4), (2, 5)),
    "IV'": ((2, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 4)),
    "V'": ((1, 4), (2, 3), (1, 5), (2, 4), (2, 5), (3, 4)),
    "VI'": ((1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4)),
}

CHAMBER_LABELS = ("I", "II", "III", "IV", "V", "VI")
PRIMED_LABELS = tuple(lab + "'" for lab in CHAMBER_LABELS)

#: Exact volume of the ascending spherical simplex with the extra
#: mirror-splitting inequality: Vol(S^3) / (5! * 2).
T_VOLUME = 2 * math.pi**2 / 240
S_VOLUME = 2 * T_VOLUME
SPHERE_VOLUME = 2 * math.pi**2


@dataclass(frozen=True)
class SphericalCone:
    """Region {z on S^3 : n . z >= 0 for every normal n}; rows of
    `normals` are unit 4-vectors in sum-zero-basis coordinates."""

    normals: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        n = np.asarray(self.normals, dtype=float).reshape(-1, 4)
        lengths = np.linalg.norm(n, axis=1)
        if n.size:
            if (lengths < 1e-12).any():
                raise InvalidParameterError("zero normal vector")
            if (np.abs(lengths - 1) > 1e-12).any():
                n = n / lengths[:, None]
        object.__setattr__(self, "normals", n)

    @property
    def k(self) -> int:
        return self.normals.shape[0]

    def contains(self, z: np.ndarray, atol: float = 0.0) -> bool:
        return bool((self.normals @ np.asarray(z) >= -atol).all())


def project_to_sphere(x) -> np.ndarray:
    """Center a 5-vector, express it in the sum-zero basis, normalize.

    Vectors proportional to all-ones project to zero and are rejected.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (5,):
        raise InvalidParameterError("expected a 5-vector")
    z = SUM_ZERO_BASIS @ (x - x.mean())
    norm = np.linalg.norm(z)
    if norm < 1e-14:
        raise InvalidParameterError("vector is proportional to (1,1,1,1,1)")
    return z / norm


def vertex_coords(name: str) -> np.ndarray:
    """Basis coordinates of a named chamber vertex (A..H)."""
    try:
        v = VERTICES_R5[name]
    except KeyError:
        raise InvalidParameterError(f"unknown vertex {name!r}") from None
    return SUM_ZERO_BASIS @ v


def _inequality_normal(spec) -> np.ndarray:
    kind = spec[0]
    c = np.zeros(5)
    if kind == "mid":
        (p, q), (r, s) = spec[1], spec[2]
        c[[r - 1, s - 1]] += 1
        c[[p - 1, q - 1]] -= 1
    elif kind == "ord":
        i, j = spec[1], spec[2]
        c[j - 1] += 1
        c[i - 1] -= 1
    else:
        raise InvalidParameterError(f"unknown inequality kind {kind!r}")
    return SUM_ZERO_BASIS @ c


def _negate_reverse_matrix() -> np.ndarray:
    """Coordinate map induced by x_i -> -x_{6-i}, as a 4x4 orthogonal
    matrix acting on basis coordinates."""
    q = np.empty((4, 4))
    for i in range(4):
        image = -(SUM_ZERO_BASIS.T @ np.eye(4)[i])[::-1]
        q[:, i] = SUM_ZERO_BASIS @ image
    return q


NEGATE_REVERSE_MAP = _negate_reverse_matrix()


def chamber_cone(label: str) -> SphericalCone:
    """Cone of a chamber I..VI, or of a mirror chamber I'..VI' (the image
    of the unprimed cone under the negate-and-reverse coordinate map)."""
    if label in CHAMBER_INEQUALITIES:
        normals = np.array([_inequality_normal(s) for s in CHAMBER_INEQUALITIES[label]])
        return SphericalCone(normals, label)
    if label.endswith("'") and label[:-1] in CHAMBER_INEQUALITIES:
        base = chamber_cone(label[:-1])
        return SphericalCone(base.normals @ NEGATE_REVERSE_MAP.T, label)
    raise InvalidParameterError(f"unknown chamber label {label!r}")


def cone_from_vertices(vertices: np.ndarray, label: str = "custom") -> SphericalCone:
    """Facet normals of the spherical tetrahedron spanned by four unit
    4-vectors; each normal is orthogonal to three vertices and points
    toward the fourth."""
    vs = np.asarray(vertices, dtype=float)
    if vs.shape != (4, 4):
        raise InvalidParameterError("expected four 4-dimensional vertices")
    normals = []
    for i in range(4):
        rest = np.delete(vs, i, axis=0)
        _, s, vt = np.linalg.svd(rest)
        if s[-1] < 1e-10:
            raise DegenerateConeError("three vertices are linearly dependent")
        n = vt[-1]
        d = n @ vs[i]
        if abs(d) < 1e-12:
            raise DegenerateConeError("vertices span fewer than four dimensions")
        normals.append(n if d > 0 else -n)
    return SphericalCone(np.array(normals), label)


@dataclass(frozen=True)
class TetraGeometry:
    """Vertices, dihedral angles and edge lengths of a spherical
    tetrahedron cut out by four inward unit normals.

    vertices[l] is the vertex on the three facets other than l;
    lambdas[(i, j)] = arccos(-n_i . n_j) is the dihedral angle along the
    edge where facets i and j meet, and thetas[(i, j)] is that edge's arc
    length, the angle between the two vertices spanning it.
    """

    vertices: tuple[np.ndarray, ...]
    lambdas: dict[tuple[int, int], float]
    thetas: dict[tuple[int, int], float]


def tetra_geometry(cone: SphericalCone, rank_tol: float = 1e-9) -> TetraGeometry:
    """Solve the 4 three-plane systems for the vertices and derive all
    dihedral angles and edge lengths."""
    if cone.k != 4:
        raise InvalidParameterError(f"need exactly 4 normals, got {cone.k}")
    nu = cone.normals
    vertices = []
    for missing in range(4):
        rest = np.delete(nu, missing, axis=0)
        _, s, vt = np.linalg.svd(rest)
        if s[-1] < rank_tol:
            raise DegenerateConeError(f"normals {tuple(i for i in range(4) if i != missing)} are rank deficient")
        v = vt[-1]
        d = nu[missing] @ v
        if abs(d) < 1e-13:
            raise EmptyTetrahedronError("vertex lies on its opposite facet")
        vertices.append(v if d > 0 else -v)
    lambdas = {}
    thetas = {}
    for i in range(4):
        for j in range(i + 1, 4):
            lambdas[(i, j)] = math.acos(float(np.clip(-nu[i] @ nu[j], -1.0, 1.0)))
            k, l = (x for x in range(4) if x not in (i, j))
            thetas[(i, j)] = math.acos(float(np.clip(vertices[k] @ vertices[l], -1.0, 1.0)))
    return TetraGeometry(tuple(vertices), lambdas, thetas)


@dataclass(frozen=True)
class ConePath:
    """A deformation a -> four normals with T(0) degenerate.

    normals_at(a) may return unnormalized rows.  dlambda, when given,
    maps each edge (i, j) to the closed-form derivative of its dihedral
    angle; edges without an entry are differentiated numerically.
    """

    normals_at: Callable[[float], np.ndarray]
    label: str = "custom"
    volume_at_zero: float = 0.0
    dlambda: dict[tuple[int, int], Callable[[float], float]] = field(default_factory=dict)

    def cone(self, a: float) -> SphericalCone:
        return SphericalCone(self.normals_at(a), f"{self.label}@a={a:g}")


def collapse_path(cone: SphericalCone, i: int = 0, j: int = 1) -> ConePath:
    """Deform normal i linearly to the antipode of normal j.

    At a=0 facets i and j bound opposite half-spaces, so T(0) lies in a
    great 2-sphere and has zero volume; at a=1 the original cone is
    recovered.  This generalizes the published deformation, which scales
    a single coefficient of one normal: when normal i and the antipode of
    normal j differ in one coordinate only, the two paths trace the same
    set of cones up to a monotone reparametrization, under which the
    volume integral is invariant.
    """
    if i == j:
        raise InvalidParameterError("collapse pair must be two distinct facets")
    base = cone.normals.copy()

    def normals_at(a: float) -> np.ndarray:
        out = base.copy()
        out[i] = (1.0 - a) * (-base[j]) + a * base[i]
        return out

    return ConePath(normals_at, label=f"{cone.label}:collapse({i},{j})")


def _fbgh_dlambda() -> dict[tuple[int, int], Callable[[float], float]]:
    def d12(a):
        return -math.sqrt(2) / ((a * a + 1) * math.sqrt(14 * a * a + 16))

    def d13(a):
        return 1.0 / (1.0 + a * a)

    def d14(a):
        return -(a + 2) / ((a * a + 1) * math.sqrt(4 * a * a + 4 * a + 7))

    zero = lambda a: 0.0
    return {(0, 1): d12, (0, 2): d13, (0, 3): d14, (1, 2): zero, (1, 3): zero, (2, 3): zero}


def fbgh_path() -> ConePath:
    """The published deformation of chamber I's tetrahedron: scale the
    first coordinate of the first facet normal by a.  All six dihedral-
    angle derivatives are registered in closed form."""

    def normals_at(a: float) -> np.ndarray:
        return np.array(
            [
                [-math.sqrt(3) * a, -1, math.sqrt(2), 0],
                [math.sqrt(2), -math.sqrt(6), -math.sqrt(3), math.sqrt(5)],
                [0, 1, -math.sqrt(2), 0],
                [2 * math.sqrt(2), 0, math.sqrt(3), -math.sqrt(5)],
            ]
        )

    return ConePath(normals_at, label="I:published", dlambda=_fbgh_dlambda())


def _lambdas_of(normals: np.ndarray) -> dict[tuple[int, int], float]:
    nu = normals / np.linalg.norm(normals, axis=1, keepdims=True)
    return {
        (i, j): math.acos(float(np.clip(-nu[i] @ nu[j], -1.0, 1.0)))
        for i in range(4)
        for j in range(i + 1, 4)
    }


def _dlambda_numeric(path: ConePath, a: float, h: float = 1e-6):
    """Central differences with one Richardson extrapolation step.

    Dihedral angles depend on the normals only, never on the vertices, so
    probes slightly outside [0, 1] are harmless.
    """

    def diff(step):
        hi = _lambdas_of(path.normals_at(a + step))
        lo = _lambdas_of(path.normals_at(a - step))
        return {k: (hi[k] - lo[k]) / (2 * step) for k in hi}

    d_h, d_h2 = diff(h), diff(h / 2)
    return {k: (4 * d_h2[k] - d_h[k]) / 3 for k in d_h}


def schlafli_volume(path: ConePath, tol: float = 1e-8) -> float:
    """Vol(T(1)) = Vol(T(0)) + (1/2) sum_ij int_0^1 theta_ij(a) lambda_ij'(a) da.

    Adaptive quadrature to absolute tolerance `tol`; the integrand never
    touches the endpoints, so the a=0 degeneracy is not evaluated.
    Geometry failures anywhere on the path surface as PathError.
    """

    def integrand(a: float) -> float:
        try:
            geom = tetra_geometry(path.cone(a))
        except (DegenerateConeError, EmptyTetrahedronError) as exc:
            raise PathError(f"path {path.label!r} degenerates at a = {a}: {exc}") from exc
        dlam = dict(_dlambda_numeric(path, a)) if len(path.dlambda) < 6 else {}
        dlam.update({k: f(a) for k, f in path.dlambda.items()})
        return 0.5 * sum(geom.thetas[k] * dlam[k] for k in geom.thetas)

    try:
        value, err = quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=0.0, limit=300)
    except PathError:
        raise
    if err > 10 * tol:
        raise ToleranceError(f"quadrature error estimate {err:g} exceeds tolerance {tol:g}")
    return path.volume_at_zero + value


# Registered deformations: chamber I uses the published path; the split
# tetrahedra of II and the tetrahedra of III..VI collapse facet 0 onto
# the antipode of facet 1 (every pair works for these cones; pair (0, 1)
# is fixed for reproducibility and validated against Monte Carlo).
_TETRAHEDRA: dict[str, tuple[str, ...]] = {
    "I": ("FBGH",),
    "II": ("FEDG", "FDGH"),
    "III": ("AFED",),
    "IV": ("FBGC",),
    "V": ("CGFE",),
    "VI": ("AFCE",),
}


def tetra_cone(name: str) -> SphericalCone:
    """Cone of one of the seven volume tetrahedra, by vertex string."""
    for chamber, tets in _TETRAHEDRA.items():
        if name in tets:
            if len(tets) == 1:
                return SphericalCone(chamber_cone(chamber).normals, name)
            vs = np.array([vertex_coords(c) for c in name])
            return cone_from_vertices(vs, name)
    raise InvalidParameterError(f"unknown tetrahedron {name!r}")


def tetra_path(name: str) -> ConePath:
    if name == "FBGH":
        return fbgh_path()
    return collapse_path(tetra_cone(name), 0, 1)


def tetra_volumes(tol: float = 1e-8) -> dict[str, float]:
    """Schlafli volumes of the seven tetrahedra, keyed by vertex string."""
    return {
        name: schlafli_volume(tetra_path(name), tol=tol)
        for tets in _TETRAHEDRA.values()
        for name in tets
    }


_MC_BLOCK = 1 << 20


def _mc_block_hits(normals: np.ndarray, seed: int, block: int, n: int, sampler: str) -> int:
    """Hits in one block; the (seed, block) pair keys a Philox stream, so
    the total is independent of how blocks are scheduled over threads."""
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, block], dtype=np.uint64)))
    if sampler == "gaussian":
        z = rng.standard_normal((n, 4))
    elif sampler == "disk":
        # Marsaglia: two points in the unit disk give a uniform point on S^3
        z = np.empty((n, 4))
        filled = 0
        while filled < n:
            want = n - filled
            u = rng.uniform(-1, 1, (2 * want + 64, 2))
            v = rng.uniform(-1, 1, (2 * want + 64, 2))
            r2u = (u * u).sum(1)
            r2v = (v * v).sum(1)
            ok = (r2u < 1) & (r2v < 1) & (r2u > 0) & (r2v > 0)
            u, v, r2u, r2v = u[ok], v[ok], r2u[ok], r2v[ok]
            k = min(len(u), want)
            scale = np.sqrt((1 - r2u[:k]) / r2v[:k])
            z[filled : filled + k, 0:2] = u[:k]
            z[filled : filled + k, 2:4] = v[:k] * scale[:, None]
            filled += k
    else:
        raise InvalidParameterError(f"unknown sampler {sampler!r}")
    if normals.size == 0:
        return n
    # cone membership is scale-invariant, so points need not be normalized
    return int(((z @ normals.T) >= 0).all(axis=1).sum())


def solid_angle_mc(cone: SphericalCone, samples: int, seed: int = 0,
                   threads: int = 1, sampler: str = "gaussian") -> tuple[float, float]:
    """Fraction of the sphere inside the cone, with binomial standard
    error; multiply by 2 pi^2 for a volume.  Identical results for any
    thread count at fixed (seed, samples)."""
    if samples < 1:
        raise InvalidParameterError("need samples >= 1")
    blocks = [(b, min(_MC_BLOCK, samples - b * _MC_BLOCK))
              for b in range((samples + _MC_BLOCK - 1) // _MC_BLOCK)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(lambda t: _mc_block_hits(cone.normals, seed, t[0], t[1], sampler), blocks))
    else:
        hits = sum(_mc_block_hits(cone.normals, seed, b, n, sampler) for b, n in blocks)
    fraction = hits / samples
    stderr = math.sqrt(max(fraction * (1 - fraction), 1e-300) / samples)
    return fraction, stderr


@dataclass(frozen=True)
class ChamberProbability:
    label: str
    tetrahedra: tuple[str, ...]
    volume: float
    probability: float
    mc_volume: float | None = None
    mc_stderr: float | None = None


@dataclass(frozen=True)
class ProbabilityTable:
    """Conditional probabilities of the six midpoint orders given an
    ascending configuration (each mirror chamber has the same value)."""

    rows: tuple[ChamberProbability, ...]

    @property
    def total_volume(self) -> float:
        return sum(r.volume for r in self.rows)

    def probability(self, label: str) -> float:
        for r in self.rows:
            if r.label == label or r.label + "'" == label:
                return r.probability
        raise InvalidParameterError(f"unknown chamber label {label!r}")


def pattern_probabilities_m5(tol: float = 1e-8, mc_samples: int = 0, seed: int = 0,
                             threads: int = 1) -> ProbabilityTable:
    """Volumes of the seven tetrahedra and the six chamber probabilities.

    Each probability is volume / Vol(S) with Vol(S) = 2 pi^2 / 120 the
    ascending region's volume; mirror chambers double every probability,
    and the twelve must sum to 1 (asserted within 1e-3, propagating both
    quadrature and published-value rounding).  mc_samples > 0 adds a
    Monte Carlo volume column.
    """
    volumes = tetra_volumes(tol=tol)
    rows = []
    for chamber, tets in _TETRAHEDRA.items():
        vol = sum(volumes[t] for t in tets)
        mc_vol = mc_se = None
        if mc_samples:
            frac, se = solid_angle_mc(chamber_cone(chamber), mc_samples, seed=seed, threads=threads)
            mc_vol, mc_se = frac * SPHERE_VOLUME, se * SPHERE_VOLUME
        rows.append(ChamberProbability(chamber, tets, vol, vol / S_VOLUME, mc_vol, mc_se))
    table = ProbabilityTable(tuple(rows))
    twelve = 2 * sum(r.probability for r in table.rows)
    if abs(twelve - 1.0) > 1e-3:
        raise InvariantViolation(f"the twelve probabilities sum to {twelve}, not 1")
    return table
