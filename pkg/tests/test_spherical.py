"""Spherical chamber cones, Schlafli volumes, Monte Carlo cross-checks."""

import math

import numpy as np
import pytest

from midhyp import known_values as kv
from midhyp.errors import (
    DegenerateConeError,
    InvalidParameterError,
    PathError,
)
from midhyp.ranking import midpoint_order, object_config
from midhyp.spherical import (
    CHAMBER_LABELS,
    CHAMBER_MIDPOINT_ORDERS,
    NEGATE_REVERSE_MAP,
    SPHERE_VOLUME,
    SUM_ZERO_BASIS,
    S_VOLUME,
    T_VOLUME,
    VERTICES_R5,
    ConePath,
    SphericalCone,
    chamber_cone,
    collapse_path,
    cone_from_vertices,
    fbgh_path,
    pattern_probabilities_m5,
    project_to_sphere,
    schlafli_volume,
    solid_angle_mc,
    tetra_cone,
    tetra_geometry,
    tetra_path,
    tetra_volumes,
    vertex_coords,
)

RNG = np.random.default_rng(101)


def test_basis_orthonormal():
    gram = SUM_ZERO_BASIS @ SUM_ZERO_BASIS.T
    assert np.abs(gram - np.eye(4)).max() < 1e-14
    assert np.abs(SUM_ZERO_BASIS @ np.ones(5)).max() < 1e-14


class TestProjection:
    def test_basis_vector_probe(self):
        x = np.ones(5) + 0.25 * SUM_ZERO_BASIS[0]
        assert np.allclose(project_to_sphere(x), [1, 0, 0, 0], atol=1e-14)

    def test_named_vertex(self):
        z = project_to_sphere(VERTICES_R5["A"])
        assert np.allclose(z, vertex_coords("A"), atol=1e-14)
        assert abs(np.linalg.norm(z) - 1) < 1e-14

    def test_round_trip(self):
        for _ in range(50):
            x = RNG.standard_normal(5)
            z = project_to_sphere(x)
            back = SUM_ZERO_BASIS.T @ z
            centered = x - x.mean()
            assert np.allclose(back, centered / np.linalg.norm(centered), atol=1e-12)

    def test_degenerate_input(self):
        with pytest.raises(InvalidParameterError):
            project_to_sphere(3.7 * np.ones(5))


class TestChamberCones:
    def test_chamber_I_matches_half_space_list(self):
        hs = np.array([
            [-math.sqrt(3), -1, math.sqrt(2), 0],
            [math.sqrt(2), -math.sqrt(6), -math.sqrt(3), math.sqrt(5)],
            [0, 1, -math.sqrt(2), 0],
            [2 * math.sqrt(2), 0, math.sqrt(3), -math.sqrt(5)],
        ])
        hs /= np.linalg.norm(hs, axis=1, keepdims=True)
        assert np.abs(chamber_cone("I").normals - hs).max() < 1e-12

    def test_chamber_II_is_pyramid(self):
        assert chamber_cone("II").k == 5

    def test_chamber_I_contains_its_vertices(self):
        cone = chamber_cone("I")
        for name in "FBGH":
            assert (cone.normals @ vertex_coords(name) >= -1e-12).all()

    def test_every_chamber_contains_its_vertices(self):
        from midhyp.spherical import CHAMBER_VERTEX_NAMES

        for label in CHAMBER_LABELS:
            cone = chamber_cone(label)
            for name in CHAMBER_VERTEX_NAMES[label]:
                assert (cone.normals @ vertex_coords(name) >= -1e-12).all()

    def test_unknown_label(self):
        with pytest.raises(InvalidParameterError):
            chamber_cone("VII")

    def test_nonempty_interior(self):
        from midhyp.spherical import CHAMBER_VERTEX_NAMES

        for label in CHAMBER_LABELS:
            cone = chamber_cone(label)
            centroid = sum(vertex_coords(c) for c in CHAMBER_VERTEX_NAMES[label])
            centroid /= np.linalg.norm(centroid)
            assert (cone.normals @ centroid > 1e-6).all()

    def test_cone_interior_points_have_chamber_midpoint_order(self):
        # ties the spherical cones back to the ranking module: a point
        # inside cone k, read as a configuration, realizes chamber k's
        # six-midpoint chain (the other four pairs are forced by
        # x_1 < ... < x_5 and are not part of the chamber's signature)
        draws = RNG.standard_normal((200_000, 4))
        for label, expected in CHAMBER_MIDPOINT_ORDERS.items():
            cone = chamber_cone(label)
            inside = draws[(draws @ cone.normals.T >= 0).all(axis=1)]
            assert len(inside) > 0, f"no interior samples for {label}"
            for z in inside[:8]:
                x = SUM_ZERO_BASIS.T @ z
                assert list(x) == sorted(x), label  # ascending region
                full = midpoint_order(object_config(list(x))).pairs
                chain = tuple(p for p in full if p in expected)
                assert chain == expected, label


class TestNegateReverse:
    def test_orthogonal_involution(self):
        q = NEGATE_REVERSE_MAP
        assert np.abs(q @ q.T - np.eye(4)).max() < 1e-14
        assert np.abs(q @ q - np.eye(4)).max() < 1e-14

    def test_maps_chamber_to_primed(self):
        for label in CHAMBER_LABELS:
            plain = chamber_cone(label).normals
            primed = chamber_cone(label + "'").normals
            assert np.abs(primed - plain @ NEGATE_REVERSE_MAP.T).max() < 1e-14


class TestTetraGeometry:
    def test_published_vertex_v123(self):
        geom = tetra_geometry(chamber_cone("I"))
        v123 = np.array([0, -math.sqrt(10), -math.sqrt(5), -3 * math.sqrt(3)]) / math.sqrt(42)
        assert min(np.abs(v - v123).max() for v in geom.vertices) < 1e-12

    def test_published_edge_and_dihedral(self):
        geom = tetra_geometry(chamber_cone("I"))
        assert abs(geom.thetas[(0, 2)] - math.acos(4 / math.sqrt(21))) < 1e-12
        assert abs(geom.lambdas[(0, 2)] - math.pi / 4) < 1e-12
        assert abs(geom.lambdas[(0, 1)] - math.acos(0.25)) < 1e-12

    def test_deformed_lambda13(self):
        # dihedral angles depend on the normals only, so they remain
        # defined at the degenerate endpoint a = 0, where lambda_13 = 0
        from midhyp.spherical import _lambdas_of

        path = fbgh_path()
        assert abs(_lambdas_of(path.normals_at(0.0))[(0, 2)]) < 1e-12
        lam_a = lambda a: tetra_geometry(path.cone(a)).lambdas[(0, 2)]
        assert abs(lam_a(1.0) - math.pi / 4) < 1e-12
        for a in (0.2, 0.5, 0.8):
            assert abs(lam_a(a) - math.acos(1 / math.sqrt(a * a + 1))) < 1e-12

    def test_vertices_on_three_planes_inside_fourth(self):
        for name in ("FBGH", "AFED", "FBGC", "CGFE", "AFCE", "FEDG", "FDGH"):
            cone = tetra_cone(name)
            geom = tetra_geometry(cone)
            for missing, v in enumerate(geom.vertices):
                rest = np.delete(cone.normals, missing, axis=0)
                assert np.abs(rest @ v).max() < 1e-12
                assert cone.normals[missing] @ v > 1e-6
            for angles in (geom.lambdas, geom.thetas):
                assert all(0 < val < math.pi for val in angles.values())

    def test_tetra_vertices_match_names(self):
        for name in ("FBGH", "AFED", "FBGC", "CGFE", "AFCE", "FEDG", "FDGH"):
            geom = tetra_geometry(tetra_cone(name))
            got = sorted(tuple(np.round(v, 9)) for v in geom.vertices)
            want = sorted(tuple(np.round(vertex_coords(c), 9)) for c in name)
            assert np.allclose(got, want, atol=1e-9), name

    def test_degenerate_cone_detected(self):
        normals = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0]], float)
        with pytest.raises((DegenerateConeError, Exception)):
            tetra_geometry(SphericalCone(normals))

    def test_wrong_arity(self):
        with pytest.raises(InvalidParameterError):
            tetra_geometry(chamber_cone("II"))


class TestSchlafli:
    def test_fbgh_volume(self):
        assert abs(schlafli_volume(fbgh_path()) - 0.00628091) < 5e-5

    def test_fbgh_partial_integrals(self):
        from scipy.integrate import quad

        path = fbgh_path()
        thetas = lambda a: tetra_geometry(path.cone(a)).thetas
        i12, _ = quad(lambda a: thetas(a)[(0, 1)] * path.dlambda[(0, 1)](a), 0, 1, limit=200)
        i14, _ = quad(lambda a: thetas(a)[(0, 3)] * path.dlambda[(0, 3)](a), 0, 1, limit=200)
        mid = math.acos(4 / math.sqrt(21)) * (math.pi / 4)
        assert abs(i12 - (-0.0810845)) < 5e-6
        assert abs(i14 - (-0.306702)) < 5e-6
        total = 0.5 * (i12 + mid + i14)
        assert abs(total - 0.00628091) < 5e-6

    def test_constant_path_gives_vol0(self):
        cone = chamber_cone("I")
        path = ConePath(lambda a: cone.normals, volume_at_zero=0.125)
        assert abs(schlafli_volume(path) - 0.125) < 1e-9

    def test_all_volumes_match_published(self):
        vols = tetra_volumes()
        assert abs(vols["FBGH"] - kv.TETRA_VOLUMES["FBGH"]) < 5e-5
        for name, want in kv.TETRA_VOLUMES.items():
            assert abs(vols[name] - want) < 1e-4, name
        assert abs(sum(vols.values()) - kv.T_VOLUME) < 1e-4
        assert abs(sum(vols.values()) - T_VOLUME) < 1e-7  # exact 2 pi^2 / 240

    def test_collapse_path_degenerates_at_zero(self):
        cone = tetra_cone("AFED")
        path = collapse_path(cone, 0, 1)
        n0 = path.normals_at(0.0)
        assert np.allclose(n0[0], -cone.normals[1], atol=1e-14)
        with pytest.raises(PathError):
            # the degenerate endpoint itself has no tetrahedron geometry
            schlafli_volume(ConePath(lambda a: path.normals_at(0.0)))

    def test_alternative_pyramid_split_same_sum(self):
        # published split: FEDG + FDGH; the other base diagonal: FEDH + FEHG
        alt = 0.0
        for name in ("FEDH", "FEHG"):
            vs = np.array([vertex_coords(c) for c in name])
            alt += schlafli_volume(collapse_path(cone_from_vertices(vs, name), 0, 1))
        vols = tetra_volumes()
        assert abs(alt - (vols["FEDG"] + vols["FDGH"])) < 1e-6

    def test_any_collapse_pair_same_volume(self):
        cone = tetra_cone("CGFE")
        want = kv.TETRA_VOLUMES["CGFE"]
        for pair in ((0, 1), (1, 2), (3, 0), (2, 3)):
            got = schlafli_volume(collapse_path(cone, *pair))
            assert abs(got - want) < 1e-4, pair


class TestMonteCarlo:
    def test_full_sphere(self):
        frac, _ = solid_angle_mc(SphericalCone(np.zeros((0, 4))), 10**5, seed=4)
        assert frac == 1.0

    def test_half_space(self):
        frac, se = solid_angle_mc(SphericalCone(np.array([[1.0, 0, 0, 0]])), 10**6, seed=3)
        assert abs(frac - 0.5) < 3 * se

    def test_thread_independence(self):
        cone = chamber_cone("III")
        runs = [solid_angle_mc(cone, 2 * 10**6, seed=11, threads=t)[0] for t in (1, 2, 8)]
        assert runs[0] == runs[1] == runs[2]

    def test_matches_schlafli_at_modest_samples(self):
        cone = tetra_cone("AFCE")
        frac, se = solid_angle_mc(cone, 4 * 10**6, seed=12, threads=2)
        want = kv.TETRA_VOLUMES["AFCE"] / SPHERE_VOLUME
        assert abs(frac - want) < 4 * se

    def test_two_generators_agree(self):
        cone = chamber_cone("VI")
        f1, s1 = solid_angle_mc(cone, 2 * 10**6, seed=13, sampler="gaussian")
        f2, s2 = solid_angle_mc(cone, 2 * 10**6, seed=14, sampler="disk")
        assert abs(f1 - f2) < 3 * math.hypot(s1, s2)

    def test_primed_symmetry(self):
        for label in ("I", "IV"):
            f1, s1 = solid_angle_mc(chamber_cone(label), 2 * 10**6, seed=15, threads=2)
            f2, s2 = solid_angle_mc(chamber_cone(label + "'"), 2 * 10**6, seed=16, threads=2)
            assert abs(f1 - f2) < 3 * math.hypot(s1, s2)

    def test_bad_sampler(self):
        with pytest.raises(InvalidParameterError):
            solid_angle_mc(chamber_cone("I"), 100, sampler="sobol")


class TestProbabilities:
    def test_published_values(self):
        table = pattern_probabilities_m5()
        for label, want in kv.PROBABILITIES.items():
            assert abs(table.probability(label) - want) < 1e-3
        assert abs(table.probability("III") - 0.1150086) < 1e-3
        twelve = 2 * sum(r.probability for r in table.rows)
        assert abs(twelve - 1.0) < 1e-3

    def test_t_volume(self):
        assert abs(T_VOLUME - 0.0822467) < 1e-7
        assert abs(S_VOLUME - 2 * 0.0822467) < 2e-7

    def test_volume_sum(self):
        table = pattern_probabilities_m5()
        assert abs(table.total_volume - kv.T_VOLUME) < 1e-4

    def test_mc_column(self):
        table = pattern_probabilities_m5(mc_samples=10**6, seed=21, threads=2)
        for row in table.rows:
            assert row.mc_volume is not None
            assert abs(row.mc_volume - row.volume) < 4 * row.mc_stderr
