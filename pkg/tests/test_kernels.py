"""Parity between the optional njit kernels and their scalar/numpy twins."""

import math

import numpy as np
import pytest

from decimesh import _kernels
from decimesh.costs import _QualityChangeEvaluator
from decimesh.decimate import DecimationConfig, Decimator
from decimesh.quadrics import DET_GUARD, HomogeneousPlane, Quadric, minimize_quadric
from decimesh.shapes import icosphere

from conftest import random_triangle
from test_costs import make_star, random_star

pytestmark = pytest.mark.skipif(
    not _kernels.HAVE_NUMBA, reason="numba not installed; numpy fallback in use"
)


def test_pb_kernel_matches_scalar_evaluator():
    rng = np.random.default_rng(61)
    for _ in range(100):
        star = random_star(rng)
        cands = [
            tuple(0.5 * (a + b) for a, b in zip(star.p1, star.p2)),
            star.p1,
            star.p2,
            tuple(rng.normal(size=3)),
        ]
        costs = _kernels.pb_candidate_costs(
            np.asarray(star.upper_pos),
            np.asarray(star.lower_pos),
            np.asarray(star.p1),
            np.asarray(star.p2),
            np.asarray(cands),
        )
        scalar = _QualityChangeEvaluator(star)
        for cand, got in zip(cands, costs.tolist()):
            want = scalar(cand)
            assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_pb_kernel_degenerate_candidate_is_nan():
    # candidate colinear with an upper segment
    upper = [(0.0, 1.0, 0.0), (0.0, 2.0, 0.0)]
    lower = [(0.0, 1.0, 0.0), (1.0, -1.0, 0.0), (0.0, 2.0, 0.0)]
    star = make_star((1.0, 0.0, 0.0), (2.0, 0.5, 0.5), upper, lower)
    costs = _kernels.pb_candidate_costs(
        np.asarray(star.upper_pos),
        np.asarray(star.lower_pos),
        np.asarray(star.p1),
        np.asarray(star.p2),
        np.asarray([(0.0, 3.0, 0.0), (0.5, 0.5, 0.5)]),
    )
    assert math.isnan(costs[0])
    assert math.isfinite(costs[1])


def test_batch_candidates_match_scalar_minimizer():
    rng = np.random.default_rng(62)
    mesh = icosphere(1)
    mesh.vertices += rng.normal(scale=0.05, size=mesh.vertices.shape)
    cfg = DecimationConfig(cost_kind="qe", target_faces=40)
    dec = Decimator(mesh, cfg)
    dec._qv = dec._compute_all_quadrics()
    edges = dec._edge_array()
    points, costs = dec._batch_candidates(edges)
    for i, (a, b) in enumerate(edges.tolist()):
        q = Quadric(*dec._qv[a]) + Quadric(*dec._qv[b])
        point = minimize_quadric(q, mesh.position(a), mesh.position(b))
        assert costs[i] == pytest.approx(q.evaluate(point), rel=1e-9, abs=1e-12)
        assert tuple(points[i]) == pytest.approx(point, rel=1e-9, abs=1e-12)


def test_quadric_rows_match_plane_sums():
    rng = np.random.default_rng(63)
    tris = np.array([random_triangle(rng) for _ in range(12)])
    owners = np.array([0, 0, 0, 1, 1, 2, 2, 2, 2, 3, 3, 3], dtype=np.int64)
    slots = np.arange(12, dtype=np.int64)
    out = _kernels.quadric_rows(
        tris[:, 0], tris[:, 1], tris[:, 2], owners, slots, 4, False, 2e-12
    )
    for owner in range(4):
        planes = [
            HomogeneousPlane.from_triangle(*tris[k])
            for k in np.flatnonzero(owners == owner)
        ]
        want = Quadric.from_planes(planes)
        assert out[owner] == pytest.approx(tuple(want), rel=1e-12, abs=1e-15)


def test_batch_guard_matches_scalar_guard():
    # quadric engineered to sit near the determinant guard: both paths
    # must fall back the same way (cost parity, not branch parity)
    rng = np.random.default_rng(64)
    for _ in range(50):
        plane = HomogeneousPlane.from_triangle(*random_triangle(rng))
        q = Quadric.from_plane(plane)  # rank-1: always singular
        p1 = tuple(rng.normal(size=3))
        p2 = tuple(rng.normal(size=3))
        pts, costs = _kernels.batch_candidates(
            (np.asarray(q) + np.asarray(q))[None, :],
            np.asarray(p1)[None, :],
            np.asarray(p2)[None, :],
            DET_GUARD,
        )
        q2 = q + q
        want_point = minimize_quadric(q2, p1, p2)
        assert costs[0] == pytest.approx(q2.evaluate(want_point), rel=1e-9, abs=1e-12)
