"""Edge-collapse cost functions and their placement policies.

Four costs are provided, all pure functions of an edge star, a candidate
placement and (for the atom-aware cost) nearby atom centers:

- ``qe``: combined vertex quadrics (squared plane distances).
- ``vol``: squared signed tetrahedron volumes over the incident
  triangles, which weights plane distances by squared triangle area.
- ``pb``: change in summed triangle quality over the non-adjacent star
  triangles; guards quadrature-point spacing for boundary-integral
  solvers whose kernels blow up as 1/r.
- ``gb`` / ``gb_qe``: a short-edge (or quadric) term plus a weighted
  cumulative change in centroid-to-atom squared distances, guarding
  surface-integral Born radii.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import CandidateInfeasible, DegenerateTriangle
from .geometry import centroid as geometry_centroid
from .geometry import cross, dist, dot, sub, triangle_quality
from .mesh import EdgeStar, edge_star
from .quadrics import Quadric, f_qe, minimize_quadric, vertex_quadric

COST_KINDS = ("qe", "vol", "pb", "gb", "gb_qe")

GB_VARIANTS = ("edge_length", "qe_term")


@dataclass(frozen=True)
class GbCostParams:
    """Parameters of the atom-aware cost.

    rho is the capture radius (Angstroms) for atom centers near either
    edge endpoint; lam weights the atomic-center term against the first
    term; variant picks that first term: the edge length, or the quadric
    cost of the placement.
    """

    rho: float = 5.0
    lam: float = 1e-8
    variant: str = "edge_length"

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if self.variant not in GB_VARIANTS:
            raise ValueError(f"variant must be one of {GB_VARIANTS}")


@dataclass(frozen=True)
class CollapseCandidate:
    """One queued collapse: an edge, its chosen placement and cost."""

    v1: int
    v2: int
    placement: tuple
    cost: float
    cost_kind: str
    version: int = 0


# --- volumetric cost --------------------------------------------------------


def _volume_row(a, b, c):
    """Row G with G . [v, 1] = det(a-v, b-v, c-v), i.e. 6x the signed
    volume of the tetrahedron (v, a, b, c) up to orientation."""
    n = cross(sub(b, a), sub(c, a))
    d = dot(a, cross(b, c))
    return (-n[0], -n[1], -n[2], d)


def vol_quadric(star: EdgeStar) -> Quadric:
    """Quadratic form (1/36) sum G^T G over every triangle incident to
    either endpoint, wings included; evaluating it at v gives the sum of
    squared signed tet volumes of v over those triangles."""
    xx = xy = xz = xw = yy = yz = yw = zz = zw = ww = 0.0
    for (a, b, c) in star.all_triangles_before():
        g0, g1, g2, g3 = _volume_row(a, b, c)
        xx += g0 * g0; xy += g0 * g1; xz += g0 * g2; xw += g0 * g3
        yy += g1 * g1; yz += g1 * g2; yw += g1 * g3
        zz += g2 * g2; zw += g2 * g3
        ww += g3 * g3
    s = 1.0 / 36.0
    return Quadric(
        s * xx, s * xy, s * xz, s * xw, s * yy,
        s * yz, s * yw, s * zz, s * zw, s * ww,
    )


def f_vol(star: EdgeStar, vbar) -> float:
    """Volume-preservation collapse cost at placement vbar."""
    return vol_quadric(star).evaluate(vbar)


# --- triangle-quality cost --------------------------------------------------


def ring_qualities(star: EdgeStar):
    """Quality of each non-adjacent star triangle before the collapse."""
    return [triangle_quality(a, b, c) for (a, b, c) in star.ring_triangles_before()]


class _QualityChangeEvaluator:
    """Per-edge evaluator of the summed ring-quality change.

    Precomputes the before-collapse qualities once; evaluations at the
    original endpoint positions skip the ring whose triangles are
    unchanged (their terms are exactly zero)."""

    def __init__(self, star: EdgeStar):
        self.star = star
        up = star.upper_pos
        lo = star.lower_pos
        p1, p2 = star.p1, star.p2
        self.before_upper = [
            triangle_quality(p2, up[i], up[i + 1]) for i in range(len(up) - 1)
        ]
        self.before_lower = [
            triangle_quality(p1, lo[i], lo[i + 1]) for i in range(len(lo) - 1)
        ]

    def __call__(self, vbar):
        star = self.star
        total = 0.0
        if vbar != star.p2:
            up = star.upper_pos
            for i, qb in enumerate(self.before_upper):
                total += triangle_quality(vbar, up[i], up[i + 1]) - qb
        if vbar != star.p1:
            lo = star.lower_pos
            for i, qb in enumerate(self.before_lower):
                total += triangle_quality(vbar, lo[i], lo[i + 1]) - qb
        return total


def f_pb(star: EdgeStar, vbar) -> float:
    """Summed quality change of the non-adjacent star triangles.

    Negative values mean the collapse improves element quality. Raises
    ``DegenerateTriangle`` when the placement flattens any surviving
    triangle; callers treat that as an infeasible candidate.
    """
    return _QualityChangeEvaluator(star)(tuple(vbar))


# --- atomic-center cost -----------------------------------------------------


class _AtomTermEvaluator:
    """Per-edge evaluator of the cumulative squared-distance change.

    Using that each after-centroid is its before-centroid shifted by
    (vbar - apex)/3, the expanded form collapses to a handful of dot
    products against per-ring centroid sums and the atom-center sum, so
    one evaluation is O(1) after an O(triangles + atoms) setup.
    """

    def __init__(self, star: EdgeStar, atom_positions):
        self.star = star
        self.m = len(atom_positions)
        if self.m == 0:
            return
        s = np.sum(atom_positions, axis=0)
        self.atom_sum = (float(s[0]), float(s[1]), float(s[2]))
        up = star.upper_pos
        lo = star.lower_pos
        p1, p2 = star.p1, star.p2
        sux = suy = suz = 0.0
        for i in range(len(up) - 1):
            cx, cy, cz = geometry_centroid(p2, up[i], up[i + 1])
            sux += cx; suy += cy; suz += cz
        slx = sly = slz = 0.0
        for i in range(len(lo) - 1):
            cx, cy, cz = geometry_centroid(p1, lo[i], lo[i + 1])
            slx += cx; sly += cy; slz += cz
        self.upper_centroid_sum = (sux, suy, suz)
        self.lower_centroid_sum = (slx, sly, slz)
        self.n_upper_tris = len(up) - 1
        self.n_lower_tris = len(lo) - 1

    def __call__(self, vbar):
        if self.m == 0:
            return 0.0
        star = self.star
        d2 = (
            (vbar[0] - star.p2[0]) / 3.0,
            (vbar[1] - star.p2[1]) / 3.0,
            (vbar[2] - star.p2[2]) / 3.0,
        )
        d1 = (
            (vbar[0] - star.p1[0]) / 3.0,
            (vbar[1] - star.p1[1]) / 3.0,
            (vbar[2] - star.p1[2]) / 3.0,
        )
        nu = self.n_upper_tris
        nl = self.n_lower_tris
        # sum of (c.c - cbar.cbar) with cbar = c + delta
        sq_change = -(
            2.0 * (dot(d2, self.upper_centroid_sum) + dot(d1, self.lower_centroid_sum))
            + nu * dot(d2, d2) + nl * dot(d1, d1)
        )
        # sum of (cbar - c), dotted with the atom-center sum
        shift = (
            nu * d2[0] + nl * d1[0],
            nu * d2[1] + nl * d1[1],
            nu * d2[2] + nl * d1[2],
        )
        return abs(self.m * sq_change + 2.0 * dot(shift, self.atom_sum))


def f_ac(star: EdgeStar, vbar, atom_positions) -> float:
    """Cumulative change in squared centroid-to-atom distances.

    ``atom_positions`` is an (m, 3) array of the atom centers within the
    capture radius of either endpoint (the caller fetches them, normally
    from the spatial grid). Uses the expanded form, linear in the atom
    count; the quadratic direct form is kept in the test suite as its
    oracle.
    """
    return _AtomTermEvaluator(star, atom_positions)(tuple(vbar))


def f_gb(
    star: EdgeStar,
    vbar,
    atom_positions,
    params: GbCostParams,
    q1: Optional[Quadric] = None,
    q2: Optional[Quadric] = None,
) -> float:
    """Atom-aware collapse cost: first term plus lam * f_ac."""
    if params.variant == "qe_term":
        if q1 is None or q2 is None:
            raise ValueError("qe_term variant needs both endpoint quadrics")
        first = f_qe(q1, q2, vbar)
    else:
        first = dist(star.p1, star.p2)
    if params.lam == 0.0:
        return first
    return first + params.lam * f_ac(star, vbar, atom_positions)


def _gb_evaluator(star, atom_positions, params, q1, q2):
    """Per-edge closure for f_gb with the atom term precomputed."""
    if atom_positions is None:
        atom_positions = np.empty((0, 3))
    atom_term = _AtomTermEvaluator(star, atom_positions)
    lam = params.lam
    if params.variant == "qe_term":
        if q1 is None or q2 is None:
            raise ValueError("qe_term variant needs both endpoint quadrics")
        q = q1 + q2
        if lam == 0.0:
            return q.evaluate
        return lambda vbar: q.evaluate(vbar) + lam * atom_term(vbar)
    edge_len = dist(star.p1, star.p2)
    if lam == 0.0:
        return lambda vbar: edge_len
    return lambda vbar: edge_len + lam * atom_term(vbar)


# --- placement policies -----------------------------------------------------


def _midpoint(p1, p2):
    return (0.5 * (p1[0] + p2[0]), 0.5 * (p1[1] + p2[1]), 0.5 * (p1[2] + p2[2]))


def placement_for(
    cost_kind: str,
    star: EdgeStar,
    q1: Optional[Quadric] = None,
    q2: Optional[Quadric] = None,
    atom_positions=None,
    params: Optional[GbCostParams] = None,
):
    """Choose the placement and cost for an edge under a given cost kind.

    qe and vol minimize their quadratic forms analytically (with the
    shared fallback chain). pb and gb evaluate the discrete candidate
    set {midpoint, v1, v2, quadric-optimal point}, dropping candidates
    that flatten a triangle; ties break toward the earlier candidate in
    that order. Raises ``CandidateInfeasible`` when no candidate
    survives.
    """
    if cost_kind not in COST_KINDS:
        raise ValueError(f"unknown cost kind {cost_kind!r}")
    p1, p2 = star.p1, star.p2

    if cost_kind == "qe":
        if q1 is None or q2 is None:
            raise ValueError("qe cost needs both endpoint quadrics")
        q = q1 + q2
        point = minimize_quadric(q, p1, p2)
        return point, q.evaluate(point)

    if cost_kind == "vol":
        vq = vol_quadric(star)
        point = minimize_quadric(vq, p1, p2)
        return point, vq.evaluate(point)

    candidates = [_midpoint(p1, p2), p1, p2]
    if q1 is not None and q2 is not None:
        candidates.append(minimize_quadric(q1 + q2, p1, p2))

    if cost_kind == "pb":
        if _kernels.HAVE_NUMBA:
            costs = _kernels.pb_candidate_costs(
                np.asarray(star.upper_pos),
                np.asarray(star.lower_pos),
                np.asarray(p1),
                np.asarray(p2),
                np.asarray(candidates),
            )
            best = None
            best_cost = math.inf
            for point, c in zip(candidates, costs.tolist()):
                if not math.isnan(c) and c < best_cost:
                    best, best_cost = point, c
            if best is None:
                raise CandidateInfeasible(
                    f"no nondegenerate placement for ({star.v1}, {star.v2})"
                )
            return best, best_cost
        try:
            evaluate = _QualityChangeEvaluator(star)
        except DegenerateTriangle as exc:
            raise CandidateInfeasible(
                f"star of ({star.v1}, {star.v2}) has a degenerate triangle"
            ) from exc
    else:  # gb / gb_qe
        if params is None:
            params = GbCostParams()
        if cost_kind == "gb_qe" and params.variant != "qe_term":
            params = GbCostParams(rho=params.rho, lam=params.lam, variant="qe_term")
        evaluate = _gb_evaluator(star, atom_positions, params, q1, q2)

    best = None
    best_cost = math.inf
    for point in candidates:
        try:
            c = evaluate(point)
        except DegenerateTriangle:
            continue
        if c < best_cost:
            best, best_cost = point, c
    if best is None:
        raise CandidateInfeasible(
            f"every placement for ({star.v1}, {star.v2}) degenerates a triangle"
        )
    return best, best_cost


def estimate_lambda(mesh, atoms, params: Optional[GbCostParams] = None,
                    n_edges=1000, seed=0) -> float:
    """Data-driven weight for the atomic-center term.

    Samples random edges, evaluates the first term and f_ac at the edge
    midpoint, and returns median(first) / median(f_ac) over the samples
    with a nonzero atom term, so the two terms land on the same order of
    magnitude. Falls back to the stock default when no sampled edge sees
    a nearby atom.
    """
    from .grid import grid_build, grid_query_edge

    if params is None:
        params = GbCostParams()
    edges = sorted(mesh.edges())
    if not edges:
        raise ValueError("mesh has no edges")
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(edges), size=min(n_edges, len(edges)), replace=False)
    grid = grid_build(atoms, cell_size=params.rho)

    firsts, acs = [], []
    for i in picks.tolist():
        a, b = edges[i]
        star = edge_star(mesh, a, b)
        mid = _midpoint(star.p1, star.p2)
        if params.variant == "qe_term":
            qa = vertex_quadric(mesh, a)
            qb = vertex_quadric(mesh, b)
            first = f_qe(qa, qb, mid)
        else:
            first = dist(star.p1, star.p2)
        ids = grid_query_edge(grid, star.p1, star.p2, params.rho)
        ac = f_ac(star, mid, grid.centers[list(ids)])
        if ac > 0.0:
            firsts.append(first)
            acs.append(ac)
    if not acs:
        return params.lam
    return statistics.median(firsts) / statistics.median(acs)
