"""Indexed, oriented, closed-manifold triangle mesh with validated edge collapse.

The mesh keeps stable ids under mutation: collapsing an edge retires the
second vertex's slot and tombstones two triangle rows, so every id handed
out before a collapse remains meaningful afterwards. Retired slots are
compacted only on export (see :mod:`decimesh.io`).

Only closed surfaces are supported: molecular interfaces have no
boundary, and rejecting open meshes at validation removes a whole class
of collapse edge cases.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .errors import (
    CollapseRejected,
    DegenerateTriangle,
    DuplicateTriangle,
    FlippedTriangleWarning,
    NonManifoldEdge,
    NotAnEdge,
    StarNotDisk,
    UnreferencedVertexWarning,
    ValidationError,
)


class TriangleMesh:
    """Triangle surface mesh with adjacency maintained under edge collapse.

    Parameters
    ----------
    vertices : array_like, shape (n, 3)
        Vertex coordinates in Angstroms; must be finite.
    triangles : array_like, shape (m, 3)
        Vertex-index triples with consistent counter-clockwise
        orientation (outward normals for a closed surface).

    Construction performs only cheap structural checks (shapes, index
    range, finiteness). Manifoldness, orientation consistency and
    duplicate detection are the job of :func:`validate`, so that tests
    and error paths can build deliberately broken meshes.
    """

    def __init__(self, vertices, triangles):
        verts = np.array(vertices, dtype=np.float64)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise ValidationError(f"vertices must be (n, 3), got {verts.shape}")
        if not np.isfinite(verts).all():
            raise ValidationError("vertex coordinates must be finite")
        tris = np.array(triangles, dtype=np.int64)
        if tris.size == 0:
            tris = tris.reshape(0, 3)
        if tris.ndim != 2 or tris.shape[1] != 3:
            raise ValidationError(f"triangles must be (m, 3), got {tris.shape}")
        if tris.size and (tris.min() < 0 or tris.max() >= len(verts)):
            raise ValidationError("triangle index out of range")

        self.vertices = verts
        self.triangles = tris
        self._vertex_alive = np.ones(len(verts), dtype=bool)
        self._tri_alive = np.ones(len(tris), dtype=bool)
        self._n_vertices = len(verts)
        self._n_faces = len(tris)
        self._vertex_tris = [set() for _ in range(len(verts))]
        for t, row in enumerate(tris):
            for v in row.tolist():
                self._vertex_tris[v].add(t)
        # triangle-row tuples are read far more often than rows change;
        # entries are dropped whenever a collapse rewrites the row
        self._row_cache = {}

    # -- basic queries -------------------------------------------------

    @property
    def n_vertices(self):
        """Number of live (non-retired) vertices."""
        return self._n_vertices

    @property
    def n_faces(self):
        """Number of live triangles."""
        return self._n_faces

    def vertex_alive(self, v):
        return bool(self._vertex_alive[v])

    def triangle_alive(self, t):
        return bool(self._tri_alive[t])

    def position(self, v):
        """Position of vertex ``v`` as a plain float tuple."""
        x, y, z = self.vertices[v].tolist()
        return (x, y, z)

    def triangle(self, t):
        """Vertex ids of triangle ``t`` as a plain int tuple."""
        row = self._row_cache.get(t)
        if row is None:
            a, b, c = self.triangles[t].tolist()
            row = (a, b, c)
            self._row_cache[t] = row
        return row

    def triangle_positions(self, t):
        a, b, c = self.triangle(t)
        verts = self.vertices
        return (
            tuple(verts[a].tolist()),
            tuple(verts[b].tolist()),
            tuple(verts[c].tolist()),
        )

    def live_triangles(self):
        """Live triangle rows as an iterator of int tuples."""
        alive = self._tri_alive
        for t in range(len(self.triangles)):
            if alive[t]:
                yield self.triangle(t)

    def live_triangle_ids(self):
        return np.flatnonzero(self._tri_alive)

    def live_triangle_array(self):
        """Live triangle rows as an (F, 3) integer array."""
        return self.triangles[self._tri_alive]

    def live_vertex_ids(self):
        return np.flatnonzero(self._vertex_alive)

    def incident_triangles(self, v):
        """Set of live triangle ids touching vertex ``v`` (do not mutate)."""
        return self._vertex_tris[v]

    def vertex_neighbors(self, v):
        """Set of vertex ids sharing an edge with ``v``."""
        out = set()
        triangle = self.triangle
        for t in self._vertex_tris[v]:
            out.update(triangle(t))
        out.discard(v)
        return out

    def edge_triangles(self, v1, v2):
        """Live triangle ids incident to the undirected edge (v1, v2)."""
        return sorted(self._vertex_tris[v1] & self._vertex_tris[v2])

    def is_edge(self, v1, v2):
        return bool(self._vertex_tris[v1] & self._vertex_tris[v2])

    def edges(self):
        """Iterate unique undirected edges as sorted (a, b) pairs."""
        seen = set()
        for (a, b, c) in self.live_triangles():
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                if key not in seen:
                    seen.add(key)
                    yield key

    def edge_table(self):
        """Materialize the undirected edge -> incident triangle-id map."""
        table = {}
        tris = self.triangles
        for t in np.flatnonzero(self._tri_alive).tolist():
            a, b, c = tris[t].tolist()
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                table.setdefault(key, []).append(t)
        return table

    def enclosed_volume(self):
        """Signed volume by the divergence theorem; positive for outward CCW."""
        tris = self.live_triangle_array()
        if len(tris) == 0:
            return 0.0
        a = self.vertices[tris[:, 0]]
        b = self.vertices[tris[:, 1]]
        c = self.vertices[tris[:, 2]]
        return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)

    def copy(self):
        out = TriangleMesh.__new__(TriangleMesh)
        out.vertices = self.vertices.copy()
        out.triangles = self.triangles.copy()
        out._vertex_alive = self._vertex_alive.copy()
        out._tri_alive = self._tri_alive.copy()
        out._n_vertices = self._n_vertices
        out._n_faces = self._n_faces
        out._vertex_tris = [set(s) for s in self._vertex_tris]
        out._row_cache = {}
        return out


@dataclass(frozen=True)
class MeshStats:
    """Counts returned by :func:`validate`."""

    n_vertices: int
    n_edges: int
    n_faces: int
    euler_characteristic: int
    is_closed_manifold: bool


def validate(mesh: TriangleMesh) -> MeshStats:
    """Check all structural invariants and return mesh counts.

    Raises
    ------
    DegenerateTriangle
        A triangle repeats a vertex index.
    DuplicateTriangle
        Two triangles share the same vertex set.
    NonManifoldEdge
        An edge is not incident to exactly two triangles (covers open
        boundaries as well as fans of three or more).
    ValidationError
        Orientation inconsistency (an edge traversed twice in the same
        direction) or a reference to a retired vertex.

    An unreferenced live vertex only emits ``UnreferencedVertexWarning``.
    """
    tris = mesh.live_triangle_array()
    n_verts = mesh.n_vertices
    n_faces = len(tris)
    if n_faces == 0:
        return MeshStats(n_verts, 0, 0, n_verts, False)

    if not mesh._vertex_alive[tris].all():
        raise ValidationError("a live triangle references a retired vertex")

    same = (
        (tris[:, 0] == tris[:, 1])
        | (tris[:, 1] == tris[:, 2])
        | (tris[:, 2] == tris[:, 0])
    )
    if same.any():
        t = int(np.argmax(same))
        raise DegenerateTriangle(f"triangle {tuple(tris[t])} repeats a vertex index")

    n = len(mesh.vertices)
    c0, c1, c2 = tris[:, 0], tris[:, 1], tris[:, 2]
    tmin = np.minimum(np.minimum(c0, c1), c2)
    tmax = np.maximum(np.maximum(c0, c1), c2)
    tmid = c0 + c1 + c2 - tmin - tmax
    keys = (tmin * n + tmid) * n + tmax
    uniq, counts = np.unique(keys, return_counts=True)
    if (counts > 1).any():
        k = int(uniq[np.argmax(counts > 1)])
        raise DuplicateTriangle((k // (n * n), (k // n) % n, k % n))

    directed = np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]])
    dir_keys = directed[:, 0] * n + directed[:, 1]
    lo = np.minimum(directed[:, 0], directed[:, 1])
    hi = np.maximum(directed[:, 0], directed[:, 1])
    und_keys = lo * n + hi

    und_uniq, und_counts = np.unique(und_keys, return_counts=True)
    bad = und_counts != 2
    if bad.any():
        k = int(und_uniq[np.argmax(bad)])
        raise NonManifoldEdge((k // n, k % n), int(und_counts[np.argmax(bad)]))

    dir_uniq, dir_counts = np.unique(dir_keys, return_counts=True)
    if (dir_counts > 1).any():
        k = int(dir_uniq[np.argmax(dir_counts > 1)])
        raise ValidationError(
            f"inconsistent orientation: edge ({k // n}, {k % n}) "
            "traversed twice in the same direction"
        )

    referenced = np.zeros(n, dtype=bool)
    referenced[tris] = True
    unref = np.flatnonzero(mesh._vertex_alive & ~referenced)
    if len(unref):
        warnings.warn(
            f"{len(unref)} live vertex(es) not referenced by any triangle: "
            f"{unref[:8].tolist()}",
            UnreferencedVertexWarning,
            stacklevel=2,
        )

    n_edges = len(und_uniq)
    chi = n_verts - n_edges + n_faces
    return MeshStats(n_verts, n_edges, n_faces, chi, True)


@dataclass(frozen=True)
class EdgeStar:
    """The labeled neighborhood of edge (v1, v2).

    ``upper`` walks the neighbors of v2 from the left wing to the right
    wing; ``lower`` does the same around v1. Both paths include the wing
    vertices as their first and last entries, so ``upper[1:-1]`` are the
    interior upper-ring vertices. ``upper_tris[i]`` is the mesh triangle
    with vertex set {v2, upper[i], upper[i+1]}; analogously for
    ``lower_tris`` around v1. ``wing_tris`` are the two triangles on the
    edge itself (left first).

    Positions are snapshotted so cost functions are pure: re-evaluating a
    star after the mesh moved gives the original answer.
    """

    v1: int
    v2: int
    vL: int
    vR: int
    upper: tuple
    lower: tuple
    upper_tris: tuple
    lower_tris: tuple
    wing_tris: tuple
    p1: tuple
    p2: tuple
    upper_pos: tuple
    lower_pos: tuple

    @property
    def n_upper(self):
        """U: number of interior upper-ring vertices."""
        return len(self.upper) - 2

    @property
    def n_lower(self):
        """D: number of interior lower-ring vertices."""
        return len(self.lower) - 2

    def ring_triangle_ids(self):
        """Ids of the non-adjacent star triangles (upper first)."""
        return self.upper_tris + self.lower_tris

    def ring_triangles_before(self):
        """Non-adjacent triangles as (apex, ring_i, ring_i+1) position triples."""
        out = []
        for i in range(len(self.upper) - 1):
            out.append((self.p2, self.upper_pos[i], self.upper_pos[i + 1]))
        for i in range(len(self.lower) - 1):
            out.append((self.p1, self.lower_pos[i], self.lower_pos[i + 1]))
        return out

    def ring_triangles_after(self, vbar):
        """Same triangles with the apex moved to the placement ``vbar``."""
        vbar = tuple(vbar)
        out = []
        for i in range(len(self.upper) - 1):
            out.append((vbar, self.upper_pos[i], self.upper_pos[i + 1]))
        for i in range(len(self.lower) - 1):
            out.append((vbar, self.lower_pos[i], self.lower_pos[i + 1]))
        return out

    def centroids_before(self):
        """Centers of the non-adjacent triangles, upper ring then lower."""
        return [geometry.centroid(*t) for t in self.ring_triangles_before()]

    def centroids_after(self, vbar):
        return [geometry.centroid(*t) for t in self.ring_triangles_after(vbar)]

    def all_triangles_before(self):
        """Every triangle incident to v1 or v2, wings included."""
        out = self.ring_triangles_before()
        out.append((self.p1, self.p2, self.upper_pos[0]))
        out.append((self.p2, self.p1, self.lower_pos[-1]))
        return out


def _umbrella_successors(mesh, center):
    """CCW successor map around ``center``: triangle (center, a, b) -> a: b."""
    succ = {}
    for t in mesh._vertex_tris[center]:
        a, b, c = mesh.triangle(t)
        if a == center:
            u, w = b, c
        elif b == center:
            u, w = c, a
        else:
            u, w = a, b
        if u in succ:
            raise StarNotDisk(f"vertex {center} has a non-disk umbrella")
        succ[u] = (w, t)
    return succ


def _walk(succ, start, stop, center):
    """Follow successor pointers from start to stop, collecting (vertex, tri)."""
    path = [start]
    tris = []
    cur = start
    for _ in range(len(succ) + 1):
        if cur not in succ:
            raise StarNotDisk(f"umbrella walk around {center} broke at {cur}")
        cur, t = succ[cur]
        path.append(cur)
        tris.append(t)
        if cur == stop:
            return path, tris
    raise StarNotDisk(f"umbrella walk around {center} did not close")


def edge_star(mesh: TriangleMesh, v1, v2) -> EdgeStar:
    """Build the labeled edge neighborhood used by the cost functions.

    Raises ``NotAnEdge`` when (v1, v2) is not a mesh edge and
    ``StarNotDisk`` when the local umbrella walk fails (non-manifold
    neighborhood).
    """
    shared = mesh.edge_triangles(v1, v2)
    if len(shared) == 0:
        raise NotAnEdge(v1, v2)
    if len(shared) != 2:
        raise StarNotDisk(f"edge ({v1}, {v2}) has {len(shared)} incident triangles")

    left = right = None
    for t in shared:
        a, b, c = mesh.triangle(t)
        # the triangle containing directed edge v1->v2 holds the left wing
        if (a, b) == (v1, v2) or (b, c) == (v1, v2) or (c, a) == (v1, v2):
            left = t
        else:
            right = t
    if left is None or right is None:
        raise StarNotDisk(f"edge ({v1}, {v2}) is traversed inconsistently")

    vL = next(v for v in mesh.triangle(left) if v != v1 and v != v2)
    vR = next(v for v in mesh.triangle(right) if v != v1 and v != v2)
    if vL == vR:
        raise StarNotDisk(f"edge ({v1}, {v2}) has coincident wing vertices")

    # around v2 the CCW order runs v1 -> vR -> (upper vertices) -> vL,
    # so the left-to-right upper path vL..vR is the reverse of that walk
    succ2 = _umbrella_successors(mesh, v2)
    path2, tris2 = _walk(succ2, vR, vL, v2)
    upper = tuple(reversed(path2))
    upper_tris = tuple(reversed(tris2))

    # around v1 the CCW order runs vL -> (lower vertices) -> vR -> v2
    succ1 = _umbrella_successors(mesh, v1)
    path1, tris1 = _walk(succ1, vL, vR, v1)
    lower = tuple(path1)
    lower_tris = tuple(tris1)

    star_tris = set(upper_tris) | set(lower_tris) | {left, right}
    incident = mesh._vertex_tris[v1] | mesh._vertex_tris[v2]
    if star_tris != incident:
        raise StarNotDisk(
            f"star of ({v1}, {v2}) does not cover the incident triangle set"
        )

    ids = [v1, v2]
    ids.extend(upper)
    ids.extend(lower)
    coords = mesh.vertices[ids].tolist()
    pos = [tuple(p) for p in coords]
    n_up = len(upper)
    return EdgeStar(
        v1=v1,
        v2=v2,
        vL=vL,
        vR=vR,
        upper=upper,
        lower=lower,
        upper_tris=upper_tris,
        lower_tris=lower_tris,
        wing_tris=(left, right),
        p1=pos[0],
        p2=pos[1],
        upper_pos=tuple(pos[2:2 + n_up]),
        lower_pos=tuple(pos[2 + n_up:]),
    )


@dataclass(frozen=True)
class CollapseCheck:
    ok: bool
    reason: str | None = None

    def __bool__(self):
        return self.ok


def can_collapse(mesh: TriangleMesh, v1, v2) -> CollapseCheck:
    """Decide whether collapsing (v1, v2) keeps the mesh a closed manifold.

    Checks, in order: the pair is an edge; the result keeps at least 4
    vertices; no rewritten triangle duplicates an existing one; the link
    condition (the common neighbors of v1 and v2 are exactly the two
    wing vertices). Returns a reasoned boolean instead of raising so the
    decimation loop can count rejection causes.
    """
    shared = mesh._vertex_tris[v1] & mesh._vertex_tris[v2]
    if len(shared) == 0:
        return CollapseCheck(False, "not_an_edge")
    if len(shared) != 2:
        return CollapseCheck(False, "non_manifold_edge")
    if mesh.n_vertices - 1 < 4:
        return CollapseCheck(False, "too_few_vertices")

    survivors_v2 = mesh._vertex_tris[v2] - shared
    existing = set()
    for t in mesh._vertex_tris[v1] - shared:
        existing.add(frozenset(mesh.triangle(t)))
    for t in survivors_v2:
        rewritten = frozenset(v1 if v == v2 else v for v in mesh.triangle(t))
        if len(rewritten) < 3 or rewritten in existing:
            return CollapseCheck(False, "duplicate_triangle")
        existing.add(rewritten)

    wings = set()
    for t in shared:
        for v in mesh.triangle(t):
            if v != v1 and v != v2:
                wings.add(v)
    common = mesh.vertex_neighbors(v1) & mesh.vertex_neighbors(v2)
    if common != wings:
        return CollapseCheck(False, "link_condition")
    return CollapseCheck(True, None)


@dataclass(frozen=True)
class CollapseRecord:
    """What an applied collapse changed, for caches and tracing."""

    v1: int
    v2: int
    placement: tuple
    removed_triangles: tuple
    rewritten_triangles: tuple
    flipped_triangles: tuple


def _changed_normal_flips(mesh, v1, v2, vbar, changed):
    """Triangle ids among ``changed`` whose normal reverses when both
    endpoints move to vbar; pairs of (strictly flipped, degenerate-or-flipped)."""
    flipped = []
    nonpos = []
    verts = mesh.vertices
    for t in changed:
        ids = mesh.triangle(t)
        before = [tuple(verts[i].tolist()) for i in ids]
        after = [vbar if i in (v1, v2) else p for i, p in zip(ids, before)]
        nb = geometry.cross(
            geometry.sub(before[1], before[0]), geometry.sub(before[2], before[0])
        )
        na = geometry.cross(
            geometry.sub(after[1], after[0]), geometry.sub(after[2], after[0])
        )
        d = geometry.dot(nb, na)
        if d < 0.0:
            flipped.append(t)
            nonpos.append(t)
        elif d == 0.0:
            nonpos.append(t)
    return flipped, nonpos


def would_flip(mesh: TriangleMesh, v1, v2, vbar) -> bool:
    """True if moving v1 and v2 to vbar reverses or degenerates any
    surviving ring triangle's normal."""
    shared = mesh._vertex_tris[v1] & mesh._vertex_tris[v2]
    changed = (mesh._vertex_tris[v1] | mesh._vertex_tris[v2]) - shared
    _, nonpos = _changed_normal_flips(mesh, v1, v2, tuple(vbar), changed)
    return bool(nonpos)


def _apply_collapse(mesh, v1, v2, vbar, flipped) -> CollapseRecord:
    """Bookkeeping of a collapse whose legality was already established."""
    shared = mesh._vertex_tris[v1] & mesh._vertex_tris[v2]
    tris = mesh.triangles
    row_cache = mesh._row_cache
    rewritten = sorted(mesh._vertex_tris[v2] - shared)
    for t in rewritten:
        row = tris[t]
        for k in range(3):
            if row[k] == v2:
                row[k] = v1
        row_cache.pop(t, None)
        mesh._vertex_tris[v1].add(t)

    removed = sorted(shared)
    for t in removed:
        for v in mesh.triangle(t):
            mesh._vertex_tris[v].discard(t)
        tris[t] = -1
        row_cache.pop(t, None)
        mesh._tri_alive[t] = False
    # rewritten rows already replaced v2, so clear what remains
    mesh._vertex_tris[v2].clear()
    mesh._vertex_alive[v2] = False
    mesh._n_vertices -= 1
    mesh._n_faces -= 2
    mesh.vertices[v1] = vbar

    return CollapseRecord(
        v1=v1,
        v2=v2,
        placement=vbar,
        removed_triangles=tuple(removed),
        rewritten_triangles=tuple(rewritten),
        flipped_triangles=tuple(sorted(flipped)),
    )


def collapse_edge(mesh: TriangleMesh, v1, v2, vbar, warn_on_flip=True) -> CollapseRecord:
    """Collapse edge (v1, v2), moving the surviving vertex v1 to ``vbar``.

    Drops two triangles and one vertex (v2's slot is retired), rewrites
    every surviving triangle of v2 to reference v1, and leaves all other
    ids untouched. Raises ``CollapseRejected`` if :func:`can_collapse`
    fails. A ring triangle whose normal reverses is recorded in the
    returned record (and warned about) but does not block the collapse;
    vetoing flips is the decimation driver's policy decision.
    """
    check = can_collapse(mesh, v1, v2)
    if not check.ok:
        raise CollapseRejected(f"cannot collapse ({v1}, {v2}): {check.reason}")

    vbar = (float(vbar[0]), float(vbar[1]), float(vbar[2]))
    if not all(math.isfinite(c) for c in vbar):
        raise CollapseRejected("placement must be finite")

    shared = mesh._vertex_tris[v1] & mesh._vertex_tris[v2]
    changed = (mesh._vertex_tris[v1] | mesh._vertex_tris[v2]) - shared
    flipped, _ = _changed_normal_flips(mesh, v1, v2, vbar, changed)
    record = _apply_collapse(mesh, v1, v2, vbar, flipped)
    if flipped and warn_on_flip:
        warnings.warn(
            f"collapse ({v1}, {v2}) reversed normals of triangles {record.flipped_triangles}",
            FlippedTriangleWarning,
            stacklevel=2,
        )
    return record


def triangle_metrics(mesh: TriangleMesh, t) -> geometry.TriangleMetrics:
    """Geometric metrics of triangle ``t``; DegenerateTriangle if flat."""
    a, b, c = mesh.triangle(t)
    if a == b or b == c or c == a:
        raise DegenerateTriangle(f"triangle {t} repeats a vertex index")
    pa, pb, pc = mesh.triangle_positions(t)
    return geometry.triangle_metrics(pa, pb, pc)


@dataclass(frozen=True)
class QualitySummary:
    """Whole-mesh triangle quality statistics."""

    n_faces: int
    min_quality: float
    mean_quality: float
    well_centered_fraction: float
    histogram: dict = field(default_factory=dict)
    n_degenerate: int = 0


_HIST_EDGES = (2.0, 2.5, 3.0, 4.0, 6.0, 10.0, math.inf)


def quality_summary(mesh: TriangleMesh) -> QualitySummary:
    """Vectorized quality survey of all live triangles.

    Degenerate triangles (area at or below tolerance) are excluded from
    the statistics and reported in ``n_degenerate``.
    """
    tris = mesh.live_triangle_array()
    if len(tris) == 0:
        return QualitySummary(0, math.nan, math.nan, math.nan)
    a = mesh.vertices[tris[:, 0]]
    b = mesh.vertices[tris[:, 1]]
    c = mesh.vertices[tris[:, 2]]
    la = np.linalg.norm(b - c, axis=1)
    lb = np.linalg.norm(c - a, axis=1)
    lc = np.linalg.norm(a - b, axis=1)
    area2 = np.linalg.norm(np.cross(b - a, c - a), axis=1)
    good = area2 > 2.0 * geometry.EPS_AREA
    n_degen = int((~good).sum())
    la, lb, lc = la[good], lb[good], lc[good]
    sides = np.stack([la, lb, lc], axis=1)
    lmin = sides.min(axis=1)
    lmax = sides.max(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ca = np.clip((lb**2 + lc**2 - la**2) / (2 * lb * lc), -1.0, 1.0)
        cb = np.clip((lc**2 + la**2 - lb**2) / (2 * lc * la), -1.0, 1.0)
        cc = np.clip((la**2 + lb**2 - lc**2) / (2 * la * lb), -1.0, 1.0)
    ang = np.arccos(np.stack([ca, cb, cc], axis=1))
    q = lmax / lmin + ang.max(axis=1) / ang.min(axis=1)

    la2, lb2, lc2 = la**2, lb**2, lc**2
    wc = (la2 + lb2 > lc2) & (lb2 + lc2 > la2) & (lc2 + la2 > lb2)

    hist = {}
    lo = _HIST_EDGES[0]
    for hi in _HIST_EDGES[1:]:
        label = f"[{lo:g}, {hi:g})"
        hist[label] = int(((q >= lo) & (q < hi)).sum())
        lo = hi

    return QualitySummary(
        n_faces=len(tris),
        min_quality=float(q.min()) if len(q) else math.nan,
        mean_quality=float(q.mean()) if len(q) else math.nan,
        well_centered_fraction=float(wc.mean()) if len(q) else math.nan,
        histogram=hist,
        n_degenerate=n_degen,
    )
