"""Optional numba kernels for the decimation hot loop.

Everything here has a numpy fallback in :mod:`decimesh.decimate`; these
kernels only cut per-call overhead when refreshing small candidate
batches after each collapse. No fastmath: IEEE semantics keep runs
reproducible.
"""

from __future__ import annotations

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the numpy fallback path
    numba = None
    HAVE_NUMBA = False


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def quadric_rows(a, b, c, owners, slots, n_owned, area_weight, eps):
        """Packed plane-sum quadrics for a group of vertices.

        a, b, c: (T, 3) corner positions of the triangles involved.
        owners/slots: flat CSR-ish pairs mapping output row -> triangle
        slot; n_owned: number of output rows. Degenerate triangles
        contribute nothing.
        """
        t_count = a.shape[0]
        packed = np.zeros((t_count, 10))
        for t in range(t_count):
            e1x = b[t, 0] - a[t, 0]
            e1y = b[t, 1] - a[t, 1]
            e1z = b[t, 2] - a[t, 2]
            e2x = c[t, 0] - a[t, 0]
            e2y = c[t, 1] - a[t, 1]
            e2z = c[t, 2] - a[t, 2]
            nx = e1y * e2z - e1z * e2y
            ny = e1z * e2x - e1x * e2z
            nz = e1x * e2y - e1y * e2x
            m = np.sqrt(nx * nx + ny * ny + nz * nz)
            if m <= eps:
                continue
            px = nx / m
            py = ny / m
            pz = nz / m
            pd = -(px * a[t, 0] + py * a[t, 1] + pz * a[t, 2])
            w = 0.5 * m if area_weight else 1.0
            packed[t, 0] = w * px * px
            packed[t, 1] = w * px * py
            packed[t, 2] = w * px * pz
            packed[t, 3] = w * px * pd
            packed[t, 4] = w * py * py
            packed[t, 5] = w * py * pz
            packed[t, 6] = w * py * pd
            packed[t, 7] = w * pz * pz
            packed[t, 8] = w * pz * pd
            packed[t, 9] = w * pd * pd
        out = np.zeros((n_owned, 10))
        for i in range(owners.shape[0]):
            o = owners[i]
            s = slots[i]
            for k in range(10):
                out[o, k] += packed[s, k]
        return out

    @numba.njit(cache=True)
    def batch_candidates(q, pa, pb, det_guard):
        """Guarded 3x3 solve plus discrete argmin for a batch of edges.

        Mirrors the scalar fallback chain: analytic solve when the
        determinant passes the scale-aware guard, else the segment
        minimizer, else nothing; the returned point is the cheapest of
        {midpoint, p1, p2, analytic} with ties to the earlier one.
        """
        n = q.shape[0]
        points = np.empty((n, 3))
        costs = np.empty(n)
        cand = np.empty((4, 3))
        for i in range(n):
            xx = q[i, 0]; xy = q[i, 1]; xz = q[i, 2]; xw = q[i, 3]
            yy = q[i, 4]; yz = q[i, 5]; yw = q[i, 6]
            zz = q[i, 7]; zw = q[i, 8]; ww = q[i, 9]
            det = (
                xx * (yy * zz - yz * yz)
                - xy * (xy * zz - yz * xz)
                + xz * (xy * yz - yy * xz)
            )
            r1 = np.sqrt(xx * xx + xy * xy + xz * xz)
            r2 = np.sqrt(xy * xy + yy * yy + yz * yz)
            r3 = np.sqrt(xz * xz + yz * yz + zz * zz)
            scale = (r1 + r2 + r3) / 3.0

            n_cand = 3
            cand[0, 0] = 0.5 * (pa[i, 0] + pb[i, 0])
            cand[0, 1] = 0.5 * (pa[i, 1] + pb[i, 1])
            cand[0, 2] = 0.5 * (pa[i, 2] + pb[i, 2])
            cand[1, 0] = pa[i, 0]; cand[1, 1] = pa[i, 1]; cand[1, 2] = pa[i, 2]
            cand[2, 0] = pb[i, 0]; cand[2, 1] = pb[i, 1]; cand[2, 2] = pb[i, 2]
            if abs(det) > det_guard * scale * scale * scale:
                inv = 1.0 / det
                cand[3, 0] = -inv * (
                    xw * (yy * zz - yz * yz)
                    - xy * (yw * zz - yz * zw)
                    + xz * (yw * yz - yy * zw)
                )
                cand[3, 1] = -inv * (
                    xx * (yw * zz - yz * zw)
                    - xw * (xy * zz - xz * yz)
                    + xz * (xy * zw - yw * xz)
                )
                cand[3, 2] = -inv * (
                    xx * (yy * zw - yw * yz)
                    - xy * (xy * zw - yw * xz)
                    + xw * (xy * yz - yy * xz)
                )
                n_cand = 4
            else:
                dx = pb[i, 0] - pa[i, 0]
                dy = pb[i, 1] - pa[i, 1]
                dz = pb[i, 2] - pa[i, 2]
                adx = xx * dx + xy * dy + xz * dz
                ady = xy * dx + yy * dy + yz * dz
                adz = xz * dx + yz * dy + zz * dz
                curv = dx * adx + dy * ady + dz * adz
                d2 = dx * dx + dy * dy + dz * dz
                if curv > det_guard * scale * d2 and curv > 0.0:
                    apx = xx * pa[i, 0] + xy * pa[i, 1] + xz * pa[i, 2] + xw
                    apy = xy * pa[i, 0] + yy * pa[i, 1] + yz * pa[i, 2] + yw
                    apz = xz * pa[i, 0] + yz * pa[i, 1] + zz * pa[i, 2] + zw
                    t = -(dx * apx + dy * apy + dz * apz) / curv
                    if t < 0.0:
                        t = 0.0
                    elif t > 1.0:
                        t = 1.0
                    cand[3, 0] = pa[i, 0] + t * dx
                    cand[3, 1] = pa[i, 1] + t * dy
                    cand[3, 2] = pa[i, 2] + t * dz
                    n_cand = 4

            best = 0
            best_cost = np.inf
            for k in range(n_cand):
                x = cand[k, 0]; y = cand[k, 1]; z = cand[k, 2]
                ck = (
                    xx * x * x + yy * y * y + zz * z * z + ww
                    + 2.0 * (xy * x * y + xz * x * z + yz * y * z
                             + xw * x + yw * y + zw * z)
                )
                if ck < best_cost:
                    best = k
                    best_cost = ck
            points[i, 0] = cand[best, 0]
            points[i, 1] = cand[best, 1]
            points[i, 2] = cand[best, 2]
            costs[i] = best_cost
        return points, costs

    @numba.njit(cache=True)
    def _tri_quality(ax, ay, az, bx, by, bz, cx, cy, cz):
        """Side-ratio-plus-angle-ratio quality; NaN for degenerate input.

        Must mirror geometry.triangle_quality (minus the exceptions)."""
        ux = bx - cx; uy = by - cy; uz = bz - cz
        vx = cx - ax; vy = cy - ay; vz = cz - az
        wx = ax - bx; wy = ay - by; wz = az - bz
        la2 = ux * ux + uy * uy + uz * uz
        lb2 = vx * vx + vy * vy + vz * vz
        lc2 = wx * wx + wy * wy + wz * wz
        lmin2 = min(la2, lb2, lc2)
        lmax2 = max(la2, lb2, lc2)
        if lmin2 <= 0.0:
            return np.nan
        ca = (lb2 + lc2 - la2) / (2.0 * np.sqrt(lb2 * lc2))
        cb = (lc2 + la2 - lb2) / (2.0 * np.sqrt(lc2 * la2))
        cc = (la2 + lb2 - lc2) / (2.0 * np.sqrt(la2 * lb2))
        ca = 1.0 if ca > 1.0 else (-1.0 if ca < -1.0 else ca)
        cb = 1.0 if cb > 1.0 else (-1.0 if cb < -1.0 else cb)
        cc = 1.0 if cc > 1.0 else (-1.0 if cc < -1.0 else cc)
        aa = np.arccos(ca)
        ab = np.arccos(cb)
        ac = np.arccos(cc)
        amin = min(aa, ab, ac)
        amax = max(aa, ab, ac)
        if amin <= 0.0:
            return np.nan
        return np.sqrt(lmax2 / lmin2) + amax / amin

    @numba.njit(cache=True)
    def pb_candidate_costs(upper, lower, p1, p2, cands):
        """Quality-change cost of each candidate placement for one edge.

        upper/lower are the ring paths (wing-to-wing positions); the
        cost of a candidate is NaN when it flattens a surviving
        triangle, and everything is NaN when a before-triangle is
        already degenerate. Placements equal to an endpoint skip the
        unchanged ring (those terms are exactly zero).
        """
        n_up = upper.shape[0] - 1
        n_lo = lower.shape[0] - 1
        k = cands.shape[0]
        out = np.empty(k)
        before_up = np.empty(n_up)
        before_lo = np.empty(n_lo)
        for i in range(n_up):
            q = _tri_quality(
                p2[0], p2[1], p2[2],
                upper[i, 0], upper[i, 1], upper[i, 2],
                upper[i + 1, 0], upper[i + 1, 1], upper[i + 1, 2],
            )
            if np.isnan(q):
                out[:] = np.nan
                return out
            before_up[i] = q
        for i in range(n_lo):
            q = _tri_quality(
                p1[0], p1[1], p1[2],
                lower[i, 0], lower[i, 1], lower[i, 2],
                lower[i + 1, 0], lower[i + 1, 1], lower[i + 1, 2],
            )
            if np.isnan(q):
                out[:] = np.nan
                return out
            before_lo[i] = q

        for c in range(k):
            vx, vy, vz = cands[c, 0], cands[c, 1], cands[c, 2]
            total = 0.0
            if not (vx == p2[0] and vy == p2[1] and vz == p2[2]):
                for i in range(n_up):
                    q = _tri_quality(
                        vx, vy, vz,
                        upper[i, 0], upper[i, 1], upper[i, 2],
                        upper[i + 1, 0], upper[i + 1, 1], upper[i + 1, 2],
                    )
                    if np.isnan(q):
                        total = np.nan
                        break
                    total += q - before_up[i]
            if not np.isnan(total) and not (
                vx == p1[0] and vy == p1[1] and vz == p1[2]
            ):
                for i in range(n_lo):
                    q = _tri_quality(
                        vx, vy, vz,
                        lower[i, 0], lower[i, 1], lower[i, 2],
                        lower[i + 1, 0], lower[i + 1, 1], lower[i + 1, 2],
                    )
                    if np.isnan(q):
                        total = np.nan
                        break
                    total += q - before_lo[i]
            out[c] = total
        return out

    def warmup():
        """Trigger JIT compilation with a tiny workload."""
        a = np.zeros((1, 3))
        b = np.array([[1.0, 0.0, 0.0]])
        c = np.array([[0.0, 1.0, 0.0]])
        quadric_rows(a, b, c, np.zeros(1, np.int64), np.zeros(1, np.int64),
                     1, False, 2e-12)
        batch_candidates(np.eye(1, 10), a, b, 1e-12)
        ring = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        pb_candidate_costs(
            ring, ring, np.array([0.0, 0.0, -1.0]), np.array([0.0, 0.0, 1.0]),
            np.zeros((1, 3)),
        )

else:
    quadric_rows = None
    batch_candidates = None
    pb_candidate_costs = None

    def warmup():
        pass
