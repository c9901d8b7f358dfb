"""Triangle meshes of the deformed surface: curvature probes and self-contact.

The discrete Gauss curvature is the angle defect over the mixed Voronoi
area; the discrete mean curvature is the norm of the cotangent Laplacian of
the positions over the same area.  Self-contact queries measure the minimum
distance between surface patches that are far apart along the ribbon (the
coil-to-coil gap), with a KD-tree broad phase and an exact
triangle-to-triangle narrow phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

__all__ = ["TriangleMesh", "ContactReport", "discrete_curvatures", "edge_contact"]


@dataclass(frozen=True)
class TriangleMesh:
    """Immutable triangle mesh with per-vertex material parameters.

    ``params`` holds the (s, t) material coordinates of each vertex.
    ``fold_arclength`` is the shortest material distance over which the
    surface normal can rotate by a half turn (pi over the largest principal
    curvature; None for flat states).  Patches closer than that on the
    undeformed ribbon cannot have folded back onto each other, so contact
    queries use it to separate neighbouring material from genuine
    coil-to-coil proximity.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    params: np.ndarray
    grid_shape: tuple | None = None
    fold_arclength: float | None = None

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        t = np.asarray(self.triangles)
        p = np.asarray(self.params, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError("vertices must have shape (n, 3)")
        if t.ndim != 2 or t.shape[1] != 3:
            raise ValueError("triangles must have shape (m, 3)")
        if p.shape != (v.shape[0], 2):
            raise ValueError("params must have shape (n, 2)")
        if t.size and (t.min() < 0 or t.max() >= v.shape[0]):
            raise ValueError("triangle indices out of range")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", np.ascontiguousarray(t, dtype=np.int64))
        object.__setattr__(self, "params", p)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    def triangle_areas(self) -> np.ndarray:
        a = self.vertices[self.triangles[:, 0]]
        b = self.vertices[self.triangles[:, 1]]
        c = self.vertices[self.triangles[:, 2]]
        return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


@dataclass(frozen=True)
class ContactReport:
    min_gap: float
    touching: bool


def _corner_angles(p0, p1, p2):
    """Angles of the triangle (p0, p1, p2) at each corner, via atan2."""
    def ang(a, b, c):
        u = b - a
        v = c - a
        return math.atan2(np.linalg.norm(np.cross(u, v)), float(u @ v))

    return ang(p0, p1, p2), ang(p1, p2, p0), ang(p2, p0, p1)


def discrete_curvatures(mesh: TriangleMesh, at):
    """Discrete Gauss and mean curvature at interior vertices.

    ``at`` is a vertex index or an array of indices; returns (K, H) as
    floats or arrays.  Gauss curvature is the angle defect over the mixed
    Voronoi area, mean curvature the cotangent-Laplacian norm over the same
    area (unsigned).  Boundary vertices are rejected.
    """
    idx = np.atleast_1d(np.asarray(at, dtype=int))
    scalar = np.isscalar(at) or (hasattr(at, "ndim") and getattr(at, "ndim") == 0)

    incident: dict[int, list[int]] = {i: [] for i in idx.tolist()}
    wanted = set(incident)
    for t_id, tri in enumerate(mesh.triangles):
        for v in tri:
            v = int(v)
            if v in wanted:
                incident[v].append(t_id)

    V = mesh.vertices
    K_out = np.empty(len(idx))
    H_out = np.empty(len(idx))
    for n_out, i in enumerate(idx.tolist()):
        tris = incident[i]
        if not tris:
            raise ValueError(f"vertex {i} has no incident triangles")
        # interior iff every 1-ring neighbour is shared by exactly two
        # incident triangles (closed fan)
        neighbour_count: dict[int, int] = {}
        for t_id in tris:
            for v in mesh.triangles[t_id]:
                v = int(v)
                if v != i:
                    neighbour_count[v] = neighbour_count.get(v, 0) + 1
        if any(cnt != 2 for cnt in neighbour_count.values()):
            raise ValueError(f"vertex {i} lies on the mesh boundary")

        angle_sum = 0.0
        area_mixed = 0.0
        lap = np.zeros(3)
        for t_id in tris:
            tri = [int(v) for v in mesh.triangles[t_id]]
            k = tri.index(i)
            p0 = V[tri[k]]
            p1 = V[tri[(k + 1) % 3]]
            p2 = V[tri[(k + 2) % 3]]
            a0, a1, a2 = _corner_angles(p0, p1, p2)
            angle_sum += a0
            cot1 = 1.0 / math.tan(a1)
            cot2 = 1.0 / math.tan(a2)
            lap += cot2 * (p0 - p1) + cot1 * (p0 - p2)
            area = 0.5 * np.linalg.norm(np.cross(p1 - p0, p2 - p0))
            if max(a0, a1, a2) <= 0.5 * math.pi:
                # non-obtuse: true Voronoi piece
                area_mixed += (
                    float((p0 - p1) @ (p0 - p1)) * cot2 + float((p0 - p2) @ (p0 - p2)) * cot1
                ) / 8.0
            elif a0 > 0.5 * math.pi:
                area_mixed += 0.5 * area
            else:
                area_mixed += 0.25 * area
        K_out[n_out] = (2.0 * math.pi - angle_sum) / area_mixed
        H_out[n_out] = np.linalg.norm(lap) / (4.0 * area_mixed)
    if scalar:
        return float(K_out[0]), float(H_out[0])
    return K_out, H_out


# --- exact distance primitives ------------------------------------------


def _point_triangle_distance(p, a, b, c):
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = float(ab @ ap)
    d2 = float(ac @ ap)
    if d1 <= 0.0 and d2 <= 0.0:
        return float(np.linalg.norm(ap))
    bp = p - b
    d3 = float(ab @ bp)
    d4 = float(ac @ bp)
    if d3 >= 0.0 and d4 <= d3:
        return float(np.linalg.norm(bp))
    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
        v = d1 / (d1 - d3)
        return float(np.linalg.norm(p - (a + v * ab)))
    cp = p - c
    d5 = float(ab @ cp)
    d6 = float(ac @ cp)
    if d6 >= 0.0 and d5 <= d6:
        return float(np.linalg.norm(cp))
    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
        w = d2 / (d2 - d6)
        return float(np.linalg.norm(p - (a + w * ac)))
    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0:
        w = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        return float(np.linalg.norm(p - (b + w * (c - b))))
    denom = 1.0 / (va + vb + vc)
    v = vb * denom
    w = vc * denom
    return float(np.linalg.norm(p - (a + ab * v + ac * w)))


def _segment_segment_distance(p1, q1, p2, q2):
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = float(d1 @ d1)
    e = float(d2 @ d2)
    f = float(d2 @ r)
    eps = 1e-300
    if a <= eps and e <= eps:
        return float(np.linalg.norm(r))
    if a <= eps:
        s = 0.0
        t = min(max(f / e, 0.0), 1.0)
    else:
        c = float(d1 @ r)
        if e <= eps:
            t = 0.0
            s = min(max(-c / a, 0.0), 1.0)
        else:
            b = float(d1 @ d2)
            denom = a * e - b * b
            s = min(max((b * f - c * e) / denom, 0.0), 1.0) if denom > 0.0 else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = min(max(-c / a, 0.0), 1.0)
            elif t > 1.0:
                t = 1.0
                s = min(max((b - c) / a, 0.0), 1.0)
    return float(np.linalg.norm((p1 + s * d1) - (p2 + t * d2)))


def _segment_pierces_triangle(p, q, a, b, c):
    n = np.cross(b - a, c - a)
    dp = float((p - a) @ n)
    dq = float((q - a) @ n)
    if dp * dq > 0.0 or dp == dq:
        return False
    u = dp / (dp - dq)
    x = p + u * (q - p)
    v0 = b - a
    v1 = c - a
    v2 = x - a
    d00 = float(v0 @ v0)
    d01 = float(v0 @ v1)
    d11 = float(v1 @ v1)
    d20 = float(v2 @ v0)
    d21 = float(v2 @ v1)
    den = d00 * d11 - d01 * d01
    if den <= 0.0:
        return False
    w1 = (d11 * d20 - d01 * d21) / den
    w2 = (d00 * d21 - d01 * d20) / den
    return w1 >= 0.0 and w2 >= 0.0 and (w1 + w2) <= 1.0


def _triangle_distance(ta, tb):
    """Exact distance between two triangles (0 if they intersect)."""
    best = math.inf
    for p in ta:
        best = min(best, _point_triangle_distance(p, tb[0], tb[1], tb[2]))
    for p in tb:
        best = min(best, _point_triangle_distance(p, ta[0], ta[1], ta[2]))
    edges_a = ((ta[0], ta[1]), (ta[1], ta[2]), (ta[2], ta[0]))
    edges_b = ((tb[0], tb[1]), (tb[1], tb[2]), (tb[2], tb[0]))
    for pa, qa in edges_a:
        for pb, qb in edges_b:
            best = min(best, _segment_segment_distance(pa, qa, pb, qb))
    if best > 0.0:
        for pa, qa in edges_a:
            if _segment_pierces_triangle(pa, qa, tb[0], tb[1], tb[2]):
                return 0.0
        for pb, qb in edges_b:
            if _segment_pierces_triangle(pb, qb, ta[0], ta[1], ta[2]):
                return 0.0
    return best


def _points_triangles_distance(p, a, b, c):
    """Distance from p[i] to triangle (a[i], b[i], c[i]), all (n, 3)."""
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = np.einsum("ij,ij->i", ab, ap)
    d2 = np.einsum("ij,ij->i", ac, ap)
    bp = p - b
    d3 = np.einsum("ij,ij->i", ab, bp)
    d4 = np.einsum("ij,ij->i", ac, bp)
    cp = p - c
    d5 = np.einsum("ij,ij->i", ab, cp)
    d6 = np.einsum("ij,ij->i", ac, cp)
    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4

    def safe(x):
        return np.where(x == 0.0, 1.0, x)

    v_ab = (d1 / safe(d1 - d3))[:, None]
    v_ac = (d2 / safe(d2 - d6))[:, None]
    v_bc = ((d4 - d3) / safe((d4 - d3) + (d5 - d6)))[:, None]
    denom = safe(va + vb + vc)
    v_in = (vb / denom)[:, None]
    w_in = (vc / denom)[:, None]

    q = a + v_in * ab + w_in * ac
    conds = [
        ((va <= 0) & ((d4 - d3) >= 0) & ((d5 - d6) >= 0), b + v_bc * (c - b)),
        ((vb <= 0) & (d2 >= 0) & (d6 <= 0), a + v_ac * ac),
        ((d6 >= 0) & (d5 <= d6), c),
        ((vc <= 0) & (d1 >= 0) & (d3 <= 0), a + v_ab * ab),
        ((d3 >= 0) & (d4 <= d3), b),
        ((d1 <= 0) & (d2 <= 0), a),
    ]
    # later assignments win, so the canonical region order gets priority
    for cond, cand in conds:
        q = np.where(cond[:, None], cand, q)
    return np.linalg.norm(p - q, axis=1)


def _segments_segments_distance(p1, q1, p2, q2):
    """Distance between segments (p1, q1)[i] and (p2, q2)[i], all (n, 3)."""
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = np.einsum("ij,ij->i", d1, d1)
    e = np.einsum("ij,ij->i", d2, d2)
    f = np.einsum("ij,ij->i", d2, r)
    c = np.einsum("ij,ij->i", d1, r)
    b = np.einsum("ij,ij->i", d1, d2)
    denom = a * e - b * b
    a_safe = np.where(a == 0.0, 1.0, a)
    e_safe = np.where(e == 0.0, 1.0, e)
    s = np.where(denom > 0.0, np.clip((b * f - c * e) / np.where(denom == 0.0, 1.0, denom), 0.0, 1.0), 0.0)
    t_raw = (b * s + f) / e_safe
    t = np.clip(t_raw, 0.0, 1.0)
    s = np.where(t_raw < 0.0, np.clip(-c / a_safe, 0.0, 1.0), s)
    s = np.where(t_raw > 1.0, np.clip((b - c) / a_safe, 0.0, 1.0), s)
    closest1 = p1 + s[:, None] * d1
    closest2 = p2 + t[:, None] * d2
    return np.linalg.norm(closest1 - closest2, axis=1)


def _triangles_distances(ta, tb):
    """Batched exact triangle-to-triangle distances for (n, 3, 3) stacks,
    ignoring interpenetration (handled separately by the piercing test)."""
    n = len(ta)
    best = np.full(n, np.inf)
    for i in range(3):
        best = np.minimum(best, _points_triangles_distance(ta[:, i], tb[:, 0], tb[:, 1], tb[:, 2]))
        best = np.minimum(best, _points_triangles_distance(tb[:, i], ta[:, 0], ta[:, 1], ta[:, 2]))
    edges = ((0, 1), (1, 2), (2, 0))
    for ia, ja in edges:
        for ib, jb in edges:
            best = np.minimum(
                best,
                _segments_segments_distance(ta[:, ia], ta[:, ja], tb[:, ib], tb[:, jb]),
            )
    return best


def _material_box_gaps(lo_a, hi_a, lo_b, hi_b):
    """Componentwise gaps between axis-aligned parameter boxes (vectorized)."""
    return np.maximum(0.0, np.maximum(lo_b - hi_a, lo_a - hi_b))


def edge_contact(mesh: TriangleMesh, clearance: float, exclude_material: float | None = None) -> ContactReport:
    """Minimum gap between surface patches of genuinely distinct coils.

    Two triangles count as distinct when their (s, t) parameter boxes are at
    least ``exclude_material`` apart on the undeformed ribbon; the default
    window is the mesh's fold arclength, below which the surface cannot have
    folded back onto itself.  For flat states (no fold possible) the gap is
    infinite.  touching is min_gap <= clearance.  The reported gap tracks
    the coil-to-coil distance whenever it is small against the fold scale;
    for widely separated coils it may saturate at the fold-scale floor of
    same-patch chords.
    """
    if clearance < 0:
        raise ValueError("clearance must be non-negative")
    window = exclude_material if exclude_material is not None else mesh.fold_arclength
    if window is None or not math.isfinite(window):
        return ContactReport(math.inf, False)

    tri = mesh.triangles
    V = mesh.vertices
    P = mesh.params
    tri_p = P[tri]
    box_lo = tri_p.min(axis=1)
    box_hi = tri_p.max(axis=1)
    diag = float(np.max(np.linalg.norm(box_hi - box_lo, axis=1))) if len(tri) else 0.0

    # upper bound from vertex pairs; padding the window by a box diagonal
    # guarantees any such pair lives on an admissible triangle pair
    strict = window + diag
    n = mesh.n_vertices
    tree = cKDTree(V)
    k = min(n, 48)
    dists, nbrs = tree.query(V, k=k)
    gap_upper = math.inf
    for i in range(n):
        allowed = np.linalg.norm(P[nbrs[i]] - P[i], axis=1) >= strict
        if np.any(allowed):
            gap_upper = min(gap_upper, float(dists[i][allowed].min()))
    if not math.isfinite(gap_upper):
        # sparse fallback: sample vertices against the full admissible set
        step = max(1, n // 400)
        for i in range(0, n, step):
            allowed = np.linalg.norm(P - P[i], axis=1) >= strict
            if np.any(allowed):
                d = np.linalg.norm(V[allowed] - V[i], axis=1).min()
                gap_upper = min(gap_upper, float(d))
    if not math.isfinite(gap_upper):
        return ContactReport(math.inf, False)

    centroids = V[tri].mean(axis=1)
    radii = np.linalg.norm(V[tri] - centroids[:, None, :], axis=2).max(axis=1)
    r_max = float(radii.max()) if len(radii) else 0.0
    ctree = cKDTree(centroids)
    pairs = ctree.query_pairs(gap_upper + 2.0 * r_max + 1e-12, output_type="ndarray")
    if len(pairs):
        a, b = pairs[:, 0], pairs[:, 1]
        gap_s = _material_box_gaps(box_lo[a, 0], box_hi[a, 0], box_lo[b, 0], box_hi[b, 0])
        gap_t = _material_box_gaps(box_lo[a, 1], box_hi[a, 1], box_lo[b, 1], box_hi[b, 1])
        pairs = pairs[np.hypot(gap_s, gap_t) >= window]
    best = gap_upper
    chunk = 200_000
    for start in range(0, len(pairs), chunk):
        part = pairs[start : start + chunk]
        a, b = part[:, 0], part[:, 1]
        cdist = np.linalg.norm(centroids[a] - centroids[b], axis=1)
        live = cdist - radii[a] - radii[b] <= best
        if not np.any(live):
            continue
        a, b, cdist = a[live], b[live], cdist[live]
        ta = V[tri[a]]
        tb = V[tri[b]]
        d = _triangles_distances(ta, tb)
        # interpenetrating pairs slip past the vertex/edge primitives; only
        # pairs with overlapping bounding spheres can intersect at all
        suspect = np.flatnonzero((d > 0.0) & (cdist <= radii[a] + radii[b]))
        for i in suspect:
            ea = ta[i]
            eb = tb[i]
            for k in range(3):
                if _segment_pierces_triangle(ea[k], ea[(k + 1) % 3], eb[0], eb[1], eb[2]) or \
                        _segment_pierces_triangle(eb[k], eb[(k + 1) % 3], ea[0], ea[1], ea[2]):
                    d[i] = 0.0
                    break
        best = min(best, float(d.min()))
        if best == 0.0:
            break
    return ContactReport(best, best <= clearance)
