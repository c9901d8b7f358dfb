"""Full two-dimensional deformed ribbon surface and its tessellation.

The deformed surface is built by attaching the deformed short-edge curve to
every centerline point and rotating it with the local sweep frame: the rows
of the sweep rotation are the deformed images of the material length, width
and normal axes.  The short edge bends with the width-direction analogues of
the centerline quantities,

    alpha_w = sqrt(kappa1^2 sin^2 phi + kappa2^2 cos^2 phi)
    beta_w  = kappa1 sin^2 phi + kappa2 cos^2 phi

with the same torsion tau, so the map reduces to the centerline at t = 0 and
to the edge curve at s = 0 identically.  ``surface_point`` evaluates the
expanded componentwise expressions; the composition through
``rotation_matrix`` and ``edge_curve`` is kept as an independent route and
cross-checked in the test suite.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import (
    PrincipalCurvatureState,
    _alpha_beta_tau,
    _arc_defect_over,
    _frame_vectors,
    _sin_over,
    _versine_over,
    centerline_point,
)
from .mesh import TriangleMesh

__all__ = ["RibbonExtent", "edge_curve", "rotation_matrix", "surface_point", "tessellate"]


@dataclass(frozen=True)
class RibbonExtent:
    """Material extent and sampling of the ribbon mid-surface."""

    length: float
    width: float
    samples_s: int = 120
    samples_t: int = 12

    def __post_init__(self):
        if self.length <= 0 or self.width <= 0:
            raise ValueError("length and width must be positive")
        if self.samples_s < 2 or self.samples_t < 2:
            raise ValueError("sample counts must be at least 2")
        if self.width > self.length:
            raise ValueError(
                f"width {self.width} exceeds length {self.length}; not a ribbon"
            )
        if self.width > 0.5 * self.length:
            warnings.warn(
                "width is comparable to length; the thin-ribbon kinematics are "
                "extrapolated well outside their regime",
                stacklevel=2,
            )


def _width_quantities(state: PrincipalCurvatureState):
    c = math.cos(state.phi)
    s = math.sin(state.phi)
    alpha_w = math.sqrt(state.kappa1 ** 2 * s * s + state.kappa2 ** 2 * c * c)
    beta_w = state.kappa1 * s * s + state.kappa2 * c * c
    return alpha_w, beta_w


def edge_curve(state: PrincipalCurvatureState, t):
    """Deformed short-edge curve through the origin, parametrized by the
    width coordinate t (scalar or array).

    The straight cross-edge of a flat ribbon maps to (0, t, 0); in general
    the edge bends with the width-direction normal curvature and the shared
    torsion.  Uses the same series guard as the centerline near straightness.
    """
    _, _, tau = _alpha_beta_tau(state)
    alpha_w, beta_w = _width_quantities(state)
    t = np.asarray(t, dtype=float)
    defect = _arc_defect_over(alpha_w, t)
    x = beta_w * tau * defect
    y = t - beta_w * beta_w * defect
    z = -beta_w * _versine_over(alpha_w, t)
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def rotation_matrix(state: PrincipalCurvatureState, s: float) -> np.ndarray:
    """Sweep rotation at arclength s: rows are the deformed images of the
    material length, width and normal axes.

    Orthogonal with determinant +1; the identity at s = 0.  Edge-curve
    components contract with the rows (row vector times matrix) when the
    edge is carried along the centerline.
    """
    tangent, normal, width = _frame_vectors(state, float(s))
    return np.stack([tangent, width, normal], axis=0)


def surface_point(state: PrincipalCurvatureState, s, t):
    """Deformed position of the material point (s, t); broadcasts over both.

    Satisfies surface_point(state, s, 0) == centerline and
    surface_point(state, 0, t) == edge_curve identically (exact zeros of the
    t- or s-dependent terms, not cancellation).
    """
    alpha, beta, tau = _alpha_beta_tau(state)
    alpha_w, beta_w = _width_quantities(state)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)

    # edge-curve pieces along t
    defect_t = _arc_defect_over(alpha_w, t)
    ex = beta_w * tau * defect_t
    ey = t - beta_w * beta_w * defect_t
    ez = -beta_w * _versine_over(alpha_w, t)

    # sweep-frame pieces along s
    h1 = _sin_over(alpha, s)
    h2 = _versine_over(alpha, s)
    cos_as = np.cos(alpha * s)

    defect_s = _arc_defect_over(alpha, s)
    x0 = s - beta * beta * defect_s
    y0 = beta * tau * defect_s
    z0 = -beta * _versine_over(alpha, s)

    x = x0 + ex * (1.0 - beta * beta * h2) + ey * (beta * tau * h2) + ez * (beta * h1)
    y = y0 + ex * (beta * tau * h2) + ey * (beta * beta * h2 + cos_as) + ez * (-tau * h1)
    z = z0 + ex * (-beta * h1) + ey * (tau * h1) + ez * cos_as
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def tessellate(state: PrincipalCurvatureState, extent: RibbonExtent) -> TriangleMesh:
    """Regular-grid triangle mesh of the deformed surface.

    Vertices are surface points on the samples_s x samples_t grid over
    s in [0, L], t in [-w/2, w/2], indexed row-major in s; each grid cell
    is split into two triangles along a fixed diagonal, so identical inputs
    reproduce the mesh bit for bit.
    """
    ns, nt = extent.samples_s, extent.samples_t
    s_vals = np.linspace(0.0, extent.length, ns)
    t_vals = np.linspace(-0.5 * extent.width, 0.5 * extent.width, nt)
    vertices = surface_point(state, s_vals[:, None], t_vals[None, :]).reshape(-1, 3)
    params = np.stack(
        [np.repeat(s_vals, nt), np.tile(t_vals, ns)], axis=-1
    )

    i = np.arange(ns - 1)[:, None]
    j = np.arange(nt - 1)[None, :]
    v00 = (i * nt + j).ravel()
    v01 = v00 + 1
    v10 = v00 + nt
    v11 = v10 + 1
    triangles = np.concatenate(
        [np.stack([v00, v10, v11], axis=-1), np.stack([v00, v11, v01], axis=-1)], axis=0
    ).astype(np.int64)

    kappa_max = max(abs(state.kappa1), abs(state.kappa2))
    fold = math.pi / kappa_max if kappa_max > 0 else None
    return TriangleMesh(
        vertices=vertices,
        triangles=triangles,
        params=params,
        grid_shape=(ns, nt),
        fold_arclength=fold,
    )
