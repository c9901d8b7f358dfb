"""Closed-form kinematics of a ribbon bent with prescribed principal curvatures.

A flat, straight ribbon deformed with constant principal curvatures
(kappa1, kappa2) whose principal axes sit at an angle phi to the ribbon's
length/width axes has a centerline that is a circular helix.  Everything
about that helix is available in closed form:

    alpha = sqrt(kappa1^2 cos^2 phi + kappa2^2 sin^2 phi)   spatial frequency
    beta  = kappa1 cos^2 phi + kappa2 sin^2 phi             centerline curvature
    tau   = (kappa1 - kappa2) sin phi cos phi               centerline torsion

with the identity alpha^2 = beta^2 + tau^2.  The helix angle is
arcsin(tau/alpha), the radius beta/alpha^2, the pitch 2 pi tau / alpha^2,
and the axis (tau/alpha, beta/alpha, 0) in the fixed frame.  Handedness is
the sign of the torsion.

This module evaluates the centerline, the moving frames along it (Frenet
triad plus the material directors), the scalar helix descriptors, and a
morphology classification.  A fixed-step Runge-Kutta integrator of the
underlying director ODEs is included as an independent numerical check on
every closed form; it is used by the verification suites, not by the
evaluation paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "PrincipalCurvatureState",
    "HelixDescriptors",
    "FrameState",
    "MorphologyKind",
    "Morphology",
    "descriptors",
    "centerline_point",
    "frame_at",
    "integrate_frames_numeric",
    "classify",
]

# Below this value of |alpha*s| the ratios (a s - sin a s)/a^3 and
# (1 - cos a s)/a^2 lose all significance to cancellation; switch to a
# three-term series whose truncation error is ~ (a s)^6 of the leading term.
_SERIES_CUTOFF = 1e-4


def _sin_over(a, u):
    """sin(a u)/a, finite in the a -> 0 limit."""
    a = np.asarray(a, dtype=float)
    u = np.asarray(u, dtype=float)
    x = a * u
    small = np.abs(x) < _SERIES_CUTOFF
    a_safe = np.where(small, 1.0, a)
    x2 = x * x
    series = u * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    return np.where(small, series, np.sin(x) / a_safe)


def _versine_over(a, u):
    """(1 - cos(a u))/a^2, finite in the a -> 0 limit."""
    a = np.asarray(a, dtype=float)
    u = np.asarray(u, dtype=float)
    x = a * u
    small = np.abs(x) < _SERIES_CUTOFF
    a_safe = np.where(small, 1.0, a)
    x2 = x * x
    series = u * u * (0.5 - x2 / 24.0 + x2 * x2 / 720.0)
    return np.where(small, series, (1.0 - np.cos(x)) / (a_safe * a_safe))


def _arc_defect_over(a, u):
    """(a u - sin(a u))/a^3, finite in the a -> 0 limit."""
    a = np.asarray(a, dtype=float)
    u = np.asarray(u, dtype=float)
    x = a * u
    small = np.abs(x) < _SERIES_CUTOFF
    a_safe = np.where(small, 1.0, a)
    x2 = x * x
    series = u * u * u * (1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0)
    return np.where(small, series, (x - np.sin(x)) / (a_safe ** 3))


@dataclass(frozen=True)
class PrincipalCurvatureState:
    """Principal curvatures and their orientation relative to the ribbon axes.

    kappa1 acts along the director at angle phi (measured clockwise from the
    length axis), kappa2 along the perpendicular director.  phi is stored as
    given; the map is pi-periodic in phi with a (kappa1, kappa2) swap at
    half-period shifts, and ``normalized()`` returns the equivalent state
    with phi in [-pi/2, pi/2).
    """

    kappa1: float
    kappa2: float
    phi: float

    def __post_init__(self):
        for name in ("kappa1", "kappa2", "phi"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")

    def normalized(self) -> "PrincipalCurvatureState":
        """Equivalent state with phi wrapped into [-pi/2, pi/2)."""
        phi = math.remainder(self.phi, math.pi)  # (-pi/2, pi/2]
        k1, k2 = self.kappa1, self.kappa2
        if phi >= math.pi / 2:
            phi -= math.pi / 2
            k1, k2 = k2, k1
        # remainder() hands back exactly pi/2 for inputs on the branch cut
        if phi == math.pi / 2:
            phi = -math.pi / 2
        return PrincipalCurvatureState(k1, k2, phi)

    @property
    def gauss_curvature(self) -> float:
        return self.kappa1 * self.kappa2

    @property
    def mean_curvature(self) -> float:
        return 0.5 * (self.kappa1 + self.kappa2)


@dataclass(frozen=True)
class HelixDescriptors:
    """Scalar descriptors of the helical centerline.

    ``axis`` is None for states whose centerline is straight (flat ribbon,
    or curvature confined to the width direction); every other field is
    zero there.  ``pitch`` is signed: its sign equals the chirality, and
    |pitch| is the axial advance per full turn.
    """

    alpha: float
    beta: float
    tau: float
    helix_angle: float
    radius: float
    pitch: float
    axis: np.ndarray | None
    chirality: int

    @property
    def axis_defined(self) -> bool:
        return self.axis is not None


@dataclass(frozen=True)
class FrameState:
    """Centerline point with its Frenet triad and material directors.

    tangent/normal/binormal are the Frenet vectors with binormal =
    tangent x normal; r1, r2 are the (deformed) principal-curvature
    directors, with normal = r1 x r2.
    """

    position: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    binormal: np.ndarray
    r1: np.ndarray
    r2: np.ndarray


class MorphologyKind(Enum):
    FLAT = "flat"
    RING = "ring"
    CYLINDRICAL_HELIX = "cylindrical_helix"
    PURELY_TWISTED = "purely_twisted"
    GENERAL_HELIX_SADDLE = "general_helix_saddle"
    GENERAL_HELIX_CONVEX = "general_helix_convex"


@dataclass(frozen=True)
class Morphology:
    kind: MorphologyKind
    gauss_curvature: float
    mean_curvature: float


def _alpha_beta_tau(state: PrincipalCurvatureState):
    c = math.cos(state.phi)
    s = math.sin(state.phi)
    alpha = math.sqrt(state.kappa1 ** 2 * c * c + state.kappa2 ** 2 * s * s)
    beta = state.kappa1 * c * c + state.kappa2 * s * s
    tau = (state.kappa1 - state.kappa2) * s * c
    return alpha, beta, tau


def descriptors(state: PrincipalCurvatureState) -> HelixDescriptors:
    """Helix descriptors (frequency, curvature, torsion, angle, radius,
    pitch, axis, chirality) of the deformed centerline.

    Never raises on finite input.  When the centerline is straight
    (alpha == 0, which covers the flat state) all scalars are zero and the
    axis is undefined (None).
    """
    alpha, beta, tau = _alpha_beta_tau(state)
    if alpha == 0.0:
        return HelixDescriptors(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, None, 0)
    helix_angle = math.asin(max(-1.0, min(1.0, tau / alpha)))
    radius = abs(beta) / alpha ** 2
    pitch = 2.0 * math.pi * tau / alpha ** 2
    axis = np.array([tau / alpha, beta / alpha, 0.0])
    chirality = 0 if tau == 0.0 else (1 if tau > 0.0 else -1)
    return HelixDescriptors(alpha, beta, tau, helix_angle, radius, pitch, axis, chirality)


def centerline_point(state: PrincipalCurvatureState, s):
    """Centerline position at arclength s (scalar or array; broadcasts).

    Returns an array with trailing dimension 3.  The flat state maps to
    (s, 0, 0); the near-straight limit is series-evaluated, never 0/0.
    """
    alpha, beta, tau = _alpha_beta_tau(state)
    s = np.asarray(s, dtype=float)
    defect = _arc_defect_over(alpha, s)
    x = s - beta * beta * defect
    y = beta * tau * defect
    z = -beta * _versine_over(alpha, s)
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def _frame_vectors(state: PrincipalCurvatureState, s):
    """Tangent, normal and width direction (normal x tangent) at s."""
    alpha, beta, tau = _alpha_beta_tau(state)
    s = np.asarray(s, dtype=float)
    h1 = _sin_over(alpha, s)
    h2 = _versine_over(alpha, s)
    cos_as = np.cos(alpha * s)
    one = np.ones_like(s)
    tangent = np.stack(np.broadcast_arrays(one - beta * beta * h2, beta * tau * h2, -beta * h1), axis=-1)
    normal = np.stack(np.broadcast_arrays(beta * h1, -tau * h1, cos_as), axis=-1)
    width = np.stack(
        np.broadcast_arrays(beta * tau * h2, beta * beta * h2 + cos_as, tau * h1), axis=-1
    )
    return tangent, normal, width


def frame_at(state: PrincipalCurvatureState, s) -> FrameState:
    """Closed-form moving frame at arclength s (scalar or array).

    At s = 0 the tangent is E_x and the normal E_z.  The binormal is
    tangent x normal; r1 and r2 are the deformed directors.
    """
    alpha, beta, tau = _alpha_beta_tau(state)
    s = np.asarray(s, dtype=float)
    c = math.cos(state.phi)
    sn = math.sin(state.phi)
    h1 = _sin_over(alpha, s)
    h2 = _versine_over(alpha, s)
    tangent, normal, width = _frame_vectors(state, s)
    k1c = state.kappa1 * c
    k2s = state.kappa2 * sn
    r1 = np.stack(
        np.broadcast_arrays(c - k1c * beta * h2, -sn + k1c * tau * h2, -k1c * h1), axis=-1
    )
    r2 = np.stack(
        np.broadcast_arrays(sn - k2s * beta * h2, c + k2s * tau * h2, -k2s * h1), axis=-1
    )
    return FrameState(
        position=centerline_point(state, s),
        tangent=tangent,
        normal=normal,
        binormal=-width,
        r1=r1,
        r2=r2,
    )


def _rk4_paths(kappa1, kappa2, phi, s_max, step, stride=1):
    """Fixed-step RK4 integration of the director ODE system, batched over
    states.

    The evolving quantities are the centerline point and the two directors.
    The ribbon normal is their cross product, the travel direction is
    cos(phi) r1 + sin(phi) r2, and each director tips toward the normal at
    a rate set by its own curvature:

        dP/ds  = cos(phi) r1 + sin(phi) r2
        dr1/ds = -N kappa1 cos(phi)
        dr2/ds = -N kappa2 sin(phi)

    Returns (s_samples, P, r1, r2) with P, r1, r2 of shape
    (n_states, n_samples, 3); samples are every ``stride``-th step plus the
    final one.
    """
    kappa1 = np.atleast_1d(np.asarray(kappa1, dtype=float))
    kappa2 = np.atleast_1d(np.asarray(kappa2, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    n = len(kappa1)
    n_steps = int(round(s_max / step))
    if n_steps < 1:
        n_steps = 1
    h = s_max / n_steps

    c = np.cos(phi)[:, None]
    sn = np.sin(phi)[:, None]
    a1 = (kappa1 * np.cos(phi))[:, None]
    a2 = (kappa2 * np.sin(phi))[:, None]

    P = np.zeros((n, 3))
    r1 = np.concatenate([c, -sn, np.zeros((n, 1))], axis=1)
    r2 = np.concatenate([sn, c, np.zeros((n, 1))], axis=1)

    def deriv(r1v, r2v):
        normal = np.cross(r1v, r2v)
        return c * r1v + sn * r2v, -a1 * normal, -a2 * normal

    sample_idx = list(range(0, n_steps + 1, stride))
    if sample_idx[-1] != n_steps:
        sample_idx.append(n_steps)
    out_P = np.empty((n, len(sample_idx), 3))
    out_r1 = np.empty_like(out_P)
    out_r2 = np.empty_like(out_P)
    s_samples = np.array([i * h for i in sample_idx])

    pos = 0
    for i in range(n_steps + 1):
        if pos < len(sample_idx) and sample_idx[pos] == i:
            out_P[:, pos] = P
            out_r1[:, pos] = r1
            out_r2[:, pos] = r2
            pos += 1
        if i == n_steps:
            break
        dP1, dr1_1, dr2_1 = deriv(r1, r2)
        dP2, dr1_2, dr2_2 = deriv(r1 + 0.5 * h * dr1_1, r2 + 0.5 * h * dr2_1)
        dP3, dr1_3, dr2_3 = deriv(r1 + 0.5 * h * dr1_2, r2 + 0.5 * h * dr2_2)
        dP4, dr1_4, dr2_4 = deriv(r1 + h * dr1_3, r2 + h * dr2_3)
        P = P + (h / 6.0) * (dP1 + 2.0 * dP2 + 2.0 * dP3 + dP4)
        r1 = r1 + (h / 6.0) * (dr1_1 + 2.0 * dr1_2 + 2.0 * dr1_3 + dr1_4)
        r2 = r2 + (h / 6.0) * (dr2_1 + 2.0 * dr2_2 + 2.0 * dr2_3 + dr2_4)
    return s_samples, out_P, out_r1, out_r2


def integrate_frames_numeric(state: PrincipalCurvatureState, s_max, step, stride=1):
    """Numerically integrated frames along the centerline; verification only.

    Fourth-order fixed-step integration of the director ODE system from the
    standard initial conditions.  Returns a list of (s, FrameState) pairs at
    every ``stride``-th step plus the endpoint.  Rejects non-positive step.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    s_samples, P, r1, r2 = _rk4_paths(
        [state.kappa1], [state.kappa2], [state.phi], s_max, step, stride
    )
    c = math.cos(state.phi)
    sn = math.sin(state.phi)
    frames = []
    for j, s in enumerate(s_samples):
        r1v, r2v = r1[0, j], r2[0, j]
        normal = np.cross(r1v, r2v)
        tangent = c * r1v + sn * r2v
        frames.append(
            (
                float(s),
                FrameState(
                    position=P[0, j],
                    tangent=tangent,
                    normal=normal,
                    binormal=np.cross(tangent, normal),
                    r1=r1v,
                    r2=r2v,
                ),
            )
        )
    return frames


def classify(state: PrincipalCurvatureState, tol: float = 1e-9) -> Morphology:
    """Morphology class of the state under a relative tolerance band.

    The bands are scale-free (relative to alpha), except flatness, which is
    an absolute curvature threshold since a pure-curvature state carries no
    other scale.  Exactly one class applies:

      flat               max(|k1|, |k2|) <= tol
      ring               |tau| <= tol * alpha and the bent centerline survives
      purely twisted     |beta| <= tol * alpha
      cylindrical helix  |K| <= tol * alpha^2 with nonzero torsion
      general helix      otherwise, saddle (K < 0) or convex (K > 0)
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    K = state.gauss_curvature
    H = state.mean_curvature
    if max(abs(state.kappa1), abs(state.kappa2)) <= tol:
        return Morphology(MorphologyKind.FLAT, K, H)
    alpha, beta, tau = _alpha_beta_tau(state)
    if abs(tau) <= tol * alpha and abs(beta) > tol * alpha:
        return Morphology(MorphologyKind.RING, K, H)
    if abs(beta) <= tol * alpha:
        return Morphology(MorphologyKind.PURELY_TWISTED, K, H)
    if abs(K) <= tol * alpha * alpha and abs(tau) > tol * alpha:
        return Morphology(MorphologyKind.CYLINDRICAL_HELIX, K, H)
    kind = MorphologyKind.GENERAL_HELIX_SADDLE if K < 0 else MorphologyKind.GENERAL_HELIX_CONVEX
    return Morphology(kind, K, H)
