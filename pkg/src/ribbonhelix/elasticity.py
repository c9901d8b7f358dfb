"""Elastic equilibrium of a thin ribbon under surface stress and residual strain.

The potential energy per unit area is the work of the face stresses against
the surface strains plus the thickness integral of the isotropic elastic
energy density,

    Pi = f-:gamma(z=-H/2) + f+:gamma(z=+H/2) + int (1/2) gamma:C:gamma dz,

with the strain field the superposition of bending (linear in z), a uniform
membrane strain, a through-thickness strain with gradient q, and any built-in
residual strain:

    gamma_xx = e_xx + z*b_xx + g0_xx,   gamma_xy = e_xy + z*b_xy + g0_xy,
    gamma_yy = e_yy + z*b_yy + g0_yy,   gamma_zz = e_zz + q*z + g0_zz.

Equilibrium makes Pi stationary in the eight unknowns (two principal
curvatures, their orientation, q, and the four strain components).  A
homogeneous section loaded on one face has the closed-form solution

    kappa1 = 6 (f1 - nu f2) / (E H^2)        e11 = -(f1 - nu f2) / (E H)
    kappa2 = 6 (f2 - nu f1) / (E H^2)        e22 = -(f2 - nu f1) / (E H)
    q      = -6 nu (f1 + f2) / (E H^2)       e33 =  nu (f1 + f2) / (E H)

with the curvature axes aligned with the stress axes, which reduces to the
classical Stoney relation at nu = 0.  Loads on both faces decouple exactly
into a stretching part (the sum of the face stresses) and a bending part
(their difference, treated as a single bottom-face load).  The general
solver exploits that, at fixed curvature orientation, Pi is a quadratic form
in the remaining seven unknowns: it solves that linear system exactly on a
dense orientation grid and refines the best branch to a root of the
orientation derivative.

Everything is solved in a nondimensional form (lengths by the section
thickness, stresses by the stiffest layer modulus) for conditioning;
reported gradient norms refer to those units.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq, minimize_scalar

__all__ = [
    "Layer",
    "RibbonSection",
    "SurfaceStressSpec",
    "DecoupledLoads",
    "EquilibriumSolution",
    "energy_density",
    "solve_single_surface",
    "decouple_two_surfaces",
    "solve_two_surface",
    "solve_stationary_numeric",
    "laminate_prestretch_to_residual",
]

_ZERO_RESIDUAL = (0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Layer:
    """One ply of the section: thickness, elastic constants and the built-in
    residual strain (xx, yy, xy, zz) measured from the ply's natural state."""

    thickness: float
    youngs_modulus: float
    poisson_ratio: float
    residual_strain: tuple = _ZERO_RESIDUAL

    def __post_init__(self):
        if self.thickness <= 0:
            raise ValueError("layer thickness must be positive")
        if self.youngs_modulus <= 0:
            raise ValueError("layer modulus must be positive")
        if not (0.0 <= self.poisson_ratio < 0.5):
            raise ValueError("poisson ratio must lie in [0, 0.5)")
        res = tuple(float(v) for v in self.residual_strain)
        if len(res) != 4:
            raise ValueError("residual_strain must be (xx, yy, xy, zz)")
        object.__setattr__(self, "residual_strain", res)


@dataclass(frozen=True)
class RibbonSection:
    """Section geometry and material: total thickness, nominal elastic
    constants, and an optional layer stack (bottom first) summing to the
    total thickness."""

    thickness: float
    youngs_modulus: float
    poisson_ratio: float
    layers: tuple | None = None

    def __post_init__(self):
        if self.thickness <= 0:
            raise ValueError("thickness must be positive")
        if self.youngs_modulus <= 0:
            raise ValueError("youngs_modulus must be positive")
        if not (0.0 <= self.poisson_ratio < 0.5):
            raise ValueError("poisson_ratio must lie in [0, 0.5)")
        if self.layers is not None:
            layers = tuple(self.layers)
            if not layers:
                raise ValueError("layers, when given, must be non-empty")
            total = sum(l.thickness for l in layers)
            if abs(total - self.thickness) > 1e-9 * self.thickness:
                raise ValueError(
                    f"layer thicknesses sum to {total}, expected {self.thickness}"
                )
            object.__setattr__(self, "layers", layers)

    @classmethod
    def homogeneous(cls, thickness, youngs_modulus, poisson_ratio):
        return cls(thickness, youngs_modulus, poisson_ratio)

    @classmethod
    def laminate(cls, layers):
        """Section from a bottom-first layer stack; the nominal constants are
        thickness-weighted means (reporting only)."""
        layers = tuple(layers)
        H = sum(l.thickness for l in layers)
        E = sum(l.youngs_modulus * l.thickness for l in layers) / H
        nu = sum(l.poisson_ratio * l.thickness for l in layers) / H
        return cls(H, E, nu, layers)

    @property
    def is_layered(self) -> bool:
        return self.layers is not None


@dataclass(frozen=True)
class SurfaceStressSpec:
    """In-plane surface stress by principal values and the clockwise angle
    from the length axis to the first principal direction."""

    f1: float
    f2: float
    orientation: float = 0.0

    def __post_init__(self):
        for name in ("f1", "f2", "orientation"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def to_tensor(self) -> np.ndarray:
        """Symmetric 2x2 tensor in ribbon axes."""
        c = math.cos(self.orientation)
        s = math.sin(self.orientation)
        # first principal direction (c, -s); second (s, c)
        xx = self.f1 * c * c + self.f2 * s * s
        yy = self.f1 * s * s + self.f2 * c * c
        xy = (self.f2 - self.f1) * s * c
        return np.array([[xx, xy], [xy, yy]])

    @classmethod
    def from_tensor(cls, tensor) -> "SurfaceStressSpec":
        """Principal form of a symmetric 2x2 tensor, f1 >= f2, orientation in
        [-pi/2, pi/2); isotropic tensors get orientation 0."""
        t = np.asarray(tensor, dtype=float)
        xx, yy, xy = t[0, 0], t[1, 1], 0.5 * (t[0, 1] + t[1, 0])
        mean = 0.5 * (xx + yy)
        dev = math.hypot(0.5 * (xx - yy), xy)
        scale = max(abs(xx), abs(yy), abs(xy))
        if dev <= 1e-14 * scale or dev == 0.0:
            return cls(mean, mean, 0.0)
        theta_ccw = 0.5 * math.atan2(2.0 * xy, xx - yy)
        orientation = math.remainder(-theta_ccw, math.pi)
        if orientation >= 0.5 * math.pi:
            orientation -= math.pi
        return cls(mean + dev, mean - dev, orientation)


@dataclass(frozen=True)
class DecoupledLoads:
    stretch: SurfaceStressSpec
    bend: SurfaceStressSpec


@dataclass(frozen=True)
class EquilibriumSolution:
    """Stationary point of the ribbon energy.

    Curvatures kappa1/kappa2 act along directors at the clockwise angle phi;
    the membrane strain is stored in ribbon axes (eps_xx, eps_yy, eps_xy)
    with the through-thickness strain eps_zz and its gradient q.  eps11,
    eps22, eps12 view the membrane strain in the curvature frame.
    gradient_norm is the finite-difference residual of the energy gradient
    in nondimensional units.
    """

    kappa1: float
    kappa2: float
    phi: float
    q: float
    eps_xx: float
    eps_yy: float
    eps_xy: float
    eps_zz: float
    energy: float
    degenerate: bool = False
    gradient_norm: float | None = None

    @property
    def eps11(self) -> float:
        c, s = math.cos(self.phi), math.sin(self.phi)
        return c * c * self.eps_xx - 2 * c * s * self.eps_xy + s * s * self.eps_yy

    @property
    def eps22(self) -> float:
        c, s = math.cos(self.phi), math.sin(self.phi)
        return s * s * self.eps_xx + 2 * c * s * self.eps_xy + c * c * self.eps_yy

    @property
    def eps12(self) -> float:
        c, s = math.cos(self.phi), math.sin(self.phi)
        return c * s * (self.eps_xx - self.eps_yy) + (c * c - s * s) * self.eps_xy

    @property
    def eps33(self) -> float:
        return self.eps_zz

    def bending_tensor(self) -> np.ndarray:
        c, s = math.cos(self.phi), math.sin(self.phi)
        bxx = self.kappa1 * c * c + self.kappa2 * s * s
        byy = self.kappa1 * s * s + self.kappa2 * c * c
        bxy = (self.kappa2 - self.kappa1) * s * c
        return np.array([[bxx, bxy], [bxy, byy]])

    def membrane_tensor(self) -> np.ndarray:
        return np.array([[self.eps_xx, self.eps_xy], [self.eps_xy, self.eps_yy]])


def laminate_prestretch_to_residual(layers, prestretch):
    """Residual strains of layers that were pre-stretched before bonding.

    ``prestretch`` is one entry per layer: None for a passive layer, or the
    in-plane engineering strain applied before bonding, as (exx, eyy, exy)
    or a symmetric 2x2 matrix.  Bonding freezes the stretched state in, so
    the built-in strain equals the pre-stretch (each layer wants to contract
    back by it) and the through-thickness component follows from plane
    stress: g0_zz = -nu/(1-nu) * (g0_xx + g0_yy).

    Returns a new layer list with the residual strains attached.  Warns when
    a pre-stretch leaves the small-strain regime (|component| > 0.3).
    """
    layers = list(layers)
    if len(prestretch) != len(layers):
        raise ValueError("need one prestretch entry per layer")
    out = []
    for layer, pre in zip(layers, prestretch):
        if pre is None:
            out.append(layer)
            continue
        arr = np.asarray(pre, dtype=float)
        if arr.shape == (2, 2):
            exx, eyy, exy = arr[0, 0], arr[1, 1], 0.5 * (arr[0, 1] + arr[1, 0])
        elif arr.shape == (3,):
            exx, eyy, exy = arr
        else:
            raise ValueError("prestretch must be (exx, eyy, exy) or a 2x2 matrix")
        if max(abs(exx), abs(eyy), abs(exy)) > 0.3:
            warnings.warn(
                "pre-stretch exceeds 0.3; outside the small-strain regime",
                stacklevel=2,
            )
        nu = layer.poisson_ratio
        ezz = -nu / (1.0 - nu) * (exx + eyy)
        out.append(replace(layer, residual_strain=(float(exx), float(eyy), float(exy), float(ezz))))
    return out


# --- energy evaluation ----------------------------------------------------


class _Problem:
    """Nondimensional energy of a section plus loads, in tensor unknowns
    y = (b_xx, b_yy, b_xy, q, e_xx, e_yy, e_xy, e_zz) with lengths scaled by
    the thickness and stresses by the stiffest layer modulus."""

    def __init__(self, section: RibbonSection, f_minus, f_plus, residual=None):
        H = section.thickness
        if section.layers is not None:
            layers = section.layers
        else:
            layers = (
                Layer(H, section.youngs_modulus, section.poisson_ratio),
            )
        if residual is not None:
            if len(residual) != len(layers):
                raise ValueError("need one residual entry per layer")
            layers = tuple(
                replace(l, residual_strain=tuple(float(v) for v in r))
                if r is not None
                else l
                for l, r in zip(layers, residual)
            )
        self.section = section
        self.H = H
        self.E_ref = max(l.youngs_modulus for l in layers)

        # layer interfaces in units of H, measured from the mid-plane
        z = -0.5
        bounds = [z]
        for l in layers:
            z += l.thickness / H
            bounds.append(z)
        bounds[-1] = 0.5  # close the stack exactly

        # bending reference: stiffness-weighted centroid of the stack
        num = 0.0
        den = 0.0
        for l, z0, z1 in zip(layers, bounds[:-1], bounds[1:]):
            Eh = l.youngs_modulus / self.E_ref
            num += Eh * 0.5 * (z1 * z1 - z0 * z0)
            den += Eh * (z1 - z0)
        self.z_ref = num / den

        self.layer_terms = []
        for l, z0, z1 in zip(layers, bounds[:-1], bounds[1:]):
            Eh = l.youngs_modulus / self.E_ref
            nu = l.poisson_ratio
            lam = Eh * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))
            mu = Eh / (2.0 * (1.0 + nu))
            a0, a1 = z0 - self.z_ref, z1 - self.z_ref
            m0 = a1 - a0
            m1 = 0.5 * (a1 * a1 - a0 * a0)
            m2 = (a1 ** 3 - a0 ** 3) / 3.0
            self.layer_terms.append((m0, m1, m2, lam, mu, l.residual_strain))

        scale = self.E_ref * H
        self.f_minus = None if f_minus is None else tuple(
            v / scale for v in _flat_tensor(f_minus)
        )
        self.f_plus = None if f_plus is None else tuple(
            v / scale for v in _flat_tensor(f_plus)
        )
        self.zeta_bot = -0.5 - self.z_ref
        self.zeta_top = 0.5 - self.z_ref
        self.g0_bot = layers[0].residual_strain
        self.g0_top = layers[-1].residual_strain
        self.load_scale = max(
            [1e-3]
            + [abs(v) for v in (self.f_minus or ())]
            + [abs(v) for v in (self.f_plus or ())]
            + [abs(v) for l in layers for v in l.residual_strain]
        )

    def energy(self, y) -> float:
        b_xx, b_yy, b_xy, q, e_xx, e_yy, e_xy, e_zz = y
        total = 0.0
        tr_b = b_xx + b_yy + q
        bb = b_xx * b_xx + b_yy * b_yy + 2.0 * b_xy * b_xy + q * q
        for m0, m1, m2, lam, mu, g0 in self.layer_terms:
            axx = e_xx + g0[0]
            ayy = e_yy + g0[1]
            axy = e_xy + g0[2]
            azz = e_zz + g0[3]
            tr_a = axx + ayy + azz
            aa = axx * axx + ayy * ayy + 2.0 * axy * axy + azz * azz
            ab = axx * b_xx + ayy * b_yy + 2.0 * axy * b_xy + azz * q
            total += 0.5 * lam * (tr_a * tr_a * m0 + 2.0 * tr_a * tr_b * m1 + tr_b * tr_b * m2)
            total += mu * (aa * m0 + 2.0 * ab * m1 + bb * m2)
        if self.f_minus is not None:
            z = self.zeta_bot
            g0 = self.g0_bot
            fxx, fyy, fxy = self.f_minus
            total += (
                fxx * (e_xx + z * b_xx + g0[0])
                + fyy * (e_yy + z * b_yy + g0[1])
                + 2.0 * fxy * (e_xy + z * b_xy + g0[2])
            )
        if self.f_plus is not None:
            z = self.zeta_top
            g0 = self.g0_top
            fxx, fyy, fxy = self.f_plus
            total += (
                fxx * (e_xx + z * b_xx + g0[0])
                + fyy * (e_yy + z * b_yy + g0[1])
                + 2.0 * fxy * (e_xy + z * b_xy + g0[2])
            )
        return total


def _flat_tensor(spec) -> tuple:
    """(xx, yy, xy) from a SurfaceStressSpec or a 2x2 array."""
    if isinstance(spec, SurfaceStressSpec):
        t = spec.to_tensor()
    else:
        t = np.asarray(spec, dtype=float)
    return float(t[0, 0]), float(t[1, 1]), float(0.5 * (t[0, 1] + t[1, 0]))


def _tensor_coordinates(solution: EquilibriumSolution, H: float) -> np.ndarray:
    b = solution.bending_tensor() * H
    return np.array(
        [
            b[0, 0],
            b[1, 1],
            b[0, 1],
            solution.q * H,
            solution.eps_xx,
            solution.eps_yy,
            solution.eps_xy,
            solution.eps_zz,
        ]
    )


def energy_density(section: RibbonSection, trial: EquilibriumSolution, f_minus=None, f_plus=None) -> float:
    """Potential energy per unit area of a trial state under the given face
    loads; the thickness integral is evaluated exactly per layer."""
    prob = _Problem(section, f_minus, f_plus)
    y = _tensor_coordinates(trial, section.thickness)
    return prob.energy(y) * prob.E_ref * section.thickness


# --- closed-form solvers ---------------------------------------------------


def _finished(section, prob, kappa1, kappa2, phi, q, e11, e22, e_zz, degenerate):
    c, s = math.cos(phi), math.sin(phi)
    eps_xx = e11 * c * c + e22 * s * s
    eps_yy = e11 * s * s + e22 * c * c
    eps_xy = (e22 - e11) * s * c
    partial = EquilibriumSolution(
        kappa1, kappa2, phi, q, eps_xx, eps_yy, eps_xy, e_zz, 0.0, degenerate
    )
    y = _tensor_coordinates(partial, section.thickness)
    energy = prob.energy(y) * prob.E_ref * section.thickness
    grad = _gradient_norm(prob, y, phi)
    return replace(partial, energy=energy, gradient_norm=grad)


def solve_single_surface(section: RibbonSection, f_minus: SurfaceStressSpec) -> EquilibriumSolution:
    """Closed-form equilibrium of a homogeneous section loaded on the bottom
    face only; the curvature axes coincide with the stress axes.

    Layered sections have no closed form here; use
    solve_stationary_numeric for those.
    """
    if section.is_layered:
        raise ValueError(
            "closed form requires a homogeneous section; use solve_stationary_numeric"
        )
    E = section.youngs_modulus
    nu = section.poisson_ratio
    H = section.thickness
    f1, f2 = f_minus.f1, f_minus.f2
    kappa1 = 6.0 * (f1 - nu * f2) / (E * H * H)
    kappa2 = 6.0 * (f2 - nu * f1) / (E * H * H)
    q = -6.0 * nu * (f1 + f2) / (E * H * H)
    e11 = -(f1 - nu * f2) / (E * H)
    e22 = -(f2 - nu * f1) / (E * H)
    e33 = nu * (f1 + f2) / (E * H)
    prob = _Problem(section, f_minus, None)
    return _finished(
        section, prob, kappa1, kappa2, f_minus.orientation, q, e11, e22, e33,
        degenerate=(f1 == f2),
    )


def decouple_two_surfaces(f_plus: SurfaceStressSpec, f_minus: SurfaceStressSpec) -> DecoupledLoads:
    """Split face loads into the stretching part (their sum) and the bending
    part (bottom minus top, acting as an equivalent bottom-face load), each
    in principal form with f1 >= f2."""
    tp = f_plus.to_tensor()
    tm = f_minus.to_tensor()
    return DecoupledLoads(
        stretch=SurfaceStressSpec.from_tensor(tp + tm),
        bend=SurfaceStressSpec.from_tensor(tm - tp),
    )


def solve_two_surface(section: RibbonSection, f_plus: SurfaceStressSpec, f_minus: SurfaceStressSpec) -> EquilibriumSolution:
    """Closed-form equilibrium of a homogeneous section loaded on both faces:
    bending from the load difference, membrane stretch from the load sum."""
    if section.is_layered:
        raise ValueError(
            "closed form requires a homogeneous section; use solve_stationary_numeric"
        )
    loads = decouple_two_surfaces(f_plus, f_minus)
    bend = solve_single_surface(section, loads.bend)

    E = section.youngs_modulus
    nu = section.poisson_ratio
    H = section.thickness
    fs = loads.stretch
    s11 = -(fs.f1 - nu * fs.f2) / (E * H)
    s22 = -(fs.f2 - nu * fs.f1) / (E * H)
    s33 = nu * (fs.f1 + fs.f2) / (E * H)
    c, s = math.cos(fs.orientation), math.sin(fs.orientation)
    eps_xx = s11 * c * c + s22 * s * s
    eps_yy = s11 * s * s + s22 * c * c
    eps_xy = (s22 - s11) * s * c

    partial = EquilibriumSolution(
        bend.kappa1,
        bend.kappa2,
        bend.phi,
        bend.q,
        eps_xx,
        eps_yy,
        eps_xy,
        s33,
        0.0,
        degenerate=bend.degenerate,
    )
    prob = _Problem(section, f_minus, f_plus)
    y = _tensor_coordinates(partial, H)
    energy = prob.energy(y) * prob.E_ref * H
    grad = _gradient_norm(prob, y, partial.phi)
    return replace(partial, energy=energy, gradient_norm=grad)


# --- general numeric solver -------------------------------------------------


def _orientation_family(phi):
    """Map x = (k1, k2, q, e_xx, e_yy, e_xy, e_zz) -> tensor unknowns, for an
    array of orientations; shape (n, 8, 7)."""
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    c2 = np.cos(phi) ** 2
    s2 = np.sin(phi) ** 2
    sc = np.sin(phi) * np.cos(phi)
    n = len(phi)
    M = np.zeros((n, 8, 7))
    M[:, 0, 0] = c2
    M[:, 0, 1] = s2
    M[:, 1, 0] = s2
    M[:, 1, 1] = c2
    M[:, 2, 0] = -sc
    M[:, 2, 1] = sc
    for row, col in ((3, 2), (4, 3), (5, 4), (6, 5), (7, 6)):
        M[:, row, col] = 1.0
    return M


def _orientation_family_derivative(phi: float) -> np.ndarray:
    s2 = math.sin(2.0 * phi)
    c2 = math.cos(2.0 * phi)
    Mp = np.zeros((8, 7))
    Mp[0, 0] = -s2
    Mp[0, 1] = s2
    Mp[1, 0] = s2
    Mp[1, 1] = -s2
    Mp[2, 0] = -c2
    Mp[2, 1] = c2
    return Mp


def _assemble_quadratic(prob: _Problem):
    """Exact quadratic form Pi(y) = y.A.y/2 + b.y + c by probing the energy;
    probe size follows the load scale so the extraction stays well scaled."""
    h = prob.load_scale
    c0 = prob.energy(np.zeros(8))
    A = np.empty((8, 8))
    b = np.empty(8)
    plus = np.empty(8)
    for i in range(8):
        e = np.zeros(8)
        e[i] = h
        pp = prob.energy(e)
        pm = prob.energy(-e)
        plus[i] = pp
        b[i] = (pp - pm) / (2.0 * h)
        A[i, i] = (pp + pm - 2.0 * c0) / (h * h)
    for i in range(8):
        for j in range(i + 1, 8):
            e = np.zeros(8)
            e[i] = h
            e[j] = h
            pij = prob.energy(e)
            A[i, j] = A[j, i] = (pij - plus[i] - plus[j] + c0) / (h * h)
    return A, b, c0


def _solve_at(prob_A, prob_b, phi: float):
    M = _orientation_family(phi)[0]
    A_x = M.T @ prob_A @ M
    b_x = M.T @ prob_b
    x = np.linalg.solve(A_x, -b_x)
    return x, M


def _gradient_norm(prob: _Problem, y: np.ndarray, phi: float) -> float:
    """Central-difference gradient of the nondimensional energy in the eight
    solver coordinates (k1, k2, phi, q, e_xx, e_yy, e_xy, e_zz)."""
    b = np.array([[y[0], y[2]], [y[2], y[1]]])
    c, s = math.cos(phi), math.sin(phi)
    u = np.array([c, -s])
    v = np.array([s, c])
    k1 = float(u @ b @ u)
    k2 = float(v @ b @ v)
    theta = np.array([k1, k2, phi, y[3], y[4], y[5], y[6], y[7]])

    def energy_of(th):
        kk1, kk2, ph = th[0], th[1], th[2]
        cc, ss = math.cos(ph), math.sin(ph)
        yy = np.array(
            [
                kk1 * cc * cc + kk2 * ss * ss,
                kk1 * ss * ss + kk2 * cc * cc,
                (kk2 - kk1) * ss * cc,
                th[3],
                th[4],
                th[5],
                th[6],
                th[7],
            ]
        )
        return prob.energy(yy)

    h = 1e-6 * max(1.0, float(np.max(np.abs(theta))))
    grad = np.empty(8)
    for i in range(8):
        tp = theta.copy()
        tm = theta.copy()
        tp[i] += h
        tm[i] -= h
        grad[i] = (energy_of(tp) - energy_of(tm)) / (2.0 * h)
    return float(np.linalg.norm(grad))


def solve_stationary_numeric(
    section: RibbonSection,
    f_plus=None,
    f_minus=None,
    residual=None,
    scan_count: int = 2000,
) -> EquilibriumSolution:
    """Stationary point of the ribbon energy for any section and loads.

    For each curvature orientation the energy is an exactly solvable
    quadratic in the remaining seven unknowns; the resulting orientation
    profile is scanned densely over its half-period and the best branch is
    polished to a root of the orientation derivative.  Loads may act on
    either face and layers may carry residual strains (``residual``
    overrides the per-layer values, one entry per layer, None to keep).

    Isotropic loading makes every orientation stationary; the solution is
    then flagged degenerate and reported at orientation zero.
    """
    prob = _Problem(section, f_minus, f_plus, residual=residual)
    A, b, c0 = _assemble_quadratic(prob)
    H = section.thickness

    phi_grid = -0.5 * math.pi + math.pi * np.arange(scan_count) / scan_count
    M = _orientation_family(phi_grid)
    AM = np.einsum("ij,kjm->kim", A, M)
    A_x = np.einsum("kji,kjm->kim", M, AM)
    b_x = np.einsum("kji,j->ki", M, b)
    x_all = np.linalg.solve(A_x, -b_x[..., None])[..., 0]
    E_grid = c0 + 0.5 * np.einsum("ki,ki->k", b_x, x_all)

    E_min = float(E_grid.min())
    E_max = float(E_grid.max())
    spread = E_max - E_min
    scale = max(abs(E_max), abs(E_min), 1e-300)
    degenerate = spread <= 1e-12 * scale

    if degenerate:
        phi_star = 0.0
    else:
        near = np.flatnonzero(E_grid <= E_min + 1e-14 * scale)
        order = np.lexsort((phi_grid[near], np.abs(phi_grid[near])))
        i_best = int(near[order[0]])
        dphi = math.pi / scan_count
        lo = phi_grid[i_best] - dphi
        hi = phi_grid[i_best] + dphi

        def envelope_slope(ph):
            x, Mloc = _solve_at(A, b, ph)
            y = Mloc @ x
            return float((_orientation_family_derivative(ph) @ x) @ (A @ y + b))

        g_lo = envelope_slope(lo)
        g_hi = envelope_slope(hi)
        if g_lo == 0.0:
            phi_star = lo
        elif g_hi == 0.0:
            phi_star = hi
        elif g_lo * g_hi < 0.0:
            phi_star = brentq(envelope_slope, lo, hi, xtol=1e-15, rtol=8.9e-16)
        else:
            def envelope_energy(ph):
                x, Mloc = _solve_at(A, b, ph)
                return c0 + 0.5 * float((Mloc.T @ b) @ x)

            res = minimize_scalar(
                envelope_energy, bounds=(lo, hi), method="bounded",
                options={"xatol": 1e-13},
            )
            phi_star = float(res.x)
        phi_star = float(math.remainder(phi_star, math.pi))
        if phi_star >= 0.5 * math.pi:
            phi_star -= math.pi

    x, Mloc = _solve_at(A, b, phi_star)
    y = Mloc @ x
    energy = prob.energy(y) * prob.E_ref * H
    grad = _gradient_norm(prob, y, phi_star)
    return EquilibriumSolution(
        kappa1=x[0] / H,
        kappa2=x[1] / H,
        phi=phi_star,
        q=x[2] / H,
        eps_xx=x[3],
        eps_yy=x[4],
        eps_xy=x[5],
        eps_zz=x[6],
        energy=energy,
        degenerate=degenerate,
        gradient_norm=grad,
    )
