"""Grid sweeps over curvature or load parameters: phase tables and boundaries.

Geometric sweeps walk (kappa1, kappa2, phi, width) directly; mechanical
sweeps walk face-stress parameters on a homogeneous section and solve for
the equilibrium curvatures first.  Every grid point is classified, and when
a ribbon width is in play the coil self-contact is probed on a coarse mesh
with a fine-mesh confirmation of flagged points.  One-dimensional sweeps can
refine class-transition loci by bisecting the classifying scalar (centerline
curvature for the twist boundary, torsion for the ring boundary, Gauss
curvature for the cylinder boundary).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elasticity import RibbonSection, SurfaceStressSpec, solve_single_surface, solve_two_surface
from .geometry import (
    Morphology,
    PrincipalCurvatureState,
    _alpha_beta_tau,
    classify,
    descriptors,
)
from .mesh import edge_contact
from .surface import RibbonExtent, tessellate

__all__ = ["GridAxis", "SweepSpec", "SweepRecord", "PhaseTable", "iter_sweep", "run_sweep", "find_boundary"]

_GEOMETRIC_NAMES = {"kappa1", "kappa2", "phi", "width"}
_MECHANICAL_NAMES = {
    "f1_minus",
    "f2_minus",
    "orientation_minus",
    "f1_plus",
    "f2_plus",
    "orientation_plus",
    "width",
}
_GEOMETRIC_FIXED_EXTRA = {"length", "clearance", "tol"}
_MECHANICAL_FIXED_EXTRA = {
    "length",
    "clearance",
    "tol",
    "thickness",
    "youngs_modulus",
    "poisson_ratio",
}

COARSE_MESH = (120, 12)
FINE_MESH = (480, 48)


@dataclass(frozen=True)
class GridAxis:
    name: str
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"axis {self.name!r} needs count >= 2")
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ValueError(f"axis {self.name!r} range must be finite")
        if not self.max > self.min:
            raise ValueError(f"axis {self.name!r} needs max > min")

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple
    fixed: dict
    mode: str = "geometric"

    def __post_init__(self):
        axes = tuple(self.axes)
        if not 1 <= len(axes) <= 3:
            raise ValueError("sweeps take 1 to 3 axes")
        if self.mode not in ("geometric", "mechanical"):
            raise ValueError(f"unknown sweep mode {self.mode!r}")
        allowed = _GEOMETRIC_NAMES if self.mode == "geometric" else _MECHANICAL_NAMES
        fixed_allowed = allowed | (
            _GEOMETRIC_FIXED_EXTRA if self.mode == "geometric" else _MECHANICAL_FIXED_EXTRA
        )
        names = [ax.name for ax in axes]
        if len(set(names)) != len(names):
            raise ValueError("duplicate axis names")
        for name in names:
            if name not in allowed:
                raise ValueError(f"unknown {self.mode} axis {name!r}")
            if name in self.fixed:
                raise ValueError(f"parameter {name!r} is both an axis and fixed")
        for name in self.fixed:
            if name not in fixed_allowed:
                raise ValueError(f"unknown fixed parameter {name!r}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "fixed", dict(self.fixed))


@dataclass(frozen=True)
class SweepRecord:
    indices: tuple
    params: dict
    state: PrincipalCurvatureState
    morphology: Morphology
    descriptors: object
    solution: object = None
    tubule: bool | None = None
    degenerate: bool = False


@dataclass(frozen=True)
class PhaseTable:
    spec: SweepSpec
    records: tuple


def _resolve_mechanical(spec: SweepSpec, params: dict):
    for key in ("thickness", "youngs_modulus", "poisson_ratio"):
        if key not in params:
            raise ValueError(f"mechanical sweep needs fixed {key!r}")
    section = RibbonSection.homogeneous(
        params["thickness"], params["youngs_modulus"], params["poisson_ratio"]
    )
    f_minus = SurfaceStressSpec(
        params.get("f1_minus", 0.0),
        params.get("f2_minus", 0.0),
        params.get("orientation_minus", 0.0),
    )
    has_plus = any(k.endswith("_plus") for k in params)
    if has_plus:
        f_plus = SurfaceStressSpec(
            params.get("f1_plus", 0.0),
            params.get("f2_plus", 0.0),
            params.get("orientation_plus", 0.0),
        )
        solution = solve_two_surface(section, f_plus, f_minus)
    else:
        solution = solve_single_surface(section, f_minus)
    state = PrincipalCurvatureState(solution.kappa1, solution.kappa2, solution.phi)
    return state, solution


def _point_state(spec: SweepSpec, params: dict):
    if spec.mode == "geometric":
        state = PrincipalCurvatureState(
            params.get("kappa1", 0.0), params.get("kappa2", 0.0), params.get("phi", 0.0)
        )
        return state, None
    return _resolve_mechanical(spec, params)


def _tubule_flag(spec: SweepSpec, params: dict, state: PrincipalCurvatureState) -> bool | None:
    width = params.get("width")
    if width is None:
        return None
    length = params.get("length")
    if length is None:
        raise ValueError("contact detection needs fixed 'length' alongside 'width'")
    clearance = params.get("clearance")
    if clearance is None:
        clearance = params.get("thickness")
    if clearance is None:
        raise ValueError("contact detection needs fixed 'clearance' (or a thickness)")
    coarse = tessellate(state, RibbonExtent(length, width, *COARSE_MESH))
    if not edge_contact(coarse, clearance).touching:
        return False
    fine = tessellate(state, RibbonExtent(length, width, *FINE_MESH))
    return edge_contact(fine, clearance).touching


def iter_sweep(spec: SweepSpec):
    """Yield sweep records one grid point at a time, in C order over the
    axis grid, so large tables can stream straight to a sink."""
    grids = [ax.values() for ax in spec.axes]
    tol = spec.fixed.get("tol", 1e-9)
    for idx in np.ndindex(*(len(g) for g in grids)):
        params = dict(spec.fixed)
        for ax, g, i in zip(spec.axes, grids, idx):
            params[ax.name] = float(g[i])
        state, solution = _point_state(spec, params)
        morph = classify(state, tol=tol)
        desc = descriptors(state)
        yield SweepRecord(
            indices=tuple(int(i) for i in idx),
            params=params,
            state=state,
            morphology=morph,
            descriptors=desc,
            solution=solution,
            tubule=_tubule_flag(spec, params, state),
            degenerate=bool(solution.degenerate) if solution is not None else False,
        )


def run_sweep(spec: SweepSpec) -> PhaseTable:
    """Evaluate the whole grid into a phase table (one record per point)."""
    return PhaseTable(spec, tuple(iter_sweep(spec)))


_BOUNDARY_SCALARS = {
    "twist": lambda state: _alpha_beta_tau(state)[1],
    "ring": lambda state: _alpha_beta_tau(state)[2],
    "cylinder": lambda state: state.gauss_curvature,
}


def find_boundary(spec: SweepSpec, predicate, tol: float = 1e-10):
    """Transition loci along a one-axis sweep.

    ``predicate`` is "twist", "ring" or "cylinder" (zero crossings of the
    centerline curvature, the torsion, or the Gauss curvature), or any
    callable mapping a curvature state to a scalar.  Each sign change of the
    scalar across the grid is bisected to ``tol`` of the axis range; exact
    zeros at grid points are reported as-is.  Returns a sorted list of axis
    values (empty when the scalar never changes sign).
    """
    if len(spec.axes) != 1:
        raise ValueError("boundary refinement works on one-axis sweeps")
    scalar_of_state = _BOUNDARY_SCALARS.get(predicate, predicate)
    if not callable(scalar_of_state):
        raise ValueError(f"unknown boundary predicate {predicate!r}")
    axis = spec.axes[0]

    def scalar_at(x: float) -> float:
        params = dict(spec.fixed)
        params[axis.name] = float(x)
        state, _ = _point_state(spec, params)
        return float(scalar_of_state(state))

    xs = axis.values()
    fs = np.array([scalar_at(x) for x in xs])
    crossings = []
    for i, (f0, f1) in enumerate(zip(fs[:-1], fs[1:])):
        if f0 == 0.0:
            crossings.append(float(xs[i]))
        if f0 * f1 < 0.0:
            lo, hi = float(xs[i]), float(xs[i + 1])
            flo = f0
            target = tol * (axis.max - axis.min)
            while hi - lo > target:
                mid = 0.5 * (lo + hi)
                fm = scalar_at(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if flo * fm < 0.0:
                    hi = mid
                else:
                    lo = mid
                    flo = fm
            crossings.append(0.5 * (lo + hi))
    if len(fs) and fs[-1] == 0.0:
        crossings.append(float(xs[-1]))
    return sorted(set(crossings))
