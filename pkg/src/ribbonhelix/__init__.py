"""ribbonhelix: equilibrium helical shapes of thin elastic ribbons.

Prescribed principal curvatures (or the surface stresses and residual
strains that produce them) map to closed-form helical centerlines, moving
frames, full surface meshes, helix descriptors and a morphology class, with
numerical oracles validating every closed form.
"""

__version__ = "0.1.0"

from .elasticity import (
    DecoupledLoads,
    EquilibriumSolution,
    Layer,
    RibbonSection,
    SurfaceStressSpec,
    decouple_two_surfaces,
    energy_density,
    laminate_prestretch_to_residual,
    solve_single_surface,
    solve_stationary_numeric,
    solve_two_surface,
)
from .geometry import (
    FrameState,
    HelixDescriptors,
    Morphology,
    MorphologyKind,
    PrincipalCurvatureState,
    centerline_point,
    classify,
    descriptors,
    frame_at,
    integrate_frames_numeric,
)
from .mesh import ContactReport, TriangleMesh, discrete_curvatures, edge_contact
from .surface import RibbonExtent, edge_curve, rotation_matrix, surface_point, tessellate
from .sweep import GridAxis, PhaseTable, SweepRecord, SweepSpec, find_boundary, iter_sweep, run_sweep

__all__ = [
    "__version__",
    "PrincipalCurvatureState",
    "HelixDescriptors",
    "FrameState",
    "Morphology",
    "MorphologyKind",
    "descriptors",
    "centerline_point",
    "frame_at",
    "integrate_frames_numeric",
    "classify",
    "RibbonExtent",
    "edge_curve",
    "rotation_matrix",
    "surface_point",
    "tessellate",
    "TriangleMesh",
    "ContactReport",
    "discrete_curvatures",
    "edge_contact",
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
    "GridAxis",
    "SweepSpec",
    "SweepRecord",
    "PhaseTable",
    "iter_sweep",
    "run_sweep",
    "find_boundary",
]
