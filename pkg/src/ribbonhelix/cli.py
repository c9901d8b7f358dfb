"""Command-line surface tying the library together.

Subcommands:

  geometry   curvature state -> descriptors, class, report, optional mesh
  solve      loads -> equilibrium -> descriptors -> class -> report/mesh
  classify   print the morphology class of the configured state
  mesh       tessellate the configured state and export OBJ/PLY
  sweep      stream a parameter sweep to CSV
  verify     run the numerical-oracle suites and print residuals

Exit status: 0 on success, 2 on configuration errors, 3 when a verification
residual exceeds its tolerance.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .config import ConfigError, JobConfig, load_config, serialize_config
from .elasticity import (
    RibbonSection,
    SurfaceStressSpec,
    solve_single_surface,
    solve_stationary_numeric,
    solve_two_surface,
)
from .export import export_mesh, export_sweep_csv, sweep_csv_rows
from .geometry import PrincipalCurvatureState, _alpha_beta_tau, classify, descriptors, frame_at, _rk4_paths, centerline_point
from .surface import RibbonExtent, tessellate
from .sweep import iter_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESIDUAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ribbonhelix",
        description="equilibrium helical ribbon shapes from curvatures or loads",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="YAML job configuration")
        p.add_argument("--out", help="output directory")
        p.add_argument("--format", choices=("obj", "ply", "csv"), help="export format")
        p.add_argument("--tol", type=float, help="classification tolerance override")
        p.add_argument("--samples", help="mesh sampling as SxT, e.g. 240x24")
        p.add_argument("--quiet", action="store_true", help="suppress the report")

    common(sub.add_parser("solve", help="mechanical pipeline: loads to shape"))
    common(sub.add_parser("geometry", help="geometric pipeline: curvatures to shape"))
    common(sub.add_parser("classify", help="morphology class only"))
    common(sub.add_parser("mesh", help="tessellate and export the surface"))
    common(sub.add_parser("sweep", help="stream a parameter sweep as CSV"))

    v = sub.add_parser("verify", help="run the numerical-oracle suites")
    v.add_argument("--tol", type=float, default=1e-8, help="residual tolerance")
    v.add_argument("--seed", type=int, default=0, help="random corpus seed")
    v.add_argument("--quiet", action="store_true")
    return parser


def _parse_samples(text: str):
    try:
        s_part, t_part = text.lower().split("x")
        return int(s_part), int(t_part)
    except ValueError as exc:
        raise ConfigError(f"--samples must look like 240x24, got {text!r}") from exc


def _state_residuals(state: PrincipalCurvatureState) -> dict:
    alpha, beta, tau = _alpha_beta_tau(state)
    ident = abs(alpha * alpha - beta * beta - tau * tau) / max(alpha * alpha, 1.0)
    worst = 0.0
    for s in (0.0, 0.7, 1.9, 4.3):
        fr = frame_at(state, s)
        vecs = (fr.tangent, fr.normal, fr.binormal)
        for i in range(3):
            worst = max(worst, abs(float(vecs[i] @ vecs[i]) - 1.0))
            for j in range(i + 1, 3):
                worst = max(worst, abs(float(vecs[i] @ vecs[j])))
    return {"alpha_identity": float(ident), "frame_orthonormality": float(worst)}


def _resolve_state(cfg: JobConfig):
    """State plus (maybe) an equilibrium solution for the configured mode."""
    if cfg.mode == "geometric":
        return cfg.state(), None
    if cfg.mode == "sweep":
        raise ConfigError("sweep configurations have no single state")
    section = cfg.section()
    f_plus, f_minus = cfg.loads()
    if cfg.mode == "single_surface":
        solution = solve_single_surface(section, f_minus)
    elif cfg.mode == "two_surface":
        solution = solve_two_surface(section, f_plus, f_minus)
    else:
        solution = solve_stationary_numeric(section, f_plus=f_plus, f_minus=f_minus)
    state = PrincipalCurvatureState(solution.kappa1, solution.kappa2, solution.phi)
    return state, solution


def _maybe_export_mesh(cfg, args, state):
    if args.command == "mesh":
        fmt = args.format or "obj"
        if fmt == "csv":
            raise ConfigError("mesh export supports obj or ply")
        if not args.out:
            raise ConfigError("mesh export needs --out")
    elif args.format in ("obj", "ply") and args.out:
        fmt = args.format
    else:
        return None
    extent_cfg = cfg.data["extent"]
    if args.samples:
        ns, nt = _parse_samples(args.samples)
    else:
        ns, nt = extent_cfg["samples_s"], extent_cfg["samples_t"]
    extent = RibbonExtent(extent_cfg["length"], extent_cfg["width"], ns, nt)
    mesh = tessellate(state, extent)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"ribbon.{fmt}"
    export_mesh(mesh, fmt, path)
    return str(path)


def _solution_dict(solution) -> dict:
    return {
        "kappa1": float(solution.kappa1),
        "kappa2": float(solution.kappa2),
        "phi": float(solution.phi),
        "q": float(solution.q),
        "eps_xx": float(solution.eps_xx),
        "eps_yy": float(solution.eps_yy),
        "eps_xy": float(solution.eps_xy),
        "eps_zz": float(solution.eps_zz),
        "energy": float(solution.energy),
        "degenerate": bool(solution.degenerate),
    }


def _descriptor_dict(desc) -> dict:
    return {
        "alpha": float(desc.alpha),
        "beta": float(desc.beta),
        "tau": float(desc.tau),
        "helix_angle": float(desc.helix_angle),
        "radius": float(desc.radius),
        "pitch": float(desc.pitch),
        "chirality": int(desc.chirality),
        "axis": None if desc.axis is None else [float(v) for v in desc.axis],
    }


def _run_pipeline(cfg: JobConfig, args) -> int:
    if args.command == "geometry" and cfg.mode != "geometric":
        raise ConfigError("the geometry command needs a geometric configuration")
    if args.command == "solve" and cfg.mode not in ("single_surface", "two_surface", "laminate"):
        raise ConfigError("the solve command needs a mechanical configuration")
    state, solution = _resolve_state(cfg)
    tol = args.tol if args.tol is not None else cfg.tolerance
    morph = classify(state, tol=tol)
    desc = descriptors(state)
    residuals = _state_residuals(state)
    if solution is not None and solution.gradient_norm is not None:
        residuals["gradient_norm"] = float(solution.gradient_norm)
    mesh_path = _maybe_export_mesh(cfg, args, state)

    report = {
        "inputs": cfg.data,
        "state": {
            "kappa1": float(state.kappa1),
            "kappa2": float(state.kappa2),
            "phi": float(state.phi),
        },
        "descriptors": _descriptor_dict(desc),
        "class": morph.kind.value,
        "gauss_curvature": float(morph.gauss_curvature),
        "mean_curvature": float(morph.mean_curvature),
        "residuals": residuals,
    }
    if solution is not None:
        report["solution"] = _solution_dict(solution)
    if mesh_path:
        report["mesh"] = mesh_path

    if args.command == "classify" and not args.quiet:
        print(morph.kind.value)
    elif not args.quiet:
        print(yaml.safe_dump(report, sort_keys=True, default_flow_style=False), end="")

    gate = cfg.residual_tolerance
    for name, value in residuals.items():
        if value > gate:
            if not args.quiet:
                print(f"residual {name} = {value:.3e} exceeds tolerance {gate:.3e}", file=sys.stderr)
            return EXIT_RESIDUAL
    return EXIT_OK


def _run_sweep(cfg: JobConfig, args) -> int:
    if cfg.mode != "sweep":
        raise ConfigError("the sweep command needs a sweep configuration")
    spec = cfg.sweep_spec()
    records = iter_sweep(spec)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "sweep.csv"
        export_sweep_csv(spec, records, path)
        if not args.quiet:
            print(str(path))
    else:
        import csv as _csv

        writer = _csv.writer(sys.stdout)
        for row in sweep_csv_rows(spec, records):
            writer.writerow(row)
    return EXIT_OK


# --- verification suites ----------------------------------------------------


def verify_geometry_identities(rng, n_states=200):
    """Worst residuals of the closed-form identities over random states."""
    worst_ident = 0.0
    worst_ortho = 0.0
    worst_pitch = 0.0
    for _ in range(n_states):
        state = PrincipalCurvatureState(
            rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-np.pi / 2, np.pi / 2)
        )
        alpha, beta, tau = _alpha_beta_tau(state)
        worst_ident = max(
            worst_ident,
            abs(alpha * alpha - beta * beta - tau * tau) / max(alpha * alpha, 1e-300),
        )
        res = _state_residuals(state)
        worst_ortho = max(worst_ortho, res["frame_orthonormality"])
        if alpha > 1e-8:
            desc = descriptors(state)
            s0 = rng.uniform(0, 2 * np.pi / alpha)
            gap = np.linalg.norm(
                centerline_point(state, s0 + 2 * np.pi / alpha) - centerline_point(state, s0)
            )
            worst_pitch = max(
                worst_pitch, abs(gap - abs(desc.pitch)) / max(abs(desc.pitch), 1.0 / alpha)
            )
    return [
        ("alpha^2 = beta^2 + tau^2 (relative)", worst_ident),
        ("frame orthonormality", worst_ortho),
        ("turn displacement vs pitch (relative)", worst_pitch),
    ]


def verify_ode_oracle(rng, n_states=5, s_max=10.0, step=1e-3):
    """Closed-form centerline/frames vs the Runge-Kutta integration."""
    k1 = rng.uniform(-2, 2, n_states)
    k2 = rng.uniform(-2, 2, n_states)
    phi = rng.uniform(-np.pi / 2, np.pi / 2, n_states)
    s_samples, P, r1, r2 = _rk4_paths(k1, k2, phi, s_max, step, stride=20)
    worst = 0.0
    for i in range(n_states):
        state = PrincipalCurvatureState(k1[i], k2[i], phi[i])
        exact_P = centerline_point(state, s_samples)
        fr = frame_at(state, s_samples)
        worst = max(worst, float(np.max(np.linalg.norm(P[i] - exact_P, axis=1))))
        worst = max(worst, float(np.max(np.linalg.norm(r1[i] - fr.r1, axis=1))))
        worst = max(worst, float(np.max(np.linalg.norm(r2[i] - fr.r2, axis=1))))
    return [("frame integration vs closed forms", worst)]


def verify_elasticity(rng, n_cases=25):
    """Closed-form equilibria vs the stationarity solver, plus gradients."""
    worst_rel = 0.0
    worst_grad = 0.0
    for _ in range(n_cases):
        H = 10.0 ** rng.uniform(-3, 0)
        E = 10.0 ** rng.uniform(5, 9)
        nu = rng.uniform(0.0, 0.45)
        section = RibbonSection.homogeneous(H, E, nu)
        scale = E * H * 10.0 ** rng.uniform(-3, -1)
        f_minus = SurfaceStressSpec(
            rng.uniform(-1, 1) * scale, rng.uniform(-1, 1) * scale,
            rng.uniform(-np.pi / 2, np.pi / 2),
        )
        closed = solve_single_surface(section, f_minus)
        numeric = solve_stationary_numeric(section, f_minus=f_minus)
        a = _solution_vector(closed, H)
        b = _solution_vector(numeric, H)
        ref = max(float(np.max(np.abs(a))), 1e-300)
        worst_rel = max(worst_rel, float(np.max(np.abs(a - b))) / ref)
        worst_grad = max(worst_grad, numeric.gradient_norm, closed.gradient_norm)
    return [
        ("closed form vs stationarity solver (relative)", worst_rel),
        ("energy gradient norm at solutions", worst_grad),
    ]


def _solution_vector(sol, H):
    """Orientation-free coordinates of a solution, nondimensionalized."""
    b = sol.bending_tensor() * H
    return np.array(
        [b[0, 0], b[1, 1], b[0, 1], sol.q * H, sol.eps_xx, sol.eps_yy, sol.eps_xy, sol.eps_zz]
    )


def _run_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    rows = []
    rows += verify_geometry_identities(rng)
    rows += verify_ode_oracle(rng)
    rows += verify_elasticity(rng)
    failed = False
    for name, residual in rows:
        ok = residual <= args.tol
        failed = failed or not ok
        if not args.quiet:
            print(f"{'PASS' if ok else 'FAIL'}  {name}: residual {residual:.3e} (tol {args.tol:.1e})")
    return EXIT_RESIDUAL if failed else EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _run_verify(args)
        cfg = load_config(args.config)
        if args.command == "sweep":
            return _run_sweep(cfg, args)
        return _run_pipeline(cfg, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
