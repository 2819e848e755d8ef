"""Manifest ingestion, command dispatch, and machine-readable reports.

The ``crhull`` command reads a JSON manifest describing a manifold in
normal form plus run parameters, dispatches to the analysis modules, and
emits a canonical JSON report.  Reports are byte-deterministic for a fixed
(manifest, flags, seed) triple: keys are sorted, reduction orders are
fixed, and wall-clock timing is only included on request (``--timing``).

Exit codes: 0 = certified or evidence produced, 1 = not certified,
2 = invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import __version__
from .bipoly import BiPoly
from .certify import (
    certify_flat,
    certify_radius,
    branch_residual,
    forward_check,
    kallin_check_m2,
    kallin_check_m3,
    lipschitz_audit,
    m3_sheets,
    separation_poly_m2,
    separation_poly_m3,
    solve_branch_f,
    solve_branch_g,
)
from .errors import CrhullError, ManifestError
from .manifold import Domain, ManifoldSpec, validate_spec
from .normalform import jet_at, reduce
from .numerics import DiskGrid
from .hull import hull_scan, sample_manifold
from .singular import classify_point, locate_eta, trace_locus

COMMANDS = (
    "classify",
    "locus",
    "normalform",
    "certify-radius",
    "certify-flat",
    "branches",
    "kallin-m2",
    "kallin-m3",
    "hull-probe",
)

MANIFEST_VERSION = 1


@dataclass(frozen=True)
class Manifest:
    """Parsed and validated manifest."""

    version: int
    spec: ManifoldSpec
    run: dict = field(default_factory=dict)

    def canonical(self) -> str:
        data = {
            "version": self.version,
            "manifold": self.spec.fingerprint_data(),
            "run": self.run,
        }
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def fingerprint(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


# ---------------------------------------------------------------------- #
# manifest parsing


def _term_list(raw, t_arity: int, path: str) -> BiPoly:
    if not isinstance(raw, list):
        raise ManifestError(f"{path}: expected a list of terms")
    terms = {}
    for i, item in enumerate(raw):
        where = f"{path}[{i}]"
        if not isinstance(item, dict):
            raise ManifestError(f"{where}: expected an object")
        try:
            a = tuple(int(x) for x in item.get("a", []))
            b = int(item["b"])
            c = int(item["c"])
            coef = complex(float(item.get("re", 0.0)), float(item.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"{where}: {exc}") from exc
        if len(a) != t_arity:
            raise ManifestError(f"{where}.a: expected {t_arity} exponents, got {len(a)}")
        if b < 0 or c < 0 or any(e < 0 for e in a):
            raise ManifestError(f"{where}: negative exponent")
        key = (a, b, c)
        terms[key] = terms.get(key, 0.0) + coef
    return BiPoly(terms, t_arity)


def parse_manifest(text: str) -> Manifest:
    """Parse manifest JSON; raise :class:`ManifestError` with a field path.

    Spec-invariant violations (vanishing orders, realness, flatness) are
    rejected with the diagnostics produced by :func:`validate_spec`.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ManifestError("top level: expected an object")
    version = data.get("version", MANIFEST_VERSION)
    if version != MANIFEST_VERSION:
        raise ManifestError(f"version: unsupported manifest version {version}")
    m = data.get("manifold")
    if not isinstance(m, dict):
        raise ManifestError("manifold: required object missing")
    try:
        n = int(m["n"])
        gamma = float(m["gamma"])
        flat = bool(m.get("flat", False))
        dom = m.get("domain", {})
        domain = Domain(T=float(dom.get("T", 1.0)), R=float(dom.get("R", 1.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(f"manifold: {exc}") from exc
    if n < 2:
        raise ManifestError("manifold.n: must be >= 2")
    t_arity = n - 2
    F = _term_list(m.get("F", []), t_arity, "manifold.F")
    f_raw = m.get("f", [])
    if not isinstance(f_raw, list) or len(f_raw) != t_arity:
        raise ManifestError(f"manifold.f: expected {t_arity} graph polynomials")
    f = tuple(
        _term_list(fj, t_arity, f"manifold.f[{j}]") for j, fj in enumerate(f_raw)
    )
    try:
        spec = ManifoldSpec(n=n, gamma=gamma, F=F, f=f, domain=domain, flat=flat)
    except ValueError as exc:
        raise ManifestError(f"manifold: {exc}") from exc
    diagnostics = validate_spec(spec)
    if diagnostics:
        raise ManifestError("; ".join(diagnostics))
    run = data.get("run", {})
    if not isinstance(run, dict):
        raise ManifestError("run: expected an object")
    return Manifest(version=version, spec=spec, run=run)


def serialize_manifest(manifest: Manifest) -> str:
    """Canonical serialization: sorted keys, sorted exponent triples."""
    return manifest.canonical()


# ---------------------------------------------------------------------- #
# value encoding


def _cplx(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _poly_terms(P: BiPoly) -> list[dict]:
    return [
        {"a": list(a), "b": b, "c": c, "re": v.real, "im": v.imag}
        for (a, b, c), v in sorted(P.terms.items())
    ]


# ---------------------------------------------------------------------- #
# command implementations


def _origin(spec: ManifoldSpec, run: dict) -> tuple[float, ...]:
    t = run.get("t", [0.0] * (spec.n - 2))
    return tuple(float(x) for x in t)


def _t_grid(spec: ManifoldSpec, count: int) -> list[tuple[float, ...]]:
    if spec.n == 2:
        return [()]
    axes = [np.linspace(-spec.domain.T, spec.domain.T, count) for _ in range(spec.n - 2)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return [tuple(float(m[idx]) for m in mesh) for idx in np.ndindex(mesh[0].shape)]


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        nr, na = text.lower().split("x")
        return int(nr), int(na)
    except ValueError as exc:
        raise ManifestError(f"--grid: expected NRxNA, got {text!r}") from exc


def _newton_tol(args) -> float:
    return args.tol if args.tol else 1e-12


def _cmd_classify(manifest: Manifest, args) -> tuple[str, dict, list[tuple]]:
    spec = manifest.spec
    t = _origin(spec, manifest.run)
    eta, converged, residual = locate_eta(spec, t, tol=_newton_tol(args))
    jet = jet_at(spec, t, eta)
    cls = classify_point(jet)
    payload = {
        "t": list(t),
        "eta": _cplx(eta),
        "locus_converged": converged,
        "locus_residual": residual,
        "kind": cls.kind,
        "gamma_t": cls.gamma_t,
        "beta11": _cplx(cls.beta11),
        "beta02": _cplx(cls.beta02),
    }
    return "evidence-only", payload, []


def _cmd_locus(manifest: Manifest, args) -> tuple[str, dict, list[tuple]]:
    spec = manifest.spec
    count = args.t_grid or int(manifest.run.get("t_count", 11))
    grid = _t_grid(spec, count)
    locus = trace_locus(spec, grid, tol=_newton_tol(args))
    payload = {
        "points": len(grid),
        "converged": sum(locus.converged),
        "max_residual": locus.max_residual,
        "eta": [_cplx(e) for e in locus.eta],
        "t_grid": [list(t) for t in locus.t_grid],
    }
    csv_rows = [
        tuple(t) + (e.real, e.imag, int(ok))
        for t, e, ok in zip(locus.t_grid, locus.eta, locus.converged)
    ]
    header = tuple(f"t{i+1}" for i in range(spec.n - 2)) + ("re_eta", "im_eta", "converged")
    return "evidence-only", payload, [header] + csv_rows


def _cmd_normalform(manifest: Manifest, args) -> tuple[str, dict, list[tuple]]:
    spec = manifest.spec
    t = _origin(spec, manifest.run)
    eta, converged, residual = locate_eta(spec, t, tol=_newton_tol(args))
    jet = jet_at(spec, t, eta)
    nf = reduce(jet)
    payload = {
        "t": list(t),
        "eta": _cplx(eta),
        "locus_converged": converged,
        "locus_residual": residual,
        "gamma_t": nf.gamma_t,
        "theta": nf.theta,
        "beta11": _cplx(jet.b(1, 1)),
        "g_hat": _poly_terms(nf.g_hat),
        "change_log": [
            [entry[0]] + [_cplx(v) if isinstance(v, complex) else v for v in entry[1:]]
            for entry in nf.change_log
        ],
    }
    return "evidence-only", payload, []


def _slice_F(spec: ManifoldSpec) -> BiPoly:
    if spec.n != 2:
        raise ManifestError("this command requires a 2-D manifold (n = 2)")
    return spec.F


def _cmd_certify_radius(manifest: Manifest, args) -> tuple[str, dict, list[tuple]]:
    spec = manifest.spec
    F = _slice_F(spec)
    cr = certify_radius(spec.gamma, F, spec.domain.R)
    payload = {
        "r": cr.r,
        "threshold": cr.threshold,
        "c2_at_r": cr.c2_at_r,
        "bisection_steps": cr.bisection_steps,
        "certified": cr.certified,
    }
    return ("certified" if cr.certified else "not-certified"), payload, []


def _cmd_certify_flat(manifest: Manifest, args) -> tuple[str, dict, list[tuple]]:
    spec = manifest.spec
    if not spec.flat:
        raise ManifestError("certify-flat requires a flat manifest")
    count = args.t_grid or int(manifest.run.get("t_count", 21))
    cert = certify_flat(spec, _t_grid(spec, count))
    payload = {
        "T_star": cert.T_star,
        "r_star": cert.r_star,
        "certified": cert.certified,
        "diagnostics": list(cert.diagnostics),
        "per_slice": [
            {
                "t": list(s.t),
                "gamma_t": s.gamma_t,
                "threshold": s.threshold,
                "g_hat_c2": s.g_hat_c2,
                "margin": s.margin,
                "hyperbolic": s.hyperbolic,
                "converged": s.converged,
                "failure": s.failure,
            }
            for s in cert.per_slice
        ],
    }
    header = ("margin", "gamma_t", "threshold", "g_hat_c2", "hyperbolic")
    csv_rows = [
        tuple(s.t) + (s.margin, s.gamma_t, s.threshold, s.g_hat_c2, int(s.hyperbolic))
        for s in cert.per_slice
    ]
    t_cols = tuple(f"t{i+1}" for i in range(spec.n - 2))
    return (
        ("certified" if cert.certified else "not-certified"),
        payload,
        [t_cols + header] + csv_rows,
    )


def _branch_radius(manifest: Manifest, args) -> float:
    run_r = manifest.run.get("r")
    if run_r is not None:
        return float(run_r)
    spec = manifest.spec
    cr = certify_radius(spec.gamma, _slice_F(spec), spec.domain.R)
    if not cr.certified:
        raise ManifestError("no certified radius available; supply run.r")
    return cr.r


def _cmd_branches(manifest: Manifest, args) -> tuple[str, dict, list[tuple]]:
    spec = manifest.spec
    F = _slice_F(spec)
    r = _branch_radius(manifest, args)
    nr, na = _parse_grid(args.grid) if args.grid else (32, 64)
    grid = DiskGrid(radius=r, radial_count=nr, angular_count=na)
    zeta = grid.points
    s1 = solve_branch_f(spec.gamma, F, (), zeta)
    s2 = solve_branch_g(spec.gamma, F, (), zeta)
    max_ratio, alpha = lipschitz_audit(
        spec.gamma, F, r, pair_count=int(manifest.run.get("pairs", 10000)), seed=args.seed
    )
    payload = {
        "r": r,
        "grid": grid.metadata(),
        "max_residual_f": float(np.max(branch_residual(spec.gamma, F, (), zeta, s1))),
        "max_residual_g": float(np.max(branch_residual(spec.gamma, F, (), zeta, s2))),
        "max_forward_check_f": float(np.max(forward_check(spec.gamma, F, s1, zeta))),
        "max_forward_check_g": float(np.max(forward_check(spec.gamma, F, s2, zeta))),
        "lipschitz_max_ratio": max_ratio,
        "lipschitz_alpha": alpha,
    }
    return "evidence-only", payload, []


def _cmd_kallin_m2(manifest: Manifest, args) -> tuple[str, dict, list[tuple]]:
    spec = manifest.spec
    F = _slice_F(spec)
    r = _branch_radius(manifest, args)
    nr, na = _parse_grid(args.grid) if args.grid else (32, 64)
    grid = DiskGrid(radius=r, radial_count=nr, angular_count=na)
    rep = kallin_check_m2(spec.gamma, F, r, grid)
    payload = {
        "side1_min_margin": rep.side1_min_margin,
        "side2_min_margin": rep.side2_min_margin,
        "zero_fiber_ok": rep.zero_fiber_ok,
        "alpha": rep.alpha,
        "grid": rep.grid,
    }
    zeta = grid.points[np.abs(grid.points) > 0]
    psi1 = separation_poly_m2(spec.gamma, zeta, np.asarray(solve_branch_f(spec.gamma, F, (), zeta).linear_part))
    psi2 = separation_poly_m2(spec.gamma, zeta, np.asarray(solve_branch_g(spec.gamma, F, (), zeta).linear_part))
    csv_rows = [
        (z.real, z.imag, p1.real, p2.real)
        for z, p1, p2 in zip(zeta, psi1, psi2)
    ]
    return "evidence-only", payload, [("re_zeta", "im_zeta", "re_psi_s1", "re_psi_s2")] + csv_rows


def _cmd_kallin_m3(manifest: Manifest, args) -> tuple[str, dict, list[tuple]]:
    spec = manifest.spec
    r = float(manifest.run.get("r", min(0.04, spec.domain.R)))
    nu, nv = _parse_grid(args.grid) if args.grid else (32, 32)
    nt = args.t_grid or int(manifest.run.get("t_count", 9))
    rep = kallin_check_m3(spec, r, grid_shape=(nt, nu, nv))
    payload = {
        "side1_min_margin": rep.side1_min_margin,
        "side2_min_margin": rep.side2_min_margin,
        "zero_fiber_ok": rep.zero_fiber_ok,
        "epsilon": rep.alpha,
        "grid": rep.grid,
    }
    eps = rep.alpha
    csv_rows = []
    us = np.linspace(-r, r, nu)
    vs = np.linspace(-r, r, nv)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    uu, vv = uu.ravel(), vv.ravel()
    for t in np.linspace(-spec.domain.T, spec.domain.T, nt):
        v1, v2 = m3_sheets(spec, float(t), uu, vv)
        q1 = separation_poly_m3(eps, v1[:, 1], v1[:, 2])
        q2 = separation_poly_m3(eps, v2[:, 1], v2[:, 2])
        csv_rows.extend(
            (float(t), float(u), float(v), float(a.real), float(b.real))
            for u, v, a, b in zip(uu, vv, q1, q2)
        )
    return "evidence-only", payload, [("t", "u", "v", "re_q_v1", "re_q_v2")] + csv_rows


def _cmd_hull_probe(manifest: Manifest, args) -> tuple[str, dict, list[tuple]]:
    spec = manifest.spec
    run = manifest.run
    nr, na = _parse_grid(args.grid) if args.grid else (8, 16)
    radius = float(run.get("r", spec.domain.R))
    radii = tuple(float(x) for x in run.get("disk_radii", ())) or None
    grid = (
        DiskGrid(radius=radius, radial_count=nr, angular_count=na, radii=radii)
        if radii
        else DiskGrid(radius=radius, radial_count=nr, angular_count=na)
    )
    t_counts = run.get("t_counts", [5] * (spec.n - 2))
    cloud = sample_manifold(spec, t_counts, grid)
    raw_queries = run.get("queries", [])
    if not isinstance(raw_queries, list) or not raw_queries:
        raise ManifestError("hull-probe requires run.queries ([re1, im1, re2, im2, ...] per query)")
    queries = []
    for k, q in enumerate(raw_queries):
        if not isinstance(q, list) or len(q) != 2 * spec.n:
            raise ManifestError(f"run.queries[{k}]: expected {2 * spec.n} floats")
        queries.append([complex(q[2 * i], q[2 * i + 1]) for i in range(spec.n)])
    degree = args.degree or int(run.get("degree", 4))
    results = hull_scan(cloud, queries, degree)
    payload = {
        "cloud_size": len(cloud),
        "degree": degree,
        "density": cloud.density,
        "results": [
            {
                "query": [_cplx(z) for z in q],
                "ratio": None if res is None else res.ratio,
                "converged": None if res is None else res.converged,
                "iterations": None if res is None else res.iterations,
            }
            for q, res in zip(queries, results)
        ],
        "note": "separation evidence about the sampled cloud only; not a convexity certificate",
    }
    coord_cols = tuple(
        f"{part}_q{i+1}" for i in range(spec.n) for part in ("re", "im")
    )
    csv_rows = [("query_index",) + coord_cols + ("ratio", "converged", "iterations")]
    for i, (q, res) in enumerate(zip(queries, results)):
        coords = tuple(x for z in q for x in (z.real, z.imag))
        if res is None:
            csv_rows.append((i,) + coords + ("", 0, 0))
        else:
            csv_rows.append((i,) + coords + (res.ratio, int(res.converged), res.iterations))
    return "evidence-only", payload, csv_rows


_HANDLERS = {
    "classify": _cmd_classify,
    "locus": _cmd_locus,
    "normalform": _cmd_normalform,
    "certify-radius": _cmd_certify_radius,
    "certify-flat": _cmd_certify_flat,
    "branches": _cmd_branches,
    "kallin-m2": _cmd_kallin_m2,
    "kallin-m3": _cmd_kallin_m3,
    "hull-probe": _cmd_hull_probe,
}

_EXIT_BY_VERDICT = {"certified": 0, "evidence-only": 0, "not-certified": 1, "invalid-input": 2}


def run(command: str, manifest: Manifest, args) -> tuple[dict, list[tuple], int]:
    """Dispatch a command; returns (report dict, csv rows, exit code)."""
    tolerances = {
        "newton_tol": _newton_tol(args),
        "off_locus_tol": 1e-9,
        "parabolic_band": 1e-9,
        "branch_residual_tol": 1e-10,
        "zero_fiber_rel_tol": 1e-14 if command == "kallin-m2" else 1e-12,
        "irls_rel_tol": 1e-9,
    }
    conventions = {
        "c2_norm": "max coefficient bound over {F, F_x, F_y, F_xx, F_xy, F_yy} on the closed disk",
        "taylor_beta": "raw partial d^{i+j}/dw^i dwbar^j divided by i!j!",
        "certification_inputs": "polynomial only; finite-difference jets are non-certified",
    }
    started = time.monotonic()
    verdict, payload, csv_rows = _HANDLERS[command](manifest, args)
    elapsed = time.monotonic() - started
    report = {
        "tool_version": __version__,
        "command": command,
        "manifest_fingerprint": manifest.fingerprint(),
        "seed": args.seed,
        "flags": {
            "grid": args.grid,
            "t_grid": args.t_grid,
            "degree": args.degree,
            "tol": args.tol,
        },
        "tolerances": tolerances,
        "conventions": conventions,
        "verdict": verdict,
        "payload": payload,
        "timing_s": elapsed if args.timing else None,
    }
    return report, csv_rows, _EXIT_BY_VERDICT[verdict]


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _write_csv(path: str, rows: list[tuple]) -> None:
    import csv as _csv

    with open(path, "w", newline="") as fh:
        _csv.writer(fh).writerows(rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crhull",
        description="CR-singularity classification and polynomial-convexity certificates",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--manifest", required=True, help="path to the manifest JSON")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--grid", help="disk grid as NRxNA (rings x angles)")
    parser.add_argument("--t-grid", type=int, dest="t_grid", help="t samples per axis")
    parser.add_argument("--degree", type=int, help="polynomial degree for hull probes")
    parser.add_argument(
        "--tol",
        type=float,
        help="Newton tolerance for the evidence commands (classify, locus, "
        "normalform); certificates always use pinned tolerances",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled audits")
    parser.add_argument("--csv", help="write plot-ready CSV rows here")
    parser.add_argument(
        "--timing", action="store_true", help="include wall-clock timing (breaks byte determinism)"
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.manifest) as fh:
            manifest = parse_manifest(fh.read())
    except OSError as exc:
        print(f"error: cannot read manifest: {exc}", file=sys.stderr)
        return 2
    except ManifestError as exc:
        print(f"error: invalid manifest: {exc}", file=sys.stderr)
        return 2
    try:
        report, csv_rows, code = run(args.command, manifest, args)
    except (CrhullError, ValueError) as exc:
        report = {
            "tool_version": __version__,
            "command": args.command,
            "manifest_fingerprint": manifest.fingerprint(),
            "verdict": "invalid-input",
            "error": str(exc),
        }
        text = render_report(report)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 2
    text = render_report(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.csv and csv_rows:
        _write_csv(args.csv, csv_rows)
    return code


if __name__ == "__main__":
    sys.exit(main())
