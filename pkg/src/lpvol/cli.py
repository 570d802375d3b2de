"""Batch command-line front end.

Subcommands compute plot-ready tables (intrinsic volumes, asymptotic
comparisons, exponential profiles, curvature records, limit-law
convergence) and run self-contained validation suites.  Every output
embeds a manifest (command, parameters, quadrature config, seed, tool
version) and re-running the same invocation reproduces the bytes
exactly, Monte Carlo included; wall time goes to stderr only so it
cannot perturb the output.

Output schema: JSON is canonical ({"schema_version": 1, "manifest":
..., "columns": [...], "rows": [[...]]}, sorted keys, no whitespace,
non-finite numbers as null); CSV is a projection of the same rows with
the manifest on a leading "# manifest=" comment line.  Every numeric
row carries an estimated-error column.

Config files are key=value lines (# comments allowed) overriding the
quadrature defaults: rel_tol, abs_tol, max_subdivisions,
theta_truncation_factor, singularity_split.  The environment variable
LPVOL_THREADS caps how many worker threads a command may use for its
independent rows; any setting yields identical output bytes.

Exit codes: 0 success, 1 validation-suite failure, 2 invalid arguments,
3 quadrature or solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import metadata

import numpy as np

from .errors import (ConvergenceFailure, DegenerateInput, DomainError,
                     QuadratureFailure)
from .specfun import DEFAULT_CONFIG, QuadConfig
from .exactvol import (PBallSpec, intrinsic_volume, intrinsic_volume_weighted,
                       steiner_polynomial, surface_moment)
from . import oracles
from .oracles import McConfig, steiner_mc_volume
from .asymptotics import (bulk_asymptotic, exp_profile, left_edge_asymptotic,
                          phase_maximizer, profile_references,
                          right_edge_asymptotic, surface_area_asymptotic)
from .curvature import (boundary_point, curvature_density, gauss_curvature,
                        gauss_map, principal_curvatures, sigma_curvatures,
                        support_function)
from .maxwell import convergence_table

__all__ = ["RunManifest", "main"]

SCHEMA_VERSION = 1

# engineering bounds for the error columns of closed-form or
# solver-backed values (documented here, not re-estimated per call):
# profile/curvature solvers iterate to machine precision, table limits
# combine two quadratures at cfg.rel_tol each
_SOLVER_ERR = 1e-12
_TABLE_ERR_FACTOR = 10.0


def _tool_version() -> str:
    try:
        return metadata.version("lpvol")
    except metadata.PackageNotFoundError:
        return "unknown"


@dataclass(frozen=True)
class RunManifest:
    """Provenance embedded in every output: enough to re-run it."""

    command: str
    parameters: dict
    config: dict
    seed: object
    version: str

    def to_dict(self) -> dict:
        return {"command": self.command, "parameters": self.parameters,
                "config": self.config, "seed": self.seed,
                "version": self.version}


def _manifest(command: str, parameters: dict, cfg: QuadConfig,
              seed=None) -> RunManifest:
    config = {"rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol,
              "max_subdivisions": cfg.max_subdivisions,
              "theta_truncation_factor": cfg.theta_truncation_factor,
              "singularity_split": cfg.singularity_split}
    return RunManifest(command, parameters, config, seed, _tool_version())


# -- argument helpers ------------------------------------------------------

def _float_list(text: str, flag: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise DomainError(f"{flag} expects a comma-separated number list, "
                          f"got {text!r}")


def _int_list(text: str, flag: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise DomainError(f"{flag} expects a comma-separated integer list, "
                          f"got {text!r}")


def _weights_arg(text: str) -> list:
    """--weights takes an inline comma list or a path to a file holding
    one (whitespace or comma separated)."""
    if os.path.exists(text):
        text = ",".join(open(text).read().replace(",", " ").split())
    return _float_list(text, "--weights")


def _load_config(path) -> QuadConfig:
    if path is None:
        return DEFAULT_CONFIG
    fields = {f: int if f == "max_subdivisions" else float
              for f in ("rel_tol", "abs_tol", "max_subdivisions",
                        "theta_truncation_factor", "singularity_split")}
    overrides = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise DomainError(f"cannot read config file {path}: {exc}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected key=value, "
                              f"got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in fields:
            raise DomainError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            overrides[key] = fields[key](val)
        except ValueError:
            raise DomainError(f"{path}:{lineno}: bad value {val!r} "
                              f"for {key}")
    return QuadConfig(**{**{
        "rel_tol": DEFAULT_CONFIG.rel_tol,
        "abs_tol": DEFAULT_CONFIG.abs_tol,
        "max_subdivisions": DEFAULT_CONFIG.max_subdivisions,
        "theta_truncation_factor": DEFAULT_CONFIG.theta_truncation_factor,
        "singularity_split": DEFAULT_CONFIG.singularity_split,
    }, **overrides})


def _thread_cap() -> int:
    raw = os.environ.get("LPVOL_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"LPVOL_THREADS must be a positive integer, "
                          f"got {raw!r}")
    if cap < 1:
        raise DomainError(f"LPVOL_THREADS must be >= 1, got {cap}")
    return cap


def _pmap(fn, items):
    """Ordered map over independent rows, threaded up to the cap.

    Rows are pure computations on immutable inputs, and collection
    preserves order, so the thread count never changes the output."""
    items = list(items)
    cap = _thread_cap()
    if cap <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(cap, len(items))) as pool:
        return list(pool.map(fn, items))


# -- output ----------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, (np.integer, int)):
        return int(v)
    return v


def _csv_cell(v):
    if isinstance(v, (np.floating, float)):
        return repr(float(v))
    if isinstance(v, (np.integer, int)):
        return str(int(v))
    return str(v)


def _emit(args, manifest: RunManifest, columns, rows) -> None:
    mdict = manifest.to_dict()
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "manifest": mdict,
               "columns": list(columns),
               "rows": [[_jsonable(v) for v in row] for row in rows]}
        text = json.dumps(doc, sort_keys=True,
                          separators=(",", ":")) + "\n"
    else:
        buf = io.StringIO()
        buf.write("# manifest=" + json.dumps(
            {"schema_version": SCHEMA_VERSION, **mdict},
            sort_keys=True, separators=(",", ":")) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
        text = buf.getvalue()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------

def _spec_from(args) -> PBallSpec:
    if args.weights is not None:
        w = _weights_arg(args.weights)
        if len(w) != args.n:
            raise DomainError(f"-n {args.n} but --weights has {len(w)} "
                              f"entries")
        return PBallSpec(p=args.p, weights=w)
    return PBallSpec.unit(args.p, args.n)


def cmd_intrinsic(args) -> int:
    cfg = _load_config(args.config)
    spec = _spec_from(args)
    if args.all:
        js = list(range(spec.n + 1))
    elif args.j is None:
        raise DomainError("give -j or --all")
    else:
        js = [args.j]
    route = intrinsic_volume if spec.is_unit else intrinsic_volume_weighted

    def row(j):
        res = route(spec, j, cfg)
        return (j, res.value.value, res.value.log10(), res.est_rel_error)

    rows = _pmap(row, js)
    if args.all:
        # the volume sequence must be log-concave: V_j^2 >= V_(j-1) V_(j+1)
        logs = [r[2] for r in rows]
        for j in range(1, spec.n):
            if 2.0 * logs[j] < logs[j - 1] + logs[j + 1] - 1e-9:
                print(f"warning: log-concavity violated at j={j}",
                      file=sys.stderr)
    manifest = _manifest("intrinsic",
                         {"p": args.p, "n": spec.n, "j": js,
                          "weights": None if spec.is_unit
                          else list(map(float, spec.weights))}, cfg)
    _emit(args, manifest,
          ["j", "intrinsic_volume", "log10_intrinsic_volume",
           "est_rel_error"], rows)
    return 0


def cmd_asymptotic(args) -> int:
    cfg = _load_config(args.config)
    ns = _int_list(args.n, "--n")
    p = args.p
    params = {"p": p, "regime": args.regime, "n": ns}

    def face_index(n):
        if args.regime == "bulk":
            if args.alpha is None:
                raise DomainError("bulk regime needs --alpha")
            j = int(math.floor(args.alpha * n))
            if not 1 <= j <= n - 1:
                raise DomainError(f"alpha={args.alpha} gives j={j} "
                                  f"outside 1..{n - 1} at n={n}")
            return j
        if args.regime == "left":
            if args.j is None:
                raise DomainError("left regime needs --j")
            return args.j
        if args.regime == "right":
            if args.m is None:
                raise DomainError("right regime needs --m")
            return n - args.m
        return None

    if args.regime == "bulk":
        params["alpha"] = args.alpha
    elif args.regime == "left":
        params["j"] = args.j
    elif args.regime == "right":
        params["m"] = args.m

    def row(n):
        if args.regime == "surface":
            exact = surface_moment(PBallSpec.unit(p, n), (), cfg)
            log_exact = math.log(exact)
            log_asym = surface_area_asymptotic(p, n).log_abs
            err = cfg.rel_tol * _TABLE_ERR_FACTOR
        else:
            j = face_index(n)
            res = intrinsic_volume(PBallSpec.unit(p, n), j, cfg)
            log_exact = res.value.log_abs
            err = res.est_rel_error
            if args.regime == "bulk":
                log_asym = bulk_asymptotic(p, n, j, cfg).log_abs
            elif args.regime == "left":
                log_asym = math.log(left_edge_asymptotic(p, n, j))
            else:
                log_asym = right_edge_asymptotic(p, n, args.m).log_abs
        ln10 = math.log(10.0)
        return (n, log_exact / ln10, log_asym / ln10,
                math.exp(log_exact - log_asym), err)

    for n in ns:
        face_index(n)          # validate all rows before spending time
    rows = _pmap(row, ns)
    _emit(args, _manifest("asymptotic", params, cfg),
          ["n", "log10_exact", "log10_asymptotic", "exact_over_asymptotic",
           "est_rel_error"], rows)
    return 0


def cmd_profile(args) -> int:
    cfg = _load_config(args.config)
    if args.alphas is not None:
        grid = _float_list(args.alphas, "--alphas")
    else:
        step = args.grid
        if not (0.0 < step <= 0.5):
            raise DomainError(f"--grid must lie in (0, 0.5], got {step}")
        count = int(round(1.0 / step))
        grid = [min(1.0, k * step) for k in range(count + 1)]

    def row(alpha):
        pt = exp_profile(args.p, alpha, cfg)
        refs = profile_references(alpha)
        return (alpha, pt.g_value, pt.kappa_term, pt.sup_psi,
                refs.g_inf, refs.g_2, refs.g_1, refs.g_simplex, _SOLVER_ERR)

    rows = _pmap(row, grid)
    _emit(args, _manifest("profile", {"p": args.p, "alpha": grid}, cfg),
          ["alpha", "g_value", "kappa_term", "sup_psi", "g_inf", "g_2",
           "g_1", "g_simplex", "est_error"], rows)
    return 0


def cmd_curvature(args) -> int:
    cfg = _load_config(args.config)
    weights = _weights_arg(args.weights) if args.weights else None
    point = _float_list(args.point, "--point")
    n = len(point)
    if weights is not None and len(weights) != n:
        raise DomainError(f"--point has {n} entries but --weights has "
                          f"{len(weights)}")
    spec = (PBallSpec(p=args.p, weights=weights) if weights
            else PBallSpec.unit(args.p, n))
    m = args.m
    if not 1 <= m <= n:
        raise DomainError(f"--m must lie in 1..{n}, got {m}")
    pt = boundary_point(spec, point)
    lam = principal_curvatures(pt)
    normal = gauss_map(pt)
    rows = []
    for i, v in enumerate(pt.coords):
        rows.append((f"boundary_point_{i + 1}", float(v), 0.0))
    for i, v in enumerate(normal):
        rows.append((f"unit_normal_{i + 1}", float(v), _SOLVER_ERR))
    for i, v in enumerate(lam):
        rows.append((f"principal_curvature_{i + 1}", float(v),
                     _SOLVER_ERR * max(1.0, abs(float(v)))))
    sig = sigma_curvatures(pt, m)
    rows.append((f"sigma_{m - 1}_of_curvatures", sig,
                 _SOLVER_ERR * max(1.0, abs(sig))))
    k = gauss_curvature(pt)
    rows.append(("gauss_curvature", k, _SOLVER_ERR * max(1.0, k)))
    dens = curvature_density(pt, m)
    rows.append((f"curvature_density_m{m}", dens,
                 _SOLVER_ERR * max(1.0, dens)))
    h = support_function(spec, normal)
    rows.append(("support_at_normal", h, _SOLVER_ERR * max(1.0, h)))
    manifest = _manifest("curvature",
                         {"p": args.p, "weights": weights, "point": point,
                          "m": m}, cfg)
    _emit(args, manifest, ["quantity", "value", "est_error"], rows)
    return 0


def cmd_maxwell(args) -> int:
    cfg = _load_config(args.config)
    ns = _int_list(args.n, "--n")
    lambdas = _float_list(args.lambdas, "--lambda")
    kw = {}
    params = {"p": args.p, "regime": args.regime, "lambda": lambdas,
              "n": ns}
    if args.regime == "bulk":
        if args.alpha is None:
            raise DomainError("bulk regime needs --alpha")
        kw["alpha"] = params["alpha"] = args.alpha
    elif args.regime == "left":
        if args.j is None:
            raise DomainError("left regime needs --j")
        kw["j"] = params["j"] = args.j
    elif args.regime == "right":
        if args.m is None:
            raise DomainError("right regime needs --m")
        kw["m"] = params["m"] = args.m
    table = convergence_table(args.p, args.regime, lambdas, ns, cfg=cfg,
                              **kw)
    err = cfg.rel_tol * _TABLE_ERR_FACTOR
    rows = [(r.n, r.scaled_moment, r.limit, r.rel_gap, err) for r in table]
    _emit(args, _manifest("maxwell", params, cfg),
          ["n", "scaled_moment", "limit", "rel_gap", "est_rel_error"], rows)
    return 0


# -- validation suites -----------------------------------------------------

def _suite_steiner_n2(cfg, seed):
    mc = McConfig(sample_count=200_000, seed=seed)
    out = []
    est, se = steiner_mc_volume(PBallSpec.unit(2.0, 2), 1.0, mc)
    ref = 4.0 * math.pi
    out.append(("disk parallel volume t=1 vs 4pi",
                abs(est - ref) <= 3.0 * se,
                f"est={est:.6f} ref={ref:.6f} se={se:.2e}"))
    spec = PBallSpec.unit(3.0, 2)
    ref = steiner_polynomial(spec, 0.5, cfg)
    est, se = steiner_mc_volume(spec, 0.5, mc)
    out.append(("p=3 disk parallel volume t=0.5 vs polynomial",
                abs(est - ref) <= 3.0 * se,
                f"est={est:.6f} ref={ref:.6f} se={se:.2e}"))
    return out


def _suite_steiner_n3(cfg, seed):
    mc = McConfig(sample_count=200_000, seed=seed)
    out = []
    est, se = steiner_mc_volume(PBallSpec.unit(2.0, 3), 0.5, mc)
    ref = 4.0 * math.pi / 3.0 * 1.5 ** 3
    out.append(("ball parallel volume t=0.5 vs closed form",
                abs(est - ref) <= 3.0 * se,
                f"est={est:.6f} ref={ref:.6f} se={se:.2e}"))
    spec = PBallSpec(p=1.5, weights=(1.0, 2.0, 1.0))
    ref = steiner_polynomial(spec, 1.0, cfg)
    est, se = steiner_mc_volume(spec, 1.0, mc)
    out.append(("weighted p=1.5 parallel volume t=1 vs polynomial",
                abs(est - ref) <= 3.0 * se,
                f"est={est:.6f} ref={ref:.6f} se={se:.2e}"))
    return out


def _suite_ball(cfg, seed):
    out = []
    worst = 0.0
    for n in (2, 4, 6):
        spec = PBallSpec.unit(2.0, n)
        for j in range(n + 1):
            got = intrinsic_volume(spec, j, cfg).value.value
            ref = oracles.ball_vj(n, j)
            worst = max(worst, abs(got - ref) / ref)
    out.append(("round-ball volumes vs closed form, n <= 6",
                worst <= 1e-8, f"worst rel dev {worst:.2e}"))
    return out


def _suite_ellipsoid(cfg, seed):
    out = []
    w = (1.0, 2.0, 4.0)
    spec = PBallSpec(p=2.0, weights=w)
    semi = [1.0 / a for a in w]
    worst = 0.0
    for j in (1, 2):
        got = intrinsic_volume_weighted(spec, j, cfg).value.value
        for form in ("A", "B"):
            ref = oracles.ellipsoid_vj(semi, j, cfg, form=form)
            worst = max(worst, abs(got - ref) / ref)
    out.append(("ellipsoid volumes vs both single-integral forms",
                worst <= 1e-7, f"worst rel dev {worst:.2e}"))
    return out


def _suite_phase(cfg, seed):
    out = []
    worst = 0.0
    for beta in (0.1, 0.3, 0.5, 0.7, 0.9):
        pt = phase_maximizer(2.0, beta, cfg)
        ref = (1.0 - beta) / beta
        worst = max(worst, abs(pt.theta_star - ref) / ref)
    out.append(("p=2 phase maximizer vs (1-beta)/beta",
                worst <= 1e-10, f"worst rel dev {worst:.2e}"))
    worst = 0.0
    for p in (1.2, 5.0):
        for beta in (0.2, 0.8):
            worst = max(worst, phase_maximizer(p, beta, cfg).residual)
    out.append(("stationarity residual at general p",
                worst <= 1e-10, f"worst residual {worst:.2e}"))
    return out


def _suite_profile(cfg, seed):
    out = []
    worst = 0.0
    for k in range(21):
        alpha = min(1.0, 0.05 * k)
        got = exp_profile(2.0, alpha, cfg).g_value
        ref = profile_references(alpha).g_2
        worst = max(worst, abs(got - ref))
    out.append(("p=2 profile vs closed form on 0.05 grid",
                worst <= 1e-8, f"worst abs dev {worst:.2e}"))
    got = exp_profile(3.0, 1.0, cfg).g_value
    ref = math.log(2.0 * (3.0 * math.e) ** (1.0 / 3.0)
                   * math.gamma(4.0 / 3.0))
    out.append(("g_p(1) closed form at p=3",
                abs(got - ref) <= 1e-10, f"dev {abs(got - ref):.2e}"))
    return out


_SUITES = {
    "steiner-n2": _suite_steiner_n2,
    "steiner-n3": _suite_steiner_n3,
    "ball": _suite_ball,
    "ellipsoid": _suite_ellipsoid,
    "phase": _suite_phase,
    "profile": _suite_profile,
}


def cmd_validate(args) -> int:
    if args.list:
        for name in sorted(_SUITES):
            print(name)
        return 0
    if not args.suites:
        raise DomainError("name at least one suite, or use --list")
    cfg = _load_config(args.config)
    failures = 0
    for name in args.suites:
        if name not in _SUITES:
            raise DomainError(f"unknown suite {name!r}; "
                              f"try: {', '.join(sorted(_SUITES))}")
        for label, ok, detail in _SUITES[name](cfg, args.seed):
            print(f"{'PASS' if ok else 'FAIL'} {name}: {label} ({detail})")
            failures += 0 if ok else 1
    return 1 if failures else 0


# -- parser ----------------------------------------------------------------

def _add_common(sp):
    sp.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="output format (default csv)")
    sp.add_argument("--output", metavar="PATH",
                    help="write to a file instead of stdout")
    sp.add_argument("--config", metavar="PATH",
                    help="key=value file overriding quadrature defaults")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lpvol",
        description="Exact and asymptotic intrinsic-volume tables for "
                    "coordinate-weighted p-balls.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("intrinsic",
                        help="table of intrinsic volumes V_0..V_n")
    sp.add_argument("-p", type=float, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-j", type=int, help="single index")
    sp.add_argument("--all", action="store_true", help="all j = 0..n")
    sp.add_argument("--weights",
                    help="comma list a_1,..,a_n or a file holding one")
    _add_common(sp)
    sp.set_defaults(func=cmd_intrinsic)

    sp = sub.add_parser("asymptotic",
                        help="exact vs asymptotic volumes across n")
    sp.add_argument("-p", type=float, required=True)
    sp.add_argument("--regime", required=True,
                    choices=("bulk", "left", "right", "surface"))
    sp.add_argument("--n", required=True, metavar="N1,N2,..")
    sp.add_argument("--alpha", type=float, help="bulk: j = floor(alpha n)")
    sp.add_argument("--j", type=int, help="left: fixed index")
    sp.add_argument("--m", type=int, help="right: codimension, j = n - m")
    _add_common(sp)
    sp.set_defaults(func=cmd_asymptotic)

    sp = sub.add_parser("profile",
                        help="exponential growth profile with references")
    sp.add_argument("-p", type=float, required=True)
    sp.add_argument("--grid", type=float, default=0.05,
                    metavar="STEP", help="alpha step (default 0.05)")
    sp.add_argument("--alphas", metavar="A1,A2,..",
                    help="explicit alpha list instead of a grid")
    _add_common(sp)
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("curvature",
                        help="curvature record at one boundary point")
    sp.add_argument("-p", type=float, required=True)
    sp.add_argument("--point", required=True, metavar="X1,X2,..",
                    help="any nonzero vector; lifted radially to the "
                         "boundary")
    sp.add_argument("--weights",
                    help="comma list a_1,..,a_n or a file holding one")
    sp.add_argument("--m", type=int, default=1,
                    help="codimension for sigma and density (default 1)")
    _add_common(sp)
    sp.set_defaults(func=cmd_curvature)

    sp = sub.add_parser("maxwell",
                        help="scaled moments vs limit-law values")
    sp.add_argument("-p", type=float, required=True)
    sp.add_argument("--regime", required=True,
                    choices=("bulk", "left", "right"))
    sp.add_argument("--lambda", dest="lambdas", required=True,
                    metavar="L1,L2,..", help="moment exponents")
    sp.add_argument("--n", required=True, metavar="N1,N2,..")
    sp.add_argument("--alpha", type=float, help="bulk: j = floor(alpha n)")
    sp.add_argument("--j", type=int, help="left: fixed index")
    sp.add_argument("--m", type=int, help="right: codimension, j = n - m")
    _add_common(sp)
    sp.set_defaults(func=cmd_maxwell)

    sp = sub.add_parser("validate", help="run self-check suites")
    sp.add_argument("suites", nargs="*", metavar="SUITE")
    sp.add_argument("--list", action="store_true",
                    help="list available suites")
    sp.add_argument("--seed", type=int, default=0,
                    help="Monte Carlo seed (default 0)")
    sp.add_argument("--config", metavar="PATH",
                    help="key=value file overriding quadrature defaults")
    sp.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:        # argparse already printed the message
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        code = args.func(args)
    except (DomainError, DegenerateInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureFailure, ConvergenceFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"# wall_time_s={time.perf_counter() - start:.3f}",
          file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
