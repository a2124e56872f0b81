"""Command-line front end: experiment configuration, parallel Monte Carlo,
CSV/JSON serialization.

Every statistic is reproducible from (config, seed): realization k always
draws from the stream derived for index k, no matter which worker runs
it, and aggregation folds partial results in index order.  Each command
writes one or more CSV files plus a JSON manifest echoing the full
configuration.

Exit codes: 0 success, 1 configuration/validation error, 2 numerical
error, 3 self-test failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, deloc, ensemble, localstats, semicircle, stieltjes
from .dbm import compensated_density, dbm_path, heat_semigroup, transition_density
from .deformed_kernel import ContourParams, sine_limit_report
from .errors import ConfigError, NumericsError
from .grids import gaussian_grid, l1_distance
from .parallel import map_indices
from .spectral import hermitian_eig, principal_minor, resolvent_diag, schur_diag

COMMANDS = ("sample", "dos", "stieltjes", "deloc", "spacing", "dbm", "flow",
            "kernel", "selftest")


@dataclass
class ExperimentConfig:
    command: str
    spec: ensemble.EnsembleSpec
    params: dict
    reps: int = 1
    workers: int = 1
    out: str = "wignerlab_out"

    def echo(self) -> dict:
        d = {
            "command": self.command,
            "ensemble": {"n": self.spec.n, "law": self.spec.law.kind,
                         "t": self.spec.t, "seed": self.spec.seed},
            "reps": self.reps,
            "workers": self.workers,
            "out": self.out,
        }
        d.update({k: v for k, v in self.params.items()})
        return d


@dataclass
class ResultManifest:
    config: dict
    version: str
    wall_time: float
    statistics: dict
    files: list = field(default_factory=list)

    def write(self, path: str):
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


# ---------------------------------------------------------------------------
# per-realization workers (top level so they pickle)


def _eigs_worker(args):
    spec, k = args
    return np.linalg.eigvalsh(ensemble.realization(spec, k))


def _stieltjes_worker(args):
    spec, points, k = args
    eigs = np.linalg.eigvalsh(ensemble.realization(spec, k))
    return [stieltjes.empirical_stieltjes(eigs, z) for z in points]


def _deloc_worker(args):
    spec, p, edge_margin, k = args
    dec = hermitian_eig(ensemble.realization(spec, k), want_vectors=True)
    rep = deloc.deloc_report(dec, p=p, edge_margin=edge_margin)
    return rep.eigenvalues, rep.statistics


# ---------------------------------------------------------------------------
# command implementations


def _run_sample(cfg: ExperimentConfig) -> dict:
    h = ensemble.realization(cfg.spec, int(cfg.params.get("index", 0)))
    with open(cfg.out + ".csv", "w", newline="") as fh:
        ensemble.matrix_to_csv(h, fh)
    return {"n": cfg.spec.n, "trace": float(np.trace(h).real),
            "frobenius": float(np.linalg.norm(h))}


def _window_from_params(params: dict) -> semicircle.EnergyWindow:
    e = float(params.get("e", 0.0))
    if "k" in params:
        return semicircle.EnergyWindow(e, "micro", float(params["k"]))
    if "eps" in params:
        return semicircle.EnergyWindow(e, "eps", float(params["eps"]))
    return semicircle.EnergyWindow(e, "eta", float(params.get("eta", 0.1)))


def _run_dos(cfg: ExperimentConfig) -> dict:
    window = _window_from_params(cfg.params)
    values = np.array(map_indices(
        semicircle._dos_realization,
        [(cfg.spec, window, k) for k in range(cfg.reps)], cfg.workers))
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(cfg.reps)) if cfg.reps > 1 else float("nan")
    write_csv(cfg.out + ".csv",
              ["e", "scale_kind", "scale", "estimate", "stderr", "reps", "seed"],
              [[window.e, window.kind, window.scale, mean, stderr, cfg.reps,
                cfg.spec.seed]])
    return {"estimate": mean, "stderr": stderr,
            "semicircle": float(semicircle.semicircle_density(window.e))}


def _run_stieltjes(cfg: ExperimentConfig) -> dict:
    es = [float(v) for v in str(cfg.params.get("e", "0")).split(",")]
    etas = [float(v) for v in str(cfg.params.get("eta", "0.01")).split(",")]
    points = [complex(e, eta) for e in es for eta in etas]
    per_rep = map_indices(_stieltjes_worker,
                          [(cfg.spec, points, k) for k in range(cfg.reps)],
                          cfg.workers)
    per_rep = np.array(per_rep)  # (reps, npoints)
    rows = []
    worst = 0.0
    for j, z in enumerate(points):
        values = per_rep[:, j]
        m_mean = complex(values.mean())
        m_ref = stieltjes.semicircle_stieltjes(z)
        residual = float(np.mean([stieltjes.fixed_point_residual(m, z) for m in values]))
        if cfg.reps > 1:
            spread = math.sqrt(float((np.abs(values - m_mean) ** 2).sum()) / (cfg.reps - 1))
            stderr = spread / math.sqrt(cfg.reps)
        else:
            stderr = float("nan")
        worst = max(worst, abs(m_mean - m_ref))
        rows.append([z.real, z.imag, m_mean.real, m_mean.imag,
                     m_ref.real, m_ref.imag, residual, cfg.reps, stderr])
    write_csv(cfg.out + ".csv",
              ["e", "eta", "re_mn", "im_mn", "re_msc", "im_msc", "residual",
               "reps", "stderr"], rows)
    return {"worst_deviation": worst, "points": len(points)}


def _run_deloc(cfg: ExperimentConfig) -> dict:
    p = cfg.params.get("p", math.inf)
    p = math.inf if str(p) in ("inf", "oo") else float(p)
    edge_margin = float(cfg.params.get("edge_margin", deloc.EDGE_MARGIN))
    results = map_indices(_deloc_worker,
                          [(cfg.spec, p, edge_margin, k) for k in range(cfg.reps)],
                          cfg.workers)
    rows = []
    bulk_stats = []
    for k, (mu, stats) in enumerate(results):
        for m, s in zip(mu, stats):
            rows.append([k, m, "inf" if math.isinf(p) else p, s])
        bulk = np.abs(mu) <= 2.0 - edge_margin
        if bulk.any():
            bulk_stats.append(stats[bulk])
    write_csv(cfg.out + ".csv", ["rep", "mu", "p", "m"], rows)
    pooled = np.concatenate(bulk_stats) if bulk_stats else np.array([])
    summary = {
        "p": "inf" if math.isinf(p) else p,
        "edge_margin": edge_margin,
        "bulk_max": float(pooled.max()) if pooled.size else None,
        "bulk_median": float(np.median(pooled)) if pooled.size else None,
        "bulk_q99": float(np.quantile(pooled, 0.99)) if pooled.size else None,
    }
    return summary


def _run_spacing(cfg: ExperimentConfig) -> dict:
    e = float(cfg.params.get("e", 0.0))
    bin_width = float(cfg.params.get("bin_width", 0.1))
    r_max = float(cfg.params.get("r_max", 3.0))
    window = float(cfg.params.get("window", localstats.DEFAULT_WINDOW))
    samples = map_indices(_eigs_worker,
                          [(cfg.spec, k) for k in range(cfg.reps)], cfg.workers)
    est = localstats.two_point_estimate(samples, e, cfg.spec.n, bin_width=bin_width,
                                        r_max=r_max, window=window)
    reference = localstats.sine_kernel_two_point(est.r)
    rows = [[r, v, s, ref] for r, v, s, ref in
            zip(est.r, est.values, est.stderr, reference)]
    write_csv(cfg.out + ".csv", ["r", "r2_hat", "stderr", "r2_sine"], rows)
    inside = (est.r >= 0.1) & (est.r <= 2.5)
    return {"e": e, "window": window, "bin_width": bin_width, "reps": est.reps,
            "max_dev_to_sine": float(np.abs(est.values - reference)[inside].max())
            if inside.any() else None}


def _run_dbm(cfg: ExperimentConfig) -> dict:
    times = [float(v) for v in str(cfg.params.get("times", "0,0.5,1")).split(",")]
    h0 = ensemble.realization(cfg.spec, int(cfg.params.get("index", 0)))
    path = dbm_path(h0, times, ensemble.derive_stream(cfg.spec.seed, 1 << 20))
    rows = [[t_val, idx, path.spectra[i, idx]]
            for i, t_val in enumerate(path.times)
            for idx in range(path.n)]
    write_csv(cfg.out + ".csv", ["time", "index", "eigenvalue"], rows)
    return {"times": list(map(float, path.times)), "n": path.n}


def _run_flow(cfg: ExperimentConfig) -> dict:
    orders = [int(v) for v in str(cfg.params.get("orders", "0,1,2")).split(",")]
    t_grid = [float(v) for v in str(cfg.params.get("t_grid", "0.05,0.1,0.2")).split(",")]
    sigma = float(cfg.params.get("sigma", 2.0))
    grid = gaussian_grid(sigma=sigma, half_width=float(cfg.params.get("half_width", 25.0)),
                         n=int(cfg.params.get("grid_n", 4096)))
    density_rows = []
    error_rows = []
    slopes = {}
    for order in orders:
        errors = []
        for t_val in t_grid:
            comp = compensated_density(grid, t_val, order)
            recovered = heat_semigroup(comp, t_val)
            err = l1_distance(recovered, grid)
            errors.append(err)
            error_rows.append([order, t_val, err])
        comp = compensated_density(grid, t_grid[-1], order)
        for x, h_val, c_val in zip(grid.x, grid.values, comp.values):
            density_rows.append([order, x, h_val, c_val])
        slope = np.polyfit(np.log(t_grid), np.log(errors), 1)[0]
        slopes[str(order)] = float(slope)
    write_csv(cfg.out + "_density.csv", ["order", "x", "h", "h_tilde"], density_rows)
    write_csv(cfg.out + "_error.csv", ["order", "t", "l1_error"], error_rows)
    return {"orders": orders, "t_grid": t_grid, "fitted_slopes": slopes}


def _run_kernel(cfg: ExperimentConfig) -> dict:
    n = cfg.spec.n
    t = float(cfg.params.get("t", cfg.spec.t if cfg.spec.t > 0 else 0.5))
    e = float(cfg.params.get("e", 0.0))
    source = str(cfg.params.get("y_source", "semicircle-quantiles"))
    if source == "semicircle-quantiles":
        y = semicircle.semicircle_quantiles(n)
    elif source.startswith("file:"):
        y = np.loadtxt(source[5:], delimiter=",").ravel()
    else:
        raise ConfigError(f"unknown y-source {source!r}")
    gaps = [float(v) for v in
            str(cfg.params.get("gaps", "0,0.5,1,1.5,2")).split(",")]
    params = None
    if "nodes" in cfg.params or "half_length" in cfg.params:
        base = ContourParams.defaults(e, t, y, y.size)
        params = ContourParams(
            offset=base.offset, abscissa=base.abscissa, shift=base.shift,
            half_length=float(cfg.params.get("half_length", base.half_length)),
            nodes=int(cfg.params.get("nodes", base.nodes)))
    rows = sine_limit_report(e, gaps, t, y, params)
    write_csv(cfg.out + ".csv",
              ["x1", "x2", "re_k", "im_k", "normalized", "sinc", "abs_err"],
              [[r["x1"], r["x2"], r["re_k"], r["im_k"], r["normalized"], r["sinc"],
                r["abs_err"]] for r in rows])
    return {"n": n, "t": t, "e": e,
            "max_abs_err": max(r["abs_err"] for r in rows)}


def selftest(out=sys.stdout) -> bool:
    """Fast exact-identity suite; every check is deterministic."""
    checks = []
    rng = ensemble.derive_stream(20260101, 0)

    h = ensemble.sample_gue(40, rng)
    z = 0.3 + 0.05j
    worst = max(abs(resolvent_diag(h, z, j) - schur_diag(h, z, j))
                / abs(resolvent_diag(h, z, j)) for j in range(0, 40, 5))
    checks.append(("schur identity (rel err %.1e)" % worst, worst < 1e-8))

    eigs = hermitian_eig(h).eigenvalues
    minor_eigs = hermitian_eig(principal_minor(h, 0)).eigenvalues
    checks.append(("cauchy interlacing", stieltjes.interlacing_check(eigs, minor_eigs)))

    tr1 = abs(eigs.sum() - np.trace(h).real) / max(abs(np.trace(h).real), 1.0)
    tr2 = abs((eigs ** 2).sum() - np.trace(h @ h).real) / abs(np.trace(h @ h).real)
    checks.append(("trace identities (%.1e, %.1e)" % (tr1, tr2),
                   tr1 < 1e-10 and tr2 < 1e-10))

    es = np.linspace(-3, 3, 40)
    etas = np.logspace(-3, 1, 25)
    grid_pts = np.array([complex(a, b) for a in es for b in etas])
    m_vals = stieltjes.semicircle_stieltjes(grid_pts)
    residual = max(stieltjes.fixed_point_residual(m, z)
                   for m, z in zip(m_vals, grid_pts))
    checks.append(("semicircle fixed point (max %.1e)" % residual, residual < 1e-12))

    worst_q = 0.0
    for (x, y0, t_val) in [(0.3, -0.2, 0.5), (1.0, 0.7, 0.1), (-2.0, 1.0, 2.0)]:
        q = transition_density(np.array([x]), np.array([y0]), t_val)
        heat = math.exp(-(x - y0) ** 2 / (2 * t_val)) / math.sqrt(2 * math.pi * t_val)
        worst_q = max(worst_q, abs(q - heat) / heat)
    checks.append(("transition kernel heat reduction (%.1e)" % worst_q,
                   worst_q < 1e-12))

    ok = True
    for name, passed in checks:
        print(f"[{'PASS' if passed else 'FAIL'}] {name}", file=out)
        ok = ok and passed
    return ok


def _run_selftest(cfg: ExperimentConfig) -> dict:
    buf = io.StringIO()
    ok = selftest(out=buf)
    sys.stdout.write(buf.getvalue())
    if not ok:
        raise _SelfTestFailure(buf.getvalue())
    return {"passed": True, "report": buf.getvalue().strip().splitlines()}


class _SelfTestFailure(Exception):
    pass


_RUNNERS = {
    "sample": _run_sample,
    "dos": _run_dos,
    "stieltjes": _run_stieltjes,
    "deloc": _run_deloc,
    "spacing": _run_spacing,
    "dbm": _run_dbm,
    "flow": _run_flow,
    "kernel": _run_kernel,
    "selftest": _run_selftest,
}


def run(cfg: ExperimentConfig) -> ResultManifest:
    start = time.time()
    statistics = _RUNNERS[cfg.command](cfg)
    manifest = ResultManifest(config=cfg.echo(), version=__version__,
                              wall_time=time.time() - start, statistics=statistics)
    manifest.write(cfg.out + ".json")
    return manifest


# ---------------------------------------------------------------------------
# argument handling


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wignerlab",
                                     description="Wigner-matrix spectral laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--out", type=str, default=None)
    common.add_argument("--config", type=str, default=None)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--law", type=str, default=None)
    common.add_argument("--t", type=float, default=None)
    common.add_argument("--reps", type=int, default=None)

    p = sub.add_parser("sample", parents=[common])
    p.add_argument("--index", type=int, default=None)
    p = sub.add_parser("dos", parents=[common])
    p.add_argument("--e", type=str, default=None)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p = sub.add_parser("stieltjes", parents=[common])
    p.add_argument("--e", type=str, default=None)
    p.add_argument("--eta", type=str, default=None)
    p = sub.add_parser("deloc", parents=[common])
    p.add_argument("--p", type=str, default=None)
    p.add_argument("--edge-margin", dest="edge_margin", type=float, default=None)
    p = sub.add_parser("spacing", parents=[common])
    p.add_argument("--e", type=str, default=None)
    p.add_argument("--bin-width", dest="bin_width", type=float, default=None)
    p.add_argument("--r-max", dest="r_max", type=float, default=None)
    p.add_argument("--window", type=float, default=None)
    p = sub.add_parser("dbm", parents=[common])
    p.add_argument("--times", type=str, default=None)
    p.add_argument("--index", type=int, default=None)
    p = sub.add_parser("flow", parents=[common])
    p.add_argument("--orders", type=str, default=None)
    p.add_argument("--t-grid", dest="t_grid", type=str, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--grid-n", dest="grid_n", type=int, default=None)
    p.add_argument("--half-width", dest="half_width", type=float, default=None)
    p = sub.add_parser("kernel", parents=[common])
    p.add_argument("--e", type=str, default=None)
    p.add_argument("--y-source", dest="y_source", type=str, default=None)
    p.add_argument("--gaps", type=str, default=None)
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--half-length", dest="half_length", type=float, default=None)
    sub.add_parser("selftest", parents=[common])
    return parser


_ENSEMBLE_KEYS = {"n", "law", "t", "seed"}
_GLOBAL_KEYS = {"seed", "workers", "out", "reps"}


def _load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    merged = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            merged[key.replace("-", "_")] = value
    return merged


def build_config(argv: list[str]) -> ExperimentConfig:
    args = vars(_build_parser().parse_args(argv))
    command = args.pop("command")
    file_values = _load_config_file(args["config"]) if args.get("config") else {}
    args.pop("config", None)

    def pick(key, default, cast):
        if args.get(key) is not None:
            return args[key]
        if key in file_values:
            return cast(file_values[key])
        return default

    n = int(pick("n", 100, int))
    law = str(pick("law", "gaussian", str))
    t = float(pick("t", 0.0, float))
    seed = int(pick("seed", 0, int))
    spec = ensemble.EnsembleSpec(n=n, law=ensemble.EntryLaw(law), t=t, seed=seed)
    reps = int(pick("reps", 1, int))
    workers = int(pick("workers", 1, int))
    out = str(pick("out", "wignerlab_" + command, str))

    params = {}
    consumed = _ENSEMBLE_KEYS | _GLOBAL_KEYS
    for key, value in file_values.items():
        if key not in consumed:
            params[key] = value
    for key, value in args.items():
        if key in consumed or value is None:
            continue
        params[key] = value
    return ExperimentConfig(command=command, spec=spec, params=params,
                            reps=reps, workers=workers, out=out)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = build_config(argv)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    try:
        manifest = run(cfg)
    except _SelfTestFailure:
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    except NumericsError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    for key, value in manifest.statistics.items():
        if not isinstance(value, (list, dict)):
            print(f"{key} = {value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
