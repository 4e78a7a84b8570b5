"""Command line front end: ``indefcrit {spectrum,geometry,solve,check}``.

Exit codes: 0 success, 1 failed property checks, 2 geometry failure,
3 partial convergence, 4 invalid configuration.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import ConfigError, RunConfig, build_model, load_config
from .io import write_csv, write_json, write_solution
from .minimax import dedup_reports, geometry_check, lower_bound, saddle_solve
from .spectral import embedding_constant

log = logging.getLogger("indefcrit")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_GEOMETRY, EXIT_PARTIAL, EXIT_INVALID = 0, 1, 2, 3, 4


# ---------------------------------------------------------------------------
# per-k jobs (module level so they pickle for the process pool)
# ---------------------------------------------------------------------------


def _geometry_job(args):
    cfg, k = args
    model = build_model(cfg)
    return geometry_check(model, k, config=cfg.flow_config())


def _solve_job(args):
    cfg, k, geo, mirror = args
    model = build_model(cfg)
    return saddle_solve(model, k, cfg.flow_config(), mirror=mirror, geometry=geo)


def _map(fn, jobs, n_workers):
    if n_workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_workers) as ex:
        return list(ex.map(fn, jobs))


def _check_k(cfg, model):
    bad = [k for k in cfg.k_list if k >= model.split.n_plus]
    if bad:
        raise ConfigError("k_list", f"k={bad[0]} exceeds the {model.split.n_plus} X+ directions")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_spectrum(cfg: RunConfig, out: str, jobs: int = 1):
    """Eigenvalue table, L spectrum (HS) and tail embedding constants."""
    model = build_model(cfg)
    split, basis = model.split, model.split.basis
    files = []
    rows = [[j, *basis.indices[j], lam] for j, lam in enumerate(basis.eigenvalues)]
    idx_cols = ["i"] if basis.domain.dim == 1 else ["i", "j"]
    path = os.path.join(out, "spectrum_lambda.csv")
    write_csv(path, ["mode", *idx_cols, "lambda"], rows)
    files.append(path)
    if split.problem == "HS":
        lab = split.labels
        rows = [[*lab[i], int(split.signs[i]), split.weights_mu[i], split.signs[i] * split.weights_mu[i]] for i in range(split.dim)]
        rows.sort(key=lambda r: (r[-1], r[:3]))
        path = os.path.join(out, "spectrum_L.csv")
        write_csv(path, ["j", "k", "r", "sign", "mu", "eigenvalue"], rows)
        files.append(path)
    kmax = min(cfg.beta_kmax, split.n_plus - 1)
    rows = []
    for k in range(kmax + 1):
        if split.problem == "ES":
            f, g = cfg.scalar_models()
            b1 = embedding_constant(basis, cfg.s, f.growth, k, seed=cfg.seed)[0]
            b2 = embedding_constant(basis, cfg.t, g.growth, k, seed=cfg.seed)[0]
            rows.append([k, max(b1, b2), b1, b2])
        else:
            _, _, consts = lower_bound(model, k, seed=cfg.seed)
            # equal within a cos/sin pair: time translation rotates the pair
            rows.append([k, consts["beta"], consts["p"] + 1.0, split.weights_mu[k]])
    header = ["k", "beta", "beta_1", "beta_2"] if split.problem == "ES" else ["k", "beta", "r", "mu"]
    path = os.path.join(out, "spectrum_beta.csv")
    write_csv(path, header, rows)
    files.append(path)
    return EXIT_OK, files


def _geometries(cfg, jobs):
    reps = _map(_geometry_job, [(cfg, k) for k in cfg.k_list], jobs)
    return dict(zip(cfg.k_list, reps))


def cmd_geometry(cfg: RunConfig, out: str, jobs: int = 1):
    model = build_model(cfg)
    _check_k(cfg, model)
    geos = _geometries(cfg, jobs)
    files = []
    rows = []
    for k in sorted(geos):
        g = geos[k]
        path = os.path.join(out, f"geometry_k{k}.json")
        write_json(path, {"config": cfg.to_dict(), "split": model.split.metadata(), "report": g.to_dict()})
        files.append(path)
        rows.append([k, g.r_k, g.rho_k, g.b_k, g.a_k, g.d_k, g.a_k_bound, g.passed, g.reason])
    path = os.path.join(out, "geometry_summary.csv")
    write_csv(path, ["k", "r_k", "rho_k", "b_k", "a_k", "d_k", "a_k_bound", "passed", "reason"], rows)
    files.append(path)
    status = EXIT_OK if all(g.passed for g in geos.values()) else EXIT_GEOMETRY
    return status, files


def cmd_solve(cfg: RunConfig, out: str, jobs: int = 1, mirror: bool = False):
    model = build_model(cfg)
    _check_k(cfg, model)
    geos = _geometries(cfg, jobs)
    files = []
    failed = [k for k, g in geos.items() if not g.passed]
    if failed:
        log.error("geometry fails at k=%s; not solving", failed)
        return EXIT_GEOMETRY, files
    reports = _map(_solve_job, [(cfg, k, geos[k], mirror) for k in cfg.k_list], jobs)
    for rep in reports:
        k = rep.k
        p = os.path.join(out, f"solve_k{k}.json")
        write_json(p, {"config": cfg.to_dict(), "split": model.split.metadata(), "geometry": geos[k].to_dict(), "report": rep.to_dict()})
        q = os.path.join(out, f"solution_k{k}.json")
        write_solution(q, cfg, model.split, rep, oracle_refs={})
        h = os.path.join(out, f"history_k{k}.csv")
        write_csv(h, ["iteration", "phi", "grad_norm", "cerami"],
                  [[e["iteration"], e["phi"], e["grad_norm"], e["cerami"]] for e in rep.history])
        files += [p, q, h]
    distinct = {id(r) for r in dedup_reports([r for r in reports if r.converged and r.level > 0])}
    rows = []
    for rep in sorted(reports, key=lambda r: (r.level, r.k)):
        rows.append([rep.k, rep.level, rep.status, rep.cerami, rep.grad_norm, rep.l2_norm,
                     rep.residuals[0], rep.residuals[1], rep.b_k, rep.d_k, id(rep) in distinct])
    path = os.path.join(out, "summary.csv")
    write_csv(path, ["k", "level", "status", "cerami", "grad_norm", "l2_norm", "residual_u", "residual_v",
                     "b_k", "d_k", "distinct"], rows)
    files.append(path)
    status = EXIT_OK if all(r.converged for r in reports) else EXIT_PARTIAL
    return status, files


def cmd_check(cfg: RunConfig, out: str, jobs: int = 1):
    from .checks import run_checks

    results = run_checks(mutation=cfg.mutation, seed=cfg.seed)
    path = os.path.join(out, "check.json")
    write_json(path, {"mutation": cfg.mutation, "groups": results})
    rows = [[name, res["passed"]] for name, res in results.items()]
    p2 = os.path.join(out, "check_summary.csv")
    write_csv(p2, ["group", "passed"], rows)
    for name, res in results.items():
        print(f"{name}: {'PASS' if res['passed'] else 'FAIL'}")
    status = EXIT_OK if all(r["passed"] for r in results.values()) else EXIT_CHECK_FAILED
    return status, [path, p2]


COMMANDS = {"spectrum": cmd_spectrum, "geometry": cmd_geometry, "solve": cmd_solve, "check": cmd_check}


def build_parser():
    ap = argparse.ArgumentParser(prog="indefcrit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="INI run configuration (defaults: ES POWER p=q=4 on (0, pi))")
        sp.add_argument("--seed", type=int, help="override the configured seed")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes over k")
        sp.add_argument("-v", "--verbose", action="store_true")
        if name == "solve":
            sp.add_argument("--mirror", action="store_true", help="start from the antipodal frame")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
        cfg.validate()
        out = args.out or cfg.out
        os.makedirs(out, exist_ok=True)
        kwargs = {"mirror": args.mirror} if args.command == "solve" else {}
        status, files = COMMANDS[args.command](cfg, out, jobs=max(1, args.jobs), **kwargs)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for f in files:
        log.info("wrote %s", f)
    np.seterr(all="ignore")
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
