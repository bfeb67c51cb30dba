"""Command-line interface.

Subcommands:
  solve  --config <path> --out <dir>        run one problem from an INI config
  verify --suite <name> --out <dir> [--jobs N]   run a verification suite
  bounds --alpha <a> --c0 <c>               print the closed-form blow-up bracket

Exit codes: 0 success (including an expected BlowUp outcome), 1 invalid
input, 2 numerical failure, 3 claim violation.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys

import numpy as np

from . import kernels as kmod
from . import nonlin, pde, spatial, tstep, verify
from .errors import DomainError, NumericalError, RangeError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2
EXIT_CLAIM = 3

_KNOWN_KEYS = {
    "kernel": {"type", "alpha", "beta", "mu", "alphas"},
    "operator": {"type", "length", "s", "epsilon", "modes"},
    "source": {"type", "p", "q"},
    "initial": {"type", "scale", "path"},
    "time": {"t", "steps", "mesh", "grading_r"},
    "tolerances": {"fixed_point_tol", "max_iters", "blowup_threshold"},
    "output": {"dir", "keep_fields"},
}


class ConfigError(Exception):
    pass


def _key_line(path: str, section: str, key: str) -> int:
    """Best-effort line number of ``key`` inside ``[section]`` for messages."""
    current = None
    try:
        with open(path) as fh:
            for i, line in enumerate(fh, start=1):
                stripped = line.strip()
                if stripped.startswith("[") and stripped.endswith("]"):
                    current = stripped[1:-1].strip().lower()
                elif current == section and stripped.split("=")[0].strip() == key:
                    return i
    except OSError:
        pass
    return 0


def load_config(path: str) -> configparser.ConfigParser:
    if not os.path.exists(path):
        raise ConfigError(f"{path}: config file not found")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    for section in parser.sections():
        known = _KNOWN_KEYS.get(section.lower())
        if known is None:
            raise ConfigError(f"{path}: unknown section [{section}]")
        for key in parser[section]:
            if key.lower() not in known:
                line = _key_line(path, section.lower(), key)
                raise ConfigError(
                    f"{path}:{line}: unknown key '{key}' in section [{section}]"
                )
    for required in ("kernel", "operator", "time"):
        if required not in parser:
            raise ConfigError(f"{path}: missing section [{required}]")
    return parser


def _build_kernel(cfg) -> kmod.KernelPair:
    sec = cfg["kernel"]
    ktype = sec.get("type", "").lower()
    if ktype in ("dirac", "classical"):
        spec = kmod.Dirac()
    elif ktype in ("riemann_liouville", "rl", "power"):
        spec = kmod.RiemannLiouville(sec.getfloat("alpha"))
    elif ktype == "tempered":
        spec = kmod.Tempered(sec.getfloat("alpha"), sec.getfloat("mu"))
    elif ktype == "distributed_order":
        spec = kmod.DistributedOrder()
    elif ktype in ("bessel", "bessel_pair"):
        spec = kmod.BesselPair(sec.getfloat("alpha"))
    elif ktype in ("mittag_leffler", "mittag_leffler_pair"):
        spec = kmod.MittagLefflerPair(sec.getfloat("alpha"), sec.getfloat("beta"))
    elif ktype == "multi_term":
        alphas = tuple(float(a) for a in sec.get("alphas", "").split(","))
        spec = kmod.MultiTerm(*alphas)
    else:
        raise ConfigError(f"unknown kernel type {ktype!r}")
    return kmod.make_pair(spec)


def _build_operator(cfg) -> spatial.SpectralOperator:
    sec = cfg["operator"]
    otype = sec.get("type", "").lower()
    modes = sec.getint("modes", 32)
    if otype in ("dirichlet_laplacian", "laplacian"):
        kind = spatial.DirichletLaplacian(sec.getfloat("length", 1.0))
    elif otype in ("fractional_laplacian", "spectral_fractional_laplacian"):
        kind = spatial.SpectralFractionalLaplacian(
            sec.getfloat("length", 1.0), sec.getfloat("s", 0.5)
        )
    elif otype == "involution":
        kind = spatial.Involution(sec.getfloat("epsilon", 0.5))
    else:
        raise ConfigError(f"unknown operator type {otype!r}")
    return spatial.build_operator(kind, modes)


def _build_source(cfg) -> nonlin.NonlinearSource:
    if "source" not in cfg:
        return nonlin.custom(
            lambda v: np.zeros_like(np.asarray(v, dtype=float)), "zero"
        )
    sec = cfg["source"]
    stype = sec.get("type", "fisher_kpp").lower()
    if stype in ("zero", "none"):
        return nonlin.custom(
            lambda v: np.zeros_like(np.asarray(v, dtype=float)), "zero"
        )
    params = {}
    if stype == "power_fisher":
        params = {"p": sec.getfloat("p"), "q": sec.getfloat("q")}
    return nonlin.make_source(stype, **params)


def _build_initial(cfg, op: spatial.SpectralOperator) -> spatial.Field:
    sec = cfg["initial"] if "initial" in cfg else {}
    itype = (sec.get("type", "eigenfunction") or "eigenfunction").lower()
    scale = float(sec.get("scale", 1.0))
    if itype == "eigenfunction":
        modal = np.zeros(op.n_modes)
        modal[0] = scale
        return spatial.Field(modal=modal)
    if itype == "scaled_eigenfunction":
        # phi_1 normalized to unit integral over the domain
        phi1_integral = math.sqrt(2.0 / op.length) * (2.0 * op.length / math.pi)
        modal = np.zeros(op.n_modes)
        modal[0] = scale / phi1_integral
        return spatial.Field(modal=modal)
    if itype == "bump":
        x = op.nodal_grid(4 * op.n_modes)
        return spatial.Field(
            nodal=scale * np.clip(np.sin(math.pi * x / op.length), 0.0, 1.0)
        )
    if itype == "nodal_file":
        path = sec.get("path")
        if not path:
            raise ConfigError("initial type nodal_file requires 'path'")
        return spatial.Field(nodal=scale * np.loadtxt(path))
    raise ConfigError(f"unknown initial type {itype!r}")


def _build_grid(cfg) -> tstep.TimeGrid:
    sec = cfg["time"]
    horizon = sec.getfloat("t")
    steps = sec.getint("steps")
    if horizon is None or steps is None:
        raise ConfigError("[time] requires both 't' and 'steps'")
    mesh = sec.get("mesh", "uniform").lower()
    if mesh == "uniform":
        return tstep.TimeGrid.uniform(horizon, steps)
    if mesh == "graded":
        return tstep.TimeGrid.graded(horizon, steps, sec.getfloat("grading_r", 2.0))
    raise ConfigError(f"unknown mesh {mesh!r}")


def build_problem(cfg) -> pde.ProblemSpec:
    pair = _build_kernel(cfg)
    op = _build_operator(cfg)
    source = _build_source(cfg)
    u0 = _build_initial(cfg, op)
    grid = _build_grid(cfg)
    tol = cfg["tolerances"] if "tolerances" in cfg else {}
    keep = cfg["output"].getboolean("keep_fields", False) if "output" in cfg else False
    return pde.ProblemSpec(
        pair, op, source, u0, grid,
        fixed_point_tol=float(tol.get("fixed_point_tol", 1e-10)),
        max_iters=int(tol.get("max_iters", 100)),
        blowup_threshold=float(tol.get("blowup_threshold", 1e6)),
        keep_fields=keep,
    )


def cmd_solve(config_path: str, out_dir: str | None) -> int:
    try:
        cfg = load_config(config_path)
        if out_dir is None and "output" in cfg:
            out_dir = cfg["output"].get("dir")
        if out_dir is None:
            raise ConfigError("no output directory (use --out or [output] dir)")
        spec = build_problem(cfg)
    except (ConfigError, DomainError, RangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        report = pde.solve(spec)
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    os.makedirs(out_dir, exist_ok=True)
    pde.write_report_csv(report, os.path.join(out_dir, "report.csv"))
    pde.write_report_summary(report, os.path.join(out_dir, "summary.json"))
    print(f"status: {report.status}")
    if report.bracket:
        print(f"bracket: [{report.bracket[0]:.17g}, {report.bracket[1]:.17g}]")
    return EXIT_OK if report.status != pde.FAILED else EXIT_NUMERICAL


def cmd_verify(suite: str, out_dir: str | None, jobs: int) -> int:
    suite = suite.lower()
    if suite != "all" and suite not in verify.SUITES:
        known = ", ".join(sorted(verify.SUITES) + ["all"])
        print(f"error: unknown suite {suite!r} (known: {known})", file=sys.stderr)
        return EXIT_INVALID
    try:
        if suite == "all":
            results = verify.run_all(out_dir=out_dir, jobs=jobs)
        else:
            results = [verify.SUITES[suite](out_dir=out_dir, jobs=jobs)]
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    all_pass = True
    for res in results:
        counts = res.counts
        verdict = "pass" if res.passed else "FAIL"
        print(
            f"{res.suite}: {verdict} "
            f"({counts['passed']}/{counts['asserted']} asserted cases, "
            f"{counts['reported_only']} reported only)"
        )
        for case in res.cases:
            if case.asserted and not case.passed:
                print(f"  violation: {case.name} [{case.claim_id}]")
        all_pass = all_pass and res.passed
    return EXIT_OK if all_pass else EXIT_CLAIM


def cmd_bounds(alpha: float, c0: float) -> int:
    try:
        lower, upper = tstep.bracket_blowup_closed_form_bounds(alpha, c0)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(json.dumps(
        {
            "schema_version": 1,
            "alpha": float(f"{alpha:.17g}"),
            "c0": float(f"{c0:.17g}"),
            "lower": float(f"{lower:.17g}"),
            "upper": float(f"{upper:.17g}"),
        },
        sort_keys=True,
    ))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sonine-rd",
        description="Nonlocal-in-time reaction-diffusion solver and "
        "claim-verification suites",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one problem from a config file")
    p_solve.add_argument("--config", required=True)
    p_solve.add_argument("--out", default=None)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", required=True)
    p_verify.add_argument("--out", default=None)
    p_verify.add_argument("--jobs", type=int, default=1)

    p_bounds = sub.add_parser("bounds", help="closed-form blow-up time bracket")
    p_bounds.add_argument("--alpha", type=float, required=True)
    p_bounds.add_argument("--c0", type=float, required=True)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if args.command == "solve":
        return cmd_solve(args.config, args.out)
    if args.command == "verify":
        return cmd_verify(args.suite, args.out, args.jobs)
    if args.command == "bounds":
        return cmd_bounds(args.alpha, args.c0)
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
