"""Batch command-line front end.

Subcommands: lvalue, scan-moment, nonvanishing, gauss-verify, poisson-verify,
partition-verify, sieve-diagnostic, and rerun (re-execute a manifest).

Every run writes a manifest.json echoing the fully resolved configuration and
library versions; data files contain no timestamps or timings, so re-running
a command from its manifest reproduces them byte for byte.  Wall-clock
numbers go to a separate timing file next to the manifest.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import difflib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bumps import eval_bump, f_partial, v_hat
from .central import root_number, twist_point
from .gauss import oracle_sweep
from .kernels import CutoffKernel
from .moments import (certified_floor, largesieve_diagnostic, scan_table_requirement,
                      second_moment_scan)
from .newform import (NewformSpec, CurveCoefficients, determine_fricke_sign,
                      lambda_table, parse_ap_table_file)
from .poisson import poisson_verify
from ._fast import configure_threads

OUT_DIR_ENV = "TWISTMOMENTS_OUT_DIR"

_COMMON_KEYS = {"form", "out_dir", "threads", "tol"}
_COMMAND_KEYS = {
    "lvalue": _COMMON_KEYS | {"D"},
    "scan-moment": _COMMON_KEYS | {"x_grid", "j_kind", "vanish_eps", "table_n"},
    "nonvanishing": _COMMON_KEYS | {"X", "j_kind", "vanish_eps", "table_n"},
    "gauss-verify": _COMMON_KEYS | {"n_max", "k_min", "k_max"},
    "poisson-verify": _COMMON_KEYS | {"n_max", "x_list", "bumps"},
    "partition-verify": _COMMON_KEYS | {"points", "h_max"},
    "sieve-diagnostic": _COMMON_KEYS | {"m_list", "n_list", "t_list", "g_kind", "table_n"},
}

_DEFAULTS = {
    "threads": "0",
    "tol": "1e-6",
    "D": "40",
    "x_grid": "1000,2000,4000,8000,16000,32000,64000",
    "j_kind": "j_scan",
    "vanish_eps": "1e-3",
    "table_n": "0",          # 0 = size automatically
    "X": "10000",
    "n_max": "499",
    "k_min": "-50",
    "k_max": "50",
    "x_list": "200,1000",
    "bumps": "g_exact,g_infinity",
    "points": "10000",
    "h_max": "20",
    "m_list": "100,1000",
    "n_list": "100,1000",
    "t_list": "0,5",
    "g_kind": "g_exact",
}


class ConfigError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    pass


@dataclass
class RunConfig:
    command: str
    values: dict[str, str] = field(default_factory=dict)

    @classmethod
    def build(cls, command: str, sources: list[dict[str, str]]) -> "RunConfig":
        """Merge defaults, config-file pairs, and flag overrides (in that
        order); unknown keys are rejected with a nearest-match hint."""
        if command not in _COMMAND_KEYS:
            raise ConfigError(f"unknown command {command!r}")
        allowed = _COMMAND_KEYS[command]
        merged = {k: v for k, v in _DEFAULTS.items() if k in allowed}
        for src in sources:
            for key, val in src.items():
                if key not in allowed:
                    hint = difflib.get_close_matches(key, sorted(allowed), n=1)
                    suffix = f"; did you mean {hint[0]!r}?" if hint else ""
                    raise ConfigError(f"unknown config key {key!r} for {command}{suffix}")
                merged[key] = val
        if "form" not in merged and command in ("lvalue", "scan-moment", "nonvanishing",
                                                "sieve-diagnostic"):
            raise ConfigError(f"{command} requires a form file (form=...)")
        env_out = os.environ.get(OUT_DIR_ENV)
        if env_out:
            merged["out_dir"] = env_out
        if "out_dir" not in merged:
            raise ConfigError("out_dir is required (flag, config, or "
                              f"{OUT_DIR_ENV} environment variable)")
        return cls(command=command, values=merged)

    def get(self, key: str) -> str:
        return self.values[key]

    def get_float(self, key: str) -> float:
        try:
            return float(self.values[key])
        except ValueError as exc:
            raise ConfigError(f"{key} must be a number, got {self.values[key]!r}") from exc

    def get_int(self, key: str) -> int:
        try:
            return int(self.values[key])
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got {self.values[key]!r}") from exc

    def get_list(self, key: str, cast=float) -> list:
        try:
            return [cast(tok) for tok in self.values[key].split(",") if tok.strip()]
        except ValueError as exc:
            raise ConfigError(f"{key} must be a comma list, got {self.values[key]!r}") from exc


def parse_keyvalue_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


_FORM_KEYS = {"weight", "level", "curve", "ap_table", "fricke_eta", "bad_ap"}


def load_form_spec(path: str) -> NewformSpec:
    """Form-spec file: weight=, level=, curve=a1,a2,a3,a4,a6 or ap_table=path,
    optional fricke_eta=+-1 and bad_ap=p:a[,p:a...]."""
    pairs = parse_keyvalue_file(path)
    for key in pairs:
        if key not in _FORM_KEYS:
            hint = difflib.get_close_matches(key, sorted(_FORM_KEYS), n=1)
            suffix = f"; did you mean {hint[0]!r}?" if hint else ""
            raise ConfigError(f"{path}: unknown form key {key!r}{suffix}")
    try:
        weight = int(pairs["weight"])
        level = int(pairs["level"])
    except KeyError as exc:
        raise ConfigError(f"{path}: missing required key {exc}") from exc
    eta = int(pairs.get("fricke_eta", "0"))
    bad_ap = {}
    if "bad_ap" in pairs:
        for tok in pairs["bad_ap"].split(","):
            p, a = tok.split(":")
            bad_ap[int(p)] = int(a)
    curve = None
    ap_table = None
    if "curve" in pairs:
        coeffs = [int(tok) for tok in pairs["curve"].split(",")]
        if len(coeffs) != 5:
            raise ConfigError(f"{path}: curve needs 5 coefficients a1,a2,a3,a4,a6")
        curve = CurveCoefficients(*coeffs)
    elif "ap_table" in pairs:
        ap_path = Path(pairs["ap_table"])
        if not ap_path.is_absolute():
            ap_path = Path(path).parent / ap_path
        ap_table = parse_ap_table_file(str(ap_path))
    else:
        raise ConfigError(f"{path}: a form needs curve=... or ap_table=...")
    try:
        return NewformSpec(weight=weight, level=level, fricke_eta=eta,
                           curve=curve, ap_table=ap_table, bad_ap=bad_ap)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# -- deterministic writers ----------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest(out_dir: Path, config: RunConfig, timings: dict[str, float]) -> None:
    manifest = {
        "command": config.command,
        "config": dict(sorted(config.values.items())),
        "versions": {
            "twistmoments": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
        },
        "created": datetime.now(timezone.utc).isoformat(),
    }
    write_json(out_dir / "manifest.json", manifest)
    if timings:
        with open(out_dir / "timings.csv", "w") as fh:
            fh.write("step,wall_seconds\n")
            for step, secs in timings.items():
                fh.write(f"{step},{secs:.3f}\n")


# -- command implementations --------------------------------------------------


def _prepare_form(config: RunConfig) -> tuple[NewformSpec, CutoffKernel]:
    spec = load_form_spec(config.get("form"))
    if spec.fricke_eta == 0:
        eta = determine_fricke_sign(spec)
        spec = NewformSpec(weight=spec.weight, level=spec.level, fricke_eta=eta,
                           curve=spec.curve, ap_table=spec.ap_table, bad_ap=spec.bad_ap)
    tol = config.get_float("tol")
    kernel = CutoffKernel(spec.weight, spec.level, abs_tol=min(1e-10, tol * 1e-4))
    return spec, kernel


def cmd_lvalue(config: RunConfig, out_dir: Path) -> int:
    spec, kernel = _prepare_form(config)
    D = config.get_int("D")
    if D % 8 != 0 or D <= 0:
        raise ConfigError("lvalue expects a positive discriminant D = 8d")
    try:
        omega = root_number(spec, D)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    d = D // 8
    need, _ = kernel.choose_truncation(abs(D), tol=config.get_float("tol"), poles=1)
    need = max(need, kernel.choose_truncation(abs(D), tol=config.get_float("tol"), poles=2)[0])
    table = lambda_table(spec, need)
    point = twist_point(spec, table, kernel, d, tol=config.get_float("tol"))
    write_json(out_dir / "lvalue.json", {
        "D": point.D, "omega": point.omega,
        "lprime": point.lprime, "lvalue": point.lvalue,
        "trunc_N": point.trunc_N, "tail_bound": point.tail_bound,
    })
    write_manifest(out_dir, config, {})
    print(f"D={point.D} omega={point.omega:+d} lprime={point.lprime} "
          f"lvalue={point.lvalue} tail={point.tail_bound:.2e}")
    return 0


def cmd_scan_moment(config: RunConfig, out_dir: Path) -> int:
    spec, kernel = _prepare_form(config)
    grid = config.get_list("x_grid")
    tol = config.get_float("tol")
    timings: dict[str, float] = {}
    t0 = time.monotonic()
    table_n = config.get_int("table_n") or scan_table_requirement(spec, kernel, max(grid), tol)
    table = lambda_table(spec, table_n)
    timings["eigenvalue_table"] = time.monotonic() - t0
    t0 = time.monotonic()
    records, _ = second_moment_scan(spec, table, kernel, grid,
                                    J_kind=config.get("j_kind"), tol=tol,
                                    vanish_eps=config.get_float("vanish_eps"))
    timings["scan"] = time.monotonic() - t0
    header = ["X", "family_size", "n_omega_minus", "S1", "S2", "ratio_log3",
              "cs_lower_bound", "N_X", "S1_plus", "S2_plus", "max_tail_bound"]
    rows = [[r.X, r.family_size, r.n_omega_minus, r.S1, r.S2, r.ratio_log3,
             r.cs_lower_bound, r.N_X, r.S1_plus, r.S2_plus, r.max_tail_bound]
            for r in records]
    write_csv(out_dir / "scan.csv", header, rows)
    write_csv(out_dir / "ratio_log3.dat", ["log_X", "ratio_log3"],
              [[np.log(r.X), r.ratio_log3] for r in records])
    for r in records:
        timings[f"scan_X_{r.X:g}"] = r.wall_seconds
        print(f"X={r.X:>9g} members={r.family_size:5d} S2={r.S2:.6e} "
              f"ratio_log3={r.ratio_log3:.6f} N_X={r.N_X}")
    failures = [r for r in records
                if r.S2 > 0 and r.cs_lower_bound > r.N_X + r.cs_slack + 1e-9 * r.cs_lower_bound]
    write_manifest(out_dir, config, timings)
    if failures:
        raise VerificationFailure(
            f"Cauchy-Schwarz bound exceeded the count at X={failures[0].X}")
    return 0


def cmd_nonvanishing(config: RunConfig, out_dir: Path) -> int:
    spec, kernel = _prepare_form(config)
    X = config.get_float("X")
    tol = config.get_float("tol")
    vanish_eps = config.get_float("vanish_eps")
    table_n = config.get_int("table_n") or scan_table_requirement(spec, kernel, X, tol)
    table = lambda_table(spec, table_n)
    records, _ = second_moment_scan(spec, table, kernel, [X],
                                    J_kind=config.get("j_kind"), tol=tol,
                                    vanish_eps=vanish_eps)
    rec = records[0]
    floor = certified_floor(rec.max_tail_bound)
    if vanish_eps < floor:
        raise ConfigError(f"vanish_eps {vanish_eps:g} below the certified floor {floor:g}")
    payload = {
        "X": rec.X, "family_size": rec.family_size,
        "n_omega_minus": rec.n_omega_minus, "N_X": rec.N_X,
        "cs_lower_bound": rec.cs_lower_bound, "cs_slack": rec.cs_slack,
        "vanish_eps": vanish_eps, "certified_floor": floor,
        "N_X_logX_over_X": rec.N_X * np.log(rec.X) / rec.X,
    }
    write_json(out_dir / "nonvanishing.json", payload)
    write_manifest(out_dir, config, {})
    print(f"X={rec.X:g} N_X={rec.N_X} cs_lower_bound={rec.cs_lower_bound:.4f}")
    if rec.S2 > 0 and rec.cs_lower_bound > rec.N_X + rec.cs_slack + 1e-9 * rec.cs_lower_bound:
        raise VerificationFailure("Cauchy-Schwarz bound exceeded the nonvanishing count")
    return 0


def cmd_gauss_verify(config: RunConfig, out_dir: Path) -> int:
    n_max = config.get_int("n_max")
    k_lo, k_hi = config.get_int("k_min"), config.get_int("k_max")
    rows = []
    worst = 0.0
    ok = True
    for k, n, closed, brute, err in oracle_sweep(n_max, k_lo, k_hi):
        rows.append([k, n, closed.real, closed.imag, brute.real, brute.imag, err])
        worst = max(worst, err / n)
        if err > 1e-9 * n:
            ok = False
    write_csv(out_dir / "gauss.csv",
              ["k", "n", "closed_re", "closed_im", "brute_re", "brute_im", "abs_err"],
              rows)
    write_manifest(out_dir, config, {})
    print(f"gauss-verify: {len(rows)} pairs, worst abs_err/n = {worst:.3e}")
    if not ok:
        raise VerificationFailure("closed form disagrees with the brute-force oracle")
    return 0


def cmd_poisson_verify(config: RunConfig, out_dir: Path) -> int:
    n_max = config.get_int("n_max")
    xs = config.get_list("x_list")
    bumps = [b.strip() for b in config.get("bumps").split(",")]
    tol = config.get_float("tol")
    rows = []
    ok = True
    for bump in bumps:
        for n in range(1, n_max + 1, 2):
            for X in xs:
                rep = poisson_verify(n, X, bump, tol=tol)
                rows.append([n, rep.X, rep.lhs, rep.rhs, rep.residual, rep.tail_estimate])
                if rep.residual > tol:
                    ok = False
    write_csv(out_dir / "poisson.csv",
              ["n", "X", "lhs", "rhs", "residual", "tail_estimate"], rows)
    write_manifest(out_dir, config, {})
    worst = max(r[4] for r in rows)
    print(f"poisson-verify: {len(rows)} cases, worst residual = {worst:.3e}")
    if not ok:
        raise VerificationFailure(f"poisson residual above {tol:g}")
    return 0


def cmd_partition_verify(config: RunConfig, out_dir: Path) -> int:
    pts = config.get_int("points")
    h_max = config.get_int("h_max")
    rng = np.random.default_rng(20240811)
    checks = []
    x = np.exp(rng.uniform(np.log(1.0), np.log(3.0 * 2.0 ** (h_max - 1)), pts))
    err_f = np.max(np.abs(f_partial(x, h_max) - 1.0))
    checks.append(("dyadic_partition", pts, err_f, 1e-12))
    xv = rng.uniform(0.5, 3.0, 1000)
    err_v = np.max(np.abs(v_hat(xv) - 1.0))
    checks.append(("three_scale_hat", 1000, err_v, 1e-12))
    xg = rng.uniform(1.0, 3.0, 1000)
    pair = eval_bump("g_exact", xg) + eval_bump("g_exact", xg / 2.0)
    checks.append(("two_scale_pair", 1000, float(np.max(np.abs(pair - 1.0))), 1e-12))
    rows = [[name, n, err, tol, "pass" if err <= tol else "FAIL"]
            for name, n, err, tol in checks]
    write_csv(out_dir / "partition.csv",
              ["check", "points", "max_abs_error", "tolerance", "status"], rows)
    write_manifest(out_dir, config, {})
    for row in rows:
        print(f"{row[0]}: max error {row[2]:.3e} ({row[4]})")
    if any(row[4] == "FAIL" for row in rows):
        raise VerificationFailure("a partition identity failed")
    return 0


def cmd_sieve_diagnostic(config: RunConfig, out_dir: Path) -> int:
    spec, kernel = _prepare_form(config)
    Ms = config.get_list("m_list", int)
    Ns = config.get_list("n_list", int)
    ts = config.get_list("t_list")
    table_n = config.get_int("table_n") or 2 * max(Ns) + 1
    table = lambda_table(spec, table_n)
    rows = []
    ratios = {}
    for M in Ms:
        for N in Ns:
            for t in ts:
                lhs, shape, ratio = largesieve_diagnostic(spec, table, M, N, t,
                                                          config.get("g_kind"))
                rows.append([M, N, t, lhs, shape, ratio])
                ratios[(M, N, t)] = ratio
    write_csv(out_dir / "sieve.csv",
              ["M", "N", "t", "lhs", "bound_shape", "ratio"], rows)
    write_manifest(out_dir, config, {})
    print(f"sieve-diagnostic: max ratio = {max(r[5] for r in rows):.4f}")
    # t-shape: after dividing by (1+|t|)^2 the ratio may not grow more than 10x
    for M in Ms:
        for N in Ns:
            base = ratios.get((M, N, ts[0]))
            for t in ts[1:]:
                if base and ratios[(M, N, t)] > 10.0 * base:
                    raise VerificationFailure(
                        f"t-dependence at (M={M}, N={N}): ratio grew "
                        f"{ratios[(M, N, t)] / base:.1f}x from t={ts[0]} to t={t}")
    return 0


_COMMANDS = {
    "lvalue": cmd_lvalue,
    "scan-moment": cmd_scan_moment,
    "nonvanishing": cmd_nonvanishing,
    "gauss-verify": cmd_gauss_verify,
    "poisson-verify": cmd_poisson_verify,
    "partition-verify": cmd_partition_verify,
    "sieve-diagnostic": cmd_sieve_diagnostic,
}


def run(config: RunConfig) -> int:
    """Execute a resolved configuration; returns the process exit code."""
    try:
        out_dir = Path(config.get("out_dir"))
        out_dir.mkdir(parents=True, exist_ok=True)
        configure_threads(config.get_int("threads"))
        return _COMMANDS[config.command](config, out_dir)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="twistmoments",
        description="central-derivative computations and verification suites "
                    "for quadratic twist families")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key")
        p.add_argument("--form", help="form-spec file")
        p.add_argument("--out-dir", help="output directory")
        p.add_argument("--threads", help="worker threads (0 = auto)")
    rer = sub.add_parser("rerun")
    rer.add_argument("manifest", help="manifest.json from a previous run")
    args = parser.parse_args(argv)

    try:
        if args.command == "rerun":
            with open(args.manifest) as fh:
                manifest = json.load(fh)
            config = RunConfig.build(manifest["command"], [manifest["config"]])
        else:
            sources: list[dict[str, str]] = []
            if args.config:
                sources.append(parse_keyvalue_file(args.config))
            overrides: dict[str, str] = {}
            for item in args.set:
                if "=" not in item:
                    raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
                key, val = item.split("=", 1)
                overrides[key] = val
            if args.form:
                overrides["form"] = args.form
            if args.out_dir:
                overrides["out_dir"] = args.out_dir
            if args.threads:
                overrides["threads"] = args.threads
            if overrides:
                sources.append(overrides)
            config = RunConfig.build(args.command, sources)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
