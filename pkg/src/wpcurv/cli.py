"""Command-line front end: wp <subcommand> [flags].

Subcommands map one-to-one onto the library layers: `tensor` fills an entry
cache, `operator` assembles the matrix, `spectra` prints its eigenvalues,
`verify` runs the full verdict battery and exits nonzero if anything fails,
`noncompact` emits the block-vector evidence, `oracle` runs the independent
cross-checks, and `export-plots` flattens a report into plottable CSVs.
Settings come from an optional TOML file overridden by flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python 3.10
    import tomli as tomllib


class ConfigError(Exception):
    """A run configuration value that cannot be used."""


@dataclass
class RunConfig:
    n: int = 4
    i_max: int = 4
    jobs: int = 1
    quad_order: int = 96
    tol_solver: float = 1e-9
    tol_eigen: float = 1e-9
    kernel_tol: float = 1e-7
    projection_start: int = 2
    tensor: str | None = None
    report: str | None = None
    out: str | None = None

    def validate(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigError(f"field 'n': truncation must be a positive integer, got {self.n!r}")
        if not isinstance(self.i_max, int) or self.i_max < 0:
            raise ConfigError(f"field 'i_max': block count must be nonnegative, got {self.i_max!r}")
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise ConfigError(f"field 'jobs': worker count must be at least 1, got {self.jobs!r}")
        if self.quad_order < 1:
            raise ConfigError(f"field 'quad_order': must be at least 1, got {self.quad_order!r}")
        for name in ("tol_solver", "tol_eigen", "kernel_tol"):
            value = getattr(self, name)
            if not (value > 0):
                raise ConfigError(f"field '{name}': tolerance must be positive, got {value!r}")
        if self.projection_start < 1:
            raise ConfigError(
                f"field 'projection_start': must be at least 1, got {self.projection_start!r}"
            )


_KNOWN_KEYS = {f.name for f in fields(RunConfig)}


def load_config(path: str) -> dict:
    """Flatten a TOML config file; tables are only one level of grouping."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    flat: dict = {}
    for key, value in raw.items():
        if isinstance(value, dict):
            flat.update(value)
        else:
            flat[key] = value
    unknown = sorted(set(flat) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return flat


def resolve_config(args: argparse.Namespace) -> RunConfig:
    settings: dict = {}
    if getattr(args, "config", None):
        settings.update(load_config(args.config))
    for name in _KNOWN_KEYS:
        flag = getattr(args, name, None)
        if flag is not None:
            settings[name] = flag
    config = RunConfig(**settings)
    config.validate()
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wp",
        description="numerical verification of curvature-operator properties",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, out_help: str | None = None) -> None:
        p.add_argument("--config", help="TOML settings file")
        p.add_argument("--n", type=int, help="truncation rank")
        p.add_argument("--i-max", dest="i_max", type=int, help="largest block index")
        p.add_argument("--jobs", type=int, help="parallel workers for tensor entries")
        p.add_argument("--tensor", help="tensor cache path")
        p.add_argument("--report", help="report JSON path")
        p.add_argument("--tol-solver", dest="tol_solver", type=float, help="solver residual tolerance")
        p.add_argument("--tol-eigen", dest="tol_eigen", type=float, help="eigenvalue tolerance")
        p.add_argument("--quad-order", dest="quad_order", type=int, help="radial quadrature order")
        if out_help:
            p.add_argument("--out", help=out_help)

    common(sub.add_parser("tensor", help="compute a tensor entry block"), "cache output path")
    common(sub.add_parser("operator", help="assemble the operator matrix"), "matrix CSV path")
    common(sub.add_parser("spectra", help="eigenvalues of the operator"), "eigenvalue JSON path")
    common(sub.add_parser("verify", help="run all verdicts"))
    common(sub.add_parser("noncompact", help="block-vector evidence"), "evidence JSON path")
    oracle_p = sub.add_parser("oracle", help="independent cross-checks")
    common(oracle_p, "result JSON path")
    oracle_p.add_argument(
        "--suite",
        choices=("beta", "resolvent", "form"),
        required=True,
        help="which oracle family to run",
    )
    common(sub.add_parser("export-plots", help="flatten a report into CSVs"), "output directory")
    return parser


# ---------------------------------------------------------------------------
# subcommand bodies


def _load_or_compute_cache(config: RunConfig, save_missing: bool = True):
    from .wp_tensor import TensorCache, compute_block

    cache = None
    path = config.tensor
    if path and Path(path).exists():
        cache = TensorCache.load(path)
    cache, solved = compute_block(config.n, cache=cache, jobs=config.jobs, out_path=path)
    if path and solved and save_missing:
        cache.save(path)
    return cache


def cmd_tensor(config: RunConfig) -> int:
    from .wp_tensor import TensorCache, compute_block

    out = config.out or f"tensor-N{config.n}.jsonl"
    cache = None
    if Path(out).exists():
        cache = TensorCache.load(out)
    cache, solved = compute_block(config.n, cache=cache, jobs=config.jobs, out_path=out)
    cache.save(out)
    print(f"{out}: {len(cache)} entries ({solved} solved), sha256 {cache.content_hash()[:16]}")
    return 0


def cmd_operator(config: RunConfig) -> int:
    from .wedge_operator import assemble_matrix, wedge_dimension

    cache = _load_or_compute_cache(config)
    out = config.out or f"operator-N{config.n}.csv"
    matrix = assemble_matrix(config.n, cache)
    matrix.to_csv(out)
    print(f"{out}: {wedge_dimension(config.n)} x {wedge_dimension(config.n)} matrix written")
    return 0


def cmd_spectra(config: RunConfig) -> int:
    from .wedge_operator import assemble_matrix

    cache = _load_or_compute_cache(config)
    eigenvalues = assemble_matrix(config.n, cache).eigenvalues()
    payload = {"n": config.n, "eigenvalues": [float(v) for v in eigenvalues]}
    text = json.dumps(payload, indent=2, sort_keys=True)
    if config.out:
        Path(config.out).write_text(text + "\n")
        print(f"{config.out}: {len(eigenvalues)} eigenvalues written")
    else:
        print(text)
    return 0


def cmd_verify(config: RunConfig) -> int:
    from .spectral_analysis import build_report

    cache = _load_or_compute_cache(config)
    report = build_report(
        config.n,
        cache=cache,
        i_max=config.i_max,
        tol_eigen=config.tol_eigen,
        kernel_tol=config.kernel_tol,
        projection_start=config.projection_start,
    )
    if config.report:
        report.save(config.report)
    for name, verdict in report.verdicts.items():
        status = "PASS" if verdict.get("passed") else "FAIL"
        print(f"{name}: {status}")
    print(f"overall: {'PASS' if report.all_passed else 'FAIL'}")
    return 0 if report.all_passed else 1


def cmd_noncompact(config: RunConfig) -> int:
    from .spectral_analysis import noncompactness_evidence

    evidence = noncompactness_evidence(config.i_max, projection_start=config.projection_start)
    text = json.dumps(evidence, indent=2, sort_keys=True)
    if config.out:
        Path(config.out).write_text(text + "\n")
        print(f"{config.out}: evidence written (passed: {evidence['passed']})")
    else:
        print(text)
    return 0 if evidence["passed"] else 1


def _oracle_beta() -> list[dict]:
    from .oracle import beta_integral_exact

    checks = []
    for m in range(1, 1001):
        beta_integral_exact(m)  # raises if the inequality ever fails
    checks.append({"name": "exact_inequality_m_1_1000", "passed": True, "detail": 1000})
    first = beta_integral_exact(1)
    checks.append(
        {
            "name": "value_at_m_1",
            "passed": (first.numerator, first.denominator) == (1, 56),
            "detail": f"{first.numerator}/{first.denominator}",
        }
    )
    return checks


def _oracle_resolvent() -> list[dict]:
    from .hyperbolic_disk import SeparableFunction, basis_element
    from .oracle import fd_grid, fd_resolvent, fd_self_convergence
    from .resolvent import apply_D

    checks = []
    size = 1024
    x = fd_grid(size)
    flat = fd_resolvent(np.ones_like(x), 0, size)
    err_one = float(np.max(np.abs(flat - 1.0)))
    checks.append({"name": "constant_fixed_point", "passed": err_one < 1e-6, "detail": err_one})

    amp = basis_element(2).amplitude
    f = amp**2 * (1.0 - x) ** 4
    u_fd = fd_resolvent(f, 0, size)
    density = SeparableFunction.from_basis_product(1, 1, x)
    u_main = apply_D(density).terms[0].profile_at(x).real
    err_cross = float(np.max(np.abs(u_fd - u_main)))
    checks.append({"name": "cross_route_mu1_density", "passed": err_cross < 1e-6, "detail": err_cross})

    diffs = fd_self_convergence(lambda g: amp**2 * (1.0 - g) ** 4, 0, (128, 256, 512))
    ratio = diffs[0] / diffs[1]
    checks.append({"name": "second_order_refinement", "passed": 2.5 < ratio < 5.5, "detail": ratio})
    return checks


def _oracle_form() -> list[dict]:
    from .oracle import direct_quadratic_form
    from .wedge_operator import WedgeVector, form_of_vector, j_action
    from .wp_tensor import compute_block

    cache, _ = compute_block(2)
    checks = []

    probe = WedgeVector.zeros(2)
    probe.b[0, 0] = 1.0
    direct = direct_quadratic_form(probe)
    pinned = -8.0 * cache.get(1, 1, 1, 1)
    checks.append(
        {"name": "pinned_x1_wedge_y1", "passed": bool(abs(direct - pinned) < 1e-6), "detail": float(abs(direct - pinned))}
    )

    rng = np.random.default_rng(2024)
    mixed = WedgeVector(2, rng.normal(size=1), rng.normal(size=(2, 2)), rng.normal(size=1))
    diff = abs(direct_quadratic_form(mixed) - form_of_vector(mixed, cache))
    checks.append({"name": "mixed_vector_agreement", "passed": bool(diff < 1e-6), "detail": float(diff)})

    flat = WedgeVector(2, rng.normal(size=1), rng.normal(size=(2, 2)), np.zeros(1))
    kernel_vec = flat - j_action(flat)
    value = abs(direct_quadratic_form(kernel_vec))
    checks.append({"name": "kernel_direction_zero", "passed": bool(value < 1e-6), "detail": float(value)})
    return checks


def cmd_oracle(config: RunConfig, suite: str) -> int:
    runners = {"beta": _oracle_beta, "resolvent": _oracle_resolvent, "form": _oracle_form}
    checks = runners[suite]()
    passed = all(c["passed"] for c in checks)
    payload = {"suite": suite, "passed": passed, "checks": checks}
    text = json.dumps(payload, indent=2, sort_keys=True, default=str)
    if config.out:
        Path(config.out).write_text(text + "\n")
        print(f"{config.out}: oracle suite '{suite}' {'PASS' if passed else 'FAIL'}")
    else:
        print(text)
    return 0 if passed else 1


def cmd_export_plots(config: RunConfig) -> int:
    if not config.report:
        raise ConfigError("field 'report': export-plots needs a report JSON to read")
    report = json.loads(Path(config.report).read_text())
    eigenvalues = report.get("spectra", {}).get("eigenvalues", [])
    if not eigenvalues:
        raise ConfigError(f"report {config.report} holds no eigenvalues to export")
    out_dir = Path(config.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)

    lines = ["index,eigenvalue"]
    lines += [f"{idx},{value!r}" for idx, value in enumerate(eigenvalues)]
    (out_dir / "eigenvalues.csv").write_text("\n".join(lines) + "\n")

    trend = report.get("verdicts", {}).get("trend", {}).get("values", [])
    lines = ["n,diagonal_curvature"]
    lines += [f"{idx + 1},{value!r}" for idx, value in enumerate(trend)]
    (out_dir / "diagonal_trend.csv").write_text("\n".join(lines) + "\n")

    blocks = report.get("verdicts", {}).get("noncompactness", {}).get("per_block", [])
    floor = 2.0**-30
    lines = ["i,neg_form,floor"]
    lines += [f"{b['i']},{b['neg_form']!r},{floor!r}" for b in blocks]
    (out_dir / "block_vectors.csv").write_text("\n".join(lines) + "\n")

    print(f"{out_dir}: eigenvalues.csv, diagonal_trend.csv, block_vectors.csv")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        if args.command == "tensor":
            return cmd_tensor(config)
        if args.command == "operator":
            return cmd_operator(config)
        if args.command == "spectra":
            return cmd_spectra(config)
        if args.command == "verify":
            return cmd_verify(config)
        if args.command == "noncompact":
            return cmd_noncompact(config)
        if args.command == "oracle":
            return cmd_oracle(config, args.suite)
        if args.command == "export-plots":
            return cmd_export_plots(config)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
