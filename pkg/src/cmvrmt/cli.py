"""Command-line interface: sampling, eigenvalues, spectral measures, densities, verification."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import densities as dens
from . import io as cio
from .ensembles import CouplingSpec, EnsembleSpec, sample_cloud
from .errors import DimensionError, DomainError, StratificationError
from .spectra import EigenCloud, eigvals, matrix_spectral_measure, spectral_measure

ENSEMBLES = {
    "cue": "CUE",
    "coe": "COE",
    "cse": "CSE",
    "circular-beta": "CircularBeta",
    "o": "O",
    "so": "SO",
    "o-minus-so": "O_minus_SO",
    "orthogonal-beta": "OrthogonalBeta",
    "usp": "USp",
}

FIGURE_PRESETS = {
    "trunc-cue": (EnsembleSpec("CUE", 301, truncated=True), 301),
    "trunc-o": (EnsembleSpec("O", 301, truncated=True), 301),
    "trunc-usp": (EnsembleSpec("USp", 151, truncated=True), 302),
}
FIGURE_SEED = 7

DENSITY_FORMULAS = (
    "trunc-circular",
    "trunc-orthogonal",
    "nonideal-circular",
    "nonideal-orthogonal",
    "spectral-circular",
    "spectral-orthogonal",
)

# flag name -> default, for merging with config files
_SPEC_DEFAULTS = {
    "ensemble": None, "n": None, "beta": None, "a": None, "b": None, "det": 1,
    "truncated": False, "coupling_r": None, "reps": 1, "seed": None,
    "format": "csv", "out": None, "workers": 1,
}


class UsageError(Exception):
    """Bad flag combination; reported with exit status 2."""


def _parse_coupling(value):
    if value is None:
        return None
    if isinstance(value, str) and value.lower() in ("law", "unit-weight"):
        return CouplingSpec(None)
    try:
        return CouplingSpec(float(value))
    except (TypeError, ValueError, DomainError) as exc:
        raise UsageError(f"--coupling-r must be a number in [0, 1] or 'law': {exc}") from None


def build_spec(opts: dict) -> EnsembleSpec:
    name = opts.get("ensemble")
    if name is None:
        raise UsageError("--ensemble is required")
    truncated = bool(opts.get("truncated"))
    if name.startswith("trunc-"):
        name, truncated = name[len("trunc-"):], True
    if name not in ENSEMBLES:
        raise UsageError(f"unknown ensemble {name!r}; choose from {', '.join(ENSEMBLES)} "
                         "(optionally prefixed with trunc-)")
    if opts.get("n") is None:
        raise UsageError("--n is required")
    try:
        return EnsembleSpec(
            ENSEMBLES[name], int(opts["n"]), beta=opts.get("beta"), a=opts.get("a"),
            b=opts.get("b"), det=int(opts.get("det") or 1), truncated=truncated,
            coupling=_parse_coupling(opts.get("coupling_r")),
        )
    except (DomainError, DimensionError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _merge(args, config: dict) -> dict:
    opts = {}
    for key, default in _SPEC_DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            opts[key] = flag
        elif key in config:
            opts[key] = config[key]
        else:
            opts[key] = default if flag is None else flag
    return opts


def _one_cloud(job):
    spec, seed, rep = job
    return sample_cloud(spec, seed, rep)


def sample_clouds(spec: EnsembleSpec, reps: int, seed: int, workers: int = 1) -> list[EigenCloud]:
    """Clouds for reps 0..reps-1, ordered by rep whatever the worker count."""
    jobs = [(spec, seed, i) for i in range(reps)]
    if workers <= 1 or reps <= 1:
        return [_one_cloud(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_one_cloud, jobs))


def figure_cloud(name: str, seed: int = FIGURE_SEED) -> EigenCloud:
    spec, _ = FIGURE_PRESETS[name]
    return sample_cloud(spec, seed, 0)


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _write_clouds(clouds, fmt, out, header):
    if fmt == "csv":
        _emit(cio.clouds_to_csv(clouds), out)
    else:
        _emit(cio.clouds_to_json(clouds, header) + "\n", out)


# ---------------------------------------------------------------- commands

def cmd_sample(args, opts) -> int:
    spec = build_spec(opts)
    if opts["seed"] is None:
        raise UsageError("--seed is required for sampling")
    reps = int(opts["reps"])
    if reps < 1:
        raise UsageError("--reps must be positive")
    clouds = sample_clouds(spec, reps, int(opts["seed"]), int(opts["workers"]))
    header = {"ensemble": spec.tag(), "seed": int(opts["seed"]), "reps": reps}
    _write_clouds(clouds, opts["format"], opts["out"], header)
    return 0


def cmd_eigen(args, opts) -> int:
    M = cio.load_matrix(args.matrix)
    cloud = EigenCloud(eigvals(M), provenance={"rep": 0, "source": str(args.matrix)})
    _write_clouds([cloud], opts["format"], opts["out"], {"source": str(args.matrix)})
    return 0


def cmd_measure(args, opts) -> int:
    M = cio.load_matrix(args.matrix)
    if args.block:
        mu = matrix_spectral_measure(M)
        doc = {"nodes": [[z.real, z.imag] for z in mu.nodes],
               "weights": [[[[w.real, w.imag] for w in row] for row in W] for W in mu.weights]}
    else:
        from .opuc import verblunsky_from_measure

        mu = spectral_measure(M)
        doc = {"nodes": [[z.real, z.imag] for z in mu.nodes], "weights": list(mu.weights),
               "alphas": [[a.real, a.imag] for a in verblunsky_from_measure(mu)]}
    _emit(cio.dumps_json(doc, indent=1) + "\n", opts["out"])
    return 0


def _as_points(row):
    return np.array([complex(p[0], p[1]) if isinstance(p, (list, tuple)) else complex(p)
                     for p in row])


def _density_row(formula, row, beta, a, b, orth_case):
    if formula == "trunc-circular":
        z = _as_points(row)
        return dens.log_density_trunc_circular(z, beta), {"n": z.size}
    if formula == "nonideal-circular":
        z = _as_points(row)
        return dens.log_density_nonideal(z, beta), {"n": z.size}
    if formula in ("trunc-orthogonal", "nonideal-orthogonal"):
        z = _as_points(row)
        if formula == "nonideal-orthogonal":
            a = b = beta / 4 - 1
            val = dens.log_density_nonideal(z, beta, real=True)
        else:
            val = dens.log_density_trunc_orthogonal(z, beta, a, b)
        return val, {"n": z.size, "log_P": dens.log_P(z.size, beta, a, b), "a": a, "b": b}
    if formula == "spectral-circular":
        th, mu = row["thetas"], row["weights"]
        t = dens.normalization_table(len(th), beta)
        return dens.log_density_spectral_circular(th, mu, beta), {"log_Z": t.log_Z, "log_Zp": t.log_Zp}
    th, mu = row["thetas"], row["weights"]
    val = dens.log_density_spectral_orthogonal(th, mu, orth_case, beta, a, b)
    n = len(th) + 1 if orth_case == "b" else len(th)
    t = dens.normalization_table(n, beta, a, b)
    names = {"a": ("C", "K"), "b": ("D", "L"), "c": ("E", "M"), "d": ("E", "M")}[orth_case]
    return val, {f"log_{k}": getattr(t, "log_" + k) for k in names}


def cmd_density(args, opts) -> int:
    import json

    beta = opts["beta"]
    if beta is None:
        raise UsageError("--beta is required")
    a = -0.5 if opts["a"] is None else float(opts["a"])
    b = -0.5 if opts["b"] is None else float(opts["b"])
    if args.formula == "spectral-orthogonal" and args.case is None:
        raise UsageError("--case is required for spectral-orthogonal")
    rows = json.loads(Path(args.input).read_text()) if args.input != "-" else json.load(sys.stdin)
    if not isinstance(rows, list):
        raise UsageError("density input must be a JSON array of configurations")
    out = []
    failed = False
    for i, row in enumerate(rows):
        entry = {"row": i, "formula": args.formula}
        try:
            val, consts = _density_row(args.formula, row, float(beta), a, b, args.case)
            entry["log_density"] = val
            entry["constants"] = consts
        except (DomainError, DimensionError, StratificationError, ValueError, KeyError, TypeError) as exc:
            entry["error"] = f"{type(exc).__name__}: {exc}"
            failed = True
        out.append(entry)
    _emit(cio.dumps_json(out, indent=1) + "\n", opts["out"])
    return 1 if failed and args.strict else 0


def cmd_verify(args, opts) -> int:
    from .verify import CHECKS, DEFAULT_SEED, run_suite

    only = args.check or None
    if only:
        bad = [c for c in only if c not in CHECKS]
        if bad:
            raise UsageError(f"unknown check(s) {bad}; choose from {', '.join(CHECKS)}")
    seed = DEFAULT_SEED if opts["seed"] is None else int(opts["seed"])
    reports = run_suite(args.suite, seed, only)
    for r in reports:
        print(r.line(), file=sys.stderr)
    _emit(cio.dumps_json([r.to_dict() for r in reports], indent=1) + "\n", opts["out"])
    return 0 if all(r.passed for r in reports) else 1


def cmd_figure(args, opts) -> int:
    seed = FIGURE_SEED if opts["seed"] is None else int(opts["seed"])
    names = list(FIGURE_PRESETS) if args.preset == "all" else [args.preset]
    clouds = []
    for i, name in enumerate(names):
        c = figure_cloud(name, seed)
        c.provenance["rep"] = i
        clouds.append(c)
    header = {"presets": names, "seed": seed,
              "ensembles": [FIGURE_PRESETS[n][0].tag() for n in names]}
    _write_clouds(clouds, opts["format"], opts["out"], header)
    return 0


# ---------------------------------------------------------------- parser

def _add_spec_flags(p):
    p.add_argument("--ensemble", help="cue, coe, cse, circular-beta, o, so, o-minus-so, "
                   "orthogonal-beta, usp; prefix trunc- for the truncated model")
    p.add_argument("--n", type=int, help="model size (quaternionic rows for cse/usp)")
    p.add_argument("--beta", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--det", type=int, choices=(1, -1), help="determinant sign for orthogonal-beta")
    p.add_argument("--truncated", action="store_true")
    p.add_argument("--coupling-r", dest="coupling_r",
                   help="constant reflection coefficient in [0, 1], or 'law' for the unit-weight law")


def _add_output_flags(p):
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--config", help="TOML or JSON file mirroring the flags; flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmvrmt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample eigenvalue clouds from an ensemble model")
    _add_spec_flags(p)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="worker processes (output order is by rep)")
    _add_output_flags(p)

    p = sub.add_parser("eigen", help="eigenvalues of a matrix file (.npy or JSON)")
    p.add_argument("matrix")
    _add_output_flags(p)

    p = sub.add_parser("measure", help="spectral measure of a unitary matrix file")
    p.add_argument("matrix")
    p.add_argument("--block", action="store_true", help="2x2 measure for e_1, e_2")
    _add_output_flags(p)

    p = sub.add_parser("density", help="evaluate log-densities for configurations in a JSON file")
    p.add_argument("--formula", required=True, choices=DENSITY_FORMULAS)
    p.add_argument("--case", choices=dens.SPECTRAL_ORTHOGONAL_CASES)
    p.add_argument("--input", required=True, help="JSON array of rows, '-' for stdin")
    p.add_argument("--beta", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--strict", action="store_true", help="exit 1 if any row fails")
    _add_output_flags(p)

    p = sub.add_parser("verify", help="run the verification suite, JSON report")
    p.add_argument("--suite", choices=("quick", "full"), default="quick")
    p.add_argument("--check", action="append", help="run only this check (repeatable)")
    p.add_argument("--seed", type=int)
    _add_output_flags(p)

    p = sub.add_parser("figure", help="eigenvalue clouds for the figure presets")
    p.add_argument("--preset", choices=tuple(FIGURE_PRESETS) + ("all",), default="all")
    p.add_argument("--seed", type=int)
    _add_output_flags(p)
    return parser


COMMANDS = {
    "sample": cmd_sample,
    "eigen": cmd_eigen,
    "measure": cmd_measure,
    "density": cmd_density,
    "verify": cmd_verify,
    "figure": cmd_figure,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = cio.load_config(args.config) if getattr(args, "config", None) else {}
        unknown = set(config) - set(_SPEC_DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        opts = _merge(args, config)
        if opts["format"] not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        if args.command == "verify" and getattr(args, "format", None) is None:
            opts["format"] = "json"
        return COMMANDS[args.command](args, opts)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, ValueError) as exc:
        print(f"cmvrmt: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
