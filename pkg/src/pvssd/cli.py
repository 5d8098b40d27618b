"""Command-line interface.

Subcommands: ``ssd``, ``sweep``, ``evaluate``, ``coverage``, ``asymptotics``
and ``surrogate``. Options may also come from an INI file given with
``--config``; keys are flag names without the leading dashes, read from the
``[DEFAULT]`` section and the section named after the subcommand. Flags on
the command line win over the file.

Exit status: 0 success, 2 configuration error, 3 data error, 4 search
budget exceeded.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .asymptotics import Region, asymptotic_sample_size, gamma_coefficient, k_star, k_star_upper_bound, prior_region
from .errors import (
    BudgetExceededError,
    DataFormatError,
    DegeneratePriorError,
    InsufficientDataError,
    InvalidInputError,
    SSDError,
)
from .evaluation import (
    AXIS_NAMES,
    Axis,
    DataSource,
    GridSweep,
    coverage_grid,
    coverage_probability,
    epsilon_sweep,
    exceedance_curve,
    success_grid,
    success_rate,
    sweep_sample_sizes,
    transition_fraction,
)
from .ingest import (
    FOOTBALL_SIZE,
    FOOTBALL_TRUTH,
    SONGS_SIZE,
    SONGS_TRUTH,
    load_csv,
    make_surrogate,
    model_family,
    parse_quantity,
    write_csv,
)
from .models import BetaBernoulli, NormalNIG, PoissonGamma, hyper_from_marginal_moments, make_truth
from .ssd import CriterionSpec, vpvc_sample_size

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_BUDGET = 4

SEED_ENV = "PVSSD_SEED"
TRUTH_PRESETS = {"football": FOOTBALL_TRUTH, "songs": SONGS_TRUTH}
# options that do not change results and stay out of the config hash
_HASH_EXCLUDE = {"output", "threads", "config", "format"}


class ConfigError(InvalidInputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _axis(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"axis must be name:min:max:steps, got {text!r}")
    try:
        return Axis(parts[0].replace("-", "_"), float(parts[1]), float(parts[2]), int(parts[3]))
    except (ValueError, InvalidInputError) as exc:
        raise argparse.ArgumentTypeError(f"bad axis {text!r}: {exc}") from None


def _model_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--family", help="poisson, normal or bernoulli (aliases: count, continuous, binary)")
    g.add_argument("--mean", type=float, help="prior mean of theta or p")
    g.add_argument("--sd", type=float, help="prior sd of theta or p")
    g.add_argument("--mean-s2", type=float, help="prior mean of sigma^2 (normal)")
    g.add_argument("--sd-s2", type=float, help="prior sd of sigma^2 (normal)")
    g.add_argument("--sd-mu", type=float, help="marginal prior sd of mu (normal)")
    g.add_argument("--mu0", type=float, help="prior mean of mu (normal)")
    g.add_argument("--alpha", type=float, help="Gamma shape or inverse-gamma shape")
    g.add_argument("--beta", type=float, help="Gamma rate or inverse-gamma scale")
    g.add_argument("--lambda", dest="lam", type=float, help="normal prior variance scale of mu")
    g.add_argument("--a", type=float, help="Beta shape a")
    g.add_argument("--b", type=float, help="Beta shape b")


def _criterion_options(p: argparse.ArgumentParser, eps_required: bool = True) -> None:
    g = p.add_argument_group("criterion")
    g.add_argument("--eps", help="precision, with optional unit suffix (sec, min)" + ("" if eps_required else "; optional"))
    g.add_argument("--k", type=float, default=2.0, help="number of sds added to the mean (default 2; 0 gives APVC)")
    g.add_argument("--criterion", choices=("vpvc", "apvc"), default="vpvc", help="apvc forces k = 0")


def _run_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run")
    g.add_argument("--replicates", type=int, default=1000)
    g.add_argument("--seed", type=_seed, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
    g.add_argument("--threads", type=int, default=1)


def _grid_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--axis1", type=_axis, help="grid axis name:min:max:steps")
    p.add_argument("--axis2", type=_axis, help="grid axis name:min:max:steps")


def _source_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("data source")
    g.add_argument("--source", choices=("truth", "prior", "empirical"), help="default inferred from --truth/--data")
    g.add_argument("--truth", help="true parameter: theta, p, 'mu,sigma2', or a preset (football, songs)")
    g.add_argument("--data", help="CSV file for empirical resampling")
    g.add_argument("--column", default="value", help="CSV column name")
    g.add_argument("--without-replacement", action="store_true", help="resample without replacement")


def _output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="default from the output extension, else csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pvssd", description="Bayesian sample-size determination by posterior variance.")
    parser.add_argument("--version", action="version", version=f"pvssd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="INI configuration file")
        return p

    p = command("ssd", "Smallest sample size meeting the criterion.")
    _model_options(p)
    _criterion_options(p)
    _output_options(p)

    p = command("sweep", "Sample sizes over a grid of prior moments.")
    _model_options(p)
    _criterion_options(p)
    _grid_options(p)
    p.add_argument("--threads", type=int, default=1)
    _output_options(p)

    p = command("evaluate", "Monte-Carlo success rates, exceedance curves and epsilon sweeps.")
    _model_options(p)
    _criterion_options(p, eps_required=False)
    _grid_options(p)
    _source_options(p)
    _run_options(p)
    p.add_argument("--experiment", choices=("success", "exceedance", "eps-sweep"), default="success")
    p.add_argument("--n", type=int, help="sample size (default: solve the criterion)")
    p.add_argument("--k-list", type=_float_list, help="k values for exceedance curves")
    p.add_argument("--n-list", help="sample sizes for exceedance curves, comma separated")
    p.add_argument("--eps-list", help="decreasing epsilon values for eps-sweep, comma separated, units allowed")
    _output_options(p)

    p = command("coverage", "Prior-predictive coverage of mean + k*sd of the posterior variance.")
    _model_options(p)
    _criterion_options(p)
    _grid_options(p)
    _run_options(p)
    p.add_argument("--n", type=int, help="sample size (default: solve the criterion)")
    _output_options(p)

    p = command("asymptotics", "Small-epsilon summary, threshold k* and its upper bound.")
    _model_options(p)
    _criterion_options(p, eps_required=False)
    p.add_argument("--truth", help="true parameter for k*")
    p.add_argument("--region", help="lo:hi box for the k* upper bound (default prior mean +- width sd)")
    p.add_argument("--width", type=float, default=1.0, help="number of prior sds for the default region")
    _output_options(p)

    p = command("surrogate", "Write a synthetic dataset drawn at a true parameter.")
    p.add_argument("--family", required=False)
    p.add_argument("--truth", help="true parameter or preset (football, songs)")
    p.add_argument("--size", type=int, help="number of observations (default 5784 counts, 100000 continuous)")
    p.add_argument("--column", default="value")
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--output", "-o", help="CSV path (default stdout)")
    return parser


def _config_argv(path: str, command: str) -> list[str]:
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"bad config {path}: {exc}") from None
    items = dict(cp[command]) if cp.has_section(command) else dict(cp.defaults())
    argv = []
    for key, value in items.items():
        flag = "--" + key.strip().replace("_", "-")
        if value.strip().lower() in ("true", "yes", "on"):
            argv.append(flag)
        elif value.strip().lower() in ("false", "no", "off"):
            continue
        else:
            argv.append(f"{flag}={value.strip()}")
    return argv


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        # config values first, so flags repeated on the command line win
        file_argv = _config_argv(args.config, args.command)
        rest = argv[argv.index(args.command) + 1 :]
        args = parser.parse_args([*argv[: argv.index(args.command) + 1], *file_argv, *rest])
    if getattr(args, "seed", "absent") is None:
        env = os.environ.get(SEED_ENV)
        try:
            args.seed = _seed(env) if env else 0
        except argparse.ArgumentTypeError as exc:
            raise ConfigError(f"${SEED_ENV}: {exc}") from None
    return args


# ---------------------------------------------------------------------------
# building domain objects from arguments
# ---------------------------------------------------------------------------


def _family(args) -> str:
    if not args.family:
        raise ConfigError("--family is required")
    return model_family(args.family)


def _marginals(args, family: str) -> dict:
    if family == "normal":
        out = {"mean_s2": args.mean_s2, "sd_s2": args.sd_s2, "sd_mu": args.sd_mu, "mean_mu": args.mu0}
    else:
        out = {"mean": args.mean, "sd": args.sd}
    return {k: v for k, v in out.items() if v is not None}


def build_model(args):
    fam = _family(args)
    if fam == "poisson" and args.alpha is not None and args.beta is not None:
        return PoissonGamma(args.alpha, args.beta)
    if fam == "normal" and None not in (args.lam, args.alpha, args.beta):
        return NormalNIG(args.mu0 if args.mu0 is not None else 0.0, args.lam, args.alpha, args.beta)
    if fam == "bernoulli" and args.a is not None and args.b is not None:
        return BetaBernoulli(args.a, args.b)
    moments = _marginals(args, fam)
    need = ("mean_s2", "sd_s2", "sd_mu") if fam == "normal" else ("mean", "sd")
    missing = [n for n in need if n not in moments]
    if missing:
        flags = ", ".join("--" + m.replace("_", "-") for m in missing)
        raise ConfigError(f"{fam} prior needs native hyperparameters or marginal moments (missing {flags})")
    return hyper_from_marginal_moments(fam, **moments)


def build_grid(args) -> GridSweep:
    fam = _family(args)
    if args.axis1 is None or args.axis2 is None:
        raise ConfigError("--axis1 and --axis2 are required for a grid")
    names = AXIS_NAMES[fam]
    axes = {args.axis1.name, args.axis2.name}
    fixed = {k: v for k, v in _marginals(args, fam).items() if k not in axes}
    missing = [n for n in names if n not in axes and n not in fixed and n != "mean_mu"]
    if missing:
        raise ConfigError(f"grid needs fixed values for {', '.join('--' + m.replace('_', '-') for m in missing)}")
    return GridSweep(fam, args.axis1, args.axis2, fixed=fixed)


def _eps(text) -> tuple[float, str]:
    if text is None:
        raise ConfigError("--eps is required")
    return parse_quantity(text)


def build_spec(args) -> CriterionSpec:
    eps, _ = _eps(args.eps)
    k = 0.0 if args.criterion == "apvc" else args.k
    return CriterionSpec(eps, k)


def parse_truth(text: Optional[str], family: str):
    if text is None:
        raise ConfigError("--truth is required")
    if text in TRUTH_PRESETS:
        truth = TRUTH_PRESETS[text]
        if truth.family != family:
            raise ConfigError(f"preset {text!r} is a {truth.family} truth, not {family}")
        return truth
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"cannot parse truth {text!r}") from None
    try:
        return make_truth(family, *values)
    except TypeError:
        raise ConfigError(f"wrong number of values in truth {text!r} for {family}") from None


def build_source(args, family: str) -> DataSource:
    kind = args.source or ("empirical" if args.data else "truth" if args.truth else "prior")
    if kind == "truth":
        return DataSource.from_truth(parse_truth(args.truth, family))
    if kind == "prior":
        return DataSource.prior_predictive()
    if not args.data:
        raise ConfigError("--data is required for an empirical source")
    return DataSource.empirical(load_dataset(args.data, args.column, family), replace=not args.without_replacement)


def load_dataset(path: str, column: str, family: str):
    try:
        return load_csv(path, column, family)
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from None
    except DataFormatError:
        raise
    except InvalidInputError as exc:
        raise DataFormatError(str(exc)) from None


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _clean(v):
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def config_hash(args) -> str:
    items = {k: v for k, v in sorted(vars(args).items()) if k not in _HASH_EXCLUDE}
    blob = json.dumps(items, sort_keys=True, default=repr)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def provenance(args, extra: Optional[dict] = None) -> dict:
    out = {"pvssd": __version__, "command": args.command, "config_hash": config_hash(args)}
    if getattr(args, "seed", None) is not None:
        out["seed"] = args.seed
    if getattr(args, "eps", None) is not None:
        value, unit = parse_quantity(args.eps)
        out["eps"] = value
        out["eps_input"] = str(args.eps)
        if unit:
            out["eps_unit"] = unit
    out.update(extra or {})
    return out


def render(rows: list[dict], prov: dict, fmt: str) -> str:
    rows = [{k: _clean(v) for k, v in r.items()} for r in rows]
    buf = io.StringIO()
    if fmt == "json":
        buf.write(json.dumps({"provenance": prov}, sort_keys=False) + "\n")
        for r in rows:
            buf.write(json.dumps(r) + "\n")
        return buf.getvalue()
    for key, value in prov.items():
        buf.write(f"# {key}: {value}\n")
    fields = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("NA" if r.get(k) is None else repr(r[k]) if isinstance(r[k], float) else r[k]) for k in fields})
    return buf.getvalue()


def emit(args, rows: list[dict], extra: Optional[dict] = None, stdout=None) -> None:
    stdout = stdout or sys.stdout
    fmt = args.format
    if fmt is None:
        fmt = "json" if args.output and args.output.endswith((".json", ".jsonl")) else "csv"
    text = render(rows, provenance(args, extra), fmt)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    return "NA" if x is None else f"{x:.10g}"


def cmd_ssd(args, out) -> int:
    spec = build_spec(args)
    model = build_model(args)
    res = vpvc_sample_size(model, spec)
    eps2 = spec.epsilon**2
    label = "APVC" if spec.k == 0 else "VPVC"
    _, unit = parse_quantity(args.eps)
    print(f"model: {model}", file=out)
    print(f"criterion: {label}, eps = {_fmt(spec.epsilon)}{' ' + unit if unit else ''} (eps^2 = {_fmt(eps2)}), k = {_fmt(spec.k)}", file=out)
    print(f"n = {res.n}", file=out)
    if res.n > 1:
        print(f"lhs({res.n - 1}) = {_fmt(res.lhs_at_n_minus_1)} >= eps^2", file=out)
    print(f"lhs({res.n}) = {_fmt(res.lhs_at_n)} < eps^2", file=out)
    asym = None
    try:
        asym = asymptotic_sample_size(model, spec.epsilon, spec.k)
        print(f"asymptotic n = {asym.n_asymptotic:.4f} (gamma = {asym.gamma:.6g}, ratio {res.n / asym.n_asymptotic:.4f})", file=out)
    except SSDError as exc:
        print(f"asymptotic n unavailable: {exc}", file=out)
    boundary = res.lhs_at_n_minus_1 is not None and math.isclose(res.lhs_at_n_minus_1, eps2, rel_tol=1e-12)
    if boundary:
        print(
            f"note: lhs({res.n - 1}) equals eps^2 to 1e-12 relative; the strict criterion returns {res.n}, "
            f"a non-strict one would return {res.n - 1}",
            file=out,
        )
    if args.output:
        row = {
            "family": model.family,
            "criterion": label.lower(),
            "epsilon": spec.epsilon,
            "k": spec.k,
            "n": res.n,
            "lhs_at_n": res.lhs_at_n,
            "lhs_at_n_minus_1": res.lhs_at_n_minus_1,
            "n_asymptotic": asym.n_asymptotic if asym else None,
            "boundary": boundary,
        }
        emit(args, [row])
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    spec = build_spec(args)
    grid = build_grid(args)
    rows = sweep_sample_sizes(grid, spec, threads=args.threads)
    emit(args, rows, {"family": grid.family, "k": spec.k}, stdout=out)
    return EXIT_OK


def _solve_n(args, model, spec) -> int:
    return args.n if args.n is not None else vpvc_sample_size(model, spec).n


def cmd_evaluate(args, out) -> int:
    fam = _family(args)
    extra = {"family": fam, "replicates": args.replicates}
    if args.experiment == "exceedance":
        model = build_model(args)
        truth = parse_truth(args.truth, fam)
        if not args.k_list or not args.n_list:
            raise ConfigError("exceedance needs --k-list and --n-list")
        try:
            n_values = [int(v) for v in args.n_list.split(",")]
        except ValueError:
            raise ConfigError(f"bad --n-list {args.n_list!r}") from None
        rows = exceedance_curve(model, truth, args.k_list, n_values, args.replicates, args.seed)
        extra["k_star"] = k_star(model, truth).k_star
        extra["truth"] = str(truth)
        emit(args, rows, extra, stdout=out)
        return EXIT_OK

    source = build_source(args, fam)
    extra["source"] = source.describe()
    if args.experiment == "eps-sweep":
        if not args.eps_list:
            raise ConfigError("eps-sweep needs --eps-list")
        eps_values = [parse_quantity(v)[0] for v in args.eps_list.split(",")]
        grid = build_grid(args)
        k = 0.0 if args.criterion == "apvc" else args.k
        sweeps = epsilon_sweep(grid, source, k, eps_values, args.replicates, args.seed, args.threads)
        rows = [r for eps in eps_values for r in sweeps[eps]]
        for eps in eps_values:
            print(f"eps = {eps:.6g}: transition fraction {transition_fraction(sweeps[eps]):.4f}", file=sys.stderr)
        emit(args, rows, extra, stdout=out)
        return EXIT_OK

    spec = build_spec(args)
    if args.axis1 is not None or args.axis2 is not None:
        rows = success_grid(build_grid(args), spec, source, args.replicates, args.seed, args.threads)
    else:
        model = build_model(args)
        n = _solve_n(args, model, spec)
        rep = success_rate(model, spec, source, n, args.replicates, args.seed)
        rows = [{"n": n, "rate": rep.rate, "std_error": rep.std_error, "successes": rep.successes,
                 "replicates": rep.replicates, "seed": rep.seed, "epsilon": spec.epsilon, "k": spec.k}]
    emit(args, rows, extra, stdout=out)
    return EXIT_OK


def cmd_coverage(args, out) -> int:
    spec = build_spec(args)
    fam = _family(args)
    if args.axis1 is not None or args.axis2 is not None:
        rows = coverage_grid(build_grid(args), spec, args.replicates, args.seed, args.threads)
        rates = [r["rate"] for r in rows if r["rate"] is not None]
        if rates:
            print(f"coverage: mean {np.mean(rates):.4f}, range [{min(rates):.4f}, {max(rates):.4f}]", file=sys.stderr)
    else:
        model = build_model(args)
        n = _solve_n(args, model, spec)
        rep = coverage_probability(model, n, spec.k, args.replicates, args.seed)
        rows = [{"n": n, "rate": rep.rate, "std_error": rep.std_error, "replicates": rep.replicates,
                 "seed": rep.seed, "k": spec.k}]
    emit(args, rows, {"family": fam, "replicates": args.replicates}, stdout=out)
    return EXIT_OK


def _region(text: Optional[str]) -> Optional[Region]:
    if text is None:
        return None
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"region must be lo:hi, got {text!r}") from None
    return Region(lo, hi)


def cmd_asymptotics(args, out) -> int:
    model = build_model(args)
    fam = model.family
    k = 0.0 if args.criterion == "apvc" else args.k
    mean, _ = model.inv_fisher_prior_moments()
    row = {"family": fam, "gamma": gamma_coefficient(model), "e_pi_inv_fisher": mean, "k": k,
           "s_infinity": None, "n_asymptotic": None}
    if args.eps is not None:
        summary = asymptotic_sample_size(model, _eps(args.eps)[0], k)
        row.update(s_infinity=summary.s_infinity, n_asymptotic=summary.n_asymptotic, epsilon=summary.epsilon)
    if args.truth is not None:
        rep = k_star(model, parse_truth(args.truth, fam))
        row.update(k_star=rep.k_star, rho=rep.rho, inv_fisher_true=rep.inv_fisher_true)
    region = _region(args.region) or prior_region(model, args.width)
    row.update(region_lo=region.lo, region_hi=region.hi, k_star_upper_bound=k_star_upper_bound(model, region))

    print(f"model: {model}", file=out)
    print(f"gamma = {_fmt(row['gamma'])}", file=out)
    print(f"E_prior[I^-1] = {_fmt(mean)}", file=out)
    if row["n_asymptotic"] is not None:
        print(f"s_infinity = {_fmt(row['s_infinity'])} (k = {_fmt(k)})", file=out)
        print(f"n_asymptotic = {_fmt(row['n_asymptotic'])}", file=out)
    if "k_star" in row:
        print(f"k* = {_fmt(row['k_star'])} (rho = {_fmt(row['rho'])})", file=out)
    print(f"k* upper bound = {_fmt(row['k_star_upper_bound'])} on [{_fmt(region.lo)}, {_fmt(region.hi)}]", file=out)
    if args.output:
        emit(args, [row])
    return EXIT_OK


def cmd_surrogate(args, out) -> int:
    fam = _family(args)
    truth = parse_truth(args.truth or {"poisson": "football", "normal": "songs"}.get(fam), fam)
    size = args.size or {"poisson": FOOTBALL_SIZE, "normal": SONGS_SIZE}.get(fam)
    if size is None:
        raise ConfigError("--size is required for bernoulli surrogates")
    ds = make_surrogate(truth, size, np.random.default_rng(args.seed))
    header = [f"pvssd: {__version__}", "command: surrogate", f"config_hash: {config_hash(args)}",
              f"seed: {args.seed}", f"truth: {truth}", f"size: {size}"]
    write_csv(ds, args.output or out, column=args.column, header_lines=header)
    summary = ds.summary()
    print(f"wrote {summary['n']} values, mean {summary['mean']:.6g}, variance {summary['variance']:.6g}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "ssd": cmd_ssd,
    "sweep": cmd_sweep,
    "evaluate": cmd_evaluate,
    "coverage": cmd_coverage,
    "asymptotics": cmd_asymptotics,
    "surrogate": cmd_surrogate,
}


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    out = stdout or sys.stdout
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args, out)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DataFormatError, InsufficientDataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InvalidInputError, DegeneratePriorError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
