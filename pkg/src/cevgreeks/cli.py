"""Command-line front end: ``cevgreeks {price,greeks,approx-study,deriv-check,dump-path}``.

Every subcommand renders its CSV fully in memory and writes it only after all work has
succeeded, so a failed run never leaves a partial file behind.
"""

import argparse
import io
import sys

from .config import ConfigParse, load_config
from .greeks import Request, estimate_many
from .malliavin import DegeneratePath
from .model import ParamOutOfRange, validate_params
from .paths import NegativeVariance, SeedSpec, TimeGrid, format_float, generate_noise, simulate_paths, write_path_csv
from .studies import approx_study, derivative_check, sample_r_indices

EXIT_OK = 0
EXIT_ESTIMATOR = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_PARAM = 4

GREEK_COLUMNS = ["greek", "method", "payoff", "strike", "estimate", "std_error", "n_paths", "n_steps", "master_seed", "wall_ms"]
STUDY_COLUMNS = ["eps", "l2_error", "max_order_violation", "n_paths", "n_steps"]
DERIV_COLUMNS = ["path_index", "quantity", "brownian", "r_index", "riemann_value", "bump_value", "rel_error"]


class IoFailure(OSError):
    pass


def _csv(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(str(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _greek_rows(estimates, report_timing):
    return [
        [
            e.greek,
            e.method,
            e.payoff.kind,
            format_float(e.payoff.strike),
            format_float(e.estimate),
            format_float(e.std_error),
            e.n_paths,
            e.n_steps,
            e.master_seed,
            e.wall_ms if report_timing else 0,
        ]
        for e in estimates
    ]


def _requests(cfg, greeks):
    payoff = cfg.payoff
    requests = [Request("price", "mc", payoff)]
    for method in cfg.methods:
        if method == "analytic-oracle":
            names = ("price",) + greeks if greeks else ("price",)
        elif greeks:
            names = greeks
        else:
            continue
        requests.extend(Request(name, method, payoff) for name in names)
    return requests


def _estimate(cfg, threads, greeks):
    grid = TimeGrid(cfg.model.T, cfg.n_steps)
    estimates = estimate_many(
        cfg.model,
        _requests(cfg, greeks),
        cfg.n_paths,
        grid,
        cfg.master_seed,
        threads=threads,
        antithetic=cfg.antithetic,
        eps_num=cfg.eps_num,
        bump_h_x=cfg.bump_h_x,
        bump_h_r=cfg.bump_h_r,
    )
    return _csv(GREEK_COLUMNS, _greek_rows(estimates, cfg.report_timing))


def run_price(cfg, threads):
    return _estimate(cfg, threads, ())


def run_greeks(cfg, threads):
    return _estimate(cfg, threads, ("delta", "rho"))


def run_approx_study(cfg, threads):
    if not cfg.eps_study_list:
        raise ConfigParse("approx-study needs a non-empty eps_study_list", "eps_study_list")
    grid = TimeGrid(cfg.model.T, cfg.n_steps)
    study = approx_study(cfg.model, grid, cfg.master_seed, cfg.n_paths, cfg.eps_study_list, cfg.eps_num, threads)
    rows = [
        [format_float(r.eps), format_float(r.l2_error), format_float(r.max_order_violation), r.n_paths, r.n_steps]
        for r in study.rows
    ]
    return _csv(STUDY_COLUMNS, rows)


def run_derivative_check(cfg, threads):
    grid = TimeGrid(cfg.model.T, cfg.n_steps)
    if cfg.deriv_r_indices is not None:
        r_indices = cfg.deriv_r_indices
    else:
        r_indices = sample_r_indices(grid, cfg.deriv_n_r_indices, cfg.master_seed)
    rows = derivative_check(
        cfg.model,
        grid,
        cfg.master_seed,
        range(cfg.deriv_n_paths),
        cfg.deriv_checks,
        r_indices,
        cfg.deriv_delta_bump,
        cfg.eps_num,
        threads,
    )
    body = [
        [r.path_index, r.quantity, r.brownian, r.r_index, format_float(r.riemann_value), format_float(r.bump_value), format_float(r.rel_error)]
        for r in rows
    ]
    return _csv(DERIV_COLUMNS, body)


def run_dump_path(cfg, threads):
    validate_params(cfg.model)
    grid = TimeGrid(cfg.model.T, cfg.n_steps)
    noise = generate_noise(SeedSpec(cfg.master_seed, cfg.dump_path_index), grid, cfg.model.rho)
    paths = simulate_paths(cfg.model, grid, noise, eps_num=cfg.eps_num, eps=cfg.dump_eps, with_ou=cfg.dump_with_ou)
    buf = io.StringIO()
    write_path_csv(buf, paths, grid)
    return buf.getvalue()


COMMANDS = {
    "price": run_price,
    "greeks": run_greeks,
    "approx-study": run_approx_study,
    "deriv-check": run_derivative_check,
    "dump-path": run_dump_path,
}


def _threads(text):
    if text == "auto":
        return text
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("threads must be a positive integer or 'auto'")
    return value


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="cevgreeks", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="path to a key = value run configuration")
        cmd.add_argument("--seed", type=_seed, help="master seed, overrides the config")
        cmd.add_argument("--out", help="output CSV path (default: config output_path, else stdout)")
        cmd.add_argument("--threads", type=_threads, help="worker threads, integer or 'auto'")
    return parser


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path!r}: {exc}") from None


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, seed_override=args.seed)
        threads = args.threads if args.threads is not None else cfg.threads
        text = COMMANDS[args.command](cfg, threads)
        _write(text, args.out if args.out is not None else cfg.output_path)
    except ConfigParse as exc:
        print(f"cevgreeks: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParamOutOfRange as exc:
        print(f"cevgreeks: parameter out of range: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except IoFailure as exc:
        print(f"cevgreeks: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DegeneratePath, NegativeVariance, ValueError) as exc:
        print(f"cevgreeks: {args.command} failed: {exc}", file=sys.stderr)
        return EXIT_ESTIMATOR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
