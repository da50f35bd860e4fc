"""Command-line front end.

Subcommands: ``bounds``, ``figure2``, ``simulate``, ``price``, ``validate``
and ``replay``.  Exit codes: 0 success, 1 ``--check`` failure or replay
mismatch, 2 usage or configuration error.

Whenever ``--out FILE`` is given, ``FILE.manifest.json`` is written next to
it with the resolved parameters and a SHA-256 of the output, and
``crowdinfo replay FILE.manifest.json`` regenerates and verifies it.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path

from . import __version__
from .bounds import BoundQuery, figure2_table, format_rate, rmin_shc, rmin_sl_cs, rmin_sl_uk
from .infomath import Pmf, ValidationError
from .pricing import price_threshold, price_threshold_exact
from .simulation import SWEEP_AXES, ShcModel, SimConfig, run_simulation, sweep_configs
from .workers import SkillPopulation

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class ConfigError(Exception):
    """Bad user input; ``field`` names the offending option."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


# ---------------------------------------------------------------- parsing helpers

def _floats(text):
    return [float(x) for x in str(text).replace(" ", "").split(",") if x]


def _ints(text):
    return [int(x) for x in str(text).replace(" ", "").split(",") if x]


def _population(text):
    """``"0.1:0.5,0.3:0.5"`` -> SkillPopulation; a bare ``"0.2"`` is a point mass."""
    pairs = []
    for part in str(text).replace(" ", "").split(","):
        if not part:
            continue
        eps, _, w = part.partition(":")
        pairs.append((float(eps), float(w) if w else 1.0))
    return SkillPopulation.from_pairs(pairs)


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ConfigError(name, "is required for this configuration")


def _convert(field, fn, value):
    try:
        return fn(value)
    except (ValueError, ValidationError) as exc:
        raise ConfigError(field, str(exc)) from None


def _fmt(x, digits):
    return f"{x:.{digits}g}"


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"config line {lineno}", f"expected key=value, got {raw!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


# ---------------------------------------------------------------- commands

def cmd_bounds(args):
    _require(args, "eps_grid")
    grid = _convert("eps_grid", _floats, args.eps_grid)
    if args.scenario == "shc":
        _require(args, "q", "M")
        rates = [_convert("q", lambda e: rmin_shc(args.q, args.M, e), e) for e in grid]
    else:
        _require(args, "M", "population")
        source = _convert("source", lambda s: Pmf(tuple(_floats(s))), args.source)
        pop = _convert("population", _population, args.population)
        fn = rmin_sl_uk if args.scenario == "sl-uk" else rmin_sl_cs
        rates = [fn(_convert("eps_grid", lambda e: BoundQuery(source, args.M, pop, e), e)) for e in grid]
    if args.format == "json":
        return _json_text([
            {"epsilon_hat": e, "rate_min": r.value if r.feasible else "inf", "scenario": args.scenario}
            for e, r in zip(grid, rates)
        ])
    rows = [(_fmt(e, args.digits), format_rate(r, args.digits), args.scenario) for e, r in zip(grid, rates)]
    return _csv_text(["epsilon_hat", "rate_min", "scenario"], rows)


def cmd_figure2(args):
    k_list = _convert("k_list", _ints, args.k_list)
    if not k_list or min(k_list) < 1:
        raise ConfigError("k_list", "needs one or more arities >= 1")
    grid = _convert("eps_grid", _floats, args.eps_grid) if args.eps_grid else None
    if grid is None:
        n = int(round(0.5 / args.eps_step))
        grid = [round(i * args.eps_step, 12) for i in range(1, n)]
    rows = _convert("q", lambda q: figure2_table(q, k_list, grid, args.M), args.q)
    if args.format == "json":
        return _json_text([
            {"curve": r.curve, "epsilon_hat": r.epsilon_hat, "rate": r.rate.value if r.rate.feasible else "inf"}
            for r in rows
        ])
    return _csv_text(
        ["curve", "epsilon_hat", "rate"],
        [(r.curve, _fmt(r.epsilon_hat, args.digits), format_rate(r.rate, args.digits)) for r in rows],
    )


SIM_DEFAULTS = {
    "n_items": 10000,
    "source": "0.5,0.5",
    "k": 2,
    "queries_per_item": 1,
    "model": "shc",
    "decoder": "oracle",
    "trials": 10,
    "seed": 0,
    "sweep_axis": None,
    "sweep_grid": None,
    "q": None,
    "population": None,
}


def build_sim_config(args):
    if args.model == "shc":
        _require(args, "q")
        worker = ShcModel(_convert("q", float, args.q))
        if not 0 <= worker.q <= 1:
            raise ConfigError("q", f"must lie in [0, 1], got {worker.q}")
    elif args.model == "msc":
        _require(args, "population")
        worker = _convert("population", _population, args.population)
    else:
        raise ConfigError("model", f"must be 'shc' or 'msc', got {args.model!r}")
    if args.decoder == "oracle" and args.model != "shc":
        raise ConfigError("decoder", "the oracle decoder needs --model shc")
    if args.decoder == "majority" and args.model != "msc":
        raise ConfigError("decoder", "the majority decoder needs --model msc")
    source = _convert("source", lambda s: Pmf(tuple(_floats(s))), args.source)
    fields = dict(
        n_items=("n_items", int(args.n_items)),
        code_k=("k", int(args.k)),
        queries_per_item=("queries_per_item", int(args.queries_per_item)),
        n_trials=("trials", int(args.trials)),
        seed=("seed", int(args.seed)),
    )
    for _, (flag, value) in fields.items():
        if value < (0 if flag == "seed" else 1):
            raise ConfigError(flag, f"invalid value {value}")
    kwargs = {name: value for name, (_, value) in fields.items()}
    try:
        return SimConfig(source=source, worker_model=worker, decoder=args.decoder, **kwargs)
    except ValidationError as exc:
        msg = str(exc)
        flag = next((f for n, (f, _) in fields.items() if n in msg), "config")
        raise ConfigError(flag, msg) from None


def _sim_configs(args):
    base = build_sim_config(args)
    if args.sweep_axis is None:
        return [base], [None]
    if args.sweep_axis not in SWEEP_AXES:
        raise ConfigError("sweep_axis", f"must be one of {', '.join(SWEEP_AXES)}")
    _require(args, "sweep_grid")
    grid = _convert("sweep_grid", _floats, args.sweep_grid)
    try:
        return sweep_configs(base, args.sweep_axis, grid), grid
    except ValidationError as exc:
        raise ConfigError("sweep_grid", str(exc)) from None


def _run_sims(args):
    configs, grid = _sim_configs(args)
    out = []
    for cfg, value in zip(configs, grid):
        try:
            report = run_simulation(cfg)
        except ValidationError as exc:
            raise ConfigError("config", str(exc)) from None
        out.append((cfg, value, report))
    return out


SIM_CSV_HEADER = [
    "grid_value", "k", "queries_per_item", "rate", "empirical_error",
    "ci_halfwidth", "analytic_prediction", "std_error", "n_trials", "n_items", "n_fillers",
]


def cmd_simulate(args):
    results = _run_sims(args)
    args._results = results
    if args.format == "csv":
        d = args.digits
        opt = lambda x: "" if x is None else _fmt(x, d)
        rows = [
            (opt(v), c.code_k, c.queries_per_item, _fmt(r.rate_used, d), _fmt(r.empirical_error, d),
             opt(r.ci_halfwidth), opt(r.analytic_prediction), _fmt(r.std_error, d),
             r.n_trials, r.n_items, r.n_fillers)
            for c, v, r in results
        ]
        return _csv_text(SIM_CSV_HEADER, rows)
    payload = []
    for cfg, value, report in results:
        d = report.to_dict()
        d["grid_value"] = value
        d["seed"] = cfg.seed
        d["queries_per_item"] = cfg.queries_per_item
        d["k"] = cfg.code_k
        payload.append(d)
    return _json_text(payload)


def cmd_price(args):
    _require(args, "k1", "k2", "pi1")
    for name in ("k1", "k2"):
        if getattr(args, name) < 2:
            raise ConfigError(name, f"arity must be >= 2, got {getattr(args, name)}")
    if args.exact:
        _require(args, "q", "eps")
        try:
            value = price_threshold_exact(args.k1, args.k2, args.q, args.eps, args.pi1)
        except ValidationError as exc:
            raise ConfigError("eps", str(exc)) from None
    else:
        value = _convert("pi1", lambda p: price_threshold(args.k1, args.k2, p), args.pi1)
    if args.format == "json":
        return _json_text({"price_k2_max": value, "exact": bool(args.exact)})
    return _fmt(value, args.digits) + "\n"


def cmd_validate(args):
    build_sim_config(args)
    _sim_configs(args)
    return "ok\n"


COMMANDS = {
    "bounds": cmd_bounds,
    "figure2": cmd_figure2,
    "simulate": cmd_simulate,
    "price": cmd_price,
    "validate": cmd_validate,
}


# ---------------------------------------------------------------- argparse wiring

def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="base random seed")
    p.add_argument("--out", default=None, help="write output here (and a .manifest.json beside it)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--digits", type=int, default=6, help="significant digits in CSV/text output")
    return p


def _sim_flags(p):
    p.add_argument("--config", default=None, help="flat key=value file; flags override it")
    p.add_argument("--n-items", type=int, default=None)
    p.add_argument("--source", default=None, help="label pmf, e.g. 0.5,0.5")
    p.add_argument("--k", type=int, default=None, help="items per query")
    p.add_argument("--queries-per-item", "--R-prime", dest="queries_per_item", type=int, default=None,
                   help="queries containing each item (R')")
    p.add_argument("--model", choices=("shc", "msc"), default=None)
    p.add_argument("--q", type=float, default=None, help="hammer probability")
    p.add_argument("--population", default=None, help="skill levels eps:p,eps:p")
    p.add_argument("--decoder", choices=("oracle", "majority"), default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--sweep-axis", default=None, choices=SWEEP_AXES)
    p.add_argument("--sweep-grid", default=None)


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="crowdinfo", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"crowdinfo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="minimum rate per target error")
    p.add_argument("--scenario", choices=("sl-uk", "sl-cs", "shc"), required=True)
    p.add_argument("--source", default="0.5,0.5")
    p.add_argument("--M", type=int, default=None, help="response alphabet size")
    p.add_argument("--population", default=None, help="skill levels eps:p,eps:p")
    p.add_argument("--q", type=float, default=None, help="hammer probability")
    p.add_argument("--eps-grid", default=None, help="comma separated target errors")

    p = sub.add_parser("figure2", parents=[common], help="kIC bounds vs information-theoretic limit")
    p.add_argument("--q", type=float, default=0.3)
    p.add_argument("--k-list", default="2,3,4")
    p.add_argument("--eps-step", type=float, default=0.005)
    p.add_argument("--eps-grid", default=None, help="explicit grid; overrides --eps-step")
    p.add_argument("--M", type=int, default=None, help="override it-limit alphabet size")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo run")
    _sim_flags(p)
    p.add_argument("--check", action="store_true",
                   help="exit 1 if any report deviates from its prediction by more than 4 sigma")

    p = sub.add_parser("price", parents=[common], help="price threshold between two arities")
    p.add_argument("--k1", type=int, default=None)
    p.add_argument("--k2", type=int, default=None)
    p.add_argument("--pi1", type=float, default=None)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)

    p = sub.add_parser("validate", parents=[common], help="check a simulation config")
    _sim_flags(p)

    p = sub.add_parser("replay", parents=[common], help="re-run a manifest and verify its output")
    p.add_argument("manifest")
    return parser


def _resolve(args):
    """Merge config file values and defaults into ``args`` (flags win)."""
    if args.command not in ("simulate", "validate"):
        if args.format is None:
            args.format = "csv"
        return args
    cfg = read_config(args.config) if args.config else {}
    known = set(SIM_DEFAULTS)
    for key, value in cfg.items():
        if key not in known:
            raise ConfigError(key, "unknown config key")
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key, value in SIM_DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key, fn in (("n_items", int), ("k", int), ("queries_per_item", int), ("trials", int), ("seed", int)):
        setattr(args, key, _convert(key, fn, getattr(args, key)))
    if args.q is not None:
        args.q = _convert("q", float, args.q)
    if args.model not in ("shc", "msc"):
        raise ConfigError("model", f"must be 'shc' or 'msc', got {args.model!r}")
    if args.decoder not in ("oracle", "majority"):
        raise ConfigError("decoder", f"must be 'oracle' or 'majority', got {args.decoder!r}")
    if args.format is None:
        args.format = "json"
    args.config = None
    return args


MANIFEST_SKIP = {"out", "manifest", "_results"}


def manifest_params(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in MANIFEST_SKIP}


def _sha256(text):
    return hashlib.sha256(text.encode()).hexdigest()


def write_manifest(args, out_path, text):
    manifest = {
        "subcommand": args.command,
        "params": manifest_params(args),
        "seed": getattr(args, "seed", None),
        "tool_version": __version__,
        "output": Path(out_path).name,
        "output_sha256": _sha256(text),
    }
    path = Path(str(out_path) + ".manifest.json")
    path.write_text(_json_text(manifest))
    return path


def _replay(args):
    path = Path(args.manifest)
    manifest = json.loads(path.read_text())
    params = argparse.Namespace(**manifest["params"])
    text = COMMANDS[manifest["subcommand"]](params)
    digest = _sha256(text)
    target = Path(args.out) if args.out else None
    if target is not None:
        target.write_text(text)
    ok = digest == manifest["output_sha256"]
    print(f"{'match' if ok else 'MISMATCH'} {digest}")
    return EXIT_OK if ok else EXIT_CHECK


def _emit(args, text):
    if args.out:
        Path(args.out).write_text(text)
        write_manifest(args, args.out, text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            return _replay(args)
        args = _resolve(args)
        text = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"crowdinfo {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"crowdinfo {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    results = getattr(args, "_results", None)
    if results is not None:
        del args._results
    _emit(args, text)
    if args.command == "simulate" and args.check:
        worst = [r.deviation_sigmas() for _, _, r in results]
        failed = [s for s in worst if s is not None and s > 4.0]
        for s in worst:
            if s is not None:
                print(f"deviation {s:.3f} sigma", file=sys.stderr)
        return EXIT_CHECK if failed else EXIT_OK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
