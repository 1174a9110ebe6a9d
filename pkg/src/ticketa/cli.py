"""
Command-line interface.

    ticketa eta FILE...                    daily and period eta of trade files
    ticketa classify FILE...               spread, eta and labels per instrument
    ticketa predict --eta0 E --alpha0 A --alpha B [--q25 L --q75 H]
    ticketa optimal-tick --eta0 E --alpha0 A
    ticketa simulate --eta E [...] -o FILE
    ticketa report --data-dir DIR --phase 0 --phase 1 [--plot-data FILE]

Exit status is 0 on success, 2 on configuration or data errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import date
from pathlib import Path

from . import __version__
from .classification import classify_balance, classify_regime
from .config import StudyConfig, load_config
from .costs import cost_report
from .estimator import GridError, day_stats, eta_period
from .ingest import (
    ConfigError,
    TooManyRowErrors,
    load_directory,
    parse_trades,
    phase_of,
    session_filter,
    split_days,
    tick_value,
)
from .predictor import TickChange, optimal_tick, predict_eta, predict_with_ci
from .estimator import EtaEstimate
from .report import (
    CLASSIFY_COLUMNS,
    classify_cells,
    evaluate_phase_pair,
    plot_data,
    render,
    render_plot_data,
)
from .simulate import SimConfig, export_trades, sigma_for_rate, simulate

log = logging.getLogger("ticketa")


def _common(suppress: bool) -> argparse.ArgumentParser:
    # sub-commands re-declare the global flags with suppressed defaults so a
    # flag given before the sub-command is not reset by it
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--config", type=Path, default=d(None), help="YAML study configuration")
    g.add_argument("--data-dir", type=Path, default=d(None),
                   help="directory with one trade file (or sub-directory) per instrument")
    g.add_argument("--phase", action="append", default=d(None),
                   help="phase label; give twice (A then B) for report")
    g.add_argument("--format", choices=("table", "csv", "json"), default=d("table"), dest="fmt")
    g.add_argument("--seed", type=int, default=d(0))
    g.add_argument("-o", "--output", type=Path, default=d(None),
                   help="write to this file instead of stdout")
    g.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return p


def _tick_for_factory(cfg: StudyConfig, fixed_tick: float | None):
    def for_day(day: date):
        if fixed_tick is not None:
            return lambda price: fixed_tick
        phase = phase_of(day, cfg.phases)
        if phase is None:
            return None
        table = cfg.tick_tables[phase.label]
        return lambda price: tick_value(price, table)

    return for_day


def _instrument_days(trades, cfg, tick, phases):
    tick_for_day = _tick_for_factory(cfg, tick)
    out = []
    for day, tr in split_days(session_filter(trades, cfg.sessions)).items():
        if phases and not any(day in cfg.phase(p) for p in phases):
            continue
        f = tick_for_day(day)
        if f is None:
            continue
        out.append(day_stats(day, tr, f, cfg.grid))
    return [d for d in out if len(d.tick_values) == 1]


def _instruments(args, cfg):
    stocks = {}
    for f in args.files or []:
        stocks[Path(f).stem] = parse_trades(f, cfg.csv, max_error_rate=cfg.max_error_rate).records
    if args.data_dir:
        stocks.update(load_directory(args.data_dir, cfg.csv, max_error_rate=cfg.max_error_rate))
    if not stocks:
        raise ConfigError("no input: pass trade files or --data-dir")
    return stocks


def _emit(text: str, args) -> None:
    if args.output:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_eta(args, cfg):
    rows = []
    for stock, trades in sorted(_instruments(args, cfg).items()):
        days = _instrument_days(trades, cfg, args.tick, args.phase)
        est = eta_period(days)
        if args.daily:
            for d in days:
                rows.append({"stock": stock, **d.row()})
        rows.append({
            "stock": stock, "date": "period",
            "N_c": sum(d.n_c for d in days), "N_a": sum(d.n_a for d in days),
            "eta": est.eta_mean if est else None,
            "q25": est.q25 if est else None, "q75": est.q75 if est else None,
            "n_days": est.n_days if est else 0,
        })
    cols = ("stock", "date", "N_c", "N_a", "eta", "q25", "q75", "n_days", "S", "M")
    if args.fmt == "json":
        _emit(json.dumps(rows, indent=2) + "\n", args)
    else:
        fmt_rows = [{k: ("" if r.get(k) is None else (f"{r[k]:.4f}" if isinstance(r.get(k), float) else str(r[k])))
                     for k in cols} for r in rows]
        _emit(render(fmt_rows, args.fmt, cols), args)
    return 0


def cmd_classify(args, cfg):
    rows = []
    for stock, trades in sorted(_instruments(args, cfg).items()):
        days = _instrument_days(trades, cfg, args.tick, args.phase)
        est = eta_period(days)
        spreads = [d.spread for d in days if d.spread is not None]
        spread = sum(spreads) / len(spreads) if spreads else None
        regime = classify_regime(spread, cfg.thresholds) if spread is not None else None
        balance = classify_balance(est.eta_mean, regime, cfg.thresholds) if est and regime else None
        rows.append(classify_cells(stock, spread, est.eta_mean if est else None, regime, balance))
    _emit(render(rows, args.fmt, CLASSIFY_COLUMNS), args)
    return 0


def cmd_predict(args, cfg):
    change = TickChange(args.alpha0, args.alpha)
    if args.q25 is not None or args.q75 is not None:
        q25 = args.q25 if args.q25 is not None else args.eta0
        q75 = args.q75 if args.q75 is not None else args.eta0
        p = predict_with_ci(EtaEstimate(args.eta0, q25, q75, 1), change, cfg.thresholds)
        out = {"eta_p": p.eta_p, "ci": list(p.ci), "regime_p": p.regime_p.value,
               "balance_p": p.balance_p.value, "clamped": p.clamped}
    else:
        eta_p = predict_eta(args.eta0, args.alpha0, args.alpha)
        p = predict_with_ci(EtaEstimate(args.eta0, args.eta0, args.eta0, 1), change, cfg.thresholds)
        out = {"eta_p": eta_p, "regime_p": p.regime_p.value, "balance_p": p.balance_p.value}
    if out["regime_p"] == "LargeTick":
        c = cost_report(args.alpha, out["eta_p"])
        out.update(market_order_cost=c.market_order_cost, implicit_spread=c.implicit_spread)
    out["optimal_tick"] = optimal_tick(args.eta0, args.alpha0)
    _emit_mapping(out, args)
    return 0


def cmd_optimal_tick(args, cfg):
    _emit_mapping({"eta0": args.eta0, "alpha0": args.alpha0,
                   "optimal_tick": optimal_tick(args.eta0, args.alpha0)}, args)
    return 0


def _emit_mapping(d: dict, args) -> None:
    if args.fmt == "json":
        _emit(json.dumps(d, indent=2) + "\n", args)
    else:
        def cell(v):
            if isinstance(v, float):
                return f"{v:.6g}"
            if isinstance(v, list):
                return "[" + ",".join(f"{x:.4f}" for x in v) + "]"
            return str(v)

        cells = {k: cell(v) for k, v in d.items()}
        _emit(render([cells], args.fmt, list(d)), args)


def cmd_simulate(args, cfg):
    sigma = args.sigma if args.sigma is not None else sigma_for_rate(args.eta, args.alpha, args.changes_per_day)
    sim = SimConfig(
        eta=args.eta, alpha=args.alpha, sigma=sigma, initial_price=args.price,
        n_changes=args.n_changes, trades_between=args.trades_between, seed=args.seed,
        start_date=date.fromisoformat(args.start) if args.start else SimConfig.start_date,
        sessions=cfg.sessions,
    )
    path = simulate(sim)
    if args.output:
        export_trades(path, args.output, cfg.csv)
    else:
        sys.stdout.write(export_trades(path, None, cfg.csv).decode("utf-8"))
    log.info("simulated %d trades, continuation frequency %.4f", len(path.trades), path.continuation_frequency)
    return 0


def cmd_report(args, cfg):
    if not args.phase or len(args.phase) != 2:
        raise ConfigError("report needs exactly two --phase options (A then B)")
    phase_a, phase_b = (cfg.phase(p) for p in args.phase)
    stocks = _instruments(args, cfg)
    ev = evaluate_phase_pair(stocks, phase_a, phase_b, cfg.tick_tables, cfg.sessions,
                             cfg.thresholds, cfg.min_days, cfg.grid, max_workers=args.workers)
    text = render(ev.results, args.fmt)
    if args.fmt == "table":
        err = ev.aggregate_error()
        text += f"\nmean relative error: {err:.4f}\n" if err is not None else "\nmean relative error: n/a\n"
        for stock, reason in sorted(ev.disqualified.items()):
            text += f"excluded {stock}: {reason}\n"
    _emit(text, args)
    if args.plot_data:
        recs = [r for row, _ in ev.results for r in
                ((d, v, f"{row.stock}:{s}") for d, v, s in plot_data(row))]
        args.plot_data.write_text(render_plot_data(recs), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _common(suppress=True)
    parser = argparse.ArgumentParser(prog="ticketa", description="Tick-size analytics.",
                                     parents=[_common(suppress=False)])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, helptext in (("eta", cmd_eta, "estimate eta"),
                                 ("classify", cmd_classify, "spread and tick-regime labels")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("files", nargs="*")
        p.add_argument("--tick", type=float, help="fixed tick value instead of the phase tables")
        if name == "eta":
            p.add_argument("--daily", action="store_true", help="also print per-day rows")
        p.set_defaults(func=func)

    p = sub.add_parser("predict", parents=[common], help="forecast eta after a tick change")
    p.add_argument("--eta0", type=float, required=True)
    p.add_argument("--alpha0", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--q25", type=float)
    p.add_argument("--q75", type=float)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("optimal-tick", parents=[common], help="tick value making forecast eta 1/2")
    p.add_argument("--eta0", type=float, required=True)
    p.add_argument("--alpha0", type=float, required=True)
    p.set_defaults(func=cmd_optimal_tick)

    p = sub.add_parser("simulate", parents=[common], help="synthetic trades with known eta")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--sigma", type=float, help="daily efficient-price volatility")
    p.add_argument("--changes-per-day", type=float, default=2000.0,
                   help="sets sigma when --sigma is not given")
    p.add_argument("--price", type=float, default=1000.0)
    p.add_argument("--n-changes", type=int, default=100_000)
    p.add_argument("--trades-between", type=float, default=4.0)
    p.add_argument("--start", help="first trading date, YYYY-MM-DD")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", parents=[common], help="forecast-vs-realized study over a data set")
    p.add_argument("files", nargs="*")
    p.add_argument("--plot-data", type=Path, help="write daily-eta plot data (date,value,series)")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except (ConfigError, TooManyRowErrors, GridError, ValueError, OSError) as exc:
        print(f"ticketa: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
