"""``portfolio`` command-line entry point.

Exit codes: 0 success, 2 usage, 3 config, 4 data, 5 solver/backtest,
6 lottery input, 1 anything unexpected.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .backtest import BacktestError, run_backtest, write_wealth_csv
from .config import ConfigError, RunConfig, load_config
from .data_io import DataError, load_prices, to_returns
from .lottery import HfheParams, Lottery, LotteryError, classify_attitude, h2, h_lambda, h_q
from .metrics import MetricError, evaluate
from .reporting import SWEEP_METRICS, ComparisonTable, write_sweep
from .solvers import RegimeError, SolverError
from .strategies import Kind, StrategySpec, parse_kind, solve_strategy

EXIT = {"usage": 2, "config": 3, "data": 4, "solver": 5, "input": 6}


class CliError(Exception):
    def __init__(self, category: str, message: str):
        super().__init__(message)
        self.category = category


def _log(msg: str, quiet: bool) -> None:
    if not quiet:
        print(msg, file=sys.stderr, flush=True)


def _hfhe_spec(lp: float, lm: float, solver: str, starts, quiet: bool) -> StrategySpec:
    """HF/HE spec; a MILP request outside its regime falls back to multistart."""
    if solver == "milp" and not lp <= 0.5 <= lm:
        _log(f"note: MILP needs lambda_plus <= 1/2 <= lambda_minus; using multistart for "
             f"({lp:g}, {lm:g})", quiet)
        solver = "multistart"
    return StrategySpec(Kind.HFHE, lambda_plus=lp, lambda_minus=lm, solver=solver, starts=starts)


def _load_returns(path):
    return to_returns(load_prices(path))


def run_strategies(cfg: RunConfig, quiet: bool = False, write: bool = True):
    sm = _load_returns(cfg.dataset)
    out = Path(cfg.output)
    if write:
        out.mkdir(parents=True, exist_ok=True)
    reports, results = {}, {}
    for spec in cfg.strategies:
        t0 = time.perf_counter()
        log_path = out / f"windows_{spec.slug}.jsonl" if write else None
        res = run_backtest(sm, spec, cfg.in_len, cfg.step, seed=cfg.seed, drift=cfg.drift,
                           log_path=log_path)
        try:
            reports[spec.label] = evaluate(res.returns, res.weights, cfg.metrics)
        except MetricError as exc:
            raise CliError("data", f"{spec.label}: {exc}") from None
        results[spec.label] = res
        if write:
            write_wealth_csv(res, out / f"wealth_{spec.slug}.csv", sm.dates)
        _log(f"{spec.label}: {len(res.windows)} windows in {time.perf_counter() - t0:.1f}s", quiet)
    return ComparisonTable.from_reports(reports), results


def cmd_backtest(cfg: RunConfig, quiet: bool = False) -> ComparisonTable:
    table, _ = run_strategies(cfg, quiet)
    out = Path(cfg.output)
    table.to_csv(out / "report.csv")
    (out / "report.md").write_text(table.to_markdown())
    _log(f"wrote {out / 'report.csv'} and {out / 'report.md'}", quiet)
    return table


def cmd_sweep(cfg: RunConfig, quiet: bool = False) -> dict[str, np.ndarray]:
    if not cfg.sweep_plus or not cfg.sweep_minus:
        raise CliError("config", "sweep needs nonempty [sweep] lambda_plus and lambda_minus lists")
    tmpl = cfg.hfhe_template()
    sm = _load_returns(cfg.dataset)
    grids = {k: np.full((len(cfg.sweep_plus), len(cfg.sweep_minus)), np.nan) for k in SWEEP_METRICS}
    for i, lp in enumerate(cfg.sweep_plus):
        for j, lm in enumerate(cfg.sweep_minus):
            spec = _hfhe_spec(lp, lm, tmpl.solver, tmpl.starts, quiet)
            res = run_backtest(sm, spec, cfg.in_len, cfg.step, seed=cfg.seed, drift=cfg.drift)
            vals = evaluate(res.returns, res.weights, cfg.metrics).values()
            for k in SWEEP_METRICS:
                grids[k][i, j] = vals[k]
            _log(f"{spec.label} done", quiet)
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    paths = write_sweep(grids, cfg.sweep_plus, cfg.sweep_minus, out)
    _log("wrote " + ", ".join(str(p) for p in paths), quiet)
    return grids


def cmd_optimize(dataset, strategy: str, lambda_plus=0.30, lambda_minus=0.69, solver="multistart",
                 alpha=0.88, beta=2.25, starts=None, seed=0, quiet=False) -> dict:
    sm = _load_returns(dataset)
    kind = parse_kind(strategy)
    if kind is Kind.HFHE:
        spec = _hfhe_spec(lambda_plus, lambda_minus, solver, starts, quiet)
    else:
        if solver == "milp":
            raise CliError("usage", f"solver 'milp' is only available for HFHE, not {kind.value}")
        spec = StrategySpec(kind, alpha=alpha, beta=beta, starts=starts)
    rep = solve_strategy(sm.returns, spec, seed=seed)
    if not rep.optimal:
        raise CliError("solver", f"{spec.label}: solver status {rep.status.value}")
    x = np.maximum(rep.x, 0.0)
    x /= x.sum()
    return {"strategy": spec.label, "solver": spec.solver if kind in (Kind.HFHE, Kind.PT) else None,
            "status": rep.status.value, "objective": rep.objective,
            "weights": {t: float(w) for t, w in zip(sm.tickers, x)}}


def read_lottery(path) -> Lottery:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise CliError("input", f"lottery file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise CliError("input", f"malformed JSON in {path}: {exc}") from None
    try:
        if isinstance(data, dict) and "outcomes" in data:
            return Lottery(data["outcomes"], data["probs"])
        if isinstance(data, dict) and "pairs" in data:
            return Lottery.from_pairs(data["pairs"])
        return Lottery.from_pairs(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError("input", f"bad lottery in {path}: {exc}") from None


def cmd_evaluate_lottery(lottery: Lottery, params: HfheParams) -> list[str]:
    lines = [f"mean      {lottery.mean():.10g}"]
    if np.all(lottery.outcomes >= 0):
        lines.append(f"h_lambda  {h_lambda(lottery, params.lambda_plus):.10g}")
    lines.append(f"h2        {h2(lottery, params):.10g}")
    lines.append(f"h_q       {h_q(lottery, params):.10g}  (q={params.q:g})")
    att = classify_attitude(lottery, params.lambda_plus, params.lambda_minus)
    lines.append(f"attitude  {att.attitude.value}")

    def fmt(v):
        return "undefined" if v is None else f"{v:.10g}"

    lines.append(f"m         {fmt(att.m)}")
    lines.append(f"k         {fmt(att.k)}")
    lines.append(f"threshold {fmt(att.threshold)}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="portfolio", description="HF/HE portfolio selection and backtesting")
    p.add_argument("-q", "--quiet", action="store_true", help="no progress output on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("backtest", help="rolling-window backtest of the configured strategies")
    b.add_argument("--config", required=True)
    s = sub.add_parser("sweep", help="HF/HE backtests over a lambda grid")
    s.add_argument("--config", required=True)

    o = sub.add_parser("optimize", help="optimal weights on a whole dataset")
    o.add_argument("--dataset", required=True)
    o.add_argument("--strategy", required=True, help="EW, MinV, MinMAD, PT or HFHE")
    o.add_argument("--lambda-plus", type=float, default=0.30)
    o.add_argument("--lambda-minus", type=float, default=0.69)
    o.add_argument("--solver", choices=["multistart", "milp"], default="multistart")
    o.add_argument("--alpha", type=float, default=0.88)
    o.add_argument("--beta", type=float, default=2.25)
    o.add_argument("--starts", type=int, default=None)
    o.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("evaluate-lottery", help="HF/HE values and risk attitude of a lottery")
    e.add_argument("--json", required=True, dest="json_path",
                   help='[[outcome, prob], ...] or {"outcomes": [...], "probs": [...]}')
    e.add_argument("--q", type=float, default=1.0)
    e.add_argument("--lambda-plus", type=float, default=0.30)
    e.add_argument("--lambda-minus", type=float, default=0.69)
    return p


def _dispatch(args) -> None:
    if args.command == "backtest":
        cmd_backtest(load_config(args.config), args.quiet)
    elif args.command == "sweep":
        cmd_sweep(load_config(args.config), args.quiet)
    elif args.command == "optimize":
        res = cmd_optimize(args.dataset, args.strategy, args.lambda_plus, args.lambda_minus,
                           args.solver, args.alpha, args.beta, args.starts, args.seed, args.quiet)
        print(json.dumps(res, indent=2))
    elif args.command == "evaluate-lottery":
        lot = read_lottery(args.json_path)
        try:
            params = HfheParams(args.lambda_plus, args.lambda_minus, args.q)
        except LotteryError as exc:
            raise CliError("usage", str(exc)) from None
        print("\n".join(cmd_evaluate_lottery(lot, params)))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _dispatch(args)
    except CliError as exc:
        category, msg = exc.category, str(exc)
    except ConfigError as exc:
        category, msg = "config", str(exc)
    except DataError as exc:
        category, msg = "data", str(exc)
    except (SolverError, RegimeError, BacktestError) as exc:
        category, msg = "solver", str(exc)
    except (LotteryError, MetricError) as exc:
        category, msg = "input", str(exc)
    except ValueError as exc:
        category, msg = "usage", str(exc)
    else:
        return 0
    print(f"error [{category}]: {msg}", file=sys.stderr)
    return EXIT[category]


if __name__ == "__main__":
    sys.exit(main())
