"""INI run configuration.

Example::

    [run]
    dataset = prices.csv
    strategies = EW, MinV, MinMAD, PT, HFHE
    output = out

    [hfhe]
    lambda_plus = 0.30
    lambda_minus = 0.69

Every key has a default except ``dataset``. Relative paths resolve against
the directory of the config file.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .metrics import MetricConfig
from .strategies import Kind, StrategySpec, parse_kind


class ConfigError(ValueError):
    pass


KEYS = {
    "run": {"dataset", "strategies", "in_len", "step", "seed", "output", "drift"},
    "hfhe": {"lambda_plus", "lambda_minus", "solver", "starts"},
    "pt": {"alpha", "beta", "starts"},
    "metrics": {"r_f", "alpha", "beta", "delta_tau"},
    "sweep": {"lambda_plus", "lambda_minus"},
}


@dataclass
class RunConfig:
    dataset: Path
    strategies: list[StrategySpec]
    in_len: int = 500
    step: int = 20
    seed: int = 0
    output: Path = Path("out")
    drift: bool = False
    metrics: MetricConfig = field(default_factory=MetricConfig)
    sweep_plus: list[float] = field(default_factory=list)
    sweep_minus: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not self.strategies:
            raise ConfigError("at least one strategy is required")
        if self.in_len < 1 or self.step < 1:
            raise ConfigError("in_len and step must be >= 1")

    def hfhe_template(self) -> StrategySpec:
        for s in self.strategies:
            if s.kind is Kind.HFHE:
                return s
        return StrategySpec(Kind.HFHE)


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]


def _opt_int(text: str) -> int | None:
    return int(text) if text.strip() else None


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    for section in cp.sections():
        if section not in KEYS:
            raise ConfigError(f"unknown section [{section}]")
        extra = set(cp[section]) - KEYS[section]
        if extra:
            raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(extra))}")
    base = path.parent
    try:
        run = cp["run"] if cp.has_section("run") else {}
        if "dataset" not in run:
            raise ConfigError("[run] dataset is required")
        hf = cp["hfhe"] if cp.has_section("hfhe") else {}
        pt = cp["pt"] if cp.has_section("pt") else {}
        met = cp["metrics"] if cp.has_section("metrics") else {}
        sw = cp["sweep"] if cp.has_section("sweep") else {}

        names = [s.strip() for s in run.get("strategies", "EW, MinV, MinMAD, PT, HFHE").split(",") if s.strip()]
        strategies = []
        for name in names:
            kind = parse_kind(name)
            if kind is Kind.HFHE:
                spec = StrategySpec(kind, lambda_plus=float(hf.get("lambda_plus", 0.30)),
                                    lambda_minus=float(hf.get("lambda_minus", 0.69)),
                                    solver=hf.get("solver", "multistart").strip(),
                                    starts=_opt_int(hf.get("starts", "")))
            elif kind is Kind.PT:
                spec = StrategySpec(kind, alpha=float(pt.get("alpha", 0.88)),
                                    beta=float(pt.get("beta", 2.25)),
                                    starts=_opt_int(pt.get("starts", "")))
            else:
                spec = StrategySpec(kind)
            strategies.append(spec)
        drift = run.get("drift", "false").strip().lower()
        if drift not in ("true", "false", "yes", "no", "1", "0"):
            raise ConfigError(f"drift must be true/false, got {drift!r}")
        return RunConfig(
            dataset=base / run["dataset"].strip(),
            strategies=strategies,
            in_len=int(run.get("in_len", 500)),
            step=int(run.get("step", 20)),
            seed=int(run.get("seed", 0)),
            output=base / run.get("output", "out").strip(),
            drift=drift in ("true", "yes", "1"),
            metrics=MetricConfig(float(met.get("r_f", 0.0)), float(met.get("alpha", 0.05)),
                                 float(met.get("beta", 0.05)), int(met.get("delta_tau", 250))),
            sweep_plus=_floats(sw.get("lambda_plus", "")),
            sweep_minus=_floats(sw.get("lambda_minus", "")),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
