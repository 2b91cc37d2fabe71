"""Rank-annotated comparison tables and their CSV / Markdown forms."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .metrics import MetricsReport

# (key, label, higher_is_better or None for unranked, shown as percent)
ROWS = [
    ("exp_ret", "ExpRet", True, True),
    ("vol", "Vol", False, True),
    ("sharpe", "Sharpe", True, False),
    ("max_dd", "MaxDD", True, True),
    ("sortino", "Sortino", True, False),
    ("rachev", "Rachev", True, False),
    ("ave_roi", "aveROI", True, True),
    ("nhi", "NHI", True, False),
    ("ave_count", "ave#", None, False),
]
ROW_KEYS = [r[0] for r in ROWS]
LABELS = {r[0]: r[1] for r in ROWS}
DIRECTION = {r[0]: r[2] for r in ROWS}
PERCENT = {r[0]: r[3] for r in ROWS}


def rank_values(values, higher_better: bool) -> list[int]:
    """Ranks 1..K, best first. Ties keep column order; NaN ranks last."""
    vals = np.asarray(values, dtype=float)
    key = np.where(np.isnan(vals), np.inf, -vals if higher_better else vals)
    order = np.argsort(key, kind="stable")
    ranks = np.empty(vals.size, dtype=int)
    ranks[order] = np.arange(1, vals.size + 1)
    return ranks.tolist()


@dataclass
class ComparisonTable:
    strategies: list[str]
    values: dict[str, list[float]]
    ranks: dict[str, list[int] | None] = field(default_factory=dict)

    def __post_init__(self):
        for key in ROW_KEYS:
            if key not in self.values or len(self.values[key]) != len(self.strategies):
                raise ValueError(f"row {key!r} missing or of wrong length")
        if not self.ranks:
            self.ranks = {k: (None if DIRECTION[k] is None else rank_values(self.values[k], DIRECTION[k]))
                          for k in ROW_KEYS}

    @classmethod
    def from_reports(cls, reports: dict[str, MetricsReport]) -> "ComparisonTable":
        names = list(reports)
        vals = {k: [reports[s].values()[k] for s in names] for k in ROW_KEYS}
        return cls(names, vals)

    @property
    def shape(self) -> tuple[int, int]:
        return len(ROW_KEYS), len(self.strategies)

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["metric"] + self.strategies + [f"rank {s}" for s in self.strategies])
            for k in ROW_KEYS:
                ranks = self.ranks[k] or [""] * len(self.strategies)
                w.writerow([LABELS[k]] + [repr(float(v)) for v in self.values[k]] + ranks)

    @classmethod
    def from_csv(cls, path) -> "ComparisonTable":
        with Path(path).open(newline="") as fh:
            rows = list(csv.reader(fh))
        K = (len(rows[0]) - 1) // 2
        names = rows[0][1:K + 1]
        by_label = {v: k for k, v in LABELS.items()}
        vals, ranks = {}, {}
        for row in rows[1:]:
            key = by_label[row[0]]
            vals[key] = [float(v) for v in row[1:K + 1]]
            ranks[key] = None if row[K + 1] == "" else [int(v) for v in row[K + 1:]]
        return cls(names, vals, ranks)

    def to_markdown(self) -> str:
        """Best value in bold with a ``(+)``, worst in italics with a ``(-)``."""
        K = len(self.strategies)
        out = ["| Metric | " + " | ".join(self.strategies) + " |",
               "|---|" + "---:|" * K]
        for k in ROW_KEYS:
            cells = []
            for j, v in enumerate(self.values[k]):
                text = format_value(v, PERCENT[k])
                ranks = self.ranks[k]
                if ranks is not None:
                    if ranks[j] == 1 and K > 1:
                        text = f"**{text}** (+)"
                    elif ranks[j] == K and K > 1:
                        text = f"_{text}_ (-)"
                    text += f" [{ranks[j]}]"
                cells.append(text)
            out.append(f"| {LABELS[k]} | " + " | ".join(cells) + " |")
        return "\n".join(out) + "\n"


def format_value(v: float, percent: bool) -> str:
    if math.isnan(v):
        return "n/a"
    if math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    return f"{100 * v:.3f}%" if percent else f"{v:.3f}"


SWEEP_METRICS = ["exp_ret", "vol", "sharpe", "ave_count"]


def write_sweep(grids: dict[str, np.ndarray], lambda_plus, lambda_minus, outdir) -> list[Path]:
    """One CSV per metric: rows are lambda_plus, columns lambda_minus."""
    outdir = Path(outdir)
    paths = []
    md = []
    for key in SWEEP_METRICS:
        G = grids[key]
        p = outdir / f"sweep_{key}.csv"
        with p.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["lambda_plus\\lambda_minus"] + [f"{lm:g}" for lm in lambda_minus])
            for lp, row in zip(lambda_plus, G):
                w.writerow([f"{lp:g}"] + [repr(float(v)) for v in row])
        paths.append(p)
        md.append(f"### {LABELS[key]}\n")
        md.append("| λ+ \\ λ- | " + " | ".join(f"{lm:g}" for lm in lambda_minus) + " |")
        md.append("|---|" + "---:|" * len(lambda_minus))
        for lp, row in zip(lambda_plus, G):
            md.append(f"| {lp:g} | " + " | ".join(format_value(v, PERCENT[key]) for v in row) + " |")
        md.append("")
    p = outdir / "sweep.md"
    p.write_text("\n".join(md))
    paths.append(p)
    return paths
