"""Trial logs and run reports (CSV)."""

from __future__ import annotations

import csv
import datetime as _dt
from dataclasses import dataclass, field

from scipy.stats import binomtest

TRIAL_LOG_HEADER = ("trial", "seed", "message", "decoded", "success", "min_step_prob")
REPORT_HEADER = ("quantity", "value", "ci_low", "ci_high", "label")


def fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def bits(arr) -> str:
    return "".join(str(int(b)) for b in arr)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    message: str
    decoded: str
    success: bool
    min_step_prob: float


def write_trial_log(records, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(TRIAL_LOG_HEADER)
    for r in records:
        writer.writerow([r.trial, r.seed, r.message, r.decoded, fmt(r.success), fmt(r.min_step_prob)])


def error_rate(errors: int, trials: int, confidence: float = 0.95) -> tuple[float, float, float]:
    """Point estimate and Wilson interval of a binomial error rate."""
    if trials == 0:
        return float("nan"), 0.0, 1.0
    ci = binomtest(errors, trials).proportion_ci(confidence, method="wilson")
    return errors / trials, float(ci.low), float(ci.high)


@dataclass
class RunReport:
    """Metadata, result rows and notes of one command run.

    Rows are (quantity, value, ci_low, ci_high, label); ``label`` separates
    capacity-level facts, exact finite-N values, bounds and Monte Carlo
    estimates.
    """

    command: str
    params: dict
    seed: int | None = None
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    timestamp: str = field(
        default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"))

    def add(self, quantity, value, label="", ci=None):
        lo, hi = ci if ci is not None else ("", "")
        self.rows.append((quantity, value, lo, hi, label))

    def value(self, quantity):
        for q, v, *_ in self.rows:
            if q == quantity:
                return v
        raise KeyError(quantity)

    def write(self, fh) -> None:
        fh.write(f"# command={self.command}\n")
        for key in sorted(self.params):
            fh.write(f"# param.{key}={self.params[key]}\n")
        if self.seed is not None:
            fh.write(f"# seed={self.seed}\n")
        fh.write(f"# timestamp={self.timestamp}\n")
        for note in self.notes:
            fh.write(f"# note: {note}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for q, v, lo, hi, label in self.rows:
            writer.writerow([q, fmt(v) if v != "" else "", fmt(lo) if lo != "" else "",
                             fmt(hi) if hi != "" else "", label])
