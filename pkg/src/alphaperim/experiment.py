"""Monte Carlo driver for the perimeter-estimator convergence study.

For every sample size ``n``, radius ``alpha`` and replicate ``m`` a fresh
uniform sample is drawn from its own generator, seeded from
``SeedSequence([master_seed, n, alpha_index, m])``. That makes every replicate
reproducible on its own and lets replicates run in any order or process.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import stats

from .alpha_shape import build_alpha_shape, hull_perimeter, shape_perimeter
from .domains import Domain, parse_domain

log = logging.getLogger(__name__)

ESTIMATORS = {"alpha_shape": shape_perimeter, "alpha_hull": hull_perimeter}
_ESTIMATOR_ALIASES = {"shape": "alpha_shape", "hull": "alpha_hull"}

RAW_HEADER = ["domain", "alpha", "n", "replicate", "perimeter_estimate", "true_perimeter"]
SUMMARY_HEADER = ["domain", "alpha", "n", "M", "error", "bias", "std"]


class ReplicateError(RuntimeError):
    def __init__(self, n: int, alpha: float, m: int, cause: Exception):
        super().__init__(f"replicate failed at n={n}, alpha={alpha}, m={m}: {cause}")
        self.n, self.alpha, self.m = n, alpha, m


@dataclass
class ExperimentConfig:
    domain: str
    alphas: list[float]
    sample_sizes: list[int]
    replicates: int
    master_seed: int = 0
    estimator: str = "alpha_shape"
    output_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        self.estimator = _ESTIMATOR_ALIASES.get(self.estimator, self.estimator)
        self.alphas = [float(a) for a in self.alphas]
        self.sample_sizes = [int(n) for n in self.sample_sizes]
        if self.estimator not in ESTIMATORS:
            raise ValueError(f"unknown estimator {self.estimator!r}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not self.alphas or any(not a > 0 for a in self.alphas):
            raise ValueError("alphas must be a nonempty list of positive values")
        if any(b <= a for a, b in zip(self.sample_sizes, self.sample_sizes[1:])):
            raise ValueError("sample_sizes must be strictly increasing")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")
        parse_domain(self.domain)

    @classmethod
    def from_file(cls, path, **defaults) -> "ExperimentConfig":
        """Load a JSON config; its keys override ``defaults``."""
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys in {path}: {sorted(unknown)}")
        return cls(**{**defaults, **data})


@dataclass
class CellResult:
    alpha: float
    n: int
    error: float
    bias: float
    std: float
    replicate_values: list[float] = field(repr=False)

    @property
    def M(self) -> int:
        return len(self.replicate_values)


@dataclass
class ExperimentResult:
    domain: str
    true_perimeter: float
    estimator: str
    cells: list[CellResult] = field(default_factory=list)

    def cell(self, n: int, alpha: float) -> CellResult:
        for c in self.cells:
            if c.n == n and c.alpha == alpha:
                return c
        raise KeyError((n, alpha))

    def cells_for_alpha(self, alpha: float) -> list[CellResult]:
        return sorted((c for c in self.cells if c.alpha == alpha), key=lambda c: c.n)


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    ci_low: float
    ci_high: float
    r_squared: float


@dataclass(frozen=True)
class NormalityReport:
    skewness: float
    excess_kurtosis: float
    jarque_bera_stat: float
    p_value: float
    zero_variance: bool = False


def replicate_rng(master_seed: int, n: int, alpha_index: int, m: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([master_seed, n, alpha_index, m])))


def run_replicate(domain: Domain, n: int, alpha: float, estimator: str, rng: np.random.Generator) -> float:
    pts = domain.sample_uniform(n, rng)
    return ESTIMATORS[estimator](build_alpha_shape(pts, alpha))


def _replicate_task(args) -> float:
    spec, n, alpha, alpha_index, m, master_seed, estimator = args
    try:
        return run_replicate(parse_domain(spec), n, alpha, estimator, replicate_rng(master_seed, n, alpha_index, m))
    except Exception as exc:
        raise ReplicateError(n, alpha, m, exc) from exc


def summarize(values: Sequence[float], truth: float) -> tuple[float, float, float]:
    """Mean absolute error, bias and sample standard deviation (denominator M - 1)."""
    v = np.asarray(values, dtype=float)
    m = len(v)
    error = math.fsum(np.abs(v - truth)) / m
    mean = math.fsum(v) / m
    bias = mean - truth
    std = math.sqrt(math.fsum((v - mean) ** 2) / (m - 1)) if m > 1 else 0.0
    return error, bias, std


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    domain = parse_domain(config.domain)
    truth = domain.exact_perimeter()
    tasks = [
        (config.domain, n, alpha, ai, m, config.master_seed, config.estimator)
        for n in config.sample_sizes
        for ai, alpha in enumerate(config.alphas)
        for m in range(config.replicates)
    ]
    log.info("running %d replicates on %s", len(tasks), config.domain)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            values = list(pool.map(_replicate_task, tasks, chunksize=max(1, len(tasks) // (4 * config.workers))))
    else:
        values = [_replicate_task(t) for t in tasks]

    result = ExperimentResult(domain.spec(), truth, config.estimator)
    k = 0
    for n in config.sample_sizes:
        for alpha in config.alphas:
            vals = values[k : k + config.replicates]
            k += config.replicates
            e, b, s = summarize(vals, truth)
            result.cells.append(CellResult(alpha, n, e, b, s, list(vals)))
    return result


def ols_loglog(ns: Sequence[float], values: Sequence[float], level: float = 0.95) -> SlopeFit:
    """Least-squares line through ``(log n, log value)`` with a Student CI on the slope."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    k = len(x)
    if k < 3:
        raise ValueError("need at least 3 points for a slope confidence interval")
    xm, ym = float(x.mean()), float(y.mean())
    sxx = float(np.sum((x - xm) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    syy = float(np.sum((y - ym) ** 2))
    slope = sxy / sxx
    intercept = ym - slope * xm
    sse = max(0.0, float(np.sum((y - intercept - slope * x) ** 2)))
    se = math.sqrt(sse / (k - 2) / sxx)
    half = float(stats.t.ppf(0.5 + level / 2, k - 2)) * se
    r2 = 1.0 if syy == 0 else min(1.0, max(0.0, 1.0 - sse / syy))
    return SlopeFit(slope, intercept, slope - half, slope + half, r2)


def fit_loglog_slope(results: ExperimentResult, alpha: float, statistic: str = "error") -> SlopeFit:
    if statistic not in ("error", "std"):
        raise ValueError(f"statistic must be 'error' or 'std', got {statistic!r}")
    cells = results.cells_for_alpha(alpha)
    if len(cells) < 3:
        raise ValueError(f"need >= 3 sample sizes for alpha={alpha}, have {len(cells)}")
    vals = [getattr(c, statistic) for c in cells]
    for c, v in zip(cells, vals):
        if not v > 0:
            raise ValueError(f"{statistic} must be positive for a log fit; got {v} at n={c.n}, alpha={alpha}")
    return ols_loglog([c.n for c in cells], vals)


def normality_diagnostic(values: Sequence[float]) -> NormalityReport:
    """Jarque-Bera moment test; p-value from the chi-square(2) tail."""
    v = np.asarray(values, dtype=float)
    m = len(v)
    if m < 20:
        raise ValueError(f"need at least 20 values, got {m}")
    d = v - v.mean()
    m2 = float(np.mean(d**2))
    if m2 == 0.0:
        return NormalityReport(0.0, 0.0, math.inf, 0.0, zero_variance=True)
    skew = float(np.mean(d**3)) / m2**1.5
    kurt = float(np.mean(d**4)) / m2**2 - 3.0
    jb = m / 6.0 * (skew**2 + kurt**2 / 4.0)
    return NormalityReport(skew, kurt, jb, float(stats.chi2.sf(jb, 2)))


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def write_raw_csv(results: ExperimentResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RAW_HEADER)
        for c in results.cells:
            for m, v in enumerate(c.replicate_values):
                w.writerow([results.domain, _fmt(c.alpha), c.n, m, _fmt(v), _fmt(results.true_perimeter)])


def write_summary_csv(results: ExperimentResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for c in results.cells:
            w.writerow([results.domain, _fmt(c.alpha), c.n, c.M, _fmt(c.error), _fmt(c.bias), _fmt(c.std)])


def read_summary_csv(path) -> list[dict]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rows.append(
                {
                    "domain": row["domain"],
                    "alpha": float(row["alpha"]),
                    "n": int(row["n"]),
                    "M": int(row["M"]),
                    "error": float(row["error"]),
                    "bias": float(row["bias"]),
                    "std": float(row["std"]),
                }
            )
    return rows


def emit_csv(results: ExperimentResult, raw_path, summary_path) -> None:
    for p in (raw_path, summary_path):
        Path(p).parent.mkdir(parents=True, exist_ok=True)
    try:
        write_raw_csv(results, raw_path)
        write_summary_csv(results, summary_path)
    except OSError as exc:
        raise OSError(f"could not write results ({raw_path}, {summary_path}): {exc}") from exc


def compute_fits(results: ExperimentResult) -> dict[tuple[float, str], SlopeFit]:
    """Slope fits for every alpha and statistic where one is defined."""
    fits = {}
    for alpha in dict.fromkeys(c.alpha for c in results.cells):
        for stat in ("error", "std"):
            try:
                fits[(alpha, stat)] = fit_loglog_slope(results, alpha, stat)
            except ValueError as exc:
                log.info("no %s fit for alpha=%s: %s", stat, alpha, exc)
    return fits


def format_report(results: ExperimentResult, fits: dict[tuple[float, str], SlopeFit]) -> str:
    out = [
        "# alpha-shape perimeter experiment",
        f"domain={results.domain}",
        f"estimator={results.estimator}",
        f"true_perimeter={results.true_perimeter!r}",
        "",
        f"{'alpha':>8} {'n':>8} {'M':>6} {'error':>12} {'bias':>12} {'std':>12}",
    ]
    for c in results.cells:
        out.append(f"{c.alpha:>8g} {c.n:>8d} {c.M:>6d} {c.error:>12.5g} {c.bias:>12.5g} {c.std:>12.5g}")
    for (alpha, stat), f in fits.items():
        out += [
            "",
            f"[fit alpha={alpha!r} statistic={stat}]",
            f"slope={f.slope!r}",
            f"intercept={f.intercept!r}",
            f"ci95_low={f.ci_low!r}",
            f"ci95_high={f.ci_high!r}",
            f"r_squared={f.r_squared!r}",
        ]
    for c in results.cells:
        if c.M >= 20 and c.n == max(x.n for x in results.cells):
            nr = normality_diagnostic(c.replicate_values)
            out += [
                "",
                f"[normality alpha={c.alpha!r} n={c.n} test=jarque-bera]",
                f"skewness={nr.skewness!r}",
                f"excess_kurtosis={nr.excess_kurtosis!r}",
                f"jarque_bera_stat={nr.jarque_bera_stat!r}",
                f"p_value={nr.p_value!r}",
            ]
    out += ["", "# gnuplot data: one index block per alpha; columns n error bias std"]
    for alpha in dict.fromkeys(c.alpha for c in results.cells):
        out.append(f"# alpha={alpha!r}")
        for c in results.cells_for_alpha(alpha):
            out.append(f"{c.n} {c.error!r} {c.bias!r} {c.std!r}")
        out += ["", ""]
    return "\n".join(out).rstrip("\n") + "\n"


def emit_report(results: ExperimentResult, fits: dict[tuple[float, str], SlopeFit], path) -> None:
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(format_report(results, fits), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"could not write report {path}: {exc}") from exc


def write_outputs(results: ExperimentResult, out_dir) -> dict[str, Path]:
    out = Path(out_dir)
    paths = {"raw": out / "raw.csv", "summary": out / "summary.csv", "report": out / "report.txt"}
    emit_csv(results, paths["raw"], paths["summary"])
    emit_report(results, compute_fits(results), paths["report"])
    return paths
