"""Shared numerics helpers: ratio spreads, log-log fits, seed splitting."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def spread(values) -> float:
    """max/min over a family of positive ratios; inf on degenerate input."""
    v = np.asarray(values, dtype=float)
    if len(v) == 0 or np.any(v <= 0):
        return float("inf")
    return float(v.max() / v.min())


def drift_slope(values) -> float:
    """Log-log slope of a positive family against its 1-based index.

    Near zero means no monotone drift; used to operationalize two-sided
    equivalences at truncation scale.
    """
    v = np.asarray(values, dtype=float)
    if len(v) < 2 or np.any(v <= 0):
        return float("inf")
    x = np.log(np.arange(1, len(v) + 1))
    return float(np.polyfit(x, np.log(v), 1)[0])


def loglog_fit(x, y) -> tuple[float, float, float]:
    """(slope, intercept, r_squared) of log y against log x."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(((ly - pred) ** 2).sum())
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2


def fit_scaled(x, y) -> tuple[float, float]:
    """Least-squares c in y ~ c*x (through the origin) and its r_squared.

    Constant y against varying x is a failed fit for this model (there is no
    intercept to absorb it), so r_squared is -inf there rather than 1.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    c = float((x * y).sum() / (x * x).sum())
    ss_res = float(((y - c * x) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0:
        r2 = 1.0 if ss_res <= 1e-20 * max(1.0, float((y * y).sum())) else -math.inf
    else:
        r2 = 1.0 - ss_res / ss_tot
    return c, r2


def split_seeds(seed: int, k: int) -> list[int]:
    """k independent child seeds, deterministic in (seed, k)."""
    ss = np.random.SeedSequence(seed)
    return [int(child.generate_state(1)[0]) for child in ss.spawn(k)]


def thread_count() -> int:
    """Worker count from GLAB_THREADS; defaults to 1 (serial)."""
    try:
        n = int(os.environ.get("GLAB_THREADS", "1"))
    except ValueError:
        return 1
    return max(1, n)


def parallel_max(fn, seeds) -> float:
    """max(fn(seed) for seed) with optional thread fan-out.

    Results merge by max, so the outcome does not depend on worker count.
    """
    workers = thread_count()
    if workers <= 1 or len(seeds) <= 1:
        return max(fn(s) for s in seeds)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return max(pool.map(fn, seeds))
