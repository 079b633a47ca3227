"""Grid validation of the follow-up moment formulas.

Each row compares the closed-form mean against quadrature and Monte Carlo,
and both second-moment variants' variances against Monte Carlo with a
3-standard-error rule.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .moments import MomentMode, surveillance_mean, surveillance_variance
from .oracles import quadrature_moment_oracle
from .simulation import mc_moments

SE_RULE = 3.0
QUADRATURE_RTOL = 1e-9
_DURATIONS = (0.29, 1.0, 0.5, 2.0, 5.0)


def default_grid(n_points: int = 50, x_min: float = 1e-4, x_max: float = 50.0) -> list[tuple[float, float]]:
    """``n_points`` (lambda, d) pairs with lambda*d log-spaced over [x_min, x_max]."""
    xs = np.geomspace(x_min, x_max, n_points)
    return [(float(x / _DURATIONS[i % len(_DURATIONS)]), _DURATIONS[i % len(_DURATIONS)]) for i, x in enumerate(xs)]


@dataclass(frozen=True)
class MomentCheckRow:
    lam: float
    d: float
    lambda_d: float
    mean_closed: float
    mean_quadrature: float
    mean_rel_err: float
    mean_mc: float
    mean_mc_se: float
    var_paper: float
    var_corrected: float
    var_mc: float
    var_mc_se: float
    mean_pass: bool
    corrected_pass: bool
    paper_pass: bool


def check_point(lam: float, d: float, replicates: int, seed: int, index: int = 0) -> MomentCheckRow:
    mean = surveillance_mean(lam, d)
    quad = quadrature_moment_oracle(lam, d, 1)
    rel = abs(mean - quad) / abs(quad)
    mc = mc_moments(replicates, lam, d, seed, stream_index=index)
    var_c = surveillance_variance(lam, d, MomentMode.CORRECTED)
    var_p = surveillance_variance(lam, d, MomentMode.PAPER_COMPAT)
    mean_pass = rel <= QUADRATURE_RTOL and abs(mc.mean - mean) <= SE_RULE * mc.se_mean
    return MomentCheckRow(
        lam=lam,
        d=d,
        lambda_d=lam * d,
        mean_closed=mean,
        mean_quadrature=quad,
        mean_rel_err=rel,
        mean_mc=float(mc.mean),
        mean_mc_se=mc.se_mean,
        var_paper=var_p,
        var_corrected=var_c,
        var_mc=float(mc.variance),
        var_mc_se=mc.se_var,
        mean_pass=bool(mean_pass),
        corrected_pass=bool(mean_pass and abs(mc.variance - var_c) <= SE_RULE * mc.se_var),
        paper_pass=bool(math.isfinite(var_p) and abs(mc.variance - var_p) <= SE_RULE * mc.se_var),
    )


def validate_moment_grid(grid, replicates: int = 1_000_000, seed: int = 20201118) -> list[MomentCheckRow]:
    grid = list(grid)
    if not grid:
        raise DomainError("moment validation grid is empty")
    return [check_point(lam, d, replicates, seed, i) for i, (lam, d) in enumerate(grid)]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    names = list(MomentCheckRow.__dataclass_fields__)
    w = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in asdict(r).items()})
    return buf.getvalue()
