"""Brute-force reference computations.

Nothing here reuses the equilibrium recursion, the cached chain means or the
closed forms of the model module: equilibria are rebuilt from literal nested
tail sums with compensated accumulation, and joint laws come from iterated
forward differences of that survival function.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .core_dist import DiscreteDistribution, Explicit, check_n_monotone
from .equilibrium import ZERO_MEAN_THRESHOLD
from .errors import NonConvergentError, SchurModelError, ZeroMeanError, ZeroVarianceError
from .schur_model import (
    RhoMethod,
    SchurModel,
    correlation,
    joint_survival,
    marginal_pmf_recursive,
    sum_pmf_array,
    sum_pmf_by_differences,
)

ORACLE_TAIL = 1e-14
MAX_GRID_POINTS = 20_000_000


def _suffix_sums(values: Sequence[float]) -> list[float]:
    """Neumaier-compensated running sums from the right: out[x] = sum(values[x:])."""
    out = [0.0] * (len(values) + 1)
    s = 0.0
    c = 0.0
    for i in range(len(values) - 1, -1, -1):
        v = values[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i] = s + c
    return out


def default_x_max(dist: DiscreteDistribution, n: int) -> int:
    """Smallest M with base tail mass below 1e-14, plus slack for shifted indices."""
    if isinstance(dist, Explicit):
        m = dist.support_max
    else:
        m = dist.tail_bound(ORACLE_TAIL)
    return m + 2 * (n - 1)


def brute_survival(dist: DiscreteDistribution, order: int, upto: int) -> list[float]:
    """Survival function of the order-th equilibrium on 0..upto by literal tail sums."""
    top = max(upto, default_x_max(dist, 1)) + order + 2
    s = [1.0] + [dist.survival(x) for x in range(1, top + 1)]
    for level in range(1, order + 1):
        pmf = [s[x] - s[x + 1] for x in range(len(s) - 1)] + [s[-1]]
        mean = math.fsum(x * p for x, p in enumerate(pmf))
        if mean < ZERO_MEAN_THRESHOLD:
            raise ZeroMeanError(level, mean)
        tails = _suffix_sums(s)
        s = [tails[x + 1] / mean for x in range(len(s))]
    return s[: upto + 1]


def brute_equilibrium(dist: DiscreteDistribution, order: int, x_max: int) -> np.ndarray:
    """pmf of the order-th equilibrium of ``dist`` on 0..x_max."""
    if order < 1:
        raise ValueError("order must be >= 1")
    s = brute_survival(dist, order, x_max + 1)
    return np.array([s[x] - s[x + 1] for x in range(x_max + 1)])


def _iterated_difference(values: np.ndarray, j: int) -> np.ndarray:
    out = values
    for _ in range(j):
        out = out[1:] - out[:-1]
    return out


def brute_subvector_pmf(model: SchurModel, j: int, x_max: int) -> np.ndarray:
    """pmf of (X_1..X_j) as a function of the coordinate sum, sums 0..j*x_max."""
    top = j * x_max
    s = np.array(brute_survival(model.base, model.n - 1, top + j))
    return (-1) ** j * _iterated_difference(s, j)[: top + 1]


class BruteMoment(NamedTuple):
    value: float
    omitted_mass: float


def brute_joint_moment(
    model: SchurModel, powers: Sequence[int], x_max: Optional[int] = None
) -> BruteMoment:
    """E[prod X_i**p_i] by summing over every tuple in {0..x_max}^j."""
    j = len(powers)
    if not 1 <= j <= model.n:
        raise ValueError(f"need between 1 and {model.n} powers")
    if sum(powers) > 4:
        raise ValueError("total power above 4 is not supported")
    if x_max is None:
        x_max = default_x_max(model.base, model.n)
    if (x_max + 1) ** j > MAX_GRID_POINTS:
        raise NonConvergentError("brute-force grid too large")
    by_total = brute_subvector_pmf(model, j, x_max)
    grid = np.indices((x_max + 1,) * j).reshape(j, -1)
    weights = by_total[grid.sum(axis=0)]
    terms = np.prod([grid[i].astype(float) ** p for i, p in enumerate(powers)], axis=0)
    omitted = max(0.0, 1.0 - math.fsum(weights))
    return BruteMoment(math.fsum(terms * weights), omitted)


def brute_correlation(model: SchurModel, x_max: Optional[int] = None) -> float:
    """Pearson correlation of (X_1, X_2) from bivariate joint pmf sums."""
    e1 = brute_joint_moment(model, (1, 0), x_max).value
    e11 = brute_joint_moment(model, (2, 0), x_max).value
    e12 = brute_joint_moment(model, (1, 1), x_max).value
    var = e11 - e1 * e1
    if var <= 1e-12 * max(1.0, e1 * e1):
        raise ZeroVarianceError(f"marginal variance is {var!r}")
    return (e12 - e1 * e1) / var


@dataclass
class Check:
    name: str
    passed: bool
    max_abs_error: float
    tolerance: float
    location: Optional[int] = None
    observed: Optional[float] = None
    note: str = ""


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, error, tolerance, location=None, observed=None, note=""):
        error = float(error)
        self.checks.append(
            Check(name, bool(error <= tolerance), error, tolerance, location, observed, note)
        )

    def failed(self, name, note):
        self.checks.append(Check(name, False, math.inf, 0.0, note=note))

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        def clean(c):
            d = asdict(c)
            if not math.isfinite(d["max_abs_error"]):
                d["max_abs_error"] = None
            return d

        return {"passed": self.passed, "checks": [clean(c) for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_table(self) -> str:
        header = ("check", "status", "max_abs_error", "tolerance", "location")
        rows = [
            (
                c.name,
                "PASS" if c.passed else "FAIL",
                f"{c.max_abs_error:.3e}",
                f"{c.tolerance:.1e}",
                "" if c.location is None else str(c.location),
            )
            for c in self.checks
        ]
        widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
        lines = ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in [header, *rows]]
        return "\n".join(lines)


def _argmax_abs(diff: np.ndarray) -> tuple[float, Optional[int]]:
    if diff.size == 0:
        return 0.0, None
    k = int(np.argmax(np.abs(diff)))
    return float(abs(diff[k])), k


def verify_model(model: SchurModel) -> VerificationReport:
    """Run every structural and cross-path check on ``model``."""
    report = VerificationReport()
    n = model.n
    marginal = model.marginal
    m = marginal.support_max

    report.add("joint_survival_origin", abs(joint_survival(model, [0] * n) - 1.0), 0.0)

    mono = check_n_monotone(marginal, n, m + n)
    report.add(
        "monotonicity_lift",
        max(0.0, -mono.min_value),
        1e-12,
        location=None if mono.first_violation is None else mono.first_violation.x,
    )

    zs = sum_pmf_array(model)
    report.add("sum_pmf_normalization", abs(math.fsum(zs) - 1.0), 1e-10)
    report.add("marginal_normalization", abs(math.fsum(marginal.probabilities) - 1.0), 1e-10)

    by_diff = np.array([sum_pmf_by_differences(model, z) for z in range(zs.size)])
    err, loc = _argmax_abs(zs - by_diff)
    report.add("sum_pmf_closed_vs_differences", err, 1e-10, location=loc)

    x_max = min(m, default_x_max(model.base, n))
    try:
        brute = brute_equilibrium(model.base, n - 1, x_max)
        err, loc = _argmax_abs(marginal.pmf_array(x_max) - brute)
        report.add("marginal_vs_oracle", err, 1e-10, location=loc)
    except SchurModelError as exc:
        report.failed("marginal_vs_oracle", str(exc))

    if n == 2:
        rec = marginal_pmf_recursive(model, m)
        err, loc = _argmax_abs(rec - marginal.pmf_array(m))
        report.add("marginal_z_recursion", err, 1e-10, location=loc)

    try:
        rho = correlation(model, RhoMethod.MARGINAL_FORM).value
    except ZeroVarianceError:
        report.checks.append(
            Check("rho_defined", True, 0.0, 0.0, note="degenerate marginal; correlation undefined")
        )
        return report
    except SchurModelError as exc:
        report.failed("rho_marginal_form", str(exc))
        return report

    report.add("rho_exchangeable_bound", max(0.0, -1.0 / (n - 1) - rho), 1e-9, observed=rho)
    if n <= 4:
        other = correlation(model, RhoMethod.BASE_MOMENT_FORM).value
        report.add("rho_marginal_vs_base_moments", abs(rho - other), 1e-9, observed=rho)
    try:
        other = brute_correlation(model)
        report.add("rho_marginal_vs_oracle", abs(rho - other), 1e-8, observed=rho)
    except SchurModelError as exc:
        report.failed("rho_marginal_vs_oracle", str(exc))
    return report
