"""Schur-constant multivariate equilibrium models.

The n-dimensional model generated by X has joint survival
``P(X_1 >= x_1, ..., X_n >= x_n) = S^{(n-1)*}(x_1 + ... + x_n)``, where
``S^{(n-1)*}`` is the survival function of the order-(n-1) equilibrium of X.
Every coordinate is distributed as that equilibrium law.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core_dist import (
    DiscreteDistribution,
    Explicit,
    Geometric,
    Poisson,
    forward_difference,
)
from .equilibrium import EquilibriumChain, nth_equilibrium
from .errors import (
    IntegrityError,
    UnsupportedDimensionError,
    ZeroVarianceError,
)

MAX_DIMENSION = 10
CLAMP_TOLERANCE = 1e-12
RHO_BOUND_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class SchurModel:
    base: DiscreteDistribution
    n: int
    chain: EquilibriumChain
    mean_product: float

    @property
    def marginal(self) -> Explicit:
        """Common law of every coordinate (the order n-1 equilibrium)."""
        return self.chain.levels[self.n - 1]

    @property
    def sum_support_max(self) -> int:
        """Largest z with a materialized base pmf at ``z + n - 1``."""
        return self.chain.levels[0].support_max - (self.n - 1)


class RhoMethod(str, enum.Enum):
    MARGINAL_FORM = "marginal_form"
    BASE_MOMENT_FORM = "base_moment_form"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class RhoResult:
    value: float
    method: RhoMethod


def build_model(
    dist: DiscreteDistribution, n: int, max_dimension: int = MAX_DIMENSION
) -> SchurModel:
    if n < 2:
        raise UnsupportedDimensionError(f"dimension must be at least 2, got {n}")
    if n > max_dimension:
        raise UnsupportedDimensionError(
            f"dimension {n} exceeds the ceiling {max_dimension}"
        )
    chain = nth_equilibrium(dist, n - 1)
    return SchurModel(
        base=dist, n=n, chain=chain, mean_product=math.prod(chain.means[: n - 1])
    )


def _check_coords(model: SchurModel, x: Sequence[int], minimum: int) -> int:
    if not minimum <= len(x) <= model.n:
        raise ValueError(
            f"expected between {minimum} and {model.n} coordinates, got {len(x)}"
        )
    if any(v < 0 for v in x):
        raise ValueError("coordinates must be non-negative")
    return int(sum(x))


def joint_survival(model: SchurModel, x: Sequence[int]) -> float:
    """P(X_1 >= x_1, ..., X_j >= x_j); omitted coordinates are taken as 0."""
    return model.marginal.survival(_check_coords(model, x, 0))


def joint_pmf_raw(model: SchurModel, x: Sequence[int]) -> float:
    """``(-1)**j Δ**j S^{(n-1)*}(sum x)`` before clamping."""
    total = _check_coords(model, x, 1)
    j = len(x)
    return (-1) ** j * forward_difference(model.marginal.survival, total, j)


def joint_pmf(model: SchurModel, x: Sequence[int]) -> float:
    """P(X_1 = x_1, ..., X_j = x_j) for a sub-vector of length ``1 <= j <= n``."""
    raw = joint_pmf_raw(model, x)
    if raw < -CLAMP_TOLERANCE:
        raise IntegrityError(
            f"joint pmf at {tuple(x)} is {raw!r}; the truncated support is too short"
        )
    return max(raw, 0.0)


def joint_pmf_by_total(model: SchurModel, j: int, upto: int) -> np.ndarray:
    """Joint pmf of a j-sub-vector as a function of its coordinate sum, for sums 0..upto."""
    if not 1 <= j <= model.n:
        raise ValueError(f"sub-vector length must be in 1..{model.n}")
    s = model.marginal.survival_array(upto + j)
    out = np.array(
        [(-1) ** j * forward_difference(lambda y: s[y], t, j) for t in range(upto + 1)]
    )
    if out.min(initial=0.0) < -CLAMP_TOLERANCE:
        raise IntegrityError("negative joint pmf beyond rounding noise")
    return np.clip(out, 0.0, None)


def sum_pmf(model: SchurModel, z: int) -> float:
    """P(Z = z) for Z = X_1 + ... + X_n: ``P(X = z+n-1) C(z+n-1, n-1) / mean_product``."""
    if z < 0:
        return 0.0
    k = z + model.n - 1
    p = model.base.pmf(k)
    if p == 0.0:
        return 0.0
    log_binom = math.lgamma(k + 1) - math.lgamma(z + 1) - math.lgamma(model.n)
    if log_binom < 700:
        return p * math.comb(k, model.n - 1) / model.mean_product
    return math.exp(math.log(p) + log_binom - math.log(model.mean_product))


def sum_pmf_array(model: SchurModel, upto: int | None = None) -> np.ndarray:
    if upto is None:
        upto = model.sum_support_max
    return np.array([sum_pmf(model, z) for z in range(upto + 1)])


def sum_pmf_by_differences(model: SchurModel, z: int) -> float:
    """P(Z = z) as ``(-1)**n Δ**n S^{(n-1)*}(z) C(z+n-1, n-1)``."""
    n = model.n
    diff = forward_difference(model.marginal.survival, z, n)
    return (-1) ** n * diff * math.comb(z + n - 1, n - 1)


def sum_pmf_by_marginalization(model: SchurModel, z: int) -> float:
    """Bivariate only: sum of the joint pmf over the line x_1 + x_2 = z."""
    if model.n != 2:
        raise UnsupportedDimensionError("marginalization path is bivariate")
    return math.fsum(joint_pmf(model, (x, z - x)) for x in range(z + 1))


def marginal_pmf(model: SchurModel, x: int) -> float:
    return model.marginal.pmf(x)


def marginal_pmf_recursive(model: SchurModel, x_max: int) -> np.ndarray:
    """Bivariate marginal pmf on 0..x_max from the law of Z alone.

    ``P(X_1 = 0) = E[1 / (Z + 1)]`` and
    ``P(X_1 = x + 1) = P(X_1 = x) - P(Z = x) / (x + 1)``.
    """
    if model.n != 2:
        raise UnsupportedDimensionError("the Z-recursion for the marginal is bivariate")
    zs = sum_pmf_array(model, max(model.sum_support_max, x_max))
    out = np.empty(x_max + 1)
    out[0] = math.fsum(zs / np.arange(1, zs.size + 1))
    for x in range(x_max):
        out[x + 1] = out[x] - zs[x] / (x + 1)
    return out


def marginal_stats(model: SchurModel) -> tuple[float, float]:
    """Mean and variance of the marginal, summed over its materialized pmf.

    Direct sums only add positive terms; the moment recursion cancels badly
    when every raw moment of the base is close to its mean (Poisson with a
    small rate, for instance).
    """
    p = model.marginal.probabilities
    x = np.arange(p.size, dtype=float)
    mean = math.fsum(x * p)
    var = math.fsum((x - mean) ** 2 * p)
    return mean, var


def _rho_from_marginal(model: SchurModel) -> float:
    e, v = marginal_stats(model)
    if v <= 1e-12 * max(1.0, e * e):
        raise ZeroVarianceError(f"marginal variance is {v!r}")
    return (v - e * e - e) / (2.0 * v)


def _rho_from_base_moments(model: SchurModel) -> float:
    n = model.n
    if n > 4:
        raise UnsupportedDimensionError(
            f"explicit base-moment correlation exists for n <= 4, got {n}"
        )
    mu, m2, m3, m4, m5 = (model.base.moment(r) for r in range(1, 6))
    if n == 2:
        num = 2 * mu * m3 - 3 * m2 * m2 + mu * mu
        den = 4 * mu * m3 - 3 * m2 * m2 - mu * mu
        if den == 0:
            raise ZeroVarianceError("marginal variance is 0")
        return num / den
    if n == 3:
        num = (mu - m3) * (2 * mu - 3 * m2 + m3)
        den = (
            2 * mu * mu
            + 2 * m3 * m3
            + 3 * m2 * (m2 - m4)
            + mu * (-3 * m2 - 4 * m3 + 3 * m4)
        )
    else:
        d = (
            36 * mu * mu
            + 65 * m2 * m2
            + 20 * m3 * m3
            - 70 * m2 * m4
            + 5 * m4 * m4
            + 24 * m2 * m5
            - 8 * m3 * m5
        )
        jj = 21 * m2 + 8 * m3 - 15 * m4 + 4 * m5
        num = 5 * (6 * mu - 11 * m2 + 6 * m3 - m4) * (2 * mu - m2 - 2 * m3 + m4)
        den = 2 * (d - 4 * mu * jj)
    if den == 0:
        raise ZeroVarianceError("marginal variance is 0")
    return 0.5 - num / den


def poisson_rho(lam: float, n: int) -> float:
    """Pearson correlation of the Poisson-generated model, tabulated for n = 2..5."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    table = {2: (6, 1), 3: (12, 2), 4: (20, 3), 5: (30, 4)}
    if n not in table:
        raise UnsupportedDimensionError(f"closed form tabulated for n in 2..5, got {n}")
    a, b = table[n]
    return -lam / (a + b * lam)


def poisson_rho_conjecture(lam: float, n: int) -> float:
    """Extrapolated pattern ``-lam / (n (n + 1) + (n - 1) lam)``; not a proven result."""
    return -lam / (n * (n + 1) + (n - 1) * lam)


def _rho_closed_form(model: SchurModel) -> float:
    if isinstance(model.base, Poisson):
        return poisson_rho(model.base.lam, model.n)
    if isinstance(model.base, Geometric):
        return 0.0
    raise ValueError(f"no closed-form correlation for {type(model.base).__name__} bases")


def correlation(model: SchurModel, method: RhoMethod | str = RhoMethod.MARGINAL_FORM) -> RhoResult:
    """Common pairwise Pearson correlation of the model's coordinates."""
    method = RhoMethod(method)
    if method is RhoMethod.MARGINAL_FORM:
        value = _rho_from_marginal(model)
    elif method is RhoMethod.BASE_MOMENT_FORM:
        value = _rho_from_base_moments(model)
    else:
        value = _rho_closed_form(model)
    if not -1.0 / (model.n - 1) - RHO_BOUND_SLACK <= value <= 1.0 + RHO_BOUND_SLACK:
        raise IntegrityError(f"correlation {value!r} is outside the exchangeable range")
    return RhoResult(value=value, method=method)


def sample(model: SchurModel, seed: int, count: int) -> np.ndarray:
    """Draw ``count`` vectors: Z by inverse CDF, then a uniform composition of Z.

    Given Z = z the joint pmf is constant over the C(z+n-1, n-1) compositions
    of z into n non-negative parts, so the split is a uniform choice of n-1
    bar positions among z+n-1 slots.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    n = model.n
    out = np.zeros((count, n), dtype=np.int64)
    if count == 0:
        return out
    rng = np.random.default_rng(seed)
    probs = sum_pmf_array(model)
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    zs = np.minimum(np.searchsorted(cdf, rng.random(count), side="right"), probs.size - 1)
    for z in np.unique(zs):
        rows = np.flatnonzero(zs == z)
        slots = int(z) + n - 1
        keys = rng.random((rows.size, slots))
        bars = np.sort(np.argsort(keys, axis=1)[:, : n - 1], axis=1)
        edges = np.hstack(
            [np.full((rows.size, 1), -1), bars, np.full((rows.size, 1), slots)]
        )
        out[rows] = np.diff(edges, axis=1) - 1
    return out
