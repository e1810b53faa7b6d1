"""Equilibrium (stationary-excess) distributions of discrete laws.

The first-order equilibrium of X has pmf ``S(x + 1) / E[X]``; higher orders
apply the same map repeatedly, each time dividing by the mean of the
previous level.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core_dist import DiscreteDistribution, Explicit, truncate
from .errors import NonConvergentError, ZeroMeanError

ZERO_MEAN_THRESHOLD = 1e-300
# closed-form bases are expanded until the discarded tail stays negligible even
# after weighting by the polynomial factors of higher equilibrium levels
PRECISION_FLOOR = 1e-30


@dataclass(frozen=True, eq=False)
class EquilibriumChain:
    """A base law and its equilibrium distributions of order 0..order.

    ``levels[0]`` is the materialized base; ``means[i]`` is the mean of
    ``levels[i]`` for ``i < order``.
    """

    base: DiscreteDistribution
    levels: tuple[Explicit, ...]
    means: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.levels) - 1

    def level(self, i: int) -> Explicit:
        return self.levels[i]


def _materialize_base(dist: DiscreteDistribution, order: int) -> Explicit:
    if isinstance(dist, Explicit):
        return dist
    budget = dist.tail_tolerance / (order + 1)
    try:
        eps = min(budget, PRECISION_FLOOR)
        if dist.tail_bound(eps) <= dist.truncation_bound:
            return truncate(dist, eps)
    except NonConvergentError:
        pass
    return truncate(dist, budget)


def _next_level(current: Explicit, order: int) -> tuple[Explicit, float]:
    tail = current.tail_sums
    mean = math.fsum(tail[1:])
    if mean < ZERO_MEAN_THRESHOLD:
        raise ZeroMeanError(order, mean)
    nxt = Explicit(
        tail[1:] / mean,
        truncation_bound=current.truncation_bound,
        tail_tolerance=current.tail_tolerance,
    )
    return nxt, mean


def nth_equilibrium(dist: DiscreteDistribution, n: int) -> EquilibriumChain:
    """Build the chain of equilibrium distributions of ``dist`` up to order ``n``."""
    if n < 0:
        raise ValueError(f"order must be non-negative, got {n}")
    level = _materialize_base(dist, n)
    levels = [level]
    means = []
    for i in range(1, n + 1):
        level, mean = _next_level(level, i)
        levels.append(level)
        means.append(mean)
    return EquilibriumChain(base=dist, levels=tuple(levels), means=tuple(means))


def stationary_excess(dist: DiscreteDistribution) -> Explicit:
    """Discrete stationary-excess transform: pmf ``P(X >= x + 1) / E[X]``."""
    return nth_equilibrium(dist, 1).levels[1]


@lru_cache(maxsize=None)
def _coeff_row(n: int) -> tuple[Fraction, ...]:
    a = [Fraction(0)] * (n + 1)
    a[n] = Fraction(1, n)
    for h in range(2, n + 1):
        r0 = n - h + 1
        acc = sum((math.comb(r, n - h) * a[r] for r in range(r0 + 1, n + 1)), Fraction(0))
        a[r0] = -acc / r0
    return tuple(a)


def delta_inverse_coeffs(n: int) -> dict[int, Fraction]:
    """Coefficients ``a_r(n)``, r = 1..n, of the polynomial P with ΔP(x) = x**(n-1), P(0) = 0."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    row = _coeff_row(n)
    return {r: row[r] for r in range(1, n + 1)}


def antidifference(n: int, x) -> Fraction:
    """Evaluate ``P_n(x)`` exactly."""
    return sum((c * Fraction(x) ** r for r, c in delta_inverse_coeffs(n).items()), Fraction(0))


@dataclass(frozen=True)
class CoefficientTriangle:
    n_max: int
    coeffs: dict[tuple[int, int], Fraction]

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.coeffs[key]

    def to_csv(self, n_min: int = 2) -> str:
        """Rows r, columns n, exact ``p/q`` strings; blank where r > n."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        ns = range(n_min, self.n_max + 1)
        writer.writerow(["r"] + [str(n) for n in ns])
        for r in range(1, self.n_max + 1):
            writer.writerow(
                [str(r)] + [str(self.coeffs[n, r]) if r <= n else "" for n in ns]
            )
        return buf.getvalue()


def coefficient_triangle(n_max: int) -> CoefficientTriangle:
    coeffs = {}
    for n in range(1, n_max + 1):
        for r, c in delta_inverse_coeffs(n).items():
            coeffs[n, r] = c
    return CoefficientTriangle(n_max=n_max, coeffs=coeffs)


def _recursive_moments(base: DiscreteDistribution, i: int, j: int) -> list[float]:
    """Moments ``[_, mu_{i:1}, ..., mu_{i:j}]`` of the order-i equilibrium."""
    top = i + j
    mom = [0.0] + [base.moment(r) for r in range(1, top + 1)]
    for level in range(1, i + 1):
        if mom[1] < ZERO_MEAN_THRESHOLD:
            raise ZeroMeanError(level, mom[1])
        keep = top - level
        nxt = [0.0]
        for k in range(1, keep + 1):
            row = delta_inverse_coeffs(k + 1)
            nxt.append(math.fsum(float(row[r]) * mom[r] for r in range(1, k + 2)) / mom[1])
        mom = nxt
    return mom


def equilibrium_moment(chain: EquilibriumChain, i: int, j: int) -> float:
    """``E[(X^{i*})**j]`` from the base moments through the antidifference recursion."""
    if not 0 <= i <= chain.order:
        raise ValueError(f"level {i} outside chain of order {chain.order}")
    if j < 1:
        raise ValueError(f"moment order must be >= 1, got {j}")
    if i == 0:
        return chain.base.moment(j)
    value = _recursive_moments(chain.base, i, j)[j]
    if not math.isfinite(value):
        raise NonConvergentError(f"moment {j} of level {i} is not finite")
    return value


def bivariate_eq_stats(dist: DiscreteDistribution) -> tuple[float, float]:
    """Mean and variance of the first-order equilibrium of ``dist``."""
    mu = dist.moment(1)
    if mu < ZERO_MEAN_THRESHOLD:
        raise ZeroMeanError(1, mu)
    m2 = dist.moment(2)
    m3 = dist.moment(3)
    mean = (m2 / mu - 1.0) / 2.0
    var = (4.0 * mu * m3 - 3.0 * m2 * m2 - mu * mu) / (12.0 * mu * mu)
    return mean, var

