"""Discrete distributions on the non-negative integers.

Survival functions follow the convention ``S(x) = P(X >= x)``, so that
``S(0) == 1`` for every distribution. Many libraries (scipy included) use
``P(X > x)`` instead; do not mix the two.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NonConvergentError

DEFAULT_TAIL_TOLERANCE = 1e-12
DEFAULT_TRUNCATION_BOUND = 1_000_000
MONOTONE_TOLERANCE = 1e-12
NORMALIZATION_TOLERANCE = 1e-12


def stirling2_row(j: int) -> list[int]:
    """Stirling numbers of the second kind ``S(j, k)`` for ``k = 0..j``."""
    row = [1]
    for m in range(1, j + 1):
        new = [0] * (m + 1)
        for k in range(1, m + 1):
            new[k] = k * (row[k] if k < m else 0) + row[k - 1]
        row = new
    return row


class DiscreteDistribution(ABC):
    """A probability law on {0, 1, 2, ...}.

    Subclasses are frozen dataclasses carrying ``truncation_bound`` (the
    largest support point that may ever be materialized) and
    ``tail_tolerance`` (the probability mass allowed beyond a materialized
    support).
    """

    truncation_bound: int
    tail_tolerance: float

    @abstractmethod
    def pmf(self, x: int) -> float:
        """P(X = x)."""

    @abstractmethod
    def survival(self, x: int) -> float:
        """P(X >= x)."""

    @abstractmethod
    def moment_with_bound(self, j: int) -> tuple[float, float]:
        """Return ``(E[X**j], absolute truncation error bound)``."""

    @abstractmethod
    def tail_bound(self, eps: float) -> int:
        """Smallest ``M`` such that ``P(X > M) < eps``."""

    @abstractmethod
    def pmf_array(self, upto: int) -> np.ndarray:
        """pmf evaluated on ``0..upto``."""

    def moment(self, j: int) -> float:
        """E[X**j] for ``j >= 1``."""
        return self.moment_with_bound(j)[0]

    @property
    def mean(self) -> float:
        return self.moment(1)

    def survival_array(self, upto: int) -> np.ndarray:
        return np.array([self.survival(x) for x in range(upto + 1)])


def _check_order(j: int) -> None:
    if j < 1:
        raise ValueError(f"moment order must be >= 1, got {j}")


@dataclass(frozen=True)
class Poisson(DiscreteDistribution):
    lam: float
    truncation_bound: int = DEFAULT_TRUNCATION_BOUND
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"Poisson rate must be positive and finite, got {self.lam}")

    @cached_property
    def _table(self) -> np.ndarray:
        # ratio recurrence from the mode, normalized over a range whose
        # excluded tail is far below double precision
        top = int(self.lam + 12 * math.sqrt(self.lam) + 30)
        mode = int(self.lam)
        w = np.empty(top + 1)
        w[mode] = 1.0
        for k in range(mode, top):
            w[k + 1] = w[k] * self.lam / (k + 1)
        for k in range(mode, 0, -1):
            w[k - 1] = w[k] * k / self.lam
        w /= math.fsum(w)
        w.flags.writeable = False
        return w

    def _log_pmf(self, x: int) -> float:
        return math.exp(x * math.log(self.lam) - self.lam - math.lgamma(x + 1))

    def pmf(self, x: int) -> float:
        if x < 0:
            return 0.0
        if x < self._table.size:
            return float(self._table[x])
        return self._log_pmf(x)

    def pmf_array(self, upto: int) -> np.ndarray:
        t = self._table
        if upto < t.size:
            return t[: upto + 1].copy()
        extra = [self._log_pmf(x) for x in range(t.size, upto + 1)]
        return np.concatenate([t, extra])

    def survival(self, x: int) -> float:
        if x <= 0:
            return 1.0
        t = self._table
        if x < t.size:
            return math.fsum(t[x:])
        return math.fsum(self._log_pmf(k) for k in range(x, x + 50))

    def moment_with_bound(self, j: int) -> tuple[float, float]:
        _check_order(j)
        # Touchard polynomial: E[X^j] = sum_k S(j, k) lam^k
        return math.fsum(s * self.lam**k for k, s in enumerate(stirling2_row(j))), 0.0

    def tail_bound(self, eps: float) -> int:
        t = self._table
        # exceed[m] = P(X > m)
        exceed = np.append(np.cumsum(t[::-1])[::-1][1:], 0.0)
        hits = np.flatnonzero(exceed < eps)
        m = int(hits[0])
        if m == t.size - 1:
            m = t.size
            while self.survival(m + 1) >= eps:
                m += 1
                if m > self.truncation_bound:
                    raise NonConvergentError(
                        f"Poisson({self.lam}) tail below {eps} needs more than "
                        f"{self.truncation_bound} support points"
                    )
        return m


@dataclass(frozen=True)
class Geometric(DiscreteDistribution):
    """Geometric law with ``S(x) = q**x`` and pmf ``q**x (1 - q)``."""

    q: float
    truncation_bound: int = DEFAULT_TRUNCATION_BOUND
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"geometric q must lie in (0, 1), got {self.q}")

    def pmf(self, x: int) -> float:
        if x < 0:
            return 0.0
        return self.q**x * (1.0 - self.q)

    def pmf_array(self, upto: int) -> np.ndarray:
        return self.q ** np.arange(upto + 1, dtype=float) * (1.0 - self.q)

    def survival(self, x: int) -> float:
        if x <= 0:
            return 1.0
        return self.q**x

    def survival_array(self, upto: int) -> np.ndarray:
        return self.q ** np.arange(upto + 1, dtype=float)

    def moment_with_bound(self, j: int) -> tuple[float, float]:
        _check_order(j)
        # factorial moments E[(X)_k] = k! r^k with r = q / (1 - q)
        r = self.q / (1.0 - self.q)
        row = stirling2_row(j)
        return math.fsum(s * math.factorial(k) * r**k for k, s in enumerate(row)), 0.0

    def tail_bound(self, eps: float) -> int:
        m = max(0, math.floor(math.log(eps) / math.log(self.q)))
        while self.q ** (m + 1) >= eps:
            m += 1
        while m > 0 and self.q**m < eps:
            m -= 1
        return m


@dataclass(frozen=True, eq=False)
class Explicit(DiscreteDistribution):
    """Finite pmf indexed from 0.

    ``discarded`` is probability mass known to lie beyond the stored support
    (recorded by :func:`truncate`); the stored entries plus ``discarded``
    sum to one.
    """

    probabilities: Sequence[float]
    discarded: float = 0.0
    truncation_bound: int = DEFAULT_TRUNCATION_BOUND
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
    _tail: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("explicit pmf must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("explicit pmf entries must be finite and non-negative")
        if self.discarded < 0:
            raise ValueError("discarded mass must be non-negative")
        total = math.fsum(p) + self.discarded
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValueError(f"explicit pmf sums to {total!r}, not 1")
        if p.size - 1 > self.truncation_bound:
            raise NonConvergentError(
                f"explicit pmf has {p.size} points, above the truncation bound"
            )
        p.flags.writeable = False
        tail = np.cumsum(p[::-1])[::-1]
        tail.flags.writeable = False
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "_tail", tail)

    @property
    def support_max(self) -> int:
        return self.probabilities.size - 1

    @property
    def tail_sums(self) -> np.ndarray:
        """Raw suffix sums ``sum_{y >= x} p(y)``, without forcing ``S(0) = 1``."""
        return self._tail

    def pmf(self, x: int) -> float:
        if 0 <= x <= self.support_max:
            return float(self.probabilities[x])
        return 0.0

    def pmf_array(self, upto: int) -> np.ndarray:
        out = np.zeros(upto + 1)
        k = min(upto, self.support_max) + 1
        out[:k] = self.probabilities[:k]
        return out

    def survival(self, x: int) -> float:
        if x <= 0:
            return 1.0
        if x > self.support_max:
            return 0.0
        return float(self._tail[x])

    def survival_array(self, upto: int) -> np.ndarray:
        out = np.zeros(upto + 1)
        k = min(upto, self.support_max) + 1
        out[:k] = self._tail[:k]
        out[0] = 1.0
        return out

    def moment_with_bound(self, j: int) -> tuple[float, float]:
        _check_order(j)
        x = np.arange(self.probabilities.size, dtype=float)
        value = math.fsum(x**j * self.probabilities)
        return value, self.discarded * float(self.truncation_bound) ** j

    def tail_bound(self, eps: float) -> int:
        beyond = self._tail[1:].tolist() + [0.0]
        for m, t in enumerate(beyond):
            if t + self.discarded < eps:
                return m
        raise NonConvergentError(f"discarded mass {self.discarded} is not below {eps}")

    def __eq__(self, other):
        if not isinstance(other, Explicit):
            return NotImplemented
        return self.discarded == other.discarded and np.array_equal(
            self.probabilities, other.probabilities
        )

    __hash__ = None


def point_mass(x: int = 0) -> Explicit:
    p = [0.0] * (x + 1)
    p[x] = 1.0
    return Explicit(p)


def truncate(dist: DiscreteDistribution, eps: float) -> Explicit:
    """Materialize ``dist`` on ``{0..M}`` with ``M`` minimal such that P(X > M) < eps."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if isinstance(dist, Explicit):
        if dist.discarded < eps:
            return dist
        raise NonConvergentError(
            f"explicit pmf already discards {dist.discarded}, not below {eps}"
        )
    m = dist.tail_bound(eps)
    if m > dist.truncation_bound:
        raise NonConvergentError(
            f"truncation at tail {eps} needs support up to {m}, "
            f"bound is {dist.truncation_bound}"
        )
    p = dist.pmf_array(m)
    return Explicit(
        p,
        discarded=dist.survival(m + 1),
        truncation_bound=dist.truncation_bound,
        tail_tolerance=dist.tail_tolerance,
    )


def forward_difference(f: Callable[[int], float], x: int, j: int) -> float:
    """j-th forward difference of ``f`` at ``x`` via the alternating binomial sum."""
    if j < 0:
        raise ValueError("difference order must be non-negative")
    if j == 0:
        return float(f(x))
    return math.fsum((-1) ** (j - k) * math.comb(j, k) * f(x + k) for k in range(j + 1))


def signed_differences(values: np.ndarray, j: int) -> np.ndarray:
    """``(-1)**j Δ**j`` applied to an array, valid on the first ``len - j`` points."""
    size = values.size - j
    out = np.zeros(size)
    for k in range(j + 1):
        out += (-1) ** k * math.comb(j, k) * values[k : k + size]
    return out


@dataclass(frozen=True)
class Violation:
    order: int
    x: int
    value: float


@dataclass(frozen=True)
class MonotonicityReport:
    order_checked: int
    holds: bool
    first_violation: Optional[Violation] = None
    min_value: float = 0.0


def check_n_monotone(
    dist: DiscreteDistribution,
    n: int,
    x_max: int,
    tol: float = MONOTONE_TOLERANCE,
) -> MonotonicityReport:
    """Check ``(-1)**j Δ**j S(x) >= -tol`` for ``j = 0..n`` and ``x = 0..x_max``."""
    if n < 0 or x_max < 0:
        raise ValueError("n and x_max must be non-negative")
    s = dist.survival_array(x_max + n)
    first = None
    lowest = math.inf
    for j in range(n + 1):
        vals = signed_differences(s, j)[: x_max + 1]
        lowest = min(lowest, float(vals.min()))
        if first is None:
            bad = np.flatnonzero(vals < -tol)
            if bad.size:
                x = int(bad[0])
                first = Violation(order=j, x=x, value=float(vals[x]))
    return MonotonicityReport(
        order_checked=n, holds=first is None, first_violation=first, min_value=lowest
    )
