"""Univariate eigenvalue sequences and their l_tau analytics.

A spectrum is the nonincreasing sequence ``lambda_1 >= lambda_2 >= ... >= 0``
of squared singular values of a univariate compact operator. Five families
are supported; each knows its own tail bound, so power sums can be computed
to a requested absolute tolerance without guessing.
"""

import bisect
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._numerics import power_tail

_MAX_TERMS = 1 << 22


class Spectrum:
    """Base class. Subclasses are frozen dataclasses."""

    family = None

    # -- elementwise access -------------------------------------------------
    def eigenvalue(self, m):
        raise NotImplementedError

    def values(self, M):
        """First ``M`` eigenvalues as a float array."""
        return np.array([self.eigenvalue(m) for m in range(1, M + 1)], dtype=float)

    @property
    def lambda_1(self):
        return self.eigenvalue(1)

    @property
    def lambda_2(self):
        return self.eigenvalue(2)

    @property
    def support(self):
        """Number of indices carrying an eigenvalue (``None`` if infinite)."""
        return None

    # -- asymptotic facts ---------------------------------------------------
    def ell_threshold(self):
        """``inf{tau > 0 : lambda in l_tau}`` (``inf`` if never)."""
        raise NotImplementedError

    def in_ell(self, tau):
        return tau > self.ell_threshold()

    @property
    def decays_fast(self):
        """Whether ``lambda_n in o(ln^{-2(1+alpha)} n)`` for every ``alpha >= 0``."""
        return True

    # -- tail of the tau-th power sum --------------------------------------
    def power_tail(self, tau, M):
        """``(estimate, half_width)`` for ``sum_{m > M} lambda_m**tau``."""
        raise NotImplementedError

    def count_greater(self, x):
        """Analytic guess for ``#{m : lambda_m > x}``; callers fix it up."""
        raise NotImplementedError

    # -- serialization -------------------------------------------------------
    def params(self):
        raise NotImplementedError

    def to_json(self):
        return {"family": self.family, "params": self.params()}


@dataclass(frozen=True)
class Finite(Spectrum):
    """Finitely many eigenvalues; zero beyond the list.

    Unsorted input is sorted descending and ``reordered`` is set.
    """

    values_: tuple
    reordered: bool = field(default=False, compare=False)

    family = "finite"

    def __init__(self, values):
        vals = [float(v) for v in values]
        if any(v < 0 or math.isnan(v) for v in vals):
            raise ValueError("eigenvalues must be nonnegative")
        ordered = sorted(vals, reverse=True)
        object.__setattr__(self, "values_", tuple(ordered))
        object.__setattr__(self, "reordered", ordered != vals)

    def eigenvalue(self, m):
        if m < 1:
            raise ValueError("m must be >= 1")
        return self.values_[m - 1] if m <= len(self.values_) else 0.0

    def values(self, M):
        out = np.zeros(M)
        n = min(M, len(self.values_))
        out[:n] = self.values_[:n]
        return out

    @property
    def support(self):
        return len(self.values_)

    def ell_threshold(self):
        return 0.0

    def power_tail(self, tau, M):
        rest = self.values_[M:]
        return math.fsum(v**tau for v in rest if v > 0), 0.0

    def count_greater(self, x):
        neg = [-v for v in self.values_]
        return bisect.bisect_left(neg, -x)

    def params(self):
        return {"values": list(self.values_)}


@dataclass(frozen=True)
class PowerLaw(Spectrum):
    """``lambda_m = c * m**(-beta)``."""

    c: float
    beta: float

    family = "power_law"

    def __post_init__(self):
        if self.c <= 0 or self.beta <= 0:
            raise ValueError("PowerLaw needs c > 0 and beta > 0")

    def eigenvalue(self, m):
        return self.c * float(m) ** (-self.beta)

    def values(self, M):
        return self.c * np.arange(1, M + 1, dtype=float) ** (-self.beta)

    def ell_threshold(self):
        return 1.0 / self.beta

    def power_tail(self, tau, M):
        est, err = power_tail(self.beta * tau, M)
        scale = self.c**tau
        return scale * est, scale * err

    def count_greater(self, x):
        r = (self.c / x) ** (1.0 / self.beta)
        return max(0, math.ceil(r) - 1) if math.isfinite(r) else math.inf

    def params(self):
        return {"c": self.c, "beta": self.beta}


@dataclass(frozen=True)
class Geometric(Spectrum):
    """``lambda_m = c * q**(m-1)`` with ``0 < q < 1``."""

    c: float
    q: float

    family = "geometric"

    def __post_init__(self):
        if self.c <= 0 or not 0 < self.q < 1:
            raise ValueError("Geometric needs c > 0 and 0 < q < 1")

    def eigenvalue(self, m):
        return self.c * self.q ** (m - 1)

    def values(self, M):
        return self.c * self.q ** np.arange(M, dtype=float)

    def ell_threshold(self):
        return 0.0

    def power_tail(self, tau, M):
        qt = self.q**tau
        return self.c**tau * qt**M / (1.0 - qt), 0.0

    def count_greater(self, x):
        if x >= self.c:
            return 0
        return math.ceil(math.log(x / self.c) / math.log(self.q))

    def params(self):
        return {"c": self.c, "q": self.q}


@dataclass(frozen=True)
class LogDecay(Spectrum):
    """``lambda_1 = c`` and ``lambda_{m+1} = c / log2(m+1)``.

    The base-2 logarithm keeps the sequence nonincreasing with
    ``lambda_1 = lambda_2 = c``. The sequence lies in no ``l_tau``.
    """

    c: float = 1.0

    family = "log_decay"

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("LogDecay needs c > 0")

    def eigenvalue(self, m):
        if m < 1:
            raise ValueError("m must be >= 1")
        return self.c if m == 1 else self.c / math.log2(m)

    def values(self, M):
        out = np.empty(M)
        out[0] = self.c
        if M > 1:
            out[1:] = self.c / np.log2(np.arange(2, M + 1, dtype=float))
        return out

    def ell_threshold(self):
        return math.inf

    @property
    def decays_fast(self):
        return False

    def power_tail(self, tau, M):
        return math.inf, 0.0

    def count_greater(self, x):
        if x >= self.c:
            return 0
        e = self.c / x
        if e > 60:
            return math.inf
        return max(1, math.ceil(2.0**e) - 1)

    def params(self):
        return {"c": self.c}


@dataclass(frozen=True)
class Sobolev(Spectrum):
    """``lambda_m = gamma / (gamma + pi**2 (m-1)**2)``, so ``lambda_1 = 1``."""

    gamma: float

    family = "sobolev"

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("Sobolev needs gamma > 0")

    def eigenvalue(self, m):
        if m < 1:
            raise ValueError("m must be >= 1")
        return self.gamma / (self.gamma + math.pi**2 * (m - 1) ** 2)

    def values(self, M):
        j = np.arange(M, dtype=float)
        return self.gamma / (self.gamma + math.pi**2 * j**2)

    def ell_threshold(self):
        return 0.5

    def power_tail(self, tau, M):
        # j = m - 1 >= M;  term = g^tau (j^2 + g)^-tau,  g = gamma / pi^2
        if 2 * tau <= 1:
            return math.inf, 0.0
        g = self.gamma / math.pi**2
        t1, e1 = power_tail(2 * tau, M)
        upper = g**tau * (M ** (-2 * tau) + t1)
        t2, e2 = power_tail(2 * tau + 2, M)
        corr = g ** (tau + 1) * tau * (M ** (-2 * tau - 2) + t2)
        return upper - 0.5 * corr, 0.5 * corr + g**tau * e1 + g ** (tau + 1) * tau * e2

    def count_greater(self, x):
        if x >= 1.0:
            return 0
        r = math.sqrt(self.gamma * (1.0 / x - 1.0)) / math.pi
        return math.ceil(r) if math.isfinite(r) else math.inf

    def params(self):
        return {"gamma": self.gamma}


_FAMILIES = {
    "finite": lambda p: Finite(p["values"]),
    "power_law": lambda p: PowerLaw(float(p["c"]), float(p["beta"])),
    "geometric": lambda p: Geometric(float(p["c"]), float(p["q"])),
    "log_decay": lambda p: LogDecay(float(p.get("c", 1.0))),
    "sobolev": lambda p: Sobolev(float(p["gamma"])),
}
_ALIASES = {"powerlaw": "power_law", "logdecay": "log_decay"}


def spectrum_from_json(obj):
    """Build a spectrum from ``{"family": ..., "params": {...}}``."""
    try:
        name = str(obj["family"]).lower().replace("-", "_")
        name = _ALIASES.get(name, name)
        return _FAMILIES[name](obj.get("params", {}))
    except KeyError as exc:
        raise ValueError(f"malformed spectrum description: {obj!r}") from exc


def eigenvalue(spec, m):
    """``lambda_m`` of ``spec`` (1-based)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return spec.eigenvalue(m)


def ell_tau_member(spec, tau):
    """Analytic decision whether ``sum_m lambda_m**tau`` converges."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    return spec.in_ell(tau)


def power_sum(spec, tau, tol=1e-12):
    """``sum_m lambda_m**tau`` to absolute error ``tol`` (``inf`` if divergent)."""
    if tau <= 0 or tol <= 0:
        raise ValueError("tau and tol must be positive")
    if not spec.in_ell(tau):
        return math.inf
    if spec.support is not None:
        return math.fsum(v**tau for v in spec.values(spec.support) if v > 0)
    M = 64
    while True:
        head = math.fsum((spec.values(M) ** tau).tolist())
        est, hw = spec.power_tail(tau, M)
        if hw <= 0.5 * tol or M >= _MAX_TERMS:
            if hw > 0.5 * tol:
                warnings.warn(
                    f"power sum tolerance {tol:g} not reached (tail half-width {hw:.3g})",
                    RuntimeWarning,
                )
            return head + est
        M *= 4


def ell_tau_norm(spec, tau, tol=1e-12):
    """``(sum_m lambda_m**tau)**(1/tau)``; ``math.inf`` when not in ``l_tau``.

    ``tol`` bounds the absolute error of the inner power sum.
    """
    s = power_sum(spec, tau, tol)
    return math.inf if math.isinf(s) else s ** (1.0 / tau)


def spt_exponent(spec, tol=1e-10):
    """``p* = inf{2 tau : sum_m lambda_m**tau <= 1}`` or ``None`` if the set is empty.

    Bisection on ``tau`` to absolute tolerance ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lam1, lam2 = spec.lambda_1, spec.lambda_2
    if lam1 > 1 or (lam1 == 1 and lam2 > 0):
        return None
    if lam2 == 0:
        # single eigenvalue <= 1: every tau > 0 qualifies
        return 0.0

    def excess(tau):
        return power_sum(spec, tau, 1e-14) - 1.0

    lo, hi = 2.0**-8, 64.0
    if excess(lo) <= 0:
        lo, hi = 0.0, lo
    else:
        while excess(hi) > 0:
            lo = hi
            hi *= 2
            if hi > 2.0**20:
                return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return lo + hi  # 2 * midpoint
