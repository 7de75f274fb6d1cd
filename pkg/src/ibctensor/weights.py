"""Product weights for weighted approximation problems.

Weights are given by generators ``C_gamma >= gamma_{d,1} >= ... >= gamma_{d,d} > 0``.
Three families: constant weights, ``gamma_{d,j} = j**-beta`` and explicit
tables. The module computes the sum exponents, the greedy block partition
behind the ``2**s`` complexity lower bound, and an explicit upper bound.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ._numerics import zeta
from .errors import InvalidTau, Undecidable

TAU_GRID = tuple(np.linspace(0.55, 0.95, 15))

# (a, b, t) embedding constants
PRESET_SMOOTH = (1.0, 0.5, 1.0)
PRESET_SOBOLEV = (1.0, 0.0, 1.0)


@dataclass(frozen=True)
class Uniform:
    """``gamma_{d,j} = g`` for all ``j <= d``."""

    g: float
    C_gamma: float = None

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("g must be positive")
        if self.C_gamma is None:
            object.__setattr__(self, "C_gamma", self.g)
        elif self.g > self.C_gamma:
            raise ValueError("g exceeds C_gamma")

    def weights(self, d):
        return np.full(d, float(self.g))

    def to_json(self):
        return {"family": "uniform", "g": self.g, "C_gamma": self.C_gamma}


@dataclass(frozen=True)
class PowerGen:
    """``gamma_{d,j} = j**(-beta)``, independent of ``d``."""

    beta: float
    C_gamma: float = 1.0

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if self.C_gamma < 1:
            raise ValueError("C_gamma must bound gamma_1 = 1")

    def weights(self, d):
        return np.arange(1, d + 1, dtype=float) ** (-self.beta)

    def to_json(self):
        return {"family": "power", "beta": self.beta, "C_gamma": self.C_gamma}


@dataclass(frozen=True)
class Explicit:
    """Weights from a table.

    ``table`` is either one nonincreasing sequence (used as a prefix for
    every ``d``) or a list of rows, row ``d - 1`` holding ``d`` weights.
    """

    table: tuple
    C_gamma: float = None

    def __post_init__(self):
        nested = len(self.table) > 0 and isinstance(self.table[0], (list, tuple, np.ndarray))
        rows = tuple(tuple(float(x) for x in r) for r in self.table) if nested else (
            tuple(float(x) for x in self.table),
        )
        if nested and any(len(r) != i + 1 for i, r in enumerate(rows)):
            raise ValueError("row d must hold exactly d weights")
        top = 0.0
        for r in rows:
            if any(x <= 0 for x in r):
                raise ValueError("weights must be positive")
            if any(a < b for a, b in zip(r, r[1:])):
                raise ValueError("weights must be nonincreasing in j")
            top = max(top, r[0] if r else 0.0)
        c = top if self.C_gamma is None else float(self.C_gamma)
        if top > c:
            raise ValueError("a weight exceeds C_gamma")
        object.__setattr__(self, "table", rows)
        object.__setattr__(self, "C_gamma", c)
        object.__setattr__(self, "_nested", nested)

    def weights(self, d):
        if self._nested:
            if d > len(self.table):
                raise ValueError(f"no weights tabulated for d={d}")
            return np.array(self.table[d - 1])
        if d > len(self.table[0]):
            raise ValueError(f"only {len(self.table[0])} weights tabulated")
        return np.array(self.table[0][:d])

    def to_json(self):
        table = [list(r) for r in self.table] if self._nested else list(self.table[0])
        return {"family": "explicit", "table": table, "C_gamma": self.C_gamma}


def weights_from_json(obj):
    fam = str(obj["family"]).lower()
    if fam == "uniform":
        return Uniform(float(obj["g"]), obj.get("C_gamma"))
    if fam in ("power", "powergen", "power_gen"):
        return PowerGen(float(obj["beta"]), float(obj.get("C_gamma", 1.0)))
    if fam == "explicit":
        return Explicit(obj["table"], obj.get("C_gamma"))
    raise ValueError(f"unknown weight family {fam!r}")


def weights_csv(weights, d):
    """CSV text with header ``j,gamma`` for dimension ``d``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "gamma"])
    for j, g in enumerate(weights.weights(d), start=1):
        w.writerow([j, f"{g:.12g}"])
    return buf.getvalue()


def sum_exponents(weights):
    """``(p(gamma), q(gamma))``; ``(None, None)`` for explicit tables."""
    if isinstance(weights, Explicit):
        return None, None
    if isinstance(weights, PowerGen) and weights.beta > 0:
        return 1.0 / weights.beta, 1.0 / weights.beta
    return math.inf, math.inf


def partition_blocks(weights, d):
    """Greedy split of ``1..d`` into consecutive blocks of weight at least 2.

    Returns ``(s, blocks)`` with ``blocks`` a list of 1-based inclusive
    ``(first, last)`` ranges; a trailing incomplete block is not reported.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    g = weights.weights(d)
    blocks = []
    start, acc = 1, 0.0
    for j, w in enumerate(g, start=1):
        acc += w
        if acc >= 2:
            blocks.append((start, j))
            start, acc = j + 1, 0.0
    return len(blocks), blocks


def lower_bound_complexity(weights, d):
    """``2**s`` from the block partition."""
    s, _ = partition_blocks(weights, d)
    return 2**s


def smooth_lower_bound(weights, d):
    """``2**(sum_j gamma_{d,j} / (2 + C_gamma)) / 2``."""
    total = math.fsum(weights.weights(d))
    return 0.5 * 2.0 ** (total / (2.0 + weights.C_gamma))


def b_tau(tau):
    return (2 / math.pi**2) ** tau * zeta(2 * tau) / (2 * tau)


def upper_bound_complexity(weights, d, eps, tau, t=1.0, a=1.0, b=0.5):
    """Information complexity upper bound for error ``eps``.

    ``ceil((a a_tau exp(b sum gamma^t + b_tau sum gamma^tau) / eps) ** (2 tau / (1 - tau)))``
    with ``a_tau = sqrt(tau / (1 - tau))``. Returns ``math.inf`` when the
    value exceeds the float range.
    """
    if not 0.5 < tau < 1:
        raise InvalidTau(f"tau={tau} outside (1/2, 1)")
    if not eps > 0 or not 0 < t <= 1 or not a > 0 or b < 0:
        raise ValueError("need eps > 0, t in (0,1], a > 0, b >= 0")
    g = weights.weights(d)
    expo = b * math.fsum(g**t) + b_tau(tau) * math.fsum(g**tau)
    log_base = math.log(a) + 0.5 * math.log(tau / (1 - tau)) + expo - math.log(eps)
    log_val = 2 * tau / (1 - tau) * log_base
    if log_val > 700:
        return math.inf
    v = math.exp(log_val)
    r = round(v)
    if abs(v - r) <= 1e-9 * max(1.0, v):
        v = r  # keep float noise from bumping an exact integer up by one
    return max(1, math.ceil(v))


def upper_bound_grid_min(weights, d, eps, t=1.0, a=1.0, b=0.5, taus=TAU_GRID):
    """``(bound, tau)`` minimizing :func:`upper_bound_complexity` over ``taus``."""
    best = None
    for tau in taus:
        v = upper_bound_complexity(weights, d, eps, float(tau), t, a, b)
        if best is None or v < best[0]:
            best = (v, float(tau))
    return best


def wt_criterion(weights, kappa):
    """Whether ``(1/d) sum_j gamma_{d,j}**kappa -> 0``."""
    if not 0 < kappa <= 1:
        raise ValueError("kappa must lie in (0, 1]")
    if isinstance(weights, Explicit):
        raise Undecidable("limits of explicit weight tables are not decidable")
    if isinstance(weights, PowerGen):
        return weights.beta > 0
    return False
