"""Weighted Sobolev kernels, their eigenbasis, cubature errors and cube moments.

Two reproducing kernels on ``[0, 1]`` are supported, both tensorized over
coordinates with one weight ``gamma`` each:

* anchored at 0: ``1 + gamma * min(x, y)``;
* unanchored: ``sqrt(g) / sinh(sqrt(g)) * cosh(sqrt(g) (1 - max)) * cosh(sqrt(g) min)``.

The unanchored space has the cosine eigenbasis ``e_i`` with
``||e_i||_{L2}^2 = gamma / (gamma + pi^2 (i-1)^2)``.
"""

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path

import numpy as np

from ._numerics import zeta
from .errors import InvalidTau, NegativeVariance, OddPExact, OutOfDomain
from .tensor_enum import SymmetrySpec, _best_first


class KernelKind(str, Enum):
    ANCHORED_MIN = "anchored_min"
    UNANCHORED_COSH_SINH = "unanchored_cosh_sinh"


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind
    gammas: tuple

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        g = tuple(float(x) for x in np.atleast_1d(self.gammas))
        if not g or any(not x > 0 for x in g):
            raise ValueError("kernel weights must be positive")
        object.__setattr__(self, "gammas", g)

    @property
    def d(self):
        return len(self.gammas)

    def to_json(self):
        return {"kind": self.kind.value, "gammas": list(self.gammas)}


def _k1(kind, g, x, y):
    lo, hi = np.minimum(x, y), np.maximum(x, y)
    if kind is KernelKind.ANCHORED_MIN:
        return 1.0 + g * lo
    r = math.sqrt(g)
    return r / math.sinh(r) * np.cosh(r * (1.0 - hi)) * np.cosh(r * lo)


def _as_point(x, d):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape[-1] != d:
        raise ValueError(f"point of dimension {x.shape[-1]} for d={d}")
    if np.any((x < 0) | (x > 1)) or np.any(np.isnan(x)):
        raise OutOfDomain("points must lie in [0, 1]^d")
    return x


def kernel_eval(kernel, x, y):
    """``K_d(x, y)``: product of the univariate kernels."""
    x, y = _as_point(x, kernel.d), _as_point(y, kernel.d)
    out = 1.0
    for k, g in enumerate(kernel.gammas):
        out = out * _k1(kernel.kind, g, x[..., k], y[..., k])
    return float(out) if np.ndim(out) == 0 else out


def sobolev_basis(gamma, i, x):
    """``e_{gamma,i}(x)``: 1 for ``i = 1``, else a scaled ``cos(pi (i-1) x)``."""
    if i < 1:
        raise ValueError("i must be >= 1")
    x = np.asarray(x, dtype=float)
    if i == 1:
        out = np.ones_like(x)
    else:
        j = i - 1
        out = np.cos(math.pi * j * x) * math.sqrt(2 * gamma / (gamma + math.pi**2 * j * j))
    return float(out) if out.ndim == 0 else out


def sobolev_basis_d(gammas, index, x):
    """Tensor product basis function at ``x`` in ``[0,1]^d``."""
    x = np.asarray(x, dtype=float)
    out = 1.0
    for k, (g, i) in enumerate(zip(gammas, index)):
        out = out * sobolev_basis(g, i, x[..., k])
    return out


@dataclass(frozen=True)
class CubatureRule:
    """``A f = sum_i a_i f(x_i)``."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if pts.ndim == 1:
            pts = pts.reshape(len(w), -1) if len(w) else pts.reshape(0, 0)
        if len(pts) != len(w):
            raise ValueError("points and weights differ in length")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def empty(cls, d):
        return cls(np.zeros((0, d)), np.zeros(0))

    @classmethod
    def from_csv(cls, source):
        """One point per row, last column the weight; a non-numeric first row is a header."""
        text = Path(source).read_text() if not isinstance(source, io.TextIOBase) else source.read()
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if rows:
            try:
                [float(c) for c in rows[0]]
            except ValueError:
                rows = rows[1:]
        data = np.array([[float(c) for c in r] for r in rows], dtype=float)
        if data.size == 0:
            raise ValueError("cubature file holds no rows")
        return cls(data[:, :-1], data[:, -1])

    @property
    def n(self):
        return len(self.weights)


# -- integrals of the univariate kernels -----------------------------------------


def _gl(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _converge(fn, tol, n0=64, n_max=1 << 12):
    """Evaluate ``fn(nodes, weights)`` with doubling Gauss-Legendre rules."""
    n, prev = n0, None
    while True:
        val = fn(*_gl(n))
        if prev is not None:
            diff = float(np.max(np.abs(val - prev)))
            if diff < tol or 2 * n > n_max:
                return val
        prev, n = val, 2 * n


def kernel_mean(kind, g, x, tol=1e-13, method="auto"):
    """``int_0^1 K_1(t, x) dt`` for an array of ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    kind = KernelKind(kind)
    if kind is KernelKind.ANCHORED_MIN and method != "quadrature":
        return 1.0 + g * (x - 0.5 * x * x)

    def fn(u, w):
        # split at the kink t = x
        left = _k1(kind, g, x[:, None] * u[None, :], x[:, None]) @ w * x
        t = x[:, None] + (1.0 - x[:, None]) * u[None, :]
        right = _k1(kind, g, t, x[:, None]) @ w * (1.0 - x)
        return left + right

    return _converge(fn, tol)


def kernel_double_mean(kind, g, tol=1e-13, method="auto"):
    """``int_0^1 int_0^1 K_1(t, x) dt dx``."""
    kind = KernelKind(kind)
    if kind is KernelKind.ANCHORED_MIN and method != "quadrature":
        return 1.0 + g / 3.0

    def fn(u, w):
        # symmetric kernel: twice the triangle t < x, mapped by t = x u
        x = u[:, None]
        vals = _k1(kind, g, x * u[None, :], x) * x
        return np.array(2.0 * (w @ vals @ w))

    return float(_converge(fn, tol))


def qmc_worst_case_error(kernel, rule, quad_tol=1e-12, method="auto"):
    """Worst-case integration error of ``rule`` in the kernel's space.

    ``method="quadrature"`` forces numerical integration for the anchored
    kernel too (the unanchored kernel always uses quadrature).
    """
    if not quad_tol > 0:
        raise ValueError("quad_tol must be positive")
    d = kernel.d
    pts = rule.points
    if rule.n and pts.shape[1] != d:
        raise ValueError("rule dimension does not match the kernel")
    if rule.n:
        _as_point(pts, d)
    a = rule.weights
    tol = 0.1 * quad_tol
    double = 1.0
    single = np.ones(rule.n)
    gram = np.ones((rule.n, rule.n))
    for k, g in enumerate(kernel.gammas):
        double *= kernel_double_mean(kernel.kind, g, tol, method)
        if rule.n:
            xk = pts[:, k]
            single *= kernel_mean(kernel.kind, g, xk, tol, method)
            gram *= _k1(kernel.kind, g, xk[:, None], xk[None, :])
    sq = double - 2.0 * float(a @ single) + float(a @ gram @ a)
    if sq < -10 * quad_tol:
        raise NegativeVariance(f"squared error {sq:.3g} is negative")
    return math.sqrt(max(sq, 0.0))


# -- L_infinity approximation -------------------------------------------------------


def _check_tau(tau):
    if not 0.5 < tau < 1:
        raise InvalidTau(f"tau={tau} outside (1/2, 1)")


def linfty_tail_bound(gammas, n, tau):
    """``a_tau exp(b_tau sum gamma^tau) n^(-(1-tau)/(2 tau))``.

    For ``n = 0`` returns ``sup_x K_d(x, x)^(1/2)`` of the unanchored kernel,
    the norm of the embedding into ``L_infinity``.
    """
    _check_tau(tau)
    if n < 0:
        raise ValueError("n must be nonnegative")
    g = np.asarray(gammas, dtype=float)
    if n == 0:
        r = np.sqrt(g)
        return float(np.prod(np.sqrt(r / np.tanh(r))))
    a_tau = math.sqrt(tau / (1 - tau))
    b_tau = (2 / math.pi**2) ** tau * zeta(2 * tau) / (2 * tau)
    return a_tau * math.exp(b_tau * math.fsum(g**tau)) * n ** (-(1 - tau) / (2 * tau))


class _RankTable:
    """``ln w(gamma, index(rank))`` with ranks ordered by nonincreasing weight."""

    def __init__(self, gamma):
        self.gamma = gamma
        # indices i >= 2 with 2 gamma / (gamma + pi^2 (i-1)^2) > 1 precede i = 1
        c = 0
        while 2 * gamma > gamma + math.pi**2 * (c + 1) ** 2:
            c += 1
        self.c = c

    def index(self, rank):
        if rank <= self.c:
            return rank + 1
        return 1 if rank == self.c + 1 else rank

    def weight(self, i):
        if i == 1:
            return 1.0
        return 2 * self.gamma / (self.gamma + math.pi**2 * (i - 1) ** 2)

    def __getitem__(self, rank):
        return math.log(self.weight(self.index(rank)))


def ordered_basis_sq_norms(gammas, k):
    """The ``k`` largest ``prod_l ||e_{gamma_l, m_l}^2||_{L1}``, nonincreasing."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    tables = [_RankTable(float(g)) for g in gammas]
    out = []
    if k == 0:
        return out
    for ranks, lv in _best_first(SymmetrySpec.entire(len(tables)), tables):
        idx = tuple(t.index(r) for t, r in zip(tables, ranks))
        out.append((idx, math.exp(lv)))
        if len(out) >= k:
            break
    return out


# -- cube slicing moments -------------------------------------------------------------


class MomentMode(str, Enum):
    EXACT_EVEN = "exact"
    MONTE_CARLO = "montecarlo"


def cube_moment_exact(k, N):
    """``E |z_1 + ... + z_k|^(2N)`` for iid uniform ``z`` on ``[-1/2, 1/2]`` as a Fraction.

    Sums ``(2N)! / prod (2 j_m)! * prod E z^(2 j_m)`` over compositions
    ``j_1 + ... + j_k = N``, organised as a truncated polynomial power.
    """
    if k < 1 or N < 0:
        raise ValueError("need k >= 1 and N >= 0")
    # E z^(2j) / (2j)! = 1 / (4^j (2j+1)!)
    base = [Fraction(1, 4**j * math.factorial(2 * j + 1)) for j in range(N + 1)]
    acc = [Fraction(1)] + [Fraction(0)] * N
    for _ in range(k):
        acc = [sum(acc[i] * base[n - i] for i in range(n + 1)) for n in range(N + 1)]
    return acc[N] * math.factorial(2 * N)


def cube_moment(k, p, mode=MomentMode.EXACT_EVEN, samples=10**6, seed=0):
    """``E |z_1 + ... + z_k|^p`` for iid uniform ``z`` on ``[-1/2, 1/2]``.

    Exact mode requires an even integer ``p`` and returns a float. Monte
    Carlo mode returns ``(estimate, standard_error)`` from
    ``numpy.random.default_rng(seed)``.
    """
    if k < 1 or p < 1:
        raise ValueError("need k >= 1 and p >= 1")
    mode = MomentMode(mode)
    if mode is MomentMode.EXACT_EVEN:
        if p != int(p) or int(p) % 2:
            raise OddPExact(f"exact moments need an even integer p, got {p}")
        return float(cube_moment_exact(k, int(p) // 2))
    rng = np.random.default_rng(seed)
    total = total_sq = 0.0
    done = 0
    chunk = 1 << 17
    while done < samples:
        m = min(chunk, samples - done)
        v = np.abs((rng.random((m, k)) - 0.5).sum(axis=1)) ** p
        total += float(v.sum())
        total_sq += float((v * v).sum())
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / max(samples - 1, 1)
    return mean, math.sqrt(var / samples)


def cube_moment_lower_bound(k, p):
    """``k^(p/2) / ((2 sqrt 2)^p (1 + p))``."""
    return k ** (p / 2) / ((2 * math.sqrt(2)) ** p * (1 + p))


def lp_block_size(p, l):
    """Smallest block size known to suffice: ``ceil(8 (p+1)^(2/p) / l^2)``, improved for ``p >= 2``."""
    if p < 1 or not l > 0:
        raise ValueError("need p >= 1 and l > 0")
    best = math.ceil(8 * (p + 1) ** (2 / p) / l**2)
    if p >= 2:
        improved = math.ceil((12 if p < 4 else 4 * math.sqrt(5)) / l**2)
        best = min(best, improved)
    return best
