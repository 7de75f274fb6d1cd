"""Minimal errors, information complexity and average-case tails."""

import math
import warnings

import numpy as np

from .errors import DegenerateProblem, NotTraceClass
from .tensor_enum import (
    LOG_TOL,
    MAX_NODES,
    Criterion,
    Kind,
    _count_log_above,
    _LogTable,
    _max_log,
    basis_normalization,
    enumerate_top,
)

_CHUNK = 1 << 16
_MAX_HEAD = 1 << 20


def _log_initial_sq(problem):
    table = _LogTable(problem.spectrum)
    return math.log(problem.scaling) + _max_log(problem.symmetry, table)


def initial_error(problem):
    """Norm of the solution operator: square root of the largest eigenvalue over ``nabla_d``."""
    lv = _log_initial_sq(problem)
    return 0.0 if lv == -math.inf else math.exp(0.5 * lv)


def minimal_error(problem, n):
    """``e(n, d) = sqrt(lambda_{d, n+1})`` over ``nabla_d``.

    Zero if fewer than ``n + 1`` positive eigenvalues exist. Under the
    normalized criterion the result is divided by the initial error.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    norm = problem.criterion is Criterion.NORMALIZED
    if norm:
        init = _log_initial_sq(problem)
        if init == -math.inf:
            raise DegenerateProblem("initial error is zero")
    items = enumerate_top(problem, n + 1)
    if len(items) < n + 1 or items[-1].value == 0:
        return 0.0
    lv = items[-1].logvalue
    if norm:
        lv -= init
    return math.exp(0.5 * lv)


def info_complexity(problem, eps, max_nodes=MAX_NODES):
    """``n(eps, d)``: number of eigenvalues over ``nabla_d`` exceeding ``eps**2``.

    Under the normalized criterion eigenvalues are divided by the largest
    one first; this runs on the ratio sequence ``lambda_m / lambda_1`` so the
    scaling drops out exactly. Raises :class:`ComplexityOverflow` when the
    search exceeds ``max_nodes`` nodes.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if problem.criterion is Criterion.ABSOLUTE:
        table = _LogTable(problem.spectrum)
        bound = 2 * math.log(eps) - math.log(problem.scaling) + LOG_TOL
        return _count_log_above(problem.symmetry, table, bound, max_nodes)
    lam1 = problem.spectrum.lambda_1
    if lam1 <= 0:
        raise DegenerateProblem("initial error is zero")
    table = _LogTable(problem.spectrum, shift=math.log(lam1))
    top = _max_log(problem.symmetry, table)
    if top == -math.inf:
        raise DegenerateProblem("initial error is zero")
    bound = 2 * math.log(eps) + top + LOG_TOL
    return _count_log_above(problem.symmetry, table, bound, max_nodes)


# -- trace over nabla_d ---------------------------------------------------------


def _poly_mul(a, b, deg):
    """Row-wise truncated product of coefficient arrays of shape (n, deg+1)."""
    out = np.zeros_like(a)
    for i in range(deg + 1):
        out[:, i:] += a[:, i : i + 1] * b[:, : deg + 1 - i]
    return out


def _head_coeffs(vals, deg, kind):
    """Coefficients 0..deg of ``prod_m (1 + v t)`` (antisym) or ``prod_m 1/(1 - v t)`` (sym)."""
    total = np.zeros(deg + 1)
    total[0] = 1.0
    for start in range(0, len(vals), _CHUNK):
        v = vals[start : start + _CHUNK]
        if kind is Kind.ANTISYM:
            rows = np.zeros((len(v), deg + 1))
            rows[:, 0] = 1.0
            if deg >= 1:
                rows[:, 1] = v
        else:
            rows = v[:, None] ** np.arange(deg + 1)[None, :]
        while len(rows) > 1:
            if len(rows) % 2:
                pad = np.zeros((1, deg + 1))
                pad[0, 0] = 1.0
                rows = np.vstack([rows, pad])
            rows = _poly_mul(rows[0::2], rows[1::2], deg)
        total = _poly_mul(total[None, :], rows, deg)[0]
    return total


def _factor_interval(head, deg, kind, tail, tail_hw):
    """Enclosure of ``h_deg`` or ``e_deg`` over head plus a tail of sum ``tail``."""
    lo = head[deg] + head[deg - 1] * max(tail - tail_hw, 0.0)
    hi = head[deg] + head[deg - 1] * (tail + tail_hw)
    T = tail + tail_hw
    for j in range(2, deg + 1):
        bound = T**j if kind is Kind.SYM else T**j / math.factorial(j)
        hi += head[deg - j] * bound
    return lo, hi


def trace_bounds(problem, tol=1e-12):
    """``(estimate, half_width)`` for the sum of all eigenvalues over ``nabla_d``.

    The sum factorizes into one ``||lambda||_1`` per free coordinate, a
    complete homogeneous symmetric polynomial per symmetric group and an
    elementary symmetric polynomial per antisymmetric group. Each factor is
    computed exactly on a head of the sequence and enclosed on the tail.
    If ``tol`` cannot be met the widened half-width is returned together with
    a ``RuntimeWarning``.
    """
    spec = problem.spectrum
    if not spec.in_ell(1.0):
        raise NotTraceClass("sum of eigenvalues diverges")
    sym = problem.symmetry
    factors = [(1, Kind.SYM)] * len(sym.free_coords)
    factors += [(len(c), k) for c, k in sym.groups]
    M = spec.support if spec.support is not None else 1024
    while True:
        vals = spec.values(M)
        tail, tail_hw = (0.0, 0.0) if spec.support is not None else spec.power_tail(1.0, M)
        lo = hi = problem.scaling
        cache = {}
        for deg, kind in factors:
            key = (deg, kind)
            if key not in cache:
                head = _head_coeffs(vals, deg, kind)
                cache[key] = _factor_interval(head, deg, kind, tail, tail_hw)
            flo, fhi = cache[key]
            lo *= flo
            hi *= fhi
        est, hw = 0.5 * (lo + hi), 0.5 * (hi - lo)
        if hw <= 0.5 * tol or spec.support is not None:
            return est, hw
        if M >= _MAX_HEAD:
            warnings.warn(
                f"trace tolerance {tol:g} not reached; half-width {hw:.3g}",
                RuntimeWarning,
            )
            return est, hw
        M *= 4


def avg_tail_error(problem, n, tol=1e-12):
    """``sqrt(sum_{i > n} lambda_{d,i})`` over ``nabla_d``; ``tol`` bounds the error of the sum."""
    if n < 0 or not tol > 0:
        raise ValueError("need n >= 0 and tol > 0")
    trace, _ = trace_bounds(problem, tol)
    head = math.fsum(item.value for item in enumerate_top(problem, n)) if n else 0.0
    return math.sqrt(max(trace - head, 0.0))


def optimal_algorithm_plan(problem, n):
    """Indices evaluated by the optimal algorithm with their basis normalizations."""
    return [
        (item.index, basis_normalization(problem.symmetry, item.index))
        for item in enumerate_top(problem, n)
    ]


def result_json(problem, key, arg, value, exact):
    """Serializable record ``{d, n|eps, criterion, value, exact}``."""
    return {
        "d": problem.d,
        key: arg,
        "criterion": problem.criterion.value,
        "value": value,
        "exact": bool(exact),
    }
