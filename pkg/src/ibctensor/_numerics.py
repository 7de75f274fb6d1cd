"""Small numerical kernels shared by several modules."""

import math

import numpy as np

# B_2, B_4, ..., B_12
_BERNOULLI_EVEN = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)


def _rising(s, j):
    out = 1.0
    for i in range(j):
        out *= s + i
    return out


def power_tail(s, M, terms=4):
    """Euler-Maclaurin estimate of ``sum_{m > M} m**(-s)`` for ``s > 1``.

    Returns ``(estimate, error_bound)``. For the completely monotone summand
    the remainder is bounded by the first omitted correction term; the bound
    returned is twice that.
    """
    if s <= 1:
        return math.inf, 0.0
    if M < 1:
        raise ValueError("M must be >= 1")
    M = float(M)
    parts = [M ** (1.0 - s) / (s - 1.0), -0.5 * M ** (-s)]
    for k in range(1, terms + 1):
        b = _BERNOULLI_EVEN[k - 1]
        parts.append(b / math.factorial(2 * k) * _rising(s, 2 * k - 1) * M ** (-s - 2 * k + 1))
    k = terms + 1
    b = _BERNOULLI_EVEN[k - 1]
    err = abs(b / math.factorial(2 * k) * _rising(s, 2 * k - 1) * M ** (-s - 2 * k + 1))
    return math.fsum(parts), 2.0 * err


def zeta(s, M=64):
    """Riemann zeta for real ``s > 1`` by partial sum plus Euler-Maclaurin tail."""
    if s <= 1:
        return math.inf
    head = math.fsum((np.arange(1, M + 1, dtype=float) ** (-s)).tolist())
    tail, _ = power_tail(s, M)
    return head + tail


def gauss_legendre(f, a, b, tol, n0=64, max_nodes=1 << 14):
    """Integrate a vectorized ``f`` over ``[a, b]``.

    Starts from ``n0`` nodes and doubles until two successive results differ by
    less than ``tol``. Returns ``(value, last_difference)``.
    """
    if b <= a:
        return 0.0, 0.0
    n = n0
    prev = None
    while True:
        x, w = np.polynomial.legendre.leggauss(n)
        half = 0.5 * (b - a)
        val = half * float(np.dot(w, f(half * x + 0.5 * (a + b))))
        if prev is not None:
            diff = abs(val - prev)
            if diff < tol or 2 * n > max_nodes:
                return val, diff
        prev = val
        n *= 2
