import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import zeta as sp_zeta

from ibctensor.errors import InvalidTau, OddPExact, OutOfDomain
from ibctensor.sobolev import (
    CubatureRule,
    KernelSpec,
    cube_moment,
    cube_moment_exact,
    cube_moment_lower_bound,
    kernel_double_mean,
    kernel_eval,
    kernel_mean,
    linfty_tail_bound,
    lp_block_size,
    ordered_basis_sq_norms,
    qmc_worst_case_error,
    sobolev_basis,
    sobolev_basis_d,
)

AM, UC = "anchored_min", "unanchored_cosh_sinh"


# -- kernels ------------------------------------------------------------------


def test_kernel_examples():
    assert kernel_eval(KernelSpec(AM, [2.0]), [0.5], [0.25]) == pytest.approx(1.5)
    assert kernel_eval(KernelSpec(UC, [1.0]), [0.0], [0.0]) == pytest.approx(math.cosh(1) / math.sinh(1))


def test_kernel_tensor_structure():
    x, y = [0.3, 0.8], [0.6, 0.1]
    for kind in (AM, UC):
        k2 = kernel_eval(KernelSpec(kind, [1.5, 0.4]), x, y)
        k1a = kernel_eval(KernelSpec(kind, [1.5]), [x[0]], [y[0]])
        k1b = kernel_eval(KernelSpec(kind, [0.4]), [x[1]], [y[1]])
        assert k2 == pytest.approx(k1a * k1b, rel=1e-14)


def test_kernel_out_of_domain():
    with pytest.raises(OutOfDomain):
        kernel_eval(KernelSpec(AM, [1.0]), [1.2], [0.5])


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(0, 1), min_size=3, max_size=3),
    st.lists(st.floats(0, 1), min_size=3, max_size=3),
    st.sampled_from([AM, UC]),
)
def test_kernel_symmetric_positive_diagonal(x, y, kind):
    k = KernelSpec(kind, [0.5, 1.0, 4.0])
    assert kernel_eval(k, x, y) == pytest.approx(kernel_eval(k, y, x), rel=1e-14)
    assert kernel_eval(k, x, x) > 0
    if kind == AM:
        assert kernel_eval(k, x, x) >= 1.0


# -- basis ----------------------------------------------------------------------


def test_basis_examples():
    assert sobolev_basis(3.7, 1, 0.42) == 1.0
    assert sobolev_basis(math.pi**2, 2, 0.0) == pytest.approx(1.0)
    assert sobolev_basis(1.0, 2, 0.5) == pytest.approx(0.0, abs=1e-16)


@pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0])
def test_basis_l2_norm_is_eigenvalue(gamma):
    for i in range(1, 11):
        got, _ = integrate.quad(lambda x: sobolev_basis(gamma, i, x) ** 2, 0, 1, limit=200, epsabs=1e-13)
        assert got == pytest.approx(gamma / (gamma + math.pi**2 * (i - 1) ** 2), abs=1e-10)


@pytest.mark.parametrize("gamma", [0.5, 1.0, 3.0])
def test_kernel_sum_identity(gamma):
    xs = np.linspace(0, 1, 11)
    total = sum(sobolev_basis(gamma, i, xs) ** 2 for i in range(1, 2001))
    diag = np.array([kernel_eval(KernelSpec(UC, [gamma]), [x], [x]) for x in xs])
    np.testing.assert_allclose(total, diag, atol=1e-3)


def test_basis_d_product():
    v = sobolev_basis_d([1.0, 2.0], (2, 3), np.array([0.1, 0.7]))
    assert v == pytest.approx(sobolev_basis(1.0, 2, 0.1) * sobolev_basis(2.0, 3, 0.7))


# -- integrals and QMC error ----------------------------------------------------------


@pytest.mark.parametrize("kind", [AM, UC])
def test_kernel_mean_against_scipy(kind):
    g = 2.5
    xs = np.array([0.0, 0.2, 0.5, 0.93, 1.0])
    got = kernel_mean(kind, g, xs, method="quadrature")
    for x, v in zip(xs, got):
        ref, _ = integrate.quad(
            lambda t: kernel_eval(KernelSpec(kind, [g]), [t], [x]), 0, 1, points=[x], epsabs=1e-14
        )
        assert v == pytest.approx(ref, abs=1e-12)


def test_unanchored_kernel_integrates_to_one():
    # the constant function has norm one, so the representer of the mean is 1
    for g in (0.1, 1.0, 10.0):
        np.testing.assert_allclose(kernel_mean(UC, g, np.linspace(0, 1, 7)), 1.0, atol=1e-12)
        assert kernel_double_mean(UC, g) == pytest.approx(1.0, abs=1e-12)


def test_double_mean_closed_vs_quadrature():
    for g in (0.3, 1.0, 3.0):
        closed = kernel_double_mean(AM, g)
        quad = kernel_double_mean(AM, g, method="quadrature")
        assert closed == pytest.approx(1 + g / 3, abs=1e-15)
        assert quad == pytest.approx(closed, abs=1e-12)


def test_qmc_empty_rule_examples():
    assert qmc_worst_case_error(KernelSpec(AM, [3.0]), CubatureRule.empty(1)) == pytest.approx(math.sqrt(2))
    k2 = KernelSpec(AM, [1.0, 1.0])
    assert qmc_worst_case_error(k2, CubatureRule.empty(2)) == pytest.approx(4 / 3, abs=1e-14)
    assert qmc_worst_case_error(k2, CubatureRule.empty(2), method="quadrature") == pytest.approx(4 / 3, abs=1e-9)


def test_qmc_optimal_single_weight_helps():
    k = KernelSpec(AM, [1.0])
    x = 1.0
    a_opt = (1 + 0.5) / 2  # int K(., 1) = 1 + 1 - 1/2, K(1, 1) = 2
    e0 = qmc_worst_case_error(k, CubatureRule.empty(1))
    e1 = qmc_worst_case_error(k, CubatureRule([[x]], [a_opt]))
    assert e1 <= e0
    assert e1**2 == pytest.approx(4 / 3 - a_opt * 1.5, abs=1e-14)


def test_qmc_matches_brute_double_integral():
    # direct evaluation of the three terms with scipy for a 2-point rule in d = 1
    g = 2.0
    k = KernelSpec(UC, [g])
    pts, w = np.array([0.25, 0.75]), np.array([0.5, 0.5])
    K = lambda s, t: kernel_eval(k, [s], [t])  # noqa: E731
    dbl, _ = integrate.dblquad(lambda t, s: K(s, t), 0, 1, 0, 1, epsabs=1e-12)
    sgl = [integrate.quad(lambda t: K(t, x), 0, 1, points=[x], epsabs=1e-13)[0] for x in pts]
    gram = np.array([[K(a, b) for b in pts] for a in pts])
    ref = math.sqrt(dbl - 2 * w @ sgl + w @ gram @ w)
    got = qmc_worst_case_error(k, CubatureRule(pts.reshape(-1, 1), w))
    assert got == pytest.approx(ref, abs=1e-8)


def test_qmc_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        qmc_worst_case_error(KernelSpec(AM, [1.0, 1.0]), CubatureRule([[0.5]], [1.0]))


def test_cubature_csv(tmp_path):
    path = tmp_path / "rule.csv"
    path.write_text("x1,x2,w\n0.1,0.2,0.5\n0.3,0.4,0.5\n")
    rule = CubatureRule.from_csv(path)
    assert rule.n == 2 and rule.points.shape == (2, 2)
    np.testing.assert_allclose(rule.weights, [0.5, 0.5])


# -- L_infinity tail bound -----------------------------------------------------------


def test_linfty_examples():
    tiny = [1e-300]
    assert linfty_tail_bound(tiny, 16, 0.75) == pytest.approx(math.sqrt(3) * 16 ** (-1 / 6), rel=1e-12)
    assert linfty_tail_bound([1, 1], 64 * 5, 0.75) == pytest.approx(linfty_tail_bound([1, 1], 5, 0.75) / 2)


def test_linfty_plug_in():
    tau = 0.75
    b = (2 / math.pi**2) ** tau * sp_zeta(1.5) / (2 * tau)
    ref = math.sqrt(3) * math.exp(b * 2) * 100 ** (-1 / 6)
    assert linfty_tail_bound([1.0, 1.0], 100, tau) == pytest.approx(ref, rel=1e-12)


def test_linfty_n_zero_is_sup_diagonal():
    g = [0.5, 2.0]
    xs = np.linspace(0, 1, 201)
    sup = max(kernel_eval(KernelSpec(UC, g), [a, b], [a, b]) for a in xs for b in xs)
    assert linfty_tail_bound(g, 0, 0.75) == pytest.approx(math.sqrt(sup), rel=1e-12)


def test_linfty_invalid_tau():
    with pytest.raises(InvalidTau):
        linfty_tail_bound([1.0], 3, 1.0)


# -- ordered basis ------------------------------------------------------------------------


def test_ordered_basis_examples():
    got = ordered_basis_sq_norms([1.0], 2)
    assert got[0] == ((1,), 1.0)
    assert got[1][0] == (2,) and got[1][1] == pytest.approx(2 / (1 + math.pi**2))
    assert ordered_basis_sq_norms([1.0, 1.0], 1) == [((1, 1), 1.0)]


def test_ordered_basis_against_brute():
    gammas = [1.0, 2.0, 3.0]
    got = ordered_basis_sq_norms(gammas, 50)
    w = lambda g, i: 1.0 if i == 1 else 2 * g / (g + math.pi**2 * (i - 1) ** 2)  # noqa: E731
    brute = sorted(
        (math.prod(w(g, i) for g, i in zip(gammas, idx)) for idx in itertools.product(range(1, 30), repeat=3)),
        reverse=True,
    )[:50]
    np.testing.assert_allclose([v for _, v in got], brute, rtol=1e-12)
    assert all(a[1] >= b[1] for a, b in zip(got, got[1:]))


def test_ordered_basis_large_gamma_reorders():
    # 2 g / (g + pi^2) > 1 once g > pi^2: index 2 outranks the constant
    got = ordered_basis_sq_norms([20.0], 3)
    assert [idx for idx, _ in got] == [(2,), (1,), (3,)]


# -- cube moments ---------------------------------------------------------------------------


def _moment_by_compositions(k, N):
    # 2^-2N sum_{|j|=N} multinomial(2N; 2j) prod 1/(2 j_m + 1)
    total = Fraction(0)
    for js in itertools.product(range(N + 1), repeat=k):
        if sum(js) != N:
            continue
        mult = math.factorial(2 * N)
        for j in js:
            mult //= math.factorial(2 * j)
        total += Fraction(mult, math.prod(2 * j + 1 for j in js))
    return total / 4**N


def test_moment_examples():
    assert cube_moment_exact(7, 1) == Fraction(7, 12)
    assert cube_moment_exact(3, 2) == Fraction(13, 80)
    assert cube_moment(7, 2) == pytest.approx(7 / 12)


def test_moment_closed_forms():
    for k in range(1, 13):
        assert cube_moment_exact(k, 1) == Fraction(k, 12)
        assert cube_moment_exact(k, 2) == Fraction(k, 48) * (k - Fraction(2, 5))
        assert cube_moment_exact(1, k) == Fraction(1, 4**k * (2 * k + 1))


@pytest.mark.parametrize("k,N", [(2, 3), (3, 3), (4, 2), (5, 4), (6, 3)])
def test_moment_against_composition_enumeration(k, N):
    assert cube_moment_exact(k, N) == _moment_by_compositions(k, N)


def test_moment_odd_p_rejected():
    with pytest.raises(OddPExact):
        cube_moment(3, 3)
    with pytest.raises(OddPExact):
        cube_moment(3, 2.5)


def test_moment_monte_carlo_single():
    est, se = cube_moment(1, 1, "montecarlo", samples=200_000, seed=1)
    assert abs(est - 0.25) <= 3 * se


def test_moment_monte_carlo_reproducible():
    assert cube_moment(4, 3, "montecarlo", 10_000, 7) == cube_moment(4, 3, "montecarlo", 10_000, 7)


@pytest.mark.parametrize("k", [1, 3, 8])
@pytest.mark.parametrize("p", [2, 4, 6])
def test_moment_monte_carlo_agrees(k, p):
    exact = cube_moment(k, p)
    est, se = cube_moment(k, p, "montecarlo", samples=10**6, seed=k * 10 + p)
    assert abs(est - exact) <= 4 * se


def test_moment_lower_bound():
    for k in range(1, 13):
        for p in (2, 4, 6, 8):
            assert cube_moment(k, p) >= cube_moment_lower_bound(k, p)


def test_block_size_examples():
    assert lp_block_size(1, 1) == 32
    assert lp_block_size(2, 1) == 12
    assert lp_block_size(4, 1) == 9
    assert lp_block_size(3, 0.5) == 48
