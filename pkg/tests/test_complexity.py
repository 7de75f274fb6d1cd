import math
import warnings

import pytest

from conftest import brute_items, random_groups, to_symmetry
from ibctensor.complexity import (
    avg_tail_error,
    info_complexity,
    initial_error,
    minimal_error,
    optimal_algorithm_plan,
    result_json,
    trace_bounds,
)
from ibctensor.errors import ComplexityOverflow, DegenerateProblem, NotTraceClass
from ibctensor.spectrum import Finite, Geometric, PowerLaw, Sobolev
from ibctensor.tensor_enum import ProblemSpec, SymmetrySpec


def _p(spec, d, sym="entire", s=1.0, crit="abs"):
    return ProblemSpec(spec, d, s, SymmetrySpec.from_json(sym, d), crit)


GEO = Geometric(0.5, 0.5)


def test_initial_error_examples():
    assert initial_error(_p(Finite([1, 0.25]), 2, "full-antisym")) == pytest.approx(0.5)
    assert initial_error(_p(PowerLaw(1, 2), 3, s=4.0)) == pytest.approx(2.0)
    assert initial_error(_p(Sobolev(2.0), 5)) == pytest.approx(1.0)
    assert initial_error(_p(Finite([1, 1]), 3, "full-antisym")) == 0.0


def test_minimal_error_examples():
    assert minimal_error(_p(GEO, 2), 0) == pytest.approx(0.5)
    assert minimal_error(_p(GEO, 2), 1) == pytest.approx(math.sqrt(1 / 8))
    assert minimal_error(_p(Finite([1, 1]), 4, "full-antisym"), 0) == 0.0


def test_minimal_error_normalized():
    pr = _p(GEO, 3, s=7.0, crit="norm")
    assert minimal_error(pr, 0) == pytest.approx(1.0)
    assert minimal_error(pr, 1) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(DegenerateProblem):
        minimal_error(_p(Finite([1, 1]), 3, "full-antisym", crit="norm"), 0)


def test_info_complexity_examples():
    assert info_complexity(_p(Finite([1, 1]), 10), 0.5) == 1024
    assert info_complexity(_p(Finite([1, 1]), 10, "full-sym"), 0.5) == 11
    assert info_complexity(_p(Finite([1] * 5), 3, "full-antisym"), 0.9) == 10


def test_info_complexity_zero_above_initial_error():
    for pr in (_p(GEO, 3), _p(PowerLaw(2, 2), 2, "full-sym", s=0.3), _p(Sobolev(1), 3, "full-antisym")):
        assert info_complexity(pr, initial_error(pr) * (1 + 1e-9)) == 0


def test_info_complexity_overflow_propagates():
    with pytest.raises(ComplexityOverflow):
        info_complexity(_p(Finite([1, 1]), 20), 0.5, max_nodes=10)


def test_error_complexity_duality(rng):
    for _ in range(30):
        d = rng.randint(1, 4)
        spec = PowerLaw(rng.uniform(0.5, 1.5), rng.uniform(1, 3))
        pr = ProblemSpec(spec, d, rng.uniform(0.25, 4), to_symmetry(d, random_groups(rng, d)))
        eps = rng.uniform(0.05, 0.9) * max(initial_error(pr), 1e-3)
        n = info_complexity(pr, eps)
        assert minimal_error(pr, n) <= eps * (1 + 1e-12)
        if n > 0:
            assert minimal_error(pr, n - 1) > eps


def test_normalized_scale_invariance(rng):
    for _ in range(30):
        d = rng.randint(1, 5)
        spec = rng.choice([Geometric(rng.uniform(0.2, 3), rng.uniform(0.1, 0.9)), PowerLaw(rng.uniform(0.2, 3), 2.0)])
        sym = to_symmetry(d, random_groups(rng, d))
        eps = rng.uniform(0.05, 1.0)
        a = info_complexity(ProblemSpec(spec, d, rng.uniform(1e-3, 1e3), sym, "norm"), eps)
        b = info_complexity(ProblemSpec(spec, d, 1.0, sym, "norm"), eps)
        assert a == b


def test_avg_tail_error_examples():
    # one function evaluation removes the largest eigenvalue
    assert avg_tail_error(_p(GEO, 1), 1) == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert avg_tail_error(_p(GEO, 1), 0) == pytest.approx(1.0, abs=1e-12)
    assert avg_tail_error(_p(Finite([0.5, 0.25]), 2), 1) == pytest.approx(math.sqrt(9 / 16 - 1 / 4))
    with pytest.raises(NotTraceClass):
        avg_tail_error(_p(PowerLaw(1, 1), 3), 0)


def test_avg_tail_matches_brute_trace(rng):
    for _ in range(20):
        L, d = rng.randint(1, 6), rng.randint(1, 3)
        vals = sorted((rng.random() for _ in range(L)), reverse=True)
        groups = random_groups(rng, d)
        s = rng.uniform(0.25, 4)
        pr = ProblemSpec(Finite(vals), d, s, to_symmetry(d, groups))
        brute = brute_items(vals, d, s, groups)
        trace = math.fsum(v for v, _ in brute)
        for n in (0, 1, 3, 10):
            head = math.fsum(v for v, _ in brute[:n])
            assert avg_tail_error(pr, n) ** 2 + head == pytest.approx(trace, abs=1e-12)


@pytest.mark.parametrize("sym", ["entire", "full-sym", "full-antisym"])
def test_trace_bounds_infinite_spectrum(sym):
    # Geometric has closed-form factors: sum = c/(1-q); h_d and e_d via q-series
    c, q, d = 0.9, 0.5, 3
    pr = _p(Geometric(c, q), d, sym)
    est, hw = trace_bounds(pr)
    if sym == "entire":
        ref = (c / (1 - q)) ** d
    elif sym == "full-sym":
        ref = c**d / math.prod(1 - q**i for i in range(1, d + 1))
    else:
        ref = c**d * q ** (d * (d - 1) / 2) / math.prod(1 - q**i for i in range(1, d + 1))
    assert est == pytest.approx(ref, abs=1e-12)
    assert hw <= 1e-12


def test_trace_bounds_power_law_encloses_brute():
    pr = _p(PowerLaw(1.0, 2.0), 2, "full-sym")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        est, hw = trace_bounds(pr, 1e-10)
    # h_2 = (zeta(2)^2 + zeta(4)) / 2
    ref = ((math.pi**2 / 6) ** 2 + math.pi**4 / 90) / 2
    assert abs(est - ref) <= hw + 1e-12


def test_plan_examples():
    assert optimal_algorithm_plan(_p(Finite([1, 0.5]), 2), 2) == [((1, 1), 1.0), ((1, 2), 1.0)]
    plan = optimal_algorithm_plan(_p(Finite([1, 0.5]), 2, "full-antisym"), 1)
    assert plan[0][0] == (1, 2) and plan[0][1] == pytest.approx(math.sqrt(2))
    assert optimal_algorithm_plan(_p(GEO, 3), 0) == []


def test_result_json_shape():
    pr = _p(GEO, 2)
    rec = result_json(pr, "eps", 0.1, info_complexity(pr, 0.1), True)
    assert rec == {"d": 2, "eps": 0.1, "criterion": "absolute", "value": 15, "exact": True}
