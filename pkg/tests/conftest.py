"""Independent brute-force oracles shared by the test modules."""

import itertools
import math
import random

import pytest

from ibctensor.tensor_enum import Kind, SymmetrySpec


def admissible(k, groups):
    """Ordering check written from scratch (no library code)."""
    for coords, kind in groups:
        vals = [k[c - 1] for c in sorted(coords)]
        for a, b in zip(vals, vals[1:]):
            if kind == "sym" and a > b:
                return False
            if kind == "antisym" and a >= b:
                return False
    return True


def brute_items(values, d, scale, groups, grid=None):
    """All ``(value, index)`` over ``{1..grid}^d`` in nonincreasing order, lex ties."""
    grid = grid or len(values)
    lam = list(values) + [0.0] * max(0, grid - len(values))
    out = []
    for k in itertools.product(range(1, grid + 1), repeat=d):
        if admissible(k, groups):
            factors = sorted(lam[m - 1] for m in k)
            out.append((scale * math.prod(factors), k))
    out.sort(key=lambda t: (-t[0], t[1]))
    return out


def random_groups(rng, d):
    """Random disjoint groups in the plain ``(coords, kind)`` form."""
    mode = rng.choice(["entire", "full-sym", "full-antisym", "mixed"])
    if mode == "entire":
        return []
    if mode == "full-sym":
        return [(tuple(range(1, d + 1)), "sym")]
    if mode == "full-antisym":
        return [(tuple(range(1, d + 1)), "antisym")]
    coords = list(range(1, d + 1))
    rng.shuffle(coords)
    groups, i = [], 0
    while i < d:
        a = rng.randint(1, d - i)
        if a > 1 or rng.random() < 0.5:
            groups.append((tuple(coords[i : i + a]), rng.choice(["sym", "antisym"])))
        i += a
    return groups


def to_symmetry(d, groups):
    return SymmetrySpec(d, tuple((c, Kind(k)) for c, k in groups))


@pytest.fixture
def rng():
    return random.Random(20240611)


_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one ``ACCEPTANCE n: PASS/FAIL`` line; shown in the terminal summary."""

    def _report(number, ok, detail):
        line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
