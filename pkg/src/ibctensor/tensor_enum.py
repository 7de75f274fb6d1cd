"""Ordered enumeration and counting of d-variate product eigenvalues.

The eigenvalues of a (scaled) tensor product problem are the products
``s_d * lambda_{k_1} * ... * lambda_{k_d}``. Restricting the problem to
(anti)symmetric functions restricts the multi-indices ``k`` to the set
``nabla_d``: inside a symmetric coordinate group the entries are
nondecreasing, inside an antisymmetric group strictly increasing.

All comparisons are made in log-space. Log-values that differ by less than
``LOG_TOL`` are treated as tied; ties are broken lexicographically.
"""

import csv
import heapq
import io
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import ComplexityOverflow, EmptyIndexSet, GroupTooLarge, IndexLengthMismatch
from .spectrum import Spectrum

LOG_TOL = 1e-12
MAX_NODES = 10**9
MAX_GROUP = 8
_TABLE_CAP = 1 << 22


class Kind(str, Enum):
    SYM = "sym"
    ANTISYM = "antisym"


class Criterion(str, Enum):
    ABSOLUTE = "absolute"
    NORMALIZED = "normalized"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        v = str(value).lower()
        if v in ("abs", "absolute"):
            return cls.ABSOLUTE
        if v in ("norm", "normalized", "normalised"):
            return cls.NORMALIZED
        raise ValueError(f"unknown error criterion {value!r}")


@dataclass(frozen=True)
class SymmetrySpec:
    """Disjoint coordinate groups (1-based) carrying a symmetry kind.

    Coordinates outside every group are free. Groups of size one impose no
    condition and are dropped on construction.
    """

    d: int
    groups: tuple = ()

    def __post_init__(self):
        if self.d < 1:
            raise EmptyIndexSet("dimension must be >= 1")
        seen = set()
        norm = []
        for coords, kind in self.groups:
            coords = tuple(sorted(int(c) for c in coords))
            if not coords:
                raise ValueError("empty coordinate group")
            if coords[0] < 1 or coords[-1] > self.d:
                raise ValueError(f"group {coords} outside 1..{self.d}")
            if seen.intersection(coords) or len(set(coords)) != len(coords):
                raise ValueError("coordinate groups must be disjoint")
            seen.update(coords)
            if len(coords) > 1:
                norm.append((coords, Kind(kind)))
        object.__setattr__(self, "groups", tuple(norm))

    @classmethod
    def entire(cls, d):
        return cls(d)

    @classmethod
    def full_sym(cls, d):
        return cls(d, ((tuple(range(1, d + 1)), Kind.SYM),))

    @classmethod
    def full_antisym(cls, d):
        return cls(d, ((tuple(range(1, d + 1)), Kind.ANTISYM),))

    @classmethod
    def from_json(cls, obj, d):
        """``"entire" | "full-sym" | "full-antisym" | {"groups": [{"coords": [...], "kind": ...}]}``.

        A bare list of group objects is accepted in place of the dict.
        """
        if isinstance(obj, str):
            key = obj.lower().replace("_", "-")
            if key in ("entire", "none"):
                return cls.entire(d)
            if key in ("full-sym", "sym"):
                return cls.full_sym(d)
            if key in ("full-antisym", "antisym"):
                return cls.full_antisym(d)
            raise ValueError(f"unknown symmetry {obj!r}")
        if isinstance(obj, dict):
            obj = obj["groups"]
        groups = [(g["coords"], g["kind"]) for g in obj]
        return cls(d, tuple(groups))

    def to_json(self):
        return {"groups": [{"coords": list(c), "kind": k.value} for c, k in self.groups]}

    @property
    def free_coords(self):
        used = {c for coords, _ in self.groups for c in coords}
        return tuple(c for c in range(1, self.d + 1) if c not in used)

    def antisym_sizes(self):
        return [len(c) for c, k in self.groups if k is Kind.ANTISYM]

    def minimal_index(self):
        k = [1] * self.d
        for coords, kind in self.groups:
            if kind is Kind.ANTISYM:
                for pos, c in enumerate(coords):
                    k[c - 1] = pos + 1
        return tuple(k)

    def contains(self, k):
        if len(k) != self.d:
            raise IndexLengthMismatch(f"index of length {len(k)} for d={self.d}")
        if any(x < 1 for x in k):
            return False
        for coords, kind in self.groups:
            vals = [k[c - 1] for c in coords]
            pairs = zip(vals, vals[1:])
            if kind is Kind.SYM:
                if any(a > b for a, b in pairs):
                    return False
            elif any(a >= b for a, b in pairs):
                return False
        return True

    def _neighbours(self):
        """For each coordinate (0-based) the next coordinate in its group and the kind."""
        nxt = [None] * self.d
        for coords, kind in self.groups:
            for a, b in zip(coords, coords[1:]):
                nxt[a - 1] = (b - 1, kind)
        return nxt


def nabla_contains(symmetry, k):
    """Whether ``k`` satisfies the ordering constraint of every group."""
    return symmetry.contains(tuple(k))


@dataclass(frozen=True)
class ProblemSpec:
    """One concrete d-variate problem."""

    spectrum: Spectrum
    d: int
    scaling: float = 1.0
    symmetry: SymmetrySpec = None
    criterion: Criterion = Criterion.ABSOLUTE

    def __post_init__(self):
        if self.d < 1:
            raise EmptyIndexSet("dimension must be >= 1")
        if not self.scaling > 0:
            raise ValueError("scaling must be positive")
        if self.symmetry is None:
            object.__setattr__(self, "symmetry", SymmetrySpec.entire(self.d))
        elif self.symmetry.d != self.d:
            raise ValueError("symmetry dimension does not match d")
        object.__setattr__(self, "criterion", Criterion.parse(self.criterion))

    def with_(self, **changes):
        fields = dict(
            spectrum=self.spectrum,
            d=self.d,
            scaling=self.scaling,
            symmetry=self.symmetry,
            criterion=self.criterion,
        )
        fields.update(changes)
        return ProblemSpec(**fields)


class EnumItem(NamedTuple):
    index: tuple
    value: float
    logvalue: float


class _LogTable:
    """Cached ``ln(lambda_m) - shift``; ``-inf`` for zero eigenvalues."""

    def __init__(self, spectrum, shift=0.0):
        self.spectrum = spectrum
        self.shift = shift
        self.support = spectrum.support
        self._logs = np.empty(0)
        self._extend(64)

    def _extend(self, n):
        if self.support is not None:
            n = max(n, self.support + 1)
        vals = self.spectrum.values(n)
        with np.errstate(divide="ignore"):
            logs = np.log(vals) - self.shift
        self._logs = np.concatenate(([math.nan], logs))  # 1-based

    def __getitem__(self, m):
        if m >= len(self._logs):
            if m >= _TABLE_CAP:
                v = self.spectrum.eigenvalue(m)
                return math.log(v) - self.shift if v > 0 else -math.inf
            self._extend(max(2 * (len(self._logs) - 1), m + 1))
        return float(self._logs[m])

    def count_greater(self, B):
        """``#{m >= 1 : log_m > B}``."""
        if self.support is not None:
            logs = self._logs[1 : self.support + 1]
            return int(np.count_nonzero(logs > B))
        while self._logs[-1] > B and len(self._logs) - 1 < _TABLE_CAP:
            self._extend(2 * (len(self._logs) - 1))
        if self._logs[-1] <= B:
            # nonincreasing table: binary search on the negated array
            return int(np.searchsorted(-self._logs[1:], -B, side="left"))
        guess = self.spectrum.count_greater(math.exp(B + self.shift))
        if not math.isfinite(guess):
            raise ComplexityOverflow("univariate count exceeds machine range")
        n = int(guess)
        while self[n + 1] > B:
            n += 1
        while n >= 1 and not self[n] > B:
            n -= 1
        return n


def _check_index(d, k):
    if len(k) != d:
        raise IndexLengthMismatch(f"index of length {len(k)} for d={d}")


def product_eigenvalue(problem, k):
    """``s_d * prod_l lambda_{k_l}`` computed in log-space."""
    k = tuple(k)
    _check_index(problem.d, k)
    vals = [problem.spectrum.eigenvalue(m) for m in k]
    if any(v == 0 for v in vals):
        return 0.0
    return math.exp(math.log(problem.scaling) + math.fsum(math.log(v) for v in vals))


def _max_log(symmetry, table):
    """Log of the largest product over ``nabla_d`` (no scaling)."""
    k = symmetry.minimal_index()
    return math.fsum(table[m] for m in k)


# -- best-first enumeration ----------------------------------------------------


def _bucket(logv):
    return int(round(-logv / LOG_TOL))


def _best_first(symmetry, tables, support=None):
    """Yield ``(index, logsum)`` of positive products in nonincreasing order.

    ``tables[l]`` gives the log-sequence of coordinate ``l``. Indices above
    ``support`` (if given) are outside the index set.
    """
    d = symmetry.d
    nxt = symmetry._neighbours()
    prev = [None] * d
    for l, link in enumerate(nxt):
        if link is not None:
            prev[link[0]] = (l, link[1])

    def logsum(k):
        return math.fsum(tables[l][m] for l, m in enumerate(k))

    start = symmetry.minimal_index()
    if support is not None and max(start) > support:
        return
    lv = logsum(start)
    if lv == -math.inf:
        return
    heap = [(_bucket(lv), start, lv)]
    seen = {start}
    while heap:
        _, k, lv = heapq.heappop(heap)
        yield k, lv
        for l in range(d):
            m = k[l] + 1
            if support is not None and m > support:
                continue
            link = nxt[l]
            if link is not None:
                other, kind = link
                if m > k[other] or (kind is Kind.ANTISYM and m == k[other]):
                    continue
            child = k[:l] + (m,) + k[l + 1 :]
            if child in seen:
                continue
            seen.add(child)
            clv = logsum(child)
            if clv == -math.inf:
                continue
            heapq.heappush(heap, (_bucket(clv), child, clv))


def _zero_items(symmetry, support, table):
    """Zero-valued members of ``nabla_d`` inside a finite support, lexicographic."""
    for k in itertools.product(range(1, support + 1), repeat=symmetry.d):
        if symmetry.contains(k) and any(table[m] == -math.inf for m in k):
            yield k


def enumerate_top(problem, k):
    """The ``k`` largest product eigenvalues over ``nabla_d``, nonincreasing.

    Ties (within ``LOG_TOL`` in log-space) are ordered lexicographically.
    Zero eigenvalues come last and only inside a finite support. If
    ``nabla_d`` holds fewer than ``k`` members the list is shorter.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    sym = problem.symmetry
    table = _LogTable(problem.spectrum)
    support = problem.spectrum.support
    ls = math.log(problem.scaling)
    out = []
    for idx, lv in _best_first(sym, [table] * problem.d, support):
        if len(out) >= k:
            return out
        total = lv + ls
        out.append(EnumItem(idx, math.exp(total), total))
    if support is not None:
        for idx in _zero_items(sym, support, table):
            if len(out) >= k:
                break
            out.append(EnumItem(idx, 0.0, -math.inf))
    return out[:k]


def items_to_csv(items):
    """CSV text with columns ``value, logvalue, index`` (index space-separated)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["value", "logvalue", "index"])
    for it in items:
        w.writerow([repr(it.value), repr(it.logvalue), " ".join(map(str, it.index))])
    return buf.getvalue()


def items_from_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return [
        EnumItem(tuple(int(x) for x in idx.split()), float(v), float(lv)) for v, lv, idx in rows[1:]
    ]


# -- counting ------------------------------------------------------------------


def _slots(symmetry):
    """Coordinate layout used by the counter: groups first, then free coordinates.

    Returns a list of ``(kind, remaining, start)``: ``remaining`` counts the
    group members from this slot on (0 for free slots), ``kind`` is ``None``
    for free slots and ``start`` marks the first slot of a group.
    """
    slots = []
    for coords, kind in symmetry.groups:
        a = len(coords)
        for pos in range(a):
            slots.append((kind, a - pos, pos == 0))
    for _ in symmetry.free_coords:
        slots.append((None, 0, True))
    return slots


def _count_log_above(symmetry, table, bound, max_nodes=MAX_NODES):
    """``#{k in nabla_d : sum_l log_{k_l} > bound}`` by pruned depth-first search."""
    slots = _slots(symmetry)
    d = len(slots)
    lam1 = table[1]

    def group_best(kind, r, j):
        # best sum over r further members after index j (j = 0 at group start)
        if kind is Kind.SYM:
            return r * table[max(j, 1)]
        return math.fsum(table[j + i] for i in range(1, r + 1))

    # best completion of slots p.. when slot p starts a new group or is free
    suffix = [0.0] * (d + 1)
    p = d - 1
    while p >= 0:
        kind, r, start = slots[p]
        if kind is None:
            suffix[p] = lam1 + suffix[p + 1]
            p -= 1
        else:
            q = p
            while not slots[q][2]:
                q -= 1
            size = slots[q][1]
            suffix[q] = group_best(kind, size, 0) + suffix[q + size]
            p = q - 1
    work = [0]
    memo = {}

    def best_after(p, m):
        """Best completion of slots p+1.. given slot p took index m."""
        kind, r, _ = slots[p]
        if kind is None or r == 1:
            return suffix[p + 1]
        return group_best(kind, r - 1, m) + suffix[p + r]

    def count(p, j, B):
        key = (p, j, B)
        hit = memo.get(key)
        if hit is not None:
            return hit
        work[0] += 1
        if work[0] > max_nodes:
            raise ComplexityOverflow(f"node budget {max_nodes} exhausted")
        kind, r, start = slots[p]
        if kind is None or start:
            m_min = 1
        else:
            m_min = j if kind is Kind.SYM else j + 1
        if p == d - 1:
            total = max(0, table.count_greater(B) - m_min + 1)
        else:
            total = 0
            m = m_min
            while True:
                lv = table[m]
                if not lv + best_after(p, m) > B:
                    break
                chain = kind is not None and r > 1
                total += count(p + 1, m if chain else 0, B - lv)
                m += 1
        memo[key] = total
        return total

    if not suffix[0] > bound:
        return 0
    return count(0, 0, bound)


def count_above(problem, threshold, max_nodes=MAX_NODES):
    """``#{k in nabla_d : s_d * prod lambda_{k_l} > threshold}``.

    Products within ``LOG_TOL`` (log-space) of the threshold are not counted.
    Raises :class:`ComplexityOverflow` after ``max_nodes`` search nodes.
    """
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    table = _LogTable(problem.spectrum)
    bound = math.log(threshold) - math.log(problem.scaling) + LOG_TOL
    return _count_log_above(problem.symmetry, table, bound, max_nodes)


# -- (anti)symmetrizers --------------------------------------------------------


def _restrict(I, k):
    I = tuple(sorted(I))
    return I, [k[c - 1] for c in I]


def multiplicity_factor(I, k):
    """``(M_I(k)!, sqrt(#S_I / M_I(k)!))`` for coordinate set ``I`` (1-based)."""
    _, vals = _restrict(I, k)
    mfact = 1
    for c in Counter(vals).values():
        mfact *= math.factorial(c)
    return mfact, math.sqrt(math.factorial(len(vals)) / mfact)


def _parity(perm):
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def symmetrizer_coefficients(I, kind, k):
    """Expansion of ``P_I e_k`` in the tensor basis.

    Returns ``[(coefficient, index), ...]`` sorted by index; equal indices
    are merged and vanishing coefficients dropped.
    """
    kind = Kind(kind)
    I = tuple(sorted(I))
    if len(I) > MAX_GROUP:
        raise GroupTooLarge(f"#I = {len(I)} exceeds {MAX_GROUP}")
    k = tuple(k)
    n = math.factorial(len(I))
    acc = {}
    for perm in itertools.permutations(range(len(I))):
        sign = _parity(perm) if kind is Kind.ANTISYM else 1
        new = list(k)
        for t, src in enumerate(perm):
            new[I[t] - 1] = k[I[src] - 1]
        key = tuple(new)
        acc[key] = acc.get(key, 0) + Fraction(sign, n)
    return [(float(c), idx) for idx, c in sorted(acc.items()) if c != 0]


def basis_normalization(symmetry, k):
    """Product over groups of ``sqrt(#S_I / M_I(k)!)``."""
    out = 1.0
    for coords, _ in symmetry.groups:
        out *= multiplicity_factor(coords, k)[1]
    return out
