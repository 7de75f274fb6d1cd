"""Rule-based tractability classification of tensor product problem families.

A family is described by analytic facts only: ``lambda_1``, ``lambda_2``,
the ``l_tau`` threshold and decay class of the univariate spectrum, the
asymptotic behaviour of the scaling ``s_d`` and the growth of the
(anti)symmetric coordinate count. Nothing is inferred from finite samples;
when the facts do not settle a question the verdict is ``Undecidable``.

Each verdict names the strongest class that holds, the weaker classes it
implies, the classes known to fail, and a short rule string explaining the
decision.
"""

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum

from .errors import Divergent, TrivialSpectrum
from .spectrum import Finite, Spectrum, power_sum, spt_exponent
from .tensor_enum import Criterion

_REL = 1e-12


class TractClass(str, Enum):
    SPT = "SPT"
    PT = "PT"
    WT = "WT"
    CURSE = "Curse"
    POLY_INTRACTABLE = "PolynomiallyIntractable"
    UNDECIDABLE = "Undecidable"


_IMPLIES = {
    TractClass.SPT: (TractClass.PT, TractClass.WT),
    TractClass.PT: (TractClass.WT,),
}


@dataclass(frozen=True)
class Verdict:
    cls: TractClass
    rule: str
    spt_exponent: float = None
    implied: tuple = ()
    excluded: tuple = ()

    def to_json(self):
        return {
            "class": self.cls.value,
            "rule": self.rule,
            "implied": [c.value for c in self.implied],
            "excluded": [c.value for c in self.excluded],
            "spt_exponent": self.spt_exponent,
        }


def _verdict(cls, rule, exponent=None, implied=None, excluded=()):
    if implied is None:
        implied = _IMPLIES.get(cls, ())
    return Verdict(cls, rule, exponent, tuple(implied), tuple(excluded))


_NOT_PT = (TractClass.SPT, TractClass.PT)
_NOT_WT = (TractClass.SPT, TractClass.PT, TractClass.WT)


def _eq(a, b):
    return math.isclose(a, b, rel_tol=_REL, abs_tol=0.0)


def _facts(spec):
    lam1, lam2 = spec.lambda_1, spec.lambda_2
    if lam2 <= 0:
        raise TrivialSpectrum("lambda_2 = 0: the problem is trivial in every dimension")
    return lam1, lam2, math.isfinite(spec.ell_threshold()), spec.decays_fast


class _Scaled(Spectrum):
    """``r * lambda`` for a base spectrum (used for exponents only)."""

    def __init__(self, base, r):
        self.base, self.r = base, r
        self.family = base.family

    def eigenvalue(self, m):
        return self.r * self.base.eigenvalue(m)

    def values(self, M):
        return self.r * self.base.values(M)

    @property
    def support(self):
        return self.base.support

    def ell_threshold(self):
        return self.base.ell_threshold()

    def power_tail(self, tau, M):
        est, hw = self.base.power_tail(tau, M)
        return self.r**tau * est, self.r**tau * hw

    def params(self):
        return {"base": self.base.to_json(), "r": self.r}


def _rescaled(spec, r):
    """``r * lambda``, kept in the same family when it has a scale parameter."""
    if r == 1:
        return spec
    if isinstance(spec, Finite):
        return Finite([r * v for v in spec.values_])
    if hasattr(spec, "c"):
        return dataclasses.replace(spec, c=r * spec.c)
    return _Scaled(spec, r)


# -- unscaled ---------------------------------------------------------------------


def classify_unscaled(spec, criterion=Criterion.ABSOLUTE):
    """Classify the plain tensor product problem built from ``spec``."""
    criterion = Criterion.parse(criterion)
    lam1, lam2, in_ell, fast = _facts(spec)
    if criterion is Criterion.NORMALIZED:
        return _normalized_unscaled(lam1, lam2, fast)
    if lam1 > 1 and not _eq(lam1, 1):
        return _verdict(TractClass.CURSE, "lambda_1 > 1: initial error grows exponentially", excluded=_NOT_WT)
    if _eq(lam1, 1):
        if _eq(lam2, 1):
            return _verdict(TractClass.CURSE, "lambda_1 = lambda_2 = 1", excluded=_NOT_WT)
        if fast:
            return _verdict(
                TractClass.WT,
                "1 = lambda_1 > lambda_2 and lambda_n = o(ln^-2 n): weakly but not polynomially tractable",
                excluded=_NOT_PT,
            )
        return _verdict(
            TractClass.POLY_INTRACTABLE,
            "1 = lambda_1 > lambda_2 without lambda_n = o(ln^-2 n): not weakly tractable",
            excluded=_NOT_WT,
        )
    if in_ell:
        return _verdict(
            TractClass.SPT,
            "lambda_1 < 1 and lambda in some l_tau",
            exponent=spt_exponent(spec),
        )
    if fast:
        return _verdict(TractClass.WT, "lambda_1 < 1, lambda in no l_tau", excluded=_NOT_PT)
    return _verdict(
        TractClass.POLY_INTRACTABLE,
        "lambda_1 < 1, lambda in no l_tau and not o(ln^-2 n)",
        excluded=_NOT_WT,
    )


def _normalized_unscaled(lam1, lam2, fast):
    if _eq(lam1, lam2):
        return _verdict(TractClass.CURSE, "normalized, lambda_1 = lambda_2", excluded=_NOT_WT)
    if fast:
        return _verdict(
            TractClass.WT,
            "normalized, lambda_1 > lambda_2, lambda_n = o(ln^-2 n): weakly but never polynomially tractable",
            excluded=_NOT_PT,
        )
    return _verdict(
        TractClass.POLY_INTRACTABLE,
        "normalized, lambda_1 > lambda_2 without lambda_n = o(ln^-2 n)",
        excluded=_NOT_WT,
    )


# -- scaling families -----------------------------------------------------------


class Regime(str, Enum):
    EXP = "exponential"
    POLY = "polynomial"
    DECAY = "decay"


@dataclass(frozen=True)
class Constant:
    """``s_d = s`` for every ``d``."""

    s: float = 1.0

    def limsup_root(self, lam1):
        return 1.0

    def regime(self, lam1):
        if _eq(lam1, 1):
            return Regime.POLY, 0.0, None
        return (Regime.EXP, None, None) if lam1 > 1 else (Regime.DECAY, None, True)

    def value(self, d, lam1):
        return self.s

    def exponent_factor(self):
        return 1.0


@dataclass(frozen=True)
class GeometricScale:
    """``s_d = r**d``."""

    r: float

    def limsup_root(self, lam1):
        return self.r

    def regime(self, lam1):
        x = self.r * lam1
        if _eq(x, 1):
            return Regime.POLY, 0.0, None
        return (Regime.EXP, None, None) if x > 1 else (Regime.DECAY, None, True)

    def value(self, d, lam1):
        return self.r**d

    def exponent_factor(self):
        return self.r


@dataclass(frozen=True)
class PolynomialInit:
    """``s_d`` chosen so that the initial error equals ``c * d**alpha``."""

    alpha: float
    c: float = 1.0

    def limsup_root(self, lam1):
        return 1.0 / lam1

    def regime(self, lam1):
        return Regime.POLY, self.alpha, None

    def value(self, d, lam1):
        return self.c**2 * d ** (2 * self.alpha) / lam1**d

    def exponent_factor(self):
        return None


@dataclass(frozen=True)
class DecayInit:
    """Initial error tending to zero.

    ``fast`` declares whether it is ``o(1/d)`` (``None``: undeclared).
    ``root`` is ``limsup (eps_init**2)**(1/d)``, i.e. ``limsup s_d**(1/d) * lambda_1``
    (``None``: undeclared).
    """

    fast: bool = None
    root: float = None

    def limsup_root(self, lam1):
        return None if self.root is None else self.root / lam1

    def regime(self, lam1):
        return Regime.DECAY, None, self.fast

    def value(self, d, lam1):
        raise ValueError("DecayInit does not determine numeric scaling factors")

    def exponent_factor(self):
        return None


def scaling_from_json(obj):
    kind = str(obj.get("kind", obj.get("family", ""))).lower()
    if kind == "constant":
        return Constant(float(obj.get("s", 1.0)))
    if kind in ("geometric", "geometric_scale"):
        return GeometricScale(float(obj["r"]))
    if kind in ("polynomial_init", "polynomial"):
        return PolynomialInit(float(obj["alpha"]), float(obj.get("c", 1.0)))
    if kind in ("decay_init", "decay"):
        return DecayInit(obj.get("fast"), obj.get("root"))
    raise ValueError(f"unknown scaling family {obj!r}")


def classify_scaled(spec, scaling, criterion=Criterion.ABSOLUTE):
    """Classify ``(s_d * lambda_{d,k})`` for a declared scaling family."""
    criterion = Criterion.parse(criterion)
    lam1, lam2, in_ell, fast = _facts(spec)
    if criterion is Criterion.NORMALIZED:
        v = _normalized_unscaled(lam1, lam2, fast)
        return _verdict(v.cls, v.rule + " (scaling cancels)", v.spt_exponent, v.implied, v.excluded)

    root = scaling.limsup_root(lam1)
    pt = None if root is None else bool(in_ell and root * lam1 < 1 and not _eq(root * lam1, 1))
    if not in_ell:
        pt = False
    if pt:
        r = scaling.exponent_factor()
        exponent = None if r is None else spt_exponent(_rescaled(spec, r))
        return _verdict(
            TractClass.SPT,
            "lambda in some l_tau and limsup s_d^(1/d) < 1/lambda_1",
            exponent=exponent,
        )

    regime, alpha, small = scaling.regime(lam1)
    if regime is Regime.EXP:
        return _verdict(TractClass.CURSE, "initial error grows exponentially", excluded=_NOT_WT)
    if regime is Regime.POLY:
        if _eq(lam1, lam2):
            return _verdict(
                TractClass.CURSE, "polynomial initial error with lambda_1 = lambda_2", excluded=_NOT_WT
            )
        wt = fast
        rule = f"polynomial initial error (alpha={alpha:g}), lambda_1 > lambda_2"
    else:
        if _eq(lam1, lam2):
            wt = None if small is None else bool(fast and small)
            rule = "decaying initial error, lambda_1 = lambda_2"
        else:
            wt = fast
            rule = "decaying initial error, lambda_1 > lambda_2"
    if wt is None:
        return _verdict(TractClass.UNDECIDABLE, rule + "; o(1/d) side of the initial error undeclared", implied=())
    if not wt:
        return _verdict(TractClass.POLY_INTRACTABLE, rule + "; not weakly tractable", excluded=_NOT_WT)
    if pt is None:
        return _verdict(
            TractClass.UNDECIDABLE,
            rule + "; weakly tractable, limsup s_d^(1/d) undeclared",
            implied=(TractClass.WT,),
        )
    return _verdict(TractClass.WT, rule + "; weakly tractable", excluded=_NOT_PT)


# -- symmetry growth --------------------------------------------------------------


class FreeClass(str, Enum):
    BOUNDED = "O(1)"
    LOG = "O(ln d)"
    LARGER = "larger"


@dataclass(frozen=True)
class Entire:
    kind = None
    linear = False
    free_class = FreeClass.LARGER

    def a_d(self, d):
        return 0

    def b_d(self, d):
        return d


@dataclass(frozen=True)
class FullSym:
    kind = "sym"
    linear = True
    free_class = FreeClass.BOUNDED

    def a_d(self, d):
        return d

    def b_d(self, d):
        return 0


@dataclass(frozen=True)
class FullAntisym(FullSym):
    kind = "antisym"


@dataclass(frozen=True)
class FixedFreeCoords:
    """``b_d = b`` free coordinates, the rest form one group."""

    b: int
    kind: str = "sym"
    linear = True
    free_class = FreeClass.BOUNDED

    def a_d(self, d):
        return max(d - self.b, 0)

    def b_d(self, d):
        return d - self.a_d(d)


@dataclass(frozen=True)
class LogFreeCoords:
    """``b_d = ceil(c ln d)`` free coordinates."""

    c: float
    kind: str = "sym"
    linear = True
    free_class = FreeClass.LOG

    def b_d(self, d):
        return min(d, math.ceil(self.c * math.log(d))) if d > 1 else 0

    def a_d(self, d):
        return d - self.b_d(d)


@dataclass(frozen=True)
class LinearAntisym:
    """``a_d = ceil(fraction * d)`` antisymmetric coordinates."""

    fraction: float
    kind = "antisym"
    linear = True

    def __post_init__(self):
        if not 0 < self.fraction <= 1:
            raise ValueError("fraction must lie in (0, 1]")

    @property
    def free_class(self):
        return FreeClass.BOUNDED if self.fraction == 1 else FreeClass.LARGER

    def a_d(self, d):
        return min(d, math.ceil(self.fraction * d))

    def b_d(self, d):
        return d - self.a_d(d)


@dataclass(frozen=True)
class SublinearAntisym:
    """``a_d = ceil(d / (gamma ln d))`` antisymmetric coordinates."""

    gamma: float
    kind = "antisym"
    linear = False
    free_class = FreeClass.LARGER

    def a_d(self, d):
        if d < 2:
            return d
        return max(1, min(d, math.ceil(d / (self.gamma * math.log(d)))))

    def b_d(self, d):
        return d - self.a_d(d)


def growth_from_json(obj):
    if isinstance(obj, str):
        obj = {"kind": obj}
    kind = str(obj["kind"]).lower().replace("-", "_")
    table = {
        "entire": lambda: Entire(),
        "none": lambda: Entire(),
        "full_sym": lambda: FullSym(),
        "full_antisym": lambda: FullAntisym(),
        "fixed_free": lambda: FixedFreeCoords(int(obj["b"]), obj.get("symmetry", "sym")),
        "log_free": lambda: LogFreeCoords(float(obj["c"]), obj.get("symmetry", "sym")),
        "linear_antisym": lambda: LinearAntisym(float(obj["fraction"])),
        "sublinear_antisym": lambda: SublinearAntisym(float(obj["gamma"])),
    }
    if kind not in table:
        raise ValueError(f"unknown symmetry growth {obj!r}")
    return table[kind]()


def classify_symmetric(spec, growth, criterion=Criterion.ABSOLUTE):
    """Classify a family of partially symmetric problems."""
    criterion = Criterion.parse(criterion)
    if growth.kind is None:
        return classify_unscaled(spec, criterion)
    if growth.kind != "sym":
        raise ValueError("growth must describe symmetric coordinates")
    lam1, lam2, in_ell, _ = _facts(spec)
    bounded = growth.free_class is FreeClass.BOUNDED
    logish = growth.free_class in (FreeClass.BOUNDED, FreeClass.LOG)
    if not in_ell:
        return _verdict(TractClass.POLY_INTRACTABLE, "lambda in no l_tau", excluded=_NOT_PT)

    if criterion is Criterion.NORMALIZED:
        if lam1 > lam2 and not _eq(lam1, lam2) and bounded:
            return _verdict(TractClass.SPT, "normalized, lambda_1 > lambda_2 and O(1) free coordinates")
        if logish:
            return _verdict(
                TractClass.PT,
                "normalized, O(ln d) free coordinates",
                excluded=(TractClass.SPT,),
            )
        return _verdict(
            TractClass.POLY_INTRACTABLE, "normalized, free coordinates not O(ln d)", excluded=_NOT_PT
        )

    if lam1 < 1 and not _eq(lam1, 1):
        return _verdict(TractClass.SPT, "lambda_1 < 1 and lambda in some l_tau")
    if _eq(lam1, 1):
        if lam2 < 1 and not _eq(lam2, 1) and bounded:
            return _verdict(TractClass.SPT, "1 = lambda_1 > lambda_2 and O(1) free coordinates")
        if logish:
            return _verdict(
                TractClass.PT, "lambda_1 = 1 and O(ln d) free coordinates", excluded=(TractClass.SPT,)
            )
        return _verdict(
            TractClass.POLY_INTRACTABLE, "lambda_1 = 1, free coordinates not O(ln d)", excluded=_NOT_PT
        )
    if not logish:
        return _verdict(
            TractClass.POLY_INTRACTABLE, "lambda_1 > 1, free coordinates not O(ln d)", excluded=_NOT_PT
        )
    return _verdict(
        TractClass.UNDECIDABLE,
        "lambda_1 > 1: no sufficient condition for polynomial tractability is known",
        implied=(),
        excluded=(TractClass.SPT,),
    )


def tau_grid(spec, n=16):
    """``tau_min * 2**k`` for ``k < n``, starting just above the ``l_tau`` threshold."""
    t0 = spec.ell_threshold()
    start = max(t0 * (1 + 2.0**-10), 2.0**-6) if t0 > 0 else 2.0**-6
    return [start * 2.0**k for k in range(n)]


def _log_power_sum(spec, tau):
    """``ln sum_m lambda_m**tau`` without overflow for ``lambda_1 > 1``."""
    lam1 = spec.lambda_1
    s = power_sum(_rescaled(spec, 1.0 / lam1), tau, 1e-14)
    return tau * math.log(lam1) + math.log(s)


def classify_antisymmetric(spec, growth, criterion=Criterion.ABSOLUTE):
    """Classify a family of partially antisymmetric problems."""
    criterion = Criterion.parse(criterion)
    if growth.kind != "antisym":
        raise ValueError("growth must describe antisymmetric coordinates")
    lam1, _, in_ell, _ = _facts(spec)
    if criterion is Criterion.NORMALIZED:
        if not in_ell or growth.free_class is FreeClass.LARGER:
            return _verdict(
                TractClass.POLY_INTRACTABLE,
                "normalized: necessary conditions (l_tau, O(ln d) free coordinates) fail",
                excluded=_NOT_PT,
            )
        return _verdict(
            TractClass.UNDECIDABLE,
            "normalized: necessary conditions hold, no sufficient condition known",
            implied=(),
        )
    if not in_ell:
        return _verdict(TractClass.POLY_INTRACTABLE, "lambda in no l_tau", excluded=_NOT_PT)
    if lam1 < 1 and not _eq(lam1, 1):
        return _verdict(TractClass.SPT, "lambda_1 < 1 and lambda in some l_tau")
    if growth.linear:
        return _verdict(TractClass.SPT, "antisymmetric coordinates grow linearly, lambda in some l_tau")
    if isinstance(growth, SublinearAntisym):
        grid = tau_grid(spec)
        for tau in grid:
            ls = _log_power_sum(spec, tau)
            if ls > 0 and growth.gamma * ls < 1:
                return _verdict(
                    TractClass.SPT,
                    f"a_d = ceil(d/(gamma ln d)) with gamma < 1/ln(sum lambda^tau) at tau={tau:g}"
                    f" (grid tau_min*2^k, k<16, tau_min={grid[0]:g})",
                )
        return _verdict(
            TractClass.UNDECIDABLE,
            f"sublinear antisymmetric growth; gamma condition fails on the tau grid from {grid[0]:g}",
            implied=(),
        )
    return _verdict(TractClass.UNDECIDABLE, "antisymmetric growth class not covered", implied=())


def suf_antisym_margin(spec, tau, a_d, d, C=1.0, q=0.0):
    """``ln(a_d!)/d + ln(C d**q)/d - ln(sum_m lambda_m**tau)``.

    A nonnegative value means the sufficient condition for strong polynomial
    tractability holds at dimension ``d``. ``a_d`` is an integer or a
    callable of ``d``.
    """
    if C < 1 or q < 0:
        raise ValueError("need C >= 1 and q >= 0")
    a = a_d(d) if callable(a_d) else a_d
    if not spec.in_ell(tau):
        raise Divergent(f"lambda is not in l_{tau:g}")
    return math.lgamma(a + 1) / d + (math.log(C) + q * math.log(d)) / d - _log_power_sum(spec, tau)


__all__ = [
    "Constant",
    "DecayInit",
    "Entire",
    "FixedFreeCoords",
    "FullAntisym",
    "FullSym",
    "GeometricScale",
    "LinearAntisym",
    "LogFreeCoords",
    "PolynomialInit",
    "SublinearAntisym",
    "TractClass",
    "Verdict",
    "classify_antisymmetric",
    "classify_scaled",
    "classify_symmetric",
    "classify_unscaled",
    "growth_from_json",
    "scaling_from_json",
    "suf_antisym_margin",
    "tau_grid",
]
