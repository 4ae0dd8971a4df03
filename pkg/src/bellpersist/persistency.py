"""Symmetrized persistency of Bell correlations.

For uniformly symmetrized mixtures that hand a GHZ block of size M to a
random M-subset of N parties, any M parties can violate a Bell
inequality with quantum-to-classical ratio b * a^M iff

    C(N, M)^-1 * b * a^M > 1,

since the block lands on the measured subset with probability 1/C(N,M).
The number of parties that may be lost while the remaining ones still
violate follows from scanning M; asymptotically the fraction M/N that
must be preserved tends to the root of H(gamma) = gamma * log2(a) with
H the binary entropy.

Frontier decisions near 1 are certified exactly: integer arithmetic for
a = sqrt(2), and exact rationals against a 50-digit pi bracket for the
geometric family.

Dicke-state persistency uses the squared-correlation indicator from the
dicke module: tracing L parties keeps the necessary condition satisfied
as long as the correlation sum stays above 1.

Everything here is a lower bound: better inequalities can only raise
the numbers.  Upper bounds (for single-zero Dicke states half the
register is known to be a ceiling) are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy.special import gammaln

from . import bell, dicke
from .errors import CapabilityError

# directed 50-digit bracket around pi, for exact frontier certificates
_PI_DIGITS = "314159265358979323846264338327950288419716939937510"
_PI_LO = Fraction(int(_PI_DIGITS), 10 ** (len(_PI_DIGITS) - 1))
_PI_HI = _PI_LO + Fraction(1, 10 ** (len(_PI_DIGITS) - 1))

# above this size the exact frontier scan switches to log-domain floats
_EXACT_N_CAP = 600


@dataclass(frozen=True)
class QcrModel:
    """Exponential growth model ratio(M) = b * a^M for a Bell family."""

    a: float
    b: float
    family: str = "custom"

    def __post_init__(self):
        if not self.a > 1:
            raise ValueError("growth base a must exceed 1")
        if not self.b > 0:
            raise ValueError("prefactor b must be positive")

    @classmethod
    def makb(cls) -> "QcrModel":
        return cls(math.sqrt(2.0), 1.0 / math.sqrt(2.0), "makb")

    @classmethod
    def gbi(cls) -> "QcrModel":
        return cls(math.pi / 2.0, 0.5, "gbi")


@dataclass(frozen=True)
class PersistencyResult:
    n_parties: int
    max_traced: int
    witness_m: int
    margin: float

    def __post_init__(self):
        if not 0 <= self.max_traced < self.n_parties:
            raise ValueError("traced count must lie in [0, N)")


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2(1-x), with H(0) = H(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy defined on [0, 1], got {x}")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def gamma_crit(a: float, tol: float = 1e-8) -> float:
    """Root of H(gamma) = gamma * log2(a) in (1/2, 1), by bisection.

    This is the asymptotic fraction of parties that must be preserved
    for the condition C(N, gamma N)^-1 * b * a^(gamma N) > 1 to hold.
    The root lies in (1/2, 1) iff 1 < a < 4.
    """
    if not 1.0 < a < 4.0:
        raise ValueError("root lies in (1/2, 1) only for 1 < a < 4")
    log2a = math.log2(a)

    def g(x: float) -> float:
        return binary_entropy(x) - x * log2a

    lo, hi = 0.5 + 1e-9, 1.0 - 1e-12
    if not (g(lo) > 0 > g(hi)):
        raise RuntimeError("bisection bracket failed")  # unreachable for 1 < a < 4
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _violates_makb_exact(n: int, m: int) -> bool:
    # (1/sqrt2) sqrt2^m > C(n, m)  <=>  2^(m-1) > C(n, m)^2
    return 2 ** (m - 1) > math.comb(n, m) ** 2


def _violates_gbi_exact(n: int, m: int) -> bool:
    # (2/pi) / C_m > C(n, m)  <=>  ratio > pi with exact rational ratio
    coeff = bell.gbi_qcr_coefficient(m) if m <= bell.GBI_RATIONAL_CAP else (
        Fraction(2) / bell._classical_exact(m)
    )
    ratio = coeff / math.comb(n, m)
    if ratio > _PI_HI:
        return True
    if ratio < _PI_LO:
        return False
    raise RuntimeError("pi bracket too coarse to certify the frontier")


def _condition_value(model: QcrModel, n: int, m: int) -> float:
    log_binom = float(gammaln(n + 1) - gammaln(m + 1) - gammaln(n - m + 1))
    if model.family == "gbi" and m <= 80:
        coeff = Fraction(2) / bell._classical_exact(m)
        if n <= 60:
            return float(coeff) / math.pi / math.comb(n, m)
        # big-int logs: the raw rational overflows floats long before its log does
        log_coeff = math.log(coeff.numerator) - math.log(coeff.denominator)
        return math.exp(log_coeff - math.log(math.pi) - log_binom)
    # for large m the classical constant equals 2 (2/pi)^(m+1) to within
    # 3^-m relative error, which makes the (a, b) form exact at float precision
    return math.exp(math.log(model.b) + m * math.log(model.a) - log_binom)


def _violating_mask(model: QcrModel, n: int, exact: bool) -> np.ndarray:
    """Boolean mask over M = 0..n of the violation condition (entries for
    M < 2 forced False)."""
    if exact and model.family == "makb":
        # plain ints: the powers here overflow any fixed-width type
        mask = np.array([m >= 2 and _violates_makb_exact(n, m) for m in range(n + 1)])
    elif exact and model.family == "gbi":
        mask = np.array([m >= 2 and _violates_gbi_exact(n, m) for m in range(n + 1)])
    else:
        ms = np.arange(n + 1)
        log_binom = gammaln(n + 1) - gammaln(ms + 1) - gammaln(n - ms + 1)
        logs = math.log(model.b) + ms * math.log(model.a) - log_binom
        mask = logs > 0
        mask[:2] = False
    return mask


def ghz_persistency(model: QcrModel, n_parties: int, exact: bool | None = None) -> PersistencyResult:
    """Largest number of parties that may be traced out of the
    symmetrized GHZ-block mixture while some subgroup still violates.

    ``max_traced`` is the largest t such that subgroups of M = N - t
    parties satisfy C(N, M)^-1 b a^M > 1 (zero if even t = 1 fails);
    ``witness_m`` is the subgroup size at that frontier and ``margin``
    the condition value there.  ``exact`` defaults to certified
    arithmetic for the built-in families at desk scale.
    """
    if n_parties < 2:
        raise ValueError("need at least two parties")
    if exact is None:
        exact = model.family in ("makb", "gbi") and n_parties <= _EXACT_N_CAP
    if exact and model.family not in ("makb", "gbi"):
        raise CapabilityError("exact certificates exist for the makb/gbi families only")
    mask = _violating_mask(model, n_parties, exact)
    # traced counts t = N - M for M in [2, N-1]
    violating_t = [n_parties - m for m in range(2, n_parties) if mask[m]]
    max_traced = max(violating_t) if violating_t else 0
    witness = n_parties - max_traced if max_traced else n_parties - 1
    margin = _condition_value(model, n_parties, witness)
    return PersistencyResult(n_parties, max_traced, witness, margin)


def frontier_fraction(model: QcrModel, n_parties: int) -> float:
    """Fraction M/N of the smallest subgroup size still violating."""
    result = ghz_persistency(model, n_parties, exact=None if n_parties <= _EXACT_N_CAP else False)
    if result.max_traced == 0:
        raise ValueError(f"no violating subgroup at N = {n_parties}")
    return result.witness_m / n_parties


def dicke_persistency(n_parties: int, m_zeros: int) -> PersistencyResult:
    """Indicator-level persistency of the Dicke state with M zeros.

    ``max_traced`` is the largest L for which the squared-correlation
    sum of the reduced state still exceeds 1 (a necessary condition for
    violation, so the persistency claim is the lower bound
    P >= max_traced + 1); ``margin`` is the sum at that L.
    """
    if not 0 <= m_zeros <= n_parties:
        raise ValueError("need 0 <= M <= N")
    if n_parties < 2:
        raise ValueError("need at least two parties")
    best = 0
    for traced in range(1, n_parties - 1):
        if dicke.sigma_sum(n_parties, m_zeros, traced) > 1:
            best = traced
    margin_l = best if best else 1
    margin = float(dicke.sigma_sum(n_parties, m_zeros, margin_l)) if n_parties > 2 else float(
        dicke.sigma_sum(n_parties, m_zeros, 0)
    )
    return PersistencyResult(n_parties, best, n_parties - best, margin)


def dicke_asymptotic(m_zeros: int, l_values: Iterable[int] = range(5, 41)) -> float:
    """Asymptotic persistency fraction 1/a from the N0 = a L + b fit."""
    fit = dicke.fit_n0_line(m_zeros, l_values)
    return 1.0 / fit.slope
