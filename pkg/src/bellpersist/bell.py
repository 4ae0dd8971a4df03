"""Two-setting Bell functionals and their classical/quantum values.

Covers the recursively built Mermin-type (MAKB) family, the complete
sign-function family of full-correlation inequalities (one operator per
choice of sign function over the 2^n setting combinations), the
squared-correlation violation indicator, and the exact classical
constants of the geometric (continuum-settings, equatorial) inequality
together with its quantum value 2/pi.

Local-realistic maxima are computed by exhaustive enumeration of
deterministic strategies, never heuristically.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Mapping, Sequence, Union

import numpy as np

from . import qstate
from .dicke import SymCorrelation
from .errors import CapabilityError

LR_MAX_PARTY_CAP = 8
WWWZB_VALUE_CAP = 6
WWWZB_MAX_CAP = 4
GBI_RATIONAL_CAP = 30
GBI_INTEGRATION_CAP = 10

Number = Union[int, float, Fraction]
ObservablePair = tuple[qstate.SiteOperator, qstate.SiteOperator]


class BellFunctional:
    """Linear functional over full correlators of a two-(or more-)setting
    Bell scenario.

    ``coefficients`` maps settings tuples (one entry per party, each in
    ``range(settings_per_party)``) to real weights.  An optional
    probability distribution over settings tuples rides along for
    communication-game use; the local-realistic maximum is cached after
    the first computation.
    """

    def __init__(
        self,
        n_parties: int,
        coefficients: Mapping[tuple[int, ...], Number],
        settings_per_party: int = 2,
        settings_distribution: Mapping[tuple[int, ...], Number] | None = None,
    ):
        if n_parties < 1:
            raise ValueError("need at least one party")
        if settings_per_party < 2:
            raise ValueError("need at least two settings per party")
        self.n_parties = n_parties
        self.settings_per_party = settings_per_party
        self.coefficients = {
            self._check_key(k): v for k, v in coefficients.items() if v != 0
        }
        if settings_distribution is not None:
            dist = {self._check_key(k): v for k, v in settings_distribution.items()}
            if any(v < 0 for v in dist.values()):
                raise ValueError("settings probabilities must be nonnegative")
            total = sum(dist.values())
            if abs(float(total) - 1.0) > 1e-12:
                raise ValueError(f"settings probabilities sum to {total}")
            self.settings_distribution = dist
        else:
            self.settings_distribution = None
        self._lr_max: float | None = None

    def _check_key(self, key: tuple[int, ...]) -> tuple[int, ...]:
        key = tuple(int(s) for s in key)
        if len(key) != self.n_parties:
            raise ValueError(f"settings tuple {key} has wrong arity")
        if any(not 0 <= s < self.settings_per_party for s in key):
            raise ValueError(f"settings tuple {key} out of range")
        return key

    def abs_total(self) -> Fraction:
        return sum((abs(Fraction(c)) for c in self.coefficients.values()), Fraction(0))

    def with_game_distribution(self) -> "BellFunctional":
        """Attach the distribution P(s) proportional to |coefficient(s)|."""
        total = self.abs_total()
        dist = {k: abs(Fraction(c)) / total for k, c in self.coefficients.items()}
        return BellFunctional(
            self.n_parties, self.coefficients, self.settings_per_party, dist
        )

    def _key_string(self, key: tuple[int, ...]) -> str:
        if self.settings_per_party <= 10:
            return "".join(str(s) for s in key)
        return ",".join(str(s) for s in key)

    def to_json(self) -> str:
        payload = {
            "n_parties": self.n_parties,
            "settings_per_party": self.settings_per_party,
            "coefficients": {
                self._key_string(k): float(v) for k, v in sorted(self.coefficients.items())
            },
        }
        if self.settings_distribution is not None:
            payload["settings_distribution"] = {
                self._key_string(k): float(v)
                for k, v in sorted(self.settings_distribution.items())
            }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BellFunctional":
        payload = json.loads(text)
        spp = int(payload.get("settings_per_party", 2))

        def parse_key(s: str) -> tuple[int, ...]:
            if "," in s:
                return tuple(int(tok) for tok in s.split(","))
            return tuple(int(ch) for ch in s)

        dist = payload.get("settings_distribution")
        return cls(
            int(payload["n_parties"]),
            {parse_key(k): v for k, v in payload["coefficients"].items()},
            spp,
            None if dist is None else {parse_key(k): v for k, v in dist.items()},
        )


def makb(n: int) -> BellFunctional:
    """Mermin-type functional on ``n`` parties from the halving recursion.

    Base case on two parties is (A1(A2 + A2') + A1'(A2 - A2'))/2; each
    added party contributes (A+A')/2 times the previous functional plus
    (A-A')/2 times the previous functional with primed and unprimed
    settings exchanged everywhere.  Coefficients are exact dyadic
    rationals; for odd n half of them vanish.
    """
    if not 2 <= n <= 16:
        raise ValueError(f"party count {n} outside supported range 2..16")
    coeffs: dict[tuple[int, ...], Fraction] = {(0,): Fraction(1)}
    for _ in range(n - 1):
        new: dict[tuple[int, ...], Fraction] = {}
        # a key can be absent while its prime-swapped mirror is not
        keys = set(coeffs) | {tuple(1 - s for s in k) for k in coeffs}
        for key in keys:
            value = coeffs.get(key, Fraction(0))
            swapped = coeffs.get(tuple(1 - s for s in key), Fraction(0))
            plus = (value + swapped) / 2
            minus = (value - swapped) / 2
            if plus:
                new[key + (0,)] = plus
            if minus:
                new[key + (1,)] = minus
        coeffs = new
    return BellFunctional(n, coeffs)


def makb_xy_settings(n: int, shift: float = 0.0) -> tuple[float, float]:
    """Symmetric equatorial settings (in turns) saturating the MAKB ratio.

    Returns (alpha, alpha') = (1/(8n) + shift, (2n+1)/(8n) + shift).
    With shift 0 these reach the quantum maximum on the GHZ state whose
    relative phase is n*pi/4 (see :func:`makb_alignment_phase`); the
    shift -1/8 moves the optimum to the phase-0 GHZ state instead.  Both
    choices are related by local z rotations.
    """
    return 1.0 / (8 * n) + shift, (2 * n + 1) / (8 * n) + shift


def makb_alignment_phase(n: int) -> float:
    """GHZ relative phase for which :func:`makb_xy_settings` is optimal."""
    return n * math.pi / 4.0


def lr_max(f: BellFunctional) -> float:
    """Maximum of the functional over deterministic local strategies.

    Enumerates all 2^(2n) assignments of +-1 outcomes to every party's
    two settings (exactly; strategies of parties 2..n are enumerated and
    party 1 is optimized in closed form per strategy).  The result is
    cached on the functional.
    """
    if f._lr_max is not None:
        return f._lr_max
    if f.settings_per_party != 2:
        raise CapabilityError("exhaustive search implemented for two settings only")
    n = f.n_parties
    if n > LR_MAX_PARTY_CAP:
        raise CapabilityError(f"exhaustive search capped at {LR_MAX_PARTY_CAP} parties")
    coeff = np.zeros((2,) * n)
    for key, value in f.coefficients.items():
        coeff[key] = float(value)
    if n == 1:
        best = float(np.abs(coeff).sum())
    else:
        # rows of `strategies`: outcome pairs (a(0), a(1)) per trailing party
        base = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]])
        strategies = reduce(np.kron, [base] * (n - 1))
        grouped = strategies @ coeff.reshape(2, -1).T
        best = float(np.max(np.abs(grouped).sum(axis=1)))
    f._lr_max = best
    return best


def quantum_value(
    f: BellFunctional,
    state: qstate.DenseState,
    observables: Sequence[ObservablePair],
) -> float:
    """Quantum mean value: sum of coefficients times dense correlators.

    ``observables[i]`` holds party i's operators, indexed by the setting.
    """
    if len(observables) != f.n_parties:
        raise ValueError(
            f"need observable choices for {f.n_parties} parties, got {len(observables)}"
        )
    if state.n_qubits != f.n_parties:
        raise ValueError(
            f"state has {state.n_qubits} qubits, functional has {f.n_parties} parties"
        )
    total = 0.0
    for key, value in f.coefficients.items():
        ops = [observables[i][s] for i, s in enumerate(key)]
        total += float(value) * qstate.expectation(state, ops)
    return total


@dataclass(frozen=True)
class SignFunction:
    """A +-1 assignment to every tuple of two-setting choices."""

    n: int
    signs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.signs, dtype=np.int8).reshape((2,) * self.n)
        if not np.all(np.abs(arr) == 1):
            raise ValueError("sign function entries must be +-1")
        arr.setflags(write=False)
        object.__setattr__(self, "signs", arr)

    @classmethod
    def chsh(cls) -> "SignFunction":
        return cls(2, np.array([[1, 1], [1, -1]]))

    @classmethod
    def constant(cls, n: int, sign: int = 1) -> "SignFunction":
        return cls(n, np.full((2,) * n, sign, dtype=np.int8))


def _sum_observable(pair: ObservablePair, s: int) -> np.ndarray:
    a, _ = qstate._site_matrix(pair[0])
    b, _ = qstate._site_matrix(pair[1])
    return a + (1 if s == 0 else -1) * b


def _sign_term(
    state: qstate.DenseState, observables: Sequence[ObservablePair], key: tuple[int, ...]
) -> float:
    ops = [_sum_observable(observables[i], s) for i, s in enumerate(key)]
    return qstate.expectation(state, ops)


def wwwzb_value(
    sf: SignFunction,
    state: qstate.DenseState,
    observables: Sequence[ObservablePair],
) -> float:
    """Mean value of the full-correlation Bell operator for one sign
    function: 2^-n sum_s S(s) <(A_1 + s_1 A_1') x ... x (A_n + s_n A_n')>.

    Local-realistic models obey |value| <= 1.
    """
    n = sf.n
    if n > WWWZB_VALUE_CAP:
        raise CapabilityError(f"sign-function evaluation capped at {WWWZB_VALUE_CAP} parties")
    if len(observables) != n or state.n_qubits != n:
        raise ValueError("state/observable shapes do not match the sign function")
    total = 0.0
    for key in itertools.product((0, 1), repeat=n):
        total += float(sf.signs[key]) * _sign_term(state, observables, key)
    return total / 2**n


def wwwzb_max(
    state: qstate.DenseState, observables: Sequence[ObservablePair]
) -> float:
    """Best value over all 2^(2^n) sign functions at fixed observables.

    The optimal sign function matches the sign of each term, so the
    maximum equals 2^-n sum_s |<(A_1 + s_1 A_1') x ...>| without
    enumerating sign functions.
    """
    n = state.n_qubits
    if n > WWWZB_MAX_CAP:
        raise CapabilityError(f"sign-function family capped at {WWWZB_MAX_CAP} parties")
    if len(observables) != n:
        raise ValueError(f"need observable pairs for {n} parties")
    total = 0.0
    for key in itertools.product((0, 1), repeat=n):
        total += abs(_sign_term(state, observables, key))
    return total / 2**n


def optimize_wwwzb_angles(
    state: qstate.DenseState,
    grid: int = 32,
    sweeps: int = 6,
    refine: int = 3,
) -> tuple[float, list[tuple[float, float]]]:
    """Maximize :func:`wwwzb_max` over x-z plane observable angles.

    Coarse per-angle grid search with coordinate-descent sweeps, then
    local grid refinement around the best point.  Returns the best value
    and the (beta, beta') angle pairs per party.
    """
    n = state.n_qubits
    angles = np.zeros(2 * n)
    angles[1::2] = math.pi / 2

    def value(a: np.ndarray) -> float:
        pairs = [
            (qstate.PlaneObservable.xz(a[2 * i]), qstate.PlaneObservable.xz(a[2 * i + 1]))
            for i in range(n)
        ]
        return wwwzb_max(state, pairs)

    best = value(angles)
    step = math.pi / grid
    candidates = np.arange(grid) * (2 * math.pi / grid)
    for _ in range(sweeps):
        improved = False
        for j in range(2 * n):
            trial = angles.copy()
            for cand in candidates:
                trial[j] = cand
                v = value(trial)
                if v > best + 1e-13:
                    best, angles = v, trial.copy()
                    improved = True
        if not improved:
            break
    for _ in range(refine):
        step /= 4
        for j in range(2 * n):
            trial = angles.copy()
            for cand in (angles[j] - step, angles[j] + step):
                trial[j] = cand
                v = value(trial)
                if v > best:
                    best, angles = v, trial.copy()
    return best, [(float(angles[2 * i]), float(angles[2 * i + 1])) for i in range(n)]


def violation_indicator(sym: SymCorrelation) -> bool:
    """Whether the squared x/z correlation sum strictly exceeds 1.

    Necessary condition for violating any two-setting full-correlation
    inequality; exact rational arithmetic keeps boundary cases honest.
    """
    total = sum(
        (math.comb(sym.n, k) * v * v for k, v in enumerate(sym.values)),
        start=Fraction(0),
    )
    return total > 1


# --- geometric-inequality constants ---------------------------------------


_zigzag_cache: list[int] = [1]
_zigzag_row: list[int] = [1]


def _zigzag_numbers(n: int) -> list[int]:
    """Alternating-permutation counts 1, 1, 1, 2, 5, 16, 61, ... via the
    boustrophedon recurrence (cached incrementally)."""
    global _zigzag_row
    while len(_zigzag_cache) <= n:
        size = len(_zigzag_cache)
        new = [0]
        for k in range(size):
            new.append(new[-1] + _zigzag_row[size - 1 - k])
        _zigzag_row = new
        _zigzag_cache.append(new[-1])
    return _zigzag_cache[: n + 1]


def _classical_exact(n: int) -> Fraction:
    return Fraction(_zigzag_numbers(n)[n], math.factorial(n))


def gbi_quantum(n: int) -> float:
    """Quantum side of the equatorial geometric inequality: the average
    of |cos(2 pi sum_i alpha_i)| over independent uniform angles, which
    is 2/pi for every party count."""
    if n < 2:
        raise ValueError("need at least two parties")
    return 2.0 / math.pi


def gbi_classical(n: int) -> Fraction:
    """Optimal classical value of the geometric inequality, exactly.

    Equals the number of alternating permutations of n elements divided
    by n!; see :func:`gbi_classical_by_integration` for the independent
    integral route.
    """
    if not 2 <= n <= GBI_RATIONAL_CAP:
        raise CapabilityError(f"party count {n} outside supported range 2..{GBI_RATIONAL_CAP}")
    return _classical_exact(n)


def gbi_qcr(n: int) -> float:
    """Quantum-to-classical ratio (2/pi) / C_n of the geometric inequality."""
    return float(gbi_qcr_coefficient(n)) / math.pi


def gbi_qcr_coefficient(n: int) -> Fraction:
    """Exact rational r with quantum-to-classical ratio equal to r / pi."""
    c = gbi_classical(n)
    return Fraction(2, 1) / c


# exact piecewise-polynomial machinery for the defining sign integral

Poly = list  # coefficient list, lowest order first, Fraction entries


def _poly_mul(p: Poly, q: Poly) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return [
        (p[i] if i < len(p) else Fraction(0)) + (q[i] if i < len(q) else Fraction(0))
        for i in range(n)
    ]


def _poly_eval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_integrate(p: Poly, lo: Fraction, hi: Fraction) -> Fraction:
    anti = [Fraction(0)] + [c / (i + 1) for i, c in enumerate(p)]
    return _poly_eval(anti, hi) - _poly_eval(anti, lo)


def _shifted_power(shift: int, degree: int) -> Poly:
    """Coefficients of (V + shift)^degree."""
    return [
        Fraction(math.comb(degree, i) * shift ** (degree - i)) for i in range(degree + 1)
    ]


def _uniform_sum_pieces(m: int) -> list[Poly]:
    """Exact density of a sum of m U(0,1) variables, one polynomial per
    unit interval [j, j+1)."""
    fact = math.factorial(m - 1)
    pieces = []
    for j in range(m):
        poly = [Fraction(0)] * m
        for i in range(j + 1):
            c = Fraction((-1) ** i * math.comb(m, i), fact)
            shifted = _shifted_power(-i, m - 1)
            poly = [a + c * b for a, b in zip(poly, shifted)]
        pieces.append(poly)
    return pieces


def _window_average_piece(y0: int, offset: int) -> Poly:
    """Average of the square wave sign(cos(pi x / 2)) over the unit
    window [y, y+1], as a linear polynomial in V where y = 2V - offset
    and y0 = floor(y).  Piecewise linear with period 4 in y."""
    k = y0 % 4
    base = y0 - k
    if k == 0:  # 1 - 2(y - base)
        return [Fraction(1 + 2 * (offset + base)), Fraction(-4)]
    if k == 1:
        return [Fraction(-1)]
    if k == 2:  # 2(y - base) - 5
        return [Fraction(-2 * (offset + base) - 5), Fraction(4)]
    return [Fraction(1)]


def gbi_classical_by_integration(n: int) -> Fraction:
    """Classical optimum from its defining sign integral, exactly.

    The optimum is the average of sign(cos(2 pi sum_i alpha_i)) with the
    first angle uniform on a half-turn window ending at (-n+2)/4 and the
    others uniform on [0, 1/2].  Substituting the Irwin-Hall density of
    the angle sum turns this into exact polynomial integrals over
    half-integer intervals.
    """
    if not 2 <= n <= GBI_INTEGRATION_CAP:
        raise CapabilityError(
            f"integration route capped at {GBI_INTEGRATION_CAP} parties"
        )
    m = n - 1
    pieces = _uniform_sum_pieces(m)
    total = Fraction(0)
    for h in range(2 * m):  # V in [h/2, (h+1)/2]
        fpoly = pieces[h // 2]
        # the two unit windows cover the half-turn range of the first angle
        ipoly = _poly_add(
            _window_average_piece(h - n, n), _window_average_piece(h - n + 1, n - 1)
        )
        product = _poly_mul(fpoly, ipoly)
        total += _poly_integrate(product, Fraction(h, 2), Fraction(h + 1, 2))
    return total / 2
