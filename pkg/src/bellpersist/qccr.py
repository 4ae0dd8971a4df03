"""The distributed sign-guessing game played on shared entanglement.

Each of k players receives a random bit y_i and a setting x_i drawn
jointly with probability proportional to |g(x_1..x_k)|, performs a local
action, and broadcasts one bit; together they guess

    F = y_1 ... y_k * sign(g(x_1, .., x_k)).

Classically the broadcast is limited to y_i f_i(x_i), so the optimal
success probability is (1 + LR(g) / sum|g|) / 2 with LR the
local-realistic maximum.  Measuring a shared state and broadcasting
y_i m_i lifts LR to the quantum mean value.  For equatorial
measurements on a GHZ block the outcome statistics are uniform except
for the full parity, whose bias equals the correlation function, which
is what the sampler here uses; mixing the block uniformly over the
C(N, k) subsets of N parties scales that bias by 1 / C(N, k).

The symmetrized variant asks every k-subset to play at once, which
requires the settings distribution to extend to an exchangeable N-party
distribution with the game distribution as its k-marginals.  That is a
small linear program over type classes, solved here in exact rational
arithmetic with a Farkas certificate on infeasibility.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from . import bell, qstate
from .errors import CapabilityError

MAX_FEASIBILITY_PARTIES = 12


@dataclass(frozen=True)
class GhzMixture:
    """Uniform mixture over party subsets of a GHZ block plus noise.

    Every one of the C(n_parties, block_size) subsets carries the GHZ
    block with equal weight, all other parties maximally mixed.  The
    only surviving equatorial correlator on a measured subset is the
    full one on subsets of exactly the block size, scaled by
    1/C(n_parties, block_size).
    """

    n_parties: int
    block_size: int

    def __post_init__(self):
        if not 1 <= self.block_size <= self.n_parties:
            raise ValueError("block size must lie in [1, n_parties]")

    def visibility(self, subset_size: int) -> float:
        if subset_size != self.block_size:
            return 0.0
        return 1.0 / math.comb(self.n_parties, self.block_size)


@dataclass(frozen=True)
class VisibilityModel:
    """Correlations v * cos(sum of angles); v = 0 is the uncorrelated
    control, v = 1 a pure GHZ block on the measured parties."""

    v: float

    def __post_init__(self):
        if not 0.0 <= self.v <= 1.0:
            raise ValueError("visibility must lie in [0, 1]")

    def visibility(self, subset_size: int) -> float:
        return self.v


StateModel = Union[GhzMixture, VisibilityModel, qstate.DenseState]


@dataclass(frozen=True)
class GameSpec:
    """A playable game: functional with settings distribution, state
    model, and one observable per party per setting."""

    functional: bell.BellFunctional
    observables: tuple[tuple[qstate.PlaneObservable, ...], ...]
    state: StateModel
    name: str = "game"

    def __post_init__(self):
        f = self.functional
        if f.settings_distribution is None:
            raise ValueError("game functionals need a settings distribution")
        if len(self.observables) != f.n_parties:
            raise ValueError("need one observable tuple per party")
        for per_party in self.observables:
            if len(per_party) != f.settings_per_party:
                raise ValueError("need one observable per setting")

    @property
    def n_parties(self) -> int:
        return self.functional.n_parties


def chsh_game() -> GameSpec:
    """Two players sharing a Bell pair; quantum success cos^2(pi/8)."""
    f = bell.BellFunctional(
        2, {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): -1}
    ).with_game_distribution()
    a, ap = bell.makb_xy_settings(2, shift=-0.125)
    pair = (qstate.PlaneObservable.xy_turns(a), qstate.PlaneObservable.xy_turns(ap))
    return GameSpec(f, (pair, pair), GhzMixture(2, 2), name="chsh")


def makb_game(n: int, n_total: int | None = None) -> GameSpec:
    """Mermin-type game for ``n`` players inside ``n_total`` parties.

    Settings are the symmetric equatorial choices shifted so the plain
    GHZ block is optimal.
    """
    n_total = n if n_total is None else n_total
    f = bell.makb(n).with_game_distribution()
    a, ap = bell.makb_xy_settings(n, shift=-0.125)
    pair = (qstate.PlaneObservable.xy_turns(a), qstate.PlaneObservable.xy_turns(ap))
    return GameSpec(f, (pair,) * n, GhzMixture(n_total, n), name=f"makb{n}")


def gbi_game(n: int, grid: int = 32) -> GameSpec:
    """Geometric game with settings discretized to ``grid`` uniform
    equatorial angles per party (practical stand-in for the continuum)."""
    if grid < 2:
        raise ValueError("need at least two settings per party")
    if grid**n > 200_000:
        raise CapabilityError("explicit geometric game too large; reduce grid or parties")
    coeffs = {}
    for key in itertools.product(range(grid), repeat=n):
        g = math.cos(2.0 * math.pi * sum(key) / grid)
        if abs(g) > 1e-15:
            coeffs[key] = g
    f = bell.BellFunctional(n, coeffs, settings_per_party=grid).with_game_distribution()
    obs = tuple(
        tuple(qstate.PlaneObservable.xy_turns(s / grid) for s in range(grid))
        for _ in range(n)
    )
    return GameSpec(f, obs, VisibilityModel(1.0), name=f"gbi{n}x{grid}")


def _settings_table(game: GameSpec, subset: Sequence[int]):
    f = game.functional
    keys = sorted(f.settings_distribution)
    probs = np.array([float(f.settings_distribution[k]) for k in keys])
    coeffs = np.array([float(f.coefficients.get(k, 0)) for k in keys])
    if isinstance(game.state, qstate.DenseState):
        corr = np.array([_dense_correlator(game, subset, k) for k in keys])
    else:
        v = game.state.visibility(len(subset))
        angle_sums = np.array(
            [sum(game.observables[i][s].angle for i, s in enumerate(k)) for k in keys]
        )
        corr = v * np.cos(angle_sums)
    return keys, probs, coeffs, corr


def _dense_correlator(game: GameSpec, subset: Sequence[int], key: tuple[int, ...]) -> float:
    state = game.state
    ops: list[qstate.SiteOperator] = ["I"] * state.n_qubits
    for pos, (party, setting) in enumerate(zip(subset, key)):
        ops[party] = game.observables[pos][setting]
    return qstate.expectation(state, ops)


def _resolve_subset(game: GameSpec, subset: Sequence[int] | None) -> tuple[int, ...]:
    if subset is None:
        subset = tuple(range(game.n_parties))
    subset = tuple(int(i) for i in subset)
    if len(subset) != game.n_parties:
        raise ValueError(
            f"subset size {len(subset)} does not match the {game.n_parties}-party functional"
        )
    if len(set(subset)) != len(subset):
        raise ValueError("subset indices must be distinct")
    n_total = (
        game.state.n_qubits
        if isinstance(game.state, qstate.DenseState)
        else getattr(game.state, "n_parties", game.n_parties)
    )
    if any(not 0 <= i < n_total for i in subset):
        raise ValueError(f"subset {subset} out of range for {n_total} parties")
    return subset


def classical_best(game: GameSpec) -> float:
    """Optimal classical success probability (1 + LR/sum|g|)/2."""
    value = bell.lr_max(game.functional)
    return 0.5 * (1.0 + value / float(game.functional.abs_total()))


def quantum_success(game: GameSpec, subset: Sequence[int] | None = None) -> float:
    """Analytic success probability of the measure-and-broadcast protocol."""
    subset = _resolve_subset(game, subset)
    _, _, coeffs, corr = _settings_table(game, subset)
    quantum = float(np.dot(coeffs, corr))
    return 0.5 * (1.0 + quantum / float(game.functional.abs_total()))


@dataclass(frozen=True)
class SimulationResult:
    game: str
    subset: tuple[int, ...]
    trials: int
    seed: int
    success_rate: float
    stderr: float


def _simulate_chunk(
    rng: np.random.Generator,
    trials: int,
    probs: np.ndarray,
    signs: np.ndarray,
    corr: np.ndarray,
    k: int,
    strategy: np.ndarray | None,
    settings_components: np.ndarray,
    drop_player: int | None,
) -> int:
    s_idx = rng.choice(len(probs), size=trials, p=probs)
    y = rng.integers(0, 2, size=(trials, k)) * 2 - 1
    if strategy is None:
        parity_prob = 0.5 * (1.0 + corr[s_idx])
        parity = np.where(rng.random(trials) < parity_prob, 1, -1)
        m = rng.integers(0, 2, size=(trials, k)) * 2 - 1
        m[:, -1] = parity * np.prod(m[:, :-1], axis=1)
    else:
        comps = settings_components[s_idx]  # (trials, k) setting of each party
        m = strategy[np.arange(k)[None, :], comps]
    broadcast = y * m
    if drop_player is not None:
        broadcast = np.delete(broadcast, drop_player, axis=1)
    guess = np.prod(broadcast, axis=1)
    target = np.prod(y, axis=1) * signs[s_idx]
    return int(np.sum(guess == target))


def simulate(
    game: GameSpec,
    trials: int,
    seed: int,
    subset: Sequence[int] | None = None,
    jobs: int = 1,
    strategy: Sequence[Sequence[int]] | None = None,
    drop_player: int | None = None,
) -> SimulationResult:
    """Monte Carlo play of the game; deterministic for a fixed seed.

    Settings are sampled from the game distribution and outcomes from
    the parity-biased product distribution of the state model (or from
    ``strategy``, a per-party table of deterministic +-1 answers, for
    classical play).  ``jobs`` splits the trials into independently
    seeded streams spawned from the master seed; counts merge by
    addition, so the result depends only on (seed, jobs).
    ``drop_player`` omits one player's broadcast from the guess, which
    should destroy the correlation entirely.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if jobs < 1:
        raise ValueError("need at least one job")
    subset = _resolve_subset(game, subset)
    keys, probs, coeffs, corr = _settings_table(game, subset)
    signs = np.sign(coeffs)
    k = game.n_parties
    strategy_arr = None
    if strategy is not None:
        strategy_arr = np.asarray(strategy, dtype=np.int64)
        if strategy_arr.shape != (k, game.functional.settings_per_party):
            raise ValueError("strategy must give a +-1 answer per party per setting")
        if not np.all(np.abs(strategy_arr) == 1):
            raise ValueError("strategy answers must be +-1")
    components = np.array(keys, dtype=np.int64)
    if drop_player is not None and not 0 <= drop_player < k:
        raise ValueError("drop_player out of range")

    counts = np.full(jobs, trials // jobs)
    counts[: trials % jobs] += 1
    successes = 0
    for child, chunk in zip(np.random.SeedSequence(seed).spawn(jobs), counts):
        if chunk == 0:
            continue
        successes += _simulate_chunk(
            np.random.default_rng(child),
            int(chunk),
            probs,
            signs,
            corr,
            k,
            strategy_arr,
            components,
            drop_player,
        )
    rate = successes / trials
    stderr = math.sqrt(max(rate * (1.0 - rate), 1e-300) / trials)
    return SimulationResult(game.name, subset, trials, seed, rate, stderr)


def outcome_distribution(game: GameSpec, subset: Sequence[int], key: tuple[int, ...]) -> np.ndarray:
    """Oracle outcome distribution over the 2^k sign patterns for one
    settings tuple, from the dense state (validation aid, small k)."""
    if not isinstance(game.state, qstate.DenseState):
        raise CapabilityError("outcome distributions need an explicit dense state")
    k = game.n_parties
    if k > 6:
        raise CapabilityError("outcome enumeration capped at 6 parties")
    state = game.state
    probs = np.zeros(2**k)
    eye = np.eye(2, dtype=complex)
    for out in range(2**k):
        ops: list[qstate.SiteOperator] = [eye] * state.n_qubits
        for pos, party in enumerate(subset):
            sign = 1.0 if not (out >> (k - 1 - pos)) & 1 else -1.0
            mat = game.observables[pos][key[pos]].matrix()
            ops[party] = 0.5 * (eye + sign * mat)
        probs[out] = qstate.expectation(state, ops)
    return probs


def ghz_mixture_density(n_parties: int, block_size: int) -> qstate.DenseState:
    """Dense realization of :class:`GhzMixture` (oracle side, small n)."""
    if n_parties > 8:
        raise CapabilityError("dense mixture realization capped at 8 parties")
    n, k = n_parties, block_size
    dim = 2**n
    rho = np.zeros((dim, dim), dtype=complex)
    block = qstate.ghz_state(k).density()
    rest = np.eye(2 ** (n - k)) / 2 ** (n - k)
    for subset in itertools.combinations(range(n), k):
        order = list(subset) + [q for q in range(n) if q not in subset]
        term = np.kron(block, rest).reshape((2,) * (2 * n))
        perm = [order.index(q) for q in range(n)]
        term = term.transpose(perm + [n + p for p in perm]).reshape(dim, dim)
        rho += term
    rho /= math.comb(n, k)
    return qstate.DenseState(n, rho, pure=False)


# --- exchangeable-marginal feasibility -------------------------------------


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the exchangeable-extension linear program.

    ``witness`` gives, per count j of primed settings, the exact
    probability of each individual N-party settings tuple with that
    count (so the tuple prob times C(N, j) sums to 1).  ``certificate``
    is a Farkas vector y with y.A <= 0 and y.m > 0 proving
    infeasibility.
    """

    feasible: bool
    n_parties: int
    k: int
    witness: tuple[Fraction, ...] | None
    certificate: tuple[Fraction, ...] | None
    reason: str = ""


def _exactify(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    raise TypeError(f"cannot interpret probability {value!r}")


def _phase_one_simplex(
    a_mat: list[list[Fraction]], rhs: list[Fraction]
) -> tuple[list[Fraction] | None, list[Fraction] | None]:
    """Exact phase-1 simplex for {x >= 0 : A x = b}, b >= 0, Bland's rule.

    Returns (solution, None) if feasible, else (None, farkas) with
    farkas.A <= 0 componentwise and farkas.b > 0.
    """
    nc, nv = len(a_mat), len(a_mat[0])
    # tableau: original vars | artificial vars | rhs
    tab = [row[:] + [Fraction(int(i == r)) for i in range(nc)] + [rhs[r]] for r, row in enumerate(a_mat)]
    basis = [nv + r for r in range(nc)]
    cost = [-sum(a_mat[r][j] for r in range(nc)) for j in range(nv)]
    cost += [Fraction(0)] * nc + [-sum(rhs)]

    while True:
        enter = next((j for j in range(nv + nc) if cost[j] < 0), None)
        if enter is None:
            break
        best_row, best_ratio = None, None
        for r in range(nc):
            if tab[r][enter] > 0:
                ratio = tab[r][-1] / tab[r][enter]
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[best_row])
                ):
                    best_row, best_ratio = r, ratio
        if best_row is None:
            raise RuntimeError("phase-1 objective unbounded; inconsistent tableau")
        pivot = tab[best_row][enter]
        tab[best_row] = [v / pivot for v in tab[best_row]]
        for r in range(nc):
            if r != best_row and tab[r][enter]:
                factor = tab[r][enter]
                tab[r] = [v - factor * w for v, w in zip(tab[r], tab[best_row])]
        if cost[enter]:
            factor = cost[enter]
            cost = [v - factor * w for v, w in zip(cost, tab[best_row])]
        basis[best_row] = enter

    objective = -cost[-1]
    if objective == 0:
        solution = [Fraction(0)] * nv
        for r, b in enumerate(basis):
            if b < nv:
                solution[b] = tab[r][-1]
        return solution, None
    # simplex multipliers read off the artificial columns
    farkas = [Fraction(1) - cost[nv + r] for r in range(nc)]
    return None, farkas


def marginal_feasibility(
    dist: Union[Mapping[tuple[int, ...], object], np.ndarray],
    n_parties: int,
) -> FeasibilityResult:
    """Can a k-party settings distribution be every k-marginal of an
    exchangeable N-party distribution?

    The distribution must be permutation symmetric (a marginal of an
    exchangeable distribution always is).  Writing q_j for the
    probability of one N-party tuple with j primed settings, the
    requirement is sum_j C(N-k, j-i) q_j = m_i for each primed count i
    of the marginal, q_j >= 0: a linear program solved exactly.
    """
    if isinstance(dist, np.ndarray):
        k = dist.ndim
        entries = {key: dist[key] for key in itertools.product((0, 1), repeat=k)}
    else:
        entries = {tuple(int(s) for s in key): v for key, v in dist.items()}
        k = len(next(iter(entries)))
    if not 1 <= k <= n_parties <= MAX_FEASIBILITY_PARTIES:
        raise ValueError(
            f"need k <= N <= {MAX_FEASIBILITY_PARTIES}, got k={k}, N={n_parties}"
        )
    table = {}
    for key in itertools.product((0, 1), repeat=k):
        if len(key) != k:
            raise ValueError("ragged settings tuples")
        table[key] = _exactify(entries.get(key, 0))
    if any(v < 0 for v in table.values()):
        raise ValueError("probabilities must be nonnegative")
    total = sum(table.values())
    if total != 1:
        raise ValueError(f"probabilities sum to {total}, expected exactly 1")

    marginal = [None] * (k + 1)
    for key, value in table.items():
        i = sum(key)
        if marginal[i] is None:
            marginal[i] = value
        elif marginal[i] != value:
            return FeasibilityResult(
                False, n_parties, k, None, None,
                reason="distribution is not permutation symmetric",
            )

    a_mat = [
        [Fraction(math.comb(n_parties - k, j - i)) if 0 <= j - i <= n_parties - k else Fraction(0)
         for j in range(n_parties + 1)]
        for i in range(k + 1)
    ]
    solution, farkas = _phase_one_simplex(a_mat, [Fraction(v) for v in marginal])
    if solution is not None:
        assert all(q >= 0 for q in solution)
        assert all(
            sum(a_mat[i][j] * solution[j] for j in range(n_parties + 1)) == marginal[i]
            for i in range(k + 1)
        )
        return FeasibilityResult(True, n_parties, k, tuple(solution), None)
    # verify the Farkas certificate exactly before returning it
    assert farkas is not None
    assert all(
        sum(farkas[i] * a_mat[i][j] for i in range(k + 1)) <= 0
        for j in range(n_parties + 1)
    )
    assert sum(farkas[i] * marginal[i] for i in range(k + 1)) > 0
    return FeasibilityResult(False, n_parties, k, None, tuple(farkas))


def game_distribution(game: GameSpec) -> dict[tuple[int, ...], Fraction]:
    """The game's settings distribution with exact rational weights."""
    f = game.functional
    total = f.abs_total()
    return {k: abs(Fraction(c)) / total for k, c in f.coefficients.items()}


# --- JSON round trip --------------------------------------------------------


def game_to_json(game: GameSpec) -> str:
    if isinstance(game.state, GhzMixture):
        state = {
            "kind": "ghz_mixture",
            "n_parties": game.state.n_parties,
            "block_size": game.state.block_size,
        }
    elif isinstance(game.state, VisibilityModel):
        state = {"kind": "visibility", "v": game.state.v}
    else:
        raise CapabilityError("dense oracle states are not serialized")
    return json.dumps(
        {
            "name": game.name,
            "functional": json.loads(game.functional.to_json()),
            "observables": [
                [{"plane": obs.plane, "turns": obs.turns} for obs in per_party]
                for per_party in game.observables
            ],
            "state": state,
        },
        sort_keys=True,
    )


def game_from_json(text: str) -> GameSpec:
    payload = json.loads(text)
    functional = bell.BellFunctional.from_json(json.dumps(payload["functional"]))
    if functional.settings_distribution is None:
        functional = functional.with_game_distribution()
    observables = tuple(
        tuple(
            qstate.PlaneObservable(o["plane"], 2.0 * math.pi * o["turns"])
            for o in per_party
        )
        for per_party in payload["observables"]
    )
    state_info = payload["state"]
    if state_info["kind"] == "ghz_mixture":
        state: StateModel = GhzMixture(state_info["n_parties"], state_info["block_size"])
    elif state_info["kind"] == "visibility":
        state = VisibilityModel(state_info["v"])
    else:
        raise ValueError(f"unknown state kind {state_info['kind']!r}")
    return GameSpec(functional, observables, state, name=payload.get("name", "game"))
