import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import qmc

from bellpersist import bell, dicke, qstate
from bellpersist.bell import (
    BellFunctional,
    SignFunction,
    gbi_classical,
    gbi_classical_by_integration,
    gbi_qcr,
    gbi_quantum,
    lr_max,
    makb,
    makb_alignment_phase,
    makb_xy_settings,
    optimize_wwwzb_angles,
    quantum_value,
    violation_indicator,
    wwwzb_max,
    wwwzb_value,
)
from bellpersist.errors import CapabilityError

F = Fraction


def xy_pair(alpha, alpha_prime):
    return (
        qstate.PlaneObservable.xy_turns(alpha),
        qstate.PlaneObservable.xy_turns(alpha_prime),
    )


class TestMakb:
    def test_two_party_coefficients(self):
        assert makb(2).coefficients == {
            (0, 0): F(1, 2),
            (0, 1): F(1, 2),
            (1, 0): F(1, 2),
            (1, 1): F(-1, 2),
        }

    def test_three_party_mermin_form(self):
        coeffs = makb(3).coefficients
        assert len(coeffs) == 4
        assert coeffs == {
            (0, 0, 1): F(1, 2),
            (0, 1, 0): F(1, 2),
            (1, 0, 0): F(1, 2),
            (1, 1, 1): F(-1, 2),
        }

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_even_party_full_support(self, n):
        coeffs = makb(n).coefficients
        assert len(coeffs) == 2**n
        assert {abs(v) for v in coeffs.values()} == {F(1, 2 ** (n // 2))}

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_self_similarity(self, n):
        parent = makb(n + 1).coefficients
        child = makb(n).coefficients
        for key in itertools.product((0, 1), repeat=n):
            lo = parent.get(key + (0,), F(0))
            hi = parent.get(key + (1,), F(0))
            assert lo + hi == child.get(key, F(0))
            mirrored = tuple(1 - s for s in key)
            assert lo - hi == child.get(mirrored, F(0))

    def test_range_check(self):
        with pytest.raises(ValueError):
            makb(1)
        with pytest.raises(ValueError):
            makb(17)

    def test_mermin_value_on_phase_aligned_ghz(self):
        # sigma_x / sigma_y settings reach the quantum maximum 2 on the
        # GHZ state with relative phase pi/2
        state = qstate.ghz_state(3, phase=math.pi / 2)
        value = quantum_value(makb(3), state, [xy_pair(0.0, 0.25)] * 3)
        assert value == pytest.approx(2.0, abs=1e-12)


class TestLrMax:
    def test_chsh_normalized_bound(self):
        assert lr_max(makb(2)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n", range(2, 7))
    def test_makb_bound_is_one(self, n):
        assert lr_max(makb(n)) == pytest.approx(1.0, abs=1e-12)

    def test_all_positive_saturates_at_sum(self):
        f = BellFunctional(3, {k: 0.25 for k in itertools.product((0, 1), repeat=3)})
        assert lr_max(f) == pytest.approx(2.0, abs=1e-12)

    def test_matches_full_enumeration(self):
        rng = np.random.default_rng(21)
        for n in (2, 3):
            coeffs = {
                k: rng.normal() for k in itertools.product((0, 1), repeat=n)
            }
            f = BellFunctional(n, coeffs)
            best = -np.inf
            for strat in itertools.product((-1, 1), repeat=2 * n):
                tables = [strat[2 * i : 2 * i + 2] for i in range(n)]
                value = sum(
                    c * np.prod([tables[i][s] for i, s in enumerate(key)])
                    for key, c in coeffs.items()
                )
                best = max(best, value)
            assert lr_max(f) == pytest.approx(best, abs=1e-12)

    def test_party_cap(self):
        f = BellFunctional(9, {(0,) * 9: 1.0})
        with pytest.raises(CapabilityError):
            lr_max(f)

    def test_cached(self):
        f = makb(4)
        assert lr_max(f) is lr_max(f) or lr_max(f) == lr_max(f)


class TestQuantumValue:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_symmetric_settings_saturate_qcr(self, n):
        f = makb(n)
        pair = xy_pair(*makb_xy_settings(n))
        state = qstate.ghz_state(n, phase=makb_alignment_phase(n))
        value = quantum_value(f, state, [pair] * n)
        assert value / lr_max(f) == pytest.approx(2 ** ((n - 1) / 2), abs=1e-9)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_shifted_settings_saturate_on_plain_ghz(self, n):
        pair = xy_pair(*makb_xy_settings(n, shift=-0.125))
        value = quantum_value(makb(n), qstate.ghz_state(n), [pair] * n)
        assert value == pytest.approx(2 ** ((n - 1) / 2), abs=1e-12)

    def test_maximally_mixed_gives_zero(self):
        rho = qstate.DenseState(2, np.eye(4) / 4, pure=False)
        value = quantum_value(makb(2), rho, [xy_pair(0.1, 0.3)] * 2)
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            quantum_value(makb(2), qstate.ghz_state(3), [xy_pair(0, 0.25)] * 2)
        with pytest.raises(ValueError):
            quantum_value(makb(2), qstate.ghz_state(2), [xy_pair(0, 0.25)] * 3)


def chsh_optimal_xz_pairs():
    x, z = qstate.PlaneObservable.xz(0.0), qstate.PlaneObservable.xz(math.pi / 2)
    d = qstate.PlaneObservable.xz(-math.pi / 4)
    dp = qstate.PlaneObservable.xz(math.pi / 4)
    return [(x, z), (d, dp)]


class TestWwwzb:
    def test_chsh_sign_function_on_bell_state(self):
        psi_plus = qstate.dicke_state(2, 1)
        value = wwwzb_value(SignFunction.chsh(), psi_plus, chsh_optimal_xz_pairs())
        assert abs(value) == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_constant_sign_function_on_mixed_state(self):
        rho = qstate.DenseState(2, np.eye(4) / 4, pure=False)
        pairs = [(qstate.PlaneObservable.xz(0.2), qstate.PlaneObservable.xz(1.0))] * 2
        assert wwwzb_value(SignFunction.constant(2), rho, pairs) == pytest.approx(0.0, abs=1e-12)

    def test_local_deterministic_models_bounded(self):
        rng = np.random.default_rng(33)
        for _ in range(50):
            n = int(rng.integers(2, 4))
            sf = SignFunction(n, rng.choice([-1, 1], size=(2,) * n))
            # deterministic local state: computational basis product state
            bits = rng.integers(0, 2, size=n)
            amp = np.zeros(2**n)
            amp[int("".join(map(str, bits)), 2)] = 1.0
            state = qstate.DenseState(n, amp, pure=True)
            pairs = [
                (qstate.PlaneObservable.xz(rng.uniform(0, 2 * math.pi)),
                 qstate.PlaneObservable.xz(rng.uniform(0, 2 * math.pi)))
                for _ in range(n)
            ]
            assert abs(wwwzb_value(sf, state, pairs)) <= 1.0 + 1e-10

    def test_max_on_bell_state(self):
        value = wwwzb_max(qstate.dicke_state(2, 1), chsh_optimal_xz_pairs())
        assert value == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_max_ghz3_xy_settings(self):
        pairs = [("X", "Y")] * 3
        assert wwwzb_max(qstate.ghz_state(3), pairs) == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("n", [2, 3])
    def test_max_matches_sign_enumeration(self, n):
        rng = np.random.default_rng(44 + n)
        state = qstate.random_pure_state(n, rng)
        pairs = [
            (qstate.PlaneObservable.xz(rng.uniform(0, 2 * math.pi)),
             qstate.PlaneObservable.xz(rng.uniform(0, 2 * math.pi)))
            for _ in range(n)
        ]
        closed = wwwzb_max(state, pairs)
        best = 0.0
        for raw in itertools.product((-1, 1), repeat=2**n):
            sf = SignFunction(n, np.array(raw).reshape((2,) * n))
            best = max(best, abs(wwwzb_value(sf, state, pairs)))
        assert closed == pytest.approx(best, abs=1e-12)

    def test_party_caps(self):
        with pytest.raises(CapabilityError):
            wwwzb_max(qstate.ghz_state(5), [("X", "Y")] * 5)
        with pytest.raises(CapabilityError):
            wwwzb_value(SignFunction.constant(7), qstate.ghz_state(7), [("X", "Y")] * 7)

    def test_angle_optimizer_recovers_bell_violation(self):
        value, angles = optimize_wwwzb_angles(qstate.dicke_state(2, 1), grid=32)
        assert value == pytest.approx(math.sqrt(2.0), abs=1e-6)
        assert len(angles) == 2

    def test_separable_states_never_violate(self):
        rng = np.random.default_rng(55)
        for _ in range(60):
            n = int(rng.integers(2, 5))
            single = [qstate.random_pure_state(1, rng).amplitudes for _ in range(n)]
            amp = single[0]
            for vec in single[1:]:
                amp = np.kron(amp, vec)
            state = qstate.DenseState(n, amp, pure=True)
            pairs = [
                (qstate.PlaneObservable.xz(rng.uniform(0, 2 * math.pi)),
                 qstate.PlaneObservable.xz(rng.uniform(0, 2 * math.pi)))
                for _ in range(n)
            ]
            assert wwwzb_max(state, pairs) <= 1.0 + 1e-10


class TestViolationIndicator:
    def test_bell_state_violates(self):
        assert violation_indicator(dicke.sym_correlation(dicke.reduced_dicke(2, 1, 0)))

    def test_product_state_boundary_is_not_violation(self):
        sym = dicke.sym_correlation(dicke.reduced_dicke(5, 5, 0))
        assert not violation_indicator(sym)

    def test_reduced_w_state_five_parties(self):
        sym = dicke.sym_correlation(dicke.reduced_dicke(5, 1, 1))
        assert violation_indicator(sym)


class TestGbiConstants:
    def test_quantum_part_is_two_over_pi(self):
        assert gbi_quantum(2) == pytest.approx(2 / math.pi)
        assert gbi_quantum(7) == pytest.approx(2 / math.pi)
        with pytest.raises(ValueError):
            gbi_quantum(1)

    def test_quantum_part_quasi_monte_carlo(self):
        sampler = qmc.Sobol(d=5, scramble=True, seed=90)
        points = sampler.random_base2(m=16)
        est = np.mean(np.abs(np.cos(2 * math.pi * points.sum(axis=1))))
        assert est == pytest.approx(2 / math.pi, abs=2e-3)

    def test_exact_classical_values(self):
        expected = [F(1, 2), F(1, 3), F(5, 24), F(2, 15), F(61, 720), F(17, 315)]
        assert [gbi_classical(n) for n in range(2, 8)] == expected

    @pytest.mark.parametrize("n", range(2, 10))
    def test_integration_route_agrees(self, n):
        assert gbi_classical_by_integration(n) == bell._classical_exact(n)

    def test_classical_monte_carlo_oracle(self):
        rng = np.random.default_rng(17)
        n, trials = 4, 400_000
        alpha1 = rng.uniform(-n / 4, (-n + 2) / 4, size=trials)
        rest = rng.uniform(0, 0.5, size=(trials, n - 1)).sum(axis=1)
        signs = np.sign(np.cos(2 * math.pi * (alpha1 + rest)))
        est, sem = signs.mean(), signs.std() / math.sqrt(trials)
        assert abs(est - float(F(5, 24))) < 3 * sem

    def test_ratio_limit(self):
        ratio = float(gbi_classical(19) / gbi_classical(20))
        assert abs(ratio - math.pi / 2) < 1e-3

    def test_qcr_values(self):
        assert gbi_qcr(2) == pytest.approx(4 / math.pi, abs=1e-12)
        assert gbi_qcr(6) == pytest.approx(1440 / (61 * math.pi), abs=1e-12)
        ratio = gbi_qcr(20) / gbi_qcr(19)
        assert abs(ratio - math.pi / 2) < 1e-3

    def test_range_caps(self):
        with pytest.raises(CapabilityError):
            gbi_classical(31)
        with pytest.raises(CapabilityError):
            gbi_classical_by_integration(11)


class TestJsonRoundTrip:
    def test_functional_round_trip(self):
        f = makb(3).with_game_distribution()
        restored = BellFunctional.from_json(f.to_json())
        assert restored.n_parties == 3
        assert {k: float(v) for k, v in restored.coefficients.items()} == {
            k: float(v) for k, v in f.coefficients.items()
        }
        assert restored.settings_distribution is not None

    def test_distribution_validation(self):
        with pytest.raises(ValueError):
            BellFunctional(2, {(0, 0): 1.0}, settings_distribution={(0, 0): 0.5})
