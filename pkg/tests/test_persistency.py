import math

import pytest

from bellpersist.persistency import (
    PersistencyResult,
    QcrModel,
    binary_entropy,
    dicke_asymptotic,
    dicke_persistency,
    frontier_fraction,
    gamma_crit,
    ghz_persistency,
)


class TestBinaryEntropy:
    def test_half(self):
        assert binary_entropy(0.5) == 1.0

    def test_endpoints(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_symmetry(self):
        for x in (0.1, 0.25, 0.4):
            assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), abs=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            binary_entropy(-0.1)
        with pytest.raises(ValueError):
            binary_entropy(1.1)

    def test_critical_point_identity(self):
        # at the sqrt(2) critical fraction, H(gamma) equals gamma/2
        gamma = 0.905118
        assert binary_entropy(gamma) == pytest.approx(gamma / 2, abs=1e-6)


class TestGammaCrit:
    def test_sqrt2(self):
        assert gamma_crit(math.sqrt(2.0)) == pytest.approx(0.905118, abs=1e-5)

    def test_half_pi(self):
        assert gamma_crit(math.pi / 2.0) == pytest.approx(0.867227, abs=1e-5)

    def test_against_grid_scan_oracle(self):
        a = 2.0
        xs = [0.5 + i * 1e-6 for i in range(int(0.5 / 1e-6))]
        crossing = next(
            x for x in xs if binary_entropy(x) - x * math.log2(a) < 0
        )
        assert gamma_crit(a) == pytest.approx(crossing, abs=1e-5)

    def test_residual_and_side(self):
        for a in (math.sqrt(2.0), math.pi / 2.0, 2.0, 3.5):
            gamma = gamma_crit(a, tol=1e-10)
            assert abs(binary_entropy(gamma) - gamma * math.log2(a)) < 1e-8
            probe = gamma + 1e-4
            assert binary_entropy(probe) < probe * math.log2(a)

    def test_domain(self):
        with pytest.raises(ValueError):
            gamma_crit(1.0)
        with pytest.raises(ValueError):
            gamma_crit(4.5)


class TestGhzPersistency:
    def test_makb_first_instance_at_nine(self):
        assert ghz_persistency(QcrModel.makb(), 9).max_traced == 1
        assert ghz_persistency(QcrModel.makb(), 8).max_traced == 0

    def test_makb_boundary_value_not_strict(self):
        # at N = 8, M = 7 the condition value is exactly 1
        result = ghz_persistency(QcrModel.makb(), 8)
        assert result.witness_m == 7
        assert result.margin == pytest.approx(1.0, abs=1e-12)

    def test_gbi_first_instance_at_seven(self):
        r6 = ghz_persistency(QcrModel.gbi(), 6)
        r7 = ghz_persistency(QcrModel.gbi(), 7)
        assert r6.max_traced == 0 and r7.max_traced == 1
        assert r7.witness_m == 6
        assert r7.margin == pytest.approx(1440 / (427 * math.pi), abs=1e-9)

    def test_exact_and_float_agree(self):
        for model in (QcrModel.makb(), QcrModel.gbi()):
            for n in (20, 60, 150):
                exact = ghz_persistency(model, n, exact=True)
                approx = ghz_persistency(model, n, exact=False)
                assert exact.max_traced == approx.max_traced, (model.family, n)

    def test_monotone_in_n(self):
        for model in (QcrModel.makb(), QcrModel.gbi()):
            previous = 0
            for n in range(2, 201):
                current = ghz_persistency(model, n).max_traced
                assert current >= previous, (model.family, n)
                previous = current

    def test_frontier_fraction_converges(self):
        for model, a in ((QcrModel.makb(), math.sqrt(2.0)), (QcrModel.gbi(), math.pi / 2)):
            fraction = frontier_fraction(model, 10**4)
            assert abs(fraction - gamma_crit(a)) < 0.01

    def test_custom_model(self):
        result = ghz_persistency(QcrModel(2.0, 1.0), 12, exact=False)
        assert 0 <= result.max_traced < 12

    def test_validation(self):
        with pytest.raises(ValueError):
            ghz_persistency(QcrModel.makb(), 1)
        with pytest.raises(ValueError):
            QcrModel(0.9, 1.0)
        with pytest.raises(ValueError):
            PersistencyResult(4, 4, 0, 1.0)


class TestDickePersistency:
    @pytest.mark.parametrize("n,m", [(5, 1), (6, 2), (8, 3), (9, 4)])
    def test_persistency_two_instances(self, n, m):
        result = dicke_persistency(n, m)
        assert result.max_traced >= 1
        assert result.max_traced + 1 >= 2

    def test_four_one_fails_indicator(self):
        assert dicke_persistency(4, 1).max_traced == 0

    @pytest.mark.parametrize("n,m", [(7, 3), (5, 2), (8, 4)])
    def test_preceding_instances_fail(self, n, m):
        assert dicke_persistency(n, m).max_traced == 0

    def test_exchange_symmetry(self):
        for n in range(3, 11):
            for m in range(n + 1):
                assert (
                    dicke_persistency(n, m).max_traced
                    == dicke_persistency(n, n - m).max_traced
                )

    def test_asymptotic_fraction_single_zero(self):
        assert dicke_asymptotic(1, range(5, 26)) == pytest.approx(1 / 3, rel=0.02)

    def test_asymptotic_fraction_grows_with_m(self):
        fractions = [dicke_asymptotic(m, range(5, 21)) for m in (1, 2, 3, 4)]
        assert all(a < b for a, b in zip(fractions, fractions[1:]))
