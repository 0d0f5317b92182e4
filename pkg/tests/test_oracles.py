import math
import random
from fractions import Fraction

import pytest

from infodens import (
    Channel,
    CostFunction,
    INF,
    Joint,
    Pmf,
    RandomizedFunction,
    SearchConfig,
    ZERO,
    achieving_kernel,
    brute_force_guesswork_leakage,
    brute_force_pmc,
    certify_pmc,
    cost_from_kernel,
    cost_function_leakage,
    guesswork_leakage,
    kernel_from_cost,
    pmc,
    randomized_function_leakage,
)
from infodens.errors import AllInfinitePrior, KTooSmall, NormalizationDegenerate
from infodens.sampling import random_cost, random_joint, random_kernel

HALF = Fraction(1, 2)


def _identity_kernel(n):
    return RandomizedFunction(Channel.identity(n).rows)


class TestRandomizedFunctionLeakage:
    def test_constant_guess_uses_zero_over_zero(self, binary_symmetric_joint):
        constant = RandomizedFunction(((Fraction(1),), (Fraction(1),)))
        assert randomized_function_leakage(binary_symmetric_joint, 0, constant) == ZERO

    def test_guessing_the_secret_itself(self, binary_symmetric_joint):
        value = randomized_function_leakage(
            binary_symmetric_joint, 0, _identity_kernel(2)
        )
        # prior error 1/2, posterior error 1/4
        assert value.ratio == Fraction(2)

    def test_never_exceeds_pmc(self):
        rng = random.Random(99)
        for _ in range(60):
            j = random_joint(rng, rng.randint(2, 3), rng.randint(2, 3))
            u = random_kernel(rng, j.n_inputs, rng.randint(2, 3))
            for y in j.support:
                lam = randomized_function_leakage(j, y, u)
                assert lam.nats <= pmc(j, y).nats + 1e-12

    def test_indicator_reaches_infinity(self, zero_entry_joint):
        indicator = RandomizedFunction(((Fraction(1), Fraction(0)), (HALF, HALF)))
        assert randomized_function_leakage(zero_entry_joint, 0, indicator) == INF


class TestCostFunctionLeakage:
    def test_constant_cost_leaks_nothing(self, binary_symmetric_joint):
        c = CostFunction(((1.0, 1.0), (1.0, 1.0)))
        assert cost_function_leakage(binary_symmetric_joint, 0, c) == ZERO

    def test_zero_one_loss(self, binary_symmetric_joint):
        c = CostFunction(((0, 1), (1, 0)))
        value = cost_function_leakage(binary_symmetric_joint, 0, c)
        assert value.ratio == Fraction(2)

    def test_zero_column_on_posterior_support(self, zero_entry_joint):
        # action 0 costs nothing exactly where the posterior concentrates
        c = CostFunction(((0, 1), (1, 0)))
        assert cost_function_leakage(zero_entry_joint, 0, c) == INF

    def test_all_infinite_prior_rejected(self, binary_symmetric_joint):
        c = CostFunction(((math.inf, 1.0), (1.0, 1.0)))  # one all-finite action
        assert cost_function_leakage(binary_symmetric_joint, 0, c).is_finite
        c_bad = CostFunction(((math.inf, math.inf), (1.0, math.inf)))
        with pytest.raises(AllInfinitePrior):
            cost_function_leakage(binary_symmetric_joint, 0, c_bad)

    def test_never_exceeds_pmc(self):
        rng = random.Random(7)
        for _ in range(60):
            j = random_joint(rng, rng.randint(2, 3), rng.randint(2, 3))
            c = random_cost(rng, j.n_inputs, rng.randint(2, 3))
            for y in j.support:
                lam = cost_function_leakage(j, y, c)
                assert lam.nats <= pmc(j, y).nats + 1e-12


class TestCostKernelEquivalence:
    def test_deterministic_kernel_gives_zero_one_loss(self):
        c = cost_from_kernel(_identity_kernel(2))
        assert c.table == ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))

    def test_constant_kernel_round_trip(self, binary_symmetric_joint):
        constant = RandomizedFunction(((Fraction(1),), (Fraction(1),)))
        c = cost_from_kernel(constant)
        assert cost_function_leakage(binary_symmetric_joint, 0, c) == ZERO

    def test_leakage_preserved_on_random_pairs(self):
        rng = random.Random(2024)
        for _ in range(100):
            j = random_joint(rng, 3, 3)
            u = random_kernel(rng, 3, 3)
            c = cost_from_kernel(u)
            for y in j.support:
                lam_u = randomized_function_leakage(j, y, u).nats
                lam_c = cost_function_leakage(j, y, c).nats
                assert lam_c == pytest.approx(lam_u, abs=1e-12)

    def test_leakage_preserved_exactly_in_rational_mode(self):
        rng = random.Random(5)
        for _ in range(20):
            j = random_joint(rng, 2, 3, exact=True)
            u = random_kernel(rng, 2, 2, exact=True)
            c = cost_from_kernel(u)
            for y in j.support:
                assert cost_function_leakage(j, y, c) == randomized_function_leakage(
                    j, y, u
                )


class TestAchievingKernel:
    def test_exact_on_canonical_instance(self, binary_symmetric_joint):
        w = achieving_kernel(binary_symmetric_joint, 0, k=8)
        assert randomized_function_leakage(binary_symmetric_joint, 0, w) == pmc(
            binary_symmetric_joint, 0
        )

    def test_independent_joint_gives_zero(self, independent_joint):
        for k in (2, 5, 16):
            w = achieving_kernel(independent_joint, 0, k=k)
            assert randomized_function_leakage(independent_joint, 0, w) == ZERO

    def test_k_too_small_on_skewed_instance(self):
        prior = Pmf((Fraction(4, 5), Fraction(1, 5)))
        channel = Channel(
            ((Fraction(1, 10), Fraction(9, 10)), (Fraction(9, 10), Fraction(1, 10)))
        )
        j = Joint.from_prior_channel(prior, channel)
        # the max-ratio secret value carries prior mass 4/5 > 1/2
        with pytest.raises(KTooSmall):
            achieving_kernel(j, 0, k=1)
        w = achieving_kernel(j, 0)  # doubling finds an adequate k
        assert randomized_function_leakage(j, 0, w) == pmc(j, 0)

    def test_infinite_target_rejected(self, zero_entry_joint):
        with pytest.raises(ValueError):
            achieving_kernel(zero_entry_joint, 0, k=8)


class TestBruteForce:
    def test_canonical_instance_found_exactly(self, binary_symmetric_joint):
        cfg = SearchConfig(resolution=11, max_u=3)
        value = brute_force_pmc(binary_symmetric_joint, 0, cfg)
        # the two-way split of the max-ratio secret sits on the grid
        assert value.ratio == Fraction(2)
        assert value == pmc(binary_symmetric_joint, 0)

    def test_independent_joint_is_zero(self, independent_joint):
        cfg = SearchConfig(resolution=5, max_u=2)
        assert brute_force_pmc(independent_joint, 0, cfg) == ZERO

    def test_infinite_pmc_found_via_indicator(self, zero_entry_joint):
        cfg = SearchConfig(resolution=5, max_u=2)
        cert = certify_pmc(zero_entry_joint, 0, cfg)
        assert cert.oracle_value == INF
        assert cert.closed_form == INF
        assert cert.gap_nats == 0.0
        # the witness flags the posterior's support with a half/half row outside
        assert cert.witness.rows[0] == (Fraction(1), Fraction(0))
        assert cert.witness.rows[1] == (HALF, HALF)

    def test_certificate_gap_zero_on_canonical(self, binary_symmetric_joint):
        cert = certify_pmc(binary_symmetric_joint, 0, SearchConfig(resolution=11, max_u=3))
        assert cert.gap_nats == pytest.approx(0.0, abs=1e-15)
        assert cert.dominance_ok
        payload = cert.to_dict()
        assert payload["gap"] == 0.0
        assert payload["oracle_value"] == pytest.approx(math.log(2))

    def test_sampled_regime_still_dominated(self):
        rng = random.Random(11)
        j = random_joint(rng, 4, 3)
        cfg = SearchConfig(resolution=5, max_u=3, max_iterations=300, seed=4)
        for y in j.support:
            assert brute_force_pmc(j, y, cfg).nats <= pmc(j, y).nats + 1e-12

    def test_enormous_exhaustive_grid_rejected(self):
        from infodens.errors import BudgetExceeded

        rng = random.Random(12)
        j = random_joint(rng, 3, 2)
        with pytest.raises(BudgetExceeded):
            brute_force_pmc(j, 0, SearchConfig(resolution=40, max_u=3))

    def test_search_config_validation(self):
        with pytest.raises(ValueError):
            SearchConfig(resolution=1)
        with pytest.raises(ValueError):
            SearchConfig(max_u=1)
        with pytest.raises(ValueError):
            SearchConfig(k=0)


class TestKernelFromCost:
    def test_zero_one_loss_recovers_value(self, binary_symmetric_joint):
        c = CostFunction(((0, 1), (1, 0)))
        target = cost_function_leakage(binary_symmetric_joint, 0, c)
        u = kernel_from_cost(c, binary_symmetric_joint, 0)
        lam = randomized_function_leakage(binary_symmetric_joint, 0, u)
        assert abs(lam.nats - target.nats) <= 1e-9

    def test_constant_cost_any_mixture_works(self, binary_symmetric_joint):
        c = CostFunction(((0.7, 0.7), (0.7, 0.7)))
        u = kernel_from_cost(c, binary_symmetric_joint, 0)
        lam = randomized_function_leakage(binary_symmetric_joint, 0, u)
        assert abs(lam.nats) <= 1e-9

    def test_all_zero_cost_rejected(self, binary_symmetric_joint):
        with pytest.raises(NormalizationDegenerate):
            kernel_from_cost(
                CostFunction(((0.0, 0.0), (0.0, 0.0))), binary_symmetric_joint, 0
            )

    def test_infinite_target_uses_indicator(self, zero_entry_joint):
        c = CostFunction(((0, 1), (1, 0)))
        u = kernel_from_cost(c, zero_entry_joint, 0)
        assert randomized_function_leakage(zero_entry_joint, 0, u) == INF

    def test_random_normalized_costs_match(self):
        rng = random.Random(31337)
        for _ in range(40):
            j = random_joint(rng, rng.randint(2, 3), rng.randint(2, 3))
            c = random_cost(rng, j.n_inputs, rng.randint(2, 3))
            y = rng.choice(j.support)
            target = cost_function_leakage(j, y, c)
            u = kernel_from_cost(c, j, y)
            lam = randomized_function_leakage(j, y, u)
            assert abs(lam.nats - target.nats) <= 1e-9


class TestGuessworkLeakage:
    def test_single_guess_alphabet_is_zero(self, binary_symmetric_joint):
        constant = RandomizedFunction(((Fraction(1),), (Fraction(1),)))
        assert guesswork_leakage(binary_symmetric_joint, 0, constant) == ZERO

    def test_independent_is_zero(self, independent_joint):
        cfg = SearchConfig(resolution=5, max_u=3)
        assert brute_force_guesswork_leakage(independent_joint, 0, cfg) == ZERO

    def test_identity_guess_value(self, binary_symmetric_joint):
        value = guesswork_leakage(binary_symmetric_joint, 0, _identity_kernel(2))
        # prior guesswork 3/2, posterior guesswork 5/4
        assert value.ratio == Fraction(6, 5)

    def test_canonical_grid_value_and_dominance(self, binary_symmetric_joint):
        cfg = SearchConfig(resolution=11, max_u=3)
        value = brute_force_guesswork_leakage(binary_symmetric_joint, 0, cfg)
        # best three-symbol guess variable: split the max-ratio secret in two
        assert value.ratio == Fraction(14, 11)
        assert value <= pmc(binary_symmetric_joint, 0)

    def test_never_exceeds_pmc_on_random_instances(self):
        rng = random.Random(55)
        cfg = SearchConfig(resolution=4, max_u=3, max_iterations=100, seed=1)
        for _ in range(15):
            j = random_joint(rng, rng.randint(2, 3), rng.randint(2, 3))
            for y in j.support:
                value = brute_force_guesswork_leakage(j, y, cfg)
                assert value.nats <= pmc(j, y).nats + 1e-12

    def test_large_guess_alphabet_rejected(self, binary_symmetric_joint):
        from infodens.errors import BudgetExceeded

        wide = RandomizedFunction(
            ((Fraction(1, 8),) * 8, (Fraction(1, 8),) * 8)
        )
        with pytest.raises(BudgetExceeded):
            guesswork_leakage(binary_symmetric_joint, 0, wide)


class TestPreProcessingClosure:
    def test_kernel_induced_secret_leaks_less(self):
        rng = random.Random(77)
        for _ in range(30):
            j = random_joint(rng, 3, 3)
            kernel = random_kernel(rng, 3, 2)
            # the induced secret U with its own channel to Y
            marginal = [
                sum(j.prior[x] * kernel.rows[x][u] for x in range(3)) for u in range(2)
            ]
            posts = [
                [j.prior[x] * kernel.rows[x][u] / marginal[u] for x in range(3)]
                for u in range(2)
            ]
            rows = tuple(
                tuple(
                    sum(posts[u][x] * j.channel.rows[x][y] for x in range(3))
                    for y in range(j.n_outputs)
                )
                for u in range(2)
            )
            induced = Joint.from_prior_channel(Pmf(tuple(marginal)), Channel(rows))
            for y in j.support:
                assert pmc(induced, y).nats <= pmc(j, y).nats + 1e-10
