import math
import random
from fractions import Fraction

import pytest

from infodens import (
    Channel,
    Guarantee,
    GuaranteeKind,
    INF,
    Joint,
    Pmf,
    ZERO,
    conditional_pmc,
    expected_pmc,
    guarantee_level,
    leakage_profile,
    max_cost_leakage,
    max_divergence,
    max_realizable_cost,
    pmc,
    pml,
)
from infodens.errors import UndefinedOutcome
from infodens.sampling import random_joint


class TestPmc:
    def test_independent_is_zero(self, independent_joint):
        for y in independent_joint.support:
            assert pmc(independent_joint, y) == ZERO

    def test_binary_symmetric_value(self, binary_symmetric_joint):
        value = pmc(binary_symmetric_joint, 0)
        assert value.ratio == Fraction(2)
        # cross-check against the divergence of the prior from the posterior
        oracle = max_divergence(
            binary_symmetric_joint.prior, binary_symmetric_joint.posterior(0)
        )
        assert value == oracle

    def test_zero_posterior_entry_is_infinite(self, zero_entry_joint):
        assert pmc(zero_entry_joint, 0) == INF
        assert zero_entry_joint.posterior(0) == (Fraction(1), Fraction(0))

    def test_undefined_outcome(self):
        j = Joint.from_prior_channel(Pmf((1, 1)), Channel(((1, 0), (1, 0))))
        with pytest.raises(UndefinedOutcome):
            pmc(j, 1)


class TestPml:
    def test_independent_is_zero(self, independent_joint):
        for y in independent_joint.support:
            assert pml(independent_joint, y) == ZERO

    def test_binary_symmetric_value(self, binary_symmetric_joint):
        value = pml(binary_symmetric_joint, 0)
        assert value.ratio == Fraction(3, 2)
        top_density = max(
            max_divergence(
                binary_symmetric_joint.posterior(y), binary_symmetric_joint.prior
            )
            for y in binary_symmetric_joint.support
        )
        assert top_density.ratio == Fraction(3, 2)

    def test_point_mass_posterior(self):
        j = Joint.from_prior_channel(Pmf((1, 1)), Channel.identity(2))
        assert pml(j, 0).ratio == Fraction(2)

    def test_always_finite_even_with_zeros(self, zero_entry_joint):
        for y in zero_entry_joint.support:
            assert pml(zero_entry_joint, y).is_finite


class TestConditionalPmc:
    def test_irrelevant_side_information(self, binary_symmetric_joint):
        family = {0: binary_symmetric_joint, 1: binary_symmetric_joint}
        for z in (0, 1):
            assert conditional_pmc(family, 0, z) == pmc(binary_symmetric_joint, 0)

    def test_markov_chain_prior_equals_unconditioned(self, binary_symmetric_joint):
        # side information upstream of the secret with the same conditional prior
        family = {0: binary_symmetric_joint}
        assert conditional_pmc(family, 1, 0) == pmc(binary_symmetric_joint, 1)

    def test_skewed_conditional_prior(self):
        # brute-force computation with exact rationals:
        # conditioned prior (4/5, 1/5), channel rows (3/4,1/4) / (1/4,3/4)
        prior_z0 = Pmf((Fraction(4, 5), Fraction(1, 5)))
        channel = Channel(
            ((Fraction(3, 4), Fraction(1, 4)), (Fraction(1, 4), Fraction(3, 4)))
        )
        joint_z0 = Joint.from_prior_channel(prior_z0, channel)
        post = joint_z0.posterior(0)
        assert post == (Fraction(12, 13), Fraction(1, 13))
        by_hand = max(Fraction(4, 5) / post[0], Fraction(1, 5) / post[1])
        assert by_hand == Fraction(13, 5)
        assert conditional_pmc({0: joint_z0}, 0, 0).ratio == Fraction(13, 5)
        assert conditional_pmc({0: joint_z0}, 0, 0).nats == pytest.approx(
            math.log(2.6)
        )

    def test_missing_side_information(self, binary_symmetric_joint):
        with pytest.raises(UndefinedOutcome):
            conditional_pmc({0: binary_symmetric_joint}, 0, 3)


class TestGuaranteeLevel:
    def test_deterministic_mechanism(self):
        j = Joint.from_prior_channel(Pmf((1, 1)), Channel.identity(2))
        assert guarantee_level(j, "ldp").eps == INF
        assert guarantee_level(j, "pmc").eps == INF
        assert guarantee_level(j, "pml").eps.ratio == Fraction(2)

    def test_ldp_by_pair_enumeration(self, binary_symmetric_joint):
        j = binary_symmetric_joint
        # independent oracle: enumerate ordered pairs and output ratios directly
        best = 0.0
        rows = [[float(e) for e in row] for row in j.channel.rows]
        for a in range(2):
            for b in range(2):
                if a == b:
                    continue
                for y in range(2):
                    if rows[a][y] > 0:
                        best = max(best, rows[a][y] / rows[b][y])
        assert best == pytest.approx(3.0)
        assert guarantee_level(j, GuaranteeKind.LDP).eps.ratio == Fraction(3)

    def test_independent_channel_all_zero(self, independent_joint):
        for kind in ("pml", "pmc", "lip", "ldp"):
            assert guarantee_level(independent_joint, kind).eps == ZERO
        alip = guarantee_level(independent_joint, "alip")
        assert alip.eps_l == ZERO and alip.eps_u == ZERO

    def test_alip_combines_both_sides(self, binary_symmetric_joint):
        alip = guarantee_level(binary_symmetric_joint, "alip")
        assert alip.eps_l.ratio == Fraction(2)
        assert alip.eps_u.ratio == Fraction(3, 2)
        lip = guarantee_level(binary_symmetric_joint, "lip")
        assert lip.eps.ratio == Fraction(2)


class TestAggregates:
    def test_max_cost_leakage_by_column_minima(self, binary_symmetric_joint):
        # independent oracle: sum the column minima directly
        j = binary_symmetric_joint
        total = sum(min(row[y] for row in j.channel.rows) for y in range(2))
        assert total == Fraction(1, 2)
        assert max_cost_leakage(j).ratio == Fraction(2)

    def test_independent_channel_leaks_nothing(self, independent_joint):
        assert max_cost_leakage(independent_joint) == ZERO

    def test_identity_channel_is_infinite(self):
        j = Joint.from_prior_channel(Pmf((1, 1)), Channel.identity(2))
        assert max_cost_leakage(j) == INF

    def test_max_realizable_cost_is_worst_outcome(self, binary_symmetric_joint):
        j = binary_symmetric_joint
        assert max_realizable_cost(j) == max(pmc(j, y) for y in j.support)
        assert max_realizable_cost(j).ratio == Fraction(2)

    def test_max_realizable_cost_infinite_with_zero(self, zero_entry_joint):
        assert max_realizable_cost(zero_entry_joint) == INF

    def test_jensen_gap_on_random_instances(self):
        rng = random.Random(1234)
        for _ in range(100):
            j = random_joint(rng, rng.randint(2, 4), rng.randint(2, 4))
            mcl = max_cost_leakage(j).nats
            avg = expected_pmc(j)
            assert mcl <= avg + 1e-12
            values = [pmc(j, y).nats for y in j.support]
            if max(values) - min(values) > 1e-6:
                assert avg - mcl > 1e-12

    def test_jensen_equality_when_profile_constant(self, binary_symmetric_joint):
        j = binary_symmetric_joint
        assert expected_pmc(j) == pytest.approx(max_cost_leakage(j).nats, abs=1e-12)


class TestProfileCsv:
    def test_header_and_values(self, binary_symmetric_joint):
        csv = leakage_profile(binary_symmetric_joint).to_csv()
        lines = csv.strip().split("\n")
        assert lines[0] == "y,P_Y,pmc_nats,pml_nats,info_density_min,info_density_max"
        first = lines[1].split(",")
        assert first[0] == "0"
        assert float(first[1]) == 0.5
        assert float(first[2]) == pytest.approx(math.log(2))
        assert float(first[3]) == pytest.approx(math.log(1.5))
        # numeric fields round-trip exactly through float()
        assert repr(float(first[2])) == first[2]

    def test_inf_token(self, zero_entry_joint):
        csv = leakage_profile(zero_entry_joint).to_csv()
        row = csv.strip().split("\n")[1].split(",")
        assert row[2] == "inf"
        assert row[4] == "-inf"

    def test_bits_unit_headers(self, binary_symmetric_joint):
        csv = leakage_profile(binary_symmetric_joint).to_csv(unit="bits")
        lines = csv.strip().split("\n")
        assert "pmc_bits" in lines[0]
        assert float(lines[1].split(",")[2]) == pytest.approx(1.0)  # log2(2)


class TestGuaranteeType:
    def test_single_eps_kinds(self):
        g = Guarantee.pml(0.3)
        assert g.kind is GuaranteeKind.PML
        assert g.eps.nats == pytest.approx(0.3)

    def test_alip_pair(self):
        g = Guarantee.alip(0.5, 0.3)
        assert g.eps_l.nats == pytest.approx(0.5)
        assert g.eps_u.nats == pytest.approx(0.3)

    def test_validation(self):
        with pytest.raises(ValueError):
            Guarantee(GuaranteeKind.PML, eps=None)
        with pytest.raises(ValueError):
            Guarantee.pml(-0.1)

    def test_serialization_inf_token(self):
        g = Guarantee(GuaranteeKind.PMC, eps=INF)
        assert g.to_dict()["eps_nats"] == "inf"
