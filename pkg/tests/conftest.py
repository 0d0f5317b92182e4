import math
from fractions import Fraction

import pytest

from infodens import Channel, Joint, Pmf

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
LOG15 = math.log(1.5)


@pytest.fixture
def binary_symmetric_joint() -> Joint:
    """Uniform binary prior through a 3/4 - 1/4 symmetric channel, exact."""
    prior = Pmf((Fraction(1, 2), Fraction(1, 2)))
    channel = Channel(
        ((Fraction(3, 4), Fraction(1, 4)), (Fraction(1, 4), Fraction(3, 4)))
    )
    return Joint.from_prior_channel(prior, channel)


@pytest.fixture
def independent_joint() -> Joint:
    """A prior with identical channel rows: the release reveals nothing."""
    prior = Pmf((Fraction(2, 5), Fraction(3, 5)))
    row = (Fraction(1, 3), Fraction(2, 3))
    return Joint.from_prior_channel(prior, Channel((row, row)))


@pytest.fixture
def zero_entry_joint() -> Joint:
    """One channel zero hit by a supported outcome: infinite cost leakage."""
    prior = Pmf((Fraction(1, 2), Fraction(1, 2)))
    channel = Channel(
        ((Fraction(1, 2), Fraction(1, 2)), (Fraction(0), Fraction(1)))
    )
    return Joint.from_prior_channel(prior, channel)
