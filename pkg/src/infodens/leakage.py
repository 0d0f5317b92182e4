"""Leakage measures of a finite joint distribution.

Everything here reduces to the order-infinity divergence between the prior
and a posterior (or between kernel rows):

* ``pmc``  -- pointwise maximal cost, the largest multiplicative drop in a
  risk-averse adversary's minimal expected cost after seeing one outcome;
  equals minus the minimum information density over the secret alphabet.
* ``pml``  -- pointwise maximal leakage, the opportunistic counterpart;
  equals the maximum information density.
* ``guarantee_level`` -- the smallest parameter for which a joint satisfies
  a PML / PMC / LIP / ALIP / LDP guarantee.
* ``max_cost_leakage`` / ``max_realizable_cost`` -- the average-outcome and
  worst-outcome aggregates of the risk-averse leakage.

Essential suprema over outcomes are maxima over the support of the output
marginal; outcomes with zero mass never contribute.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .errors import UndefinedOutcome
from .probcore import INF, ZERO, ExtReal, Joint, as_level, max_divergence

_LN2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Pointwise measures
# ---------------------------------------------------------------------------


def pmc(joint: Joint, y: int) -> ExtReal:
    """Pointwise maximal cost of releasing outcome ``y``.

    ``log max_x P(x) / P(x|y)``, which simplifies to the marginal mass of
    ``y`` over the smallest channel entry in its column.  Infinite exactly
    when some channel entry in the column is zero (the adversary can then be
    certain some secret value did not occur).
    """
    if y not in joint.posteriors:
        raise UndefinedOutcome(f"outcome {y} has zero marginal mass")
    m = joint.marginal[y]
    best = None
    for row in joint.channel.rows:
        c = row[y]
        if c == 0:
            return INF
        ratio = m / c
        if best is None or ratio > best:
            best = ratio
    return ExtReal.from_ratio(best)


def pml(joint: Joint, y: int) -> ExtReal:
    """Pointwise maximal leakage of releasing outcome ``y``.

    ``log max_x P(x|y) / P(x)``; always finite for a full-support prior.
    """
    if y not in joint.posteriors:
        raise UndefinedOutcome(f"outcome {y} has zero marginal mass")
    m = joint.marginal[y]
    best = max(row[y] for row in joint.channel.rows)
    return ExtReal.from_ratio(best / m)


def conditional_pmc(
    joints_by_z: Union[Mapping[int, Joint], Sequence[Joint]], y: int, z: int
) -> ExtReal:
    """Pointwise maximal cost given side information ``z``.

    ``joints_by_z`` maps each side-information outcome to the joint of the
    secret and the mechanism conditioned on it (prior ``P(x|z)``, channel
    ``P(y|x,z)``).  The value is the divergence of the z-conditioned prior
    from the (y, z)-conditioned posterior.
    """
    try:
        conditioned = joints_by_z[z]
    except (KeyError, IndexError):
        raise UndefinedOutcome(f"no conditioned joint for side information {z}") from None
    return pmc(conditioned, y)


# ---------------------------------------------------------------------------
# Guarantees
# ---------------------------------------------------------------------------


class GuaranteeKind(enum.Enum):
    PML = "pml"
    PMC = "pmc"
    LIP = "lip"
    ALIP = "alip"
    LDP = "ldp"


@dataclass(frozen=True)
class Guarantee:
    """A tagged privacy level.

    Single-parameter kinds carry ``eps``; ALIP carries the pair
    ``(eps_l, eps_u)`` bounding the information density from below and above.
    """

    kind: GuaranteeKind
    eps: Optional[ExtReal] = None
    eps_l: Optional[ExtReal] = None
    eps_u: Optional[ExtReal] = None

    def __post_init__(self):
        if self.kind is GuaranteeKind.ALIP:
            if self.eps is not None or self.eps_l is None or self.eps_u is None:
                raise ValueError("ALIP takes exactly (eps_l, eps_u)")
        else:
            if self.eps is None or self.eps_l is not None or self.eps_u is not None:
                raise ValueError(f"{self.kind.value} takes a single eps")

    @staticmethod
    def pml(eps) -> "Guarantee":
        return Guarantee(GuaranteeKind.PML, eps=as_level(eps))

    @staticmethod
    def pmc(eps) -> "Guarantee":
        return Guarantee(GuaranteeKind.PMC, eps=as_level(eps))

    @staticmethod
    def lip(eps) -> "Guarantee":
        return Guarantee(GuaranteeKind.LIP, eps=as_level(eps))

    @staticmethod
    def ldp(eps) -> "Guarantee":
        return Guarantee(GuaranteeKind.LDP, eps=as_level(eps))

    @staticmethod
    def alip(eps_l, eps_u) -> "Guarantee":
        return Guarantee(GuaranteeKind.ALIP, eps_l=as_level(eps_l), eps_u=as_level(eps_u))

    def to_dict(self, unit: str = "nats") -> dict:
        if self.kind is GuaranteeKind.ALIP:
            return {
                "kind": "alip",
                f"eps_l_{unit}": format_level(self.eps_l, unit),
                f"eps_u_{unit}": format_level(self.eps_u, unit),
            }
        return {"kind": self.kind.value, f"eps_{unit}": format_level(self.eps, unit)}


def format_level(level: ExtReal, unit: str = "nats"):
    """Render a level as a JSON/CSV-safe value; +inf becomes the token "inf"."""
    value = level.nats if unit == "nats" else level.bits
    return "inf" if value == math.inf else value


def _max_pmc(joint: Joint) -> ExtReal:
    return max(pmc(joint, y) for y in joint.support)


def _max_pml(joint: Joint) -> ExtReal:
    return max(pml(joint, y) for y in joint.support)


def _ldp_level(joint: Joint) -> ExtReal:
    """Largest log-likelihood ratio of the channel across input pairs.

    The quantification runs over draws of two independent secrets, i.e. over
    the support of the prior; full-support priors make that every row pair.
    """
    rows = joint.channel.rows
    n = len(rows)
    if n == 1:
        return ZERO
    best = ZERO
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            d = max_divergence(rows[a], rows[b])
            if d > best:
                best = d
                if not best.is_finite:
                    return best
    return best


def guarantee_level(joint: Joint, kind: Union[GuaranteeKind, str]) -> Guarantee:
    """Smallest parameter for which the joint satisfies the given guarantee."""
    if isinstance(kind, str):
        kind = GuaranteeKind(kind.lower())
    if kind is GuaranteeKind.PML:
        return Guarantee(kind, eps=_max_pml(joint))
    if kind is GuaranteeKind.PMC:
        return Guarantee(kind, eps=_max_pmc(joint))
    if kind is GuaranteeKind.ALIP:
        return Guarantee(kind, eps_l=_max_pmc(joint), eps_u=_max_pml(joint))
    if kind is GuaranteeKind.LIP:
        return Guarantee(kind, eps=max(_max_pmc(joint), _max_pml(joint)))
    if kind is GuaranteeKind.LDP:
        return Guarantee(kind, eps=_ldp_level(joint))
    raise ValueError(f"unknown guarantee kind: {kind!r}")  # pragma: no cover


def all_guarantee_levels(joint: Joint) -> dict:
    """All five guarantee levels at once, keyed by kind name."""
    return {k.value: guarantee_level(joint, k) for k in GuaranteeKind}


# ---------------------------------------------------------------------------
# Aggregates over outcomes
# ---------------------------------------------------------------------------


def max_cost_leakage(joint: Joint) -> ExtReal:
    """Average-outcome risk-averse leakage: ``-log sum_y min_x P(y|x)``.

    Infinite when every column of the channel contains a zero.  Always at
    most the expected pointwise maximal cost, with equality only when the
    pointwise values are constant over the support (Jensen gap).
    """
    cols = joint.channel.n_outputs
    total = None
    for y in range(cols):
        m = min(row[y] for row in joint.channel.rows)
        total = m if total is None else total + m
    if total == 0:
        return INF
    return ExtReal.from_ratio(1 / total)


def max_realizable_cost(joint: Joint) -> ExtReal:
    """Worst-outcome risk-averse leakage: the largest pointwise maximal cost."""
    return _max_pmc(joint)


def expected_pmc(joint: Joint) -> float:
    """Expected pointwise maximal cost over the output marginal, in nats."""
    acc = 0.0
    for y in joint.support:
        level = pmc(joint, y)
        if not level.is_finite:
            return math.inf
        acc += float(joint.marginal[y]) * level.nats
    return acc


# ---------------------------------------------------------------------------
# Per-outcome profile
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OutcomeLeakage:
    """Leakage of a single outcome: its mass, PMC, PML and density extremes."""

    y: int
    mass: float
    pmc: ExtReal
    pml: ExtReal

    @property
    def info_density_min(self) -> float:
        v = self.pmc.nats
        return -v if v != math.inf else -math.inf

    @property
    def info_density_max(self) -> float:
        return self.pml.nats


@dataclass(frozen=True)
class LeakageProfile:
    """Per-outcome leakage over the support of the output marginal."""

    rows: tuple

    CSV_HEADER = "y,P_Y,pmc_nats,pml_nats,info_density_min,info_density_max"
    CSV_HEADER_BITS = "y,P_Y,pmc_bits,pml_bits,info_density_min_bits,info_density_max_bits"

    def to_csv(self, unit: str = "nats") -> str:
        scale = 1.0 if unit == "nats" else 1.0 / _LN2
        lines = [self.CSV_HEADER if unit == "nats" else self.CSV_HEADER_BITS]
        for r in self.rows:
            fields = [
                str(r.y),
                _csv_number(r.mass),
                _csv_number(_scaled(r.pmc.nats, scale)),
                _csv_number(_scaled(r.pml.nats, scale)),
                _csv_number(_scaled(r.info_density_min, scale)),
                _csv_number(_scaled(r.info_density_max, scale)),
            ]
            lines.append(",".join(fields))
        return "\n".join(lines) + "\n"


def _scaled(v: float, scale: float) -> float:
    return v if not math.isfinite(v) else v * scale


def _csv_number(v: float) -> str:
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return repr(float(v))


def leakage_profile(joint: Joint) -> LeakageProfile:
    rows = tuple(
        OutcomeLeakage(
            y=y, mass=float(joint.marginal[y]), pmc=pmc(joint, y), pml=pml(joint, y)
        )
        for y in joint.support
    )
    return LeakageProfile(rows)
