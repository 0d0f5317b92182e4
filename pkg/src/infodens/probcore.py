"""Finite probability primitives shared by every leakage computation.

Two numeric backends coexist:

* IEEE doubles (default) for sweeps and sampled searches;
* exact rationals (``fractions.Fraction``) for equality checks against
  brute-force adversary searches.

Integer entries are promoted to ``Fraction``, so matrices written with
integer and rational literals stay exact end to end.  A float anywhere in a
row degrades that row to float arithmetic, which is the intended escape
hatch for large sweeps.

Levels and divergences live in the log domain (nats) but are keyed by their
exponential (the "ratio"), carried by :class:`ExtReal`.  Storing the ratio
keeps rational computations exact: ``log 2`` is irrational, but two levels
built from rational data compare exactly through their ratios.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    DimensionMismatch,
    EmptySupport,
    ParseError,
    StochasticityError,
    UndefinedOutcome,
    ZeroOrNegativeWeight,
)

Number = Union[int, float, Fraction]

#: Absolute tolerance for accepting (and silently renormalizing) a kernel row.
ROW_SUM_TOL = 1e-12

_LN2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Extended non-negative reals in the log domain
# ---------------------------------------------------------------------------


@functools.total_ordering
class ExtReal:
    """A level in nats, finite or +infinity, keyed by its exponential.

    ``ExtReal.from_ratio(Fraction(3, 2))`` is the exact level ``log 1.5``;
    ``ExtReal.from_nats(0.3)`` is a float-backed level.  Addition of levels
    multiplies ratios, so sums of exact levels stay exact.  Comparisons and
    equality go through the stored ratio and are therefore exact whenever
    both operands are rational-backed.
    """

    __slots__ = ("ratio",)

    def __init__(self, ratio: Number):
        if isinstance(ratio, bool):
            raise TypeError("ratio must be a number, not bool")
        if isinstance(ratio, int):
            ratio = Fraction(ratio)
        if isinstance(ratio, float):
            if math.isnan(ratio):
                raise ValueError("ratio must not be NaN")
            if ratio != math.inf and ratio <= 0.0:
                raise ValueError(f"ratio must be positive or +inf, got {ratio!r}")
        elif isinstance(ratio, Fraction):
            if ratio <= 0:
                raise ValueError(f"ratio must be positive, got {ratio!r}")
        else:
            raise TypeError(f"unsupported ratio type: {type(ratio).__name__}")
        object.__setattr__(self, "ratio", ratio)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("ExtReal is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_ratio(cls, ratio: Number) -> "ExtReal":
        """Level whose exponential is ``ratio`` (exact for rationals)."""
        return cls(ratio)

    @classmethod
    def from_nats(cls, nats: float) -> "ExtReal":
        """Float-backed level of ``nats`` nats; ``math.inf`` allowed."""
        if isinstance(nats, bool) or not isinstance(nats, (int, float)):
            raise TypeError("nats must be a real number")
        nats = float(nats)
        if math.isnan(nats):
            raise ValueError("nats must not be NaN")
        if nats == math.inf:
            return cls(math.inf)
        if nats == 0.0:
            return cls(Fraction(1))
        try:
            return cls(math.exp(nats))
        except OverflowError:
            return cls(math.inf)

    # -- views ---------------------------------------------------------------

    @property
    def nats(self) -> float:
        """The level as a float in nats (+inf for the infinite level)."""
        r = self.ratio
        if isinstance(r, float):
            return math.inf if r == math.inf else math.log(r)
        # math.log accepts arbitrarily large ints, so split the fraction.
        return math.log(r.numerator) - math.log(r.denominator)

    @property
    def bits(self) -> float:
        n = self.nats
        return n if n == math.inf else n / _LN2

    @property
    def is_finite(self) -> bool:
        return self.ratio != math.inf

    @property
    def is_exact(self) -> bool:
        return isinstance(self.ratio, Fraction)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "ExtReal") -> "ExtReal":
        if not isinstance(other, ExtReal):
            return NotImplemented
        if self.ratio == math.inf or other.ratio == math.inf:
            return ExtReal(math.inf)
        return ExtReal(self.ratio * other.ratio)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtReal):
            return NotImplemented
        return self.ratio == other.ratio

    def __lt__(self, other) -> bool:
        if not isinstance(other, ExtReal):
            return NotImplemented
        return self.ratio < other.ratio

    def __hash__(self) -> int:
        return hash(self.ratio)

    def __repr__(self) -> str:
        if self.ratio == math.inf:
            return "ExtReal(inf)"
        return f"ExtReal(nats={self.nats!r}, ratio={self.ratio!r})"


#: The zero level (ratio one).
ZERO = ExtReal.from_ratio(Fraction(1))
#: The infinite level.
INF = ExtReal(math.inf)


def as_level(value: Union[ExtReal, int, float]) -> ExtReal:
    """Coerce a user-supplied privacy level to :class:`ExtReal`.

    Plain numbers are read as nats.  Exact rational levels must be built
    explicitly via ``ExtReal.from_ratio`` because a bare ``Fraction`` would
    be ambiguous between the log and ratio domains.
    """
    if isinstance(value, ExtReal):
        return value
    if isinstance(value, bool) or isinstance(value, Fraction):
        raise TypeError(
            "pass nats as int/float, or an exact level via ExtReal.from_ratio"
        )
    if isinstance(value, (int, float)):
        if math.isnan(value):
            raise ValueError("level must not be NaN")
        if value < 0:
            raise ValueError(f"level must be non-negative, got {value!r}")
        return ExtReal.from_nats(float(value))
    raise TypeError(f"unsupported level type: {type(value).__name__}")


# ---------------------------------------------------------------------------
# Entry validation helpers
# ---------------------------------------------------------------------------


def _check_entry(value: Number, what: str) -> Number:
    if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
        raise ParseError(f"{what} must be a number, got {type(value).__name__}")
    if isinstance(value, float) and not math.isfinite(value):
        raise ParseError(f"{what} must be finite, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    return value


def _sum_entries(entries: Sequence[Number]) -> Number:
    if any(isinstance(e, float) for e in entries):
        return math.fsum(float(e) for e in entries)
    return sum(entries, Fraction(0))


def _normalize_row(row: Sequence[Number], what: str) -> tuple:
    """Validate a sub-pmf row: non-negative entries summing to 1 within tolerance."""
    entries = tuple(_check_entry(e, what) for e in row)
    if not entries:
        raise EmptySupport(f"{what}: empty row")
    for e in entries:
        if e < 0:
            raise ParseError(f"{what}: negative entry {e!r}")
    total = _sum_entries(entries)
    if total <= 0:
        raise StochasticityError(f"{what}: row sums to {total!r}")
    if abs(total - 1) > ROW_SUM_TOL:
        raise StochasticityError(f"{what}: row sums to {total!r}, expected 1")
    if total == 1:
        return entries
    return tuple(e / total for e in entries)


# ---------------------------------------------------------------------------
# Pmf
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pmf:
    """A full-support probability mass function over a finite alphabet.

    Positive weights are normalized to sum to one (exactly when they are all
    rational).  Zero weights are rejected: every downstream measure assumes
    each secret value is possible a priori.
    """

    weights: tuple

    def __post_init__(self):
        raw = tuple(self.weights)
        if not raw:
            raise EmptySupport("a pmf needs at least one outcome")
        entries = []
        for w in raw:
            w = _check_entry(w, "pmf weight")
            if w <= 0:
                raise ZeroOrNegativeWeight(f"weight {w!r} breaks full support")
            entries.append(w)
        total = _sum_entries(entries)
        if total != 1:
            entries = [w / total for w in entries]
        object.__setattr__(self, "weights", tuple(entries))

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, x: int) -> Number:
        return self.weights[x]

    def __iter__(self):
        return iter(self.weights)

    @property
    def p_min(self) -> Number:
        """The smallest mass; it sets every context-aware translation constant."""
        return min(self.weights)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights)

    def as_floats(self) -> tuple:
        return tuple(float(w) for w in self.weights)

    @staticmethod
    def uniform(n: int, exact: bool = True) -> "Pmf":
        if n < 1:
            raise EmptySupport("uniform pmf needs n >= 1")
        w = Fraction(1, n) if exact else 1.0 / n
        return Pmf((w,) * n)


# ---------------------------------------------------------------------------
# Channel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Channel:
    """A row-stochastic transition kernel; rows may contain zeros.

    Rows are validated to sum to one within ``ROW_SUM_TOL`` and silently
    renormalized inside that tolerance; anything further off is rejected.
    """

    rows: tuple

    def __post_init__(self):
        raw = tuple(tuple(r) for r in self.rows)
        if not raw:
            raise EmptySupport("a channel needs at least one input row")
        width = len(raw[0])
        out = []
        for i, row in enumerate(raw):
            if len(row) != width:
                raise DimensionMismatch(
                    f"row {i} has {len(row)} entries, expected {width}"
                )
            out.append(_normalize_row(row, f"channel row {i}"))
        object.__setattr__(self, "rows", tuple(out))

    @property
    def n_inputs(self) -> int:
        return len(self.rows)

    @property
    def n_outputs(self) -> int:
        return len(self.rows[0])

    def row(self, x: int) -> tuple:
        return self.rows[x]

    def column(self, y: int) -> tuple:
        return tuple(r[y] for r in self.rows)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(e, Fraction) for r in self.rows for e in r)

    def then(self, other: "Channel") -> "Channel":
        """Sequential composition: feed this channel's output into ``other``."""
        if other.n_inputs != self.n_outputs:
            raise DimensionMismatch(
                f"cannot chain {self.n_outputs} outputs into {other.n_inputs} inputs"
            )
        rows = []
        for r in self.rows:
            rows.append(
                tuple(
                    _sum_entries([r[y] * other.rows[y][z] for y in range(len(r))])
                    for z in range(other.n_outputs)
                )
            )
        return Channel(tuple(rows))

    @staticmethod
    def identity(n: int) -> "Channel":
        return Channel(
            tuple(
                tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
                for i in range(n)
            )
        )


# ---------------------------------------------------------------------------
# Joint
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Joint:
    """A prior and a channel with the induced marginal and posteriors cached.

    Posteriors exist exactly for outcomes with positive marginal mass; every
    essential supremum downstream ranges over that support only.
    """

    prior: Pmf
    channel: Channel
    marginal: tuple
    posteriors: dict
    support: tuple

    @classmethod
    def from_prior_channel(cls, prior: Pmf, channel: Channel) -> "Joint":
        if channel.n_inputs != len(prior):
            raise DimensionMismatch(
                f"channel has {channel.n_inputs} rows, prior has {len(prior)} outcomes"
            )
        n_y = channel.n_outputs
        marginal = tuple(
            _sum_entries([prior[x] * channel.rows[x][y] for x in range(len(prior))])
            for y in range(n_y)
        )
        posteriors = {}
        support = []
        for y in range(n_y):
            if marginal[y] > 0:
                support.append(y)
                posteriors[y] = tuple(
                    prior[x] * channel.rows[x][y] / marginal[y]
                    for x in range(len(prior))
                )
        return cls(prior, channel, marginal, posteriors, tuple(support))

    @property
    def n_inputs(self) -> int:
        return len(self.prior)

    @property
    def n_outputs(self) -> int:
        return self.channel.n_outputs

    def posterior(self, y: int) -> tuple:
        """The conditional law of the secret given outcome ``y``."""
        try:
            return self.posteriors[y]
        except KeyError:
            raise UndefinedOutcome(f"outcome {y} has zero marginal mass") from None

    def joint_mass(self, x: int, y: int) -> Number:
        return self.prior[x] * self.channel.rows[x][y]


def joint_from(prior: Pmf, channel: Channel) -> Joint:
    """Functional alias for :meth:`Joint.from_prior_channel`."""
    return Joint.from_prior_channel(prior, channel)


# ---------------------------------------------------------------------------
# Information density and the order-infinity divergence
# ---------------------------------------------------------------------------


def density_ratio(joint: Joint, x: int, y: int) -> Number:
    """The ratio ``P(y|x) / P(y)`` whose log is the information density.

    Exact for rational joints.  Returns 0 when the channel entry is zero.
    """
    if y not in joint.posteriors:
        raise UndefinedOutcome(f"outcome {y} has zero marginal mass")
    num = joint.channel.rows[x][y]
    den = joint.marginal[y]
    if num == 0:
        return Fraction(0) if isinstance(den, Fraction) else 0.0
    return num / den


def info_density(joint: Joint, x: int, y: int) -> float:
    """Log of ``P(y|x)/P(y)`` in nats; ``-inf`` when the channel entry is zero.

    Positive values mean observing ``y`` makes ``x`` more likely.
    """
    r = density_ratio(joint, x, y)
    if r == 0:
        return -math.inf
    if isinstance(r, Fraction):
        return math.log(r.numerator) - math.log(r.denominator)
    return math.log(r)


def max_divergence(p: Iterable[Number], q: Iterable[Number]) -> ExtReal:
    """Rényi divergence of order infinity: ``log max_i p_i / q_i`` over p's support.

    Applies the 0/0 = 1 convention (indices outside p's support are ignored)
    and returns the infinite level when p charges a point q does not.
    """
    if isinstance(p, Pmf):
        p = p.weights
    if isinstance(q, Pmf):
        q = q.weights
    pv = tuple(p)
    qv = tuple(q)
    if len(pv) != len(qv):
        raise DimensionMismatch(f"alphabets differ: {len(pv)} vs {len(qv)}")
    best = None
    for pi, qi in zip(pv, qv):
        if pi <= 0:
            continue
        if qi <= 0:
            return INF
        ratio = pi / qi
        if best is None or ratio > best:
            best = ratio
    if best is None:
        raise EmptySupport("first argument has no positive mass")
    return ExtReal.from_ratio(best)


# ---------------------------------------------------------------------------
# JSON ingestion
# ---------------------------------------------------------------------------


def coerce_probability(value, what: str, exact: bool = False) -> Number:
    """Read a probability-like JSON value; rejects NaN and negatives.

    In exact mode, ints, decimal strings and "a/b" strings become Fractions;
    floats are converted through their shortest decimal representation so
    that a document written as 0.3 really means 3/10.
    """
    if isinstance(value, bool):
        raise ParseError(f"{what}: booleans are not numbers")
    if isinstance(value, str):
        try:
            frac = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{what}: cannot parse {value!r} as a rational") from None
        value = frac if exact else float(frac)
    elif isinstance(value, int):
        value = Fraction(value) if exact else float(value)
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise ParseError(f"{what}: non-finite value {value!r}")
        if exact:
            value = Fraction(str(value))
    else:
        raise ParseError(f"{what}: expected a number, got {type(value).__name__}")
    if value < 0:
        raise ParseError(f"{what}: negative value {value!r}")
    return value


def joint_from_doc(doc: Mapping, exact: bool = False) -> Joint:
    """Build a Joint from a ``{"prior": [...], "channel": [[...], ...]}`` document."""
    if not isinstance(doc, Mapping):
        raise ParseError("mechanism document must be a JSON object")
    try:
        prior_raw = doc["prior"]
        channel_raw = doc["channel"]
    except KeyError as missing:
        raise ParseError(f"missing field {missing.args[0]!r}") from None
    if not isinstance(prior_raw, Sequence) or isinstance(prior_raw, (str, bytes)):
        raise ParseError("'prior' must be an array of numbers")
    if not isinstance(channel_raw, Sequence):
        raise ParseError("'channel' must be an array of rows")
    prior = Pmf(
        tuple(
            coerce_probability(v, f"prior[{i}]", exact) for i, v in enumerate(prior_raw)
        )
    )
    rows = []
    for i, row in enumerate(channel_raw):
        if not isinstance(row, Sequence) or isinstance(row, (str, bytes)):
            raise ParseError(f"channel row {i} must be an array")
        rows.append(
            tuple(
                coerce_probability(v, f"channel[{i}][{j}]", exact)
                for j, v in enumerate(row)
            )
        )
    return Joint.from_prior_channel(prior, Channel(tuple(rows)))
