"""Constructors and analytic cost evaluators for standard privacy mechanisms.

Finite mechanisms (randomized response and the leakage-optimal high-privacy
channel) are built exactly when their parameters are rational, so measured
levels can be compared against the closed forms with exact equality.

The continuous families (Laplace-noised sample mean, Gaussian perturbation
of a bounded value) evaluate the pointwise cost through the density identity
``log f_Y(y) / inf_x f_{Y|X=x}(y)``; for log-concave noise the infimum sits
at a support endpoint, which the closed forms use and the quadrature path
mirrors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate, special

from .errors import (
    CgfUnavailable,
    DimensionMismatch,
    InvalidAlphabet,
    OutsideHighPrivacy,
    ParseError,
    QuadratureFailure,
)
from .probcore import (
    ExtReal,
    Channel,
    Joint,
    Pmf,
    as_level,
    coerce_probability,
)

#: Requested and accepted accuracy for the 1-D density quadratures.
_QUAD_EPSABS = 1e-12
_QUAD_EPSREL = 1e-9
_QUAD_ACCEPT_REL = 1e-6
#: Accepted relative half-width of the Monte Carlo confidence interval.
_MC_ACCEPT_REL = 1e-2


# ---------------------------------------------------------------------------
# Finite mechanisms
# ---------------------------------------------------------------------------


def randomized_response(n: int, eps_r) -> Channel:
    """The n-ary randomized response channel with log-likelihood gap ``eps_r``.

    Keeps the input with probability ``e^eps_r / (n - 1 + e^eps_r)`` and
    flips to each other symbol uniformly; satisfies LDP at exactly ``eps_r``.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InvalidAlphabet(f"randomized response needs an integer n >= 2, got {n!r}")
    r = as_level(eps_r).ratio
    if r == math.inf:
        raise ValueError("eps_r must be finite")
    denom = n - 1 + r
    diag = r / denom
    off = 1 / denom
    return Channel(
        tuple(tuple(diag if i == j else off for j in range(n)) for i in range(n))
    )


def randomized_response_pmc(n: int, eps_r, prior: Pmf) -> ExtReal:
    """Worst-outcome cost level of randomized response under ``prior``.

    ``log(1 + max_j P(j) (e^eps_r - 1))``; never exceeds ``eps_r`` and
    approaches it as the largest prior mass approaches one.
    """
    if len(prior) != n:
        raise DimensionMismatch(f"prior has {len(prior)} outcomes, expected {n}")
    r = as_level(eps_r).ratio
    if r == math.inf:
        raise ValueError("eps_r must be finite")
    return ExtReal.from_ratio(1 + max(prior.weights) * (r - 1))


def extremal_mechanism(prior: Pmf, eps_u) -> Channel:
    """The leakage-optimal channel in the high-privacy regime.

    Diagonal ``1 - e^eps_u (1 - P(i))``, off-diagonal ``e^eps_u P(j)``; its
    output marginal reproduces the prior and its leakage level is exactly
    ``eps_u``.  Only defined strictly below ``log 1/(1 - p_min)``, where all
    entries stay positive.
    """
    r = as_level(eps_u).ratio
    if r == math.inf or r * (1 - prior.p_min) >= 1:
        raise OutsideHighPrivacy(
            f"eps_u must stay below log 1/(1 - p_min) = {-math.log1p(-float(prior.p_min))!r}"
        )
    n = len(prior)
    rows = []
    for i in range(n):
        rows.append(
            tuple(
                (1 - r * (1 - prior[i])) if i == j else r * prior[j] for j in range(n)
            )
        )
    return Channel(tuple(rows))


def extremal_mechanism_pmc(prior: Pmf, eps_u) -> ExtReal:
    """Worst-outcome cost level of the extremal channel: the translated level.

    ``log p_min / (1 - e^eps_u (1 - p_min))``; this is the tightness witness
    for the leakage-to-cost translation.
    """
    r = as_level(eps_u).ratio
    p = prior.p_min
    if r == math.inf or r * (1 - p) >= 1:
        raise OutsideHighPrivacy(
            f"eps_u must stay below log 1/(1 - p_min) = {-math.log1p(-float(p))!r}"
        )
    return ExtReal.from_ratio(p / (1 - r * (1 - p)))


# ---------------------------------------------------------------------------
# Input laws for the continuous mechanisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundedLaw:
    """A data distribution on a bounded interval.

    ``cgf`` is the cumulant generating function of the centered variable and
    drives the closed-form cost levels; ``pdf`` feeds the quadrature path;
    ``sampler`` feeds Monte Carlo.  Any of the three may be omitted when the
    corresponding evaluation is not needed.  Evaluations are exact when the
    law places mass arbitrarily close to both endpoints, and upper bounds
    otherwise.
    """

    lo: float
    hi: float
    mean: float
    cgf: Optional[Callable[[float], float]] = None
    pdf: Optional[Callable[[float], float]] = None
    sampler: Optional[Callable[[np.random.Generator, tuple], np.ndarray]] = None
    family: str = "custom"

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not (self.lo <= self.mean <= self.hi):
            raise ValueError(f"mean {self.mean} outside [{self.lo}, {self.hi}]")


def _uniform_cgf(half_width: float, t: float) -> float:
    """log E[exp(t Z)] for Z uniform on [-half_width, half_width]."""
    x = abs(t) * half_width
    if x < 1e-6:
        return x * x / 6.0 * (1.0 - x * x / 15.0)
    if x > 350.0:
        return x - math.log(2.0 * x) + math.log1p(-math.exp(-2.0 * x))
    return math.log(math.sinh(x) / x)


def uniform_law(lo: float, hi: float) -> BoundedLaw:
    """The uniform distribution on [lo, hi] with exact closed-form pieces."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    half = (hi - lo) / 2.0
    density = 1.0 / (hi - lo)
    return BoundedLaw(
        lo=lo,
        hi=hi,
        mean=(lo + hi) / 2.0,
        cgf=lambda t: _uniform_cgf(half, t),
        pdf=lambda x, _d=density, _lo=lo, _hi=hi: _d if _lo <= x <= _hi else 0.0,
        sampler=lambda rng, shape, _lo=lo, _hi=hi: rng.uniform(_lo, _hi, shape),
        family="uniform",
    )


def discrete_law(points: Sequence[float], probs: Sequence[float]) -> BoundedLaw:
    """A finitely supported law; handy for bound checks on custom data models."""
    pts = [float(p) for p in points]
    ws = [float(w) for w in probs]
    if len(pts) != len(ws) or not pts:
        raise ValueError("points and probs must be equal-length and non-empty")
    total = math.fsum(ws)
    if total <= 0 or any(w < 0 for w in ws):
        raise ValueError("probs must be non-negative with positive total")
    ws = [w / total for w in ws]
    mean = math.fsum(p * w for p, w in zip(pts, ws))

    def cgf(t: float) -> float:
        return math.log(math.fsum(w * math.exp(t * (p - mean)) for p, w in zip(pts, ws)))

    return BoundedLaw(lo=min(pts), hi=max(pts), mean=mean, cgf=cgf, family="discrete")


def _quad_density(integrand, lo: float, hi: float, kink: Optional[float]) -> float:
    points = [kink] if kink is not None and lo < kink < hi else None
    value, abserr = integrate.quad(
        integrand,
        lo,
        hi,
        points=points,
        limit=200,
        epsabs=_QUAD_EPSABS,
        epsrel=_QUAD_EPSREL,
    )
    if value <= 0 or abserr > _QUAD_ACCEPT_REL * value + _QUAD_EPSABS:
        raise QuadratureFailure(
            f"density quadrature unreliable: value {value!r}, error {abserr!r}"
        )
    return value


# ---------------------------------------------------------------------------
# Laplace-noised sample mean
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaplaceMeanMechanism:
    """Release of the sample mean of ``n`` i.i.d. bounded points plus Laplace noise.

    The data points live on [lo, hi]; the released value is the sample mean
    with Laplace noise of scale ``b``.  Cost levels quantify what one data
    point leaks through the release.
    """

    lo: float
    hi: float
    n: int
    b: float
    law: BoundedLaw = None

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not self.b > 0:
            raise ValueError(f"scale must be positive, got {self.b!r}")
        if self.law is None:
            object.__setattr__(self, "law", uniform_law(self.lo, self.hi))
        elif self.law.lo < self.lo - 1e-12 or self.law.hi > self.hi + 1e-12:
            raise ValueError("input law must live inside the data interval")

    @property
    def dp_level(self) -> float:
        """The classical noise-vs-sensitivity level (hi-lo)/(n b); an upper bound."""
        return (self.hi - self.lo) / (self.n * self.b)

    def _cgf(self, t: float) -> float:
        if self.law.cgf is None:
            raise CgfUnavailable(
                "the input law needs a cumulant generating function for closed forms"
            )
        return self.law.cgf(t)

    def sup_pmc(self) -> float:
        """Largest pointwise cost over all released values, in nats.

        The supremum sits on the outer plateaus (released values beyond the
        data range), where it equals the plateau values below; for uniform
        data this collapses to ``log( nb/(hi-lo) (e^{(hi-lo)/(nb)} - 1) )``.
        """
        if self.law.family == "uniform" and math.isclose(
            self.law.lo, self.lo
        ) and math.isclose(self.law.hi, self.hi):
            w = (self.hi - self.lo) / (self.n * self.b)
            return math.log(math.expm1(w) / w)
        t = 1.0 / (self.n * self.b)
        upper = (self.law.mean - self.lo) * t + self._cgf(t)
        lower = (self.hi - self.law.mean) * t + self._cgf(-t)
        return max(upper, lower)

    def pmc_at(
        self,
        y: float,
        method: str = "auto",
        seed: int = 0,
        mc_samples: int = 200_000,
    ) -> float:
        """Pointwise cost of releasing the value ``y``, in nats.

        Released values at or beyond the data range take the plateau closed
        forms; interior values are integrated (n = 1) or estimated by seeded
        Monte Carlo (n > 1).  ``method="quadrature"`` forces the numerical
        path everywhere (n = 1 only).
        """
        if method not in ("auto", "quadrature"):
            raise ValueError(f"unknown method {method!r}")
        t = 1.0 / (self.n * self.b)
        if method == "auto":
            if y >= self.hi:
                return (self.law.mean - self.lo) * t + self._cgf(t)
            if y <= self.lo:
                return (self.hi - self.law.mean) * t + self._cgf(-t)
        if self.n == 1:
            return self._pmc_quadrature(y)
        if method == "quadrature":
            raise ValueError("quadrature path only covers n = 1")
        return self._pmc_monte_carlo(y, seed, mc_samples)

    def _noise_pdf(self, u: float) -> float:
        return math.exp(-abs(u) / self.b) / (2.0 * self.b)

    def _pmc_quadrature(self, y: float) -> float:
        if self.law.pdf is None:
            raise ValueError("the input law needs a density for quadrature")
        pdf = self.law.pdf
        f_y = _quad_density(
            lambda x: pdf(x) * self._noise_pdf(y - x), self.law.lo, self.law.hi, kink=y
        )
        f_floor = min(
            self._noise_pdf(y - self.law.lo), self._noise_pdf(y - self.law.hi)
        )
        return math.log(f_y) - math.log(f_floor)

    def _pmc_monte_carlo(self, y: float, seed: int, samples: int) -> float:
        if self.law.sampler is None:
            raise ValueError("the input law needs a sampler for Monte Carlo")
        rng = np.random.default_rng(seed)
        data = np.asarray(self.law.sampler(rng, (samples, self.n)), dtype=float)
        dens = np.exp(-np.abs(y - data.mean(axis=1)) / self.b) / (2.0 * self.b)
        f_y = float(dens.mean())
        estimates = [(f_y, float(dens.std(ddof=1)) / math.sqrt(samples))]
        partial = data[:, : self.n - 1].sum(axis=1) / self.n
        conditionals = []
        for endpoint in (self.law.lo, self.law.hi):
            d = np.exp(-np.abs(y - endpoint / self.n - partial) / self.b) / (2.0 * self.b)
            conditionals.append(float(d.mean()))
            estimates.append((float(d.mean()), float(d.std(ddof=1)) / math.sqrt(samples)))
        for value, stderr in estimates:
            if value <= 0 or stderr > _MC_ACCEPT_REL * value:
                raise QuadratureFailure(
                    f"Monte Carlo estimate unreliable: value {value!r}, stderr {stderr!r}"
                )
        return math.log(f_y) - math.log(min(conditionals))


# ---------------------------------------------------------------------------
# Gaussian perturbation of a bounded value
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianPerturbMechanism:
    """Release of a zero-mean bounded value with additive Gaussian noise.

    The secret satisfies |X| <= amplitude; the release adds N(0, sigma^2).
    The pointwise cost is unbounded over released values, so the useful
    guarantees are the per-value envelope and the sub-Gaussian tail bound.
    """

    amplitude: float
    sigma: float
    law: BoundedLaw = None

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude!r}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if self.law is None:
            object.__setattr__(self, "law", uniform_law(-self.amplitude, self.amplitude))
        else:
            if self.law.lo < -self.amplitude - 1e-12 or self.law.hi > self.amplitude + 1e-12:
                raise ValueError("input law must live inside [-amplitude, amplitude]")
            if abs(self.law.mean) > 1e-9:
                raise ValueError("input law must have zero mean")

    @property
    def variance_ratio(self) -> float:
        """amplitude^2 / sigma^2; the shape parameter of the tail bound."""
        return (self.amplitude / self.sigma) ** 2

    def pmc_bounds(self, y: float) -> Tuple[float, float]:
        """Envelope for the pointwise cost of releasing ``y``.

        ``A|y|/sigma^2 <= cost <= A(A + 4|y|)/(2 sigma^2)``; the exact value
        (quadrature) always lies between them.
        """
        a = self.amplitude
        s2 = self.sigma**2
        return (a * abs(y) / s2, a * (a + 4.0 * abs(y)) / (2.0 * s2))

    def _noise_pdf(self, u: float) -> float:
        s = self.sigma
        return math.exp(-0.5 * (u / s) ** 2) / (s * math.sqrt(2.0 * math.pi))

    def pmc_at(self, y: float) -> float:
        """Pointwise cost of releasing ``y`` by quadrature, in nats."""
        if self.law.pdf is None:
            raise ValueError("the input law needs a density for quadrature")
        pdf = self.law.pdf
        f_y = _quad_density(
            lambda x: pdf(x) * self._noise_pdf(y - x), self.law.lo, self.law.hi, kink=None
        )
        f_floor = min(
            self._noise_pdf(y - self.law.lo), self._noise_pdf(y - self.law.hi)
        )
        return math.log(f_y) - math.log(f_floor)

    def _pmc_uniform_vectorized(self, ys: np.ndarray) -> np.ndarray:
        s = self.sigma
        lo, hi = self.law.lo, self.law.hi
        mass = special.ndtr((ys - lo) / s) - special.ndtr((ys - hi) / s)
        f_y = mass / (hi - lo)
        far = np.maximum(np.abs(ys - lo), np.abs(ys - hi))
        f_floor = np.exp(-0.5 * (far / s) ** 2) / (s * math.sqrt(2.0 * math.pi))
        return np.log(f_y) - np.log(f_floor)

    def tail_bound(self, beta: float) -> float:
        """Probability bound for the cost exceeding its center by ``beta``."""
        return gaussian_tail_bound(self.variance_ratio, beta)

    def tail_frequency(
        self, beta: float, n_samples: int = 1_000_000, seed: int = 0
    ) -> Tuple[float, float]:
        """Seeded empirical frequency of the tail event, with its standard error.

        The event is ``cost(Y) >= beta + A^2/(2 sigma^2)`` under the real
        mechanism; the frequency never exceeds :meth:`tail_bound` beyond
        sampling noise.  Needs a uniform input law (vectorized density).
        """
        if self.law.family != "uniform":
            raise ValueError("tail sampling implemented for uniform input laws")
        rng = np.random.default_rng(seed)
        xs = self.law.sampler(rng, (n_samples,))
        ys = xs + rng.normal(0.0, self.sigma, n_samples)
        costs = self._pmc_uniform_vectorized(ys)
        threshold = beta + self.amplitude**2 / (2.0 * self.sigma**2)
        freq = float(np.mean(costs >= threshold))
        stderr = math.sqrt(freq * (1.0 - freq) / n_samples)
        return freq, stderr


def gaussian_tail_bound(r: float, beta: float) -> float:
    """Tail bound ``min(1, 2 exp(-beta^2 / (8 (r^2 + r))))`` for shape ``r``.

    ``r`` is amplitude^2/sigma^2; the bound dominates the probability that
    the pointwise cost exceeds ``beta + r/2``.
    """
    if not r > 0:
        raise ValueError(f"r must be positive, got {r!r}")
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta!r}")
    return min(1.0, 2.0 * math.exp(-(beta**2) / (8.0 * (r * r + r))))


# ---------------------------------------------------------------------------
# Mechanism documents
# ---------------------------------------------------------------------------


def _doc_level(doc: Mapping, what: str, exact: bool):
    """Read a privacy level from a document: nats, or a rational ratio."""
    if "eps_ratio" in doc:
        ratio = coerce_probability(doc["eps_ratio"], f"{what}.eps_ratio", exact=True)
        if ratio < 1:
            raise ParseError(f"{what}.eps_ratio must be at least 1")
        return ExtReal.from_ratio(ratio if exact else float(ratio))
    if "eps_nats" in doc:
        value = doc["eps_nats"]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"{what}.eps_nats must be a number")
        if not value >= 0:
            raise ParseError(f"{what}.eps_nats must be non-negative")
        return ExtReal.from_nats(float(value))
    raise ParseError(f"{what} needs eps_nats or eps_ratio")


def parse_mechanism_doc(
    doc: Mapping, exact: bool = False
) -> Union[Joint, LaplaceMeanMechanism, GaussianPerturbMechanism]:
    """Turn a mechanism document into a Joint or a continuous mechanism.

    Raw documents carry ``prior`` and ``channel``; family documents carry a
    ``family`` tag: ``rr`` (needs ``n``, a level and a ``prior``),
    ``extremal`` (needs ``prior`` and a level), ``laplace_mean`` (needs
    ``interval``, ``count``, ``scale``) or ``gaussian`` (needs ``amplitude``
    and ``sigma``).  Continuous families take uniform input laws here;
    custom laws are API-only.
    """
    from .probcore import joint_from_doc

    if not isinstance(doc, Mapping):
        raise ParseError("mechanism document must be a JSON object")
    family = doc.get("family")
    if family is None:
        return joint_from_doc(doc, exact=exact)
    if family == "rr":
        n = doc.get("n")
        if not isinstance(n, int) or isinstance(n, bool):
            raise ParseError("rr document needs an integer alphabet size 'n'")
        level = _doc_level(doc, "rr", exact)
        channel = randomized_response(n, level)
        if "prior" not in doc:
            raise ParseError("rr document needs a 'prior' to analyze leakage")
        prior = Pmf(
            tuple(
                coerce_probability(v, f"prior[{i}]", exact)
                for i, v in enumerate(doc["prior"])
            )
        )
        return Joint.from_prior_channel(prior, channel)
    if family == "extremal":
        if "prior" not in doc:
            raise ParseError("extremal document needs a 'prior'")
        prior = Pmf(
            tuple(
                coerce_probability(v, f"prior[{i}]", exact)
                for i, v in enumerate(doc["prior"])
            )
        )
        level = _doc_level(doc, "extremal", exact)
        return Joint.from_prior_channel(prior, extremal_mechanism(prior, level))
    if family == "laplace_mean":
        try:
            lo, hi = doc["interval"]
            count = doc["count"]
            scale = doc["scale"]
        except (KeyError, TypeError, ValueError):
            raise ParseError(
                "laplace_mean document needs 'interval' [lo, hi], 'count' and 'scale'"
            ) from None
        return LaplaceMeanMechanism(float(lo), float(hi), int(count), float(scale))
    if family == "gaussian":
        try:
            amp = doc["amplitude"]
            sigma = doc["sigma"]
        except KeyError:
            raise ParseError("gaussian document needs 'amplitude' and 'sigma'") from None
        return GaussianPerturbMechanism(float(amp), float(sigma))
    raise ParseError(f"unknown mechanism family {family!r}")
