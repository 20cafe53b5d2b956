"""Entropy and KL divergence for finite distributions on product spaces.

All logarithms are natural (nats). ``0 ln 0`` and ``0 ln(0/0)`` are taken as 0.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SUM_TOL = 1e-9
NEG_TOL = 1e-15
PRODUCT_TOL = 1e-9


class AbsoluteContinuityViolation(ValueError):
    """Raised when ``p(x) > 0`` at a point where ``q(x) == 0``."""


class NotAProductDistribution(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Probability vector over ``Omega_1 x ... x Omega_n``, row-major.

    A one-element ``shape`` is a flat (non-product) space.
    """

    shape: tuple[int, ...]
    probs: np.ndarray

    def __post_init__(self):
        shape = tuple(int(m) for m in self.shape)
        if not shape or any(m < 1 for m in shape):
            raise ValueError(f"invalid shape {self.shape!r}")
        probs = np.array(self.probs, dtype=np.float64).reshape(-1)
        if probs.size != math.prod(shape):
            raise ValueError(f"{probs.size} probabilities do not fill shape {shape}")
        if not np.all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite")
        if np.any(probs < -NEG_TOL):
            raise ValueError("negative probability")
        probs = np.maximum(probs, 0.0)
        if abs(probs.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def flat(cls, probs: Sequence[float]) -> "DiscreteDistribution":
        probs = np.asarray(probs, dtype=np.float64).reshape(-1)
        return cls((probs.size,), probs)

    @classmethod
    def from_array(cls, arr) -> "DiscreteDistribution":
        arr = np.asarray(arr, dtype=np.float64)
        return cls(arr.shape, arr.reshape(-1))

    @classmethod
    def uniform(cls, shape: Sequence[int]) -> "DiscreteDistribution":
        size = math.prod(shape)
        return cls(tuple(shape), np.full(size, 1.0 / size))

    @property
    def size(self) -> int:
        return self.probs.size

    @property
    def is_flat(self) -> bool:
        return len(self.shape) == 1

    def array(self) -> np.ndarray:
        return self.probs.reshape(self.shape)

    def to_dict(self) -> dict:
        return {"shape": list(self.shape), "probs": self.probs.tolist()}

    @classmethod
    def from_dict(cls, data: dict | str) -> "DiscreteDistribution":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(data["shape"]), np.asarray(data["probs"], dtype=np.float64))


@dataclass(frozen=True)
class DivergenceBreakdown:
    joint: float
    marginal_sum: float
    gap: float
    per_coordinate: tuple[float, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "joint": self.joint,
            "marginal_sum": self.marginal_sum,
            "gap": self.gap,
            "per_coordinate": list(self.per_coordinate),
        }


def _same_shape(p: DiscreteDistribution, q: DiscreteDistribution) -> None:
    if p.shape != q.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {q.shape}")


def _plogp_ratio(p: np.ndarray, q: np.ndarray, allow_infinite: bool) -> float:
    support = p > 0
    if np.any(q[support] == 0):
        if allow_infinite:
            return math.inf
        raise AbsoluteContinuityViolation("p puts mass where q has none")
    ps, qs = p[support], q[support]
    return float(np.sum(ps * np.log(ps / qs)))


def entropy(p: DiscreteDistribution) -> float:
    ps = p.probs[p.probs > 0]
    return float(-np.sum(ps * np.log(ps)))


def kl_divergence(
    p: DiscreteDistribution, q: DiscreteDistribution, allow_infinite: bool = False
) -> float:
    """``D(p||q) = sum_x p(x) ln(p(x)/q(x))``.

    Raises :class:`AbsoluteContinuityViolation` if ``p`` is not absolutely
    continuous w.r.t. ``q``, unless ``allow_infinite`` is set, in which case
    ``math.inf`` is returned.
    """
    _same_shape(p, q)
    return _plogp_ratio(p.probs, q.probs, allow_infinite)


def l1_distance(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    _same_shape(p, q)
    return float(np.sum(np.abs(p.probs - q.probs)))


def pinsker_slack(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """``D(p||q) - l1(p, q)**2 / 2``; nonnegative by Pinsker's inequality."""
    return kl_divergence(p, q) - 0.5 * l1_distance(p, q) ** 2


def marginals(p: DiscreteDistribution) -> list[DiscreteDistribution]:
    """All coordinate marginals; a flat distribution is its own single marginal."""
    if p.is_flat:
        return [p]
    arr = p.array()
    axes = range(len(p.shape))
    return [
        DiscreteDistribution.flat(arr.sum(axis=tuple(a for a in axes if a != i)))
        for i in axes
    ]


def marginal(p: DiscreteDistribution, i: int) -> DiscreteDistribution:
    if p.is_flat:
        raise ValueError("marginal of a flat (non-product) distribution is undefined")
    if not 0 <= i < len(p.shape):
        raise IndexError(f"coordinate {i} out of range for shape {p.shape}")
    arr = p.array()
    others = tuple(a for a in range(arr.ndim) if a != i)
    return DiscreteDistribution.flat(arr.sum(axis=others))


def product_of(factors: Sequence[DiscreteDistribution]) -> DiscreteDistribution:
    if not factors:
        raise ValueError("need at least one factor")
    for f in factors:
        if not f.is_flat:
            raise ValueError("factors must be flat distributions")
    arr = np.ones(())
    for f in factors:
        arr = np.multiply.outer(arr, f.probs)
    return DiscreteDistribution(tuple(f.size for f in factors), arr.reshape(-1))


def is_product(q: DiscreteDistribution, tol: float = PRODUCT_TOL) -> bool:
    """True if ``q`` equals the product of its marginals to within ``tol`` (max-norm)."""
    if q.is_flat:
        return True
    recon = product_of(marginals(q))
    return float(np.max(np.abs(recon.probs - q.probs))) <= tol


def _two_factor(p: DiscreteDistribution) -> np.ndarray:
    if len(p.shape) != 2:
        raise ValueError(f"expected a 2-factor shape, got {p.shape}")
    return p.array()


def conditional_divergence(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """``D(p(Y|X) || q(Y|X)) = sum_x p(x) D(p(.|x) || q(.|x))`` on a 2-factor space."""
    _same_shape(p, q)
    pa, qa = _two_factor(p), _two_factor(q)
    px, qx = pa.sum(axis=1), qa.sum(axis=1)
    total = 0.0
    for x in np.flatnonzero(px > 0):
        if qx[x] == 0:
            raise AbsoluteContinuityViolation(f"q(X={x}) = 0 but p(X={x}) > 0")
        try:
            total += px[x] * _plogp_ratio(pa[x] / px[x], qa[x] / qx[x], False)
        except AbsoluteContinuityViolation:
            raise AbsoluteContinuityViolation(
                f"conditional p(.|X={x}) not absolutely continuous w.r.t. q(.|X={x})"
            ) from None
    return float(total)


def mutual_information(p: DiscreteDistribution) -> float:
    """``I(X;Y) = D(p(X,Y) || p(X) p(Y))`` for a 2-factor distribution."""
    pa = _two_factor(p)
    outer = np.outer(pa.sum(axis=1), pa.sum(axis=0))
    return _plogp_ratio(pa.reshape(-1), outer.reshape(-1), False)


def raw_breakdown(p: DiscreteDistribution, q: DiscreteDistribution) -> DivergenceBreakdown:
    """Joint divergence against the sum of coordinate-marginal divergences.

    No sign is guaranteed for ``gap`` here; see :func:`superadditivity_breakdown`.
    """
    _same_shape(p, q)
    joint = kl_divergence(p, q)
    per = tuple(kl_divergence(pi, qi) for pi, qi in zip(marginals(p), marginals(q)))
    msum = math.fsum(per)
    return DivergenceBreakdown(joint, msum, joint - msum, per)


def superadditivity_breakdown(
    p: DiscreteDistribution, q: DiscreteDistribution
) -> DivergenceBreakdown:
    """Breakdown for product ``q``, where ``gap >= 0`` is guaranteed.

    Refuses a non-product ``q`` instead of returning a possibly negative gap.
    """
    _same_shape(p, q)
    if not is_product(q):
        raise NotAProductDistribution("q is not the product of its marginals")
    return raw_breakdown(p, q)


def counterexample_pair(eps: float) -> tuple[DiscreteDistribution, DiscreteDistribution]:
    """Uniform ``p`` on 2x2 and the one-parameter ``q`` perturbing it.

    ``q = [[1/4 - 3 eps, 1/4 + eps], [1/4 + eps, 1/4 + eps]]`` for
    ``-1/4 < eps < 1/12``; ``q`` is a product distribution only at ``eps = 0``.
    """
    if not -0.25 < eps < 1.0 / 12.0:
        raise ValueError(f"eps={eps!r} outside the open interval (-1/4, 1/12)")
    p = DiscreteDistribution.uniform((2, 2))
    q = DiscreteDistribution(
        (2, 2), np.array([0.25 - 3 * eps, 0.25 + eps, 0.25 + eps, 0.25 + eps])
    )
    return p, q


def random_distribution(shape: Sequence[int], rng: np.random.Generator) -> DiscreteDistribution:
    """Normalized independent uniform(0, 1) entries."""
    w = rng.random(math.prod(shape))
    return DiscreteDistribution(tuple(shape), w / w.sum())
