"""Numerical verification of Chang's lemma on {-1,1}^n.

For ``A`` with density ``alpha`` and ``f = 1_A``, the level-1 Fourier weight
satisfies ``W^1(f) <= 2 alpha^2 ln(1/alpha)``. This module checks that bound set
by set, replays the entropy/Pinsker argument behind it as a :class:`ProofTrace`,
and runs exhaustive and randomized sweeps.

Sets are identified by their *bitset encoding*: the integer whose bit ``m`` is
set iff cube point ``m`` is in ``A`` (see :func:`changcube.fourier.to_hexbitset`).
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import IO, Iterable

import numpy as np

from . import fourier as fr
from . import info

VIOLATION_TOL = 1e-12
EXHAUSTIVE_MAX_N = 4


class TraceInvariantError(RuntimeError):
    """A step of the entropy/Pinsker chain failed numerically."""


@dataclass(frozen=True)
class ChangReport:
    n: int
    set_size: int
    alpha: float
    w1: float
    bound: float
    slack: float
    holds: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ProofTrace:
    """Every quantity in the chain

        ln(1/alpha) = D(p||q) >= sum_i D(p_i||q_i) >= 1/2 sum_i |p_i - q_i|_1^2

    with ``p`` uniform on ``A`` and ``q`` uniform on the cube, plus ``W^1/alpha^2``
    which must equal ``sum_i |p_i - q_i|_1^2``.
    """

    ln_inv_alpha: float
    divergence: float
    marginal_divergence_sum: float
    half_l1_sum: float
    w1_over_alpha_sq: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SweepSummary:
    n: int
    sets_checked: int
    violations: int
    min_slack: float
    argmin_set: str
    equality_sets: tuple[str, ...] = ()
    rows: tuple[tuple[str, float, float, float, float], ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["equality_sets"] = list(self.equality_sets)
        del d["rows"]
        return d


@dataclass(frozen=True)
class ExtremalResult:
    n: int
    max_ratio: float
    argmax_set: str
    reports: tuple[ChangReport, ...]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "max_ratio": self.max_ratio,
            "argmax_set": self.argmax_set,
            "reports": [r.to_dict() for r in self.reports],
        }


@dataclass(frozen=True)
class LevelKReport:
    k: int
    lhs: float
    rhs: float
    applicable: bool
    holds: bool

    def to_dict(self) -> dict:
        return asdict(self)


def chang_bound(alpha: float) -> float:
    """``2 alpha^2 ln(1/alpha)`` for ``0 < alpha <= 1``."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha={alpha!r} outside (0, 1]")
    if alpha == 1.0:
        return 0.0
    return 2.0 * alpha * alpha * -math.log(alpha)


def _nonempty_size(A: fr.CubeFunction) -> int:
    size = fr.set_size(A)
    if size == 0:
        raise ValueError("empty set")
    return size


def verify_chang(A: fr.CubeFunction) -> ChangReport:
    size = _nonempty_size(A)
    alpha = size / (1 << A.n)
    w1 = fr.level_weight(fr.walsh_hadamard_transform(A), 1)
    bound = chang_bound(alpha)
    slack = bound - w1
    return ChangReport(A.n, size, alpha, w1, bound, slack, slack >= -VIOLATION_TOL)


def cube_distribution(A: fr.CubeFunction) -> info.DiscreteDistribution:
    """Uniform distribution on ``A`` as a ``2 x ... x 2`` product-space distribution.

    Axis ``i`` is coordinate ``x_{i+1}``; index 0 on that axis means ``+1``.
    """
    size = _nonempty_size(A)
    arr = (A.values / size).reshape((2,) * A.n)
    # reshape puts the highest mask bit on axis 0; reverse so axis i is bit i
    arr = np.ascontiguousarray(arr.transpose(tuple(reversed(range(A.n)))))
    return info.DiscreteDistribution.from_array(arr)


def proof_trace(A: fr.CubeFunction) -> ProofTrace:
    """Replay the entropy/Pinsker argument for ``A`` and check every step.

    Raises :class:`TraceInvariantError` if any equality or inequality of the
    chain fails beyond ``1e-12``.
    """
    size = _nonempty_size(A)
    n = A.n
    alpha = size / (1 << n)
    p = cube_distribution(A)
    q = info.DiscreteDistribution.uniform((2,) * n)

    ln_inv_alpha = math.log((1 << n) / size)
    divergence = info.kl_divergence(p, q)
    breakdown = info.superadditivity_breakdown(p, q)
    half_l1 = 0.5 * math.fsum(
        info.l1_distance(pi, qi) ** 2 for pi, qi in zip(info.marginals(p), info.marginals(q))
    )
    w1 = fr.level_weight(fr.walsh_hadamard_transform(A), 1)
    trace = ProofTrace(ln_inv_alpha, divergence, breakdown.marginal_sum, half_l1, w1 / alpha**2)
    _check_trace(trace)
    return trace


def _check_trace(t: ProofTrace) -> None:
    tol = VIOLATION_TOL
    if abs(t.ln_inv_alpha - t.divergence) > tol:
        raise TraceInvariantError(f"ln(1/alpha)={t.ln_inv_alpha!r} != D(p||q)={t.divergence!r}")
    if t.divergence < t.marginal_divergence_sum - tol:
        raise TraceInvariantError("subadditivity step failed")
    if t.marginal_divergence_sum < t.half_l1_sum - tol:
        raise TraceInvariantError("Pinsker step failed")
    if t.half_l1_sum < -tol:
        raise TraceInvariantError("negative L1 sum")
    if abs(t.w1_over_alpha_sq - 2.0 * t.half_l1_sum) > tol:
        raise TraceInvariantError("W1/alpha^2 != sum of squared marginal L1 distances")


# -- batched evaluation for small n ------------------------------------------


def _bitset_matrix(n: int, encodings: np.ndarray) -> np.ndarray:
    size = 1 << n
    return ((encodings[:, None] >> np.arange(size, dtype=np.int64)) & 1).astype(np.float64)


def _hex(n: int, encoding: int) -> str:
    return format(int(encoding), f"0{max(1, (1 << n) // 4)}x")


def _batch_level1(n: int, encodings: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Density and W^1 for many sets at once."""
    size = 1 << n
    vals = _bitset_matrix(n, encodings)
    coeffs = fr.hadamard_butterfly(vals) / size
    w1 = np.sum(coeffs[:, [1 << i for i in range(n)]] ** 2, axis=1)
    alpha = vals.sum(axis=1) / size
    return alpha, w1


def _batch_bound(alpha: np.ndarray) -> np.ndarray:
    # + 0.0 turns the -0.0 at alpha = 1 into 0.0
    return 2.0 * alpha * alpha * -np.log(alpha) + 0.0


def _all_nonempty(n: int) -> np.ndarray:
    if not 1 <= n <= EXHAUSTIVE_MAX_N:
        raise ValueError(
            f"exhaustive enumeration needs 1 <= n <= {EXHAUSTIVE_MAX_N}; use sampled_verify"
        )
    return np.arange(1, 1 << (1 << n), dtype=np.int64)


def exhaustive_verify(n: int, keep_rows: bool = False) -> SweepSummary:
    """Check the bound on every nonempty subset of {-1,1}^n, ``n <= 4``."""
    enc = _all_nonempty(n)
    alpha, w1 = _batch_level1(n, enc)
    bound = _batch_bound(alpha)
    slack = bound - w1
    best = int(np.argmin(slack))  # first occurrence = lowest encoding
    equal = enc[np.abs(slack) <= VIOLATION_TOL]
    rows = ()
    if keep_rows:
        rows = tuple(
            (_hex(n, e), float(a), float(w), float(b), float(s))
            for e, a, w, b, s in zip(enc, alpha, w1, bound, slack)
        )
    return SweepSummary(
        n=n,
        sets_checked=int(enc.size),
        violations=int(np.count_nonzero(slack < -VIOLATION_TOL)),
        min_slack=float(slack[best]),
        argmin_set=_hex(n, enc[best]),
        equality_sets=tuple(_hex(n, e) for e in equal),
        rows=rows,
    )


def _random_nonempty_set(n: int, rng: np.random.Generator) -> fr.CubeFunction:
    size = 1 << n
    while True:
        u = rng.random()
        bits = rng.random(size) < u
        if bits.any():
            return fr.CubeFunction(n, bits.astype(np.float64))


def random_sets(n: int, trials: int, seed: int) -> Iterable[fr.CubeFunction]:
    """Seeded random nonempty sets; trial ``i`` depends only on ``(seed, i)``.

    Each trial draws an inclusion probability from uniform(0, 1) and includes
    every point independently with it, redrawing if the set comes out empty.
    """
    for child in np.random.SeedSequence(seed).spawn(trials):
        yield _random_nonempty_set(n, np.random.default_rng(child))


def _sample_chunk(n: int, children: list[np.random.SeedSequence], keep_rows: bool):
    best = None
    violations = 0
    rows = []
    for child in children:
        A = _random_nonempty_set(n, np.random.default_rng(child))
        rep = verify_chang(A)
        violations += not rep.holds
        if best is None or rep.slack < best[0] or (
            rep.slack == best[0] and fr.indicator_to_bitset(A) < fr.indicator_to_bitset(best[1])
        ):
            best = (rep.slack, A)
        if keep_rows:
            rows.append((fr.to_hexbitset(A), rep.alpha, rep.w1, rep.bound, rep.slack))
    return best, violations, rows


def sampled_verify(
    n: int, trials: int, seed: int, keep_rows: bool = False, workers: int = 1
) -> SweepSummary:
    """Check the bound on ``trials`` random nonempty sets.

    The result depends only on ``(n, trials, seed)``; ``workers`` shards the
    trials across threads without changing the summary.
    """
    fr.check_dimension(n)
    if trials < 1:
        raise ValueError("trials must be positive")
    children = np.random.SeedSequence(seed).spawn(trials)
    workers = max(1, min(workers, trials))
    chunks = [children[i::workers] for i in range(workers)]
    if workers == 1:
        parts = [_sample_chunk(n, chunks[0], keep_rows)]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda c: _sample_chunk(n, c, keep_rows), chunks))

    best = None
    for b, _, _ in parts:
        if best is None or b[0] < best[0] or (
            b[0] == best[0] and fr.indicator_to_bitset(b[1]) < fr.indicator_to_bitset(best[1])
        ):
            best = b
    rows: list = [None] * trials if keep_rows else []
    if keep_rows:
        for w, (_, _, part_rows) in enumerate(parts):
            rows[w::workers] = part_rows
    return SweepSummary(
        n=n,
        sets_checked=trials,
        violations=sum(v for _, v, _ in parts),
        min_slack=float(best[0]),
        argmin_set=fr.to_hexbitset(best[1]),
        rows=tuple(rows),
    )


def extremal_search(n: int) -> ExtremalResult:
    """Maximize ``W^1 / bound`` over all nonempty proper subsets, ``n <= 4``.

    The full cube is skipped (bound 0). ``reports`` lists every set whose
    ratio is within 1e-12 of the maximum, lowest encoding first.
    """
    enc = _all_nonempty(n)
    alpha, w1 = _batch_level1(n, enc)
    keep = alpha < 1.0
    enc, alpha, w1 = enc[keep], alpha[keep], w1[keep]
    ratio = w1 / _batch_bound(alpha)
    top = float(ratio.max())
    winners = enc[ratio >= top - 1e-12]
    reports = tuple(verify_chang(fr.indicator_from_bitset(n, int(e))) for e in winners)
    return ExtremalResult(n, top, _hex(n, winners[0]), reports)


def level_k_report(A: fr.CubeFunction, k: int) -> LevelKReport:
    """Evaluate ``sum_{1<=|S|<=k} f_hat(S)^2 <= (2e/k ln(1/alpha))^k alpha^2``.

    The inequality is only claimed when ``k <= 2 ln(1/alpha)``; outside that
    range ``holds`` is reported as computed but carries no expectation.
    """
    size = _nonempty_size(A)
    if not 1 <= k <= A.n:
        raise ValueError(f"k={k} outside [1, {A.n}]")
    alpha = size / (1 << A.n)
    ln_inv = math.log((1 << A.n) / size)
    lhs = fr.cumulative_level_weight(fr.walsh_hadamard_transform(A), k)
    rhs = (2.0 * math.e / k * ln_inv) ** k * alpha**2
    return LevelKReport(k, lhs, rhs, k <= 2.0 * ln_inv, lhs <= rhs + VIOLATION_TOL)


CSV_COLUMNS = ("set_hexbitset", "alpha", "w1", "bound", "slack")


def write_sweep_csv(summary: SweepSummary, fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for hexset, *nums in summary.rows:
        writer.writerow([hexset, *(repr(float(x)) for x in nums)])
