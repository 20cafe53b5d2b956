"""Fourier analysis of real-valued functions on the hypercube {-1,1}^n.

Points and subsets are both encoded as bitmasks. Bit ``i`` of a point mask is
set when coordinate ``x_{i+1}`` equals -1, so the all-(+1) point is mask 0.
Bit ``i`` of a subset mask is set when ``i+1`` belongs to ``S``. With this
convention the character is

    chi_S(x) = (-1) ** popcount(S & x)

and the Fourier coefficients are ``f_hat(S) = mean_x f(x) chi_S(x)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_N = 24


def check_dimension(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"dimension must be an integer, got {n!r}")
    n = int(n)
    if not 1 <= n <= MAX_N:
        raise ValueError(f"dimension n={n} outside [1, {MAX_N}]")
    return n


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """Popcount of every mask in ``range(2**n)`` (read-only, cached)."""
    counts = np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int64)
    counts.setflags(write=False)
    return counts


@dataclass(frozen=True)
class CubePoint:
    mask: int
    n: int

    def __post_init__(self):
        n = check_dimension(self.n)
        if not 0 <= self.mask < (1 << n):
            raise ValueError(f"mask {self.mask} out of range for n={n}")

    @classmethod
    def from_signs(cls, signs: Sequence[int]) -> "CubePoint":
        mask = 0
        for i, s in enumerate(signs):
            if s == -1:
                mask |= 1 << i
            elif s != 1:
                raise ValueError(f"coordinate {i} is {s!r}, expected +1 or -1")
        return cls(mask, len(signs))

    def signs(self) -> tuple[int, ...]:
        return tuple(-1 if (self.mask >> i) & 1 else 1 for i in range(self.n))


@dataclass(frozen=True, eq=False)
class CubeFunction:
    """A function ``{-1,1}^n -> R`` stored as ``values[mask]``."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        n = check_dimension(self.n)
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} values for n={n}, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "values", values)

    def is_indicator(self) -> bool:
        return bool(np.all((self.values == 0.0) | (self.values == 1.0)))

    def __call__(self, point: CubePoint | int) -> float:
        mask = point.mask if isinstance(point, CubePoint) else int(point)
        return float(self.values[mask])


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=np.float64)
        if coeffs.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} coefficients, got shape {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def __getitem__(self, smask: int) -> float:
        return float(self.coeffs[smask])

    def expand(self) -> CubeFunction:
        """Evaluate the Fourier expansion sum_S f_hat(S) chi_S back on the cube."""
        return CubeFunction(self.n, hadamard_butterfly(self.coeffs))


@dataclass(frozen=True)
class BinaryMarginal:
    p_plus: float
    p_minus: float

    def __post_init__(self):
        if self.p_plus < 0 or self.p_minus < 0:
            raise ValueError("marginal masses must be nonnegative")
        if abs(self.p_plus + self.p_minus - 1.0) > 1e-12:
            raise ValueError("marginal masses must sum to 1")

    def l1_to_uniform(self) -> float:
        return abs(self.p_plus - 0.5) + abs(self.p_minus - 0.5)

    def as_tuple(self) -> tuple[float, float]:
        return (self.p_plus, self.p_minus)


# -- construction -----------------------------------------------------------


def indicator_from_points(n: int, points: Iterable[CubePoint | int]) -> CubeFunction:
    """Build the indicator ``1_A`` of a set of cube points.

    Points may be :class:`CubePoint` instances or bare integer masks. Duplicates
    are rejected rather than silently merged.
    """
    n = check_dimension(n)
    values = np.zeros(1 << n)
    for pt in points:
        if isinstance(pt, CubePoint):
            if pt.n != n:
                raise ValueError(f"point has dimension {pt.n}, expected {n}")
            mask = pt.mask
        else:
            mask = int(pt)
            if not 0 <= mask < (1 << n):
                raise ValueError(f"mask {mask} out of range for n={n}")
        if values[mask]:
            raise ValueError(f"duplicate point {mask}")
        values[mask] = 1.0
    return CubeFunction(n, values)


def indicator_from_bitset(n: int, bitset: int) -> CubeFunction:
    """Indicator whose point ``mask`` is in the set iff bit ``mask`` of ``bitset`` is set."""
    n = check_dimension(n)
    size = 1 << n
    if bitset < 0 or bitset >> size:
        raise ValueError(f"bitset has bits beyond the {size} cube points")
    raw = bitset.to_bytes((size + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]
    return CubeFunction(n, bits.astype(np.float64))


def indicator_to_bitset(f: CubeFunction) -> int:
    _require_indicator(f)
    packed = np.packbits(f.values.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def to_hexbitset(f: CubeFunction) -> str:
    """Hex string of the indicator, lowest-order bit = mask 0, zero-padded."""
    width = max(1, (1 << f.n) // 4)
    return format(indicator_to_bitset(f), f"0{width}x")


def from_hexbitset(n: int, hexbitset: str) -> CubeFunction:
    try:
        bitset = int(hexbitset, 16)
    except ValueError:
        raise ValueError(f"not a hex string: {hexbitset!r}") from None
    return indicator_from_bitset(n, bitset)


def parse_set_spec(spec: dict | str) -> CubeFunction:
    """Parse ``{"n": .., "points": [..]}`` or ``{"n": .., "hexbitset": ".."}``."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, dict) or "n" not in spec:
        raise ValueError('set spec must be a JSON object with key "n"')
    n = spec["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError('"n" must be an integer')
    has_points, has_hex = "points" in spec, "hexbitset" in spec
    if has_points == has_hex:
        raise ValueError('set spec needs exactly one of "points" or "hexbitset"')
    if has_points:
        points = spec["points"]
        if not isinstance(points, list) or not all(
            isinstance(p, int) and not isinstance(p, bool) for p in points
        ):
            raise ValueError('"points" must be a list of integer masks')
        return indicator_from_points(n, points)
    return from_hexbitset(n, str(spec["hexbitset"]))


def set_spec(f: CubeFunction) -> dict:
    """Inverse of :func:`parse_set_spec` using the points form."""
    _require_indicator(f)
    return {"n": f.n, "points": [int(m) for m in np.flatnonzero(f.values)]}


# -- transforms ---------------------------------------------------------------


def hadamard_butterfly(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis.

    Returns a new array ``H`` with ``H[..., S] = sum_x values[..., x] * chi_S(x)``.
    The last axis must have length ``2**n``. Leading axes are treated as a batch.
    """
    out = np.array(values, dtype=np.float64, copy=True)
    size = out.shape[-1]
    if size & (size - 1) or size == 0:
        raise ValueError(f"last axis length {size} is not a power of two")
    batch = out.shape[:-1]
    h = 1
    while h < size:
        view = out.reshape(*batch, size // (2 * h), 2, h)
        lo = view[..., 0, :].copy()
        hi = view[..., 1, :]
        view[..., 0, :] += hi
        view[..., 1, :] = lo - hi
        h *= 2
    return out


def walsh_hadamard_transform(f: CubeFunction) -> FourierSpectrum:
    """All ``2**n`` Fourier coefficients in O(n 2^n) time."""
    return FourierSpectrum(f.n, hadamard_butterfly(f.values) / (1 << f.n))


def naive_fourier_coefficient(f: CubeFunction, smask: int) -> float:
    """Definitional ``(1/2^n) sum_x f(x) chi_S(x)``; slow, used as an oracle."""
    size = 1 << f.n
    if not 0 <= smask < size:
        raise ValueError(f"subset mask {smask} out of range for n={f.n}")
    masks = np.arange(size, dtype=np.uint32)
    chi = 1.0 - 2.0 * (np.bitwise_count(masks & np.uint32(smask)) & 1)
    return float(np.sum(f.values * chi) / size)


# -- spectral summaries -------------------------------------------------------


def _check_level(spec: FourierSpectrum, k: int) -> None:
    if not 0 <= k <= spec.n:
        raise ValueError(f"level k={k} outside [0, {spec.n}]")


def level_weight(spec: FourierSpectrum, k: int) -> float:
    """``W^k``: sum of squared coefficients over subsets of size exactly ``k``."""
    _check_level(spec, k)
    sel = popcounts(spec.n) == k
    return float(np.sum(spec.coeffs[sel] ** 2))


def cumulative_level_weight(spec: FourierSpectrum, k: int) -> float:
    """Sum of squared coefficients over subsets with ``1 <= |S| <= k``.

    The empty set is excluded, so ``k = 0`` gives 0.
    """
    _check_level(spec, k)
    pc = popcounts(spec.n)
    sel = (pc >= 1) & (pc <= k)
    return float(np.sum(spec.coeffs[sel] ** 2))


def _require_indicator(f: CubeFunction) -> None:
    if not f.is_indicator():
        raise ValueError("function is not an indicator (values must be exactly 0 or 1)")


def set_size(f: CubeFunction) -> int:
    _require_indicator(f)
    return int(np.count_nonzero(f.values))


def density(f: CubeFunction) -> float:
    return set_size(f) / (1 << f.n)


def conditional_marginals(f: CubeFunction) -> list[BinaryMarginal]:
    """Per-coordinate ``(Pr[x_i = +1 | x in A], Pr[x_i = -1 | x in A])``."""
    size = set_size(f)
    if size == 0:
        raise ValueError("empty set")
    members = np.flatnonzero(f.values)
    out = []
    for i in range(f.n):
        plus = int(np.count_nonzero(((members >> i) & 1) == 0))
        out.append(BinaryMarginal(plus / size, (size - plus) / size))
    return out
