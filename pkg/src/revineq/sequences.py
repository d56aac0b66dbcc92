"""Finite non-negative sequences and their quasi-monotone classifications.

Everything here is 1-indexed to match the usual analytic conventions:
``s[1]`` is the first entry.  Sequences are immutable and carry a mode tag
(``exact`` rationals or high-precision floats); see :mod:`revineq.numeric`.

Three classifications matter downstream:

* plain monotonicity (non-negative decreasing / increasing),
* dyadic comparability: constants ``K1 <= s[2^(v+1)]/s[2^v] <= K2`` over a
  window of dyadic index pairs,
* geometric partial-sum domination: the least ``K`` with
  ``sum(s[1..m]) <= K * s[m]`` over a window of ``m``.

The window is always explicit; finite data cannot certify an infinite
condition, so every profile records the range it was computed on.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import (
    InputFormatError,
    InvalidRangeError,
    ZeroDyadicEntryError,
)
from .numeric import (
    EXACT,
    FLOAT,
    Number,
    as_fraction,
    as_mpf,
    format_number,
    is_integral,
    npow,
    parse_number,
)

DECREASING = "decreasing"
INCREASING = "increasing"
NEITHER = "neither"


@dataclass(frozen=True)
class Sequence:
    """Immutable 1-indexed finite sequence of non-negative numbers."""

    values: tuple
    mode: str

    def __post_init__(self):
        if len(self.values) < 1:
            raise InvalidRangeError("a sequence needs at least one entry")
        if self.mode not in (EXACT, FLOAT):
            raise InputFormatError(f"unknown mode {self.mode!r}")
        expected = Fraction if self.mode == EXACT else type(as_mpf(0))
        for v in self.values:
            if not isinstance(v, expected):
                raise InputFormatError(f"mode {self.mode!r} does not allow entry {v!r}")
            if v < 0:
                raise InvalidRangeError(f"negative entry {v!r}")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> Number:
        """1-indexed access; index must lie in 1..len."""
        if not 1 <= index <= len(self.values):
            raise InvalidRangeError(f"index {index} outside 1..{len(self.values)}")
        return self.values[index - 1]

    @staticmethod
    def exact(values: Iterable) -> "Sequence":
        return Sequence(tuple(as_fraction(v) for v in values), EXACT)

    @staticmethod
    def floats(values: Iterable) -> "Sequence":
        return Sequence(tuple(as_mpf(v) for v in values), FLOAT)

    def to_float(self) -> "Sequence":
        if self.mode == FLOAT:
            return self
        return Sequence(tuple(as_mpf(v) for v in self.values), FLOAT)

    def scaled(self, c) -> "Sequence":
        if self.mode == EXACT and isinstance(c, (int, Fraction)):
            cf = Fraction(c)
            return Sequence(tuple(v * cf for v in self.values), EXACT)
        cf = as_mpf(c)
        return Sequence(tuple(as_mpf(v) * cf for v in self.values), FLOAT)

    def to_json(self) -> dict:
        return {"mode": self.mode, "values": [format_number(v) for v in self.values]}

    @staticmethod
    def from_json(payload) -> "Sequence":
        if isinstance(payload, str):
            payload = json.loads(payload)
        try:
            mode = payload["mode"]
            values = [parse_number(t, mode) for t in payload["values"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputFormatError(f"bad sequence payload: {exc}") from exc
        return Sequence(tuple(values), mode)


@dataclass(frozen=True)
class SequenceProfile:
    """Monotonicity direction plus minimal dyadic/geometric constants on a window.

    ``K1``/``K2`` are the extreme dyadic ratios actually observed, i.e. the
    largest lower and smallest upper admissible constants.  ``Kgeo`` is the
    minimal geometric partial-sum constant when it was computed.
    """

    direction: str
    K1: Number | None
    K2: Number | None
    Kgeo: Number | None
    range: tuple[int, int]

    def __post_init__(self):
        if self.direction not in (DECREASING, INCREASING, NEITHER):
            raise InputFormatError(f"bad direction {self.direction!r}")
        if (self.K1 is None) != (self.K2 is None):
            raise InputFormatError("K1 and K2 come as a pair")
        if self.K1 is not None and self.K1 > 0 and not self.K1 <= self.K2:
            raise InputFormatError("need K1 <= K2")
        if self.Kgeo is not None and self.Kgeo < 1:
            raise InputFormatError("a geometric partial-sum constant is always >= 1")

    @property
    def is_quasi_lacunary_monotone(self) -> bool:
        """Window-relative class membership: monotone with finite positive constants."""
        return (
            self.direction != NEITHER
            and self.K1 is not None
            and self.K1 > 0
            and self.K2 > 0
        )

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "K1": None if self.K1 is None else format_number(self.K1),
            "K2": None if self.K2 is None else format_number(self.K2),
            "Kgeo": None if self.Kgeo is None else format_number(self.Kgeo),
            "range": list(self.range),
            "is_quasi_lacunary_monotone": self.is_quasi_lacunary_monotone,
        }


@dataclass(frozen=True)
class PowerWeight:
    """The weight family mu -> mu**exponent; exactly monotone for every exponent."""

    exponent: Fraction

    def materialize(self, length: int) -> Sequence:
        return power_sequence(self.exponent, length)


@dataclass(frozen=True)
class DyadicBracket:
    """The (N, M) locating n, m between consecutive powers of two.

    2^(N-1) < n <= 2^N and 2^M <= m < 2^(M+1).  N = 0 happens exactly for
    n = 1; all proofs only use the bracketing inequalities, which still hold.
    """

    N: int
    M: int


def monotone_direction(s: Sequence, lo: int = 1, hi: int | None = None) -> str:
    """Direction on the inclusive window [lo, hi]; constants count as decreasing."""
    if hi is None:
        hi = len(s)
    non_increasing = all(s[i + 1] <= s[i] for i in range(lo, hi))
    if non_increasing:
        return DECREASING
    non_decreasing = all(s[i + 1] >= s[i] for i in range(lo, hi))
    if non_decreasing:
        return INCREASING
    return NEITHER


def is_nonneg_decreasing(s: Sequence) -> bool:
    """True iff every entry is >= 0 and entries never increase (ties allowed)."""
    return monotone_direction(s) == DECREASING


def lacunary_constants(s: Sequence, numax: int):
    """Extreme dyadic ratios (K1, K2) of s over the pairs (2^v, 2^(v+1)), v < numax.

    K1 is the smallest observed ratio (the best lower constant), K2 the
    largest.  A 0/0 dyadic pair constrains nothing and is skipped; a positive
    value over a zero one admits no finite K2 and raises.
    """
    if numax < 1:
        raise InvalidRangeError("numax must be >= 1")
    needed = 2 ** (numax + 1)
    if len(s) < needed:
        raise InvalidRangeError(f"need length >= {needed} for numax={numax}, got {len(s)}")
    ratios = []
    for v in range(numax):
        lo_val = s[2**v]
        hi_val = s[2 ** (v + 1)]
        if lo_val == 0:
            if hi_val > 0:
                raise ZeroDyadicEntryError(
                    f"entry at index {2**v} is zero below a positive one: no finite K2"
                )
            continue
        ratios.append(hi_val / lo_val)
    if not ratios:
        zero = Fraction(0) if s.mode == EXACT else as_mpf(0)
        return zero, zero
    return min(ratios), max(ratios)


def is_quasi_lacunary_monotone(s: Sequence, numax: int) -> SequenceProfile:
    """Profile of s: direction scan plus dyadic constants over the stated window."""
    window_hi = 2 ** (numax + 1)
    k1, k2 = lacunary_constants(s, numax)
    direction = monotone_direction(s, 1, min(window_hi, len(s)))
    if k1 == 0 and k2 == 0:
        k1 = k2 = None  # degenerate all-zero dyadics: no constants to report
    return SequenceProfile(direction=direction, K1=k1, K2=k2, Kgeo=None, range=(1, window_hi))


def geometric_constant(s: Sequence, mmax: int) -> Number:
    """Minimal K with sum(s[1..m]) <= K*s[m] for every m <= mmax."""
    if not 1 <= mmax <= len(s):
        raise InvalidRangeError(f"mmax must lie in 1..{len(s)}")
    best = None
    partial = Fraction(0) if s.mode == EXACT else as_mpf(0)
    for m in range(1, mmax + 1):
        partial = partial + s[m]
        if s[m] == 0:
            raise ZeroDyadicEntryError(f"entry {m} is zero: partial sums are unbounded relative to it")
        ratio = partial / s[m]
        if best is None or ratio > best:
            best = ratio
    return best


def power_sequence(e, length: int) -> Sequence:
    """The sequence mu -> mu**e for mu = 1..length.

    Exact rationals whenever e is an integer (negative included); float mode
    otherwise.
    """
    if length < 1:
        raise InvalidRangeError("length must be >= 1")
    e = as_fraction(e) if not isinstance(e, Fraction) else e
    if is_integral(e):
        k = int(e)
        return Sequence.exact(Fraction(mu) ** k for mu in range(1, length + 1))
    eb = as_mpf(e)
    return Sequence.floats(npow(as_mpf(mu), eb) for mu in range(1, length + 1))


_DISTRIBUTIONS = ("uniform", "positive", "sparse", "heavy", "step")


def random_decreasing(length: int, seed: int, dist: str = "uniform") -> Sequence:
    """Random non-negative decreasing sequence, deterministic in (seed, dist).

    Built as suffix sums of non-negative rational increments, so the result
    is decreasing by construction.  Distributions:

    * ``uniform``  -- increments uniform on {0, 1/1000, ..., 1}
    * ``positive`` -- like uniform but bounded away from zero (strictly
      decreasing, strictly positive)
    * ``sparse``   -- mostly zero increments: plateaus and zero tails
    * ``heavy``    -- occasional large jumps
    * ``step``     -- a single unit increment: a 0/1 step sequence
    """
    if length < 1:
        raise InvalidRangeError("length must be >= 1")
    if dist not in _DISTRIBUTIONS:
        raise InputFormatError(f"unknown distribution {dist!r}; choose from {_DISTRIBUTIONS}")
    rng = random.Random(f"{seed}:{dist}")  # str seeding hashes stably via sha512
    increments: list[Fraction]
    if dist == "uniform":
        increments = [Fraction(rng.randint(0, 1000), 1000) for _ in range(length)]
    elif dist == "positive":
        increments = [Fraction(rng.randint(1, 1000), 1000) for _ in range(length)]
    elif dist == "sparse":
        increments = [
            Fraction(rng.randint(1, 1000), 1000) if rng.random() < 0.25 else Fraction(0)
            for _ in range(length)
        ]
    elif dist == "heavy":
        increments = [Fraction(rng.randint(0, 10) ** 3, 1000) for _ in range(length)]
    else:  # step
        where = rng.randint(1, length)
        increments = [Fraction(1) if i == where else Fraction(0) for i in range(1, length + 1)]
    total = Fraction(0)
    out = [Fraction(0)] * length
    for i in range(length - 1, -1, -1):
        total += increments[i]
        out[i] = total
    return Sequence.exact(out)


def dyadic_bracket(n: int, m: int) -> DyadicBracket:
    """The unique bracket with 2^(N-1) < n <= 2^N and 2^M <= m < 2^(M+1)."""
    if not 1 <= n <= m:
        raise InvalidRangeError(f"need 1 <= n <= m, got n={n}, m={m}")
    big_n = (n - 1).bit_length()  # smallest N with 2^N >= n
    big_m = m.bit_length() - 1  # largest M with 2^M <= m
    return DyadicBracket(N=big_n, M=big_m)


def dyadic_weighted_transform(s: Sequence, mmax: int) -> Sequence:
    """The derived sequence i -> 2^i * s[2^i] for i = 1..mmax.

    Its geometric partial-sum constant is what tail-type certificates need.
    """
    if len(s) < 2**mmax:
        raise InvalidRangeError(f"need length >= {2**mmax} for mmax={mmax}")
    if s.mode == EXACT:
        return Sequence.exact(Fraction(2) ** i * s[2**i] for i in range(1, mmax + 1))
    return Sequence.floats(as_mpf(2) ** i * s[2**i] for i in range(1, mmax + 1))


def step_sequence(k: int, length: int) -> Sequence:
    """The 0/1 sequence that is 1 up to index k and 0 after (an extreme ray)."""
    if not 1 <= k <= length:
        raise InvalidRangeError(f"need 1 <= k <= length, got k={k}, length={length}")
    return Sequence.exact([Fraction(1)] * k + [Fraction(0)] * (length - k))


def harmonic_sequence(length: int) -> Sequence:
    """1, 1/2, 1/3, ... as exact rationals."""
    if length < 1:
        raise InvalidRangeError("length must be >= 1")
    return Sequence.exact(Fraction(1, nu) for nu in range(1, length + 1))


def ones(length: int) -> Sequence:
    """The constant-1 sequence."""
    return Sequence.exact([Fraction(1)] * length)
