"""
Simple Parry numbers: digit validation, classification, the canonical
substitution, the dominant root and the confluent numeration system.

Digit strings d = t_1 ... t_m are the primary input everywhere; the numeric
base beta is derived from them and never the other way round, except in
renyi_digits, which expands a user-supplied beta.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from mpmath import mpf
from mpmath.ctx_mp import MPContext

from parry_words.config_loader import (
    RENYI_DEFAULT_MAX_DIGITS,
    RENYI_GUARD,
    ROOT_BISECTION_STEPS,
    ROOT_NEWTON_STEPS,
    ROOT_TOLERANCE,
    SWEEP_M_MAX,
    SWEEP_T_MAX,
)
from parry_words.words import Morphism

logger = logging.getLogger("parry-words")


class ParryConditionError(ValueError):
    """Raised when a digit string is not the Rényi expansion of a simple Parry number."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class TrailingZeroError(ValueError):
    """Raised when the last digit is 0 (finite expansions omit ending zeros)."""
    pass


class OutOfScopeError(ValueError):
    """Raised for digit strings outside the studied family (m = 1, or not of the form t..ts)."""
    pass


class PrecisionError(ArithmeticError):
    """Raised when the working precision cannot decide a floor."""
    pass


# ----------------------
# DIGITS
# ----------------------

def _parry_violation(digits: Tuple[int, ...]) -> Optional[int]:
    """1-based index i of the first suffix t_i t_(i+1)... not strictly below the whole string."""
    m = len(digits)
    for i in range(1, m):
        # zero padding to length m compares the eventually-zero words exactly
        suffix = digits[i:] + (0,) * i
        if suffix >= digits:
            return i + 1
    return None


@dataclass(frozen=True)
class RenyiDigits:
    """A validated d_beta(1) = t_1 ... t_m of a simple Parry number."""
    digits: Tuple[int, ...]

    def __post_init__(self):
        digits = tuple(int(t) for t in self.digits)
        object.__setattr__(self, "digits", digits)
        if not digits:
            raise ParryConditionError("Digit string is empty", index=0)
        negative = next((i for i, t in enumerate(digits) if t < 0), None)
        if negative is not None:
            raise ParryConditionError(f"Digit t_{negative + 1} = {digits[negative]} is negative", index=negative + 1)
        if digits[-1] == 0:
            raise TrailingZeroError(f"Last digit of {self} is 0; simple expansions omit ending zeros")
        if len(digits) == 1 and digits[0] < 2:
            raise ParryConditionError("A single digit must be >= 2 (beta > 1)", index=1)
        index = _parry_violation(digits)
        if index is not None:
            suffix = "".join(map(str, digits[index - 1:]))
            raise ParryConditionError(
                f"Parry condition fails for {self}: suffix {suffix} starting at t_{index} "
                f"is not smaller than the whole digit string",
                index=index,
            )

    @property
    def m(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        return ",".join(map(str, self.digits))


def check_parry(digits: Sequence[int]) -> RenyiDigits:
    """Validate a raw digit sequence; raises ParryConditionError naming the first bad suffix."""
    return RenyiDigits(tuple(digits))


# ----------------------
# CLASSIFICATION
# ----------------------

class ClassTag(str, Enum):
    ARNOUX_RAUZY = "ArnouxRauzy"
    CONFLUENT_NON_UNIT = "ConfluentNonUnit"
    NON_CONFLUENT = "NonConfluent"


@dataclass(frozen=True, order=True)
class ConfluentParams:
    """Digits of the form t^(m-1) s with t >= s >= 1 and m >= 2."""
    m: int
    t: int
    s: int

    def __post_init__(self):
        if self.m < 2:
            raise OutOfScopeError(f"m must be >= 2, got {self.m}")
        if not self.t >= self.s >= 1:
            raise OutOfScopeError(f"Need t >= s >= 1, got t={self.t}, s={self.s}")

    def digits(self) -> RenyiDigits:
        return RenyiDigits((self.t,) * (self.m - 1) + (self.s,))

    @classmethod
    def from_digits(cls, d: RenyiDigits) -> "ConfluentParams":
        cls_ = classify(d)
        if cls_.params is None:
            raise OutOfScopeError(f"Digits {d} are not of the form t...ts")
        return cls_.params

    @property
    def is_arnoux_rauzy(self) -> bool:
        return self.s == 1

    def label(self) -> str:
        return f"t={self.t},s={self.s},m={self.m}"


@dataclass(frozen=True)
class Classification:
    tag: ClassTag
    params: Optional[ConfluentParams] = None

    def to_dict(self) -> dict:
        out = {"tag": self.tag.value}
        if self.params is not None:
            out.update({"t": self.params.t, "s": self.params.s, "m": self.params.m})
        return out


def classify(d: RenyiDigits) -> Classification:
    if d.m == 1:
        raise OutOfScopeError(
            f"Digits {d} give an integer base; the fixed point 0^omega is periodic"
        )
    head = d.digits[:-1]
    if any(t != head[0] for t in head):
        return Classification(ClassTag.NON_CONFLUENT)
    params = ConfluentParams(m=d.m, t=head[0], s=d.digits[-1])
    tag = ClassTag.ARNOUX_RAUZY if params.s == 1 else ClassTag.CONFLUENT_NON_UNIT
    return Classification(tag, params)


def canonical_substitution(d: RenyiDigits) -> Morphism:
    """phi(i) = 0^(t_(i+1)) (i+1) for i < m-1 and phi(m-1) = 0^(t_m)."""
    m = d.m
    images = [bytes(d.digits[i]) + bytes([i + 1]) for i in range(m - 1)]
    images.append(bytes(d.digits[-1]))
    return Morphism(tuple(images))


def confluent_sweep(m_max: int = SWEEP_M_MAX, t_max: int = SWEEP_T_MAX) -> List[ConfluentParams]:
    """Every (t, s, m) with 2 <= m <= m_max and 1 <= s <= t <= t_max, ordered by (m, t, s)."""
    return [
        ConfluentParams(m=m, t=t, s=s)
        for m in range(2, m_max + 1)
        for t in range(1, t_max + 1)
        for s in range(1, t + 1)
    ]


# ----------------------
# DOMINANT ROOT
# ----------------------

def _characteristic(d: RenyiDigits) -> np.ndarray:
    return np.array([1] + [-t for t in d.digits], dtype=np.float64)


def dominant_root(d: RenyiDigits, tol: float = ROOT_TOLERANCE) -> float:
    """Root beta > 1 of x^m = t_1 x^(m-1) + ... + t_m by bisection, then Newton.

    f(1) = 1 - sum(t_i) <= 0 and f(1 + t_1) >= 1, so the bracket always holds.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    coeffs = _characteristic(d)
    deriv = np.polyder(coeffs)
    lo, hi = 1.0, 1.0 + d.digits[0]
    for _ in range(ROOT_BISECTION_STEPS):
        if hi - lo <= max(tol, 1e-6):
            break
        mid = 0.5 * (lo + hi)
        if np.polyval(coeffs, mid) > 0:
            hi = mid
        else:
            lo = mid
    x = 0.5 * (lo + hi)
    for _ in range(ROOT_NEWTON_STEPS):
        step = np.polyval(coeffs, x) / np.polyval(deriv, x)
        x -= step
        if abs(step) < tol * 1e-3:
            break
    return float(x)


def precision_context(bits: int) -> MPContext:
    """A private mpmath context at the given binary precision.

    The global mpmath.mp context is shared by every thread; sweep workers
    each take their own.
    """
    ctx = MPContext()
    ctx.prec = bits
    return ctx


def dominant_root_mp(d: RenyiDigits, dps: int = 50) -> mpf:
    """High-precision dominant root, Newton-polished from the float root."""
    ctx = MPContext()
    ctx.dps = dps + 10
    coeffs = [1] + [-t for t in d.digits]
    root = ctx.findroot(lambda x: ctx.polyval(coeffs, x), ctx.mpf(dominant_root(d)))
    ctx.dps = dps
    return +root


# ----------------------
# RENYI EXPANSION
# ----------------------

@dataclass(frozen=True)
class RenyiExpansion:
    digits: Tuple[int, ...]
    status: str  # "finite" or "undecided"


def renyi_digits(
    beta: Union[float, str, mpf],
    max_len: int = RENYI_DEFAULT_MAX_DIGITS,
    guard: float = RENYI_GUARD,
    prec: int = 256,
) -> RenyiExpansion:
    """Greedy digits t_i = floor(beta * T^(i-1)(1)) of the beta-transformation orbit of 1.

    The orbit error is propagated as err <- beta * err + eps, with eps the
    representation error of beta (16 ulps for a float, 2^(8-prec) for a
    decimal string or mpf). A value within err of an integer k cannot be
    told apart from k: the orbit ends there (T = 0) and k is the last digit.
    Any other value takes its exact floor. An error bound that grows past
    the guard makes the floor undecidable and raises PrecisionError.
    """
    ctx = precision_context(prec)
    b = ctx.mpf(beta)
    if isinstance(beta, float):
        eps = abs(b) * ctx.mpf(2) ** -48
    else:
        eps = abs(b) * ctx.mpf(2) ** (-prec + 8)
    if b <= 1:
        raise ValueError(f"beta must be > 1, got {beta}")
    x, err = ctx.mpf(1), ctx.mpf(0)
    digits: List[int] = []
    for _ in range(max_len):
        y = b * x
        err = b * err + eps
        if err > guard:
            raise PrecisionError(
                f"Orbit error {float(err):.3g} exceeds the guard {guard:g} after "
                f"{len(digits)} digits; supply beta with more precision"
            )
        k = int(ctx.nint(y))
        if abs(y - k) <= err:
            digits.append(k)
            return RenyiExpansion(tuple(digits), "finite")
        floor = int(ctx.floor(y))
        digits.append(floor)
        x = y - floor
    logger.info(f"Rényi expansion undecided after {max_len} digits")
    return RenyiExpansion(tuple(digits), "undecided")


# ----------------------
# NUMERATION SYSTEM
# ----------------------

@dataclass(frozen=True)
class NumerationBasis:
    values: Tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


def numeration_basis(p: ConfluentParams, k: int) -> NumerationBasis:
    """G_0 .. G_k of the confluent numeration system (Python ints, unbounded)."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    t, s, m = p.t, p.s, p.m
    g = [1]
    running = 1  # G_0 + ... + G_(n-1)
    for n in range(1, k + 1):
        if n <= m - 1:
            value = t * running + 1
        else:
            value = t * sum(g[n - m + 1:n]) + s * g[n - m]
        g.append(value)
        running += value
    return NumerationBasis(tuple(g))


def uv_lengths(p: ConfluentParams, k: int) -> Tuple[int, int]:
    """(|V^(k)|, |U^(k)|) = (t * sum_(i<k) G_i, |V^(k)| + (s-1) G_(k-1))."""
    if k < 1:
        raise ValueError(f"Ladder index must be >= 1, got {k}")
    g = numeration_basis(p, k - 1).values
    v = p.t * sum(g)
    return v, v + (p.s - 1) * g[-1]


def uv_length_table(p: ConfluentParams, limit: int) -> List[Tuple[int, int, int]]:
    """(k, |V^(k)|, |U^(k)|) for every k >= 1 with |V^(k)| <= limit."""
    table = []
    t, s, m = p.t, p.s, p.m
    g = [1]
    total = 1
    k = 1
    while True:
        v = t * total
        if v > limit:
            return table
        table.append((k, v, v + (s - 1) * g[-1]))
        n = len(g)
        if n <= m - 1:
            nxt = t * total + 1
        else:
            nxt = t * sum(g[n - m + 1:n]) + s * g[n - m]
        g.append(nxt)
        total += nxt
        k += 1


def uv_window(p: ConfluentParams, n: int) -> Optional[int]:
    """k with |V^(k)| < n <= |U^(k)|, if any."""
    for k, v, u in uv_length_table(p, n):
        if v < n <= u:
            return k
    return None
