"""
Infinite palindromic branches of u_beta.

A branch with a given center exists or not depending only on the parities
of s and t. Existing branches are generated as two-sided limits of a ladder
(V^(k) or W^(k)) taken along one residue class of k. The empty-centered
branch is fixed by a conjugate of a power of phi, the psi substitution.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np

from parry_words.config_loader import (
    MECHANICAL_EXTRA_BITS,
    MECHANICAL_GUARD_BITS,
    MECHANICAL_MAX_REFINEMENTS,
    WORD_LENGTH_CAP,
)
from parry_words.palindromes import (
    Center,
    LengthCapError,
    PrefixLanguage,
    format_center,
)
from parry_words.parry import (
    ConfluentParams,
    OutOfScopeError,
    PrecisionError,
    canonical_substitution,
    precision_context,
    uv_lengths,
)
from parry_words.report import Verdict
from parry_words.words import AlphabetError, Morphism, Word, apply, conjugate, format_word, zeros

logger = logging.getLogger("parry-words")


class BranchAbsentError(ValueError):
    """Raised when no infinite palindromic branch has the requested center."""
    pass


class NoEpsilonBranchError(ValueError):
    """Raised when psi is requested for parameters without an empty-centered branch."""
    pass


class PsiDefinitionError(ValueError):
    """Raised when the conjugator is not a prefix of phi^j(a) w for some letter a."""
    pass


def _parity_case(p: ConfluentParams) -> str:
    if p.s % 2 == 1:
        return "s odd: every center has a branch"
    if p.t % 2 == 1:
        return "s even, t odd: only letter centers have a branch"
    return "s, t even: only the empty center has a branch"


@dataclass(frozen=True)
class BranchSpec:
    """Which ladder generates the branch: X^(start + stride * n) for n >= 0."""
    center: Center
    exists: bool
    ladder: Optional[str] = None  # "V" or "W"
    start: int = 0
    stride: int = 0

    def to_dict(self) -> dict:
        return {
            "center": format_center(self.center),
            "exists": self.exists,
            "ladder": self.ladder,
            "start": self.start,
            "stride": self.stride,
        }


def branch_spec(p: ConfluentParams, center: Center) -> BranchSpec:
    if center is not None and not 0 <= center < p.m:
        raise AlphabetError(f"Center {center} outside alphabet of size {p.m}")
    t_even, s_even = p.t % 2 == 0, p.s % 2 == 0
    if center is None:
        if t_even:
            return BranchSpec(center, True, "V", 1, 1)
        if not s_even:
            return BranchSpec(center, True, "V", p.m + 1, p.m + 1)
        return BranchSpec(center, False)
    if t_even:
        if s_even:
            return BranchSpec(center, False)
        return BranchSpec(center, True, "W", center + 1, p.m)
    if s_even:
        return BranchSpec(center, True, "V", center + 1, p.m)
    return BranchSpec(center, True, "V", center + 1, p.m + 1)


def parity_table(p: ConfluentParams) -> List[BranchSpec]:
    """Branch specs for the empty center and every letter."""
    return [branch_spec(p, None)] + [branch_spec(p, a) for a in range(p.m)]


# ----------------------
# LADDERS
# ----------------------

def _step(phi: Morphism, word: Word, t: int) -> Word:
    return apply(phi, word) + zeros(t)


def _climb(phi: Morphism, word: Word, steps: int, t: int, cap: int, what: str) -> Word:
    """Apply the ladder step `steps` times, enforcing the length cap after each."""
    for _ in range(steps):
        word = _step(phi, word, t)
        if len(word) > cap:
            raise LengthCapError(f"{what} reached {len(word)} letters; cap is {cap}", length=len(word))
    return word


def w_ladder(p: ConfluentParams, k: int, cap: int = WORD_LENGTH_CAP) -> Word:
    """W^(k) with W^(1) = 0 and W^(n+1) = phi(W^(n)) 0^t."""
    if k < 1:
        raise ValueError(f"Ladder index must be >= 1, got {k}")
    phi = canonical_substitution(p.digits())
    return _climb(phi, b"\x00", k - 1, p.t, cap, f"W^({k})")


def branch_central_factor(p: ConfluentParams, center: Center, min_len: int, cap: int = WORD_LENGTH_CAP) -> Word:
    """A palindromic central factor of the branch with this center, of length >= min_len.

    The length is min_len or min_len + 1, whichever has the parity of the
    center (odd for a letter, even for the empty center).
    """
    spec = branch_spec(p, center)
    if not spec.exists:
        raise BranchAbsentError(f"No infinite palindromic branch with center {format_center(center)} ({_parity_case(p)})")
    target = max(min_len, 0)
    if (target % 2 == 1) != (center is not None):
        target += 1
    if target > cap:
        raise LengthCapError(f"Requested branch factor length {target} exceeds the word length cap {cap}", length=target)

    phi = canonical_substitution(p.digits())
    if spec.ladder == "W":
        word = w_ladder(p, spec.start, cap)
    else:
        word = _climb(phi, zeros(p.t), spec.start - 1, p.t, cap, f"V^({spec.start})")
    while len(word) < target:
        word = _climb(phi, word, spec.stride, p.t, cap, f"Ladder word before a length-{target} factor")
    cut = (len(word) - target) // 2
    return word[cut:cut + target]


def check_absent_branches(p: ConfluentParams, language: Union[Word, PrefixLanguage]) -> Verdict:
    """Missing branches leave a bound on palindrome lengths of the missing parity.

    With s, t even no odd palindrome is longer than |U^(m)|; with s even and
    t odd no even palindrome is longer than |U^(1)|.
    """
    if not isinstance(language, PrefixLanguage):
        language = PrefixLanguage(language, p.m)
    if p.s % 2 == 1:
        return Verdict("branch_absence_bounds", True, 0)
    if p.t % 2 == 0:
        parity, bound = 1, uv_lengths(p, p.m)[1]
    else:
        parity, bound = 0, uv_lengths(p, 1)[1]
    tree = language.tree
    lengths = tree.length[2:]
    same_parity = lengths[lengths % 2 == parity]
    longest = int(same_parity.max()) if same_parity.size else 0
    if longest > bound:
        node = 2 + int(np.flatnonzero(lengths == longest)[0])
        return Verdict(
            "branch_absence_bounds",
            False,
            int(same_parity.size),
            {"parity": "odd" if parity else "even", "bound": bound, "palindrome": format_word(tree.palindrome(node))},
        )
    return Verdict("branch_absence_bounds", True, int(same_parity.size))


# ----------------------
# PSI SUBSTITUTION
# ----------------------

@dataclass(frozen=True)
class PsiResult:
    psi: Morphism
    conjugator: Word
    power: int
    images_palindromic: bool

    def to_dict(self) -> dict:
        return {
            "conjugator": format_word(self.conjugator),
            "power": self.power,
            "images": self.psi.describe(),
            "images_palindromic": self.images_palindromic,
        }


def psi_substitution(p: ConfluentParams) -> PsiResult:
    """psi(a) = w^-1 phi(a) w with w = 0^(t/2) for t even,
    psi(a) = w^-1 phi^(m+1)(a) w with w = phi^m(0^((t+1)/2)) 0^((t-s)/2) for t, s odd."""
    phi = canonical_substitution(p.digits())
    if p.t % 2 == 0:
        power, w = 1, zeros(p.t // 2)
    elif p.s % 2 == 1:
        power = p.m + 1
        w = apply(phi.power(p.m), zeros((p.t + 1) // 2)) + zeros((p.t - p.s) // 2)
    else:
        raise NoEpsilonBranchError(f"t={p.t} odd and s={p.s} even: no branch with the empty center")
    try:
        psi = conjugate(phi.power(power), w)
    except AlphabetError as e:
        raise PsiDefinitionError(str(e)) from e
    palindromic = all(image == image[::-1] for image in psi.images)
    return PsiResult(psi, w, power, palindromic)


def verify_psi(p: ConfluentParams, depth: int) -> Verdict:
    """Check that a -> reverse(psi(a)) maps the right half of the empty-centered branch onto itself."""
    result = psi_substitution(p)
    factor = branch_central_factor(p, None, 2 * depth)
    right = factor[len(factor) // 2:]
    reversed_images = tuple(image[::-1] for image in result.psi.images)
    image = bytearray()
    for letter in right:
        image += reversed_images[letter]
        if len(image) >= len(right):
            break
    image = bytes(image[:len(right)])
    if image == right:
        return Verdict("psi_invariance", True, len(right))
    position = next(i for i, (a, b) in enumerate(zip(image, right)) if a != b)
    return Verdict(
        "psi_invariance",
        False,
        len(right),
        {"position": position, "expected": right[position], "got": image[position]},
    )


# ----------------------
# MECHANICAL WORD
# ----------------------

def _mechanical_floors(t: int, n_len: int, bits: int, guard_bits: int) -> Optional[List[int]]:
    """floor(n alpha + rho) for n = 0..n_len, or None when a value is too close to an integer."""
    ctx = precision_context(bits)
    beta = (t + ctx.sqrt(t * t + 4)) / 2
    alpha = beta / (beta + 1)
    guard = ctx.mpf(2) ** -guard_bits
    floors = []
    x = alpha  # rho = alpha
    for _ in range(n_len + 1):
        f = int(ctx.floor(x))
        frac = x - f
        if frac < guard or 1 - frac < guard:
            return None
        floors.append(f)
        x += alpha
    return floors


def mechanical_word(p: ConfluentParams, n_len: int) -> Word:
    """First n_len letters of the mechanical word with alpha = rho = beta / (beta + 1).

    Letter n is 1 - (floor((n+1) alpha + rho) - floor(n alpha + rho)), which
    puts 0 on the letter of density alpha as u_beta does.
    """
    if p.m != 2 or p.s != 1:
        raise OutOfScopeError(f"Mechanical form needs m=2 and s=1, got {p.label()}")
    if n_len <= 0:
        return b""
    bits = 2 * max(1, n_len).bit_length() + MECHANICAL_EXTRA_BITS
    for _ in range(MECHANICAL_MAX_REFINEMENTS + 1):
        floors = _mechanical_floors(p.t, n_len, bits, MECHANICAL_GUARD_BITS)
        if floors is not None:
            return bytes(1 - (floors[i + 1] - floors[i]) for i in range(n_len))
        logger.info(f"Mechanical word guard tripped at {bits} bits; doubling precision")
        bits *= 2
    raise PrecisionError(f"Mechanical word for {p.label()} undecided after {MECHANICAL_MAX_REFINEMENTS} refinements")
