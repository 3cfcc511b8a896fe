"""
Palindromic structure of u_beta prefixes.

Palindromic complexity with a trusted horizon, extension classification
against the U/V ladders, the closed-form P(n) for every parity case,
centers and their transport under phi, zero-block structure, defect and
the unioccurrent longest palindromic suffix.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Set, Tuple, Union

import numpy as np

from parry_words.complexity import agreement_horizon, factor_counts, factor_set
from parry_words.config_loader import DEFAULT_N_MAX, WORD_LENGTH_CAP
from parry_words.eertree import Eertree, build_eertree
from parry_words.parry import ConfluentParams, canonical_substitution, uv_lengths, uv_window
from parry_words.words import Morphism, Word, apply, format_word, palindrome_test, zeros

logger = logging.getLogger("parry-words")

# a palindrome's center: a letter, or None for the empty word between its halves
Center = Optional[int]

_SET_CACHE_MAX_LEN = 64


class NotAPalindromeError(ValueError):
    """Raised when an operation on palindromes receives a word that is not one."""
    pass


class AbsentFactorError(ValueError):
    """Raised when a palindrome expected in the language does not occur in the prefix."""
    pass


class InsufficientHorizonError(ValueError):
    """Raised when the prefix cannot certify a factor of the requested length."""
    pass


class LengthCapError(ValueError):
    """Raised when a requested word would exceed the configured length cap."""

    def __init__(self, message: str, length: int):
        super().__init__(message)
        self.length = length


def format_center(c: Center) -> str:
    return "eps" if c is None else str(c)


# ----------------------
# PROFILE AND LANGUAGE
# ----------------------

@dataclass
class PalindromeProfile:
    p: np.ndarray
    horizon: int
    truncated: bool = False


def palindrome_counts(tree: Eertree, n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """P(0..n_max) over the indexed word and over its first half."""
    return tree.length_histogram(n_max), tree.length_histogram(n_max, end_limit=len(tree.word) // 2)


def palindrome_profile(prefix: Word, n_max: int, tree: Optional[Eertree] = None) -> PalindromeProfile:
    """P(0..n_max) with the horizon where P alone agrees on the prefix and its half.

    This horizon ignores C; PrefixLanguage.horizon takes the minimum of both.
    """
    if n_max >= len(prefix):
        raise ValueError(f"n_max={n_max} must be smaller than the prefix length {len(prefix)}")
    tree = tree if tree is not None else build_eertree(prefix)
    full, half = palindrome_counts(tree, n_max)
    horizon = agreement_horizon(full, half)
    truncated = horizon < n_max
    if truncated:
        logger.warning(f"Palindrome counts of the half prefix diverge at n={horizon + 1}; horizon truncated below n_max={n_max}")
    return PalindromeProfile(p=full, horizon=horizon, truncated=truncated)


class PrefixLanguage:
    """Factors of a long prefix, standing in for the language of the infinite word.

    The eertree and the per-length factor sets are built on first use.
    """

    def __init__(
        self,
        prefix: Word,
        alphabet_size: Optional[int] = None,
        horizon: Optional[int] = None,
        tree: Optional[Eertree] = None,
    ):
        self.prefix = bytes(prefix)
        self.alphabet_size = alphabet_size if alphabet_size is not None else (max(self.prefix) + 1 if self.prefix else 1)
        self._tree = tree
        self._factor_sets: Dict[int, Set[Word]] = {}
        self._horizon = horizon

    @property
    def tree(self) -> Eertree:
        if self._tree is None:
            self._tree = build_eertree(self.prefix, self.alphabet_size)
        return self._tree

    @property
    def horizon(self) -> int:
        if self._horizon is None:
            n_max = min(DEFAULT_N_MAX, len(self.prefix) - 1)
            c_full, c_half = factor_counts(self.prefix, n_max, self.alphabet_size)
            p_full, p_half = palindrome_counts(self.tree, n_max)
            self._horizon = min(agreement_horizon(c_full, c_half), agreement_horizon(p_full, p_half))
        return self._horizon

    def factors(self, n: int) -> Set[Word]:
        if n not in self._factor_sets:
            self._factor_sets[n] = factor_set(self.prefix, n)
        return self._factor_sets[n]

    def __contains__(self, w: Word) -> bool:
        if len(w) <= _SET_CACHE_MAX_LEN:
            return w in self.factors(len(w))
        return w in self.prefix

    def palindromes(self, max_len: int) -> List[Word]:
        tree = self.tree
        return [tree.palindrome(node) for node in tree.nodes(max_len)]


# ----------------------
# EXTENSIONS
# ----------------------

class PalKind(str, Enum):
    MAXIMAL = "Maximal"
    TWO_EXTENSIONS = "TwoExtensions"
    UNIQUE_EXTENSION = "UniqueExtension"
    MANY_EXTENSIONS = "ManyExtensions"


def _kind(extensions: FrozenSet[int]) -> PalKind:
    count = len(extensions)
    if count == 0:
        return PalKind.MAXIMAL
    if count == 1:
        return PalKind.UNIQUE_EXTENSION
    if count == 2:
        return PalKind.TWO_EXTENSIONS
    return PalKind.MANY_EXTENSIONS


@dataclass(frozen=True)
class PalindromeClass:
    word: Word
    extensions: FrozenSet[int]
    kind: PalKind


def palindromic_extensions(p: Word, language: PrefixLanguage) -> PalindromeClass:
    """Letters a with a.p.a in the language; a.p.a is a palindrome, so it is an eertree edge."""
    if not palindrome_test(p):
        raise NotAPalindromeError(f"{format_word(p)} is not a palindrome")
    if language.horizon < len(p) + 2:
        raise InsufficientHorizonError(
            f"Extensions of a length-{len(p)} palindrome need horizon >= {len(p) + 2}, have {language.horizon}"
        )
    node = language.tree.find(p)
    if node < 0:
        raise AbsentFactorError(f"{format_word(p)} does not occur in the prefix")
    extensions = language.tree.extensions(node)
    return PalindromeClass(p, extensions, _kind(extensions))


# ----------------------
# U/V LADDERS
# ----------------------

def _ladder(p: ConfluentParams, phi: Morphism, base: Word, k: int) -> Word:
    word = base
    tail = zeros(p.t)
    for _ in range(k - 1):
        word = apply(phi, word) + tail
    return word


def uv_words(p: ConfluentParams, k: int, cap: int = WORD_LENGTH_CAP) -> Tuple[Word, Word]:
    """(V^(k), U^(k)) from V^(1) = 0^t, U^(1) = 0^(t+s-1) and X^(k) = phi(X^(k-1)) 0^t."""
    v_len, u_len = uv_lengths(p, k)
    if u_len > cap:
        raise LengthCapError(f"|U^({k})| = {u_len} exceeds the word length cap {cap}", length=u_len)
    phi = canonical_substitution(p.digits())
    return _ladder(p, phi, zeros(p.t), k), _ladder(p, phi, zeros(p.t + p.s - 1), k)


def uv_ladder(p: ConfluentParams, max_len: int) -> Dict[Word, Tuple[PalKind, int]]:
    """Every U^(k) and V^(k) of length <= max_len, keyed by word."""
    ladder: Dict[Word, Tuple[PalKind, int]] = {}
    phi = canonical_substitution(p.digits())
    tail = zeros(p.t)
    v, u = zeros(p.t), zeros(p.t + p.s - 1)
    k = 1
    while len(v) <= max_len:
        ladder[v] = (PalKind.TWO_EXTENSIONS, k)
        if len(u) <= max_len:
            ladder[u] = (PalKind.MAXIMAL, k)
        v, u = apply(phi, v) + tail, apply(phi, u) + tail
        k += 1
    return ladder


@dataclass(frozen=True)
class PalindromeVerdict:
    cls: PalindromeClass
    expected: PalKind

    @property
    def match(self) -> bool:
        return self.cls.kind == self.expected

    def to_dict(self) -> dict:
        return {
            "palindrome": format_word(self.cls.word),
            "extensions": sorted(self.cls.extensions),
            "kind": self.cls.kind.value,
            "expected": self.expected.value,
        }


def classify_all_palindromes(
    prefix: Union[Word, PrefixLanguage],
    p: ConfluentParams,
    max_len: Optional[int] = None,
) -> List[PalindromeVerdict]:
    """Classify every palindromic factor up to horizon - 2 and compare with the U/V ladders.

    U^(k) must be maximal, V^(k) must have two extensions and every other
    palindrome exactly one. With s = 1 the ladders coincide and every
    palindrome must have exactly one extension.
    """
    language = prefix if isinstance(prefix, PrefixLanguage) else PrefixLanguage(prefix, p.m)
    limit = language.horizon - 2
    if max_len is not None:
        limit = min(limit, max_len)
    if limit < 0:
        raise InsufficientHorizonError(f"Horizon {language.horizon} too small to classify palindromes")
    ladder = {} if p.is_arnoux_rauzy else uv_ladder(p, limit)
    tree = language.tree
    verdicts = []
    for node in tree.nodes(limit):
        word = tree.palindrome(node)
        extensions = tree.extensions(node)
        expected = ladder.get(word, (PalKind.UNIQUE_EXTENSION, 0))[0]
        verdicts.append(PalindromeVerdict(PalindromeClass(word, extensions, _kind(extensions)), expected))
    verdicts.sort(key=lambda v: (len(v.cls.word), v.cls.word))
    return verdicts


# ----------------------
# CLOSED FORM
# ----------------------

def closed_form_p(p: ConfluentParams, n: int) -> int:
    """Palindromic complexity P(n) for confluent parameters, by the parity of s and t."""
    t, s, m = p.t, p.s, p.m
    odd = n % 2 == 1
    if s == 1:
        return m if odd else 1

    window = uv_window(p, n)

    if s % 2 == 1 and t % 2 == 0:
        if odd:
            return m
        return 2 if window is not None else 1

    if s % 2 == 1 and t % 2 == 1:
        if odd:
            return m + 1 if window is not None and window % (m + 1) != 0 else m
        return 2 if window is not None and window % (m + 1) == 0 else 1

    if t % 2 == 1:  # s even
        if odd:
            if window is not None and window >= 2:
                return m + 2
            return m if n <= uv_lengths(p, 1)[0] else m + 1
        return 1 if n <= uv_lengths(p, 1)[1] else 0

    # s and t even
    lengths = [uv_lengths(p, k) for k in range(1, m + 2)]
    if odd:
        if n <= lengths[m - 1][1]:
            return sum(1 for v, u in lengths[:m] if n <= u)
        return 0
    if window is not None and window >= m + 1:
        return m + 2
    if n <= lengths[m][0]:
        return sum(1 for v, u in lengths[:m] if n > v) + 1
    return m + 1


# ----------------------
# CENTERS
# ----------------------

def center_of(p: Word) -> Center:
    if not palindrome_test(p):
        raise NotAPalindromeError(f"{format_word(p)} is not a palindrome")
    if len(p) % 2 == 0:
        return None
    return p[len(p) // 2]


def center_transport(p: ConfluentParams, center: Center) -> Center:
    """Center of phi(w) 0^t given the center of the palindrome w."""
    if center is None:
        return None if p.t % 2 == 0 else 0
    if center != p.m - 1:
        return center + 1
    return 0 if (p.s + p.t) % 2 == 1 else None


def v_centers(p: ConfluentParams, k: int) -> Center:
    """Center of V^(k)."""
    if p.t % 2 == 0:
        return None
    if p.s % 2 == 0:
        return (k - 1) % p.m
    if k % (p.m + 1) == 0:
        return None
    return (k - 1) % (p.m + 1)


def lift_palindrome(mor: Morphism, p: Word, t: int) -> Word:
    """phi(p) 0^t, a palindrome whenever p is one."""
    return apply(mor, p) + zeros(t)


# ----------------------
# ZERO BLOCKS
# ----------------------

def zero_block_factors(prefix: Word) -> Set[Tuple[int, int, int]]:
    """Every (X, n, Y) such that X 0^n Y occurs in the prefix with X, Y non-zero."""
    arr = np.frombuffer(prefix, dtype=np.uint8)
    nonzero = np.flatnonzero(arr)
    if nonzero.size < 2:
        return set()
    blocks = np.stack([arr[nonzero[:-1]], np.diff(nonzero) - 1, arr[nonzero[1:]]], axis=1)
    return {tuple(int(x) for x in row) for row in np.unique(blocks, axis=0)}


def expected_zero_blocks(p: ConfluentParams) -> Set[Tuple[int, int, int]]:
    """X 0^t 1 and 1 0^t X for every non-zero X, and 1 0^(t+s) 1."""
    blocks = {(x, p.t, 1) for x in range(1, p.m)} | {(1, p.t, x) for x in range(1, p.m)}
    blocks.add((1, p.t + p.s, 1))
    return blocks


# ----------------------
# DEFECT
# ----------------------

@dataclass
class DefectSeries:
    defects: np.ndarray
    ju: np.ndarray

    @property
    def full(self) -> bool:
        return not self.defects.any()

    def first_defect(self) -> Optional[int]:
        """Length of the shortest prefix with positive defect."""
        hits = np.flatnonzero(self.defects)
        return int(hits[0]) + 1 if hits.size else None

    def summary(self) -> dict:
        return {
            "length": int(self.defects.shape[0]),
            "full": self.full,
            "max_defect": int(self.defects.max()) if self.defects.size else 0,
            "first_defect": self.first_defect(),
            "ju_failures": int((self.ju == 0).sum()),
        }


def defect_series(prefix: Word, tree: Optional[Eertree] = None) -> DefectSeries:
    """defect(w_1..w_k) = k + 1 - P(w_1..w_k); property Ju holds where the letter adds a palindrome."""
    tree = tree if tree is not None else build_eertree(prefix)
    k = np.arange(1, len(prefix) + 1, dtype=np.int64)
    defects = k + 1 - tree.prefix_counts()
    return DefectSeries(defects=defects, ju=tree.new_flag.astype(bool))


def longest_palindromic_suffix(w: Word) -> Tuple[Word, bool]:
    if not w:
        raise ValueError("longest_palindromic_suffix needs a non-empty word")
    tree = build_eertree(w)
    size = int(tree.length[tree.longest_suffix_node()])
    return w[len(w) - size:], bool(tree.new_flag[-1])
