"""
Finite words and morphisms over the alphabet {0, ..., m-1}.

A finite word is a ``bytes`` object whose byte values are the letters, so
words are contiguous, immutable, hashable and cheap to slice. Morphisms hold
one image per letter and expose application, powers, the incidence matrix
and fixed-point generation.
"""
import logging
import string
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import numpy as np

from parry_words.config_loader import PRIMITIVITY_POWER_FACTOR

logger = logging.getLogger("parry-words")

Letter = int
Word = bytes

EMPTY: Word = b""

_LETTER_CHARS = string.digits + string.ascii_lowercase


class AlphabetError(ValueError):
    """Raised when a letter falls outside the alphabet of a morphism."""
    pass


class NotASubstitutionError(ValueError):
    """Raised when a fixed point is requested from a letter whose image does not start with it."""
    pass


# ----------------------
# WORD HELPERS
# ----------------------

def parse_word(text: str) -> Word:
    """Parse '0102' (letters 0-9, then a-z) into a word."""
    try:
        return bytes(_LETTER_CHARS.index(ch) for ch in text.strip().lower())
    except ValueError:
        raise AlphabetError(f"Cannot parse word {text!r}: letters must be in 0-9a-z")


def format_word(w: Word) -> str:
    """Render a word as its letter string; inverse of parse_word."""
    if w and max(w) >= len(_LETTER_CHARS):
        return ",".join(str(a) for a in w)
    return "".join(_LETTER_CHARS[a] for a in w)


def zeros(k: int) -> Word:
    return bytes(k)


def reverse(w: Word) -> Word:
    return w[::-1]


def palindrome_test(w: Word) -> bool:
    return w == w[::-1]


def as_array(w: Word) -> np.ndarray:
    """Writable uint8 copy of a word, the buffer type the numba kernels take."""
    return np.frombuffer(w, dtype=np.uint8).copy()


# ----------------------
# MORPHISMS
# ----------------------

@dataclass(frozen=True)
class Morphism:
    """A non-erasing morphism on {0, ..., m-1}, given by the image of each letter."""
    images: Tuple[Word, ...]

    def __post_init__(self):
        if not self.images:
            raise AlphabetError("A morphism needs at least one letter")
        m = len(self.images)
        for letter, image in enumerate(self.images):
            if not image:
                raise AlphabetError(f"Image of letter {letter} is empty (morphism must be non-erasing)")
            if max(image) >= m:
                raise AlphabetError(f"Image of letter {letter} uses a letter outside the alphabet of size {m}")

    @classmethod
    def from_strings(cls, images: Sequence[str]) -> "Morphism":
        return cls(tuple(parse_word(image) for image in images))

    @property
    def alphabet_size(self) -> int:
        return len(self.images)

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def power(self, k: int) -> "Morphism":
        """The morphism composed with itself k times (k >= 1)."""
        if k < 1:
            raise ValueError(f"Morphism power must be >= 1, got {k}")
        images = self.images
        for _ in range(k - 1):
            images = tuple(apply(self, image) for image in images)
        return Morphism(images)

    def incidence_matrix(self) -> np.ndarray:
        """M[i, j] = number of occurrences of letter j in the image of i."""
        m = self.alphabet_size
        matrix = np.zeros((m, m), dtype=np.int64)
        for i, image in enumerate(self.images):
            matrix[i] = np.bincount(np.frombuffer(image, dtype=np.uint8), minlength=m)
        return matrix

    def describe(self) -> dict:
        return {str(a): format_word(image) for a, image in enumerate(self.images)}


def apply(mor: Morphism, w: Word) -> Word:
    """Concatenate the images of the letters of w."""
    if w and max(w) >= mor.alphabet_size:
        raise AlphabetError(f"Word contains letter {max(w)} outside alphabet of size {mor.alphabet_size}")
    return b"".join(map(mor.images.__getitem__, w))


def conjugate(mor: Morphism, w: Word) -> Morphism:
    """The morphism a -> w^{-1} mor(a) w; w must be a prefix of mor(a) w for every a."""
    images = []
    for letter, image in enumerate(mor.images):
        extended = image + w
        if not extended.startswith(w):
            raise AlphabetError(
                f"Conjugator {format_word(w)} is not a prefix of image({letter})·w = {format_word(extended)}"
            )
        images.append(extended[len(w):])
    return Morphism(tuple(images))


def _check_substitution(mor: Morphism, seed: Letter) -> Word:
    if not 0 <= seed < mor.alphabet_size:
        raise AlphabetError(f"Seed {seed} outside alphabet of size {mor.alphabet_size}")
    head = mor.images[seed]
    if head[0] != seed or len(head) < 2:
        raise NotASubstitutionError(
            f"Image of {seed} is {format_word(head)}: it must start with {seed} and have length >= 2"
        )
    return head


def iter_fixed_point(mor: Morphism, seed: Letter) -> Iterator[Letter]:
    """Stream the fixed point starting with seed, letter by letter.

    The fixed point u satisfies u = mor(u): the first image is emitted as is,
    then a nested copy of this generator supplies the letters u[1], u[2], ...
    whose images follow. The chain of live generators is logarithmic in the
    number of emitted letters and each level is consumed geometrically slower,
    so the cost per letter is amortized constant.
    """
    head = _check_substitution(mor, seed)
    yield from head
    inner = iter_fixed_point(mor, seed)
    next(inner)
    images = mor.images
    for letter in inner:
        yield from images[letter]


def fixed_point_prefix(mor: Morphism, seed: Letter, n: int) -> Word:
    """The first n letters of the fixed point starting with seed."""
    head = _check_substitution(mor, seed)
    if n <= 0:
        return EMPTY
    image_lengths = np.array([len(image) for image in mor.images], dtype=np.int64)
    word = head[:n]
    while len(word) < n:
        # only the letters whose images are needed to reach n are expanded
        ends = np.cumsum(image_lengths[np.frombuffer(word, dtype=np.uint8)])
        needed = int(np.searchsorted(ends, n)) + 1
        word = apply(mor, word[:needed])[:n]
    return word


def is_primitive(mor: Morphism) -> bool:
    """True iff some power k <= PRIMITIVITY_POWER_FACTOR * m^2 of the incidence matrix is positive."""
    base = (mor.incidence_matrix() > 0).astype(np.int64)
    current = base.copy()
    bound = PRIMITIVITY_POWER_FACTOR * mor.alphabet_size ** 2
    for _ in range(bound):
        if current.all():
            return True
        # saturating boolean product
        current = np.minimum(current @ base, 1)
    return bool(current.all())

