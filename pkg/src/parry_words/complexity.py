"""
Factor complexity of a prefix and the closed forms for confluent parameters.

Counts come from one suffix automaton over the whole prefix. Every state
covers the factor lengths (len(link), len] and all its factors share the
same first end position, so one difference array gives C(n) for the full
prefix and another, restricted to states first seen in the first half,
gives C(n) for the half prefix. Where both agree is the trusted horizon.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np
from numba import njit

from parry_words.parry import ConfluentParams, uv_length_table, uv_window
from parry_words.words import Word, as_array, format_word

logger = logging.getLogger("parry-words")


@njit(cache=True, nogil=True)
def _suffix_automaton_counts(word, alphabet_size, n_max, half):
    n = word.shape[0]
    cap = 2 * n + 2
    length = np.zeros(cap, dtype=np.int64)
    link = np.full(cap, -1, dtype=np.int64)
    firstpos = np.zeros(cap, dtype=np.int64)
    trans = np.full((cap, alphabet_size), -1, dtype=np.int32)
    size = 1
    last = 0

    for i in range(n):
        c = word[i]
        cur = size
        size += 1
        length[cur] = length[last] + 1
        firstpos[cur] = i
        p = last
        while p != -1 and trans[p, c] == -1:
            trans[p, c] = cur
            p = link[p]
        if p == -1:
            link[cur] = 0
        else:
            q = trans[p, c]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = size
                size += 1
                length[clone] = length[p] + 1
                trans[clone, :] = trans[q, :]
                link[clone] = link[q]
                firstpos[clone] = firstpos[q]
                while p != -1 and trans[p, c] == q:
                    trans[p, c] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        last = cur

    full = np.zeros(n_max + 2, dtype=np.int64)
    part = np.zeros(n_max + 2, dtype=np.int64)
    for v in range(1, size):
        lo = length[link[v]] + 1
        if lo > n_max:
            continue
        hi = min(length[v], n_max)
        full[lo] += 1
        full[hi + 1] -= 1
        if firstpos[v] < half:
            part[lo] += 1
            part[hi + 1] -= 1
    full_counts = np.cumsum(full)[: n_max + 1]
    half_counts = np.cumsum(part)[: n_max + 1]
    full_counts[0] = 1
    half_counts[0] = 1
    return full_counts, half_counts


def factor_counts(prefix: Word, n_max: int, alphabet_size: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """C(0..n_max) over the prefix and over its first half."""
    if alphabet_size is None:
        alphabet_size = (max(prefix) + 1) if prefix else 1
    return _suffix_automaton_counts(as_array(prefix), alphabet_size, n_max, len(prefix) // 2)


def agreement_horizon(full: Sequence[int], half: Sequence[int]) -> int:
    """Largest n with full[0..n] == half[0..n]."""
    full = np.asarray(full)
    half = np.asarray(half)
    size = min(len(full), len(half))
    mismatch = np.flatnonzero(full[:size] != half[:size])
    return int(mismatch[0]) - 1 if mismatch.size else size - 1


@dataclass
class ComplexityProfile:
    c: np.ndarray
    horizon: int
    truncated: bool = False

    @property
    def delta(self) -> np.ndarray:
        return np.diff(self.c)

    @property
    def delta2(self) -> np.ndarray:
        return np.diff(self.c, n=2)


def factor_profile(prefix: Word, n_max: int, alphabet_size: Optional[int] = None) -> ComplexityProfile:
    """C(0..n_max) with the horizon where C alone agrees on the prefix and its half.

    This horizon ignores P; reports and PrefixLanguage.horizon take the
    minimum of both.
    """
    if n_max >= len(prefix):
        raise ValueError(f"n_max={n_max} must be smaller than the prefix length {len(prefix)}")
    full, half = factor_counts(prefix, n_max, alphabet_size)
    horizon = agreement_horizon(full, half)
    truncated = horizon < n_max
    if truncated:
        logger.warning(f"Factor counts of the half prefix diverge at n={horizon + 1}; horizon truncated below n_max={n_max}")
    return ComplexityProfile(c=full, horizon=horizon, truncated=truncated)


# ----------------------
# SPECIAL FACTORS
# ----------------------

def factor_set(prefix: Word, n: int) -> Set[Word]:
    return {prefix[i:i + n] for i in range(len(prefix) - n + 1)}


@dataclass
class SpecialFactorReport:
    n: int
    left_specials: List[Tuple[Word, FrozenSet[int]]] = field(default_factory=list)
    right_specials: List[Tuple[Word, FrozenSet[int]]] = field(default_factory=list)

    def left_excess(self) -> int:
        """Sum of (#Lext - 1) over left special factors."""
        return sum(len(ext) - 1 for _, ext in self.left_specials)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "left_specials": [[format_word(w), sorted(ext)] for w, ext in self.left_specials],
            "right_specials": [[format_word(w), sorted(ext)] for w, ext in self.right_specials],
        }


def special_factors(prefix: Word, n: int) -> SpecialFactorReport:
    """Length-n factors with at least two left (resp. right) extensions among the length n+1 factors."""
    left: Dict[Word, Set[int]] = {}
    right: Dict[Word, Set[int]] = {}
    for f in factor_set(prefix, n + 1):
        left.setdefault(f[1:], set()).add(f[0])
        right.setdefault(f[:-1], set()).add(f[-1])
    report = SpecialFactorReport(n)
    report.left_specials = [(w, frozenset(ext)) for w, ext in sorted(left.items()) if len(ext) >= 2]
    report.right_specials = [(w, frozenset(ext)) for w, ext in sorted(right.items()) if len(ext) >= 2]
    return report


def reversal_closure(prefix: Word, n_max: int) -> Optional[Word]:
    """First factor (by length, then lexicographically) whose reversal is not a factor."""
    for n in range(2, n_max + 1):
        factors = factor_set(prefix, n)
        for w in sorted(factors):
            if w[::-1] not in factors:
                return w
    return None


# ----------------------
# CLOSED FORMS
# ----------------------

def closed_form_delta_c(p: ConfluentParams, n: int) -> int:
    if p.s == 1:
        return p.m - 1
    return p.m if uv_window(p, n) is not None else p.m - 1


def closed_form_delta2_c(p: ConfluentParams, n: int) -> int:
    """+1 at n = |V^(k)|, -1 at n = |U^(k)|, 0 otherwise."""
    return closed_form_delta_c(p, n + 1) - closed_form_delta_c(p, n)


def closed_form_c(p: ConfluentParams, n: int) -> int:
    """C(n) = 1 + sum_(i<n) dC(i)."""
    value = (p.m - 1) * n + 1
    if p.s == 1:
        return value
    for _, v, u in uv_length_table(p, n):
        value += max(0, min(u, n - 1) - v)
    return value
