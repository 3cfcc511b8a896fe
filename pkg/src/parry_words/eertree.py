"""
Eertree (palindromic tree) over a finite word.

Node 0 is the imaginary root of length -1, node 1 the empty palindrome.
Every other node is a distinct non-empty palindromic factor; appending a
letter creates at most one node, so the per-letter new-node flags give the
palindrome count of every prefix.
"""
import logging
from typing import Iterator, Optional

import numpy as np
from numba import njit

from parry_words.words import Word, as_array

logger = logging.getLogger("parry-words")

IMAGINARY_ROOT = 0
EMPTY_ROOT = 1


@njit(cache=True, nogil=True)
def _build_eertree(word, alphabet_size):
    n = word.shape[0]
    cap = n + 2
    length = np.empty(cap, dtype=np.int64)
    link = np.empty(cap, dtype=np.int64)
    first_end = np.empty(cap, dtype=np.int64)
    trans = np.full((cap, alphabet_size), -1, dtype=np.int32)
    new_flag = np.zeros(n, dtype=np.uint8)
    suffix_node = np.empty(n, dtype=np.int64)

    length[0] = -1
    link[0] = 0
    first_end[0] = -1
    length[1] = 0
    link[1] = 0
    first_end[1] = -1
    size = 2
    last = 1

    for i in range(n):
        c = word[i]
        cur = last
        while True:
            j = i - 1 - length[cur]
            if j >= 0 and word[j] == c:
                break
            if length[cur] == -1:
                break
            cur = link[cur]
        node = trans[cur, c]
        if node != -1:
            last = node
        else:
            q = size
            size += 1
            length[q] = length[cur] + 2
            first_end[q] = i
            if length[q] == 1:
                link[q] = EMPTY_ROOT
            else:
                v = link[cur]
                while True:
                    j = i - 1 - length[v]
                    if j >= 0 and word[j] == c:
                        break
                    if length[v] == -1:
                        break
                    v = link[v]
                link[q] = trans[v, c]
            trans[cur, c] = q
            new_flag[i] = 1
            last = q
        suffix_node[i] = last

    return length[:size], link[:size], first_end[:size], trans[:size], new_flag, suffix_node


class Eertree:
    """Index of all distinct palindromic factors of ``word``."""

    def __init__(self, word: Word, alphabet_size: Optional[int] = None):
        self.word = bytes(word)
        if alphabet_size is None:
            alphabet_size = (max(self.word) + 1) if self.word else 1
        self.alphabet_size = alphabet_size
        (
            self.length,
            self.link,
            self.first_end,
            self.trans,
            self.new_flag,
            self.suffix_node,
        ) = _build_eertree(as_array(self.word), alphabet_size)

    def __len__(self) -> int:
        return int(self.length.shape[0])

    @property
    def distinct_count(self) -> int:
        """Distinct palindromic factors, the empty word included."""
        return len(self) - 1

    def prefix_counts(self) -> np.ndarray:
        """counts[k-1] = number of distinct palindromes (with the empty word) in word[:k]."""
        return np.cumsum(self.new_flag, dtype=np.int64) + 1

    def length_histogram(self, n_max: int, end_limit: Optional[int] = None) -> np.ndarray:
        """P(0..n_max) over the whole word, or over word[:end_limit] when given."""
        lengths = self.length[EMPTY_ROOT:]
        if end_limit is not None:
            ends = self.first_end[EMPTY_ROOT:]
            lengths = lengths[(ends < end_limit)]
        lengths = lengths[lengths <= n_max]
        return np.bincount(lengths, minlength=n_max + 1).astype(np.int64)

    def palindrome(self, node: int) -> Word:
        size = int(self.length[node])
        if size <= 0:
            return b""
        end = int(self.first_end[node])
        return self.word[end - size + 1:end + 1]

    def nodes(self, max_len: Optional[int] = None) -> Iterator[int]:
        """Every real node, the empty palindrome first."""
        for node in range(EMPTY_ROOT, len(self)):
            if max_len is None or self.length[node] <= max_len:
                yield node

    def find(self, p: Word) -> int:
        """Node of palindrome p, or -1 when p is not a factor (or not a palindrome)."""
        size = len(p)
        if size > len(self.word):
            return -1
        if size % 2 == 0:
            node, start = EMPTY_ROOT, size // 2 - 1
        else:
            node, start = IMAGINARY_ROOT, size // 2
        for i in range(start, -1, -1):
            a = p[i]
            if a >= self.alphabet_size or p[size - 1 - i] != a:
                return -1
            node = int(self.trans[node, a])
            if node == -1:
                return -1
        return node

    def extensions(self, node: int) -> frozenset:
        """Letters a such that a.p.a is a factor, read from the node's transitions."""
        return frozenset(int(a) for a in np.flatnonzero(self.trans[node] != -1))

    def longest_suffix_node(self) -> int:
        return int(self.suffix_node[-1]) if len(self.word) else EMPTY_ROOT


def build_eertree(w: Word, alphabet_size: Optional[int] = None) -> Eertree:
    tree = Eertree(w, alphabet_size)
    logger.debug(f"Eertree built over {len(w)} letters: {tree.distinct_count} palindromes")
    return tree
