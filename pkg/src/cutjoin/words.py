"""
Trace-word surgery on generalized Miwa times

A variable u_(i_1,...,i_K) is the normalized trace of the cyclic word
P^{i_1} Q P^{i_2} Q ... P^{i_K} Q with P = Lambda_P and Q = Lambda_L^{-1}.
Contracting two P letters either cuts one trace into two, glues two traces
into one, or (non-oriented only) re-reads part of the word backwards.
"""

from functools import lru_cache
from typing import List, Tuple

from src.diagrams.core import Symmetry, canonical_entries

Entries = Tuple[int, ...]


def word_of(entries: Entries) -> str:
    return "".join("P" * i + "Q" for i in entries)


def entries_of(word: str, symmetry: Symmetry) -> Entries:
    """Canonical tuple of a cyclic word containing at least one Q"""
    last = word.rindex("Q")
    rotated = word[last + 1:] + word[: last + 1]
    return canonical_entries([len(run) for run in rotated[:-1].split("Q")], symmetry)


def _p_positions(word: str) -> List[int]:
    return [i for i, letter in enumerate(word) if letter == "P"]


def _opened_after(word: str, position: int) -> str:
    """The cyclic word read from just after `position` up to just before it"""
    return word[position + 1:] + word[:position]


@lru_cache(maxsize=None)
def split_pairs(entries: Entries, symmetry: Symmetry) -> Tuple[Tuple[Entries, Entries], ...]:
    """One trace cut into two, once per unordered pair of P letters"""
    word = word_of(entries)
    positions = _p_positions(word)
    images = []
    for a, p in enumerate(positions):
        for q in positions[a + 1:]:
            inner = word[p + 1:q]
            outer = word[q + 1:] + word[:p]
            images.append((entries_of(inner + "Q", symmetry), entries_of(outer + "Q", symmetry)))
    return tuple(images)


@lru_cache(maxsize=None)
def twisted_pairs(entries: Entries, symmetry: Symmetry) -> Tuple[Entries, ...]:
    """One trace re-read with its outer arc reversed between the two Q letters, once per unordered pair of P letters"""
    word = word_of(entries)
    positions = _p_positions(word)
    images = []
    for a, p in enumerate(positions):
        for q in positions[a + 1:]:
            inner = word[p + 1:q]
            outer = word[q + 1:] + word[:p]
            images.append(entries_of(inner + "Q" + outer[::-1] + "Q", symmetry))
    return tuple(images)


@lru_cache(maxsize=None)
def joins(first: Entries, second: Entries, twisted: bool, symmetry: Symmetry) -> Tuple[Entries, ...]:
    """Two traces glued into one, once per pair (P letter of first, P letter of second)"""
    word_a, word_b = word_of(first), word_of(second)
    images = []
    for p in _p_positions(word_a):
        opened_a = _opened_after(word_a, p)
        for q in _p_positions(word_b):
            opened_b = _opened_after(word_b, q)
            if twisted:
                images.append(entries_of(opened_a + "Q" + opened_b[::-1] + "Q", symmetry))
            else:
                images.append(entries_of(opened_a + "Q" + opened_b + "Q", symmetry))
    return tuple(images)
