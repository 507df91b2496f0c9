"""
Exhaustive enumeration of partial chord diagrams
Placements of chord ends, Wick pairings and twist bits; censuses and Gaussian averages
"""

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from itertools import combinations, product
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.core.exceptions import InvalidArgumentError
from src.diagrams.core import (
    Chord,
    DiagramType,
    Mode,
    PartialChordDiagram,
    SiteAddress,
    SiteKind,
    backbones_from_lengths,
    compute_type,
    is_connected,
)
from src.series.ring import GradedSeries, LaurentCoeff, Monomial, Truncation, Var, VarKind

logger = logging.getLogger(__name__)

SPECTRA = ("point", "length", "lp")


@dataclass(frozen=True)
class EnumerationSpec:
    """Backbone lengths are positional slots; chords=None enumerates every feasible k"""

    backbone_lengths: Tuple[int, ...]
    chords: Optional[int] = None
    mode: Mode = Mode.ORIENTED
    connected_only: bool = False

    def __post_init__(self):
        object.__setattr__(self, "backbone_lengths", tuple(int(i) for i in self.backbone_lengths))
        if any(i < 0 for i in self.backbone_lengths):
            raise InvalidArgumentError(f"Backbone lengths must be non-negative, got {list(self.backbone_lengths)}")
        if self.chords is not None and self.chords < 0:
            raise InvalidArgumentError(f"Chord count must be non-negative, got {self.chords}")

    @property
    def m(self) -> int:
        return sum(self.backbone_lengths)

    @property
    def b(self) -> int:
        return len(self.backbone_lengths)

    def chord_counts(self) -> List[int]:
        if self.chords is None:
            return list(range(self.m // 2 + 1))
        return [self.chords] if 2 * self.chords <= self.m else []

    def backbone_spectrum(self) -> Dict[int, int]:
        return dict(Counter(self.backbone_lengths))


def all_pairings(items: Sequence) -> Iterator[List[Tuple]]:
    """All perfect matchings, pairing the first item with each remaining one in turn"""
    items = list(items)
    if not items:
        yield []
        return
    first = items.pop(0)
    for i, item in enumerate(items):
        for pairing in all_pairings(items[:i] + items[i + 1:]):
            yield [(first, item)] + pairing


def double_factorial(n: int) -> int:
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def configuration_count(spec: EnumerationSpec, k: int) -> int:
    """Number of configurations with k chords before any connectivity filter"""
    if 2 * k > spec.m:
        return 0
    twists = 2 ** k if spec.mode == Mode.NON_ORIENTED else 1
    return comb(spec.m, 2 * k) * double_factorial(2 * k - 1) * twists


def _placements(spec: EnumerationSpec, k: int) -> Iterator[Tuple[bool, ...]]:
    for chosen in combinations(range(spec.m), 2 * k):
        mask = [False] * spec.m
        for position in chosen:
            mask[position] = True
        yield tuple(mask)


def _diagrams_for_placement(spec: EnumerationSpec, mask: Tuple[bool, ...]) -> Iterator[PartialChordDiagram]:
    backbones = backbones_from_lengths(spec.backbone_lengths, mask)
    ends: List[SiteAddress] = [
        (b, j)
        for b, backbone in enumerate(backbones)
        for j, kind in enumerate(backbone.sites)
        if kind == SiteKind.CHORD_END
    ]
    k = len(ends) // 2
    twist_choices = list(product((False, True), repeat=k)) if spec.mode == Mode.NON_ORIENTED else [(False,) * k]
    for pairing in all_pairings(ends):
        for twists in twist_choices:
            chords = tuple(Chord(a, b, twisted) for (a, b), twisted in zip(pairing, twists))
            yield PartialChordDiagram(backbones, chords, spec.mode)


def enumerate_configurations(spec: EnumerationSpec) -> Iterator[PartialChordDiagram]:
    """Every configuration exactly once, ordered by k, placement, pairing, twists"""
    for k in spec.chord_counts():
        for mask in _placements(spec, k):
            yield from _diagrams_for_placement(spec, mask)


@dataclass
class Census:
    spec: EnumerationSpec
    entries: Dict[DiagramType, int] = field(default_factory=dict)

    def total(self, k: Optional[int] = None) -> int:
        return sum(count for t, count in self.entries.items() if k is None or t.k == k)

    def genus_counts(self, k: Optional[int] = None) -> Dict[int, int]:
        """Counts by genus (oriented) or cross-cap number (non-oriented)"""
        counts: Counter = Counter()
        for t, count in self.entries.items():
            if k is None or t.k == k:
                counts[t.euler_genus] += count
        return dict(sorted(counts.items()))

    def marginal(self, spectrum: str) -> Dict[tuple, int]:
        """Counts keyed by (euler_genus, k, l, spectrum pairs)"""
        if spectrum not in SPECTRA:
            raise InvalidArgumentError(f"Invalid spectrum: {spectrum}. Must be one of: {', '.join(SPECTRA)}")
        counts: Counter = Counter()
        for t, count in self.entries.items():
            if spectrum == "point":
                key = t.point_spectrum
            elif spectrum == "length":
                key = t.length_spectrum
            else:
                key = t.lp_spectrum
            counts[(t.euler_genus, t.k, t.l, key)] += count
        return dict(sorted(counts.items()))

    def __add__(self, other: "Census") -> "Census":
        merged = Counter(self.entries)
        merged.update(other.entries)
        return Census(self.spec, dict(merged))


def _census_chunk(spec: EnumerationSpec, masks: List[Tuple[bool, ...]]) -> Counter:
    counts: Counter = Counter()
    for mask in masks:
        for diagram in _diagrams_for_placement(spec, mask):
            if spec.connected_only and not is_connected(diagram):
                continue
            counts[compute_type(diagram)] += 1
    return counts


def census(spec: EnumerationSpec, threads: int = 1) -> Census:
    """Aggregate diagram types; placements are partitioned across worker processes

    Chunks are merged by counting, so the census does not depend on the worker count.
    """
    masks = [mask for k in spec.chord_counts() for mask in _placements(spec, k)]
    logger.info(
        "census of backbones %s (%s): %d placements on %d worker(s)",
        list(spec.backbone_lengths), spec.mode.value, len(masks), threads,
    )
    if threads <= 1 or len(masks) < 2:
        counts = _census_chunk(spec, masks)
    else:
        chunks = [masks[i::threads] for i in range(threads)]
        counts = Counter()
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for chunk_counts in pool.map(partial(_census_chunk, spec), chunks):
                counts.update(chunk_counts)
    return Census(spec, dict(counts))


def type_monomial(t: DiagramType, s: Optional[Dict[int, int]] = None) -> Monomial:
    """y^k * s-part * prod u_ii^{n_ii} of a diagram type"""
    variables = {Var(VarKind.U, entries): count for entries, count in t.lp_spectrum}
    return Monomial.build(t.k, s, variables)


def gaussian_average(spec: EnumerationSpec, truncation: Optional[Truncation] = None) -> GradedSeries:
    """Sum over configurations of x^{-(b-k+n)} y^k prod u_ii, with no symmetry factors"""
    truncation = truncation or Truncation(spec.m // 2, spec.b, spec.m)
    result = census(spec)
    terms: Dict[Monomial, LaurentCoeff] = {}
    for t, count in result.entries.items():
        mono = type_monomial(t)
        coeff = LaurentCoeff.monomial(t.x_exponent, count)
        terms[mono] = terms[mono] + coeff if mono in terms else coeff
    return GradedSeries(truncation, terms)


def harer_zagier(k_max: int) -> Dict[Tuple[int, int], int]:
    """Gluings of a 2k-gon into genus g: (k+1)e_g(k) = (4k-2)e_g(k-1) + (k-1)(2k-1)(2k-3)e_{g-1}(k-2)"""
    e: Dict[Tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    for k in range(1, k_max + 1):
        for g in range(0, k // 2 + 1):
            value = (4 * k - 2) * e.get((g, k - 1), 0)
            value += (k - 1) * (2 * k - 1) * (2 * k - 3) * e.get((g - 1, k - 2), 0)
            e[(g, k)] = Fraction(value, k + 1)
    return {key: int(value) for key, value in e.items() if value}
