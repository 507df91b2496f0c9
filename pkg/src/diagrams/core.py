"""
Partial chord diagrams as ribbon structures
Boundary tracing, diagram types and connectivity
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import networkx as nx

from src.core.exceptions import ConsistencyError, InvalidArgumentError, InvalidDiagramError

logger = logging.getLogger(__name__)

SiteAddress = Tuple[int, int]  # (backbone index, site index)


class SiteKind(Enum):
    CHORD_END = "C"
    MARKED_POINT = "M"


class Mode(Enum):
    ORIENTED = "oriented"
    NON_ORIENTED = "nonoriented"


class Symmetry(Enum):
    NECKLACE = "necklace"
    BRACELET = "bracelet"


def symmetry_for(mode: Mode) -> Symmetry:
    return Symmetry.NECKLACE if mode == Mode.ORIENTED else Symmetry.BRACELET


@dataclass(frozen=True)
class Backbone:
    sites: Tuple[SiteKind, ...] = ()

    def __len__(self) -> int:
        return len(self.sites)


@dataclass(frozen=True)
class Chord:
    end_a: SiteAddress
    end_b: SiteAddress
    twisted: bool = False


@dataclass(frozen=True)
class PartialChordDiagram:
    """Ordered backbones, a perfect matching on the chord ends, and twist bits"""

    backbones: Tuple[Backbone, ...]
    chords: Tuple[Chord, ...]
    mode: Mode = Mode.ORIENTED

    def __post_init__(self):
        matched: Dict[SiteAddress, int] = {}
        for index, chord in enumerate(self.chords):
            if chord.end_a == chord.end_b:
                raise InvalidDiagramError(f"Chord {index} joins site {chord.end_a} to itself")
            if chord.twisted and self.mode == Mode.ORIENTED:
                raise InvalidDiagramError(f"Chord {index} is twisted in an oriented diagram")
            for end in (chord.end_a, chord.end_b):
                if self.site_kind(end) != SiteKind.CHORD_END:
                    raise InvalidDiagramError(f"Chord {index} ends on {end}, which is not a chord end")
                if end in matched:
                    raise InvalidDiagramError(f"Site {end} is used by chords {matched[end]} and {index}")
                matched[end] = index
        unmatched = [a for a in self.chord_end_sites() if a not in matched]
        if unmatched:
            raise InvalidDiagramError(f"Chord ends {unmatched} are not matched")

    def site_kind(self, address: SiteAddress) -> SiteKind:
        backbone, site = address
        if not (0 <= backbone < len(self.backbones) and 0 <= site < len(self.backbones[backbone])):
            raise InvalidDiagramError(f"Site address {address} is out of range")
        return self.backbones[backbone].sites[site]

    def chord_end_sites(self) -> List[SiteAddress]:
        return [
            (b, j)
            for b, backbone in enumerate(self.backbones)
            for j, kind in enumerate(backbone.sites)
            if kind == SiteKind.CHORD_END
        ]

    @property
    def k(self) -> int:
        return len(self.chords)

    @property
    def l(self) -> int:  # noqa: E743
        return sum(kind == SiteKind.MARKED_POINT for backbone in self.backbones for kind in backbone.sites)

    @property
    def m(self) -> int:
        return sum(len(backbone) for backbone in self.backbones)


@dataclass(frozen=True, order=True)
class CyclicTuple:
    entries: Tuple[int, ...]
    symmetry: Symmetry = field(default=Symmetry.NECKLACE, compare=False)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries)


@dataclass(frozen=True)
class BoundaryCycle:
    length: int
    marks: CyclicTuple


def _min_rotation(entries: Tuple[int, ...]) -> Tuple[int, ...]:
    return min(entries[i:] + entries[:i] for i in range(len(entries)))


def canonical_entries(entries: Sequence[int], symmetry: Symmetry) -> Tuple[int, ...]:
    """Lexicographically minimal representative of a rotation (and reversal) orbit"""
    entries = tuple(entries)
    if not entries:
        raise InvalidArgumentError("Cyclic tuple must be non-empty")
    if any(i < 0 for i in entries):
        raise InvalidArgumentError(f"Cyclic tuple entries must be non-negative, got {entries}")
    best = _min_rotation(entries)
    if symmetry == Symmetry.BRACELET:
        best = min(best, _min_rotation(tuple(reversed(entries))))
    return best


def canonical_tuple(entries: Sequence[int], symmetry: Symmetry) -> CyclicTuple:
    return CyclicTuple(canonical_entries(entries, symmetry), symmetry)


@dataclass(frozen=True)
class DiagramType:
    """Full invariant record of a diagram; spectra are stored as sorted pairs so types hash"""

    mode: Mode
    euler_genus: int
    k: int
    l: int  # noqa: E741
    backbone_spectrum: Tuple[Tuple[int, int], ...]
    point_spectrum: Tuple[Tuple[int, int], ...]
    length_spectrum: Tuple[Tuple[int, int], ...]
    lp_spectrum: Tuple[Tuple[Tuple[int, ...], int], ...]
    n: int

    @property
    def b(self) -> int:
        return sum(count for _, count in self.backbone_spectrum)

    @property
    def genus(self):
        return self.euler_genus if self.mode == Mode.ORIENTED else None

    @property
    def crosscaps(self):
        return self.euler_genus if self.mode == Mode.NON_ORIENTED else None

    @property
    def x_exponent(self) -> int:
        """Power of x = 1/N carried by a diagram of this type"""
        return -(self.b - self.k + self.n)


def _pairs(counter: Mapping) -> tuple:
    return tuple(sorted((key, value) for key, value in counter.items() if value))


def make_type(
    mode: Mode,
    euler_genus: int,
    k: int,
    l: int,  # noqa: E741
    backbone_spectrum: Mapping[int, int],
    point_spectrum: Mapping[int, int],
    length_spectrum: Mapping[int, int],
    lp_spectrum: Mapping[Tuple[int, ...], int],
) -> DiagramType:
    """Build a DiagramType from plain mappings (lp keys are canonicalized for the mode)"""
    symmetry = symmetry_for(mode)
    lp: Counter = Counter()
    for entries, count in lp_spectrum.items():
        lp[canonical_entries(entries, symmetry)] += count
    return DiagramType(
        mode=mode,
        euler_genus=euler_genus,
        k=k,
        l=l,
        backbone_spectrum=_pairs(backbone_spectrum),
        point_spectrum=_pairs(point_spectrum),
        length_spectrum=_pairs(length_spectrum),
        lp_spectrum=_pairs(lp),
        n=sum(lp.values()),
    )


def validate_type(t: DiagramType, components: int = 1) -> DiagramType:
    """Check the Euler relation and every sum rule; raise ConsistencyError on failure

    Each connected component has non-negative genus, so a surface with c
    components has Euler genus at least 1 - c (oriented) or 2 - 2c (non-oriented).
    """
    b = t.b
    m = sum(i * count for i, count in t.backbone_spectrum)
    n_point = sum(count for _, count in t.point_spectrum)
    n_length = sum(count for _, count in t.length_spectrum)
    n_lp = sum(count for _, count in t.lp_spectrum)
    problems = []
    chi = b - t.k + t.n
    if t.mode == Mode.ORIENTED and chi != 2 - 2 * t.euler_genus:
        problems.append(f"2-2g={2 - 2 * t.euler_genus} but b-k+n={chi}")
    if t.mode == Mode.NON_ORIENTED and chi != 2 - t.euler_genus:
        problems.append(f"2-h={2 - t.euler_genus} but b-k+n={chi}")
    floor = 1 - components if t.mode == Mode.ORIENTED else 2 - 2 * components
    if t.euler_genus < floor:
        problems.append(f"euler genus {t.euler_genus} below {floor} for {components} component(s)")
    if m != 2 * t.k + t.l:
        problems.append(f"m={m} but 2k+l={2 * t.k + t.l}")
    if not (t.n == n_point == n_length == n_lp):
        problems.append(f"boundary counts disagree: n={t.n}, point={n_point}, length={n_length}, lp={n_lp}")
    if sum(i * count for i, count in t.point_spectrum) != t.l:
        problems.append("sum i*n_i != l")
    if sum(i * count for i, count in t.length_spectrum) != 2 * t.k + b:
        problems.append("sum i*p_i != 2k+b")
    if sum(sum(entries) * count for entries, count in t.lp_spectrum) != t.l:
        problems.append("lp marks do not sum to l")
    by_sum: Counter = Counter()
    by_length: Counter = Counter()
    for entries, count in t.lp_spectrum:
        by_sum[sum(entries)] += count
        by_length[len(entries)] += count
    if _pairs(by_sum) != t.point_spectrum:
        problems.append("lp spectrum does not refine the point spectrum")
    if _pairs(by_length) != t.length_spectrum:
        problems.append("lp spectrum does not refine the length spectrum")
    if problems:
        raise ConsistencyError(f"Invalid diagram type: {'; '.join(problems)}")
    return t


# Boundary tracing. Nodes are ports; each node has degree two.
_TOP, _UNDER, _FLANK = "top", "under", "flank"


def _build_ribbon(d: PartialChordDiagram):
    edges: List[Tuple[tuple, tuple, str]] = []
    for b, backbone in enumerate(d.backbones):
        left: tuple = ("WEND", b)
        for j, kind in enumerate(backbone.sites):
            if kind == SiteKind.CHORD_END:
                edges.append((left, ("W", b, j), _TOP))
                left = ("E", b, j)
            else:
                junction = ("J", b, j)
                edges.append((left, junction, _TOP))
                left = junction
        edges.append((left, ("EEND", b), _TOP))
        edges.append((("WEND", b), ("EEND", b), _UNDER))
    for chord in d.chords:
        (ba, ja), (bb, jb) = chord.end_a, chord.end_b
        if chord.twisted:
            edges.append((("W", ba, ja), ("W", bb, jb), _FLANK))
            edges.append((("E", ba, ja), ("E", bb, jb), _FLANK))
        else:
            edges.append((("W", ba, ja), ("E", bb, jb), _FLANK))
            edges.append((("E", ba, ja), ("W", bb, jb), _FLANK))
    incidence: Dict[tuple, List[int]] = {}
    for edge_id, (a, b, _) in enumerate(edges):
        incidence.setdefault(a, []).append(edge_id)
        incidence.setdefault(b, []).append(edge_id)
    for node, incident in incidence.items():
        if len(incident) != 2:
            raise ConsistencyError(f"Port {node} has degree {len(incident)}")
    return edges, incidence


def _marks_from_events(events: List[str]) -> Tuple[int, ...]:
    """Marked points before each length event, read cyclically"""
    last = max(i for i, e in enumerate(events) if e == "L")
    events = events[last + 1:] + events[: last + 1]
    counts: List[int] = []
    run = 0
    for event in events:
        if event == "M":
            run += 1
        else:
            counts.append(run)
            run = 0
    return tuple(counts)


def trace_boundaries(d: PartialChordDiagram) -> List[BoundaryCycle]:
    """Boundary components of the thickened surface, each started on a top run going west to east"""
    edges, incidence = _build_ribbon(d)
    symmetry = symmetry_for(d.mode)
    visited = [False] * len(edges)
    cycles: List[BoundaryCycle] = []
    for start, (_, head, kind) in enumerate(edges):
        if kind != _TOP or visited[start]:
            continue
        events: List[str] = []
        visited[start] = True
        edge, node = start, head
        while True:
            if node[0] == "J":
                events.append("M")
            a, b = incidence[node]
            edge = b if a == edge else a
            if edge == start:
                break
            visited[edge] = True
            tail, other, edge_kind = edges[edge]
            node = other if tail == node else tail
            if edge_kind != _TOP:
                events.append("L")
        if "L" not in events:
            raise ConsistencyError("Boundary cycle without a length-contributing segment")
        marks = canonical_tuple(_marks_from_events(events), symmetry)
        cycles.append(BoundaryCycle(length=len(marks), marks=marks))
    if not all(visited):
        raise ConsistencyError("Boundary tracing left segments unvisited")
    return cycles


def compute_type(d: PartialChordDiagram) -> DiagramType:
    cycles = trace_boundaries(d)
    b, k, n = len(d.backbones), d.k, len(cycles)
    chi = b - k + n
    if d.mode == Mode.ORIENTED:
        if chi % 2:
            raise ConsistencyError(f"Oriented diagram with odd b-k+n={chi}")
        euler_genus = (2 - chi) // 2
    else:
        euler_genus = 2 - chi
    logger.debug("traced %d boundary cycles (b=%d, k=%d)", n, b, k)
    t = make_type(
        d.mode,
        euler_genus,
        k,
        d.l,
        Counter(len(backbone) for backbone in d.backbones),
        Counter(c.marks.total for c in cycles),
        Counter(c.length for c in cycles),
        Counter(c.marks.entries for c in cycles),
    )
    return validate_type(t, max(1, connected_components(d)))


def _backbone_graph(d: PartialChordDiagram) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(d.backbones)))
    graph.add_edges_from((chord.end_a[0], chord.end_b[0]) for chord in d.chords)
    return graph


def connected_components(d: PartialChordDiagram) -> int:
    return nx.number_connected_components(_backbone_graph(d))


def is_connected(d: PartialChordDiagram) -> bool:
    if not d.backbones:
        return False
    return nx.is_connected(_backbone_graph(d))


def reflect(d: PartialChordDiagram) -> PartialChordDiagram:
    """Global left-right reflection: backbone order and site order reversed"""
    last = len(d.backbones) - 1

    def mirror(address: SiteAddress) -> SiteAddress:
        b, j = address
        return last - b, len(d.backbones[b]) - 1 - j

    backbones = tuple(Backbone(tuple(reversed(bb.sites))) for bb in reversed(d.backbones))
    chords = tuple(Chord(mirror(c.end_a), mirror(c.end_b), c.twisted) for c in d.chords)
    return PartialChordDiagram(backbones, chords, d.mode)


def backbones_from_lengths(lengths: Iterable[int], chord_end_mask: Sequence[bool]) -> Tuple[Backbone, ...]:
    """Lay out backbones of the given lengths, marking the flat sites flagged True as chord ends"""
    backbones = []
    position = 0
    for length in lengths:
        sites = tuple(
            SiteKind.CHORD_END if chord_end_mask[position + j] else SiteKind.MARKED_POINT
            for j in range(length)
        )
        backbones.append(Backbone(sites))
        position += length
    return tuple(backbones)
