"""
Tests for diagram structure, boundary tracing and types
"""

from collections import Counter

import pytest

from src.core.exceptions import ConsistencyError, InvalidArgumentError, InvalidDiagramError
from src.diagrams.core import (
    Backbone,
    Chord,
    Mode,
    PartialChordDiagram,
    SiteKind,
    Symmetry,
    canonical_entries,
    canonical_tuple,
    compute_type,
    connected_components,
    is_connected,
    make_type,
    reflect,
    trace_boundaries,
    validate_type,
)
from src.diagrams.enumerator import EnumerationSpec, enumerate_configurations
from src.diagrams.literal import format_diagram, parse_diagram


def _cycles(d):
    return sorted((c.length, c.marks.entries) for c in trace_boundaries(d))


@pytest.mark.parametrize(
    "entries, symmetry, expected",
    [
        ((1, 0, 2), Symmetry.NECKLACE, (0, 2, 1)),
        ((0, 0), Symmetry.NECKLACE, (0, 0)),
        ((2, 1, 0), Symmetry.BRACELET, (0, 1, 2)),
        ((2, 1, 0), Symmetry.NECKLACE, (0, 2, 1)),
    ],
)
def test_canonical_tuple(entries, symmetry, expected):
    result = canonical_tuple(entries, symmetry)
    assert result.entries == expected
    assert canonical_tuple(result.entries, symmetry).entries == expected


def test_canonical_tuple_orbit_constant():
    entries = (3, 0, 1, 1)
    rotations = [entries[i:] + entries[:i] for i in range(len(entries))]
    assert len({canonical_entries(r, Symmetry.NECKLACE) for r in rotations}) == 1
    assert canonical_entries(entries[::-1], Symmetry.BRACELET) == canonical_entries(entries, Symmetry.BRACELET)


def test_canonical_tuple_rejects_empty():
    with pytest.raises(InvalidArgumentError):
        canonical_tuple((), Symmetry.NECKLACE)


def test_empty_backbone_has_one_boundary():
    d = parse_diagram("backbones=[_] chords=[]")
    assert _cycles(d) == [(1, (0,))]
    t = compute_type(d)
    assert (t.euler_genus, t.k, t.l, t.n) == (0, 0, 0, 1)
    assert t.backbone_spectrum == ((0, 1),)
    assert t.lp_spectrum == (((0,), 1),)


def test_one_untwisted_chord(one_chord):
    assert _cycles(one_chord) == [(1, (0,)), (2, (0, 0))]
    assert compute_type(one_chord).genus == 0


def test_one_twisted_chord_is_a_mobius_band(mobius):
    assert _cycles(mobius) == [(3, (0, 0, 0))]
    t = compute_type(mobius)
    assert t.crosscaps == 1
    assert t.genus is None


def test_crossing_pairing_is_a_torus(crossing):
    assert _cycles(crossing) == [(5, (0, 0, 0, 0, 0))]
    assert compute_type(crossing).genus == 1


def test_marked_points_between_chord_ends():
    d = parse_diagram("backbones=[MCCM] chords=[(0.1-0.2,u)]")
    assert _cycles(d) == [(1, (0,)), (2, (1, 1))]
    t = compute_type(d)
    assert t.point_spectrum == ((0, 1), (2, 1))
    assert t.l == 2


def test_marked_point_inside_chord():
    d = parse_diagram("backbones=[MCMC] chords=[(0.1-0.3,u)]")
    assert _cycles(d) == [(1, (1,)), (2, (0, 1))]
    assert compute_type(d).point_spectrum == ((1, 2),)


def test_two_backbones_joined_by_one_chord():
    d = parse_diagram("backbones=[C,C] chords=[(0.0-1.0,u)]")
    assert _cycles(d) == [(4, (0, 0, 0, 0))]
    assert compute_type(d).genus == 0
    assert is_connected(d)


def test_diagram_invariants_are_enforced():
    with pytest.raises(InvalidDiagramError):
        PartialChordDiagram((Backbone((SiteKind.CHORD_END,) * 2),), (Chord((0, 0), (0, 0)),))
    with pytest.raises(InvalidDiagramError):
        PartialChordDiagram((Backbone((SiteKind.CHORD_END,) * 2),), (Chord((0, 0), (0, 1), twisted=True),))
    with pytest.raises(InvalidDiagramError):
        PartialChordDiagram((Backbone((SiteKind.CHORD_END, SiteKind.MARKED_POINT)),), (Chord((0, 0), (0, 1)),))
    with pytest.raises(InvalidDiagramError):
        PartialChordDiagram((Backbone((SiteKind.CHORD_END,) * 2),), ())


def test_is_connected():
    assert not is_connected(parse_diagram("backbones=[C,C,CC] chords=[(0.0-1.0,u),(2.0-2.1,u)]"))
    assert not is_connected(parse_diagram("backbones=[_,_] chords=[]"))
    assert is_connected(parse_diagram("backbones=[CCCC] chords=[(0.0-0.3,u),(0.1-0.2,u)]"))
    assert is_connected(parse_diagram("backbones=[CC,CCM] chords=[(0.0-1.1,u),(0.1-1.0,u)]"))


def test_genus_one_type_from_data():
    t = make_type(
        Mode.ORIENTED, 1, 6, 2,
        {6: 1, 8: 1}, {0: 2, 1: 2}, {1: 1, 2: 2, 9: 1},
        {(1,): 1, (0, 0): 2, (0, 0, 1, 0, 0, 0, 0, 0, 0): 1},
    )
    assert validate_type(t) is t
    assert t.b - t.k + t.n == 0


def test_validate_type_rejects_broken_euler_relation():
    t = make_type(Mode.ORIENTED, 0, 1, 0, {2: 1}, {0: 1}, {3: 1}, {(0, 0, 0): 1})
    with pytest.raises(ConsistencyError):
        validate_type(t)


def _all_diagrams(lengths_list, mode):
    for lengths in lengths_list:
        yield from enumerate_configurations(EnumerationSpec(lengths, None, mode))


ORIENTED_BLOCKS = [(0,), (3,), (6,), (2, 2), (1, 4), (3, 3), (1, 1, 2), (0, 2, 4)]
NON_ORIENTED_BLOCKS = [(2,), (5,), (1, 4), (2, 3), (1, 1, 3)]


@pytest.mark.parametrize("mode, blocks", [(Mode.ORIENTED, ORIENTED_BLOCKS), (Mode.NON_ORIENTED, NON_ORIENTED_BLOCKS)])
def test_every_small_diagram_satisfies_the_sum_rules(mode, blocks):
    for d in _all_diagrams(blocks, mode):
        cycles = trace_boundaries(d)
        t = compute_type(d)
        assert sum(c.marks.total for c in cycles) == d.l
        assert sum(c.length for c in cycles) == 2 * d.k + len(d.backbones)
        assert t.euler_genus >= 0


def test_reflection_reverses_tuples_oriented():
    for d in _all_diagrams([(1, 3), (5,)], Mode.ORIENTED):
        reversed_marks = Counter(canonical_entries(c.marks.entries[::-1], Symmetry.NECKLACE) for c in trace_boundaries(d))
        assert Counter(c.marks.entries for c in trace_boundaries(reflect(d))) == reversed_marks


def test_reflection_preserves_types_non_oriented():
    for d in _all_diagrams([(1, 3), (4,)], Mode.NON_ORIENTED):
        assert compute_type(reflect(d)) == compute_type(d)


def test_literal_round_trip(crossing, mobius):
    for d in (crossing, mobius):
        assert parse_diagram(format_diagram(d)) == d


def test_literal_defaults_and_errors():
    assert parse_diagram("backbones=[CC] chords=[(0.0-0.1,t)]").mode == Mode.NON_ORIENTED
    assert parse_diagram("backbones=[CC] chords=[(0.0-0.1,u)]").mode == Mode.ORIENTED
    assert parse_diagram("backbones=[] chords=[]").backbones == ()
    with pytest.raises(InvalidArgumentError):
        parse_diagram("backbones=[CX] chords=[]")
    with pytest.raises(InvalidArgumentError):
        parse_diagram("backbones=[CC] chords=[(0.0-0.1,t)] mode=oriented", mode=Mode.NON_ORIENTED)


def test_disconnected_diagrams_have_a_type():
    two_disks = parse_diagram("backbones=[_,_] chords=[]")
    assert connected_components(two_disks) == 2
    assert compute_type(two_disks).euler_genus == -1
    disk_and_torus = parse_diagram("backbones=[CCCC,_] chords=[(0.0-0.2,u),(0.1-0.3,u)]")
    assert compute_type(disk_and_torus).euler_genus == 0
    crosscapped = parse_diagram("backbones=[CC,_] chords=[(0.0-0.1,t)]")
    assert compute_type(crosscapped).crosscaps == -1


def test_validate_type_bounds_euler_genus_by_components():
    t = make_type(Mode.ORIENTED, -1, 0, 0, {0: 2}, {0: 2}, {1: 2}, {(0,): 2})
    assert validate_type(t, components=2) is t
    with pytest.raises(ConsistencyError):
        validate_type(t)


@pytest.mark.parametrize(
    "text",
    [
        "backbones=[CC,,CC] chords=[]",
        "backbones=[CC,] chords=[]",
        "backbones=[,CC] chords=[]",
        "backbones=[,] chords=[]",
        "backbones=[C_C] chords=[]",
        "backbones=[CC] chords=[(0.0-0.1,u),,]",
        "backbones=[CC] chords=[(0.0-0.1,u),]",
        "backbones=[CC] chords=[,(0.0-0.1,u)]",
    ],
)
def test_malformed_lists_are_rejected(text):
    with pytest.raises(InvalidArgumentError):
        parse_diagram(text)


def test_empty_backbones_are_written_as_underscores():
    d = parse_diagram("backbones=[_,CC,_] chords=[(1.0-1.1,u)]")
    assert [len(bb.sites) for bb in d.backbones] == [0, 2, 0]
    assert format_diagram(d).startswith("backbones=[_,CC,_]")
