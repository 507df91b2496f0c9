"""
Diagram literal text format

    backbones=[MCCM,CC] chords=[(0.1-0.2,u),(1.0-1.1,t)] mode=nonoriented

C is a chord end, M a marked point, _ an empty backbone. Chord ends are
addressed backbone.site (0-based); u/t mark untwisted/twisted chords.
The mode field is optional: it defaults to nonoriented when any chord is
twisted and to oriented otherwise.
"""

import re
from typing import Optional

from src.core.exceptions import InvalidArgumentError
from src.diagrams.core import Backbone, Chord, Mode, PartialChordDiagram, SiteKind

_BACKBONE = r"(?:_|[CM]+)"
_CHORD_TEXT = r"\(\d+\.\d+-\d+\.\d+,[ut]\)"
_LITERAL = re.compile(
    rf"^\s*backbones=\[(?P<backbones>(?:{_BACKBONE}(?:,{_BACKBONE})*)?)\]"
    rf"\s+chords=\[(?P<chords>[^\]]*)\]"
    r"(?:\s+mode=(?P<mode>oriented|nonoriented))?\s*$"
)
_CHORD_LIST = re.compile(rf"^(?:{_CHORD_TEXT}(?:,{_CHORD_TEXT})*)?$")
_CHORD = re.compile(r"\((\d+)\.(\d+)-(\d+)\.(\d+),([ut])\)")


def parse_diagram(text: str, mode: Optional[Mode] = None) -> PartialChordDiagram:
    """Backbone and chord lists are comma separated with no empty entries"""
    match = _LITERAL.match(text)
    if not match:
        raise InvalidArgumentError(f"Invalid diagram literal: {text!r}")
    raw_backbones = match.group("backbones")
    backbones = []
    if raw_backbones:
        for token in raw_backbones.split(","):
            if token == "_":
                backbones.append(Backbone(()))
            else:
                backbones.append(Backbone(tuple(SiteKind(c) for c in token)))
    raw_chords = match.group("chords").replace(" ", "")
    if not _CHORD_LIST.match(raw_chords):
        raise InvalidArgumentError(f"Invalid chord list: {raw_chords!r}")
    chords = [
        Chord((int(ba), int(ja)), (int(bb), int(jb)), twisted=twist == "t")
        for ba, ja, bb, jb, twist in _CHORD.findall(raw_chords)
    ]
    if match.group("mode"):
        literal_mode = Mode(match.group("mode"))
        if mode is not None and mode != literal_mode:
            raise InvalidArgumentError(f"Literal declares mode {literal_mode.value}, caller asked for {mode.value}")
        mode = literal_mode
    if mode is None:
        mode = Mode.NON_ORIENTED if any(c.twisted for c in chords) else Mode.ORIENTED
    return PartialChordDiagram(tuple(backbones), tuple(chords), mode)


def format_diagram(d: PartialChordDiagram) -> str:
    backbones = ",".join("".join(kind.value for kind in bb.sites) or "_" for bb in d.backbones)
    chords = ",".join(
        f"({c.end_a[0]}.{c.end_a[1]}-{c.end_b[0]}.{c.end_b[1]},{'t' if c.twisted else 'u'})"
        for c in d.chords
    )
    return f"backbones=[{backbones}] chords=[{chords}] mode={d.mode.value}"
