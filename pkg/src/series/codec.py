"""
JSON serialization of series and censuses
Counts and rationals are decimal strings; every document carries a version tag
"""

import json
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from src.core.config import FORMAT_VERSION
from src.core.exceptions import InvalidArgumentError
from src.diagrams.core import Mode
from src.series.ring import GradedSeries, LaurentCoeff, Monomial, Truncation, Var, VarKind, project_point


def _fraction_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidArgumentError(f"Invalid rational {text!r}") from e


def _var_to_json(var: Var, power: int) -> Dict[str, Any]:
    if var.kind == VarKind.U:
        return {"u": list(var.index), "pow": power}
    return {var.kind.value: var.i, "pow": power}


def _var_from_json(item: Dict[str, Any]) -> Tuple[Var, int]:
    power = int(item.get("pow", 1))
    for kind in VarKind:
        if kind.value in item:
            raw = item[kind.value]
            index = tuple(int(i) for i in raw) if kind == VarKind.U else (int(raw),)
            return Var(kind, index), power
    raise InvalidArgumentError(f"Unknown variable record {item}")


def series_to_dict(series: GradedSeries, **meta: Any) -> Dict[str, Any]:
    trunc = series.truncation
    terms = []
    for mono, coeff in series.items():
        terms.append({
            "y": mono.y,
            "s": {str(i): e for i, e in mono.s},
            "vars": [_var_to_json(v, e) for v, e in mono.variables],
            "coeff": {str(e): _fraction_str(v) for e, v in coeff.items()},
        })
    return {
        "version": FORMAT_VERSION,
        "kind": "series",
        **meta,
        "truncation": {"y_max": trunc.y_max, "b_max": trunc.b_max, "m_max": trunc.m_max},
        "terms": terms,
    }


def series_from_dict(data: Dict[str, Any]) -> GradedSeries:
    if data.get("kind", "series") != "series":
        raise InvalidArgumentError(f"Expected a series document, got kind={data.get('kind')!r}")
    raw = data.get("truncation") or {}
    trunc = Truncation(int(raw.get("y_max", 0)), int(raw.get("b_max", 0)), raw.get("m_max"))
    terms: Dict[Monomial, LaurentCoeff] = {}
    for item in data.get("terms", []):
        variables = dict(_var_from_json(v) for v in item.get("vars", []))
        mono = Monomial.build(int(item["y"]), {int(i): int(e) for i, e in item.get("s", {}).items()}, variables)
        coeff = LaurentCoeff({int(e): _parse_fraction(v) for e, v in item["coeff"].items()})
        terms[mono] = terms[mono] + coeff if mono in terms else coeff
    return GradedSeries(trunc, terms)


def census_to_dict(census, spectrum: str = "lp") -> Dict[str, Any]:
    """Census document; spectrum selects which spectra are written per entry"""
    spec = census.spec
    b_spectrum = {str(i): count for i, count in sorted(spec.backbone_spectrum().items())}
    entries = []
    for (euler_genus, k, l, key), count in census.marginal(spectrum).items():
        entry: Dict[str, Any] = {
            "genus": euler_genus if spec.mode == Mode.ORIENTED else None,
            "crosscaps": euler_genus if spec.mode == Mode.NON_ORIENTED else None,
            "k": k,
            "l": l,
            "b": b_spectrum,
        }
        if spectrum == "point":
            entry["n_point"] = {str(i): n for i, n in key}
        elif spectrum == "length":
            entry["p_length"] = {str(i): n for i, n in key}
        else:
            point: Dict[int, int] = {}
            length: Dict[int, int] = {}
            for entries_, n in key:
                point[sum(entries_)] = point.get(sum(entries_), 0) + n
                length[len(entries_)] = length.get(len(entries_), 0) + n
            entry["n_point"] = {str(i): n for i, n in sorted(point.items())}
            entry["p_length"] = {str(i): n for i, n in sorted(length.items())}
            entry["n_lp"] = [{"tuple": list(entries_), "count": n} for entries_, n in key]
        entry["count"] = str(count)
        entries.append(entry)
    return {
        "version": FORMAT_VERSION,
        "kind": "census",
        "mode": spec.mode.value,
        "backbones": list(spec.backbone_lengths),
        "chords": "all" if spec.chords is None else spec.chords,
        "connected": spec.connected_only,
        "spectrum": spectrum,
        "entries": entries,
    }


def census_series(data: Dict[str, Any]) -> Tuple[GradedSeries, str]:
    """Census document as Z-block series: x^{-(b-k+n)} y^k prod s_i^{b_i}/b_i! times the spectrum monomial"""
    if data.get("kind") != "census":
        raise InvalidArgumentError("Expected a census document")
    spectrum = data.get("spectrum", "lp")
    mode = Mode(data.get("mode", "oriented"))
    lengths: List[int] = [int(i) for i in data["backbones"]]
    s: Dict[int, int] = {}
    for i in lengths:
        s[i] = s.get(i, 0) + 1
    symmetry_factor = 1
    for count in s.values():
        symmetry_factor *= factorial(count)
    b = len(lengths)
    terms: Dict[Monomial, LaurentCoeff] = {}
    y_max = 0
    for entry in data["entries"]:
        k = int(entry["k"])
        euler_genus = entry["genus"] if mode == Mode.ORIENTED else entry["crosscaps"]
        x_exponent = 2 * euler_genus - 2 if mode == Mode.ORIENTED else euler_genus - 2
        n = -x_exponent - b + k
        variables: Dict[Var, int] = {}
        if spectrum == "lp":
            for item in entry["n_lp"]:
                variables[Var(VarKind.U, tuple(item["tuple"]))] = int(item["count"])
        elif spectrum == "point":
            for i, count in entry["n_point"].items():
                if int(i):
                    variables[Var.t(int(i))] = int(count)
        else:
            for i, count in entry["p_length"].items():
                variables[Var.q(int(i))] = int(count)
        if sum(variables.values()) + _unrecorded(entry, spectrum) != n:
            raise InvalidArgumentError(f"Census entry {entry} violates the Euler relation")
        mono = Monomial.build(k, s, variables)
        coeff = LaurentCoeff.monomial(x_exponent, Fraction(int(entry["count"]), symmetry_factor))
        terms[mono] = terms[mono] + coeff if mono in terms else coeff
        y_max = max(y_max, k)
    return GradedSeries(Truncation(y_max, b, sum(lengths)), terms), spectrum


def first_mismatch(left: GradedSeries, right: GradedSeries) -> Optional[Tuple[Monomial, int, Fraction, Fraction]]:
    """First (monomial, x exponent, left value, right value) where the two series differ"""
    left_terms, right_terms = left.terms, right.terms
    for mono in sorted(set(left_terms) | set(right_terms)):
        a = left_terms.get(mono, LaurentCoeff())
        b = right_terms.get(mono, LaurentCoeff())
        if a == b:
            continue
        exponents = sorted({e for e, _ in a.items()} | {e for e, _ in b.items()})
        for e in exponents:
            if a[e] != b[e]:
                return mono, e, a[e], b[e]
    return None


def _unrecorded(entry: Dict[str, Any], spectrum: str) -> int:
    """Boundaries that carry no variable in the series form (t_0 = 1)"""
    if spectrum == "point":
        return int(entry["n_point"].get("0", 0))
    return 0


def _length_marginal(series: GradedSeries) -> GradedSeries:
    """u_(i_1..i_K) -> q_K for every tuple, matching a census by length spectrum"""

    def substitute(mono: Monomial) -> Monomial:
        counts: Dict[Var, int] = {}
        for var, e in mono.variables:
            key = Var.q(len(var.index)) if var.kind == VarKind.U else var
            counts[key] = counts.get(key, 0) + e
        return mono.with_variables(counts)

    return series.map_monomials(substitute)


def compare_documents(left: Dict[str, Any], right: Dict[str, Any]):
    """Compare two series/census documents; a census restricts the other side to its block"""
    census_doc = next((doc for doc in (left, right) if doc.get("kind") == "census"), None)
    if census_doc is None:
        return first_mismatch(series_from_dict(left), series_from_dict(right))
    if census_doc.get("connected"):
        raise InvalidArgumentError("compare needs a full census; connected-only censuses are not Z blocks")
    block_s = Monomial.build(0, _s_of(census_doc)).s
    sides = []
    spectrum = census_doc.get("spectrum", "lp")
    for doc in (left, right):
        if doc.get("kind") == "census":
            series, _ = census_series(doc)
        else:
            series = series_from_dict(doc)
            if spectrum == "point":
                series = project_point(series)
            elif spectrum == "length":
                series = _length_marginal(series)
        sides.append(series)
    chords = census_doc.get("chords", "all")
    y_max = min(series.truncation.y_max for series in sides)
    restricted = [
        series.filter(
            lambda m: m.s == block_s and m.y <= y_max and (chords == "all" or m.y == int(chords))
        )
        for series in sides
    ]
    return first_mismatch(restricted[0], restricted[1])


def _s_of(doc: Dict[str, Any]) -> Dict[int, int]:
    s: Dict[int, int] = {}
    for i in doc["backbones"]:
        s[int(i)] = s.get(int(i), 0) + 1
    return s


def dump_json(document: Dict[str, Any], path: Optional[str]) -> str:
    text = json.dumps(document, sort_keys=True, indent=2)
    if path:
        Path(path).write_text(text + "\n")
    return text


def load_json(path: str) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidArgumentError(f"Could not read {path}: {e}") from e


def type_to_dict(t) -> Dict[str, Any]:
    """One DiagramType in the census entry layout, with every spectrum written out"""
    oriented = t.mode == Mode.ORIENTED
    return {
        "mode": t.mode.value,
        "genus": t.euler_genus if oriented else None,
        "crosscaps": None if oriented else t.euler_genus,
        "k": t.k,
        "l": t.l,
        "n": t.n,
        "b": {str(i): count for i, count in t.backbone_spectrum},
        "n_point": {str(i): count for i, count in t.point_spectrum},
        "p_length": {str(i): count for i, count in t.length_spectrum},
        "n_lp": [{"tuple": list(entries), "count": count} for entries, count in t.lp_spectrum],
    }
