"""
Cut-and-join operator pieces
Each piece is a first- or second-order differential operator in one family of
spectrum variables; operators are weighted sums of pieces in powers of x = 1/N.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

from src.core.exceptions import InvalidArgumentError, ModelMismatchError
from src.cutjoin.words import joins, split_pairs, twisted_pairs
from src.diagrams.core import Mode, Symmetry, symmetry_for
from src.series.ring import GradedSeries, LaurentCoeff, Monomial, Var, VarKind

logger = logging.getLogger(__name__)

# An image is a tuple of (coefficient, product of variables as sorted (Var, exponent) pairs)
Image = Tuple[Tuple[Fraction, Tuple[Tuple[Var, int], ...]], ...]


class Model(Enum):
    POINT = "point"
    LENGTH = "length"
    LENGTH_AND_POINT = "lp"

    @property
    def kind(self) -> VarKind:
        return {Model.POINT: VarKind.T, Model.LENGTH: VarKind.Q, Model.LENGTH_AND_POINT: VarKind.U}[self]


class Piece(Enum):
    L0 = "L0"
    L1 = "L1"
    L2 = "L2"
    K0 = "K0"
    K1 = "K1"
    K2 = "K2"
    M0 = "M0"
    M1 = "M1"
    M2 = "M2"
    M2_DUAL = "M2v"

    @property
    def model(self) -> Model:
        return {"L": Model.POINT, "K": Model.LENGTH, "M": Model.LENGTH_AND_POINT}[self.value[0]]

    @property
    def second_order(self) -> bool:
        return self in (Piece.L2, Piece.K2, Piece.M2, Piece.M2_DUAL)


def _product(*variables: Var) -> Tuple[Tuple[Var, int], ...]:
    counts: Dict[Var, int] = {}
    for var in variables:
        # t_0 = 1 in the point model
        if var.kind == VarKind.T and var.i == 0:
            continue
        counts[var] = counts.get(var, 0) + 1
    return tuple(sorted(counts.items()))


def _collect(pairs) -> Image:
    image: Dict[Tuple[Tuple[Var, int], ...], Fraction] = {}
    for coeff, prod in pairs:
        image[prod] = image.get(prod, Fraction(0)) + coeff
    return tuple((c, prod) for prod, c in sorted(image.items()) if c)


@lru_cache(maxsize=None)
def first_order_image(piece: Piece, var: Var, symmetry: Symmetry) -> Image:
    """Image of a single variable under a first-order piece"""
    half = Fraction(1, 2)
    if piece == Piece.L0:
        i = var.i
        return _collect((half * i, _product(Var.t(j), Var.t(i - j - 2))) for j in range(0, i - 1))
    if piece == Piece.L1:
        i = var.i
        if i < 2:
            return ()
        return _collect([(half * i * (i - 1), _product(Var.t(i - 2)))])
    if piece == Piece.K0:
        i = var.i
        return _collect((half * i, _product(Var.q(j), Var.q(i + 2 - j))) for j in range(1, i + 2))
    if piece == Piece.K1:
        i = var.i
        return _collect([(half * i * (i + 1), _product(Var.q(i + 2)))])
    if piece == Piece.M0:
        return _collect(
            (Fraction(1), _product(Var(VarKind.U, a), Var(VarKind.U, b)))
            for a, b in split_pairs(var.index, symmetry)
        )
    if piece == Piece.M1:
        return _collect(
            (Fraction(1), _product(Var(VarKind.U, a))) for a in twisted_pairs(var.index, symmetry)
        )
    raise InvalidArgumentError(f"Invalid first-order piece: {piece}")


@lru_cache(maxsize=None)
def pair_image(piece: Piece, first: Var, second: Var, symmetry: Symmetry) -> Image:
    """c(v, w) of a second-order piece 1/2 sum_{v,w} c(v,w) d^2/dv dw"""
    if piece == Piece.L2:
        i, j = first.i, second.i
        return _collect([(Fraction(i * j), _product(Var.t(i + j - 2)))])
    if piece == Piece.K2:
        i, j = first.i, second.i
        return _collect([(Fraction(i * j), _product(Var.q(i + j + 2)))])
    if piece in (Piece.M2, Piece.M2_DUAL):
        twisted = piece == Piece.M2_DUAL
        return _collect(
            (Fraction(1), _product(Var(VarKind.U, e)))
            for e in joins(first.index, second.index, twisted, symmetry)
        )
    raise InvalidArgumentError(f"Invalid second-order piece: {piece}")


def _check_model(piece: Piece, f: GradedSeries) -> None:
    kind = piece.model.kind
    for mono in f.terms:
        for var, _ in mono.variables:
            if var.kind != kind:
                raise ModelMismatchError(
                    f"Piece {piece.value} acts on {kind.value}-variables, found {var} in the series"
                )


def _replace(mono: Monomial, removed: List[Var], added: Tuple[Tuple[Var, int], ...]) -> Monomial:
    counts = mono.var_dict()
    for var in removed:
        counts[var] -= 1
    for var, e in added:
        counts[var] = counts.get(var, 0) + e
    return mono.with_variables(counts)


def _images(piece: Piece, mono: Monomial, symmetry: Symmetry) -> Iterator[Tuple[Fraction, Monomial]]:
    items = list(mono.variables)
    if not piece.second_order:
        for var, e in items:
            for c, prod in first_order_image(piece, var, symmetry):
                yield c * e, _replace(mono, [var], prod)
        return
    for a, (v, ev) in enumerate(items):
        for w, ew in items[a:]:
            if v == w:
                multiplicity = Fraction(ev * (ev - 1), 2)
            else:
                multiplicity = Fraction(ev * ew)
            if not multiplicity:
                continue
            for c, prod in pair_image(piece, v, w, symmetry):
                yield c * multiplicity, _replace(mono, [v, w], prod)


def apply_piece(piece: Piece, f: GradedSeries, mode: Mode = Mode.ORIENTED) -> GradedSeries:
    """Formal differentiation of every monomial with product-rule multiplicities"""
    _check_model(piece, f)
    symmetry = symmetry_for(mode)
    terms: Dict[Monomial, LaurentCoeff] = {}
    for mono, coeff in f.terms.items():
        for factor, image in _images(piece, mono, symmetry):
            contribution = coeff * factor
            terms[image] = terms[image] + contribution if image in terms else contribution
    return GradedSeries(f.truncation, terms)


@dataclass(frozen=True)
class CutJoinOperator:
    """sum of weight * x^power * piece"""

    model: Model
    orientation: Mode
    pieces: Tuple[Tuple[Piece, int, Fraction], ...]

    @property
    def x_weights(self) -> Dict[Piece, int]:
        return {piece: power for piece, power, _ in self.pieces}

    def __call__(self, f: GradedSeries) -> GradedSeries:
        logger.debug("applying %s to %d terms", self, len(f))
        result = GradedSeries.zero(f.truncation)
        for piece, power, weight in self.pieces:
            result = result + apply_piece(piece, f, self.orientation).shift_x(power).scale(weight)
        return result

    def __str__(self) -> str:
        parts = []
        for piece, power, weight in self.pieces:
            factor = "" if weight == 1 else f"{weight}"
            xs = "" if power == 0 else ("x" if power == 1 else f"x^{power}")
            parts.append(f"{factor}{xs}{piece.value}")
        return " + ".join(parts)


_PIECES = {
    Model.POINT: (Piece.L0, Piece.L1, Piece.L2),
    Model.LENGTH: (Piece.K0, Piece.K1, Piece.K2),
}


def assemble_operator(model: Model, orientation: Mode) -> CutJoinOperator:
    one, two = Fraction(1), Fraction(2)
    if model == Model.LENGTH_AND_POINT:
        if orientation == Mode.ORIENTED:
            pieces = ((Piece.M0, 0, one), (Piece.M2, 2, one))
        else:
            pieces = ((Piece.M0, 0, one), (Piece.M1, 1, one), (Piece.M2, 2, one), (Piece.M2_DUAL, 2, one))
    else:
        p0, p1, p2 = _PIECES[model]
        if orientation == Mode.ORIENTED:
            pieces = ((p0, 0, one), (p2, 2, one))
        else:
            pieces = ((p0, 0, one), (p1, 1, one), (p2, 2, two))
    return CutJoinOperator(model, orientation, pieces)
