"""
Tests for operator pieces, assembly and trace-word surgery
"""

from fractions import Fraction

import pytest

from src.core.exceptions import InvalidArgumentError, ModelMismatchError
from src.cutjoin.evolution import evolve, initial_condition, one_backbone_series, restore_t0
from src.cutjoin.operators import Model, Piece, apply_piece, assemble_operator
from src.cutjoin.words import entries_of, joins, split_pairs, twisted_pairs, word_of
from src.diagrams.core import Mode, Symmetry
from src.series.ring import (
    UNIFORM_S,
    GradedSeries,
    LaurentCoeff,
    Monomial,
    Truncation,
    Var,
    polynomial,
    project_point,
)


def poly(*terms):
    return polynomial(terms)


def u(*entries):
    return Var.u(entries, Symmetry.BRACELET)


def test_words():
    assert word_of((2, 0, 1)) == "PPQQPQ"
    assert entries_of("QPPQ", Symmetry.NECKLACE) == (0, 2)
    assert split_pairs((2,), Symmetry.NECKLACE) == (((0,), (0, 0)),)
    assert twisted_pairs((2,), Symmetry.BRACELET) == ((0, 0, 0),)
    assert joins((1,), (1,), False, Symmetry.NECKLACE) == ((0, 0, 0, 0),)
    assert joins((1,), (1,), True, Symmetry.BRACELET) == ((0, 0, 0, 0),)


@pytest.mark.parametrize(
    "piece, f, expected",
    [
        (Piece.L0, poly((1, {Var.t(2): 1})), poly((1, {}))),
        (Piece.L0, poly((1, {Var.t(3): 1})), poly((3, {Var.t(1): 1}))),
        (Piece.L0, poly((1, {Var.t(4): 1})), poly((4, {Var.t(2): 1}), (2, {Var.t(1): 2}))),
        (Piece.L1, poly((1, {Var.t(2): 1})), poly((1, {}))),
        (Piece.L1, poly((1, {Var.t(3): 1})), poly((3, {Var.t(1): 1}))),
        (Piece.L2, poly((1, {Var.t(1): 2})), poly((1, {}))),
        (Piece.L2, poly((1, {Var.t(1): 1, Var.t(2): 1})), poly((2, {Var.t(1): 1}))),
        (Piece.K0, poly((1, {Var.q(1): 1})), poly((1, {Var.q(1): 1, Var.q(2): 1}))),
        (Piece.K1, poly((1, {Var.q(1): 1})), poly((1, {Var.q(3): 1}))),
        (Piece.K2, poly((1, {Var.q(1): 2})), poly((1, {Var.q(4): 1}))),
        (Piece.M0, poly((1, {Var.u((2,)): 1})), poly((1, {Var.u((0,)): 1, Var.u((0, 0)): 1}))),
        (Piece.M2, poly((1, {Var.u((1,)): 2})), poly((1, {Var.u((0, 0, 0, 0)): 1}))),
        (Piece.M2, poly((1, {Var.u((1,)): 1, Var.u((1, 0)): 1})), poly((1, {Var.u((0, 0, 0, 0, 0)): 1}))),
    ],
)
def test_piece_images(piece, f, expected):
    assert apply_piece(piece, f) == expected


def test_non_oriented_pieces_use_bracelets():
    assert apply_piece(Piece.M1, poly((1, {u(2): 1})), Mode.NON_ORIENTED) == poly((1, {u(0, 0, 0): 1}))
    assert apply_piece(Piece.M2_DUAL, poly((1, {u(1): 2})), Mode.NON_ORIENTED) == poly((1, {u(0, 0, 0, 0): 1}))


def test_length_and_point_pieces_project_to_point_pieces():
    f = poly((1, {Var.u((2,)): 1}), (2, {Var.u((1, 0)): 1, Var.u((1,)): 1}))
    for m_piece, l_piece in ((Piece.M0, Piece.L0), (Piece.M2, Piece.L2)):
        assert project_point(apply_piece(m_piece, f)) == apply_piece(l_piece, project_point(f))


def test_piece_rejects_foreign_variables():
    with pytest.raises(ModelMismatchError):
        apply_piece(Piece.L0, poly((1, {Var.q(2): 1})))
    with pytest.raises(ModelMismatchError):
        apply_piece(Piece.M0, poly((1, {Var.t(2): 1})))


def test_constants_are_annihilated():
    for piece in Piece:
        assert len(apply_piece(piece, poly((5, {})))) == 0


def test_operator_assembly():
    assert assemble_operator(Model.POINT, Mode.ORIENTED).x_weights == {Piece.L0: 0, Piece.L2: 2}
    tilde = assemble_operator(Model.POINT, Mode.NON_ORIENTED)
    assert tilde.x_weights == {Piece.L0: 0, Piece.L1: 1, Piece.L2: 2}
    assert [weight for _, _, weight in tilde.pieces] == [1, 1, 2]
    assert assemble_operator(Model.LENGTH_AND_POINT, Mode.NON_ORIENTED).x_weights == {
        Piece.M0: 0, Piece.M1: 1, Piece.M2: 2, Piece.M2_DUAL: 2,
    }
    assert str(tilde) == "L0 + xL1 + 2x^2L2"


def test_initial_condition_needs_a_backbone():
    with pytest.raises(InvalidArgumentError):
        initial_condition(Model.POINT, Mode.ORIENTED, b_max=0)


def test_length_model_first_order():
    init = initial_condition(Model.LENGTH, Mode.ORIENTED, b_max=2)
    z = evolve(assemble_operator(Model.LENGTH, Mode.ORIENTED), init, 1)
    first = {m: c for m, c in z.terms.items() if m.y == 1}
    assert first == {
        Monomial.build(1, {UNIFORM_S: 1}, {Var.q(1): 1, Var.q(2): 1}): LaurentCoeff.monomial(-2),
        Monomial.build(1, {UNIFORM_S: 2}, {Var.q(1): 2, Var.q(2): 1}): LaurentCoeff.monomial(-4),
        Monomial.build(1, {UNIFORM_S: 2}, {Var.q(4): 1}): LaurentCoeff.monomial(-2, Fraction(1, 2)),
    }


def test_non_oriented_point_model_counts_the_mobius_band():
    z = one_backbone_series(Model.POINT, Mode.NON_ORIENTED, y_max=1, max_sites=2)
    mono = Monomial.build(1, {2: 1})
    assert z[mono] == LaurentCoeff({-2: 1, -1: 1})


def test_restore_t0():
    z = one_backbone_series(Model.POINT, Mode.ORIENTED, y_max=2, max_sites=4)
    restored = restore_t0(z)
    # <N Tr M^4>: two planar pairings with three boundaries, one torus pairing with one
    assert restored[Monomial.build(2, {4: 1}, {Var.t(0): 3})] == LaurentCoeff.monomial(-2, 2)
    assert restored[Monomial.build(2, {4: 1}, {Var.t(0): 1})] == LaurentCoeff.monomial(0, 1)


def test_lower_orders_do_not_change_with_y_max():
    op = assemble_operator(Model.LENGTH_AND_POINT, Mode.ORIENTED)
    init = initial_condition(Model.LENGTH_AND_POINT, Mode.ORIENTED, b_max=1, max_sites=4, m_max=4)
    second = evolve(op, init, 2)
    first = evolve(op, init, 1)
    assert second.filter(lambda m: m.y <= 1) == first
    assert isinstance(second, GradedSeries) and second.truncation == Truncation(2, 1, 4)


def test_twisted_join_reverses_the_second_word_between_two_q_letters():
    # PQQ + Q + (QPQ reversed) + Q: the Q letters sit on both sides of the reversed arc
    assert set(joins((0, 2), (1, 1), True, Symmetry.BRACELET)) == {(0, 0, 0, 1, 0, 1)}
    assert (0, 0, 0, 0, 1, 1) not in joins((0, 2), (1, 1), True, Symmetry.BRACELET)


def test_twisted_self_gluing_removes_two_p_and_adds_two_q():
    images = twisted_pairs((1, 2), Symmetry.BRACELET)
    assert len(images) == 3
    for image in images:
        assert sum(image) == 1 and len(image) == 4


FIRST_ORDER_NON_ORIENTED_ONLY = {Piece.L1, Piece.K1, Piece.M1, Piece.M2_DUAL}


def random_model_series(rng, model, mode, truncation, n_terms=4):
    symmetry = Symmetry.BRACELET if mode == Mode.NON_ORIENTED else Symmetry.NECKLACE
    series = GradedSeries.zero(truncation)
    while len(series) < n_terms:
        variables = {}
        for _ in range(int(rng.integers(1, 3))):
            if model == Model.LENGTH_AND_POINT:
                var = Var.u(tuple(int(i) for i in rng.integers(0, 3, size=int(rng.integers(1, 3)))), symmetry)
            elif model == Model.POINT:
                var = Var.t(int(rng.integers(1, 4)))
            else:
                var = Var.q(int(rng.integers(1, 4)))
            variables[var] = variables.get(var, 0) + 1
        s = {int(rng.integers(0, 2)): 1} if rng.random() < 0.5 else {}
        y = int(rng.integers(0, truncation.y_max + 1))
        coeff = LaurentCoeff.monomial(int(rng.integers(-2, 1)), Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 3))))
        series = series + GradedSeries.term(truncation, Monomial.build(y, s, variables), coeff)
    return series


def piece_cases():
    cases = []
    for piece in Piece:
        modes = [Mode.NON_ORIENTED] if piece in FIRST_ORDER_NON_ORIENTED_ONLY else list(Mode)
        cases += [(piece, mode) for mode in modes]
    return cases


@pytest.mark.parametrize("piece, mode", piece_cases())
def test_pieces_are_linear(rng, piece, mode):
    truncation = Truncation(2, 2, 3)
    for _ in range(3):
        f = random_model_series(rng, piece.model, mode, truncation)
        g = random_model_series(rng, piece.model, mode, truncation)
        a = Fraction(int(rng.integers(1, 7)), int(rng.integers(1, 4)))
        left = apply_piece(piece, f.scale(a) + g, mode)
        assert left == apply_piece(piece, f, mode).scale(a) + apply_piece(piece, g, mode)


@pytest.mark.parametrize("piece, mode", [(p, m) for p, m in piece_cases() if not p.second_order])
def test_first_order_pieces_obey_the_product_rule(rng, piece, mode):
    truncation = Truncation(2, 2, 3)
    for _ in range(3):
        f = random_model_series(rng, piece.model, mode, truncation, n_terms=2)
        g = random_model_series(rng, piece.model, mode, truncation, n_terms=2)
        expected = apply_piece(piece, f, mode) * g + f * apply_piece(piece, g, mode)
        assert apply_piece(piece, f * g, mode) == expected


@pytest.mark.parametrize("model", list(Model))
@pytest.mark.parametrize("mode", list(Mode))
def test_evolution_is_linear_in_the_initial_condition(rng, model, mode):
    truncation = Truncation(2, 2, 3)
    op = assemble_operator(model, mode)
    z1 = random_model_series(rng, model, mode, truncation)
    z2 = random_model_series(rng, model, mode, truncation)
    a = Fraction(int(rng.integers(1, 7)), int(rng.integers(1, 4)))
    assert evolve(op, z1.scale(a) + z2, 2) == evolve(op, z1, 2).scale(a) + evolve(op, z2, 2)


@pytest.mark.parametrize("model", list(Model))
@pytest.mark.parametrize("mode", list(Mode))
def test_evolving_twice_doubles_the_time(model, mode):
    op = assemble_operator(model, mode)
    z = evolve(op, initial_condition(model, mode, 2, max_sites=2, m_max=3), 2)
    doubled = GradedSeries(z.truncation, {mono: coeff * 2**mono.y for mono, coeff in z.terms.items()})
    assert evolve(op, z, 2) == doubled
