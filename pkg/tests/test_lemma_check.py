"""
Finite-difference checks of the Miwa-derivative identities
"""

import numpy as np
import pytest

from src.core.exceptions import InvalidArgumentError
from src.cutjoin.operators import Model
from src.diagrams.core import Mode, Symmetry
from src.lemmas.check import (
    ExternalMatrices,
    LemmaKind,
    MiwaTimes,
    check_lemma,
    lemma_sides,
    miwa_eval,
    random_matrices,
    random_test_polynomial,
    relative_error,
)
from src.series.ring import Var, VarKind, polynomial


def test_lemma_kind_properties():
    assert LemmaKind.LP_NON_ORIENTED.model == Model.LENGTH_AND_POINT
    assert LemmaKind.LP_NON_ORIENTED.orientation == Mode.NON_ORIENTED
    assert LemmaKind.POINT_ORIENTED.model == Model.POINT


def test_miwa_eval_identities():
    n = 3
    times = miwa_eval(ExternalMatrices(np.eye(n), np.eye(n)), Model.LENGTH_AND_POINT)
    assert times[Var.u((1, 0, 2))] == pytest.approx(1.0)
    point = miwa_eval(ExternalMatrices(np.eye(n), np.eye(n)), Model.POINT)
    assert point[Var.t(3)] == pytest.approx(1.0)
    length = miwa_eval(ExternalMatrices(np.zeros((n, n)), 2.0 * np.eye(n)), Model.LENGTH)
    assert [length[Var.q(i)] for i in (1, 2, 3)] == pytest.approx([0.5, 0.25, 0.125])


def test_miwa_eval_rejects_singular_lambda_l():
    with pytest.raises(InvalidArgumentError):
        miwa_eval(ExternalMatrices(np.eye(2), np.zeros((2, 2))), Model.LENGTH)


def test_reversed_tuples_agree_for_symmetric_matrices(rng):
    matrices = random_matrices(rng, 4, Mode.NON_ORIENTED)
    times = MiwaTimes(matrices.lambda_p, matrices.lambda_l_inverse())
    forward, backward = Var(VarKind.U, (0, 1, 2)), Var(VarKind.U, (2, 1, 0))
    assert times[forward] == pytest.approx(times[backward], abs=1e-12)


def test_random_matrices_are_well_conditioned(rng):
    for orientation in Mode:
        matrices = random_matrices(rng, 4, orientation)
        assert np.linalg.cond(matrices.lambda_l) <= 50
        if orientation == Mode.NON_ORIENTED:
            assert np.allclose(matrices.lambda_p, matrices.lambda_p.T)


def test_second_derivative_of_t2(rng):
    f = polynomial([(1, {Var.t(2): 1})])
    matrices = random_matrices(rng, 4, Mode.ORIENTED)
    lhs, rhs = lemma_sides(f, matrices, LemmaKind.POINT_ORIENTED)
    assert rhs == pytest.approx(1.0)
    assert lhs == pytest.approx(1.0, rel=1e-6)


def test_constant_polynomial_gives_zero(rng):
    f = polynomial([(3, {})])
    for kind in LemmaKind:
        lhs, rhs = lemma_sides(f, random_matrices(rng, 3, kind.orientation), kind)
        assert lhs == 0.0 and rhs == 0.0


def test_u1_squared_length_and_point(rng):
    f = polynomial([(1, {Var.u((1,)): 2})])
    lhs, rhs = lemma_sides(f, random_matrices(rng, 4, Mode.ORIENTED), LemmaKind.LP_ORIENTED)
    assert relative_error(lhs, rhs) < 1e-6


def test_random_test_polynomial_uses_model_variables(rng):
    f = random_test_polynomial(rng, Model.LENGTH_AND_POINT, Mode.NON_ORIENTED)
    for mono in f.terms:
        for var, _ in mono.variables:
            assert var.index == Var.u(var.index, Symmetry.BRACELET).index
            assert sum(var.index) + len(var.index) <= 4


@pytest.mark.parametrize("kind", list(LemmaKind))
@pytest.mark.parametrize("n", [3, 4])
def test_every_identity_holds(kind, n):
    report = check_lemma(kind, n=n, trials=20, tol=1e-6, seed=7)
    assert report.passed, report.to_dict()
    assert report.max_rel_err < 1e-6


def quintic_test_polynomial(kind):
    """Two traces carrying five powers of the matrix the identity differentiates"""
    if kind.model == Model.POINT:
        variables = {Var.t(3): 1, Var.t(2): 1}
    elif kind.model == Model.LENGTH:
        variables = {Var.q(3): 1, Var.q(2): 1}
    else:
        symmetry = Symmetry.BRACELET if kind.orientation == Mode.NON_ORIENTED else Symmetry.NECKLACE
        variables = {Var.u((1, 2), symmetry): 1, Var.u((2,), symmetry): 1}
    return polynomial([(1, variables)])


@pytest.mark.parametrize("kind", list(LemmaKind))
def test_step_halving_reduces_the_error(rng, kind):
    matrices = random_matrices(rng, 4, kind.orientation)
    f = quintic_test_polynomial(kind)
    errors = []
    for h in (1e-2, 5e-3):
        lhs, rhs = lemma_sides(f, matrices, kind, h=h)
        errors.append(abs(lhs - rhs))
    assert 3.0 < errors[0] / errors[1] < 5.0


def test_check_lemma_validates_arguments():
    with pytest.raises(InvalidArgumentError):
        check_lemma(LemmaKind.POINT_ORIENTED, n=1)
    with pytest.raises(InvalidArgumentError):
        check_lemma(LemmaKind.POINT_ORIENTED, trials=0)


@pytest.mark.parametrize(
    "variables",
    [
        {(0, 2): 1, (1, 1): 1},
        {(0, 0): 1, (0, 2): 1, (2,): 1},
        {(1, 2): 1, (0, 1): 1},
    ],
)
def test_non_oriented_length_and_point_identity_on_mixed_products(rng, variables):
    f = polynomial([(1, {Var.u(entries, Symmetry.BRACELET): power for entries, power in variables.items()})])
    lhs, rhs = lemma_sides(f, random_matrices(rng, 4, Mode.NON_ORIENTED), LemmaKind.LP_NON_ORIENTED)
    assert relative_error(lhs, rhs) < 1e-6
