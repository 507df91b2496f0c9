"""
Finite-difference checks of the Miwa-derivative identities

The contracted second derivative of F(X) = f(miwa(X)) with respect to an
external matrix is compared with the cut-and-join operator applied to f and
evaluated at the same Miwa times.
"""

import logging
from collections.abc import Mapping
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional

import numpy as np

from src.core.exceptions import InvalidArgumentError
from src.cutjoin.operators import Model, assemble_operator
from src.diagrams.core import Mode, Symmetry, symmetry_for
from src.series.ring import GradedSeries, Var, VarKind, evaluate, polynomial

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-4
MAX_CONDITION = 50.0


class LemmaKind(Enum):
    POINT_ORIENTED = "point-oriented"
    LENGTH_ORIENTED = "length-oriented"
    LP_ORIENTED = "lp-oriented"
    POINT_NON_ORIENTED = "point-nonoriented"
    LENGTH_NON_ORIENTED = "length-nonoriented"
    LP_NON_ORIENTED = "lp-nonoriented"

    @property
    def model(self) -> Model:
        return Model(self.value.split("-")[0])

    @property
    def orientation(self) -> Mode:
        return Mode(self.value.split("-")[1])


@dataclass
class ExternalMatrices:
    """Lambda_P and Lambda_L (or Omega_P and Omega_L in the non-oriented checks)"""

    lambda_p: np.ndarray
    lambda_l: np.ndarray

    @property
    def n(self) -> int:
        return self.lambda_p.shape[0]

    def lambda_l_inverse(self) -> np.ndarray:
        return _inverse(self.lambda_l)


def _inverse(matrix: np.ndarray) -> np.ndarray:
    try:
        inverse = np.linalg.inv(matrix)
    except np.linalg.LinAlgError as e:
        raise InvalidArgumentError(f"Lambda_L is singular: {e}") from e
    if not np.all(np.isfinite(inverse)):
        raise InvalidArgumentError("Lambda_L is numerically singular")
    return inverse


class MiwaTimes(Mapping):
    """Lazy map Var -> normalized trace; r/t read P, q reads Q, u reads the mixed word"""

    def __init__(self, p: np.ndarray, q: np.ndarray):
        self._p = p
        self._q = q
        self._n = p.shape[0]
        self._values: Dict[Var, float] = {}
        self._p_powers: Dict[int, np.ndarray] = {0: np.eye(self._n)}

    def _p_power(self, i: int) -> np.ndarray:
        if i not in self._p_powers:
            self._p_powers[i] = self._p_power(i - 1) @ self._p
        return self._p_powers[i]

    def _compute(self, var: Var) -> float:
        if var.kind in (VarKind.T, VarKind.R):
            return float(np.trace(self._p_power(var.i))) / self._n
        if var.kind == VarKind.Q:
            return float(np.trace(np.linalg.matrix_power(self._q, var.i))) / self._n
        word = np.eye(self._n)
        for i in var.index:
            word = word @ self._p_power(i) @ self._q
        return float(np.trace(word)) / self._n

    def __getitem__(self, var: Var) -> float:
        if var not in self._values:
            self._values[var] = self._compute(var)
        return self._values[var]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)


def miwa_eval(matrices: ExternalMatrices, kind: Model) -> MiwaTimes:
    n = matrices.n
    if kind == Model.POINT:
        return MiwaTimes(matrices.lambda_p, np.eye(n))
    if kind == Model.LENGTH:
        return MiwaTimes(np.zeros((n, n)), matrices.lambda_l_inverse())
    return MiwaTimes(matrices.lambda_p, matrices.lambda_l_inverse())


def _objective(f: GradedSeries, matrices: ExternalMatrices, kind: LemmaKind):
    """(base point, F) for the matrix the identity differentiates"""
    model, symmetric = kind.model, kind.orientation == Mode.NON_ORIENTED

    def lift(x: np.ndarray) -> np.ndarray:
        return x + x.T if symmetric else x

    def value(x: np.ndarray) -> float:
        if model == Model.POINT:
            times = MiwaTimes(lift(x), np.eye(matrices.n))
        elif model == Model.LENGTH:
            times = MiwaTimes(np.zeros_like(x), _inverse(lift(x)))
        else:
            times = MiwaTimes(lift(x), matrices.lambda_l_inverse())
        return evaluate(f, times, x=1.0)

    base = matrices.lambda_l if model == Model.LENGTH else matrices.lambda_p
    if symmetric:
        base = base / 2.0
    return base, value


def _kernel(matrices: ExternalMatrices, kind: LemmaKind) -> np.ndarray:
    """Symmetrized K[(b,c),(d,a)] = Q_ba Q_dc as an N^2 x N^2 matrix"""
    n = matrices.n
    q = matrices.lambda_l_inverse() if kind.model == Model.LENGTH_AND_POINT else np.eye(n)
    k = np.einsum("ba,dc->bcda", q, q).reshape(n * n, n * n)
    return (k + k.T) / 2.0


def fd_contracted_second_derivative(
    f: GradedSeries,
    matrices: ExternalMatrices,
    kind: LemmaKind,
    h: float = DEFAULT_STEP,
) -> float:
    """sum Q_ba Q_dc d^2F/dX_bc dX_da by central second differences along kernel eigenvectors"""
    base, value = _objective(f, matrices, kind)
    n = matrices.n
    eigenvalues, eigenvectors = np.linalg.eigh(_kernel(matrices, kind))
    f0 = value(base)
    total = 0.0
    for weight, direction in zip(eigenvalues, eigenvectors.T):
        if abs(weight) < 1e-14:
            continue
        v = direction.reshape(n, n)
        second = (value(base + h * v) - 2.0 * f0 + value(base - h * v)) / (h * h)
        total += weight * second
    if not np.isfinite(total):
        raise InvalidArgumentError(f"Finite difference is not finite with step h={h}")
    return float(total)


def lemma_sides(
    f: GradedSeries,
    matrices: ExternalMatrices,
    kind: LemmaKind,
    h: float = DEFAULT_STEP,
) -> tuple:
    """(matrix-derivative side, operator side) of one identity"""
    n = matrices.n
    prefactor = 1.0 / (2 * n) if kind.orientation == Mode.ORIENTED else 1.0 / (4 * n)
    lhs = prefactor * fd_contracted_second_derivative(f, matrices, kind, h)
    operator = assemble_operator(kind.model, kind.orientation)
    rhs = evaluate(operator(f), miwa_eval(matrices, kind.model), x=1.0 / n)
    return lhs, rhs


def relative_error(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def random_matrices(rng: np.random.Generator, n: int, orientation: Mode) -> ExternalMatrices:
    """Entries in [-1, 1]; Lambda_L = I + 0.3 R redrawn until well conditioned; symmetrized when non-oriented"""
    while True:
        p = rng.uniform(-1.0, 1.0, size=(n, n))
        l = np.eye(n) + 0.3 * rng.uniform(-1.0, 1.0, size=(n, n))  # noqa: E741
        if orientation == Mode.NON_ORIENTED:
            p, l = (p + p.T) / 2.0, (l + l.T) / 2.0  # noqa: E741
        if np.linalg.cond(l) <= MAX_CONDITION:
            return ExternalMatrices(p, l)


def _random_variable(rng: np.random.Generator, model: Model, symmetry: Symmetry, max_index: int) -> Var:
    if model == Model.POINT:
        return Var.t(int(rng.integers(1, max_index + 1)))
    if model == Model.LENGTH:
        return Var.q(int(rng.integers(1, max_index + 1)))
    while True:
        entries = [int(i) for i in rng.integers(0, 3, size=int(rng.integers(1, 3)))]
        if sum(entries) + len(entries) <= max_index:
            return Var.u(entries, symmetry)


def random_test_polynomial(
    rng: np.random.Generator,
    model: Model,
    orientation: Mode,
    max_terms: int = 3,
    max_degree: int = 3,
    max_index: int = 4,
) -> GradedSeries:
    """Sparse polynomial with small integer coefficients in the model's variables"""
    symmetry = symmetry_for(orientation)
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        variables: Dict[Var, int] = {}
        for _ in range(int(rng.integers(1, max_degree + 1))):
            var = _random_variable(rng, model, symmetry, max_index)
            variables[var] = variables.get(var, 0) + 1
        value = int(rng.choice([-2, -1, 1, 2]))
        terms.append((value, variables))
    return polynomial(terms)


@dataclass
class LemmaReport:
    which: str
    n: int
    trials: int
    tol: float
    max_rel_err: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def check_lemma(
    which: LemmaKind,
    n: int = 4,
    trials: int = 20,
    tol: float = 1e-6,
    seed: int = 7,
    h: float = DEFAULT_STEP,
    polynomial_factory: Optional[Callable[[np.random.Generator], GradedSeries]] = None,
) -> LemmaReport:
    """Random well-conditioned matrices and random test polynomials; failures are reported, never raised"""
    if n < 2 or trials < 1:
        raise InvalidArgumentError(f"Need N >= 2 and trials >= 1, got N={n}, trials={trials}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for trial in range(trials):
        matrices = random_matrices(rng, n, which.orientation)
        if polynomial_factory is None:
            f = random_test_polynomial(rng, which.model, which.orientation)
        else:
            f = polynomial_factory(rng)
        lhs, rhs = lemma_sides(f, matrices, which, h)
        error = relative_error(lhs, rhs)
        logger.debug("%s trial %d: lhs=%.12g rhs=%.12g rel_err=%.3g", which.value, trial, lhs, rhs, error)
        worst = max(worst, error)
    passed = worst < tol
    logger.info("%s N=%d: max relative error %.3g (%s)", which.value, n, worst, "PASS" if passed else "FAIL")
    return LemmaReport(which.value, n, trials, tol, worst, passed)


def check_all(n: int = 4, trials: int = 20, tol: float = 1e-6, seed: int = 7) -> List[LemmaReport]:
    return [check_lemma(kind, n, trials, tol, seed) for kind in LemmaKind]
