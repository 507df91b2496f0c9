"""
Cut-and-join evolution
Initial conditions, Z = exp(y * op) Z(0) order by order, the same Z assembled
from exhaustive censuses, and connected-number extraction.
"""

import logging
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, Iterable, List, Optional, Tuple

from src.core.exceptions import ConsistencyError, InvalidArgumentError, MissingCensusError, ModelMismatchError
from src.cutjoin.operators import CutJoinOperator, Model, assemble_operator
from src.diagrams.core import Mode
from src.diagrams.enumerator import Census, EnumerationSpec, census, type_monomial
from src.series.ring import (
    UNIFORM_S,
    GradedSeries,
    LaurentCoeff,
    Monomial,
    Selector,
    Truncation,
    Var,
    VarKind,
    coefficient,
    exp_truncated,
    log_truncated,
    project_length,
    specialize_uniform_s,
)

logger = logging.getLogger(__name__)


def initial_condition(
    model: Model,
    orientation: Mode,
    b_max: int,
    max_sites: int = 6,
    m_max: Optional[int] = None,
    y_max: int = 0,
) -> GradedSeries:
    """exp(x^{-2} sum_i s_i v_i) with v_i = u_(i), t_i (t_0 = 1) or, for the length model, exp(x^{-2} s q_1)"""
    if b_max < 1:
        raise InvalidArgumentError(f"b_max must be >= 1, got {b_max}")
    if model == Model.LENGTH:
        truncation = Truncation(y_max, b_max)
        generators = [Monomial.build(0, {UNIFORM_S: 1}, {Var.q(1): 1})]
    else:
        truncation = Truncation(y_max, b_max, m_max)
        generators = []
        for i in range(max_sites + 1):
            if model == Model.LENGTH_AND_POINT:
                variables = {Var(VarKind.U, (i,)): 1}
            else:
                variables = {Var.t(i): 1} if i else {}
            generators.append(Monomial.build(0, {i: 1}, variables))
    exponent = GradedSeries(truncation, {mono: LaurentCoeff.monomial(-2) for mono in generators})
    logger.debug("initial condition for %s/%s with %d generators", model.value, orientation.value, len(generators))
    return exp_truncated(exponent)


def evolve(op: CutJoinOperator, init: GradedSeries, y_max: int) -> GradedSeries:
    """sum_{k<=y_max} y^k/k! op^k(init), computed as Z_k = y op(Z_{k-1}) / k"""
    trunc = init.truncation
    truncation = Truncation(y_max, trunc.b_max, trunc.m_max)
    result = init.with_truncation(truncation)
    term = result
    for k in range(1, y_max + 1):
        term = op(term).map_monomials(lambda m: m.with_y(m.y + 1)).scale(Fraction(1, k))
        result = result + term
        logger.info("evolution order %d: %d new terms, %d total", k, len(term), len(result))
    return result


def required_blocks(truncation: Truncation, max_sites: int) -> List[Tuple[int, ...]]:
    """Sorted backbone-length multisets that contribute to Z within the truncation"""
    blocks = []
    for b in range(1, truncation.b_max + 1):
        for lengths in combinations_with_replacement(range(max_sites + 1), b):
            if truncation.m_max is None or sum(lengths) <= truncation.m_max:
                blocks.append(lengths)
    return blocks


def _symmetry_factor(lengths: Iterable[int]) -> int:
    counts: Dict[int, int] = {}
    for i in lengths:
        counts[i] = counts.get(i, 0) + 1
    result = 1
    for count in counts.values():
        result *= factorial(count)
    return result


def assemble_Z_from_census(
    censuses: Iterable[Census],
    truncation: Truncation,
    max_sites: Optional[int] = None,
) -> GradedSeries:
    """Z = 1 + sum over blocks of prod s_i^{b_i}/b_i! times the block's Gaussian average"""
    by_block: Dict[Tuple[int, ...], Census] = {}
    for block_census in censuses:
        spec = block_census.spec
        if spec.chords is not None or spec.connected_only:
            raise InvalidArgumentError(f"Census of {list(spec.backbone_lengths)} must cover every k and every diagram")
        by_block[tuple(sorted(spec.backbone_lengths))] = block_census
    if max_sites is None:
        max_sites = max((max(block, default=0) for block in by_block), default=0)
    missing = [block for block in required_blocks(truncation, max_sites) if block not in by_block]
    if missing:
        raise MissingCensusError(f"Missing census blocks: {missing[:5]}{'...' if len(missing) > 5 else ''}")
    terms: Dict[Monomial, LaurentCoeff] = {Monomial(): LaurentCoeff.monomial(0)}
    for block in required_blocks(truncation, max_sites):
        weight = Fraction(1, _symmetry_factor(block))
        s = {}
        for i in block:
            s[i] = s.get(i, 0) + 1
        for t, count in by_block[block].entries.items():
            if t.k > truncation.y_max:
                continue
            mono = type_monomial(t, s)
            coeff = LaurentCoeff.monomial(t.x_exponent, weight * count)
            terms[mono] = terms[mono] + coeff if mono in terms else coeff
    return GradedSeries(truncation, terms)


def census_Z(mode: Mode, truncation: Truncation, max_sites: int, threads: int = 1) -> GradedSeries:
    """Enumerate every required block and assemble Z"""
    blocks = required_blocks(truncation, max_sites)
    logger.info("enumerating %d census blocks (%s)", len(blocks), mode.value)
    censuses = [census(EnumerationSpec(block, None, mode), threads=threads) for block in blocks]
    return assemble_Z_from_census(censuses, truncation, max_sites)


def connected_numbers(Z: GradedSeries, selector: Selector) -> Fraction:
    """b! times the coefficient of log Z"""
    return factorial(selector.b) * coefficient(log_truncated(Z), selector)


def restore_t0(series: GradedSeries) -> GradedSeries:
    """Re-insert t_0 in a point-model series: n_0 = -e - b + k - sum_{i>=1} n_i for x^e y^k"""
    terms: Dict[Monomial, LaurentCoeff] = {}
    for mono, coeff in series.terms.items():
        counts = mono.var_dict()
        if any(var.kind != VarKind.T for var in counts):
            raise ModelMismatchError(f"restore_t0 needs a point-model series, found {mono}")
        marked = sum(e for var, e in counts.items() if var.i > 0)
        for e, value in coeff.items():
            n0 = -e - mono.b + mono.y - marked
            if n0 < 0:
                raise ConsistencyError(f"Term {mono} at x^{e} has a negative boundary count")
            restored = dict(counts)
            restored[Var.t(0)] = restored.get(Var.t(0), 0) + n0
            image = mono.with_variables(restored)
            piece = LaurentCoeff.monomial(e, value)
            terms[image] = terms[image] + piece if image in terms else piece
    return GradedSeries(series.truncation, terms)


def one_backbone_series(model: Model, orientation: Mode, y_max: int, max_sites: int = 6) -> GradedSeries:
    """The part of Z linear in the couplings: evolution of x^{-2} sum_i s_i v_i"""
    init = initial_condition(model, orientation, b_max=1, max_sites=max_sites)
    evolved = evolve(assemble_operator(model, orientation), init, y_max)
    return evolved.filter(lambda m: m.b == 1)


def project_to_length_model(series: GradedSeries) -> GradedSeries:
    """Length-and-point series -> length-model series (Lambda_P = 0, then s_i -> s)"""
    return specialize_uniform_s(project_length(series))
