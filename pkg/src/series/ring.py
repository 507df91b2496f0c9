"""
Exact truncated formal series
Coefficients are Laurent polynomials in x = 1/N over the rationals; monomials
carry a y grading, backbone couplings s_i and spectrum variables u/t/q/r.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from src.core.exceptions import InvalidArgumentError, SeriesError, TruncationMismatchError
from src.diagrams.core import Mode, Symmetry, canonical_entries

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

# s-key of the length-model coupling after s_i -> s
UNIFORM_S = -1


class VarKind(str, Enum):
    U = "u"
    T = "t"
    Q = "q"
    R = "r"


@dataclass(frozen=True, order=True)
class Var:
    kind: VarKind
    index: Tuple[int, ...]

    @classmethod
    def u(cls, entries: Sequence[int], symmetry: Symmetry = Symmetry.NECKLACE) -> "Var":
        return cls(VarKind.U, canonical_entries(entries, symmetry))

    @classmethod
    def t(cls, i: int) -> "Var":
        return cls(VarKind.T, (i,))

    @classmethod
    def q(cls, i: int) -> "Var":
        return cls(VarKind.Q, (i,))

    @classmethod
    def r(cls, i: int) -> "Var":
        return cls(VarKind.R, (i,))

    @property
    def i(self) -> int:
        return self.index[0]

    def __str__(self) -> str:
        if self.kind == VarKind.U:
            return f"u_({','.join(map(str, self.index))})"
        return f"{self.kind.value}_{self.i}"


class LaurentCoeff:
    """Sparse map exponent-of-x -> rational; zero entries are never stored"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[int, Scalar]] = None):
        self._terms: Dict[int, Fraction] = {}
        for exponent, value in (terms or {}).items():
            value = Fraction(value)
            if value:
                self._terms[int(exponent)] = value

    @classmethod
    def _wrap(cls, terms: Dict[int, Fraction]) -> "LaurentCoeff":
        coeff = cls.__new__(cls)
        coeff._terms = terms
        return coeff

    @classmethod
    def monomial(cls, exponent: int = 0, value: Scalar = 1) -> "LaurentCoeff":
        return cls({exponent: value})

    def items(self):
        return sorted(self._terms.items())

    def __getitem__(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentCoeff):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.items()))

    def __add__(self, other: "LaurentCoeff") -> "LaurentCoeff":
        terms = dict(self._terms)
        for exponent, value in other._terms.items():
            total = terms.get(exponent, 0) + value
            if total:
                terms[exponent] = total
            else:
                terms.pop(exponent, None)
        return LaurentCoeff._wrap(terms)

    def __neg__(self) -> "LaurentCoeff":
        return LaurentCoeff._wrap({e: -v for e, v in self._terms.items()})

    def __sub__(self, other: "LaurentCoeff") -> "LaurentCoeff":
        return self + (-other)

    def __mul__(self, other: Union["LaurentCoeff", Scalar]) -> "LaurentCoeff":
        if not isinstance(other, LaurentCoeff):
            other = Fraction(other)
            if not other:
                return LaurentCoeff()
            return LaurentCoeff._wrap({e: v * other for e, v in self._terms.items()})
        terms: Dict[int, Fraction] = {}
        for ea, va in self._terms.items():
            for eb, vb in other._terms.items():
                terms[ea + eb] = terms.get(ea + eb, 0) + va * vb
        return LaurentCoeff._wrap({e: v for e, v in terms.items() if v})

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentCoeff":
        """Multiply by x^k"""
        return LaurentCoeff._wrap({e + k: v for e, v in self._terms.items()})

    def evaluate(self, x: float) -> float:
        return sum(float(v) * x ** e for e, v in self._terms.items())

    def at_one(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{v}*x^{e}" if e else f"{v}" for e, v in self.items())


def _merge(a: Tuple[tuple, ...], b: Tuple[tuple, ...]) -> Tuple[tuple, ...]:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for key, exponent in b:
        merged[key] = merged.get(key, 0) + exponent
    return tuple(sorted(merged.items()))


@dataclass(frozen=True, order=True)
class Monomial:
    """y^y * prod s_i^{b_i} * prod var^{e}; maps are sorted (key, exponent) pairs with exponent >= 1"""

    y: int = 0
    s: Tuple[Tuple[int, int], ...] = ()
    variables: Tuple[Tuple[Var, int], ...] = ()

    @classmethod
    def build(
        cls,
        y: int = 0,
        s: Optional[Mapping[int, int]] = None,
        variables: Optional[Mapping[Var, int]] = None,
    ) -> "Monomial":
        if y < 0:
            raise InvalidArgumentError(f"y power must be non-negative, got {y}")
        s_pairs = tuple(sorted((i, e) for i, e in (s or {}).items() if e))
        var_pairs = tuple(sorted((v, e) for v, e in (variables or {}).items() if e))
        if any(e < 0 for _, e in s_pairs + var_pairs):
            raise InvalidArgumentError("Monomial exponents must be non-negative")
        return cls(y, s_pairs, var_pairs)

    @property
    def b(self) -> int:
        return sum(e for _, e in self.s)

    @property
    def sites(self) -> int:
        return sum(i * e for i, e in self.s if i > 0)

    def s_dict(self) -> Dict[int, int]:
        return dict(self.s)

    def var_dict(self) -> Dict[Var, int]:
        return dict(self.variables)

    def times(self, other: "Monomial") -> "Monomial":
        return Monomial(self.y + other.y, _merge(self.s, other.s), _merge(self.variables, other.variables))

    def with_y(self, y: int) -> "Monomial":
        return Monomial(y, self.s, self.variables)

    def with_variables(self, variables: Mapping[Var, int]) -> "Monomial":
        return Monomial(self.y, self.s, tuple(sorted((v, e) for v, e in variables.items() if e)))

    def __str__(self) -> str:
        parts = [f"y^{self.y}"] if self.y else []
        parts += [f"s_{i}^{e}" if e > 1 else f"s_{i}" for i, e in self.s]
        parts += [f"{v}^{e}" if e > 1 else str(v) for v, e in self.variables]
        return "*".join(parts) or "1"


ONE = Monomial()


@dataclass(frozen=True)
class Truncation:
    """Keep terms with y <= y_max, total s-degree <= b_max and (optionally) sum i*b_i <= m_max"""

    y_max: int
    b_max: int
    m_max: Optional[int] = None

    def admits(self, monomial: Monomial) -> bool:
        if monomial.y > self.y_max or monomial.b > self.b_max:
            return False
        return self.m_max is None or monomial.sites <= self.m_max


class GradedSeries:
    """Immutable truncated series: map Monomial -> LaurentCoeff"""

    __slots__ = ("truncation", "_terms")

    def __init__(self, truncation: Truncation, terms: Optional[Mapping[Monomial, LaurentCoeff]] = None):
        self.truncation = truncation
        self._terms: Dict[Monomial, LaurentCoeff] = {
            mono: coeff for mono, coeff in (terms or {}).items() if coeff and truncation.admits(mono)
        }

    @classmethod
    def zero(cls, truncation: Truncation) -> "GradedSeries":
        return cls(truncation)

    @classmethod
    def one(cls, truncation: Truncation) -> "GradedSeries":
        return cls(truncation, {ONE: LaurentCoeff.monomial(0)})

    @classmethod
    def term(cls, truncation: Truncation, monomial: Monomial, coeff: LaurentCoeff) -> "GradedSeries":
        return cls(truncation, {monomial: coeff})

    @property
    def terms(self) -> Dict[Monomial, LaurentCoeff]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, LaurentCoeff]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __getitem__(self, monomial: Monomial) -> LaurentCoeff:
        return self._terms.get(monomial, LaurentCoeff())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms))

    def constant_term(self) -> LaurentCoeff:
        return self[ONE]

    def _check(self, other: "GradedSeries") -> None:
        if self.truncation != other.truncation:
            raise TruncationMismatchError(f"Truncation mismatch: {self.truncation} vs {other.truncation}")

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        self._check(other)
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            total = terms[mono] + coeff if mono in terms else coeff
            if total:
                terms[mono] = total
            else:
                terms.pop(mono, None)
        return GradedSeries(self.truncation, terms)

    def __neg__(self) -> "GradedSeries":
        return GradedSeries(self.truncation, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "GradedSeries") -> "GradedSeries":
        return self + (-other)

    def __mul__(self, other: Union["GradedSeries", Scalar]) -> "GradedSeries":
        if not isinstance(other, GradedSeries):
            return self.scale(other)
        self._check(other)
        trunc = self.truncation
        terms: Dict[Monomial, LaurentCoeff] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                if ma.y + mb.y > trunc.y_max or ma.b + mb.b > trunc.b_max:
                    continue
                mono = ma.times(mb)
                if not trunc.admits(mono):
                    continue
                product = ca * cb
                terms[mono] = terms[mono] + product if mono in terms else product
        return GradedSeries(trunc, terms)

    __rmul__ = __mul__

    def scale(self, factor: Union[Scalar, LaurentCoeff]) -> "GradedSeries":
        return GradedSeries(self.truncation, {m: c * factor for m, c in self._terms.items()})

    def shift_x(self, k: int) -> "GradedSeries":
        return GradedSeries(self.truncation, {m: c.shift(k) for m, c in self._terms.items()})

    def with_truncation(self, truncation: Truncation) -> "GradedSeries":
        return GradedSeries(truncation, self._terms)

    def filter(self, predicate: Callable[[Monomial], bool]) -> "GradedSeries":
        return GradedSeries(self.truncation, {m: c for m, c in self._terms.items() if predicate(m)})

    def map_monomials(self, fn: Callable[[Monomial], Optional[Monomial]]) -> "GradedSeries":
        """Apply a monomial substitution; None annihilates the term"""
        terms: Dict[Monomial, LaurentCoeff] = {}
        for mono, coeff in self._terms.items():
            image = fn(mono)
            if image is None:
                continue
            terms[image] = terms[image] + coeff if image in terms else coeff
        return GradedSeries(self.truncation, terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "GradedSeries(0)"
        return "GradedSeries(" + " + ".join(f"({c})*{m}" for m, c in self.items()) + ")"


def add(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    return a + b


def mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    return a * b


def _nilpotent_part(f: GradedSeries, operation: str) -> None:
    for mono in f.terms:
        if mono != ONE and mono.y == 0 and mono.b == 0:
            raise SeriesError(f"{operation} failed: term {mono} is not nilpotent under the truncation")


def exp_truncated(f: GradedSeries) -> GradedSeries:
    if f.constant_term():
        raise SeriesError(f"exp failed: constant term {f.constant_term()} must be zero")
    _nilpotent_part(f, "exp")
    result = GradedSeries.one(f.truncation)
    power = GradedSeries.one(f.truncation)
    n = 0
    while True:
        n += 1
        power = (power * f).scale(Fraction(1, n))
        if not power:
            logger.debug("exp series stabilised after %d powers (%d terms)", n - 1, len(result))
            break
        result = result + power
    return result


def log_truncated(g: GradedSeries) -> GradedSeries:
    if g.constant_term() != LaurentCoeff.monomial(0):
        raise SeriesError(f"log failed: constant term {g.constant_term()} must be 1")
    h = g - GradedSeries.one(g.truncation)
    _nilpotent_part(h, "log")
    result = GradedSeries.zero(g.truncation)
    power = GradedSeries.one(g.truncation)
    n = 0
    while True:
        n += 1
        power = power * h
        if not power:
            break
        result = result + power.scale(Fraction((-1) ** (n + 1), n))
    return result


@dataclass(frozen=True)
class Selector:
    """Coefficient address: x^{2g-2} (or x^{h-2}) y^k prod s_i^{b_i} prod var^{e}"""

    euler_genus: int
    k: int
    backbones: Tuple[Tuple[int, int], ...]
    spectrum: Tuple[Tuple[Var, int], ...] = ()
    mode: Mode = Mode.ORIENTED

    @classmethod
    def build(
        cls,
        euler_genus: int,
        k: int,
        backbones: Mapping[int, int],
        spectrum: Optional[Mapping[Var, int]] = None,
        mode: Mode = Mode.ORIENTED,
    ) -> "Selector":
        mono = Monomial.build(k, backbones, spectrum)
        return cls(euler_genus, k, mono.s, mono.variables, mode)

    @property
    def x_exponent(self) -> int:
        if self.mode == Mode.ORIENTED:
            return 2 * self.euler_genus - 2
        return self.euler_genus - 2

    @property
    def monomial(self) -> Monomial:
        return Monomial(self.k, self.backbones, self.spectrum)

    @property
    def b(self) -> int:
        return sum(e for _, e in self.backbones)

    def __str__(self) -> str:
        label = "g" if self.mode == Mode.ORIENTED else "h"
        return f"{{{label}={self.euler_genus}, k={self.k}, {self.monomial}}}"


def coefficient(series: GradedSeries, selector: Selector) -> Fraction:
    return series[selector.monomial][selector.x_exponent]


def _project_point_monomial(mono: Monomial) -> Monomial:
    counts: Counter = Counter()
    for var, e in mono.variables:
        if var.kind == VarKind.U:
            total = sum(var.index)
            if total:
                counts[Var.t(total)] += e
        else:
            counts[var] += e
    return mono.with_variables(counts)


def _project_length_monomial(mono: Monomial) -> Optional[Monomial]:
    counts: Counter = Counter()
    for var, e in mono.variables:
        if var.kind == VarKind.U:
            if any(var.index):
                return None
            counts[Var.q(len(var.index))] += e
        else:
            counts[var] += e
    return mono.with_variables(counts)


def project_point(series: GradedSeries) -> GradedSeries:
    """u_(i_1..i_K) -> t_{i_1+..+i_K}, with t_0 = 1"""
    return series.map_monomials(_project_point_monomial)


def project_length(series: GradedSeries) -> GradedSeries:
    """u_(0,..,0) of length K -> q_K; any u with a marked point -> 0"""
    return series.map_monomials(_project_length_monomial)


def specialize_uniform_s(series: GradedSeries) -> GradedSeries:
    """s_i -> s for every i; the result records s under the key UNIFORM_S"""
    trunc = series.truncation
    specialized = Truncation(trunc.y_max, trunc.b_max)

    def collapse(mono: Monomial) -> Monomial:
        b = mono.b
        return Monomial(mono.y, ((UNIFORM_S, b),) if b else (), mono.variables)

    return series.map_monomials(collapse).with_truncation(specialized)


def evaluate(
    series: GradedSeries,
    values: Mapping[Var, float],
    x: float,
    s: Optional[Mapping[int, float]] = None,
    y: float = 1.0,
) -> float:
    """Numeric value of the series; missing s couplings default to 1"""
    s = s or {}
    total = 0.0
    for mono, coeff in series.terms.items():
        term = coeff.evaluate(x) * y ** mono.y
        for i, e in mono.s:
            term *= s.get(i, 1.0) ** e
        for var, e in mono.variables:
            term *= values[var] ** e
        total += term
    return total


def polynomial(terms: Iterable[Tuple[Scalar, Mapping[Var, int]]], truncation: Optional[Truncation] = None) -> GradedSeries:
    """Series in spectrum variables only (y = 0, no couplings)"""
    truncation = truncation or Truncation(0, 0)
    series = GradedSeries.zero(truncation)
    for value, variables in terms:
        series = series + GradedSeries.term(truncation, Monomial.build(0, None, variables), LaurentCoeff.monomial(0, value))
    return series
