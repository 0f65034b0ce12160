"""Sparse multivariate power series over the rationals, truncated at a total
degree cap.

A ``TruncPoly`` stands for an element of Q[t_1..t_n] / (t_1..t_n)^(cap+1).
Terms live in the sympy ring QQ[t_1..t_n, s] with every monomial t^m stored
as t^m s^|m|, so the ring-series routines truncating in s truncate by total
degree. Iteration and printing use graded lexicographic order with
t1 > t2 > ... > tn.
"""
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping, Optional, Sequence, Union

from sympy import QQ
from sympy.polys.ring_series import (
    rs_exp,
    rs_mul,
    rs_pow,
    rs_series_from_list,
    rs_series_inversion,
    rs_trunc,
)
from sympy.polys.rings import PolyElement, ring

from .base import DimensionError, DomainError, NonUnitError, NotDivisibleError
from .utils import as_rational, join_signed_terms

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

# bit budget for the constant term of a power; larger exact coefficients are
# rejected instead of computed
MAX_POWER_BITS = 1 << 16


@lru_cache(maxsize=None)
def graded_ring(num_vars: int):
    """(ring, (t_1, ..., t_n), s) with s counting total degree."""
    names = ",".join([*(f"t{i}" for i in range(1, num_vars + 1)), "s"])
    series_ring, *gens = ring(names, QQ)
    return series_ring, tuple(gens[:-1]), gens[-1]


def _to_qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def glex_key(mono: Monomial):
    return (sum(mono), tuple(-e for e in mono))


def render_monomial(mono: Monomial) -> str:
    factors = []
    for index, exponent in enumerate(mono, start=1):
        if exponent == 1:
            factors.append(f"t{index}")
        elif exponent > 1:
            factors.append(f"t{index}^{exponent}")
    return "*".join(factors)


class TruncPoly:
    """Immutable truncated series. Monomials above ``cap`` are discarded on
    construction; arithmetic between different caps is rejected."""

    __slots__ = ("num_vars", "cap", "_poly", "_hash")

    def __init__(
        self,
        num_vars: int,
        cap: int,
        terms: Optional[Mapping[Sequence[int], Scalar]] = None,
    ):
        if num_vars < 1:
            raise DimensionError(f"num_vars must be positive, got {num_vars}")
        if cap < 0:
            raise DimensionError(f"cap must be non-negative, got {cap}")
        clean: dict[Monomial, Fraction] = {}
        for mono, coef in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != num_vars:
                raise DimensionError(
                    f"monomial {mono} does not have {num_vars} exponents"
                )
            if any(e < 0 for e in mono):
                raise DomainError(f"negative exponent in {mono}")
            coef = as_rational(coef)
            if sum(mono) > cap:
                continue
            clean[mono] = clean.get(mono, Fraction(0)) + coef
        series_ring = graded_ring(num_vars)[0]
        self.num_vars = num_vars
        self.cap = cap
        self._poly = series_ring.from_dict(
            {(*mono, sum(mono)): _to_qq(coef) for mono, coef in clean.items() if coef}
        )
        self._hash = None

    @classmethod
    def _wrap(cls, num_vars: int, cap: int, poly: PolyElement) -> "TruncPoly":
        # poly already lives in graded_ring(num_vars) and below the cap
        obj = cls.__new__(cls)
        obj.num_vars = num_vars
        obj.cap = cap
        obj._poly = poly
        obj._hash = None
        return obj

    def _like(self, poly: PolyElement) -> "TruncPoly":
        return TruncPoly._wrap(self.num_vars, self.cap, poly)

    @property
    def _degree_var(self) -> PolyElement:
        return graded_ring(self.num_vars)[2]

    # constructors

    @classmethod
    def zero(cls, num_vars: int, cap: int) -> "TruncPoly":
        return cls(num_vars, cap)

    @classmethod
    def constant(cls, num_vars: int, cap: int, value: Scalar) -> "TruncPoly":
        return cls(num_vars, cap, {(0,) * num_vars: value})

    @classmethod
    def one(cls, num_vars: int, cap: int) -> "TruncPoly":
        return cls.constant(num_vars, cap, 1)

    @classmethod
    def variable(cls, num_vars: int, cap: int, index: int) -> "TruncPoly":
        """t_index, 1-based."""
        _check_index(num_vars, index)
        mono = [0] * num_vars
        mono[index - 1] = 1
        return cls(num_vars, cap, {tuple(mono): 1})

    @classmethod
    def linear_form(
        cls, coefficients: Sequence[Scalar], cap: int
    ) -> "TruncPoly":
        """sum_i coefficients[i-1] * t_i"""
        n = len(coefficients)
        terms = {}
        for i, coef in enumerate(coefficients):
            mono = [0] * n
            mono[i] = 1
            terms[tuple(mono)] = coef
        return cls(n, cap, terms)

    @classmethod
    def monomial(
        cls, num_vars: int, cap: int, exponents: Sequence[int], coef: Scalar = 1
    ) -> "TruncPoly":
        return cls(num_vars, cap, {tuple(exponents): coef})

    # inspection

    def items(self) -> list[tuple[Monomial, Fraction]]:
        """(monomial, coefficient) pairs in no particular order."""
        return [(mono[:-1], _to_fraction(coef)) for mono, coef in self._poly.items()]

    def terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.items(), key=lambda kv: glex_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._poly

    def __bool__(self):
        return bool(self._poly)

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.num_vars)

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        key = (*exponents, sum(exponents))
        return _to_fraction(self._poly.get(key, QQ.zero))

    @property
    def degree(self) -> int:
        """Largest total degree present, -1 for zero."""
        return max((mono[-1] for mono in self._poly), default=-1)

    def depends_on(self, index: int) -> bool:
        _check_index(self.num_vars, index)
        return any(mono[index - 1] for mono in self._poly)

    def variables(self) -> set[int]:
        """1-based indices of the variables actually present."""
        return {
            i + 1 for mono in self._poly for i, e in enumerate(mono[:-1]) if e
        }

    # cap changes

    def truncate(self, cap: int) -> "TruncPoly":
        if cap > self.cap:
            raise DimensionError(f"cannot truncate cap {self.cap} up to {cap}")
        return TruncPoly._wrap(
            self.num_vars, cap, rs_trunc(self._poly, self._degree_var, cap + 1)
        )

    def extend(self, cap: int) -> "TruncPoly":
        """Reinterpret the stored polynomial at a larger cap."""
        if cap < self.cap:
            raise DimensionError(f"cannot extend cap {self.cap} down to {cap}")
        return TruncPoly._wrap(self.num_vars, cap, self._poly)

    def recap(self, cap: int) -> "TruncPoly":
        return self.truncate(cap) if cap <= self.cap else self.extend(cap)

    # arithmetic

    def __add__(self, other):
        if isinstance(other, TruncPoly):
            return poly_add(self, other)
        if isinstance(other, (int, Fraction)):
            return poly_add(self, TruncPoly.constant(self.num_vars, self.cap, other))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self._poly)

    def __sub__(self, other):
        if isinstance(other, TruncPoly):
            return poly_add(self, -other)
        if isinstance(other, (int, Fraction)):
            return self + (-Fraction(other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, TruncPoly):
            return poly_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> "TruncPoly":
        return self._like(self._poly * _to_qq(as_rational(factor)))

    def __pow__(self, exponent: int):
        if isinstance(exponent, bool) or not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            raise DomainError("negative powers are only defined via poly_unit_inverse")
        if exponent == 0:
            return TruncPoly.one(self.num_vars, self.cap)
        c0 = self.constant_term
        if not c0 and exponent > self.cap:
            return TruncPoly.zero(self.num_vars, self.cap)
        bits = max(abs(c0.numerator).bit_length(), c0.denominator.bit_length())
        if bits > 1 and exponent * bits > MAX_POWER_BITS:
            raise DomainError(
                f"({c0})^{exponent} exceeds the exact coefficient budget of "
                f"{MAX_POWER_BITS} bits"
            )
        return self._like(rs_pow(self._poly, exponent, self._degree_var, self.cap + 1))

    def __eq__(self, other):
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and self.cap == other.cap
            and self._poly == other._poly
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (self.num_vars, self.cap, frozenset(self._poly.items()))
            )
        return self._hash

    def __str__(self):
        return join_signed_terms(
            [(coef, render_monomial(mono)) for mono, coef in self.terms()]
        )

    def __repr__(self):
        return f"TruncPoly({self}, num_vars={self.num_vars}, cap={self.cap})"


def _check_index(num_vars: int, index: int):
    if not 1 <= index <= num_vars:
        raise DomainError(f"variable index {index} out of range 1..{num_vars}")


def _check_compatible(a: TruncPoly, b: TruncPoly):
    if a.num_vars != b.num_vars or a.cap != b.cap:
        raise DimensionError(
            f"incompatible series: (num_vars={a.num_vars}, cap={a.cap}) vs "
            f"(num_vars={b.num_vars}, cap={b.cap})"
        )


def poly_add(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    _check_compatible(a, b)
    return a._like(a._poly + b._poly)


def poly_mul(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    _check_compatible(a, b)
    return a._like(rs_mul(a._poly, b._poly, a._degree_var, a.cap + 1))


def poly_unit_inverse(a: TruncPoly) -> TruncPoly:
    if not a.constant_term:
        raise NonUnitError(f"{a} has zero constant term and is not a unit")
    return a._like(rs_series_inversion(a._poly, a._degree_var, a.cap + 1))


def _require_no_constant(f: TruncPoly, what: str):
    if f.constant_term:
        raise DomainError(f"{what} needs a series without constant term, got {f}")


def exp_trunc(f: TruncPoly) -> TruncPoly:
    _require_no_constant(f, "exp_trunc")
    if f.is_zero():
        return TruncPoly.one(f.num_vars, f.cap)
    return f._like(rs_exp(f._poly, f._degree_var, f.cap + 1))


def h_trunc(f: TruncPoly) -> TruncPoly:
    """h(f) = (e^f - 1) / f"""
    _require_no_constant(f, "h_trunc")
    if f.is_zero():
        return TruncPoly.one(f.num_vars, f.cap)
    series_ring = graded_ring(f.num_vars)[0]
    coefficients = [
        series_ring(QQ(1, factorial(k + 1))) for k in range(f.cap + 1)
    ]
    return f._like(
        rs_series_from_list(f._poly, coefficients, f._degree_var, f.cap + 1)
    )


def exact_div_linear(a: TruncPoly, linear: TruncPoly) -> TruncPoly:
    """Division of ``a`` by a homogeneous linear form.

    The quotient carries cap ``a.cap - 1``. A nonzero remainder raises
    ``NotDivisibleError``.
    """
    if a.num_vars != linear.num_vars:
        raise DimensionError("linear form and dividend live in different rings")
    if linear.is_zero() or linear.degree != 1 or linear.constant_term:
        raise DomainError(f"{linear} is not a nonzero homogeneous linear form")
    if a.cap < 1:
        raise DomainError("division by a linear form needs cap >= 1")
    if a.is_zero():
        return TruncPoly.zero(a.num_vars, a.cap - 1)
    quotient, remainder = a._poly.div(linear._poly)
    if remainder:
        raise NotDivisibleError(
            f"{a} is not divisible by {linear}: remainder "
            f"{TruncPoly._wrap(a.num_vars, a.cap, remainder)}"
        )
    return TruncPoly._wrap(a.num_vars, a.cap - 1, quotient)


def subst_zero(a: TruncPoly, var_index: int) -> TruncPoly:
    """Set t_{var_index} = 0 (1-based index)."""
    _check_index(a.num_vars, var_index)
    gens = graded_ring(a.num_vars)[1]
    return a._like(a._poly.subs(gens[var_index - 1], 0))


def divide_by_variable(a: TruncPoly, var_index: int) -> TruncPoly:
    """Exact division by t_{var_index}; every term must contain it.

    The result keeps ``a.cap``: it is the polynomial whose product with the
    variable is ``a``.
    """
    _check_index(a.num_vars, var_index)
    if a.is_zero():
        return a
    _, gens, degree_var = graded_ring(a.num_vars)
    quotient, remainder = a._poly.div(gens[var_index - 1] * degree_var)
    if remainder:
        raise NotDivisibleError(f"{a} is not divisible by t{var_index}")
    return a._like(quotient)


def poly_substitute(series: TruncPoly, images: Sequence[TruncPoly]) -> TruncPoly:
    """Compose ``series`` in k variables with k series without constant term:
    t_i -> images[i-1]. The result lives in the ring of the images."""
    if len(images) != series.num_vars:
        raise DimensionError(
            f"need {series.num_vars} images, got {len(images)}"
        )
    first = images[0]
    for image in images:
        _check_compatible(first, image)
        _require_no_constant(image, "poly_substitute")
    series_ring, _, degree_var = graded_ring(first.num_vars)
    prec = first.cap + 1
    powers: list[list[PolyElement]] = [[series_ring.one] for _ in images]

    def power(i: int, e: int) -> PolyElement:
        cached = powers[i]
        while len(cached) <= e:
            cached.append(rs_mul(cached[-1], images[i]._poly, degree_var, prec))
        return cached[e]

    result = series_ring.zero
    for mono, coef in series.items():
        if sum(mono) > first.cap:
            continue
        term = series_ring(_to_qq(coef))
        for i, e in enumerate(mono):
            if e:
                term = rs_mul(term, power(i, e), degree_var, prec)
        result += term
    return first._like(result)
