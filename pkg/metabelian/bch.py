"""Metabelian Baker-Campbell-Hausdorff composition of inner automorphisms.

The bivariate series

    c(t, u) = (e^u h(t) - h(u)) / (e^(t+u) - 1),    h(v) = (e^v - 1) / v

governs the product: for w = bch_compose(u, v),

    w = u_lin + v_lin + [u_lin, v_lin] c(ad u_lin, ad v_lin)
        + u_0 (1 + ad v_lin c(ad u_lin, ad v_lin))
        + v_0 (1 - ad u_lin c(ad u_lin, ad v_lin))

and exp(ad w) is exp(ad u) followed by exp(ad v), i.e.
compose(exp_ad(v), exp_ad(u)).
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .base import DomainError
from .lie import LieElement, apply_ad_poly, bracket, lie_add
from .series import (
    TruncPoly,
    exact_div_linear,
    exp_trunc,
    h_trunc,
    poly_substitute,
    poly_unit_inverse,
    render_monomial,
)
from .utils import logger


@dataclass(frozen=True)
class BchSeries:
    """c(t, u) truncated at ``cap``; t is the first variable, u the second."""

    cap: int
    series: TruncPoly

    def coefficient(self, t_exp: int, u_exp: int) -> Fraction:
        return self.series.coefficient((t_exp, u_exp))

    def table(self) -> list[tuple[str, Fraction]]:
        """Nonzero coefficients in graded-lex order, keyed "1", "t1", "t1*t2"."""
        return [
            (render_monomial(mono) or "1", coef) for mono, coef in self.series.terms()
        ]

    def __str__(self):
        return str(self.series)


@lru_cache(maxsize=32)
def gerritzen_c(cap: int) -> BchSeries:
    if cap < 0:
        raise DomainError(f"series cap must be non-negative, got {cap}")
    logger.debug(f"Computing BCH series c(t,u) up to degree {cap}")
    wide = cap + 1
    t = TruncPoly.variable(2, wide, 1)
    u = TruncPoly.variable(2, wide, 2)
    numerator = exp_trunc(u) * h_trunc(t) - h_trunc(u)
    # e^(t+u) - 1 = (t+u) h(t+u); the numerator carries the factor t+u
    quotient = exact_div_linear(numerator, t + u)
    denominator = h_trunc(TruncPoly.linear_form([1, 1], cap))
    return BchSeries(cap, (quotient * poly_unit_inverse(denominator)).truncate(cap))


def bch_operator(u: LieElement, v: LieElement) -> TruncPoly:
    """c(ad u_lin, ad v_lin) as a polynomial in the commuting ad y_i."""
    cap = u.config.lie_cap
    return poly_substitute(
        gerritzen_c(cap).series, [u.linear_form(cap), v.linear_form(cap)]
    )


def bch_compose(u: LieElement, v: LieElement) -> LieElement:
    u.config.check_same(v.config)
    config = u.config
    cap = config.lie_cap
    operator = bch_operator(u, v)
    u_form, v_form = u.linear_form(cap), v.linear_form(cap)
    u_lin, v_lin = u.linear_part, v.linear_part

    result = lie_add(u_lin, v_lin)
    result = lie_add(result, apply_ad_poly(bracket(u_lin, v_lin), operator))
    if u.quad:
        result = lie_add(
            result, apply_ad_poly(u.commutator_part, v_form * operator + 1)
        )
    if v.quad:
        result = lie_add(
            result, apply_ad_poly(v.commutator_part, 1 - u_form * operator)
        )
    return result


def bch_fold(elements: Sequence[LieElement]) -> LieElement:
    """bch(...bch(bch(e_0, e_1), e_2)..., e_k): the generator of
    exp(ad e_0) followed by exp(ad e_1) ... followed by exp(ad e_k)."""
    if not elements:
        raise DomainError("nothing to fold")
    result = elements[0]
    for element in elements[1:]:
        result = bch_compose(result, element)
    return result
