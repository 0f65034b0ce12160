"""Independent check of the BCH law through the associative envelope.

An element u is represented by the 2x2 upper triangular matrix

    X = [[0, a],
         [0, d]]

where a is the a-row of its embedding and d = sum_i beta_i t_i. Since
X^k = [[0, a d^(k-1)], [0, d^k]], the exponential is
[[1, a h(d)], [0, e^d]] and products of exponentials stay in closed form,
so log(e^X e^Y) is solved without any BCH series.
"""
from dataclasses import dataclass
from typing import NamedTuple

from .base import AlgebraConfig, DimensionError, InvariantViolation, NotInImageError
from .lie import LieElement
from .series import TruncPoly, exp_trunc, h_trunc, poly_unit_inverse
from .wreath import embed, lift


@dataclass(frozen=True)
class TriangularRep:
    config: AlgebraConfig
    a_row: tuple[TruncPoly, ...]
    diag: TruncPoly

    def __post_init__(self):
        m, cap = self.config.rank, self.config.derivative_cap
        if len(self.a_row) != m:
            raise DimensionError(f"module row needs {m} entries")
        for f in (*self.a_row, self.diag):
            if f.num_vars != m or f.cap != cap:
                raise DimensionError("representative entry lives in the wrong ring")

    @classmethod
    def zero(cls, config: AlgebraConfig) -> "TriangularRep":
        m, cap = config.rank, config.derivative_cap
        return cls(config, tuple(TruncPoly.zero(m, cap) for _ in range(m)), TruncPoly.zero(m, cap))

    def is_zero(self) -> bool:
        return self.diag.is_zero() and all(f.is_zero() for f in self.a_row)


class EnvelopeExp(NamedTuple):
    """[[1, module_row], [0, diag_exp]]"""

    module_row: tuple[TruncPoly, ...]
    diag_exp: TruncPoly


def rep_of(u: LieElement) -> TriangularRep:
    return TriangularRep(
        u.config, embed(u).a_coords, u.linear_form(u.config.derivative_cap)
    )


def rep_mul(x: TriangularRep, y: TriangularRep) -> TriangularRep:
    """Associative product: [[0, a_x d_y], [0, d_x d_y]]."""
    x.config.check_same(y.config)
    return TriangularRep(
        x.config, tuple(a * y.diag for a in x.a_row), x.diag * y.diag
    )


def rep_bracket(x: TriangularRep, y: TriangularRep) -> TriangularRep:
    x.config.check_same(y.config)
    return TriangularRep(
        x.config,
        tuple(ax * y.diag - ay * x.diag for ax, ay in zip(x.a_row, y.a_row)),
        x.diag * y.diag - y.diag * x.diag,
    )


def rep_exp(x: TriangularRep) -> EnvelopeExp:
    series = h_trunc(x.diag)
    return EnvelopeExp(tuple(a * series for a in x.a_row), exp_trunc(x.diag))


def exp_mul(left: EnvelopeExp, right: EnvelopeExp) -> EnvelopeExp:
    """[[1, B1], [0, D1]] [[1, B2], [0, D2]] = [[1, B2 + B1 D2], [0, D1 D2]]"""
    return EnvelopeExp(
        tuple(b2 + b1 * right.diag_exp for b1, b2 in zip(left.module_row, right.module_row)),
        left.diag_exp * right.diag_exp,
    )


def rep_bch(u: LieElement, v: LieElement) -> LieElement:
    """The element z with e^rep(z) = e^rep(u) e^rep(v)."""
    u.config.check_same(v.config)
    config = u.config
    x, y = rep_of(u), rep_of(v)
    product = exp_mul(rep_exp(x), rep_exp(y))
    diag = x.diag + y.diag
    correction = poly_unit_inverse(h_trunc(diag))
    a_row = tuple(b * correction for b in product.module_row)
    linear = tuple(a + b for a, b in zip(u.linear, v.linear))
    try:
        return lift(linear, a_row, config)
    except NotInImageError as e:
        raise InvariantViolation(f"envelope logarithm left the algebra: {e}") from e
