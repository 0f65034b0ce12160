import pytest

from metabelian.base import AlgebraConfig, DimensionError
from metabelian.bch import bch_compose
from metabelian.lie import LieElement, bracket
from metabelian.oracle import (
    TriangularRep,
    exp_mul,
    rep_bch,
    rep_bracket,
    rep_exp,
    rep_mul,
    rep_of,
)
from metabelian.parser import parse_poly
from metabelian.series import TruncPoly, exp_trunc, h_trunc

M2C3 = AlgebraConfig(2, 3)


def polys(*sources):
    return tuple(parse_poly(s, 2, 2) for s in sources)


def test_rep_of():
    rep = rep_of(LieElement.generator(M2C3, 1))
    assert rep.a_row == polys("1", "0")
    assert rep.diag == parse_poly("t1", 2, 2)

    rep = rep_of(LieElement.commutator(M2C3, 2, 1))
    assert rep.a_row == polys("-t2", "t1")
    assert rep.diag.is_zero()

    assert rep_of(LieElement.zero(M2C3)) == TriangularRep.zero(M2C3)
    assert TriangularRep.zero(M2C3).is_zero()


def test_rep_validation():
    with pytest.raises(DimensionError):
        TriangularRep(M2C3, polys("1"), TruncPoly.zero(2, 2))
    with pytest.raises(DimensionError):
        TriangularRep(M2C3, polys("1", "0"), TruncPoly.zero(2, 3))


def test_rep_exp():
    t1 = parse_poly("t1", 2, 2)
    result = rep_exp(rep_of(LieElement.generator(M2C3, 1)))
    assert result.module_row == (h_trunc(t1), TruncPoly.zero(2, 2))
    assert result.diag_exp == exp_trunc(t1)

    result = rep_exp(TriangularRep.zero(M2C3))
    assert result.module_row == polys("0", "0")
    assert result.diag_exp == TruncPoly.one(2, 2)

    commutator = LieElement.commutator(M2C3, 2, 1)
    result = rep_exp(rep_of(commutator))
    assert result.module_row == rep_of(commutator).a_row
    assert result.diag_exp == TruncPoly.one(2, 2)


def test_rep_of_is_homomorphism(config, gen, samples):
    for _ in range(samples):
        u, v = gen.lie(config), gen.lie(config)
        assert rep_of(bracket(u, v)) == rep_bracket(rep_of(u), rep_of(v))
        x, y = rep_of(u), rep_of(v)
        commutator = rep_mul(x, y)
        reverse = rep_mul(y, x)
        assert rep_bracket(x, y) == TriangularRep(
            config,
            tuple(a - b for a, b in zip(commutator.a_row, reverse.a_row)),
            commutator.diag - reverse.diag,
        )


def test_rep_of_is_injective(config, gen, samples):
    for _ in range(samples):
        u, v = gen.lie(config), gen.lie(config)
        assert (rep_of(u) == rep_of(v)) == (u == v)


def test_rep_bch_examples(config, gen, samples):
    zero = LieElement.zero(config)
    for _ in range(samples):
        u = gen.lie(config)
        assert rep_bch(u, -u).is_zero()
        assert rep_bch(u, zero) == u
    y1, y2 = LieElement.generator(config, 1), LieElement.generator(config, 2)
    assert rep_bch(y1, y2) == bch_compose(y1, y2)


def test_exponentials_multiply(config, gen, samples):
    for _ in range(samples):
        u, v = gen.lie(config), gen.lie(config)
        w = rep_bch(u, v)
        assert rep_exp(rep_of(w)) == exp_mul(rep_exp(rep_of(u)), rep_exp(rep_of(v)))
