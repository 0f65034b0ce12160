import pytest

from metabelian.autgroup import (
    IAEndomorphism,
    InnerAutomorphism,
    apply,
    as_endomorphism,
    compose,
    compose_all,
    conjugate,
    exp_ad,
    from_jacobian,
    inner_jacobian,
    inverse,
    jacobian_inverse,
    rank2_inner_jacobian,
)
from metabelian.base import AlgebraConfig, DimensionError, DomainError, NotInSError
from metabelian.canonical import is_inner
from metabelian.lie import LieElement, bracket
from metabelian.parser import parse_endomorphism, parse_lie, parse_matrix
from metabelian.wreath import JacobianMatrix, jacobian

M2C3 = AlgebraConfig(2, 3)


@pytest.fixture
def phi():
    return parse_endomorphism('{"y1": "y1 + [y2,y1]", "y2": "y2"}', M2C3)


@pytest.fixture
def psi():
    return parse_endomorphism('{"y1": "y1", "y2": "y2 + [y2,y1]"}', M2C3)


def test_apply(phi):
    identity = IAEndomorphism.identity(M2C3)
    u = parse_lie("y1 - 2*[y2,y1,y2]", M2C3)
    assert apply(identity, u) == u
    assert apply(phi, parse_lie("[y2,y1]", M2C3)) == parse_lie(
        "[y2,y1] - [y2,y1,y2]", M2C3
    )
    assert phi(LieElement.generator(M2C3, 1)) == phi.image(1)
    assert phi.image(1) == parse_lie("y1 + [y2,y1]", M2C3)


def test_from_images_rejects_non_ia():
    with pytest.raises(DomainError):
        parse_endomorphism('{"y1": "2*y1"}', M2C3)
    with pytest.raises(DomainError):
        IAEndomorphism(M2C3, (LieElement.generator(M2C3, 1), LieElement.zero(M2C3)))
    with pytest.raises(DimensionError):
        IAEndomorphism(M2C3, (LieElement.zero(M2C3),))


def test_compose_example(phi, psi):
    expected = parse_matrix(
        '[["1 - t2", "-t2*(1 - t2)"], ["t1", "1 + t1*(1 - t2)"]]', M2C3
    )
    product = compose(phi, psi)
    assert jacobian(product) == expected
    assert jacobian(phi) @ jacobian(psi) == expected
    assert compose(phi, IAEndomorphism.identity(M2C3)) == phi
    assert compose_all([phi, psi], M2C3) == product


def test_jacobian_is_multiplicative(config, gen, samples):
    for _ in range(samples):
        a, b = gen.ia(config), gen.ia(config)
        assert jacobian(compose(a, b)) == jacobian(a) @ jacobian(b)
        c = gen.ia(config)
        assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_endomorphisms_preserve_brackets(config, gen, samples):
    for _ in range(samples):
        phi = gen.ia(config)
        u, v = gen.lie(config), gen.lie(config)
        assert apply(phi, bracket(u, v)) == bracket(apply(phi, u), apply(phi, v))


def test_exp_ad_example():
    assert exp_ad(LieElement.zero(M2C3)).expansion.is_identity()
    inner = exp_ad(LieElement.generator(M2C3, 1))
    assert isinstance(inner, InnerAutomorphism)
    assert inner.config == M2C3
    assert inner.expansion.image(1) == LieElement.generator(M2C3, 1)
    assert inner.expansion.image(2) == parse_lie(
        "y2 + [y2,y1] + 1/2*[y2,y1,y1]", M2C3
    )


def test_exp_ad_is_automorphism(config, gen, samples):
    for _ in range(samples):
        inner = exp_ad(gen.lie(config)).expansion
        a, b = gen.lie(config), gen.lie(config)
        assert inner(bracket(a, b)) == bracket(inner(a), inner(b))
        assert compose(inverse(inner), inner).is_identity()


def test_inner_jacobian_example():
    assert inner_jacobian(LieElement.zero(M2C3)).is_identity()
    expected = parse_matrix(
        '[["1", "-t2*(1 + t1/2)"], ["0", "1 + t1*(1 + t1/2)"]]', M2C3
    )
    y1 = LieElement.generator(M2C3, 1)
    assert inner_jacobian(y1) == expected
    assert jacobian(exp_ad(y1).expansion) == expected


def test_inner_jacobian_two_paths(config, gen, samples):
    for _ in range(samples):
        u = gen.lie(config)
        assert inner_jacobian(u) == jacobian(exp_ad(u).expansion)
        commutator = gen.commutator(config)
        assert inner_jacobian(commutator) == jacobian(exp_ad(commutator).expansion)


@pytest.mark.parametrize("nil_class", [3, 4, 5])
def test_rank2_closed_form(nil_class, gen, samples):
    config = AlgebraConfig(2, nil_class)
    for _ in range(samples):
        c1, c2 = gen.rational(), gen.rational()
        h = gen.poly(2, config.lie_cap)
        u = LieElement.commutator(config, 2, 1, h) + LieElement.from_linear(
            config, [c1, c2]
        )
        assert rank2_inner_jacobian(config, c1, c2, h) == inner_jacobian(u)
    with pytest.raises(DimensionError):
        rank2_inner_jacobian(AlgebraConfig(3, 3), 1, 0, gen.poly(3, 1))


def test_from_jacobian(phi):
    assert from_jacobian(JacobianMatrix.identity(M2C3)).is_identity()
    matrix = parse_matrix('[["1 - t2", "0"], ["t1", "1"]]', M2C3)
    assert from_jacobian(matrix) == phi
    with pytest.raises(NotInSError):
        from_jacobian(parse_matrix('[["1", "t1"], ["0", "1"]]', M2C3))


def test_from_jacobian_inverts_jacobian(config, gen, samples):
    for _ in range(samples):
        phi = gen.ia(config)
        assert from_jacobian(jacobian(phi)) == phi


def test_inverse(config, gen, samples):
    assert inverse(IAEndomorphism.identity(config)).is_identity()
    for _ in range(samples):
        phi = gen.ia(config)
        assert compose(inverse(phi), phi).is_identity()
        assert compose(phi, inverse(phi)).is_identity()
        assert jacobian_inverse(jacobian(phi)) @ jacobian(phi) == JacobianMatrix.identity(
            config
        )
        u = gen.lie(config)
        assert inverse(exp_ad(u).expansion) == exp_ad(-u).expansion


def test_jacobian_inverse_needs_unipotent_matrix():
    with pytest.raises(DomainError):
        jacobian_inverse(parse_matrix('[["2", "0"], ["0", "1"]]', M2C3))


def test_inner_automorphisms_are_normal(config, gen, samples):
    for _ in range(samples):
        phi = gen.ia(config)
        u = gen.lie(config)
        assert is_inner(conjugate(phi, exp_ad(u).expansion)) is not None


def test_as_endomorphism(phi):
    inner = exp_ad(LieElement.generator(M2C3, 2))
    assert as_endomorphism(inner) is inner.expansion
    assert as_endomorphism(phi, M2C3) is phi
    with pytest.raises(TypeError):
        as_endomorphism(LieElement.zero(M2C3))
    with pytest.raises(DimensionError):
        as_endomorphism(phi, AlgebraConfig(2, 4))


def test_to_json(phi):
    assert phi.to_json() == {"y1": "y1 + [y2,y1]", "y2": "y2"}
    assert str(phi) == "y1 -> y1 + [y2,y1], y2 -> y2"
