import pytest

from metabelian.autgroup import IAEndomorphism, compose, exp_ad
from metabelian.base import AlgebraConfig, DimensionError
from metabelian.canonical import (
    CanonicalForm,
    canonical_form,
    is_inner,
    rank2_theta,
    reduce,
    same_coset,
    shape_check,
    shape_report,
    t1_split,
)
from metabelian.lie import LieElement
from metabelian.parser import parse_lie, parse_matrix, parse_poly
from metabelian.series import TruncPoly
from metabelian.wreath import jacobian

M2C3 = AlgebraConfig(2, 3)
M2C4 = AlgebraConfig(2, 4)
DISTINCT_FORMS = 20


def theta(config, f1, f2):
    cap = config.derivative_cap
    return rank2_theta(config, parse_poly(f1, 2, cap), parse_poly(f2, 2, cap))


def test_t1_split():
    f = parse_poly("t1^2*t2 + t1*t3 + t2*t3", 3, 3)
    assert t1_split(f) == (
        parse_poly("t2", 3, 3),
        parse_poly("t3", 3, 3),
        parse_poly("t2*t3", 3, 3),
    )
    zero = TruncPoly.zero(3, 3)
    assert t1_split(zero) == (zero, zero, zero)


def test_t1_split_reassembles(gen, samples):
    t1 = TruncPoly.variable(3, 4, 1)
    for _ in range(samples):
        f = gen.poly(3, 4, n_terms=6)
        p, q, r = t1_split(f)
        assert t1 * t1 * p + t1 * q + r == f
        assert not q.depends_on(1) and not r.depends_on(1)


def test_shape_check_examples():
    assert shape_check(IAEndomorphism.identity(M2C3))
    inner = exp_ad(LieElement.generator(M2C3, 1)).expansion
    assert not shape_check(inner)
    assert "entry (1,2) has a t2 summand" in shape_report(inner)


def test_rank2_example_is_canonical():
    example = theta(M2C3, "t2", "t2^2")
    assert jacobian(example) == parse_matrix(
        '[["1 + t2^2", "0"], ["-t1*t2", "1"]]', M2C3
    )
    assert example.image(1) == parse_lie("y1 - [y2,y1,y2]", M2C3)
    assert shape_report(example) == []
    assert is_inner(example) is None


@pytest.mark.parametrize(
    "f1, f2",
    [("t2", "0"), ("0", "t1"), ("t2 + t2^2", "t1*t2"), ("-2*t2^2", "t1 - t2^2")],
)
def test_rank2_family_is_canonical(f1, f2):
    assert shape_check(theta(M2C4, f1, f2))


def test_shape_report_names_failures():
    # first column with a t1^2 part and a t1-dependent s
    psi = parse_lie("y1 + [y2,y1,y1]", M2C3)
    phi = IAEndomorphism.from_images(M2C3, [psi, LieElement.generator(M2C3, 2)])
    report = shape_report(phi)
    assert "s depends on t1" in report
    assert "entry (2,1) has a t1^2 part" in report


def test_rank2_theta_needs_rank_two():
    with pytest.raises(DimensionError):
        rank2_theta(AlgebraConfig(3, 3), TruncPoly.zero(3, 2), TruncPoly.zero(3, 2))


def test_reduce_identity(config):
    trace = reduce(IAEndomorphism.identity(config))
    assert all(u.is_zero() for u in trace.inner_generators)
    assert trace.combined_inner.is_zero()
    assert trace.canonical.theta.is_identity()
    assert len(trace.inner_generators) == config.rank


def test_reduce_inner(config, gen, samples):
    for _ in range(samples):
        u = gen.lie(config)
        target = exp_ad(u).expansion
        trace = reduce(target)
        assert trace.canonical.theta.is_identity()
        assert exp_ad(trace.combined_inner).expansion == target


def test_reduce_random(config, gen, samples):
    for _ in range(samples):
        psi = gen.ia(config)
        trace = reduce(psi)
        canonical = trace.canonical.theta
        assert shape_check(canonical)
        assert compose(exp_ad(trace.combined_inner).expansion, canonical) == psi
        assert reduce(canonical).canonical == trace.canonical
        assert reduce(canonical).combined_inner.is_zero()


def test_reduce_is_constant_on_cosets(config, gen, samples):
    for _ in range(samples):
        psi = gen.ia(config)
        u = gen.lie(config)
        shifted = compose(exp_ad(u).expansion, psi)
        assert reduce(shifted).canonical == reduce(psi).canonical
        assert same_coset(shifted, psi)
        assert same_coset(psi, psi)


def test_rank2_forms_survive_translation(gen, samples):
    example = theta(M2C4, "t2 - t2^2", "t1*t2")
    for _ in range(samples):
        u = gen.lie(M2C4)
        assert canonical_form(compose(exp_ad(u).expansion, example)) == CanonicalForm.of(
            example
        )


def test_distinct_forms_are_different_cosets():
    forms = [
        theta(M2C4, "t2", "0"),
        theta(M2C4, "2*t2", "0"),
        theta(M2C4, "0", "t1"),
        theta(M2C4, "t2^2", "t1*t2"),
    ]
    for i, first in enumerate(forms):
        for second in forms[i + 1 :]:
            assert not same_coset(first, second)


def test_random_canonical_forms_are_different_cosets(config, gen):
    forms = []
    for _ in range(10 * DISTINCT_FORMS):
        canonical = reduce(gen.ia(config)).canonical.theta
        if canonical not in forms:
            forms.append(canonical)
        if len(forms) == DISTINCT_FORMS:
            break
    assert len(forms) == DISTINCT_FORMS
    for i, first in enumerate(forms):
        for second in forms[i + 1 :]:
            assert not same_coset(first, second)


def test_same_coset_needs_one_algebra():
    with pytest.raises(DimensionError):
        same_coset(IAEndomorphism.identity(M2C3), IAEndomorphism.identity(M2C4))


def test_is_inner():
    assert is_inner(IAEndomorphism.identity(M2C3)).is_zero()
    target = exp_ad(parse_lie("y1 + [y2,y1]", M2C3)).expansion
    generator = is_inner(target)
    assert generator is not None
    assert exp_ad(generator).expansion == target

    not_inner = IAEndomorphism.from_images(
        M2C3, [LieElement.generator(M2C3, 1), parse_lie("y2 + [y2,y1]", M2C3)]
    )
    assert is_inner(not_inner) is None


def test_trace_to_json():
    example = theta(M2C3, "t2", "t2^2")
    document = reduce(example).to_json()
    assert document == {
        "inner_generators": ["0", "0"],
        "combined_inner": "0",
        "theta": {"y1": "y1 - [y2,y1,y2]", "y2": "y2"},
    }
