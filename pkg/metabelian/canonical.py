"""Reduction of IA-automorphisms to canonical representatives of their
cosets modulo inner automorphisms.

A representative theta is canonical when J(theta) = I + (s_ij) with

* s_11 = s independent of t1,
* s_i1 = t1 q_i + r_i for i >= 2, where q_i has no constant term and does
  not involve t1..t_{i-1}, and r_i does not involve t1,
* s + sum_i t_i q_i = 0 and sum_i t_i r_i = 0,
* every column j >= 2 of (s_ij) satisfies the membership criterion,
* s_12 has no t2 summand.

``reduce`` strips an arbitrary IA-automorphism down to this shape by left
multiplication with exp(ad u_0), exp(ad u_1), ..., exp(ad u_{m-1}).
"""
from dataclasses import dataclass, field
from typing import Any, Optional

from .autgroup import (
    IAEndomorphism,
    compose,
    exp_ad,
    from_jacobian,
    inner_jacobian,
)
from .base import AlgebraConfig, DimensionError, InvariantViolation
from .bch import bch_fold
from .lie import LieElement
from .series import TruncPoly, divide_by_variable, subst_zero
from .utils import logger
from .wreath import JacobianMatrix, jacobian, membership, t_pairing


def t1_split(f: TruncPoly) -> tuple[TruncPoly, TruncPoly, TruncPoly]:
    """f = t1^2 p + t1 q + r with q, r free of t1. All parts keep f's cap."""
    r = subst_zero(f, 1)
    rest = divide_by_variable(f - r, 1)
    q = subst_zero(rest, 1)
    return divide_by_variable(rest - q, 1), q, r


def _unit(m: int, index: int) -> tuple[int, ...]:
    return tuple(int(i == index) for i in range(1, m + 1))


def shape_report(phi: IAEndomorphism) -> list[str]:
    """Names of the canonical-shape conditions J(phi) violates."""
    config = phi.config
    m, c = config.rank, config.nil_class
    s_part = jacobian(phi).minus_identity()
    failures = []

    s = s_part.entry(1, 1)
    if s.depends_on(1):
        failures.append("s depends on t1")

    qs = [TruncPoly.zero(m, s.cap)]
    rs = [TruncPoly.zero(m, s.cap)]
    for i in range(2, m + 1):
        p, q, r = t1_split(s_part.entry(i, 1))
        if not p.is_zero():
            failures.append(f"entry ({i},1) has a t1^2 part")
        for k in range(1, i):
            if q.depends_on(k):
                failures.append(f"q{i} depends on t{k}")
        if q.constant_term:
            failures.append(f"q{i} has a constant term")
        if r.depends_on(1):
            failures.append(f"r{i} depends on t1")
        qs.append(q)
        rs.append(r)

    if not (s.extend(c) + t_pairing(qs, c)).is_zero():
        failures.append("s + sum t_i q_i is not zero")
    if not t_pairing(rs, c).is_zero():
        failures.append("sum t_i r_i is not zero")
    for j in range(2, m + 1):
        if not membership(s_part.column(j)):
            failures.append(f"column {j} fails membership")
    if s_part.entry(1, 2).coefficient(_unit(m, 2)):
        failures.append("entry (1,2) has a t2 summand")
    return failures


def shape_check(phi: IAEndomorphism) -> bool:
    return not shape_report(phi)


@dataclass(frozen=True)
class CanonicalForm:
    theta: IAEndomorphism
    jacobian: JacobianMatrix = field(compare=False, repr=False)

    @classmethod
    def of(cls, theta: IAEndomorphism) -> "CanonicalForm":
        return cls(theta, jacobian(theta))


@dataclass(frozen=True)
class ReductionTrace:
    input: IAEndomorphism
    inner_generators: tuple[LieElement, ...]
    combined_inner: LieElement
    canonical: CanonicalForm

    def to_json(self) -> dict[str, Any]:
        return {
            "inner_generators": [str(u) for u in self.inner_generators],
            "combined_inner": str(self.combined_inner),
            "theta": self.canonical.theta.to_json(),
        }


def _left_multiply(
    current: IAEndomorphism, generator: LieElement, step: int
) -> IAEndomorphism:
    """exp(ad generator) after current, checking the Jacobian moves by
    the closed-form amount."""
    result = compose(exp_ad(generator).expansion, current)
    if not generator.has_linear_part():
        # J(exp(ad u_0)) - I is a rank one matrix killed by J(current) - I
        expected = jacobian(current) + inner_jacobian(generator).minus_identity()
        if jacobian(result) != expected:
            raise InvariantViolation(
                f"reduction step {step}: Jacobian of exp(ad {generator}) did not "
                "act additively"
            )
    logger.debug(f"Reduction step {step}: generator {generator}")
    return result


def _linear_step(current: IAEndomorphism) -> tuple[LieElement, IAEndomorphism]:
    config = current.config
    m = config.rank
    j = jacobian(current)
    coefficients = [j.entry(1, 2).coefficient(_unit(m, 2))]
    for k in range(2, m + 1):
        coefficients.append(j.entry(k, 1).coefficient(_unit(m, 1)))
    generator = LieElement.from_linear(config, coefficients)
    result = _left_multiply(current, generator, 0)

    after = jacobian(result)
    if after.entry(1, 2).coefficient(_unit(m, 2)) or any(
        after.entry(k, 1).coefficient(_unit(m, 1)) for k in range(2, m + 1)
    ):
        raise InvariantViolation("reduction step 0 left linear terms behind")
    return generator, result


def _t1_squared_step(current: IAEndomorphism) -> tuple[LieElement, IAEndomorphism]:
    config = current.config
    j = jacobian(current)
    quad = {}
    for i in range(2, config.rank + 1):
        p, _, _ = t1_split(j.entry(i, 1))
        if not p.is_zero():
            quad[(i, 1)] = p.truncate(config.lie_cap)
    generator = LieElement.from_quad(config, quad)
    result = _left_multiply(current, generator, 1)

    after = jacobian(result)
    for i in range(2, config.rank + 1):
        if not t1_split(after.entry(i, 1))[0].is_zero():
            raise InvariantViolation(f"reduction step 1 left a t1^2 part in row {i}")
    return generator, result


def _strip_variable_step(
    current: IAEndomorphism, s: int
) -> tuple[LieElement, IAEndomorphism]:
    """Remove t_s from q_i for every i > s."""
    config = current.config
    j = jacobian(current)
    quad = {}
    for i in range(s + 1, config.rank + 1):
        _, q, _ = t1_split(j.entry(i, 1))
        tail = q - subst_zero(q, s)
        if not tail.is_zero():
            quad[(i, s)] = divide_by_variable(tail, s).truncate(config.lie_cap)
    generator = LieElement.from_quad(config, quad)
    result = _left_multiply(current, generator, s)

    after = jacobian(result)
    for i in range(s + 1, config.rank + 1):
        if t1_split(after.entry(i, 1))[1].depends_on(s):
            raise InvariantViolation(f"reduction step {s} left t{s} in q{i}")
    return generator, result


def reduce(psi: IAEndomorphism) -> ReductionTrace:
    config = psi.config
    generators = []

    generator, current = _linear_step(psi)
    generators.append(generator)
    generator, current = _t1_squared_step(current)
    generators.append(generator)
    for s in range(2, config.rank):
        generator, current = _strip_variable_step(current, s)
        generators.append(generator)

    failures = shape_report(current)
    if failures:
        raise InvariantViolation(f"reduction ended off the canonical shape: {failures}")

    # psi = exp(ad -u_0) ... exp(ad -u_{m-1}) theta
    combined = bch_fold([-u for u in reversed(generators)])
    if compose(exp_ad(combined).expansion, current) != psi:
        raise InvariantViolation("combined inner generator does not recover the input")
    return ReductionTrace(psi, tuple(generators), combined, CanonicalForm.of(current))


def canonical_form(psi: IAEndomorphism) -> CanonicalForm:
    return reduce(psi).canonical


def same_coset(psi1: IAEndomorphism, psi2: IAEndomorphism) -> bool:
    psi1.config.check_same(psi2.config)
    return reduce(psi1).canonical.theta == reduce(psi2).canonical.theta


def is_inner(psi: IAEndomorphism) -> Optional[LieElement]:
    """A generator v with exp(ad v) = psi, or None when psi is outer."""
    trace = reduce(psi)
    if trace.canonical.theta.is_identity():
        return trace.combined_inner
    return None


def rank2_theta(
    config: AlgebraConfig, f1: TruncPoly, f2: TruncPoly
) -> IAEndomorphism:
    """theta with J(theta) = I + [[t2 f1, t2 f2], [-t1 f1, -t1 f2]]."""
    if config.rank != 2:
        raise DimensionError("rank2_theta needs m = 2")
    cap = config.derivative_cap
    t1, t2 = TruncPoly.variable(2, cap, 1), TruncPoly.variable(2, cap, 2)
    f1, f2 = f1.recap(cap), f2.recap(cap)
    return from_jacobian(
        JacobianMatrix.from_rows(
            config,
            [[t2 * f1 + 1, t2 * f2], [-(t1 * f1), -(t1 * f2) + 1]],
        )
    )
