"""IA-endomorphisms of L_{m,c}: substitution, composition, inversion, inner
automorphisms exp(ad u) and their closed-form Jacobians."""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .base import AlgebraConfig, DimensionError, DomainError, NotInSError
from .lie import LieElement, apply_ad_poly, bracket, lie_add
from .series import TruncPoly, h_trunc
from .utils import logger
from .wreath import JacobianMatrix, jacobian, lift, membership, partials


@dataclass(frozen=True)
class IAEndomorphism:
    """y_j -> y_j + w_j with every w_j in the commutator ideal."""

    config: AlgebraConfig
    deltas: tuple[LieElement, ...]

    def __post_init__(self):
        if len(self.deltas) != self.config.rank:
            raise DimensionError(
                f"need {self.config.rank} generator images, got {len(self.deltas)}"
            )
        for j, delta in enumerate(self.deltas, start=1):
            self.config.check_same(delta.config)
            if delta.has_linear_part():
                raise DomainError(
                    f"increment of y{j} has a linear part; only IA-endomorphisms "
                    "are supported"
                )

    @classmethod
    def identity(cls, config: AlgebraConfig) -> "IAEndomorphism":
        zero = LieElement.zero(config)
        return cls(config, (zero,) * config.rank)

    @classmethod
    def from_images(
        cls, config: AlgebraConfig, images: Sequence[LieElement]
    ) -> "IAEndomorphism":
        if len(images) != config.rank:
            raise DimensionError(f"need {config.rank} generator images")
        deltas = []
        for j, image in enumerate(images, start=1):
            delta = image - LieElement.generator(config, j)
            if delta.has_linear_part():
                raise DomainError(
                    f"image of y{j} is {image}, which is not y{j} modulo commutators"
                )
            deltas.append(delta)
        return cls(config, tuple(deltas))

    def image(self, j: int) -> LieElement:
        return LieElement.generator(self.config, j) + self.deltas[j - 1]

    def images(self) -> tuple[LieElement, ...]:
        return tuple(self.image(j) for j in range(1, self.config.rank + 1))

    def is_identity(self) -> bool:
        return all(delta.is_zero() for delta in self.deltas)

    def to_json(self) -> dict[str, str]:
        return {f"y{j}": str(image) for j, image in enumerate(self.images(), start=1)}

    def __call__(self, u: LieElement) -> LieElement:
        return apply(self, u)

    def __str__(self):
        return ", ".join(f"{k} -> {v}" for k, v in self.to_json().items())


@dataclass(frozen=True)
class InnerAutomorphism:
    generator: LieElement
    expansion: IAEndomorphism

    @property
    def config(self) -> AlgebraConfig:
        return self.generator.config


def apply(phi: IAEndomorphism, u: LieElement) -> LieElement:
    """phi(u) = u + sum_k beta_k w_k + sum_k w_k (du_0/dy_k)(ad y).

    Terms carrying two increments vanish by the metabelian law, so the
    substitution is linear in the w's."""
    phi.config.check_same(u.config)
    result = u
    for beta, delta in zip(u.linear, phi.deltas):
        if beta and not delta.is_zero():
            result = lie_add(result, delta.scale(beta))
    if u.quad:
        for delta, derivative in zip(phi.deltas, partials(u.commutator_part)):
            if not delta.is_zero() and not derivative.is_zero():
                result = lie_add(result, apply_ad_poly(delta, derivative))
    return result


def compose(phi: IAEndomorphism, psi: IAEndomorphism) -> IAEndomorphism:
    """phi after psi: y_j -> phi(psi(y_j))."""
    phi.config.check_same(psi.config)
    return IAEndomorphism(
        phi.config,
        tuple(
            lie_add(w_phi, apply(phi, w_psi))
            for w_phi, w_psi in zip(phi.deltas, psi.deltas)
        ),
    )


def compose_all(maps: Sequence[IAEndomorphism], config: AlgebraConfig) -> IAEndomorphism:
    """maps[0] after maps[1] after ... after maps[-1]."""
    result = IAEndomorphism.identity(config)
    for phi in maps:
        result = compose(result, phi)
    return result


def exp_ad(u: LieElement) -> InnerAutomorphism:
    """y_j -> y_j + [y_j, u] h(ad u_lin), h(x) = (e^x - 1)/x."""
    config = u.config
    series = h_trunc(u.linear_form(config.lie_cap))
    deltas = []
    for j in range(1, config.rank + 1):
        commutator = bracket(LieElement.generator(config, j), u)
        deltas.append(apply_ad_poly(commutator, series))
    return InnerAutomorphism(u, IAEndomorphism(config, tuple(deltas)))


def inner_jacobian(u: LieElement) -> JacobianMatrix:
    """I + (D_lin + D_0) T without expanding exp(ad u).

    D_lin[i][i] = sum_{k != i} c_k t_k, D_lin[i][j] = -c_i t_j,
    D_0[i][j] = -t_j f_i with f_i = sum_{q<i} t_q h_iq - sum_{p>i} t_p h_pi,
    T = h(sum_r c_r t_r)."""
    config = u.config
    m, cap = config.rank, config.derivative_cap
    t = [TruncPoly.variable(m, cap, i) for i in range(1, m + 1)]
    c = u.linear
    zero = TruncPoly.zero(m, cap)

    f = [zero] * m
    for (p, q), h in u.quad:
        h = h.extend(cap)
        f[p - 1] = f[p - 1] + t[q - 1] * h
        f[q - 1] = f[q - 1] - t[p - 1] * h

    series = h_trunc(u.linear_form(cap))
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            if i == j:
                d_lin = TruncPoly.linear_form(
                    [0 if k == i else c[k] for k in range(m)], cap
                )
            else:
                d_lin = t[j].scale(-c[i])
            entry = (d_lin - t[j] * f[i]) * series
            row.append(entry + int(i == j))
        rows.append(row)
    return JacobianMatrix.from_rows(config, rows)


def rank2_inner_jacobian(
    config: AlgebraConfig, c1: Fraction, c2: Fraction, h: TruncPoly
) -> JacobianMatrix:
    """Jacobian of exp(ad(c1 y1 + c2 y2 + [y2,y1] h)) in rank two:

        I + [[(c2 + t1 h) t2, (-c1 + t2 h) t2],
             [-(c2 + t1 h) t1, -(-c1 + t2 h) t1]] . h(c1 t1 + c2 t2)
    """
    if config.rank != 2:
        raise DimensionError("the rank-two closed form needs m = 2")
    cap = config.derivative_cap
    t1, t2 = TruncPoly.variable(2, cap, 1), TruncPoly.variable(2, cap, 2)
    h = h.recap(cap)
    left = t1 * h + c2
    right = t2 * h - c1
    series = h_trunc(TruncPoly.linear_form([c1, c2], cap))
    return JacobianMatrix.from_rows(
        config,
        [
            [left * t2 * series + 1, right * t2 * series],
            [-(left * t1) * series, -(right * t1) * series + 1],
        ],
    )


def from_jacobian(matrix: JacobianMatrix) -> IAEndomorphism:
    """The unique IA-endomorphism with this Jacobian."""
    config = matrix.config
    s_part = matrix.minus_identity()
    zero_b = (Fraction(0),) * config.rank
    deltas = []
    for j in range(1, config.rank + 1):
        column = s_part.column(j)
        if not membership(column):
            raise NotInSError(
                f"column {j} of the matrix is not the derivative of a commutator"
            )
        deltas.append(lift(zero_b, column, config))
    return IAEndomorphism(config, tuple(deltas))


def jacobian_inverse(matrix: JacobianMatrix) -> JacobianMatrix:
    """(I - N)^-1 = I + N + ... + N^(c-1) for N = I - M without constant
    terms; N^c vanishes below the cap."""
    config = matrix.config
    identity = JacobianMatrix.identity(config)
    nilpotent = identity - matrix
    if any(f.constant_term for f in nilpotent.entries.flat):
        raise DomainError("matrix is not congruent to the identity")
    total, power = identity, identity
    for _ in range(1, config.nil_class):
        power = power @ nilpotent
        if power.is_zero():
            break
        total = total + power
    return total


def inverse(phi: IAEndomorphism) -> IAEndomorphism:
    result = from_jacobian(jacobian_inverse(jacobian(phi)))
    logger.debug(f"Inverted IA-endomorphism of {phi.config}")
    return result


def conjugate(phi: IAEndomorphism, psi: IAEndomorphism) -> IAEndomorphism:
    """phi psi phi^-1"""
    return compose(compose(phi, psi), inverse(phi))


def as_endomorphism(
    value, config: Optional[AlgebraConfig] = None
) -> IAEndomorphism:
    """Accept either an IA-endomorphism or an inner automorphism."""
    if isinstance(value, InnerAutomorphism):
        value = value.expansion
    if not isinstance(value, IAEndomorphism):
        raise TypeError(f"expected an IA-endomorphism, got {type(value).__name__}")
    if config is not None:
        config.check_same(value.config)
    return value
