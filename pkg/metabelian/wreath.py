"""The embedding y_i -> a_i + b_i of L_{m,c} into the abelian wreath product
A_m wr B_m, partial derivatives, Jacobian matrices and the inverse map from
derivative data back to Lie elements."""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .base import (
    AlgebraConfig,
    DimensionError,
    InvariantViolation,
    NotInImageError,
)
from .lie import LieElement, QuadTerms, add_normal_term
from .series import Monomial, TruncPoly
from .utils import logger

if TYPE_CHECKING:
    from .autgroup import IAEndomorphism


@dataclass(frozen=True)
class WreathElement:
    """sum_i a_i f_i(t) + sum_i beta_i b_i"""

    config: AlgebraConfig
    b_coords: tuple[Fraction, ...]
    a_coords: tuple[TruncPoly, ...]

    def __post_init__(self):
        m = self.config.rank
        if len(self.b_coords) != m or len(self.a_coords) != m:
            raise DimensionError(f"wreath coordinates need length {m}")
        for f in self.a_coords:
            if f.num_vars != m or f.cap != self.config.derivative_cap:
                raise DimensionError("a-coordinate lives in the wrong series ring")

    @classmethod
    def zero(cls, config: AlgebraConfig) -> "WreathElement":
        m = config.rank
        return cls(
            config,
            (Fraction(0),) * m,
            tuple(TruncPoly.zero(m, config.derivative_cap) for _ in range(m)),
        )

    def is_zero(self) -> bool:
        return not any(self.b_coords) and all(f.is_zero() for f in self.a_coords)

    def b_form(self) -> TruncPoly:
        """sum_j beta_j t_j"""
        return TruncPoly.linear_form(self.b_coords, self.config.derivative_cap)


def embed(u: LieElement) -> WreathElement:
    config = u.config
    m, cap = config.rank, config.derivative_cap
    coords: list[dict[Monomial, Fraction]] = [{} for _ in range(m)]
    zero_mono = (0,) * m

    def add(i: int, mono: Monomial, coef: Fraction):
        bucket = coords[i - 1]
        value = bucket.get(mono, 0) + coef
        if value:
            bucket[mono] = value
        else:
            bucket.pop(mono, None)

    for i, beta in enumerate(u.linear, start=1):
        if beta:
            add(i, zero_mono, beta)
    # [y_p,y_q]h -> a_p t_q h - a_q t_p h
    for (p, q), h in u.quad:
        for mono, coef in h.items():
            shifted = list(mono)
            shifted[q - 1] += 1
            add(p, tuple(shifted), coef)
            shifted = list(mono)
            shifted[p - 1] += 1
            add(q, tuple(shifted), -coef)
    return WreathElement(
        config,
        tuple(u.linear),
        tuple(TruncPoly(m, cap, bucket) for bucket in coords),
    )


def wreath_bracket(x: WreathElement, y: WreathElement) -> WreathElement:
    x.config.check_same(y.config)
    config = x.config
    y_form, x_form = y.b_form(), x.b_form()
    return WreathElement(
        config,
        (Fraction(0),) * config.rank,
        tuple(fx * y_form - fy * x_form for fx, fy in zip(x.a_coords, y.a_coords)),
    )


def partials(u: LieElement) -> tuple[TruncPoly, ...]:
    """(du/dy_1, ..., du/dy_m), each with cap c-1."""
    return embed(u).a_coords


def t_pairing(coords: Sequence[TruncPoly], cap: Optional[int] = None) -> TruncPoly:
    """sum_i t_i f_i, computed at ``cap`` (default: one above the inputs)."""
    if not coords:
        raise DimensionError("empty coordinate tuple")
    m = len(coords)
    if cap is None:
        cap = coords[0].cap + 1
    total: dict[Monomial, Fraction] = {}
    for i, f in enumerate(coords):
        if f.num_vars != m:
            raise DimensionError(f"coordinate {i + 1} is not a series in {m} variables")
        for mono, coef in f.items():
            if sum(mono) + 1 > cap:
                continue
            shifted = list(mono)
            shifted[i] += 1
            shifted = tuple(shifted)
            value = total.get(shifted, 0) + coef
            if value:
                total[shifted] = value
            else:
                total.pop(shifted, None)
    return TruncPoly(m, cap, total)


def membership(acoords: Sequence[TruncPoly]) -> bool:
    """Whether the a-coordinates come from the commutator ideal: the sum
    t_1 f_1 + ... + t_m f_m vanishes at one degree above the inputs' cap."""
    if not acoords:
        return True
    return t_pairing(acoords).is_zero()


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@lru_cache(maxsize=None)
def _block_eliminator(size: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row operations E with E @ A in reduced echelon form, where A maps the
    coefficients of [y_p, y_{q0}] t^(mu - e_p - e_q0), p in the support of
    mu beyond its minimum q0, to the derivative coefficients of t^(mu - e_i)
    in a_i. Row 0 of A belongs to q0."""
    if size == 1:
        return ((Fraction(1),),)
    unknowns = size - 1
    rows = [[-1] * unknowns]
    for r in range(unknowns):
        rows.append([int(c == r) for c in range(unknowns)])
    system = DomainMatrix.from_list(rows, QQ)
    augmented = system.hstack(DomainMatrix.eye(size, QQ))
    reduced, pivots = augmented.rref()
    if tuple(pivots[:unknowns]) != tuple(range(unknowns)):
        raise InvariantViolation(f"lift block of size {size} is not of full rank")
    logger.debug(f"Built lift eliminator for blocks of size {size}")
    return tuple(
        tuple(_to_fraction(e) for e in row[unknowns:]) for row in reduced.to_list()
    )


def _infer_config(a_coords: Sequence[TruncPoly]) -> AlgebraConfig:
    if not a_coords:
        raise DimensionError("cannot infer the algebra from empty coordinates")
    return AlgebraConfig(len(a_coords), a_coords[0].cap + 1)


def lift(
    b_coords: Sequence[Fraction],
    a_coords: Sequence[TruncPoly],
    config: Optional[AlgebraConfig] = None,
) -> LieElement:
    """The unique Lie element whose embedding has these coordinates."""
    config = config or _infer_config(a_coords)
    m, cap = config.rank, config.derivative_cap
    if len(b_coords) != m or len(a_coords) != m:
        raise DimensionError(f"lift needs {m} b- and {m} a-coordinates")
    for f in a_coords:
        if f.num_vars != m or f.cap != cap:
            raise DimensionError(
                f"a-coordinate {f!r} does not have {m} variables and cap {cap}"
            )
    beta = tuple(Fraction(b) for b in b_coords)
    coords = [f - b for f, b in zip(a_coords, beta)]
    if not membership(coords):
        raise NotInImageError(
            "coordinates do not come from a Lie element: "
            f"sum t_i f_i = {t_pairing(coords)}"
        )

    # derivative data grouped by content multidegree mu = mono + e_i
    blocks: dict[Monomial, dict[int, Fraction]] = {}
    for i, f in enumerate(coords, start=1):
        for mono, coef in f.items():
            content = list(mono)
            content[i - 1] += 1
            blocks.setdefault(tuple(content), {})[i] = coef

    acc: QuadTerms = {}
    for content, data in blocks.items():
        support = [i for i, e in enumerate(content, start=1) if e]
        eliminator = _block_eliminator(len(support))
        rhs = [data.get(i, Fraction(0)) for i in support]
        solved = [sum(e * r for e, r in zip(row, rhs)) for row in eliminator]
        unknowns = len(support) - 1
        if any(solved[unknowns:]):
            raise NotInImageError(f"inconsistent derivative data at content {content}")
        q0 = support[0]
        for p, value in zip(support[1:], solved[:unknowns]):
            alpha = list(content)
            alpha[p - 1] -= 1
            alpha[q0 - 1] -= 1
            add_normal_term(acc, p, q0, tuple(alpha), value, config.lie_cap)
    logger.debug(f"lift solved {len(blocks)} content blocks for {config}")
    return LieElement.from_terms(config, acc, beta)


class JacobianMatrix:
    """m x m matrix of truncated series, row i = d/dy_i, column j = image of
    y_j. Entries sit in an object ndarray so products use ``@``."""

    def __init__(self, config: AlgebraConfig, entries: np.ndarray):
        m = config.rank
        if entries.shape != (m, m):
            raise DimensionError(f"Jacobian must be {m}x{m}, got {entries.shape}")
        for f in entries.flat:
            if not isinstance(f, TruncPoly):
                raise DimensionError(f"Jacobian entry {f!r} is not a TruncPoly")
            if f.num_vars != m or f.cap != config.derivative_cap:
                raise DimensionError("Jacobian entry lives in the wrong series ring")
        self.config = config
        self.entries = entries

    @classmethod
    def from_rows(
        cls, config: AlgebraConfig, rows: Sequence[Sequence[TruncPoly]]
    ) -> "JacobianMatrix":
        m = config.rank
        if len(rows) != m or any(len(row) != m for row in rows):
            raise DimensionError(f"Jacobian must be {m}x{m}")
        entries = np.empty((m, m), dtype=object)
        for i in range(m):
            for j in range(m):
                entries[i, j] = rows[i][j]
        return cls(config, entries)

    @classmethod
    def from_columns(
        cls, config: AlgebraConfig, columns: Sequence[Sequence[TruncPoly]]
    ) -> "JacobianMatrix":
        m = config.rank
        if len(columns) != m:
            raise DimensionError(f"Jacobian must have {m} columns")
        return cls.from_rows(
            config, [[columns[j][i] for j in range(m)] for i in range(m)]
        )

    @classmethod
    def identity(cls, config: AlgebraConfig) -> "JacobianMatrix":
        m, cap = config.rank, config.derivative_cap
        return cls.from_rows(
            config,
            [
                [TruncPoly.constant(m, cap, int(i == j)) for j in range(m)]
                for i in range(m)
            ],
        )

    @classmethod
    def zeros(cls, config: AlgebraConfig) -> "JacobianMatrix":
        m, cap = config.rank, config.derivative_cap
        return cls.from_rows(
            config, [[TruncPoly.zero(m, cap) for _ in range(m)] for _ in range(m)]
        )

    def entry(self, i: int, j: int) -> TruncPoly:
        """1-based (row, column) access."""
        return self.entries[i - 1, j - 1]

    def column(self, j: int) -> tuple[TruncPoly, ...]:
        return tuple(self.entries[:, j - 1])

    def row(self, i: int) -> tuple[TruncPoly, ...]:
        return tuple(self.entries[i - 1, :])

    def _wrap(self, entries) -> "JacobianMatrix":
        out = np.empty(entries.shape, dtype=object)
        for index, value in np.ndenumerate(entries):
            # object sums can collapse to plain ints when a row is empty
            out[index] = (
                value
                if isinstance(value, TruncPoly)
                else TruncPoly.constant(
                    self.config.rank, self.config.derivative_cap, value
                )
            )
        return JacobianMatrix(self.config, out)

    def _check(self, other: "JacobianMatrix"):
        if not isinstance(other, JacobianMatrix):
            raise TypeError(f"expected a JacobianMatrix, got {type(other).__name__}")
        self.config.check_same(other.config)

    def __matmul__(self, other: "JacobianMatrix") -> "JacobianMatrix":
        self._check(other)
        return self._wrap(self.entries @ other.entries)

    def __add__(self, other: "JacobianMatrix") -> "JacobianMatrix":
        self._check(other)
        return self._wrap(self.entries + other.entries)

    def __sub__(self, other: "JacobianMatrix") -> "JacobianMatrix":
        self._check(other)
        return self._wrap(self.entries - other.entries)

    def __neg__(self) -> "JacobianMatrix":
        return self._wrap(-self.entries)

    def minus_identity(self) -> "JacobianMatrix":
        return self - JacobianMatrix.identity(self.config)

    def is_identity(self) -> bool:
        return self == JacobianMatrix.identity(self.config)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.entries.flat)

    def in_s(self) -> bool:
        """Whether every column of M - I comes from the commutator ideal."""
        s_part = self.minus_identity()
        return all(
            membership(s_part.column(j)) for j in range(1, self.config.rank + 1)
        )

    def to_strings(self) -> list[list[str]]:
        return [[str(f) for f in row] for row in self.entries]

    def __eq__(self, other):
        if not isinstance(other, JacobianMatrix):
            return NotImplemented
        return self.config == other.config and all(
            a == b for a, b in zip(self.entries.flat, other.entries.flat)
        )

    __hash__ = None

    def __repr__(self):
        return f"JacobianMatrix({self.to_strings()}, {self.config})"


def jacobian(phi: "IAEndomorphism") -> JacobianMatrix:
    """Column j holds the partial derivatives of phi(y_j) = y_j + w_j."""
    config = phi.config
    columns = []
    for j, delta in enumerate(phi.deltas, start=1):
        columns.append(partials(LieElement.generator(config, j) + delta))
    return JacobianMatrix.from_columns(config, columns)
