"""Elements of the free metabelian nilpotent Lie algebra L_{m,c}.

Every element is kept in the normal form

    u = sum_r beta_r y_r + sum_{p>q} [y_p, y_q] h_pq(ad y_q, ..., ad y_m)

where h_pq is a polynomial of degree <= c-2 in the commuting operators
ad y_q..ad y_m, stored as a ``TruncPoly`` in t_1..t_m. Action is on the
right: ``[u, v] = u . ad v``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Mapping, Optional, Sequence, Union

from .base import AlgebraConfig, DimensionError, DomainError
from .series import Monomial, TruncPoly, glex_key
from .utils import join_signed_terms

Scalar = Union[int, Fraction]
HeadPair = tuple[int, int]
QuadTerms = dict[HeadPair, dict[Monomial, Fraction]]


def add_normal_term(
    acc: QuadTerms, p: int, q: int, mono: Monomial, coef: Fraction, cap: int
):
    """Accumulate coef * [y_p, y_q] t^mono into ``acc`` in normal form."""
    if not coef or p == q or sum(mono) > cap:
        return
    if p < q:
        p, q, coef = q, p, -coef
    j = next((i + 1 for i, e in enumerate(mono) if e), None)
    if j is None or j >= q:
        bucket = acc.setdefault((p, q), {})
        value = bucket.get(mono, 0) + coef
        if value:
            bucket[mono] = value
        else:
            bucket.pop(mono, None)
        return
    # [y_p,y_q,y_j] = [y_p,y_j,y_q] - [y_q,y_j,y_p]; both results are normal
    # since j is the smallest variable left in the tail
    rest = list(mono)
    rest[j - 1] -= 1
    first = list(rest)
    first[q - 1] += 1
    second = list(rest)
    second[p - 1] += 1
    add_normal_term(acc, p, j, tuple(first), coef, cap)
    add_normal_term(acc, q, j, tuple(second), -coef, cap)


def _quad_to_items(
    config: AlgebraConfig, acc: QuadTerms
) -> tuple[tuple[HeadPair, TruncPoly], ...]:
    items = []
    for (p, q), terms in acc.items():
        if terms:
            items.append(
                ((p, q), TruncPoly(config.rank, config.lie_cap, terms))
            )
    items.sort(key=lambda kv: (kv[0][1], kv[0][0]))
    return tuple(items)


@dataclass(frozen=True)
class LieElement:
    config: AlgebraConfig
    linear: tuple[Fraction, ...]
    quad: tuple[tuple[HeadPair, TruncPoly], ...] = field(default=())

    def __post_init__(self):
        m = self.config.rank
        if len(self.linear) != m:
            raise DimensionError(f"linear part needs {m} coefficients")
        for (p, q), h in self.quad:
            if not m >= p > q >= 1:
                raise DomainError(f"head pair ({p},{q}) is not normal")
            if h.num_vars != m or h.cap != self.config.lie_cap:
                raise DimensionError(f"coefficient of [y{p},y{q}] has wrong ring")
            if h.is_zero():
                raise DomainError(f"zero coefficient stored for [y{p},y{q}]")
            if any(i < q for i in h.variables()):
                raise DomainError(
                    f"coefficient of [y{p},y{q}] uses a variable below t{q}"
                )

    # constructors

    @classmethod
    def zero(cls, config: AlgebraConfig) -> "LieElement":
        return cls(config, (Fraction(0),) * config.rank)

    @classmethod
    def generator(cls, config: AlgebraConfig, index: int) -> "LieElement":
        if not 1 <= index <= config.rank:
            raise DomainError(f"generator y{index} out of range 1..{config.rank}")
        return cls.from_linear(config, [int(i == index) for i in range(1, config.rank + 1)])

    @classmethod
    def from_linear(
        cls, config: AlgebraConfig, coefficients: Sequence[Scalar]
    ) -> "LieElement":
        if len(coefficients) != config.rank:
            raise DimensionError(f"need {config.rank} linear coefficients")
        return cls(config, tuple(Fraction(c) for c in coefficients))

    @classmethod
    def from_quad(
        cls,
        config: AlgebraConfig,
        quad: Mapping[HeadPair, TruncPoly],
        linear: Optional[Sequence[Scalar]] = None,
    ) -> "LieElement":
        """Build from arbitrary head pairs and coefficients, straightening
        whatever is not yet in normal form."""
        acc: QuadTerms = {}
        for (p, q), h in quad.items():
            if not (1 <= p <= config.rank and 1 <= q <= config.rank):
                raise DomainError(f"generator index out of range in ({p},{q})")
            if h.num_vars != config.rank:
                raise DimensionError("coefficient series has the wrong variable count")
            for mono, coef in h.items():
                add_normal_term(acc, p, q, mono, coef, config.lie_cap)
        return cls.from_terms(config, acc, linear)

    @classmethod
    def from_terms(
        cls,
        config: AlgebraConfig,
        acc: QuadTerms,
        linear: Optional[Sequence[Scalar]] = None,
    ) -> "LieElement":
        """Build from terms already gathered by ``add_normal_term``."""
        linear = linear if linear is not None else (0,) * config.rank
        return cls(
            config, tuple(Fraction(c) for c in linear), _quad_to_items(config, acc)
        )

    @classmethod
    def commutator(
        cls, config: AlgebraConfig, p: int, q: int, h: Optional[TruncPoly] = None
    ) -> "LieElement":
        """[y_p, y_q] h(ad y_1, ..., ad y_m)"""
        if h is None:
            h = TruncPoly.one(config.rank, config.lie_cap)
        return cls.from_quad(config, {(p, q): h.recap(config.lie_cap)})

    # inspection

    def quad_map(self) -> dict[HeadPair, TruncPoly]:
        return dict(self.quad)

    def is_zero(self) -> bool:
        return not self.quad and not any(self.linear)

    def has_linear_part(self) -> bool:
        return any(self.linear)

    @property
    def linear_part(self) -> "LieElement":
        return LieElement(self.config, self.linear)

    @property
    def commutator_part(self) -> "LieElement":
        return LieElement(self.config, (Fraction(0),) * self.config.rank, self.quad)

    def linear_form(self, cap: int) -> TruncPoly:
        """sum_r beta_r t_r, the symbol of ad of the linear part."""
        return TruncPoly.linear_form(self.linear, cap)

    def project(self, nil_class: int) -> "LieElement":
        """Image under L_{m,c} -> L_{m,c'} for c' <= c."""
        if nil_class > self.config.nil_class:
            raise DimensionError("can only project to a smaller class")
        target = AlgebraConfig(self.config.rank, nil_class)
        quad = []
        for head, h in self.quad:
            h = h.truncate(target.lie_cap)
            if not h.is_zero():
                quad.append((head, h))
        return LieElement(target, self.linear, tuple(quad))

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return lie_add(self, other)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return lie_add(self, -other)

    def scale(self, factor: Scalar) -> "LieElement":
        factor = Fraction(factor)
        if not factor:
            return LieElement.zero(self.config)
        return LieElement(
            self.config,
            tuple(b * factor for b in self.linear),
            tuple((head, h.scale(factor)) for head, h in self.quad),
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self):
        return render(self)


def lie_add(u: LieElement, v: LieElement) -> LieElement:
    u.config.check_same(v.config)
    quad = dict(u.quad)
    for head, h in v.quad:
        total = quad[head] + h if head in quad else h
        if total.is_zero():
            quad.pop(head, None)
        else:
            quad[head] = total
    return LieElement(
        u.config,
        tuple(a + b for a, b in zip(u.linear, v.linear)),
        tuple(sorted(quad.items(), key=lambda kv: (kv[0][1], kv[0][0]))),
    )


def straighten(config: AlgebraConfig, head: HeadPair, tail_var: int) -> LieElement:
    """Normal form of [y_p, y_q] . ad y_j."""
    p, q = head
    if not config.rank >= p > q >= 1:
        raise DomainError(f"head pair {head} must satisfy m >= p > q >= 1")
    if not 1 <= tail_var <= config.rank:
        raise DomainError(f"generator y{tail_var} out of range")
    mono = [0] * config.rank
    mono[tail_var - 1] = 1
    acc: QuadTerms = {}
    add_normal_term(acc, p, q, tuple(mono), Fraction(1), config.lie_cap)
    return LieElement.from_terms(config, acc)


def _act(acc: QuadTerms, u: LieElement, g: TruncPoly, sign: Fraction):
    cap = u.config.lie_cap
    g_terms = sorted(((sum(m), m, c) for m, c in g.items()), key=lambda x: x[0])
    for (p, q), h in u.quad:
        for mono_h, coef_h in h.items():
            budget = cap - sum(mono_h)
            for degree, mono_g, coef_g in g_terms:
                if degree > budget:
                    break
                mono = tuple(a + b for a, b in zip(mono_h, mono_g))
                add_normal_term(acc, p, q, mono, sign * coef_h * coef_g, cap)


def _check_operator(config: AlgebraConfig, g: TruncPoly) -> TruncPoly:
    if g.num_vars != config.rank:
        raise DimensionError(
            f"operator polynomial has {g.num_vars} variables, expected {config.rank}"
        )
    if g.cap < config.lie_cap:
        raise DimensionError(
            f"operator polynomial cap {g.cap} is below {config.lie_cap}"
        )
    return g.truncate(config.lie_cap)


def apply_ad_poly(u: LieElement, g: TruncPoly) -> LieElement:
    """u . g(ad y_1, ..., ad y_m) for u in the commutator ideal."""
    if u.has_linear_part():
        raise DomainError(
            "polynomials in ad only act on elements without linear part"
        )
    g = _check_operator(u.config, g)
    acc: QuadTerms = {}
    _act(acc, u, g, Fraction(1))
    return LieElement.from_terms(u.config, acc)


def bracket(u: LieElement, v: LieElement) -> LieElement:
    """[u, v] = [u_lin, v_lin] + [u_0, v_lin] - [v_0, u_lin]"""
    u.config.check_same(v.config)
    config = u.config
    cap = config.lie_cap
    zero_mono = (0,) * config.rank
    acc: QuadTerms = {}
    for i, beta in enumerate(u.linear, start=1):
        if not beta:
            continue
        for j, gamma in enumerate(v.linear, start=1):
            if gamma:
                add_normal_term(acc, i, j, zero_mono, beta * gamma, cap)
    if v.has_linear_part():
        _act(acc, u.commutator_part, v.linear_form(cap), Fraction(1))
    if u.has_linear_part():
        _act(acc, v.commutator_part, u.linear_form(cap), Fraction(-1))
    return LieElement.from_terms(config, acc)


def left_normed(elements: Sequence[LieElement]) -> LieElement:
    """[e_1, e_2, ..., e_k] = [[e_1, ..., e_{k-1}], e_k]"""
    if not elements:
        raise DomainError("empty commutator")
    result = elements[0]
    for element in elements[1:]:
        result = bracket(result, element)
    return result


@dataclass(frozen=True)
class BasisCommutator:
    """[y_p, y_q, y_{i_3}, ..., y_{i_k}] with p > q <= i_3 <= ... <= i_k."""

    head: HeadPair
    tail: tuple[int, ...] = ()

    def __post_init__(self):
        p, q = self.head
        if p <= q:
            raise DomainError(f"head pair {self.head} needs p > q")
        if list(self.tail) != sorted(self.tail) or any(i < q for i in self.tail):
            raise DomainError(f"tail {self.tail} is not a sorted multiset >= {q}")

    @property
    def length(self) -> int:
        return 2 + len(self.tail)

    def monomial(self, rank: int) -> Monomial:
        mono = [0] * rank
        for i in self.tail:
            mono[i - 1] += 1
        return tuple(mono)

    def to_element(self, config: AlgebraConfig) -> LieElement:
        return LieElement.commutator(
            config,
            *self.head,
            TruncPoly.monomial(config.rank, config.lie_cap, self.monomial(config.rank)),
        )

    def __str__(self):
        return "[" + ",".join(f"y{i}" for i in (*self.head, *self.tail)) + "]"


def basis_commutators(
    config: AlgebraConfig, length: Optional[int] = None
) -> list[BasisCommutator]:
    """Basis of the commutator ideal of L_{m,c}, optionally of one length."""
    m, c = config.rank, config.nil_class
    lengths = [length] if length is not None else range(2, c + 1)
    out = []
    for k in lengths:
        if not 2 <= k <= c:
            continue
        for q in range(1, m + 1):
            for p in range(q + 1, m + 1):
                for tail in combinations_with_replacement(range(q, m + 1), k - 2):
                    out.append(BasisCommutator((p, q), tail))
    return out


def render_term_body(p: int, q: int, mono: Monomial) -> str:
    tail = [f"y{i}" for i, e in enumerate(mono, start=1) for _ in range(e)]
    return "[" + ",".join([f"y{p}", f"y{q}", *tail]) + "]"


def render(u: LieElement) -> str:
    """Linear part first, then commutators ordered by head (q, p) and
    graded-lex within each head."""
    terms = [(b, f"y{i}") for i, b in enumerate(u.linear, start=1) if b]
    for (p, q), h in u.quad:
        for mono, coef in sorted(h.items(), key=lambda kv: glex_key(kv[0])):
            terms.append((coef, render_term_body(p, q, mono)))
    return join_signed_terms(terms)

