"""Text input for Lie elements, truncated polynomials, Jacobian matrices and
endomorphisms.

    elem    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*' factor) | ('/' INT))*     at most one Lie factor
    factor  := INT | 'y'INT | '[' elem (',' elem)+ ']' | '(' elem ')'

Brackets are left-normed: [a, b, c] = [[a, b], c]. Polynomials use the same
shape with 't'INT variables and '^' powers.
"""
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .autgroup import IAEndomorphism
from .base import AlgebraConfig, ParseError
from .lie import LieElement, left_normed
from .series import TruncPoly
from .utils import load_json, logger
from .wreath import JacobianMatrix

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<gen>y\d+)|(?P<var>t\d+)|(?P<op>[-+*/^\[\](),]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(src: str) -> list[Token]:
    tokens = []
    position = 0
    while position < len(src):
        if src[position:].strip() == "":
            break
        match = _TOKEN.match(src, position)
        if match is None:
            offset = len(src[position:]) - len(src[position:].lstrip())
            raise ParseError(
                f"unexpected character {src[position + offset]!r}", position + offset
            )
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            raise ParseError(
                f"expected {text!r}, found {self.current.text or 'end of input'!r}",
                self.current.position,
            )

    def finish(self):
        if self.current.kind != "end":
            raise ParseError(
                f"unexpected {self.current.text!r}", self.current.position
            )

    def integer(self) -> int:
        token = self.current
        if token.kind != "num":
            raise ParseError(
                f"expected an integer, found {token.text or 'end of input'!r}",
                token.position,
            )
        self.index += 1
        return int(token.text)

    def index_of(self, token: Token, limit: int) -> int:
        index = int(token.text[1:])
        if not 1 <= index <= limit:
            raise ParseError(
                f"{token.text} is out of range 1..{limit}", token.position
            )
        return index


class _LieParser(_Parser):
    """Parses into (scalar, element-or-None) pairs so that constants can be
    carried until they meet a Lie factor."""

    def __init__(self, src: str, config: AlgebraConfig):
        super().__init__(src)
        self.config = config

    def parse(self) -> LieElement:
        element = self.elem()
        self.finish()
        return element

    def elem(self) -> LieElement:
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        total = self.term(sign)
        while True:
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                return total
            total = total + self.term(sign)

    def term(self, sign: int) -> LieElement:
        start = self.current.position
        scalar = Fraction(sign)
        element: Optional[LieElement] = None
        scalar, element = self.factor(scalar, element)
        while True:
            if self.accept("*"):
                scalar, element = self.factor(scalar, element)
            elif self.accept("/"):
                position = self.current.position
                divisor = self.integer()
                if divisor == 0:
                    raise ParseError("division by zero", position)
                scalar /= divisor
            else:
                break
        if element is None:
            if scalar:
                raise ParseError(
                    "a nonzero constant is not an element of the Lie algebra", start
                )
            return LieElement.zero(self.config)
        return element.scale(scalar)

    def factor(self, scalar: Fraction, element: Optional[LieElement]):
        token = self.current
        if token.kind == "num":
            return scalar * self.integer(), element
        if element is not None:
            raise ParseError("product of two Lie elements", token.position)
        if token.kind == "gen":
            self.advance()
            index = self.index_of(token, self.config.rank)
            return scalar, LieElement.generator(self.config, index)
        if self.accept("["):
            entries = [self.elem()]
            while self.accept(","):
                entries.append(self.elem())
            self.expect("]")
            if len(entries) < 2:
                raise ParseError("a bracket needs at least two entries", token.position)
            return scalar, left_normed(entries)
        if self.accept("("):
            inner = self.elem()
            self.expect(")")
            return scalar, inner
        raise ParseError(
            f"unexpected {token.text or 'end of input'!r}", token.position
        )


class _PolyParser(_Parser):
    def __init__(self, src: str, num_vars: int, cap: int):
        super().__init__(src)
        self.num_vars = num_vars
        self.cap = cap

    def parse(self) -> TruncPoly:
        poly = self.poly()
        self.finish()
        return poly

    def poly(self) -> TruncPoly:
        negate = self.accept("-")
        if not negate:
            self.accept("+")
        total = self.product()
        if negate:
            total = -total
        while True:
            if self.accept("+"):
                total = total + self.product()
            elif self.accept("-"):
                total = total - self.product()
            else:
                return total

    def product(self) -> TruncPoly:
        result = self.power()
        while True:
            if self.accept("*"):
                result = result * self.power()
            elif self.accept("/"):
                position = self.current.position
                divisor = self.integer()
                if divisor == 0:
                    raise ParseError("division by zero", position)
                result = result.scale(Fraction(1, divisor))
            else:
                return result

    def power(self) -> TruncPoly:
        base = self.primary()
        if self.accept("^"):
            return base ** self.integer()
        return base

    def primary(self) -> TruncPoly:
        token = self.current
        if token.kind == "num":
            return TruncPoly.constant(self.num_vars, self.cap, self.integer())
        if token.kind == "var":
            self.advance()
            index = self.index_of(token, self.num_vars)
            return TruncPoly.variable(self.num_vars, self.cap, index)
        if self.accept("("):
            inner = self.poly()
            self.expect(")")
            return inner
        raise ParseError(
            f"unexpected {token.text or 'end of input'!r}", token.position
        )


def parse_lie(src: str, config: AlgebraConfig) -> LieElement:
    return _LieParser(src, config).parse()


def parse_poly(src: Union[str, int], num_vars: int, cap: int) -> TruncPoly:
    return _PolyParser(str(src), num_vars, cap).parse()


def _load_document(src: str, what: str):
    if src.startswith("@"):
        document = load_json(src[1:])
        if document is None:
            raise ParseError(f"{what} file {src[1:]!r} does not exist", 0)
        return document
    try:
        return json.loads(src)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON for {what}: {e.msg}", e.pos) from e


def parse_matrix(src: str, config: AlgebraConfig) -> JacobianMatrix:
    """A JSON array of m rows of m polynomial strings, row-major."""
    rows = _load_document(src, "matrix")
    m = config.rank
    if (
        not isinstance(rows, list)
        or len(rows) != m
        or any(not isinstance(row, list) or len(row) != m for row in rows)
    ):
        raise ParseError(f"matrix must be a JSON array of {m} rows of {m} entries", 0)
    entries = [
        [parse_poly(entry, m, config.derivative_cap) for entry in row] for row in rows
    ]
    return JacobianMatrix.from_rows(config, entries)


def parse_endomorphism(src: str, config: AlgebraConfig) -> IAEndomorphism:
    """"identity", a JSON object {"y1": expr, ...}, or "@path" to such a file.
    Generators left out are fixed."""
    if src.strip() == "identity":
        return IAEndomorphism.identity(config)
    images_src = _load_document(src, "endomorphism")
    if not isinstance(images_src, dict):
        raise ParseError("endomorphism must be a JSON object or 'identity'", 0)
    names = [f"y{j}" for j in range(1, config.rank + 1)]
    unknown = sorted(set(images_src) - set(names))
    if unknown:
        raise ParseError(f"unknown generators {unknown}", 0)
    missing = [name for name in names if name not in images_src]
    if missing:
        logger.warning(f"Generators {missing} not given; they are mapped to themselves")
    images = []
    for j, name in enumerate(names, start=1):
        if name in images_src:
            images.append(parse_lie(str(images_src[name]), config))
        else:
            images.append(LieElement.generator(config, j))
    return IAEndomorphism.from_images(config, images)
