import json
import logging

import pytest

from metabelian.autgroup import IAEndomorphism
from metabelian.base import AlgebraConfig, DomainError, ParseError
from metabelian.lie import LieElement
from metabelian.parser import (
    parse_endomorphism,
    parse_lie,
    parse_matrix,
    parse_poly,
    tokenize,
)
from metabelian.wreath import JacobianMatrix

M2C3 = AlgebraConfig(2, 3)


def test_tokenize():
    kinds = [token.kind for token in tokenize("2*[y2, y1] - t1^2")]
    assert kinds == [
        "num", "op", "op", "gen", "op", "gen", "op", "op", "var", "op", "num", "end",
    ]
    assert tokenize("  y1")[0].position == 2


def test_parse_lie_examples():
    u = parse_lie("y1 + 1/2*[y2,y1]", M2C3)
    assert u.linear == (1, 0)
    assert u.quad_map() == {(2, 1): parse_poly("1/2", 2, 1)}
    assert parse_lie("[y1,y2]", M2C3) == -LieElement.commutator(M2C3, 2, 1)
    assert parse_lie("[y2,y1,y1,y1]", M2C3).is_zero()
    assert parse_lie("0", M2C3).is_zero()
    assert parse_lie("-(y1 - y2)*3", M2C3) == LieElement.from_linear(M2C3, [-3, 3])
    assert parse_lie("[y2 + y1, y1]", M2C3) == LieElement.commutator(M2C3, 2, 1)


@pytest.mark.parametrize(
    "src, position",
    [
        ("y1 +", 4),
        ("y3", 0),
        ("y1 $ y2", 3),
        ("[y1]", 0),
        ("2", 0),
        ("y1*y2", 3),
        ("y1/0", 3),
        ("[y1,y2", 6),
        ("y1 y2", 3),
    ],
)
def test_parse_errors(src, position):
    with pytest.raises(ParseError) as excinfo:
        parse_lie(src, M2C3)
    assert excinfo.value.position == position


def test_render_round_trip(config, gen, samples):
    for _ in range(samples):
        u = gen.lie(config)
        assert parse_lie(str(u), config) == u


def test_parse_poly():
    assert str(parse_poly("(t1 + t2)^2", 2, 2)) == "t1^2 + 2*t1*t2 + t2^2"
    assert parse_poly("t1^3", 2, 2).is_zero()
    assert parse_poly(7, 2, 0).constant_term == 7
    with pytest.raises(ParseError):
        parse_poly("t3", 2, 2)
    with pytest.raises(ParseError):
        parse_poly("y1", 2, 2)


def test_parse_matrix():
    matrix = parse_matrix('[["1 - t2", "0"], ["t1", "1"]]', M2C3)
    assert isinstance(matrix, JacobianMatrix)
    assert matrix.entry(1, 1) == parse_poly("1 - t2", 2, 2)
    assert parse_matrix('[["1", "0"], ["0", "1"]]', M2C3).is_identity()
    with pytest.raises(ParseError):
        parse_matrix('[["1", "0"]]', M2C3)
    with pytest.raises(ParseError):
        parse_matrix("[[1, 0], [0, 1]", M2C3)


def test_parse_endomorphism(tmp_path, caplog):
    assert parse_endomorphism("identity", M2C3) == IAEndomorphism.identity(M2C3)
    phi = parse_endomorphism('{"y1": "y1 + [y2,y1]", "y2": "y2"}', M2C3)
    assert phi.image(1) == parse_lie("y1 + [y2,y1]", M2C3)

    with caplog.at_level(logging.WARNING, logger="metabelian"):
        partial = parse_endomorphism('{"y1": "y1 + [y2,y1]"}', M2C3)
    assert partial == phi
    assert "not given" in caplog.text

    path = tmp_path / "phi.json"
    path.write_text(json.dumps({"y1": "y1 + [y2,y1]", "y2": "y2"}))
    assert parse_endomorphism(f"@{path}", M2C3) == phi


def test_parse_endomorphism_errors(tmp_path):
    with pytest.raises(ParseError):
        parse_endomorphism('{"y3": "y3"}', M2C3)
    with pytest.raises(ParseError):
        parse_endomorphism('["y1"]', M2C3)
    with pytest.raises(ParseError):
        parse_endomorphism(f"@{tmp_path / 'missing.json'}", M2C3)
    with pytest.raises(DomainError):
        parse_endomorphism('{"y1": "y2"}', M2C3)
