import json
import logging
import os
from fractions import Fraction
from typing import Any, Union

logger = logging.getLogger("metabelian")


def set_logger(log_file: str):
    logger.setLevel(logging.DEBUG)

    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(logging.DEBUG)

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    file_handler.setFormatter(formatter)

    if not logger.handlers:
        logger.addHandler(file_handler)


def load_json(file_name):
    if not os.path.exists(file_name):
        return None
    with open(file_name, encoding="utf-8") as f:
        return json.load(f)


def write_json(json_obj, file_name):
    with open(file_name, "w", encoding="utf-8") as f:
        json.dump(json_obj, f, indent=2, ensure_ascii=False)


def dump_json(json_obj: Any, compact: bool = False) -> str:
    """Deterministic JSON text for CLI output."""
    if compact:
        return json.dumps(json_obj, separators=(",", ":"), ensure_ascii=False)
    return json.dumps(json_obj, indent=2, ensure_ascii=False)


def as_rational(value: Union[int, Fraction, str]) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """"p/q", or "p" when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def join_signed_terms(terms: list[tuple[Fraction, str]]) -> str:
    """Render [(coef, body), ...] as "c1*b1 + c2*b2 - ..." with an empty body
    meaning a bare constant. Returns "0" for an empty list."""
    if not terms:
        return "0"
    pieces = []
    for index, (coef, body) in enumerate(terms):
        magnitude = abs(coef)
        if not body:
            text = format_rational(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{format_rational(magnitude)}*{body}"
        if index == 0:
            pieces.append(f"-{text}" if coef < 0 else text)
        else:
            pieces.append(f"- {text}" if coef < 0 else f"+ {text}")
    return " ".join(pieces)

