import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Optional

from .autgroup import (
    IAEndomorphism,
    compose,
    exp_ad,
    from_jacobian,
    inner_jacobian,
    inverse,
)
from .base import AlgebraConfig, InvariantViolation, RenderParam
from .bch import bch_compose, gerritzen_c
from .canonical import is_inner, reduce, same_coset, shape_report
from .lie import LieElement, bracket
from .oracle import rep_bch
from .parser import parse_endomorphism, parse_lie, parse_matrix
from .utils import dump_json, format_rational, logger, set_logger
from .wreath import JacobianMatrix, embed, jacobian, partials


@dataclass
class CommandResult:
    """A JSON-ready document plus its plain-text rendering."""

    document: Any
    text: Optional[str] = None

    def render(self, param: RenderParam) -> str:
        if param.output == "json" or self.text is None:
            return dump_json(self.document)
        return self.text


def _element_result(u: LieElement) -> CommandResult:
    return CommandResult({"element": str(u)}, str(u))


def _matrix_result(matrix: JacobianMatrix) -> CommandResult:
    rows = matrix.to_strings()
    return CommandResult(rows, dump_json(rows, compact=True))


def _endomorphism_result(phi: IAEndomorphism) -> CommandResult:
    images = phi.to_json()
    return CommandResult(images, "\n".join(f"{k} -> {v}" for k, v in images.items()))


@dataclass
class MetabelianAut:
    """Calculus of IA-automorphisms of the free metabelian nilpotent Lie
    algebra of the given rank and class."""

    rank: int = 2
    nil_class: int = 3
    log_level: str = field(
        default_factory=lambda: os.getenv("METABELIAN_LOG_LEVEL", "WARNING")
    )
    log_file: Optional[str] = None

    def __post_init__(self):
        if self.log_file:
            set_logger(self.log_file)
        level = logging.getLevelName(str(self.log_level).upper())
        if not isinstance(level, int):
            logger.warning(f"Unknown log level {self.log_level!r}, using WARNING")
            level = logging.WARNING
        self.log_level = logging.getLevelName(level)
        logger.setLevel(level)
        self.config = AlgebraConfig(self.rank, self.nil_class)

        logger.info(f"Working in L_{{{self.rank},{self.nil_class}}}")
        _print_config = ",\n  ".join([f"{k} = {v}" for k, v in asdict(self).items()])
        logger.debug(f"MetabelianAut init with param:\n  {_print_config}\n")

    # input

    def element(self, src: str) -> LieElement:
        return parse_lie(src, self.config)

    def endomorphism(self, src: str) -> IAEndomorphism:
        return parse_endomorphism(src, self.config)

    def matrix(self, src: str) -> JacobianMatrix:
        return parse_matrix(src, self.config)

    # commands

    def _get_command_table(self) -> dict[str, Callable[[dict, RenderParam], CommandResult]]:
        return {
            "normalize": self.normalize,
            "bracket": self.bracket,
            "embed": self.embed,
            "partials": self.partials,
            "jacobian": self.jacobian,
            "exp-ad": self.exp_ad,
            "inner-jacobian": self.inner_jacobian,
            "bch": self.bch,
            "gerritzen-table": self.gerritzen_table,
            "compose": self.compose,
            "inverse": self.inverse,
            "from-jacobian": self.from_jacobian,
            "reduce": self.reduce,
            "is-inner": self.is_inner,
            "same-coset": self.same_coset,
            "shape-check": self.shape_check,
        }

    @property
    def commands(self) -> list[str]:
        return list(self._get_command_table())

    def run_command(
        self, name: str, inputs: dict, param: Optional[RenderParam] = None
    ) -> str:
        param = param or RenderParam()
        table = self._get_command_table()
        if name not in table:
            raise KeyError(f"unknown command {name!r}")
        logger.debug(f"Running {name} with inputs {inputs}")
        return table[name](inputs, param).render(param)

    def normalize(self, inputs: dict, param: RenderParam) -> CommandResult:
        return _element_result(self.element(inputs["expr"]))

    def bracket(self, inputs: dict, param: RenderParam) -> CommandResult:
        return _element_result(
            bracket(self.element(inputs["left"]), self.element(inputs["right"]))
        )

    def embed(self, inputs: dict, param: RenderParam) -> CommandResult:
        image = embed(self.element(inputs["expr"]))
        b = [format_rational(x) for x in image.b_coords]
        a = [str(f) for f in image.a_coords]
        lines = [f"b: [{', '.join(b)}]"]
        lines += [f"a{i}: {f}" for i, f in enumerate(a, start=1)]
        return CommandResult({"b": b, "a": a}, "\n".join(lines))

    def partials(self, inputs: dict, param: RenderParam) -> CommandResult:
        derivatives = [str(f) for f in partials(self.element(inputs["expr"]))]
        return CommandResult(
            derivatives,
            "\n".join(f"d/dy{i}: {f}" for i, f in enumerate(derivatives, start=1)),
        )

    def jacobian(self, inputs: dict, param: RenderParam) -> CommandResult:
        return _matrix_result(jacobian(self.endomorphism(inputs["phi"])))

    def exp_ad(self, inputs: dict, param: RenderParam) -> CommandResult:
        return _endomorphism_result(exp_ad(self.element(inputs["expr"])).expansion)

    def inner_jacobian(self, inputs: dict, param: RenderParam) -> CommandResult:
        return _matrix_result(inner_jacobian(self.element(inputs["expr"])))

    def bch(self, inputs: dict, param: RenderParam) -> CommandResult:
        u, v = self.element(inputs["left"]), self.element(inputs["right"])
        w = bch_compose(u, v)
        if param.verify:
            expected = rep_bch(u, v)
            if w != expected:
                raise InvariantViolation(
                    f"bch disagrees with the envelope oracle: {w} vs {expected}"
                )
            logger.info("bch agrees with the envelope oracle")
        return _element_result(w)

    def gerritzen_table(self, inputs: dict, param: RenderParam) -> CommandResult:
        cap = inputs.get("cap")
        if cap is None:
            cap = max(self.config.lie_cap, 0)
        table = gerritzen_c(cap).table()
        document = {
            "cap": cap,
            "coefficients": {mono: format_rational(coef) for mono, coef in table},
        }
        text = "\n".join(f"{mono}: {format_rational(coef)}" for mono, coef in table)
        return CommandResult(document, text)

    def compose(self, inputs: dict, param: RenderParam) -> CommandResult:
        return _endomorphism_result(
            compose(self.endomorphism(inputs["phi"]), self.endomorphism(inputs["psi"]))
        )

    def inverse(self, inputs: dict, param: RenderParam) -> CommandResult:
        return _endomorphism_result(inverse(self.endomorphism(inputs["phi"])))

    def from_jacobian(self, inputs: dict, param: RenderParam) -> CommandResult:
        return _endomorphism_result(from_jacobian(self.matrix(inputs["matrix"])))

    def reduce(self, inputs: dict, param: RenderParam) -> CommandResult:
        return CommandResult(reduce(self.endomorphism(inputs["psi"])).to_json())

    def is_inner(self, inputs: dict, param: RenderParam) -> CommandResult:
        generator = is_inner(self.endomorphism(inputs["psi"]))
        return CommandResult(
            {
                "inner": generator is not None,
                "generator": None if generator is None else str(generator),
            }
        )

    def same_coset(self, inputs: dict, param: RenderParam) -> CommandResult:
        answer = same_coset(
            self.endomorphism(inputs["psi"]), self.endomorphism(inputs["psi2"])
        )
        return CommandResult({"same_coset": answer}, "true" if answer else "false")

    def shape_check(self, inputs: dict, param: RenderParam) -> CommandResult:
        failures = shape_report(self.endomorphism(inputs["psi"]))
        text = "true" if not failures else "false\n" + "\n".join(failures)
        return CommandResult({"canonical": not failures, "failures": failures}, text)
