import os
from fractions import Fraction

import numpy as np
import pytest

from metabelian.autgroup import IAEndomorphism
from metabelian.base import AlgebraConfig
from metabelian.lie import LieElement
from metabelian.series import TruncPoly

SEED = 20241018

# raise with METABELIAN_SAMPLES=50 for acceptance runs
SAMPLES = int(os.getenv("METABELIAN_SAMPLES", "4"))

if os.getenv("METABELIAN_FULL_GRID") == "1":
    GRID = [(m, c) for m in (2, 3, 4) for c in (3, 4, 5, 6)]
else:
    GRID = [(2, 3), (2, 4), (3, 3), (3, 4), (4, 4)]


class RandomAlgebra:
    """Seeded random elements of L_{m,c} and its IA-endomorphisms."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def rational(self, bound: int = 5) -> Fraction:
        return Fraction(
            int(self.rng.integers(-bound, bound + 1)), int(self.rng.integers(1, 4))
        )

    def poly(
        self,
        num_vars: int,
        cap: int,
        min_var: int = 1,
        n_terms: int = 3,
        constant: bool = True,
    ) -> TruncPoly:
        low = 0 if constant else 1
        terms = {}
        if cap < low:
            return TruncPoly(num_vars, cap)
        for _ in range(n_terms):
            degree = int(self.rng.integers(low, cap + 1))
            mono = [0] * num_vars
            for _ in range(degree):
                mono[int(self.rng.integers(min_var - 1, num_vars))] += 1
            terms[tuple(mono)] = self.rational()
        return TruncPoly(num_vars, cap, terms)

    def commutator(self, config: AlgebraConfig, density: float = 0.6) -> LieElement:
        quad = {}
        for q in range(1, config.rank + 1):
            for p in range(q + 1, config.rank + 1):
                if self.rng.random() < density:
                    quad[(p, q)] = self.poly(config.rank, config.lie_cap, min_var=q)
        return LieElement.from_quad(config, quad)

    def lie(self, config: AlgebraConfig) -> LieElement:
        linear = [int(x) for x in self.rng.integers(-3, 4, size=config.rank)]
        return self.commutator(config) + LieElement.from_linear(config, linear)

    def ia(self, config: AlgebraConfig) -> IAEndomorphism:
        return IAEndomorphism(
            config, tuple(self.commutator(config) for _ in range(config.rank))
        )


@pytest.fixture
def gen():
    return RandomAlgebra(np.random.default_rng(SEED))


@pytest.fixture
def samples():
    return SAMPLES


def pytest_generate_tests(metafunc):
    if "config" in metafunc.fixturenames:
        metafunc.parametrize(
            "config",
            [AlgebraConfig(m, c) for m, c in GRID],
            ids=[f"m{m}c{c}" for m, c in GRID],
        )
