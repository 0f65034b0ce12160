import argparse
from fractions import Fraction

import numpy as np

from metabelian import AlgebraConfig
from metabelian.autgroup import exp_ad, inner_jacobian
from metabelian.lie import LieElement
from metabelian.series import TruncPoly
from metabelian.wreath import jacobian


def random_element(config, rng, density=0.5):
    linear = [int(x) for x in rng.integers(-3, 4, size=config.rank)]
    quad = {}
    for q in range(1, config.rank + 1):
        for p in range(q + 1, config.rank + 1):
            terms = {}
            for degree in range(config.lie_cap + 1):
                if rng.random() > density:
                    continue
                mono = [0] * config.rank
                for _ in range(degree):
                    mono[int(rng.integers(q - 1, config.rank))] += 1
                terms[tuple(mono)] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
            if terms:
                quad[(p, q)] = TruncPoly(config.rank, config.lie_cap, terms)
    return LieElement.from_quad(config, quad, linear)


def check_inner_jacobians(rank, nil_class, samples, seed):
    config = AlgebraConfig(rank, nil_class)
    rng = np.random.default_rng(seed)
    failures = 0
    for index in range(samples):
        u = random_element(config, rng)
        closed_form = inner_jacobian(u)
        expanded = jacobian(exp_ad(u).expansion)
        if closed_form != expanded:
            failures += 1
            print(f"Mismatch for sample {index}: u = {u}")
    print(
        f"L_{{{rank},{nil_class}}}: {samples - failures}/{samples} inner Jacobians "
        "agree with the expanded exp(ad u)"
    )
    return failures


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("-m", "--rank", type=int, default=3)
    parser.add_argument("-c", "--nil_class", type=int, default=4)
    parser.add_argument("-n", "--samples", type=int, default=50)
    parser.add_argument("-s", "--seed", type=int, default=0)

    args = parser.parse_args()

    check_inner_jacobians(args.rank, args.nil_class, args.samples, args.seed)
