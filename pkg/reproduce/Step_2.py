import argparse

from metabelian import AlgebraConfig
from metabelian.autgroup import compose, exp_ad
from metabelian.canonical import rank2_theta, reduce, shape_report
from metabelian.parser import parse_lie, parse_poly
from metabelian.utils import dump_json


def walk_through(nil_class, f1, f2, u):
    config = AlgebraConfig(2, nil_class)
    cap = config.derivative_cap
    theta = rank2_theta(config, parse_poly(f1, 2, cap), parse_poly(f2, 2, cap))
    print(f"theta: {theta}")
    print(f"canonical shape failures: {shape_report(theta) or 'none'}")

    generator = parse_lie(u, config)
    psi = compose(exp_ad(generator).expansion, theta)
    print(f"psi = exp(ad {generator}) theta: {psi}")

    trace = reduce(psi)
    print("Reduction trace:")
    print(dump_json(trace.to_json()))
    if trace.canonical.theta == theta:
        print("The reduction recovers theta.")
    else:
        print("The reduction ended at a different representative.")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("-c", "--nil_class", type=int, default=4)
    parser.add_argument("--f1", type=str, default="t2")
    parser.add_argument("--f2", type=str, default="t2^2")
    parser.add_argument("-u", "--generator", type=str, default="y1 + 2*y2 + [y2,y1,y2]")

    args = parser.parse_args()

    walk_through(args.nil_class, args.f1, args.f2, args.generator)
