import argparse

from metabelian.bch import gerritzen_c
from metabelian.utils import format_rational, write_json


def print_bch_table(cap, output_path=None):
    series = gerritzen_c(cap)
    table = series.table()
    print(f"c(t,u) up to degree {cap}: {len(table)} nonzero coefficients")
    for mono, coef in table:
        print(f"  {mono}: {format_rational(coef)}")

    if output_path:
        write_json(
            {mono: format_rational(coef) for mono, coef in table}, output_path
        )
        print(f"Coefficient table saved to: {output_path}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("-c", "--cap", type=int, default=4)
    parser.add_argument("-o", "--output", type=str, default=None)

    args = parser.parse_args()

    print_bch_table(args.cap, args.output)
