"""Rejection rate of the uniform-channel test when the model is true."""
import argparse

from ucm import lrt_ucm
from ucm.synthetic import random_ucm, sample


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="3x3")
    parser.add_argument("--n", type=int, default=5000)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--cyclic", action="store_true")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    sizes = tuple(int(v) for v in args.sizes.lower().split("x"))
    kind = "cyclic" if args.cyclic else "general"
    rejected = 0
    for t in range(args.trials):
        spec = random_ucm(sizes, kind, (args.seed, 0, t))
        table = sample(spec, args.n, (args.seed, 1, t))
        rejected += lrt_ucm(table, kind).p_value < args.alpha
    print(f"{kind} {args.sizes} n={args.n}: rejected {rejected}/{args.trials} "
          f"= {rejected / args.trials:.3f} at alpha={args.alpha}")


if __name__ == "__main__":
    main()
