"""How often is the reverse of a random uniform channel itself uniform?

Draws random models, inverts the channel with Bayes' rule and checks the
reverse channel for uniformity.  Any exception is printed with its
parameters as JSON.
"""
import argparse

import numpy as np

from ucm import Kind, is_uniform_channel, reverse_channel
from ucm.synthetic import random_ucm


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--draws", type=int, default=500)
    parser.add_argument("--max-size", type=int, default=4)
    parser.add_argument("--tol", type=float, default=1e-6)
    parser.add_argument("--cyclic", action="store_true")
    parser.add_argument("--seed", type=int, default=6)
    args = parser.parse_args(argv)

    kind = Kind.CYCLIC if args.cyclic else Kind.GENERAL
    rng = np.random.default_rng(args.seed)
    exceptions = 0
    for i in range(args.draws):
        nx, ny = (int(v) for v in rng.integers(2, args.max_size + 1, size=2))
        spec = random_ucm((nx, ny), kind, (args.seed, i))
        rev, _ = reverse_channel(spec.channel(), spec.marginal)
        if is_uniform_channel(rev, kind, tol=args.tol):
            exceptions += 1
            print("uniform reverse:", spec.to_json())
    print(f"{args.draws - exceptions}/{args.draws} reverse channels are not uniform")


if __name__ == "__main__":
    main()
