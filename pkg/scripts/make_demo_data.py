#!/usr/bin/env python3
"""Write the synthetic stand-in corpus: split files, a monolingual pool and a dictionary."""

import argparse

from stif.demo import write_demo_data


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("out", help="directory to create")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mono-size", type=int, default=5000)
    args = p.parse_args()
    d = write_demo_data(args.out, args.seed, args.mono_size)
    print(f"wrote {d}/{{train,dev,test}}.{{inf,for}}, {d}/mono.txt, {d}/dictionary.tsv")


if __name__ == "__main__":
    main()
