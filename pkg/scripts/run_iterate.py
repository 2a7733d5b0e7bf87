#!/usr/bin/env python3
"""Run iterative forward translation and print the BLEU curve per iteration."""

import argparse
import logging

from stif.config import RunConfig
from stif.corpus import load_parallel, read_monolingual
from stif.semisup import iterate


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("data", help="split directory or TSV corpus")
    p.add_argument("mono", help="monolingual informal sentences")
    p.add_argument("run_dir")
    p.add_argument("--config", help="run configuration file")
    p.add_argument("--iterations", type=int)
    p.add_argument("--sample-size", type=int)
    p.add_argument("--workers", type=int)
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    parallel = load_parallel(args.data, None, cfg.split_sizes, cfg.seed)
    reports = iterate(parallel, read_monolingual(args.mono), args.iterations, args.sample_size, cfg,
                      args.run_dir, args.workers)
    base = reports[0].test_bleu
    for r in reports:
        print(f"iter {r.iteration:2d}  dev {r.dev_bleu:6.2f}  test {r.test_bleu:6.2f}  "
              f"delta {r.test_bleu - base:+.2f}  synthetic {r.synthetic_size}")


if __name__ == "__main__":
    main()
