#!/usr/bin/env python3
"""Print the three-row baseline table for a corpus, with per-method timings."""

import argparse

from stif.config import RunConfig
from stif.corpus import load_parallel
from stif.lexicon import load_dictionary
from stif.semisup import benchmark, format_benchmark


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("data", help="split directory or TSV corpus")
    p.add_argument("--dict", help="informal->formal dictionary")
    p.add_argument("--config", help="run configuration file")
    args = p.parse_args()
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    parallel = load_parallel(args.data, None, cfg.split_sizes, cfg.seed)
    rows = benchmark(parallel, load_dictionary(args.dict) if args.dict else None, cfg)
    print(format_benchmark(rows))
    for r in rows:
        print(f"# {r.method}: {r.seconds:.2f}s")


if __name__ == "__main__":
    main()
