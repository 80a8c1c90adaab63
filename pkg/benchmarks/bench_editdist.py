"""Compare the compiled and pure-Python edit-distance kernels.

Run from the repository root:

    python3 benchmarks/bench_editdist.py [--pairs 20000] [--max-len 24]

Prints throughput for both backends on identical random workloads: the
exact kernel on general pairs, and the bounded kernel at a small limit
(the nearest-neighbor access pattern, where most pairs exit early).
"""

from __future__ import annotations

import argparse
import random
import string
import time

from dialex import editdist

ALPHABET = string.ascii_lowercase + "äöüßåéè'"


def make_pairs(count: int, max_len: int, seed: int) -> list[tuple[str, str]]:
    rng = random.Random(seed)
    pairs = []
    for _ in range(count):
        a = "".join(
            rng.choice(ALPHABET) for _ in range(rng.randint(0, max_len))
        )
        if rng.random() < 0.5:
            # Mutate a into b so many pairs sit near the band limit.
            chars = list(a)
            for _ in range(rng.randint(0, 4)):
                if not chars:
                    break
                op = rng.randrange(3)
                pos = rng.randrange(len(chars))
                if op == 0:
                    chars[pos] = rng.choice(ALPHABET)
                elif op == 1:
                    del chars[pos]
                else:
                    chars.insert(pos, rng.choice(ALPHABET))
            b = "".join(chars)
        else:
            b = "".join(
                rng.choice(ALPHABET) for _ in range(rng.randint(0, max_len))
            )
        pairs.append((a, b))
    return pairs


def bench(name: str, func, pairs, *extra) -> float:
    start = time.perf_counter()
    total = 0
    for a, b in pairs:
        total += func(a, b, *extra)
    elapsed = time.perf_counter() - start
    rate = len(pairs) / elapsed
    print(f"  {name:<28} {elapsed * 1000.0:8.1f} ms   {rate:12,.0f} pairs/s   checksum {total}")
    return elapsed


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=20000)
    parser.add_argument("--max-len", type=int, default=24)
    parser.add_argument("--limit", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    pairs = make_pairs(args.pairs, args.max_len, args.seed)
    print(f"workload: {args.pairs} pairs, length <= {args.max_len}, seed {args.seed}")
    print(f"active backend: {editdist.BACKEND}")

    print("exact distance:")
    t_py = bench("pure python", editdist.py_levenshtein, pairs)
    if editdist.BACKEND == "c":
        t_c = bench("compiled", editdist.levenshtein, pairs)
        print(f"  speedup: {t_py / t_c:.1f}x")
    else:
        print("  compiled backend unavailable; skipping comparison")

    print(f"bounded distance (limit {args.limit}):")
    t_py = bench(
        "pure python", editdist.py_levenshtein_bounded, pairs, args.limit
    )
    if editdist.BACKEND == "c":
        t_c = bench("compiled", editdist.levenshtein_bounded, pairs, args.limit)
        print(f"  speedup: {t_py / t_c:.1f}x")


if __name__ == "__main__":
    main()
