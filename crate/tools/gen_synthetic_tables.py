#!/usr/bin/env python3
"""Generate a synthetic 16-table low-entropy code set.

These tables are NOT the standard's tables. They exist so the encoder can be
exercised end to end with a full set of 16 code indices. Table i codes runs
of zeros up to length R_i, terminated by a nonzero symbol, a symbol limit
L_i, or the escape X. Codewords are Huffman codes under a geometric source
model whose mean shrinks with the table index.

Usage: gen_synthetic_tables.py > crates/core/fixtures/synthetic16.tbl
"""

import heapq
import itertools
import math
import sys

LIMITS = [8, 7, 6, 6, 5, 4, 4, 3, 3, 2, 2, 2, 1, 1, 1, 0]
T0 = 1 << 17
RATIO = 0.7
PMIN = 2.0 ** -22


def huffman_lengths(weights):
    counter = itertools.count()
    heap = [(w, next(counter), [i]) for i, w in enumerate(weights)]
    heapq.heapify(heap)
    lengths = [0] * len(weights)
    if len(heap) == 1:
        return [1]
    while len(heap) > 1:
        w1, _, a = heapq.heappop(heap)
        w2, _, b = heapq.heappop(heap)
        for i in a + b:
            lengths[i] += 1
        heapq.heappush(heap, (w1 + w2, next(counter), a + b))
    return lengths


def canonical(lengths):
    order = sorted(range(len(lengths)), key=lambda i: (lengths[i], i))
    codes = [0] * len(lengths)
    code, prev = 0, lengths[order[0]]
    for n, i in enumerate(order):
        if n:
            code = (code + 1) << (lengths[i] - prev)
        prev = lengths[i]
        codes[i] = code
    return codes


def table(i):
    limit = LIMITS[i]
    threshold = max(1, round(T0 * RATIO**i))
    run = i // 2 + 1
    # geometric source with mean proportional to the threshold
    mean = threshold / (1 << 16)
    q = 1.0 / (1.0 + mean)
    p = lambda s: q * (1 - q) ** s
    p_escape = (1 - q) ** (limit + 1)

    seqs, probs = [], []
    for j in range(run):
        zeros = [0] * j
        for s in range(1, limit + 2):
            seqs.append(zeros + [s])
            prob = p(s) if s <= limit else p_escape
            probs.append(max(PMIN, p(0) ** j * prob))
    seqs.append([0] * run)
    probs.append(max(PMIN, p(0) ** run))

    lengths = huffman_lengths(probs)
    codes = canonical(lengths)
    width = max(1, math.ceil(math.log2(run + 1)))

    def fmt(s):
        if not s:
            return "-"
        parts = ["X" if v == limit + 1 else str(v) for v in s]
        return "".join(parts) if limit <= 8 else ",".join(parts)

    lines = [f"table {i} threshold={threshold} limit={limit}"]
    for s, n, c in zip(seqs, lengths, codes):
        lines.append(f"code {fmt(s)} {n}'b{c:0{n}b}")
    for j in range(run):
        lines.append(f"flush {fmt([0] * j)} {width + 1}'b1{j:0{width}b}")
    lines.append("end")
    return lines


def main():
    out = [
        "# Synthetic low-entropy code tables (not the standard's tables).",
        "# Generated by tools/gen_synthetic_tables.py; do not edit by hand.",
    ]
    for i in range(16):
        out.extend(table(i))
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
