#!/usr/bin/env python3
"""Cross-language determinism check.

Reimplements the documented pipeline (key derivation, auxiliary fields,
backward cluster, coupled evaluation) from docs/determinism.md alone and
verifies the CLI reproduces it bit-exactly. Run with the CLI path as argv[1].
"""

import json
import subprocess
import sys
import tempfile

MASK = (1 << 64) - 1


def mix(x):
    x &= MASK
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK
    x ^= x >> 31
    return x


def zigzag(v):
    return ((v << 1) ^ (v >> 63)) & MASK


def word(seed, rep, i, j, stream):
    h = 0x9E3779B97F4A7C15
    for w in (seed, rep, zigzag(i), zigzag(j), stream):
        h = mix(h ^ w)
    return h


def unif(seed, rep, i, j, stream):
    return ((word(seed, rep, i, j, stream) >> 11) + 0.5) * 2.0**-53


def invcdf(p, u):
    c, last = 0.0, 0
    for z, x in enumerate(p):
        c += x
        if x > 0:
            last = z
        if c > u:
            return z
    return last


K2 = {
    (0, 0): (0.7, 0.3),
    (0, 1): (0.6, 0.4),
    (1, 0): (0.6, 0.4),
    (1, 1): (0.2, 0.8),
}
DELTA, PHI = 0.5, (0.4, 0.6)
H = {
    (0, 0): (1.0, 0.0),
    (0, 1): (0.8, 0.2),
    (1, 0): (0.8, 0.2),
    (1, 1): (0.0, 1.0),
}


def parents(s):
    return ((s[0] - 1, s[1]), (s[0], s[1] - 1))


def perfect_sample(seed, rep, m, n):
    z = lambda s: 0 if unif(seed, rep, s[0], s[1], 0) < DELTA else 1
    box = {(i, j) for i in range(1, m + 1) for j in range(1, n + 1)}
    interior_boundary = {s for s in box if any(p not in box for p in parents(s))}
    core = {s for s in interior_boundary if z(s) == 1}
    frontier = set(core)
    while frontier:
        nxt = {p for s in frontier for p in parents(s) if p not in core and z(p) == 1}
        core |= nxt
        frontier = nxt
    omega = core | {p for s in core for p in parents(s) if p not in core}
    values = {}
    for s in sorted(box | omega, key=lambda s: (s[0] + s[1], s[0])):
        if z(s) == 0:
            values[s] = invcdf(PHI, unif(seed, rep, s[0], s[1], 1))
        else:
            pair = (values[parents(s)[0]], values[parents(s)[1]])
            values[s] = invcdf(H[pair], unif(seed, rep, s[0], s[1], 2))
    return values


def main():
    cli = sys.argv[1]
    seed, reps, m, n = 123456789, 4, 3, 2
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        json.dump({"states": 2, "table": [[[0.7, 0.3], [0.6, 0.4]], [[0.6, 0.4], [0.2, 0.8]]]}, f)
        kernel_path = f.name
    out = subprocess.run(
        [cli, "sample", "--kernel", kernel_path, "--window", str(m), str(n),
         "--reps", str(reps), "--seed", str(seed)],
        check=True, capture_output=True, text=True).stdout
    got = [line for line in out.splitlines() if line and not line.startswith(("#", "rep,"))]

    want = []
    for rep in range(reps):
        values = perfect_sample(seed, rep, m, n)
        for j in range(1, n + 1):
            for i in range(1, m + 1):
                want.append(f"{rep},{i},{j},{values[(i, j)]}")

    if got != want:
        for a, b in zip(want, got):
            if a != b:
                print(f"mismatch: reimplementation {a} vs CLI {b}", file=sys.stderr)
        sys.exit(1)
    print(f"ok: {len(want)} values reproduced bit-exactly")


if __name__ == "__main__":
    main()
