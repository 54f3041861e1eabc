#!/usr/bin/env python3
"""Golden generator: dimension of the symmetry class S_n of (0,5)-tensors
for n = 2..6, computed by two independent constructions.

Construction A (constraint nullspace): stack the four symmetry constraints
(skew in slots 1,2; symmetric under swapping the first and second index
pairs; cyclic sum over slots 1,2,3; cyclic sum over slots 3,4,5) as one
linear system and compute the exact kernel dimension. The system is block
diagonal over orbits of multi-indices under slot permutations (an orbit is
determined by the multiset of index values), so elimination runs per orbit
in exact rational arithmetic.

Construction B (projector image): enumerate the signed orbit sums fixed by
the group generated by (swap(1,2), sign -1) and ((13)(24), sign +1) -- an
exact combinatorial basis of the subspace cut out by the first two
constraints -- then subtract the rank of the two cyclic constraints
restricted to that fixed space, computed modulo two large primes.

Writes goldens/symclass_dims.json. Run from the repository root:
    python3 scripts/oracle_symclass_dims.py
"""
from fractions import Fraction
from itertools import product
from collections import defaultdict
import hashlib
import json
import os
import sys

K = 5

IDP = (0, 1, 2, 3, 4)
SW01 = (1, 0, 2, 3, 4)
PAIR = (2, 3, 0, 1, 4)
# constraints as lists of (reads pattern, coefficient):
# a row for output index J reads sum_t c_t * T[J o t]
CONSTRAINTS = [
    [(IDP, 1), (SW01, 1)],
    [(IDP, 1), (PAIR, -1)],
    [(IDP, 1), ((1, 2, 0, 3, 4), 1), ((2, 0, 1, 3, 4), 1)],
    [(IDP, 1), ((0, 1, 3, 4, 2), 1), ((0, 1, 4, 2, 3), 1)],
]


def flat(idx, n):
    f = 0
    for v in idx:
        f = f * n + v
    return f


def orbits(n):
    groups = defaultdict(list)
    for idx in product(range(n), repeat=K):
        groups[tuple(sorted(idx))].append(idx)
    return list(groups.values())


def orbit_kernel_dim(orbit, n):
    cols = {flat(j, n): i for i, j in enumerate(orbit)}
    w = len(orbit)
    rows = set()
    for j in orbit:
        for terms in CONSTRAINTS:
            row = [0] * w
            for reads, c in terms:
                row[cols[flat(tuple(j[reads[m]] for m in range(K)), n)]] += c
            if any(row):
                rows.add(tuple(row))
    rows = [list(map(Fraction, r)) for r in sorted(rows)]
    rank = 0
    for c in range(w):
        sel = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        pivot = rows[rank][c]
        rows[rank] = [x / pivot for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return w - rank


def constraint_nullspace_dim(n):
    return sum(orbit_kernel_dim(orbit, n) for orbit in orbits(n))


def signed_fixed_space(n):
    gens = [(SW01, -1), (PAIR, 1)]
    elems = {(IDP, 1)}
    frontier = [(IDP, 1)]
    while frontier:
        t, s = frontier.pop()
        for gt, gs in gens:
            ne = (tuple(t[gt[m]] for m in range(K)), s * gs)
            if ne not in elems:
                elems.add(ne)
                frontier.append(ne)
    elems = sorted(elems)
    basis = []
    seen = set()
    for j in product(range(n), repeat=K):
        if j in seen:
            continue
        signs = {}
        ok = True
        for t, s in elems:
            jj = tuple(j[t[m]] for m in range(K))
            if jj in signs and signs[jj] != s:
                ok = False
            signs[jj] = s
        seen |= set(signs)
        if ok:
            basis.append({flat(jj, n): s for jj, s in signs.items()})
    return basis


def apply_reads_sparse(vec, terms, n):
    out = defaultdict(int)
    for reads, c in terms:
        inv = [0] * K
        for m in range(K):
            inv[reads[m]] = m
        for f, val in vec.items():
            idx = []
            x = f
            for _ in range(K):
                idx.append(x % n)
                x //= n
            idx = idx[::-1]
            jj = tuple(idx[inv[m]] for m in range(K))
            out[flat(jj, n)] += c * val
    return {k: v for k, v in out.items() if v}


def rank_modp(rows, width_map, p):
    mat = []
    for row in rows:
        dense = [0] * len(width_map)
        for c, v in row.items():
            dense[width_map[c]] = v % p
        mat.append(dense)
    rank = 0
    w = len(width_map)
    for c in range(w):
        sel = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if sel is None:
            continue
        mat[rank], mat[sel] = mat[sel], mat[rank]
        inv = pow(mat[rank][c], p - 2, p)
        mat[rank] = [(x * inv) % p for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def projector_image_dim(n):
    fixed = signed_fixed_space(n)
    width = n ** K
    rows = []
    support = set()
    for vec in fixed:
        row = {}
        for f, v in apply_reads_sparse(vec, CONSTRAINTS[2], n).items():
            row[f] = v
        for f, v in apply_reads_sparse(vec, CONSTRAINTS[3], n).items():
            row[f + width] = v
        rows.append(row)
        support |= set(row)
    width_map = {c: i for i, c in enumerate(sorted(support))}
    r1 = rank_modp(rows, width_map, 1_000_003)
    r2 = rank_modp(rows, width_map, 999_983)
    assert r1 == r2, f"rank disagreement mod two primes at n={n}"
    return len(fixed) - r1


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "goldens"
    a = {}
    b = {}
    for n in range(2, 7):
        a[str(n)] = constraint_nullspace_dim(n)
        b[str(n)] = projector_image_dim(n)
        status = "agree" if a[str(n)] == b[str(n)] else "DISAGREE"
        print(f"n={n}: constraint-nullspace {a[str(n)]}, projector-image {b[str(n)]} ({status})")
    assert a == b, "constructions disagree; goldens not written"
    with open(__file__, "rb") as f:
        script_hash = hashlib.sha256(f.read()).hexdigest()
    doc = {
        "schema_version": 1,
        "constraint_nullspace": a,
        "projector_image": b,
        "oracle": "scripts/oracle_symclass_dims.py",
        "oracle_sha256": script_hash,
    }
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "symclass_dims.json")
    with open(path, "w") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
