#!/usr/bin/env python3
"""Golden generator: exact covariant derivative of curvature for the
perturbed flat metric g_ij = delta_ij (1 + eps x1^2) in dimension 3,
evaluated symbolically at the probe point (1/2, 0, 0) with eps = 1/10.

The result is an exact rational (0,5)-tensor. Its inf-norm and the inf-norm
of its six-term image fix the detection thresholds for the numerical
pipeline: the finite-difference computation at the same point must reach at
least threshold_factor of each exact norm.

Also verifies, exactly, that the symbolic tensor satisfies all four
symmetry-class constraints (skew 1,2; pair exchange; cyclic 1,2,3; cyclic
3,4,5) -- a joint consistency check of the curvature formulas and the
constraint transcriptions.

Writes goldens/perturbed_flat_nabla_r.json and
goldens/curvature_thresholds.json. Run from the repository root:
    python3 scripts/oracle_perturbed_flat.py
"""
from itertools import product
import hashlib
import json
import os
import sys

import sympy as sp

N = 3
EPS = sp.Rational(1, 10)
POINT = (sp.Rational(1, 2), 0, 0)
THRESHOLD_FACTOR = sp.Rational(9, 10)

PHI_READS = [
    (0, 1, 2, 3, 4), (2, 1, 4, 3, 0), (4, 1, 0, 3, 2),
    (0, 3, 2, 1, 4), (2, 3, 4, 1, 0), (4, 3, 0, 1, 2),
]


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "goldens"
    xs = sp.symbols(f"x0:{N}")
    f = 1 + EPS * xs[0] ** 2
    g = sp.eye(N) * f
    ginv = g.inv()

    gamma = [[[sp.simplify(
        sum(ginv[i, l] * (sp.diff(g[l, j], xs[k]) + sp.diff(g[l, k], xs[j])
                          - sp.diff(g[j, k], xs[l])) for l in range(N)) / 2)
        for k in range(N)] for j in range(N)] for i in range(N)]

    rup = [[[[sp.simplify(
        sp.diff(gamma[i][l][j], xs[k]) - sp.diff(gamma[i][k][j], xs[l])
        + sum(gamma[i][k][m] * gamma[m][l][j]
              - gamma[i][l][m] * gamma[m][k][j] for m in range(N)))
        for l in range(N)] for k in range(N)] for j in range(N)] for i in range(N)]

    rlow = [[[[sp.simplify(sum(g[i, m] * rup[m][j][k][l] for m in range(N)))
               for l in range(N)] for k in range(N)] for j in range(N)] for i in range(N)]

    point_sub = dict(zip(xs, POINT))
    values = {}
    for i, j, k, l, m in product(range(N), repeat=5):
        expr = sp.diff(rlow[i][j][k][l], xs[m])
        for p in range(N):
            expr -= gamma[p][m][i] * rlow[p][j][k][l]
            expr -= gamma[p][m][j] * rlow[i][p][k][l]
            expr -= gamma[p][m][k] * rlow[i][j][p][l]
            expr -= gamma[p][m][l] * rlow[i][j][k][p]
        values[(i, j, k, l, m)] = sp.nsimplify(expr.subs(point_sub))

    def read(idx, pattern):
        return values[tuple(idx[pattern[t]] for t in range(5))]

    residuals = [
        max(abs(values[idx] + read(idx, (1, 0, 2, 3, 4))) for idx in values),
        max(abs(values[idx] - read(idx, (2, 3, 0, 1, 4))) for idx in values),
        max(abs(values[idx] + read(idx, (1, 2, 0, 3, 4))
                + read(idx, (2, 0, 1, 3, 4))) for idx in values),
        max(abs(values[idx] + read(idx, (0, 1, 3, 4, 2))
                + read(idx, (0, 1, 4, 2, 3))) for idx in values),
    ]
    print("exact constraint residuals:", residuals)
    assert all(r == 0 for r in residuals), "symbolic tensor violates the class constraints"

    norm = max(abs(v) for v in values.values())
    six_image_norm = max(
        abs(sum(read(idx, p) for p in PHI_READS)) for idx in values
    )
    print(f"inf-norm = {norm} = {float(norm):.12f}")
    print(f"six-term image inf-norm = {six_image_norm} = {float(six_image_norm):.12f}")
    assert norm > 0 and six_image_norm > 0

    entries = []
    for idx in product(range(N), repeat=5):
        v = values[idx]
        entries.append(f"{v.p}/{v.q}")

    with open(__file__, "rb") as fh:
        script_hash = hashlib.sha256(fh.read()).hexdigest()
    os.makedirs(out_dir, exist_ok=True)
    tensor_doc = {
        "dim": N,
        "rank": 5,
        "kind": "rational",
        "entries": entries,
    }
    with open(os.path.join(out_dir, "perturbed_flat_nabla_r.json"), "w") as fh:
        json.dump(tensor_doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
    thresholds_doc = {
        "schema_version": 1,
        "metric": "perturbed-flat",
        "eps": f"{EPS.p}/{EPS.q}",
        "point": [float(c) for c in POINT],
        "nabla_r_inf_norm": f"{norm.p}/{norm.q}",
        "six_term_image_inf_norm": f"{six_image_norm.p}/{six_image_norm.q}",
        "threshold_factor": f"{THRESHOLD_FACTOR.p}/{THRESHOLD_FACTOR.q}",
        "oracle": "scripts/oracle_perturbed_flat.py",
        "oracle_sha256": script_hash,
    }
    with open(os.path.join(out_dir, "curvature_thresholds.json"), "w") as fh:
        json.dump(thresholds_doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote goldens under {out_dir}")


if __name__ == "__main__":
    main()
