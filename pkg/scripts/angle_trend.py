"""Median of sin theta_k over seeds for q = 0, 1, 2 on each named matrix.

usage: python scripts/angle_trend.py [n_seeds]
"""
import sys

import numpy as np

from rsvd_diag.angles import canonical_angles
from rsvd_diag.bounds import ReferenceSvd
from rsvd_diag.sketch import gaussian_guess, rand_svd
from rsvd_diag.testmatrices import NAMED_MATRICES


def medians(A, ref, k=25, rho=20, qs=(0, 1, 2), seeds=range(10)):
    out = []
    for q in qs:
        vals = [
            canonical_angles(rand_svd(A, gaussian_guess(A.shape[1], k + rho, s), q).U_hat, ref.U_k).sines[-1]
            for s in seeds
        ]
        out.append(float(np.median(vals)))
    return out


def main(n_seeds=10):
    for name, spec in NAMED_MATRICES.items():
        A = spec.generate()
        m = medians(A, ReferenceSvd.from_matrix(A, 25), seeds=range(n_seeds))
        flag = "decreasing" if m[0] > m[1] > m[2] else "NOT decreasing"
        print(f"{name:12s} " + "  ".join(f"{v:.3e}" for v in m) + f"  {flag}")


if __name__ == "__main__":
    main(*[int(a) for a in sys.argv[1:]])
