"""Compare two right-hand sides for the post-extraction sin-theta inequality at k = 15.

The stated form scales max(sin theta'_k, sin nu'_k); the residual form scales
max(||E12||, ||E21||) / zeta. Prints failure counts for each.
"""
import numpy as np

from rsvd_diag.bounds import ReferenceSvd
from rsvd_diag.report import build_report
from rsvd_diag.sketch import gaussian_guess
from rsvd_diag.testmatrices import NAMED_MATRICES


def main(k=15, rho=20, n_seeds=5, tol=1e-10):
    total = 0
    fails = {"scaled_angle": 0, "residual_angle": 0}
    worst = {key: np.inf for key in fails}
    for name, spec in NAMED_MATRICES.items():
        A = spec.generate()
        ref = ReferenceSvd.from_matrix(A, k)
        for q in (0, 1, 2):
            for seed in range(n_seeds):
                rep = build_report(A, ref, gaussian_guess(A.shape[1], k + rho, seed), q, matrix=name, seed=seed)
                total += 1
                for key in fails:
                    slack = min(e.slack for e in rep.select(key))
                    worst[key] = min(worst[key], slack)
                    if slack < -tol:
                        fails[key] += 1
                        print(f"{key:22s} fails: {name} q={q} seed={seed} slack={slack:.3e}")
    for key in fails:
        print(f"{key:22s} {fails[key]}/{total} runs fail, worst slack {worst[key]:.3e}")


if __name__ == "__main__":
    main()
