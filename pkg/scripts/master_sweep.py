"""Worst slack per bound quantity over the named matrices, q in {0,1,2}, 5 seeds.

usage: python scripts/master_sweep.py [k] [n_seeds]
"""
import collections
import sys
import time

import numpy as np

from rsvd_diag.bounds import ReferenceSvd
from rsvd_diag.report import QUANTITIES, build_report
from rsvd_diag.sketch import gaussian_guess
from rsvd_diag.testmatrices import NAMED_MATRICES


def main(k=25, n_seeds=5, rho=20):
    worst = collections.defaultdict(lambda: (np.inf, None))
    t0 = time.perf_counter()
    for name, spec in NAMED_MATRICES.items():
        A = spec.generate()
        ref = ReferenceSvd.from_matrix(A, k)
        for q in (0, 1, 2):
            for seed in range(n_seeds):
                rep = build_report(A, ref, gaussian_guess(A.shape[1], k + rho, seed), q, matrix=name, seed=seed)
                for e in rep.entries:
                    if e.slack < worst[e.quantity][0]:
                        worst[e.quantity] = (e.slack, (name, q, seed, e.j, e.norm_spec))
    print(f"elapsed {time.perf_counter() - t0:.1f} s")
    for qty, (slack, where) in sorted(worst.items()):
        print(f"{qty:22s} {QUANTITIES[qty].kind:11s} {slack: .3e}  {where}")


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:]]
    main(*args)
