"""The Gaussian exp(-|x|^2/2) is a fixed point of the transform.

Run:  python3 demos/gaussian_transform.py      (about half a minute, mostly m = 4)
"""
import math
import time

from cfkernel import gaussian_invariance_report

for m, order in [(2, 64), (3, 24), (4, 20)]:
    for p in (0.0, 0.7, 0.5 * math.pi):
        start = time.perf_counter()
        rep = gaussian_invariance_report(m, p, order, n_radii=3, n_dirs=4)
        print(
            f"m = {m}, p = {p:.3f}, {order}^{m} nodes: max relative error {rep['max_rel']:.1e} "
            f"over {rep['n_targets']} targets ({time.perf_counter() - start:.1f} s)"
        )
