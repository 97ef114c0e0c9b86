"""Why the printed closed form for m = 4n is not just off by a constant.

The finite Bessel sum for K_m at p = pi/2 was expected to be wrong by a
normalisation constant only.  Dividing it by the series shows a ratio that
moves with u; shifting every factorial argument by one fixes it exactly.

Run:  python3 demos/closed_form_defect.py
"""
import math

import numpy as np

from cfkernel import GeometricFrame, kernel_closed_even, kernel_series

HALF_PI = 0.5 * math.pi

print("  u      v     printed/series (scalar)   corrected - series")
for u, v in [(0.0, 0.5), (0.0, 1.5), (0.3, 0.7), (1.5, 0.6), (-2.0, 0.4), (2.5, 1.8)]:
    f = GeometricFrame.from_uv(u, v)
    ref = kernel_series(4, HALF_PI, f)
    printed = kernel_closed_even(4, f, "as-printed")
    fixed = kernel_closed_even(4, f, "corrected")
    ratio = complex(printed.scalar).real / complex(ref.scalar).real
    print(f"{u:5.1f}  {v:5.1f}   {ratio:14.6f}            {fixed.max_abs_diff(ref):.1e}")

# The ratio is 2 on the line u = 0 only, which is where a single-point
# check would make the defect look like a normalisation error.
us = np.linspace(-3, 3, 7)
f = GeometricFrame.from_uv(us, np.full_like(us, 0.9))
r = np.real(kernel_closed_even(8, f, "as-printed").scalar) / np.real(kernel_series(8, HALF_PI, f).scalar)
print("\nm = 8, v = 0.9, ratio along u:", np.array2string(r, precision=3))
