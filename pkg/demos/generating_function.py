"""Even-dimensional kernels as Taylor coefficients of one generating function.

G_p(x, y, a) = sum_j K_{2j+2}^p(x, y) a^j / j!, so a single truncated Taylor
expansion in a yields m = 2, 4, 6, ... at once.

Run:  python3 demos/generating_function.py
"""
import math

from cfkernel import GeometricFrame, genfun_closed, genfun_coeffs, genfun_integral, genfun_matrix, kernel_series

p = 1.1
frame = GeometricFrame.from_uv(0.6, 1.3)

print("three forms of the generating function at a = 0.4 + 0.2i")
a = 0.4 + 0.2j
for name, val in [("closed", genfun_closed(p, frame, a)), ("matrix", genfun_matrix(p, frame, a))]:
    print(f"  {name:<7} {complex(val.scalar):.12f}  {complex(val.bivector_coeff):.12f}")
g = genfun_integral(frame, 0.4)
c = genfun_closed(0.5 * math.pi, frame, 0.4)
print(f"  integral form vs closed form at p = pi/2, a = 0.4: {g.max_abs_diff(c):.1e}")

print("\nTaylor coefficients against the series")
for j, val in enumerate(genfun_coeffs(p, frame, 4)):
    m = 2 * j + 2
    if m == 2:
        print(f"  m = {m:2d}: {complex(val.scalar):.10f}")
    else:
        print(f"  m = {m:2d}: {complex(val.scalar):.10f}   |diff| = {val.max_abs_diff(kernel_series(m, p, frame)):.1e}")
