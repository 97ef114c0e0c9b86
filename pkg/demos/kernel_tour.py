"""A short tour of the kernel K_m^p and its representations.

Run:  python3 demos/kernel_tour.py
"""
import math

from cfkernel import GeometricFrame, KernelRequest, Strategy, frame_of, kernel

HALF_PI = 0.5 * math.pi

# The kernel only depends on x and y through the frame (u, v, t):
# u = (x, y), v = |x ^ y| and t = |x| |y|.
x, y = [0.4, -0.2, 0.9, 0.1], [1.0, 0.3, -0.5, 0.2]
frame = frame_of(x, y)
print(f"frame of x, y: u = {frame.u:.6f}, v = {frame.v:.6f}, t = {frame.t:.6f}")

# Every representation that exists for m = 4 at p = pi/2 should agree.
print("\nm = 4, p = pi/2")
for strat in (Strategy.SERIES, Strategy.CLOSED_EVEN, Strategy.INTEGRAL, Strategy.GENFUN, Strategy.BRUTEFORCE):
    val = kernel(KernelRequest(4, HALF_PI, frame, strategy=strat))
    print(f"  {strat.value:<11} scalar {complex(val.scalar).real:+.15f}   x^y coeff {complex(val.bivector_coeff).real:+.15f}")

# At p = 0 the kernel is the classical plane wave e^{-i(x, y)} in any dimension.
print("\np = 0 gives the plane wave")
for m in (3, 6, 9):
    val = kernel(KernelRequest(m, 0.0, GeometricFrame.from_uv(1.2, 0.8)))
    print(f"  m = {m}: {complex(val.scalar):.12f}   (e^(-1.2i) = {complex(math.cos(1.2), -math.sin(1.2)):.12f})")

# In two dimensions the standard kernel is the exponential of the bivector x^y.
val = kernel(KernelRequest(2, HALF_PI, GeometricFrame.from_uv(0.0, 1.0)))
print(f"\nm = 2, v = 1: {complex(val.scalar).real:.12f} + {complex(val.bivector_coeff).real:.12f} x^y  (cos 1, sin 1)")
