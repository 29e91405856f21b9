"""Shooting oracle for H = p^2 - g (i z)^N.

N = 3: the real axis lies inside both Stokes wedges, so integrate
-psi'' + V psi = E psi inward from x = -L and x = +L starting on decaying
WKB data, and match the Wronskian at x = 0.  Solve for complex E with a
secant iteration.  N = 4 uses the Hermitian equivalent
p^2 + 4 g x^4 - 2 sqrt(g) x.  Frozen values are copied into the C++ tests.
"""
import numpy as np
from scipy.integrate import solve_ivp


def mismatch(E, V, L):
    def rhs(x, y):
        return [y[1], (V(x) - E) * y[0]]

    def start(x0, sgn):
        k = np.sqrt(complex(V(x0) - E))
        if k.real < 0:
            k = -k
        return [1.0 + 0j, -sgn * k]

    kw = dict(method="DOP853", rtol=1e-13, atol=1e-300)
    yl = solve_ivp(rhs, (-L, 0.0), start(-L, -1), **kw).y[:, -1]
    yr = solve_ivp(rhs, (L, 0.0), start(L, 1), **kw).y[:, -1]
    return (yl[0] * yr[1] - yl[1] * yr[0]) / (yl[0] * yr[0])


def secant(f, x0, x1, tol=1e-14, it=60):
    f0, f1 = f(x0), f(x1)
    for _ in range(it):
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        x0, f0, x1 = x1, f1, x2
        f1 = f(x1)
        if abs(x1 - x0) < tol:
            break
    return x1


if __name__ == "__main__":
    V3 = lambda x: 1j * x**3
    for L in (5.0, 6.0, 7.0):
        print("N=3 L=%g" % L, repr(secant(lambda E: mismatch(E, V3, L), 1.15, 1.16)))
    V4 = lambda x: 4 * x**4 - 2 * x
    for L in (4.0, 5.0):
        for g in (1.47, 6.0, 11.8, 18.4, 25.8):
            print("N=4 equiv L=%g" % L, repr(secant(lambda E: mismatch(E, V4, L), g, g + 0.01)))
