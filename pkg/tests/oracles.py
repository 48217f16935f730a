"""Independent reference computations used to freeze golden values.

Nothing here imports the package. Everything is plain bisection or dense scanning in
mpmath at 40 digits, so it shares no code path with the solvers under test.
Run `python3 tests/oracles.py` to regenerate the numbers frozen in the tests.
"""

from __future__ import annotations

import mpmath as mp

mp.mp.dps = 40


def h(rho, g):
    return mp.log(rho) if g == 1 else (rho ** (g - 1) - 1) / (g - 1)


def ell(a, b, g):
    return mp.sqrt(2 * (a - b) * (h(a, g) - h(b, g)) / (a + b))


def bisect(f, lo, hi, tol=mp.mpf("1e-30"), it=400):
    flo = f(lo)
    for _ in range(it):
        mid = (lo + hi) / 2
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return (lo + hi) / 2


def rho_upstream(g, v2, theta):
    # bisect in ln(rho): near the vacuum angle rho is far below any absolute tolerance
    s = bisect(lambda s: ell(mp.exp(s), 1, g) * mp.cos(theta) + v2, mp.mpf(-2000), mp.mpf("-1e-35"))
    return mp.exp(s)


def xi_p0(g, v2, theta):
    # intersection of S12 with the wall from the two line equations, no closed form
    r = rho_upstream(g, v2, theta)
    u1 = -ell(r, 1, g) * mp.sin(theta)
    # S12 is the line {phi1 = phi2}: u1 xi + k1 = v2 eta with the shock through P0
    # k1 from Bernoulli of state 1: h(r) = B - |q1|^2/2 - k1
    k1 = v2**2 / 2 - u1**2 / 2 - h(r, g)
    return -k1 / u1


def w_polar(tau, g, m):
    hh = h(tau, g)
    inner = m * m * (1 - 1 / tau**2) - 2 * hh
    if inner < 0:
        return mp.mpf(0)
    return mp.sqrt(2 * hh) * mp.sqrt(inner) / (m * m * (1 + 1 / tau) - 2 * hh)


def tau_bar(g, m):
    f = lambda t: m * m * (1 - 1 / t**2) - 2 * h(t, g)
    hi = mp.mpf(2)
    while f(hi) > 0:
        hi *= 2
    return bisect(f, mp.mpf(1) + mp.mpf("1e-30"), hi)


def polar_max(g, m):
    """(tau_d, w_d) by ternary search of the unimodal w."""
    lo, hi = mp.mpf(1), tau_bar(g, m)
    for _ in range(300):
        a, b = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        if w_polar(a, g, m) < w_polar(b, g, m):
            lo = a
        else:
            hi = b
    t = (lo + hi) / 2
    return t, w_polar(t, g, m)


def steady_detach_angle(g, m):
    if m <= 1:
        return mp.mpf(0)
    return mp.atan(polar_max(g, m)[1])


def steady_sonic_angle(g, m):
    if m <= 1:
        return mp.mpf(0)

    def excess(t):
        # |q|^2 - c^2 downstream, decreasing in tau
        return m * m - 2 * h(t, g) - t ** (g - 1)

    t = bisect(excess, mp.mpf(1), polar_max(g, m)[0])
    return mp.atan(w_polar(t, g, m))


def polar_roots_scan(g, m, w, n=100_000):
    """Weak and strong roots of w(tau) = w by a dense tau scan then bisection."""
    tb = tau_bar(g, m)
    taus = [1 + (tb - 1) * i / n for i in range(n + 1)]
    vals = [w_polar(t, g, m) - w for t in taus]
    roots = []
    for i in range(n):
        if (vals[i] > 0) != (vals[i + 1] > 0):
            roots.append(bisect(lambda t: w_polar(t, g, m) - w, taus[i], taus[i + 1]))
    return roots


def weak_state(g, v2, theta):
    x0 = xi_p0(g, v2, theta)
    m = mp.sqrt(x0**2 + v2**2)
    roots = polar_roots_scan(g, m, -v2 / x0, n=20_000)
    tau = roots[0]
    q = mp.sqrt(m * m - 2 * h(tau, g))
    u = x0 - q
    return {"rho": tau, "u": u, "k": -u * x0, "theta_25": mp.pi + mp.atan(u / v2), "a_25": -x0 * u / v2,
            "strong_rho": roots[1]}


def critical_angles(g, v2, tol=mp.mpf("1e-13")):
    vmin = -mp.sqrt(2 / (g - 1)) if g != 1 else mp.ninf
    theta_cr = mp.pi / 2 if g == 1 else mp.acos(-v2 / (-vmin))

    def mach(t):
        x0 = xi_p0(g, v2, t)
        return mp.sqrt(x0**2 + v2**2), mp.atan2(-v2, x0)

    eps = mp.mpf("1e-25")
    top = theta_cr - eps
    if mach(top)[0] >= 1:
        theta_plus = theta_cr
    else:
        theta_plus = bisect(lambda t: mach(t)[0] - 1, mp.mpf("1e-6"), top, tol=tol)

    def root(steady, upper):
        def gap(t):
            m, that = mach(t)
            return that - steady(g, m)

        if gap(upper - eps) <= 0:
            return upper
        return bisect(gap, mp.mpf("1e-3"), upper - eps, tol=tol)

    theta_d = root(steady_detach_angle, theta_plus)
    theta_s = root(steady_sonic_angle, theta_d)
    return {"theta_cr": theta_cr, "theta_plus": theta_plus, "theta_d": theta_d, "theta_s": theta_s}


def critical_v2(g, tol=mp.mpf("1e-13")):
    vmin = -mp.sqrt(2 / (g - 1))
    vmid = vmin / mp.sqrt(vmin**2 + 1)
    out = {}
    for name, steady in (("v2_s", steady_sonic_angle), ("v2_d", steady_detach_angle)):
        def gap(v2):
            mmin = v2 * vmin / mp.sqrt(vmin**2 - v2**2)
            return mp.acos(abs(v2 / vmin)) - steady(g, mmin)

        out[name] = bisect(gap, vmin * (1 - mp.mpf("1e-12")), vmid, tol=tol)
    return out


if __name__ == "__main__":
    def show(d):
        return {k: mp.nstr(v, 17) for k, v in d.items()}

    ca = critical_angles(2, mp.mpf("-0.5"))
    print("critical_angles(2, -0.5):", show(ca))
    print("weak_state(2, -0.5, theta_d/2):", show(weak_state(2, mp.mpf("-0.5"), ca["theta_d"] / 2)))
    ca14 = critical_angles(mp.mpf("1.4"), mp.mpf("-0.4"))
    print("critical_angles(1.4, -0.4):", show(ca14))
    print("weak_state(1.4, -0.4, theta_d/2):", show(weak_state(mp.mpf("1.4"), mp.mpf("-0.4"), ca14["theta_d"] / 2)))
    print("critical_v2(1.4):", show(critical_v2(mp.mpf("1.4"))))
    print("critical_v2(2):", show(critical_v2(2)))
