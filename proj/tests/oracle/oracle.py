"""Reference values for the unit tests, computed independently of the C++ code.

Everything here is evaluated with mpmath at 40 digits straight from the defining
products and series (no product-form resummation, no zero-mode bookkeeping).
The printed numbers are frozen into tests/*.cpp; rerun after changing a definition:

    python3 tests/oracle/oracle.py
"""

import mpmath as mp

mp.mp.dps = 40


def poch(x, a, terms=400):
    r = mp.mpf(1)
    for n in range(terms):
        r *= 1 - x * a**n
    return r


def theta(x, a):
    return poch(x, a) * poch(a / x, a) * poch(a, a)


def bracket(A, n, p, q):
    sp = mp.sqrt(p)
    return (1 - q**n) * (sp ** (A * n) - sp ** (-A * n)) * (1 - (p / q) ** n) / (n * (1 - p**n))


def osc(kind, m, p, q):
    if kind in ("E", "S+"):
        return 1 / (q ** (-m) - 1)
    return 1 / ((q / p) ** m - 1)


def log_coeffs(kx, ky, A, p, q, order):
    return [mp.mpf(0)] + [osc(kx, m, p, q) * osc(ky, -m, p, q) * bracket(A, m, p, q) for m in range(1, order + 1)]


def contraction(kx, ky, A, p, q, x, order=600):
    c = log_coeffs(kx, ky, A, p, q, order)
    return mp.exp(mp.fsum(c[m] * x**m for m in range(1, order + 1)))


def taylor_exp(c, order):
    # exp of a power series without constant term: n e_n = sum_k k c_k e_{n-k}
    e = [mp.mpf(1)] + [mp.mpf(0)] * order
    for n in range(1, order + 1):
        e[n] = mp.fsum(k * c[k] * e[n - k] for k in range(1, n + 1)) / n
    return e


def psi(A, x, a, p):
    h = mp.sqrt(p) ** A
    return (-1) ** (A - 1) / x * theta(x * h, a) / theta(h / x, a)


def show(label, z):
    z = mp.mpc(z)
    print(f"{label:48s} {mp.nstr(z.real, 20)} {mp.nstr(z.imag, 20)}")


if __name__ == "__main__":
    p0, q0 = mp.mpf("0.09"), mp.mpf("0.3")
    show("poch(0.5, 0.3)", poch(mp.mpf("0.5"), mp.mpf("0.3")))
    show("theta(0.7+0.1i, 0.3)", theta(mp.mpc("0.7", "0.1"), mp.mpf("0.3")))
    show("theta(0.4-0.2i, 0.2+0.1i)", theta(mp.mpc("0.4", "-0.2"), mp.mpc("0.2", "0.1")))
    show("bracket A=2 n=1 defaults", bracket(2, 1, p0, q0))
    show("bracket A=-1 n=3 defaults", bracket(-1, 3, p0, q0))
    show("bracket A=2 n=-2 defaults", bracket(2, -2, p0, q0))

    p, q = mp.mpc("0.08", "0.01"), mp.mpc("0.35", "-0.02")
    # inside every disc of convergence: |x| < |p/q| for the A = 2 products
    x = mp.mpf("0.15") * mp.expj(mp.mpf("0.7"))
    for kx, ky in (("E", "F"), ("F", "E"), ("E", "E"), ("F", "F"), ("S+", "S-"), ("S-", "S+")):
        for A in (2, -1):
            show(f"C[{kx},{ky}] A={A} complex p,q at x", contraction(kx, ky, A, p, q, x))

    c = log_coeffs("E", "F", 2, p0, q0, 6)
    e = taylor_exp(c, 6)
    for k in range(7):
        show(f"C[E,F] A=2 defaults, coefficient x^{k}", e[k])
    c = log_coeffs("E", "F", -1, p0, q0, 6)
    e = taylor_exp(c, 6)
    for k in range(4):
        show(f"C[E,F] A=-1 defaults, coefficient x^{k}", e[k])

    xs = mp.mpc("0.6", "0.5")
    show("psi A=2 base q at 0.6+0.5i", psi(2, xs, q0, p0))
    show("psi A=-1 base q at 0.6+0.5i", psi(-1, xs, q0, p0))
    z1, z2, w = mp.mpc(1, 0), mp.mpc("0.8", "0.3"), mp.mpc("-0.5", "0.9")
    a, b, d = psi(2, z2 / z1, q0, p0), psi(-1, w / z1, q0, p0), psi(-1, w / z2, q0, p0)
    show("serre f at (1, 0.8+0.3i, -0.5+0.9i)", (a + 1) * (b * d + 1) / (d + a * b))

    # basis sizes: coefficients of prod_m (1 - x^m)^{-rank}
    for rank in (1, 2, 3):
        ser = mp.taylor(lambda t: mp.fprod((1 - t**m) ** (-rank) for m in range(1, 8)), 0, 5)
        print(f"states per degree rank {rank}: {[int(mp.nint(v)) for v in ser]}")
