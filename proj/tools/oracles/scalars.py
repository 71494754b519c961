"""Reference scalars for the unit tests, computed with mpmath at 30 digits.

Usage: python3 tools/oracles/scalars.py > tests/data/scalars.txt
"""
from mpmath import mp, mpf, mpc, besselk, hyperu, hyp1f1, gamma, gammainc, loggamma, whitw, quad, exp, log, pi, sinh, erfc, sqrt, inf, e

mp.dps = 30


def emit(name, value):
    print(f"{name} {mp.nstr(value, 20)}")


# gamma weight |Gamma((nu + iu)/2)|^2 at nu = -0.6, u = 1
emit("gamma_weight_m0.6_1", abs(gamma(mpc(-0.3, 0.5))) ** 2)
emit("bessel_k_i2_3", besselk(mpc(0, 2), 3).real)
emit("bessel_k_0_1", besselk(0, 1))
emit("kummer_u_1_1_1", hyperu(1, 1, 1))
emit("kummer_u_0.3_0.7_0.01", hyperu(mpf("0.3"), mpf("0.7"), mpf("0.01")))
emit("gamma_upper_0.5_0.25", gammainc(mpf("0.5"), mpf("0.25")))
emit("sqrt_pi_erfc_0.5", sqrt(pi) * erfc(mpf("0.5")))
w = whitw(mpf("0.8"), mpc(0, 0.5), 1)
emit("whittaker_0.8_i0.5_1_re", w.real)
emit("whittaker_0.8_i0.5_1_im", w.imag)


def heat_kernel(tau, x, xp, q):
    zx = sqrt(8 * q) * exp(mpf(x) / 2)
    zy = sqrt(8 * q) * exp(mpf(xp) / 2)
    f = lambda u: exp(-u * u * tau / 8) * u * sinh(pi * u) / pi**2 * besselk(mpc(0, u), zx).real * besselk(mpc(0, u), zy).real
    return quad(f, [0, 5, 10, 20, 30, 45])


emit("heat_kernel_0.5_0.3_m0.2_1", heat_kernel(mpf("0.5"), "0.3", "-0.2", 1))


def pricing_kernel(R, tau, x, xi):
    nu = 2 * R - 1
    z = 2 * exp(x) / xi
    kappa = (1 - nu) / 2
    front = exp(-z / 2) * z ** kappa
    cont = quad(lambda u: exp(-(u * u + nu * nu) * tau / 8) * whitw(kappa, mpc(0, u / 2), z).real
                * abs(gamma(mpc(nu / 2, u / 2))) ** 2 * sinh(pi * u) * u, [0, 10, 20, 40, 60, 80])
    disc = 0
    n = 0
    while n <= -nu / 2:
        coef = 2 * (-nu - 2 * n) / (gamma(n + 1) * gamma(-nu - n + 1)) * exp(n * (nu + n) * tau / 2)
        disc += coef * whitw(kappa, -nu / 2 - n, z)
        n += 1
    return front * cont / (2 * pi**2) + front * disc


def put(S, K, r, sigma, t):
    R = mpf(r) / mpf(sigma) ** 2
    tau = mpf(sigma) ** 2 * t
    nu = 2 * R - 1
    x = log(S)
    k = K * tau / (4 * S)
    z = 1 / (2 * k)
    kappa = -(3 + nu) / 2
    front = (2 * k) ** ((3 + nu) / 2) * exp(-1 / (4 * k))
    cont = quad(lambda u: exp(-(u * u + nu * nu) * tau / 8) * whitw(kappa, mpc(0, u / 2), z).real
                * abs(gamma(mpc(nu / 2, u / 2))) ** 2 * sinh(pi * u) * u, [0, 10, 20, 40, 60, 80])
    disc = 0
    n = 0
    while n <= -nu / 2:
        coef = 2 * (-nu - 2 * n) / (gamma(n + 1) * gamma(-nu - n + 1)) * exp(n * (nu + n) * tau / 2)
        disc += coef * whitw(kappa, -nu / 2 - n, z)
        n += 1
    pref = exp(-R * tau + x)
    return pref / (2 * pi**2 * tau) * front * cont + pref / tau * front * disc


# benchmark: S0 = K = 2, r = 0.05, sigma = 0.5, t = 1
emit("pricing_kernel_bench_xi1", pricing_kernel(mpf("0.05") / mpf("0.25"), mpf("0.25"), log(2), 1))
emit("put_bench", put(2, 2, "0.05", "0.5", 1))
emit("put_1.8_0.09_0.3", put(2, mpf("1.8"), "0.09", "0.3", 1))
