"""Independent chi-square tail oracle: adaptive quadrature of the density."""
import math

from scipy.integrate import quad


def chi2_density(t, df):
    if t <= 0:
        return 0.0
    k = df / 2.0
    return math.exp((k - 1) * math.log(t) - t / 2 - k * math.log(2) - math.lgamma(k))


def chi2_sf_quadrature(x, df):
    if x == 0:
        return 1.0
    if x < df:
        # t = u**2 removes the t**(df/2 - 1) singularity at 0 when df = 1
        head, _ = quad(lambda u: 2 * u * chi2_density(u * u, df), 0, math.sqrt(x),
                       epsabs=1e-14, epsrel=1e-13, limit=200)
        return 1.0 - head
    tail, _ = quad(chi2_density, x, x + 400, args=(df,), epsabs=1e-14, epsrel=1e-13, limit=200)
    return tail
