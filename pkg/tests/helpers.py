"""Independent oracles shared across test modules.

These deliberately re-derive results through routes the library does not
use: batch conjugate algebra instead of sequential updating, and the
classical constant-coefficient recursion instead of the time-varying one.
"""

import numpy as np


def static_nig_posterior(y, x, prior):
    """Closed-form batch posterior of the static conjugate regression.

    theta | sigma2 ~ N(mu0, sigma2 C*0) with C*0 = c0 v0 / kappa0, and
    1/sigma2 ~ Gamma(v0/2, kappa0/2).  Returns (mu_T, c_T, v_T, kappa_T)
    with c_T the scale of the marginal t posterior.
    """
    y = np.asarray(y, float)
    x = np.asarray(x, float)
    s0 = prior.kappa0 / prior.v0
    cstar0 = prior.c0 / s0
    cstar_T = 1.0 / (1.0 / cstar0 + np.sum(x * x))
    mu_T = cstar_T * (prior.mu0 / cstar0 + np.sum(x * y))
    v_T = prior.v0 + len(y)
    kappa_T = prior.kappa0 + prior.mu0**2 / cstar0 + np.sum(y * y) - mu_T**2 / cstar_T
    s_T = kappa_T / v_T
    return mu_T, s_T * cstar_T, v_T, kappa_T


def classical_levinson(parcor):
    """Classical Levinson-Durbin coefficient recursion for constant PARCOR:
    a_m^(P) = a_m^(P-1) - a_P^(P) a_{P-m}^(P-1) with a_P^(P) the lag-P value.
    """
    parcor = list(parcor)
    a = [parcor[0]]
    for m in range(2, len(parcor) + 1):
        k = parcor[m - 1]
        a = [a[j] - k * a[m - 2 - j] for j in range(m - 1)] + [k]
    return np.array(a)
