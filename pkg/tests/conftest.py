"""Shared fixtures and independent oracles for the test suite."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from jcdrive.hilbert import FockCutoff, SystemParams


@pytest.fixture(scope="session")
def params():
    """Reference operating point: g = 1, lambda = 0.1, omega_c = 100."""
    return SystemParams.from_lambda(g=1.0, lam=0.1, omega_c=100.0)


@pytest.fixture(scope="session")
def cutoff12():
    return FockCutoff(12)


def ode_final(h_of_t, psi0, t_end, rtol=1e-11, atol=1e-13):
    """Independent time-ordered-propagator oracle: adaptive high-order ODE stepping.

    Deliberately a different numerical method from anything in the package
    (adaptive embedded Runge-Kutta rather than exponential stepping), so
    agreement is a genuine cross-check.
    """

    def rhs(t, y):
        return -1j * (h_of_t(t) @ y)

    sol = solve_ivp(rhs, (0.0, t_end), psi0.astype(complex), method="DOP853",
                    rtol=rtol, atol=atol)
    assert sol.success
    return sol.y[:, -1]


def fid(a, b):
    return float(abs(np.vdot(a, b)) ** 2)
