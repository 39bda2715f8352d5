"""Numerically hot kernels, with numba acceleration when available.

Each kernel ships in two versions: a pure-numpy/stdlib one and a numba
``@njit`` one.  The module selects the jitted version at import time unless
``QWLINE_DISABLE_NUMBA=1`` is set (or numba is missing), in which case the
numpy version is used.  ``BACKEND`` reports which one is active.  The two
versions agree to rounding; within one process the selected kernel is fixed,
so repeated calls with identical inputs are bit-identical.
"""
from __future__ import annotations

import math
import os

import numpy as np

_DISABLED = os.environ.get("QWLINE_DISABLE_NUMBA", "").strip().lower() in {
    "1", "true", "yes", "on",
}

try:
    if _DISABLED:
        raise ImportError("numba disabled via QWLINE_DISABLE_NUMBA")
    from numba import njit
except ImportError:
    njit = None

BACKEND = "numpy" if njit is None else "numba"

__all__ = [
    "BACKEND",
    "walk_step",
    "walk_step_numpy",
    "walk_step_numba",
    "lambda_fill",
    "lambda_fill_numpy",
    "lambda_fill_numba",
    "lambda_spectral",
    "lambda_spectral_numpy",
    "lambda_spectral_numba",
]


# ---------------------------------------------------------------------------
# one walk step: shift after coin, window grows from 2t+1 to 2t+3 sites
# ---------------------------------------------------------------------------

def walk_step_numpy(plus, minus, theta, alpha, beta, chi):
    """Advance both components one step.

    Inputs live on the source window (length ``m``); the parameter arrays
    hold the coin angles evaluated at the source sites.  Outputs live on the
    window widened by one site per side (length ``m + 2``): the plus
    component moves right, the minus component moves left.
    """
    gain = np.exp(1j * chi)
    c = np.cos(theta) * gain
    s = np.sin(theta) * gain
    ea = np.exp(1j * alpha)
    ebm = np.exp(-1j * beta)
    out_plus = np.zeros(plus.size + 2, dtype=np.complex128)
    out_minus = np.zeros(minus.size + 2, dtype=np.complex128)
    out_plus[2:] = ea * c * plus + ebm * s * minus
    out_minus[:-2] = np.conj(ebm) * s * plus - np.conj(ea) * c * minus
    return out_plus, out_minus


if njit is not None:

    @njit(cache=True)
    def walk_step_numba(plus, minus, theta, alpha, beta, chi):
        m = plus.shape[0]
        out_plus = np.zeros(m + 2, dtype=np.complex128)
        out_minus = np.zeros(m + 2, dtype=np.complex128)
        for i in range(m):
            ct = math.cos(theta[i])
            st = math.sin(theta[i])
            gain = complex(math.cos(chi[i]), math.sin(chi[i]))
            ea = complex(math.cos(alpha[i]), math.sin(alpha[i]))
            ebm = complex(math.cos(beta[i]), -math.sin(beta[i]))
            c = ct * gain
            s = st * gain
            out_plus[i + 2] = ea * c * plus[i] + ebm * s * minus[i]
            out_minus[i] = ebm.conjugate() * s * plus[i] - ea.conjugate() * c * minus[i]
        return out_plus, out_minus

else:
    walk_step_numba = None


# ---------------------------------------------------------------------------
# wave-function kernel on the lattice: two-step recursion table
# ---------------------------------------------------------------------------
#
# lam(n, t) satisfies
#     lam(n, t) = cos(theta) * (lam(n-1, t-1) - lam(n+1, t-1)) + lam(n, t-2)
# seeded by lam(0, 0) = 1 with lam vanishing at |n| >= t >= 1.  Tables store
# row t at index t, site n at column n + t_max + 1 (one padding column per
# side keeps the recursion reads in bounds).

def lambda_fill_numpy(cos_theta, t_max):
    width = 2 * (t_max + 1) + 1
    center = t_max + 1
    out = np.zeros((t_max + 1, width))
    out[0, center] = 1.0
    for t in range(2, t_max + 1):
        prev = out[t - 1]
        row = out[t]
        row[1:] = cos_theta * prev[:-1]
        row[:-1] -= cos_theta * prev[1:]
        row += out[t - 2]
    return out


if njit is not None:

    @njit(cache=True)
    def lambda_fill_numba(cos_theta, t_max):
        width = 2 * (t_max + 1) + 1
        center = t_max + 1
        out = np.zeros((t_max + 1, width))
        out[0, center] = 1.0
        for t in range(2, t_max + 1):
            for i in range(1, width - 1):
                out[t, i] = (
                    cos_theta * (out[t - 1, i - 1] - out[t - 1, i + 1])
                    + out[t - 2, i]
                )
        return out

else:
    lambda_fill_numba = None


# ---------------------------------------------------------------------------
# wave-function kernel, spectral form
# ---------------------------------------------------------------------------
#
#   lam(n, t) = 1/(t+1) * [ (1 + (-1)^t)/2
#               + sum_{r=1..t} cos((t-1) w_r - pi r n/(t+1)) / cos(w_r) ]
# with w_r = arcsin(cos(theta) sin(pi r/(t+1))).  The sum is accumulated in
# compensated arithmetic: its terms reach 1/sin(theta) in magnitude while
# the result can be orders of magnitude smaller.

def lambda_spectral_numpy(n, t, cos_theta):
    if t == 0:
        return 1.0 if n == 0 else 0.0
    r = np.arange(1, t + 1, dtype=np.float64)
    w = np.arcsin(cos_theta * np.sin(np.pi * r / (t + 1)))
    terms = np.cos((t - 1) * w - np.pi * r * n / (t + 1)) / np.cos(w)
    head = 1.0 if t % 2 == 0 else 0.0
    return (head + math.fsum(terms)) / (t + 1)


if njit is not None:

    @njit(cache=True)
    def lambda_spectral_numba(n, t, cos_theta):
        if t == 0:
            return 1.0 if n == 0 else 0.0
        acc = 1.0 if t % 2 == 0 else 0.0
        comp = 0.0
        for r in range(1, t + 1):
            w = math.asin(cos_theta * math.sin(math.pi * r / (t + 1)))
            term = math.cos((t - 1) * w - math.pi * r * n / (t + 1)) / math.cos(w)
            y = term - comp
            s = acc + y
            comp = (s - acc) - y
            acc = s
        return acc / (t + 1)

else:
    lambda_spectral_numba = None


if BACKEND == "numba":
    walk_step = walk_step_numba
    lambda_fill = lambda_fill_numba
    lambda_spectral = lambda_spectral_numba
else:
    walk_step = walk_step_numpy
    lambda_fill = lambda_fill_numpy
    lambda_spectral = lambda_spectral_numpy
