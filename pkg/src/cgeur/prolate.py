"""Largest eigenvalue of the time- and band-limiting operator.

The operator acts on L2[-1, 1] with kernel ``sin(c(x - y)) / (pi (x - y))``.
Its top eigenvalue ``lambda0(c)`` equals ``(2c/pi) * R00(c, 1)**2`` where
``R00`` is the radial prolate spheroidal function of the first kind.

Three evaluation routes are provided:

* ``series``: Legendre expansion of the zeroth prolate function, obtained
  from the tridiagonal (Bouwkamp) matrix of the commuting differential
  operator.  This is the default for moderate ``c``.
* ``nystrom``: Gauss-Legendre discretisation of the integral operator and
  power iteration.  Independent of the series route; used as an oracle.
* ``asymptotic``: ``1 - lambda0 ~ 4 sqrt(pi c) exp(-2c)`` for large ``c``.

:func:`lambda0` picks the series route up to ``c = 25`` and the
large-c expansion above it.

Every evaluation carries the deficit ``1 - lambda0`` separately so that
callers never form it by subtraction once ``lambda0`` rounds to 1.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import roots_laguerre

from .errors import ConvergenceError, DomainError

__all__ = [
    "ProlateEvaluation",
    "lambda0",
    "lambda0_series",
    "lambda0_nystrom",
    "lambda0_asymptotic",
    "asymptotic_deficit",
    "evaluate",
    "read_golden",
    "write_golden",
    "METHODS",
]

METHODS = ("series", "nystrom", "asymptotic")

DEFAULT_NODES = 512
POWER_TOL = 1e-14
POWER_MAXITER = 100_000

# Below this bandwidth the two-term small-c expansion is exact to rounding.
SMALL_C = 1e-4
# From here on the series route integrates the deficit rather than forming 1 - lambda0.
TAIL_C = 5.0
LAGUERRE_NODES = 20
# Edge values psi(1) ~ exp(-c) lose their last digits near c = 30; the
# large-c expansion takes over at this bandwidth.
SWITCH_C = 25.0
ASYMPTOTIC_MIN_C = 5.0
SERIES_MAX_C = 1e4


@dataclass(frozen=True)
class ProlateEvaluation:
    """Value of ``lambda0`` at bandwidth ``c`` with its deficit ``1 - lambda0``."""

    c: float
    lambda0: float
    deficit: float
    method: str

    @property
    def r00(self):
        """``R00(c, 1)`` recovered from ``lambda0 = (2c/pi) R00**2``."""
        if self.c == 0.0:
            return math.sqrt(0.5)
        return math.sqrt(math.pi * self.lambda0 / (2.0 * self.c))


def _check_c(c):
    c = float(c)
    if not math.isfinite(c) or c < 0.0:
        raise DomainError(f"bandwidth c must be finite and non-negative, got {c!r}")
    return c


def _legendre_at_zero(degrees):
    # P_k(0) for even k: (-1)^(k/2) (k-1)!! / k!!
    out = np.empty(len(degrees))
    out[0] = 1.0
    for i in range(1, len(degrees)):
        k = degrees[i]
        out[i] = -out[i - 1] * (k - 1.0) / k
    return out


def _bouwkamp(c):
    # Legendre coefficients d_k (even k) of the zeroth prolate function,
    # normalised in L2[-1, 1]
    kmax = 2 * int(math.ceil(c)) + 80
    k = np.arange(0, kmax + 1, 2, dtype=float)
    c2 = c * c
    diag = k * (k + 1.0) + c2 * (2.0 * k * (k + 1.0) - 1.0) / ((2.0 * k + 3.0) * (2.0 * k - 1.0))
    kk = k[:-1]
    off = c2 * (kk + 2.0) * (kk + 1.0) / ((2.0 * kk + 3.0) * np.sqrt((2.0 * kk + 1.0) * (2.0 * kk + 5.0)))
    _, vec = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    return k, vec[:, 0]


@lru_cache(maxsize=65536)
def _series_lambda(c):
    k, d = _bouwkamp(c)
    # psi = sum d_k sqrt(k + 1/2) P_k; lambda = (c / 2pi) |int psi / psi(0)|^2
    psi_at_zero = float(np.sum(d * np.sqrt(k + 0.5) * _legendre_at_zero(k)))
    return float((c / math.pi) * d[0] ** 2 / psi_at_zero**2)


@lru_cache(maxsize=65536)
def _edge_value_sq(c):
    k, d = _bouwkamp(c)
    return float(np.sum(d * np.sqrt(k + 0.5))) ** 2


_LAGUERRE = roots_laguerre(LAGUERRE_NODES)


@lru_cache(maxsize=65536)
def _series_deficit(c):
    # d ln(lambda0)/dc = 2 psi(1)^2 / c, so ln lambda0(c) = -int_c^inf 2 psi(1; t)^2 / t dt.
    # The integrand decays like exp(-2t); Gauss-Laguerre in u = 2(t - c).
    u, w = _LAGUERRE
    t = c + 0.5 * u
    f = np.array([_edge_value_sq(ti) / ti for ti in t]) * np.exp(u)
    return -math.expm1(-float(np.dot(w, f)))


def lambda0_series(c):
    """Evaluate ``lambda0(c)`` from the Legendre expansion of the prolate function.

    For ``c < 5`` ``lambda0`` comes from the ratio of the expansion's mean to
    its value at the origin.  For larger ``c`` the deficit is integrated from
    ``d ln lambda0 / dc = 2 psi(1)**2 / c`` instead, which keeps it accurate
    in relative terms long after ``1 - lambda0`` has rounded away.
    """
    c = _check_c(c)
    if c > SERIES_MAX_C:
        raise DomainError(f"series evaluation limited to c <= {SERIES_MAX_C:g}")
    if c == 0.0:
        return ProlateEvaluation(0.0, 0.0, 1.0, "series")
    if c < SMALL_C:
        lam = (2.0 * c / math.pi) * (1.0 - c * c / 9.0)
    elif c < TAIL_C:
        lam = min(_series_lambda(c), 1.0)
    else:
        d = _series_deficit(c)
        return ProlateEvaluation(c, 1.0 - d, d, "series")
    return ProlateEvaluation(c, lam, 1.0 - lam, "series")


def lambda0_nystrom(c, nodes=DEFAULT_NODES):
    """Evaluate ``lambda0(c)`` by Nystrom discretisation and power iteration.

    Parameters
    ----------
    c : float
        Bandwidth, ``c >= 0``.
    nodes : int
        Number of Gauss-Legendre nodes on [-1, 1], at least 8.

    Raises
    ------
    ConvergenceError
        If the power iteration does not settle within ``POWER_MAXITER`` steps.
    """
    c = _check_c(c)
    nodes = int(nodes)
    if nodes < 8:
        raise DomainError(f"need at least 8 quadrature nodes, got {nodes}")
    if c == 0.0:
        return ProlateEvaluation(0.0, 0.0, 1.0, "nystrom")

    x, w = np.polynomial.legendre.leggauss(nodes)
    sw = np.sqrt(w)
    kernel = (c / math.pi) * np.sinc((c / math.pi) * (x[:, None] - x[None, :]))
    a = sw[:, None] * kernel * sw[None, :]

    # Gaussian start: the top eigenfunction tends to exp(-c x^2 / 2) and the
    # next even eigenvalue is nearly degenerate for large c.
    v = sw * np.exp(-0.5 * c * x * x)
    v /= np.linalg.norm(v)
    lam_prev = -1.0
    for it in range(1, POWER_MAXITER + 1):
        u = a @ v
        lam = float(v @ u)
        u = 0.5 * (u + u[::-1])  # stay in the even subspace
        v = u / np.linalg.norm(u)
        if abs(lam - lam_prev) <= POWER_TOL * lam:
            break
        lam_prev = lam
    else:
        raise ConvergenceError(
            f"power iteration for c={c!r} did not converge in {POWER_MAXITER} iterations",
            iterations=POWER_MAXITER,
        )
    lam = min(lam, 1.0)
    return ProlateEvaluation(c, lam, 1.0 - lam, "nystrom")


def asymptotic_deficit(c):
    """Leading large-c form of the deficit, ``4 sqrt(pi c) exp(-2c)``."""
    return 4.0 * math.sqrt(math.pi * c) * math.exp(-2.0 * c)


def lambda0_asymptotic(c):
    """Evaluate ``lambda0(c)`` from the leading large-c expansion (``c >= 5``)."""
    c = _check_c(c)
    if c < ASYMPTOTIC_MIN_C:
        raise DomainError(f"asymptotic expansion needs c >= {ASYMPTOTIC_MIN_C:g}, got {c!r}")
    d = asymptotic_deficit(c)
    return ProlateEvaluation(c, 1.0 - d, d, "asymptotic")


def _matched_correction():
    # first-order coefficient a in 4 sqrt(pi c) exp(-2c) (1 - a / c), fixed so
    # the expansion joins the series deficit at SWITCH_C
    ratio = _series_deficit(SWITCH_C) / asymptotic_deficit(SWITCH_C)
    return SWITCH_C * (1.0 - ratio)


_CORRECTION = _matched_correction()


def lambda0(c):
    """Largest eigenvalue of the sinc-kernel operator on [-1, 1].

    The series route covers ``c <= 25``; beyond that (deficit below
    ``1e-20``) the large-c expansion is used, with its first-order
    correction matched to the series at the switch.
    """
    c = _check_c(c)
    if c <= SWITCH_C:
        return lambda0_series(c)
    d = asymptotic_deficit(c) * (1.0 - _CORRECTION / c)
    return ProlateEvaluation(c, 1.0 - d, d, "asymptotic")


def evaluate(c, method=None, nodes=DEFAULT_NODES):
    """Dispatch to one evaluation route; ``method=None`` means :func:`lambda0`."""
    if method is None:
        return lambda0(c)
    if method == "series":
        return lambda0_series(c)
    if method == "nystrom":
        return lambda0_nystrom(c, nodes)
    if method == "asymptotic":
        return lambda0_asymptotic(c)
    raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")


def write_golden(path, records):
    """Write ``c lambda0 deficit nodes`` records with 17 significant digits."""
    lines = [f"{r.c:.17g} {r.lambda0:.17g} {r.deficit:.17g} {n}" for r, n in records]
    Path(path).write_text("\n".join(lines) + "\n")


def read_golden(path):
    """Read a golden file back as a list of ``(ProlateEvaluation, nodes)``."""
    out = []
    for line in Path(path).read_text().splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        c, lam, d, n = line.split()
        out.append((ProlateEvaluation(float(c), float(lam), float(d), "nystrom"), int(n)))
    return out
