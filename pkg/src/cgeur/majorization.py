"""Majorizing vectors for coarse-grained position and momentum probabilities.

``F_J(gamma)`` bounds the total probability excess over 1 that any ``J``
bins (position and momentum together) can carry.  It is the square root of
the top prolate eigenvalue at the effective bandwidth
``gamma * ceil(J/2) * floor(J/2) / 4``.  Differences of consecutive ``F_J``
form the probability vector ``W`` with ``q (+) p  <  {1} (+) W``; the
family ``W^(n)`` truncates after ``n`` entries and puts the remaining mass
in the last one.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import prolate
from .errors import DomainError, NumericalError, ResourceError

__all__ = [
    "FSequence",
    "MajorizationVector",
    "f_value",
    "f_sequence",
    "build_w",
    "majorizes",
    "check_chain",
    "CHAIN_SLACK",
    "MEASURED_SLACK",
]

log = logging.getLogger(__name__)

CHAIN_SLACK = 1e-12
MEASURED_SLACK = 1e-9
TAIL_CUTOFF = 1e-15
INDEX_CAP = 10_000
_CLAMP_SILENT = 1e-15
_CLAMP_HARD = 1e-12


@dataclass(frozen=True)
class FSequence:
    gamma: float
    values: np.ndarray
    deficits: np.ndarray

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class MajorizationVector:
    """Probability vector ``W^(n)(gamma)``; ``n is None`` marks the untruncated one."""

    gamma: float
    n: int | None
    coeffs: np.ndarray

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)


def _check_gamma(gamma):
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma <= 0.0:
        raise DomainError(f"gamma must be positive and finite, got {gamma!r}")
    return gamma


def _bin_product(J):
    return (J // 2) * ((J + 1) // 2)


def _f_pair(gamma, J):
    """Return ``(F_J, 1 - F_J)`` with the second entry free of cancellation."""
    m = _bin_product(J)
    if m == 0:
        return 0.0, 1.0
    ev = prolate.lambda0(gamma * m / 4.0)
    root = math.sqrt(ev.lambda0)
    return root, ev.deficit / (1.0 + root)


def f_value(gamma, J):
    """``F_J(gamma) = sqrt(lambda0(gamma * ceil(J/2) * floor(J/2) / 4))``."""
    gamma = _check_gamma(gamma)
    if int(J) != J or J < 1:
        raise DomainError(f"J must be a positive integer, got {J!r}")
    return _f_pair(gamma, int(J))[0]


def f_sequence(gamma, j_max):
    """``F_1 .. F_{j_max}`` together with their deficits."""
    gamma = _check_gamma(gamma)
    pairs = [_f_pair(gamma, J) for J in range(1, int(j_max) + 1)]
    values = np.array([p[0] for p in pairs])
    deficits = np.array([p[1] for p in pairs])
    return FSequence(gamma, values, deficits)


def _step(f_lo, d_lo, f_hi, d_hi):
    # near saturation the difference of deficits keeps full precision
    w = d_lo - d_hi if f_lo >= 0.5 else f_hi - f_lo
    if w < 0.0:
        if w < -_CLAMP_HARD:
            raise NumericalError(f"negative majorization coefficient {w:.3e}")
        if w < -_CLAMP_SILENT:
            log.warning("clamping negative majorization coefficient %.3e to zero", w)
        w = 0.0
    return w


def build_w(gamma, n=None):
    """Construct the majorizing vector ``W^(n)(gamma)``.

    Parameters
    ----------
    gamma : float
        Coarse-graining product ``Delta * delta`` (hbar = 1).
    n : int or None
        Truncation index ``n >= 2``.  ``None`` (or ``math.inf``) builds the
        untruncated vector: entries ``F_{i+1} - F_i`` until ``1 - F`` drops
        below ``1e-15``, after which the remaining mass is appended as a
        final entry.

    Raises
    ------
    ResourceError
        If the untruncated vector needs more than 10**4 entries (gamma too
        small; use a finite ``n``).
    """
    gamma = _check_gamma(gamma)
    if n is not None and n != math.inf:
        if int(n) != n or n < 2:
            raise DomainError(f"truncation index must be an integer >= 2, got {n!r}")
        n = int(n)
        coeffs = np.empty(n)
        f_lo, d_lo = _f_pair(gamma, 1)
        for i in range(1, n):
            f_hi, d_hi = _f_pair(gamma, i + 1)
            coeffs[i - 1] = _step(f_lo, d_lo, f_hi, d_hi)
            f_lo, d_lo = f_hi, d_hi
        coeffs[n - 1] = d_lo
        return MajorizationVector(gamma, n, coeffs)

    coeffs = []
    f_lo, d_lo = _f_pair(gamma, 1)
    while d_lo >= TAIL_CUTOFF:
        if len(coeffs) >= INDEX_CAP:
            raise ResourceError(
                f"untruncated W at gamma={gamma:g} needs more than {INDEX_CAP} entries; use a finite n"
            )
        f_hi, d_hi = _f_pair(gamma, len(coeffs) + 2)
        coeffs.append(_step(f_lo, d_lo, f_hi, d_hi))
        f_lo, d_lo = f_hi, d_hi
    coeffs.append(d_lo)
    return MajorizationVector(gamma, None, np.array(coeffs))


def majorizes(x, y, slack=0.0):
    """Return True iff ``x`` is majorized by ``y`` (``x < y``), up to ``slack``.

    Both vectors are sorted in decreasing order and the shorter one is padded
    with zeros.  Every prefix sum of ``x`` must not exceed that of ``y`` by
    more than ``slack``, and the totals must agree within ``slack``.
    Totals other than 1 are allowed, as for direct sums.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if (x < 0).any() or (y < 0).any():
        raise DomainError("majorization is defined for non-negative vectors")
    size = max(len(x), len(y))
    xs = np.zeros(size)
    ys = np.zeros(size)
    xs[: len(x)] = np.sort(x)[::-1]
    ys[: len(y)] = np.sort(y)[::-1]
    cx = np.cumsum(xs)
    cy = np.cumsum(ys)
    if abs(cx[-1] - cy[-1]) > slack:
        return False
    return bool(np.all(cx <= cy + slack))


def check_chain(gamma, n_max):
    """Check ``W^(2) > W^(3) > ... > W^(n_max)`` at slack ``1e-12``."""
    gamma = _check_gamma(gamma)
    if n_max < 3:
        raise DomainError("n_max must be at least 3")
    vectors = [build_w(gamma, k) for k in range(2, int(n_max) + 1)]
    return all(majorizes(lo.coeffs, hi.coeffs, CHAIN_SLACK) for hi, lo in zip(vectors, vectors[1:]))
