"""Renyi entropies and lower bounds on coarse-grained entropy sums.

All entropies are in nats.  ``gamma`` is the dimensionless product of the
position and momentum bin widths (hbar = 1).  Four bound families are
available:

``B``
    ``-(1/2)(ln a/(1-a) + ln b/(1-b)) - ln(gamma/pi)`` for conjugate orders
    ``1/a + 1/b = 2``.
``R``
    ``-ln lambda0(gamma/4)``; non-negative, also for conjugate orders.
``MAJ``
    Entropy of the majorizing vector ``W^(n)(gamma)`` for equal orders
    ``alpha <= 1``, and the weakened form
    ``2/(1-alpha) [ln(1 + sum W_i**alpha) - ln 2]`` for ``alpha > 1``.
``ZERO``
    The constant 0; handy as a crossing partner.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import prolate
from .errors import BracketError, DomainError, NumericalError
from .majorization import build_w

__all__ = [
    "FAMILIES",
    "BoundRequest",
    "BoundResult",
    "FamilySpec",
    "renyi_entropy",
    "conjugate_order",
    "bound_B",
    "bound_R",
    "bound_majorization",
    "best_bound",
    "evaluate",
    "bisect",
    "find_crossing",
]

FAMILIES = ("B", "R", "MAJ", "BEST_SAME_ORDER", "BEST_CONJUGATE")
SHANNON_TOL = 1e-8
SUBNORMAL_TOL = 1e-6
OVERNORMAL_TOL = 1e-9
BISECT_MAXITER = 200

CONJUGATE_REASON = "requires conjugate orders"
EQUAL_ORDER_REASON = "requires equal orders"
HALF_REASON = "requires alpha >= 1/2"


def _check_alpha(alpha):
    alpha = float(alpha)
    if math.isnan(alpha) or alpha <= 0.0:
        raise DomainError(f"Renyi order must be positive, got {alpha!r}")
    return alpha


def _check_gamma(gamma):
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma <= 0.0:
        raise DomainError(f"gamma must be positive and finite, got {gamma!r}")
    return gamma


def _is_shannon(alpha):
    return abs(alpha - 1.0) <= SHANNON_TOL


def renyi_entropy(p, alpha, *, subnormal_tol=SUBNORMAL_TOL, check_sum=True):
    """Renyi entropy ``ln(sum p**alpha) / (1 - alpha)`` in nats.

    ``alpha = math.inf`` gives the min-entropy and orders within ``1e-8`` of
    one use the Shannon form ``-sum p ln p`` (with ``0 ln 0 = 0``).

    Parameters
    ----------
    p : array_like
        Non-negative probabilities.  The total may fall short of 1 by up to
        ``subnormal_tol`` (tail mass that was not tabulated counts as zero
        contribution) and may exceed it by at most ``1e-9``.
    alpha : float
        Order in ``(0, inf]``.
    check_sum : bool
        Set to False to evaluate the same functional on vectors that are not
        probability distributions (direct sums, for instance).
    """
    alpha = _check_alpha(alpha)
    p = np.asarray(p, dtype=float).ravel()
    if (p < 0).any():
        raise DomainError("probabilities must be non-negative")
    if check_sum:
        total = float(p.sum())
        if total > 1.0 + OVERNORMAL_TOL or total < 1.0 - subnormal_tol:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
    p = p[p > 0.0]
    if p.size == 0:
        raise DomainError("entropy of an all-zero vector is undefined")
    if math.isinf(alpha):
        return max(0.0, -math.log(float(p.max())))
    if _is_shannon(alpha):
        return float(-np.sum(p * np.log(p)))
    return float(np.log(np.sum(p**alpha)) / (1.0 - alpha))


def conjugate_order(alpha):
    """Order ``beta`` with ``1/alpha + 1/beta = 2`` (``inf`` for ``alpha = 1/2``)."""
    alpha = _check_alpha(alpha)
    if alpha < 0.5:
        raise DomainError(f"no positive conjugate order for alpha={alpha!r} < 1/2")
    if alpha == 0.5:
        return math.inf
    if math.isinf(alpha):
        return 0.5
    return alpha / (2.0 * alpha - 1.0)


def _log_ratio(a):
    # ln(a) / (1 - a), with its limits at a -> 1 and a -> inf
    if math.isinf(a):
        return 0.0
    if _is_shannon(a):
        return -1.0
    return -math.log1p(a - 1.0) / (a - 1.0)


def bound_B(gamma, alpha=1.0):
    """Conjugate-order bound ``B_alpha(gamma)``; negative once gamma is large."""
    gamma = _check_gamma(gamma)
    alpha = _check_alpha(alpha)
    if alpha < 0.5:
        raise DomainError(f"bound B needs alpha >= 1/2, got {alpha!r}")
    beta = conjugate_order(alpha)
    return -0.5 * (_log_ratio(alpha) + _log_ratio(beta)) - math.log(gamma / math.pi)


def bound_R(gamma):
    """Prolate bound ``R(gamma) = -ln(gamma/2pi) - 2 ln R00(gamma/4, 1)``.

    Evaluated as ``-ln lambda0(gamma/4)`` using the deficit when
    ``lambda0`` is close to 1.
    """
    gamma = _check_gamma(gamma)
    ev = prolate.lambda0(gamma / 4.0)
    if ev.lambda0 > 0.5:
        value = -math.log1p(-ev.deficit)
    else:
        value = -math.log(ev.lambda0)
    if value < 0.0:
        if value < -1e-12:
            raise NumericalError(f"bound R evaluated to {value!r}")
        value = 0.0
    return value


def bound_majorization(gamma, alpha=1.0, n=4, *, literal_weak_form=False):
    """Majorization bound ``H_alpha[W^(n)(gamma)]`` on ``H_alpha[q] + H_alpha[p]``.

    For ``alpha > 1`` the weakened form
    ``2/(1-alpha) * [ln(1 + sum_i W_i**alpha) - ln 2]`` is returned.  With
    ``literal_weak_form=True`` the powers are dropped (``sum_i W_i``); that
    variant is identically zero because ``W`` sums to 1 and is kept only for
    comparison.

    ``n=None`` selects the untruncated vector.
    """
    gamma = _check_gamma(gamma)
    alpha = _check_alpha(alpha)
    w = build_w(gamma, n).coeffs
    if alpha <= 1.0 or _is_shannon(alpha):
        return max(0.0, renyi_entropy(w, alpha, subnormal_tol=1e-12))
    if math.isinf(alpha):
        return 0.0
    w = w[w > 0.0]
    s = float(w.sum()) if literal_weak_form else float(np.sum(w**alpha))
    value = 2.0 / (1.0 - alpha) * math.log1p(0.5 * (s - 1.0))
    return max(0.0, value)


@dataclass(frozen=True)
class BoundRequest:
    gamma: float
    alpha: float = 1.0
    n: int | None = 4
    family: str = "BEST_SAME_ORDER"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")


@dataclass(frozen=True)
class BoundResult:
    """Bound value with the families it was chosen from.

    ``values`` holds every applicable family's value and ``reasons`` the
    explanation for each family that does not apply.
    """

    value: float
    applicable_families: tuple
    dominant: str
    values: dict = field(default_factory=dict)
    reasons: dict = field(default_factory=dict)


def _pick(values, reasons):
    dominant = max(values, key=values.get)
    return BoundResult(values[dominant], tuple(values), dominant, values, reasons)


def best_bound(gamma, alpha=1.0, n=4, mode="same_order"):
    """Largest applicable bound at ``(gamma, alpha, n)``.

    ``mode="same_order"`` bounds ``H_alpha[q] + H_alpha[p]``: at
    ``alpha = 1`` the max of B, R and MAJ, otherwise only MAJ applies.
    ``mode="conjugate"`` bounds ``H_alpha[q] + H_beta[p]`` with conjugate
    ``beta`` and takes the max of B and R.
    """
    gamma = _check_gamma(gamma)
    alpha = _check_alpha(alpha)
    values = {}
    reasons = {}
    if mode == "same_order":
        if _is_shannon(alpha):
            values["B"] = bound_B(gamma, 1.0)
            values["R"] = bound_R(gamma)
        else:
            reasons["B"] = reasons["R"] = CONJUGATE_REASON
        values["MAJ"] = bound_majorization(gamma, alpha, n)
    elif mode == "conjugate":
        if alpha >= 0.5:
            values["B"] = bound_B(gamma, alpha)
        else:
            reasons["B"] = HALF_REASON
        values["R"] = bound_R(gamma)
        reasons["MAJ"] = EQUAL_ORDER_REASON
    else:
        raise DomainError(f"mode must be 'same_order' or 'conjugate', got {mode!r}")
    return _pick(values, reasons)


def evaluate(request):
    """Evaluate a :class:`BoundRequest`."""
    g, a, n = request.gamma, request.alpha, request.n
    if request.family == "BEST_SAME_ORDER":
        return best_bound(g, a, n, "same_order")
    if request.family == "BEST_CONJUGATE":
        return best_bound(g, a, n, "conjugate")
    value = {
        "B": lambda: bound_B(g, a),
        "R": lambda: bound_R(g),
        "MAJ": lambda: bound_majorization(g, a, n),
    }[request.family]()
    return BoundResult(value, (request.family,), request.family, {request.family: value}, {})


@dataclass(frozen=True)
class FamilySpec:
    """One curve ``gamma -> bound`` for crossing searches.

    Text form: ``B``, ``R``, ``ZERO`` (or ``0``), ``MAJ`` or ``MAJ:<n>``
    (``MAJ:inf`` for the untruncated vector).  Orders not given explicitly
    fall back to the search-wide ``alpha``.
    """

    family: str
    alpha: float | None = None
    n: int | None = 4

    @classmethod
    def parse(cls, text):
        name, _, arg = text.strip().partition(":")
        name = name.upper()
        if name == "0":
            name = "ZERO"
        if name not in ("B", "R", "MAJ", "ZERO"):
            raise DomainError(f"unknown bound family {text!r}")
        n = 4
        if arg:
            if name != "MAJ":
                raise DomainError(f"family {name} takes no truncation index")
            arg = arg.removeprefix("n=")
            n = None if arg in ("inf", "unbounded") else int(arg)
        return cls(name, None, n)

    def function(self, alpha=1.0):
        a = alpha if self.alpha is None else self.alpha
        if self.family == "B":
            return lambda g: bound_B(g, a)
        if self.family == "R":
            return bound_R
        if self.family == "MAJ":
            return lambda g: bound_majorization(g, a, self.n)
        return lambda g: 0.0


def bisect(func, lo, hi, tol, maxiter=BISECT_MAXITER):
    """Root of ``func`` in ``[lo, hi]`` by bisection to absolute tolerance ``tol``."""
    f_lo = func(lo)
    f_hi = func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]: f={f_lo!r}, {f_hi!r}")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 2.0 * tol:
            return mid
        f_mid = func(mid)
        if f_mid == 0.0:
            return mid
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_crossing(a, b, alpha=1.0, n=4, bracket=(3.0, 6.0), tol=1e-10):
    """Gamma at which two bound curves cross.

    ``a`` and ``b`` are family names, ``FamilySpec`` objects or callables of
    gamma.  Plain ``"MAJ"`` uses truncation ``n``.
    """
    def as_func(spec):
        if callable(spec):
            return spec
        if isinstance(spec, str):
            text = spec
            spec = FamilySpec.parse(text)
            if ":" not in text:
                spec = replace(spec, n=n)
        return spec.function(alpha)

    fa, fb = as_func(a), as_func(b)
    lo, hi = (float(v) for v in bracket)
    if not lo < hi:
        raise BracketError(f"bracket must satisfy lo < hi, got {bracket!r}")
    return bisect(lambda g: fa(g) - fb(g), lo, hi, tol)
