"""Coarse-grained position and momentum distributions of test states.

Units have hbar = 1, so ``gamma = Delta * delta``.  Bin ``k`` of width
``w`` covers ``[(k - 1/2) w, (k + 1/2) w]``.  The momentum amplitude is the
unitary transform ``psi~(p) = (2 pi)^(-1/2) int psi(x) exp(-i p x) dx``.

Gaussian and Hermite-superposition states are handled in closed form:
``|psi|^2`` of a Hermite superposition has an elementary antiderivative
built from Hermite functions and ``erf``.  Sampled states go through
trigonometric interpolation on their (power-of-two) grid and composite
Gauss-Legendre quadrature in every bin.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import erf, ndtr

from .bounds import bound_majorization, renyi_entropy
from .errors import DomainError, ResourceError
from .majorization import MEASURED_SLACK, build_w, majorizes

__all__ = [
    "StateSpec",
    "CoarseDistribution",
    "EURReport",
    "hermite_functions",
    "position_probs",
    "momentum_probs",
    "sample_state",
    "random_states",
    "verify_eur",
    "verify_direct_sum_majorization",
    "load_sampled",
    "save_sampled",
]

MAX_LEVELS = 32
MAX_BINS = 1_000_000
TAIL_TARGET = 1e-12
NORM_TOL = 1e-10
EDGE_DENSITY = 1e-16
# bins are laid out only where a sampled density exceeds this
SUPPORT_DENSITY = 1e-18
NODES_PER_BIN = 16
DEFAULT_GRID = 2**14
EUR_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class StateSpec:
    """A normalised pure state on the real line.

    Use the constructors :meth:`gaussian`, :meth:`hermite`, :meth:`random`
    and :meth:`sampled` rather than the raw fields.
    """

    kind: str
    sigma: float = 1.0
    shift: float = 0.0
    coefficients: np.ndarray = field(default=None, repr=False)
    grid: np.ndarray = field(default=None, repr=False)
    amplitudes: np.ndarray = field(default=None, repr=False)
    seed: int | None = None

    @classmethod
    def gaussian(cls, sigma=1.0, shift=0.0):
        """Minimum-uncertainty Gaussian with position standard deviation ``sigma``."""
        if not sigma > 0 or not math.isfinite(sigma):
            raise DomainError(f"sigma must be positive, got {sigma!r}")
        return cls("gaussian", sigma=float(sigma), shift=float(shift))

    @classmethod
    def hermite(cls, coefficients, shift=0.0, seed=None):
        c = np.asarray(coefficients, dtype=complex).ravel()
        if c.size == 0 or c.size > MAX_LEVELS:
            raise DomainError(f"need between 1 and {MAX_LEVELS} Hermite coefficients, got {c.size}")
        norm = np.linalg.norm(c)
        if norm == 0:
            raise DomainError("Hermite coefficients are all zero")
        return cls("hermite", shift=float(shift), coefficients=c / norm, seed=seed)

    @classmethod
    def random(cls, seed=42, levels=10):
        """Hermite superposition with i.i.d. complex standard normal coefficients."""
        rng = np.random.default_rng(seed)
        c = rng.standard_normal(levels) + 1j * rng.standard_normal(levels)
        return cls.hermite(c, seed=seed)

    @classmethod
    def sampled(cls, grid, amplitudes):
        """State given by amplitudes on a uniform, power-of-two sized grid."""
        x = np.asarray(grid, dtype=float).ravel()
        a = np.asarray(amplitudes, dtype=complex).ravel()
        n = x.size
        if n != a.size:
            raise DomainError("grid and amplitudes differ in length")
        if n < 16 or n & (n - 1):
            raise DomainError(f"sampled grid size must be a power of two >= 16, got {n}")
        h = (x[-1] - x[0]) / (n - 1)
        if not h > 0 or not np.allclose(np.diff(x), h, rtol=1e-9, atol=0):
            raise DomainError("sampled grid must be uniform and increasing")
        norm = math.sqrt(h * float(np.sum(np.abs(a) ** 2)))
        if norm == 0:
            raise DomainError("sampled amplitudes are all zero")
        return cls("sampled", grid=x, amplitudes=a / norm)

    @property
    def spacing(self):
        return (self.grid[-1] - self.grid[0]) / (self.grid.size - 1)

    def norm(self):
        """L2 norm; 1 up to rounding for every constructed state."""
        if self.kind == "sampled":
            return math.sqrt(self.spacing * float(np.sum(np.abs(self.amplitudes) ** 2)))
        if self.kind == "hermite":
            return float(np.linalg.norm(self.coefficients))
        return 1.0

    def shifted(self, x0):
        """Same state translated by ``x0`` in position."""
        if self.kind == "gaussian":
            return StateSpec.gaussian(self.sigma, self.shift + x0)
        if self.kind == "hermite":
            return StateSpec.hermite(self.coefficients, self.shift + x0, self.seed)
        return StateSpec.sampled(self.grid + x0, self.amplitudes)

    def position_amplitude(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "gaussian":
            u = (x - self.shift) / self.sigma
            return (2 * math.pi * self.sigma**2) ** -0.25 * np.exp(-0.25 * u * u) + 0j
        if self.kind == "hermite":
            return self.coefficients @ hermite_functions(len(self.coefficients), x - self.shift)
        return _interpolate(self, x)

    def momentum_amplitude(self, p):
        p = np.asarray(p, dtype=float)
        if self.kind == "gaussian":
            s = 0.5 / self.sigma
            return (2 * math.pi * s * s) ** -0.25 * np.exp(-0.25 * (p / s) ** 2 - 1j * p * self.shift)
        if self.kind == "hermite":
            phases = (-1j) ** np.arange(len(self.coefficients))
            amp = (self.coefficients * phases) @ hermite_functions(len(self.coefficients), p)
            return amp * np.exp(-1j * p * self.shift)
        return _fourier(self, p)


@dataclass(frozen=True, eq=False)
class CoarseDistribution:
    """Bin probabilities ``probs[i]`` for bins ``k_min + i`` of width ``width``."""

    width: float
    k_min: int
    k_max: int
    probs: np.ndarray
    tail: float

    @property
    def indices(self):
        return np.arange(self.k_min, self.k_max + 1)

    def prob(self, k):
        if self.k_min <= k <= self.k_max:
            return float(self.probs[k - self.k_min])
        return 0.0

    def total(self):
        return float(self.probs.sum()) + self.tail


@dataclass(frozen=True)
class EURReport:
    lhs: float
    rhs: float
    margin: float
    passed: bool

    def as_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "margin": self.margin, "pass": self.passed}


def hermite_functions(levels, x):
    """Normalised Hermite functions ``h_0 .. h_{levels-1}`` at ``x``, shape ``(levels, len(x))``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((levels,) + x.shape)
    out[0] = math.pi**-0.25 * np.exp(-0.5 * x * x)
    if levels > 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, levels - 1):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def _hermite_cdf(coefficients, x):
    """``int_{-inf}^x |sum_n c_n h_n|^2`` in closed form.

    Antiderivatives of ``h_m h_n``: for ``m != n`` the Wronskian
    ``(h_m' h_n - h_m h_n') / (2 (n - m))``; on the diagonal
    ``erf(x)/2 - sum_{j<=n} h_{j-1} h_j / sqrt(2j)``.
    """
    c = coefficients
    levels = len(c)
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = np.atleast_1d(x)
    h = hermite_functions(levels + 1, x)
    # h_n' = sqrt(2n) h_{n-1} - x h_n
    dh = -x * h[:levels]
    dh[1:] += np.sqrt(2.0 * np.arange(1, levels))[:, None] * h[: levels - 1]
    h = h[:levels]

    diag = np.empty_like(h)
    diag[0] = 0.5 * erf(x)
    for j in range(1, levels):
        diag[j] = diag[j - 1] - h[j - 1] * h[j] / math.sqrt(2.0 * j)

    total = np.abs(c) ** 2 @ diag
    for m in range(levels):
        for k in range(m + 1, levels):
            g = (dh[m] * h[k] - h[m] * dh[k]) / (2.0 * (k - m))
            total += 2.0 * (np.conj(c[m]) * c[k]).real * g
    return (0.5 + total).reshape(shape)


def _window(lo, hi, width):
    k_min = int(math.floor(lo / width + 0.5))
    k_max = int(math.floor(hi / width + 0.5))
    if k_max - k_min + 1 > MAX_BINS:
        raise ResourceError(f"coarse graining needs {k_max - k_min + 1} bins (limit {MAX_BINS})")
    return k_min, k_max


def _from_cdf(cdf, sf, center, radius, width):
    k_min, k_max = _window(center - radius, center + radius, width)
    edges = (np.arange(k_min, k_max + 2) - 0.5) * width
    c = cdf(edges)
    probs = np.clip(np.diff(c), 0.0, None)
    tail = float(c[0] + sf(edges[-1]))
    return CoarseDistribution(float(width), k_min, k_max, probs, tail)


def _closed_form(state, width, momentum):
    if state.kind == "gaussian":
        s = 0.5 / state.sigma if momentum else state.sigma
        mu = 0.0 if momentum else state.shift
        radius = 8.5 * s
        return _from_cdf(lambda e: ndtr((e - mu) / s), lambda e: ndtr(-(e - mu) / s), mu, radius, width)
    coeffs = state.coefficients
    if momentum:
        coeffs = coeffs * (-1j) ** np.arange(len(coeffs))
        mu = 0.0
    else:
        mu = state.shift
    radius = math.sqrt(2.0 * len(coeffs) + 1.0) + 8.0
    return _from_cdf(
        lambda e: _hermite_cdf(coeffs, e - mu),
        lambda e: 1.0 - _hermite_cdf(coeffs, e - mu),
        mu,
        radius,
        width,
    )


def _spectrum(state):
    # continuum-normalised momentum amplitude on the FFT frequency grid
    x, a = state.grid, state.amplitudes
    h = state.spacing
    n = x.size
    p = 2.0 * math.pi * np.fft.fftfreq(n, h)
    raw = np.fft.fft(a)
    phi = h / math.sqrt(2.0 * math.pi) * np.exp(-1j * p * x[0]) * raw
    return p, raw, phi


def _interpolate(state, x):
    p, raw, _ = _spectrum(state)
    keep = np.abs(raw) > 1e-18 * np.abs(raw).max()
    p, raw = p[keep], raw[keep]
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape, dtype=complex)
    flat = x.ravel()
    res = out.ravel()
    for start in range(0, flat.size, 256):
        chunk = flat[start : start + 256]
        res[start : start + 256] = np.exp(1j * np.outer(chunk - state.grid[0], p)) @ raw / state.grid.size
    return res.reshape(x.shape)


def _fourier(state, p):
    x, a = state.grid, state.amplitudes
    keep = np.abs(a) > 1e-18 * np.abs(a).max()
    x, a = x[keep], a[keep]
    p = np.asarray(p, dtype=float)
    flat = p.ravel()
    res = np.empty(flat.size, dtype=complex)
    pref = state.spacing / math.sqrt(2.0 * math.pi)
    for start in range(0, flat.size, 256):
        chunk = flat[start : start + 256]
        res[start : start + 256] = pref * (np.exp(-1j * np.outer(chunk, x)) @ a)
    return res.reshape(p.shape)


def _support(values, coords, threshold):
    idx = np.nonzero(np.abs(values) ** 2 > threshold)[0]
    if idx.size == 0:
        raise DomainError("state has no support above the density threshold")
    return float(coords[idx].min()), float(coords[idx].max())


def _quadrature(state, width, momentum):
    if momentum:
        p, _, phi = _spectrum(state)
        order = np.argsort(p)
        p, phi = p[order], phi[order]
        edge = np.abs(phi[[0, -1]]) ** 2
        if edge.max() > EDGE_DENSITY:
            raise ResourceError(
                f"momentum density {edge.max():.2e} at the grid's Nyquist edge; refine the sampling"
            )
        lo, hi = _support(phi, p, SUPPORT_DENSITY)
        amp = state.momentum_amplitude
    else:
        lo, hi = _support(state.amplitudes, state.grid, SUPPORT_DENSITY)
        amp = state.position_amplitude
    k_min, k_max = _window(lo, hi, width)
    t, w = np.polynomial.legendre.leggauss(NODES_PER_BIN)
    centers = np.arange(k_min, k_max + 1) * width
    nodes = centers[:, None] + 0.5 * width * t[None, :]
    dens = np.abs(amp(nodes)) ** 2
    probs = 0.5 * width * (dens @ w)
    tail = max(0.0, 1.0 - float(probs.sum()))
    return CoarseDistribution(float(width), k_min, k_max, probs, tail)


def _coarse(state, width, momentum):
    if not width > 0 or not math.isfinite(width):
        raise DomainError(f"bin width must be positive, got {width!r}")
    if state.kind == "sampled":
        return _quadrature(state, width, momentum)
    return _closed_form(state, width, momentum)


def position_probs(state, width):
    """Probabilities ``q_k`` of finding the particle in position bin ``k``."""
    return _coarse(state, width, momentum=False)


def momentum_probs(state, width):
    """Probabilities ``p_l`` of finding the momentum in bin ``l``."""
    return _coarse(state, width, momentum=True)


def _reach(s):
    # distance from the centre at which a normal density of std s falls to EDGE_DENSITY
    peak = 1.0 / (s * math.sqrt(2.0 * math.pi))
    return s * math.sqrt(2.0 * math.log(max(peak / EDGE_DENSITY, math.e)))


def _extent(state):
    if state.kind == "gaussian":
        return 1.2 * _reach(state.sigma), 1.2 * _reach(0.5 / state.sigma)
    r = math.sqrt(2.0 * len(state.coefficients) + 1.0) + 8.0
    return r, r


def sample_state(state, n_points=DEFAULT_GRID):
    """Tabulate a closed-form state on a uniform power-of-two grid.

    The grid is centred on the state and wide enough that the position
    density is below ``1e-16`` at both ends.

    Raises
    ------
    ResourceError
        If ``n_points`` samples cannot resolve the momentum range as well.
    """
    if state.kind == "sampled":
        return state
    if n_points < 16 or n_points & (n_points - 1):
        raise DomainError(f"grid size must be a power of two >= 16, got {n_points}")
    half_x, half_p = _extent(state)
    h = 2.0 * half_x / n_points
    if math.pi / h < half_p:
        raise ResourceError(
            f"{n_points} points cannot cover |x| <= {half_x:.3g} and |p| <= {half_p:.3g} simultaneously"
        )
    x = state.shift + (np.arange(n_points) - n_points // 2) * h
    return StateSpec.sampled(x, state.position_amplitude(x))


def random_states(trials, seed=42, levels=10):
    """Reproducible ensemble of random Hermite superpositions (seeds ``seed + i``)."""
    return [StateSpec.random(seed + i, levels) for i in range(trials)]


def _gamma(delta_x, delta_p):
    if not delta_x > 0 or not delta_p > 0:
        raise DomainError("bin widths must be positive")
    return float(delta_x) * float(delta_p)


def verify_eur(state, delta_x, delta_p, alpha=1.0, n=4):
    """Compare ``H_alpha[q] + H_alpha[p]`` against the majorization bound."""
    gamma = _gamma(delta_x, delta_p)
    q = position_probs(state, delta_x)
    p = momentum_probs(state, delta_p)
    lhs = renyi_entropy(q.probs, alpha) + renyi_entropy(p.probs, alpha)
    rhs = bound_majorization(gamma, alpha, n)
    margin = lhs - rhs
    return EURReport(lhs, rhs, margin, bool(margin >= -EUR_SLACK))


def verify_direct_sum_majorization(state, delta_x, delta_p, n=4):
    """Check ``q (+) p  <  {1} (+) W^(n)`` at slack ``1e-9`` (total mass 2 on both sides)."""
    gamma = _gamma(delta_x, delta_p)
    q = position_probs(state, delta_x)
    p = momentum_probs(state, delta_p)
    w = build_w(gamma, n).coeffs
    return majorizes(np.concatenate([q.probs, p.probs]), np.concatenate([[1.0], w]), MEASURED_SLACK)


def load_sampled(path):
    """Read a sampled state: header ``n_points x_min x_max`` then ``re im`` per line."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise DomainError(f"{path}: empty state file")
    head = lines[0].split()
    if len(head) != 3:
        raise DomainError(f"{path}: header must be 'n_points x_min x_max'")
    n, x_min, x_max = int(head[0]), float(head[1]), float(head[2])
    data = np.loadtxt(lines[1:], ndmin=2)
    if data.shape != (n, 2):
        raise DomainError(f"{path}: expected {n} 're im' rows, got shape {data.shape}")
    return StateSpec.sampled(np.linspace(x_min, x_max, n), data[:, 0] + 1j * data[:, 1])


def save_sampled(state, path):
    if state.kind != "sampled":
        state = sample_state(state)
    x, a = state.grid, state.amplitudes
    rows = [f"{x.size} {x[0]:.17g} {x[-1]:.17g}"]
    rows += [f"{v.real:.17g} {v.imag:.17g}" for v in a]
    Path(path).write_text("\n".join(rows) + "\n")
