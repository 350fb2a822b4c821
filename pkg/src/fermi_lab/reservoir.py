"""Spectral model of the reservoir and its correlation calculus.

The bath is described by a nonnegative spectral density J over frequency
offsets x = nu - omega.  The coupling vector g has |g(x)|^2 = J(x), and the
free one-parameter rotation acts on spectral amplitudes as multiplication
by exp(+i x u), so that the vacuum pairing of a later annihilator with an
earlier creator is exactly

    G_lambda(t) = G_1(t / lambda^2) / lambda^2,
    G_1(t) = integral J(x) exp(-i x t) dx.

Everything downstream is built from three kernels and their antiderivatives:
the self-correlation G_1, the cross-correlation C_fg(w) = <f | R_w g>
(antilinear in f), and the rescaled versions at coupling lambda.  The
microscopic damping constant is kappa = integral_0^inf G_1, with
gamma = 2 Re kappa, and Kbar = integral_0^inf |G_1| controls convergence
of the perturbation series.

Closed forms are used wherever the spectral family admits them (the
Lorentzian family admits them for every constant in the package); adaptive
quadrature covers the rest.  The uniform-grid discretization used by the
finite-mode propagator has the validity window T_valid = pi / (grid step):
evaluations beyond it raise instead of silently recurring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate


class ValidityWindowError(RuntimeError):
    """A discretized evaluation was requested beyond its faithful window."""


class IntegrabilityError(RuntimeError):
    """A kernel integral required by the Markov constants does not converge."""


# ---------------------------------------------------------------------------
# spectral density families (densities of the offset x = nu - omega)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LorentzianDensity:
    """J(x) = (gamma0 / 2 pi) * width^2 / ((x - detuning)^2 + width^2).

    Normalized so the full line integral is gamma0/2 * ... ; every Markov
    constant has a closed form:  G_1(t) = (gamma0*width/2) e^{-width|t|}
    e^{-i*detuning*t},  kappa = gamma0*width / (2*(width + i*detuning)),
    Kbar = gamma0/2.
    """

    gamma0: float = 1.0
    width: float = 1.0
    detuning: float = 0.0

    def __post_init__(self):
        if self.gamma0 <= 0 or self.width <= 0:
            raise ValueError("gamma0 and width must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return (self.gamma0 / (2 * np.pi)) * self.width**2 / (
            (x - self.detuning) ** 2 + self.width**2
        )

    @property
    def amplitude(self) -> float:
        """Kernel value at zero time: gamma0 * width / 2."""
        return 0.5 * self.gamma0 * self.width

    def kernel(self, t):
        t = np.asarray(t, dtype=float)
        return self.amplitude * np.exp(-self.width * np.abs(t) - 1j * self.detuning * t)

    def kappa_closed(self) -> complex:
        return 0.5 * self.gamma0 * self.width / (self.width + 1j * self.detuning)

    def kbar_closed(self) -> float:
        return 0.5 * self.gamma0


@dataclass(frozen=True)
class FlatBandDensity:
    """J(x) = height on |x - detuning| <= half_band, else 0.

    The kernel decays only like 1/t, so kappa exists (conditionally) while
    Kbar diverges; useful as a robustness case.
    """

    height: float = 1.0
    half_band: float = 1.0
    detuning: float = 0.0

    def __post_init__(self):
        if self.height <= 0 or self.half_band <= 0:
            raise ValueError("height and half_band must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x - self.detuning) <= self.half_band, self.height, 0.0)

    def kernel(self, t):
        t = np.asarray(t, dtype=float)
        return self.height * np.exp(-1j * self.detuning * t) * 2.0 * np.sinc(
            self.half_band * t / np.pi
        ) * self.half_band

    def kappa_closed(self) -> complex:
        on_peak = self.height if abs(self.detuning) <= self.half_band else 0.0
        lo = self.detuning - self.half_band
        hi = self.detuning + self.half_band
        if lo < 0 < hi:
            pv = self.height * math.log(abs(hi / lo))
        else:
            pv = self.height * math.log(abs(hi / lo))
        return math.pi * on_peak - 1j * pv


@dataclass(frozen=True)
class TabulatedDensity:
    """User-supplied samples of J(x), linearly interpolated, zero outside."""

    x: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        vals = tuple(float(v) for v in self.values)
        if len(x) != len(vals) or len(x) < 2:
            raise ValueError("need matching x/value samples, at least two")
        if any(b <= a for a, b in zip(x, x[1:])):
            raise ValueError("x samples must be strictly increasing")
        if any(v < 0 for v in vals):
            raise ValueError("spectral density must be nonnegative")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", vals)

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.x, self.values, left=0.0, right=0.0)

    @property
    def support(self) -> tuple[float, float]:
        return self.x[0], self.x[-1]


# ---------------------------------------------------------------------------
# spectral profiles for test vectors (legs)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralProfile:
    """A one-particle vector expressed relative to the coupling.

    ``f(x) = scale * sqrt(J(x))`` restricted to ``band`` (full line when
    band is None).  The coupling itself is ``SpectralProfile()``.
    """

    scale: complex = 1.0
    band: tuple[float, float] | None = None

    def __post_init__(self):
        if self.band is not None and self.band[1] <= self.band[0]:
            raise ValueError("band must be an increasing interval")


COUPLING = SpectralProfile()


@dataclass(frozen=True)
class SmearedVector:
    """Time-smeared collective vector data: profile f over the window [S, T].

    At coupling lambda it stands for (1/lambda) * integral_S^T R_{u/lambda^2} f du.
    """

    profile: SpectralProfile
    start: float
    stop: float

    def __post_init__(self):
        if not self.stop > self.start:
            raise ValueError(f"need stop > start, got [{self.start}, {self.stop}]")

    @property
    def length(self) -> float:
        return self.stop - self.start


def _overlap(a: SmearedVector, b: SmearedVector) -> float:
    return max(0.0, min(a.stop, b.stop) - max(a.start, b.start))


# ---------------------------------------------------------------------------
# discretization grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform midpoint grid of frequency offsets with Riemann weights."""

    offsets: tuple[float, ...]
    step: float

    @property
    def n_modes(self) -> int:
        return len(self.offsets)

    @property
    def t_valid(self) -> float:
        """Faithful kernel window of the discretization: pi / step."""
        return math.pi / self.step

    def check_window(self, w: float | np.ndarray):
        wmax = float(np.max(np.abs(w)))
        if wmax > self.t_valid:
            raise ValidityWindowError(
                f"rotated time {wmax:.3g} exceeds the grid validity window "
                f"T_valid = {self.t_valid:.3g}; use a finer grid or a larger lambda"
            )


def uniform_grid(n_modes: int, half_width: float, center: float = 0.0) -> FrequencyGrid:
    if n_modes < 2:
        raise ValueError("need at least two modes")
    step = 2.0 * half_width / n_modes
    offsets = center - half_width + step * (np.arange(n_modes) + 0.5)
    return FrequencyGrid(tuple(float(x) for x in offsets), step)


# ---------------------------------------------------------------------------
# the model
# ---------------------------------------------------------------------------

_QUAD_TOL = 1e-8


def _quad_complex(func, a, b, **kw) -> complex:
    re, _ = integrate.quad(lambda x: func(x).real, a, b, epsabs=_QUAD_TOL, limit=400, **kw)
    im, _ = integrate.quad(lambda x: func(x).imag, a, b, epsabs=_QUAD_TOL, limit=400, **kw)
    return re + 1j * im


@dataclass(frozen=True)
class ReservoirModel:
    """Spectral density + system frequency + optional discretization grid."""

    density: LorentzianDensity | FlatBandDensity | TabulatedDensity
    omega: float = 0.0
    grid: FrequencyGrid | None = None

    # -- grid data ---------------------------------------------------------

    @cached_property
    def grid_weights(self) -> np.ndarray:
        """g_k^2 = w_k J(x_k) on the grid."""
        if self.grid is None:
            raise ValueError("this model carries no discretization grid")
        x = np.asarray(self.grid.offsets)
        return self.grid.step * self.density(x)

    @cached_property
    def grid_couplings(self) -> np.ndarray:
        return np.sqrt(self.grid_weights)

    # -- kernels -----------------------------------------------------------

    def kernel(self, t):
        """G_1(t) = integral J(x) e^{-ixt} dx (continuum closed form)."""
        if hasattr(self.density, "kernel"):
            return self.density.kernel(t)
        raise NotImplementedError(
            "no continuum kernel for this density; use the grid backend"
        )

    def kernel_grid(self, t):
        """Discretized G_1; hard error outside the validity window."""
        self.grid.check_window(t)
        t = np.asarray(t, dtype=float)
        x = np.asarray(self.grid.offsets)
        return (self.grid_weights * np.exp(-1j * np.outer(np.atleast_1d(t), x))).sum(axis=-1).reshape(np.shape(t))

    def correlation(self, t: float, lam: float, backend: str = "closed") -> complex:
        """G_lambda(t) = G_1(t / lambda^2) / lambda^2."""
        if lam <= 0:
            raise ValueError("lambda must be positive")
        w = t / lam**2
        if backend == "closed":
            return complex(self.kernel(w)) / lam**2
        if backend == "grid":
            return complex(self.kernel_grid(w)) / lam**2
        raise ValueError(f"unknown backend {backend!r}")

    # -- Markov constants ----------------------------------------------------

    def kappa(self) -> complex:
        """kappa = integral_0^inf G_1(u) du; Re kappa = gamma / 2 >= 0."""
        if hasattr(self.density, "kappa_closed"):
            return self.density.kappa_closed()
        # spectral representation: pi J(0) - i PV integral J(x)/x dx
        lo, hi = getattr(self.density, "support", (-np.inf, np.inf))
        on_peak = float(self.density(0.0))
        if lo < 0.0 < hi:
            pv, _ = integrate.quad(
                lambda x: float(self.density(x)), lo, hi,
                weight="cauchy", wvar=0.0, limit=400,
            )
        else:
            pv = _quad_complex(lambda x: self.density(x) / x, lo, hi).real
        return math.pi * on_peak - 1j * pv

    def kbar(self) -> float:
        """Kbar = integral_0^inf |G_1(u)| du; raises when not integrable."""
        if isinstance(self.density, LorentzianDensity):
            return self.density.kbar_closed()
        total = 0.0
        block = 0.0
        upper = 8.0
        for _ in range(12):
            piece, _ = integrate.quad(
                lambda u: abs(complex(self.kernel(u))), block, upper, limit=400
            )
            total += piece
            if piece < 1e-10 * max(total, 1.0):
                return total
            block, upper = upper, upper * 2
        raise IntegrabilityError(
            "integral of |G_1| does not converge; the kernel is not absolutely integrable"
        )

    # -- the half-line inner product on test vectors -------------------------

    def _profile_at_zero(self, profile: SpectralProfile) -> complex:
        if profile.band is not None and not (profile.band[0] <= 0.0 <= profile.band[1]):
            return 0.0
        return profile.scale * math.sqrt(float(self.density(0.0)))

    def k_inner(self, f1: SpectralProfile, f2: SpectralProfile) -> complex:
        """(f1|f2) = integral_R <f1 | R_u f2> du = 2 pi conj(f1(0)) f2(0).

        Antilinear in the first argument; zero for disjoint spectral
        supports away from the system frequency.
        """
        return 2.0 * math.pi * np.conj(self._profile_at_zero(f1)) * self._profile_at_zero(f2)

    def cross_kernel(self, f1: SpectralProfile, f2: SpectralProfile, w):
        """C(w) = <f1 | R_w f2> = conj(s1) s2 integral J e^{+ixw} over the band."""
        scale = np.conj(f1.profile_scale if hasattr(f1, "profile_scale") else f1.scale) * f2.scale
        if f1.band is None and f2.band is None:
            return scale * np.conj(self.kernel(w))
        lo = max(
            f1.band[0] if f1.band else -np.inf, f2.band[0] if f2.band else -np.inf
        )
        hi = min(
            f1.band[1] if f1.band else np.inf, f2.band[1] if f2.band else np.inf
        )
        if hi <= lo:
            return np.zeros_like(np.asarray(w, dtype=complex))
        def single(wv):
            return scale * _quad_complex(
                lambda x: self.density(x) * np.exp(1j * x * wv), lo, hi
            )
        return np.vectorize(single)(w)

    # -- antiderivatives of the scaled-coupling cross kernel ------------------

    def _lorentzian_K1(self, w):
        """K1(w) = integral_0^w C_gg, C_gg(x) = A e^{-width|x| + i*detuning*x}."""
        d = self.density
        A = d.amplitude
        z_pos = -d.width + 1j * d.detuning
        z_neg = d.width + 1j * d.detuning
        w = np.asarray(w, dtype=float)
        pos = A * (np.exp(z_pos * np.clip(w, 0, None)) - 1.0) / z_pos
        neg = A * (np.exp(z_neg * np.clip(w, None, 0)) - 1.0) / z_neg
        return np.where(w >= 0, pos, neg)

    def _lorentzian_K2(self, w):
        d = self.density
        A = d.amplitude
        z_pos = -d.width + 1j * d.detuning
        z_neg = d.width + 1j * d.detuning
        w = np.asarray(w, dtype=float)
        wp = np.clip(w, 0, None)
        wn = np.clip(w, None, 0)
        pos = A * ((np.exp(z_pos * wp) - 1.0) / z_pos**2 - wp / z_pos)
        neg = A * ((np.exp(z_neg * wn) - 1.0) / z_neg**2 - wn / z_neg)
        return np.where(w >= 0, pos, neg)

    def _require_lorentzian(self, what: str):
        if not isinstance(self.density, LorentzianDensity):
            raise NotImplementedError(
                f"{what} has a closed form for the Lorentzian family only; "
                "tabulate a Lorentzian or extend the kernel antiderivatives"
            )

    # -- collective vectors and h-functions ----------------------------------

    def h_function(self, leg: SmearedVector, t: float, lam: float) -> complex:
        """h(t, lambda) = (1/lambda) < f~(lambda) | R_{t/lambda^2} g >.

        Equals the w-integral of the cross kernel over
        [(t - T)/lambda^2, (t - S)/lambda^2].
        """
        if lam <= 0:
            raise ValueError("lambda must be positive")
        self._require_lorentzian("the finite-coupling h-function")
        if leg.profile.band is not None:
            raise NotImplementedError("h-functions support full-band profiles")
        a = (t - leg.stop) / lam**2
        b = (t - leg.start) / lam**2
        scale = np.conj(leg.profile.scale)
        return complex(scale * (self._lorentzian_K1(b) - self._lorentzian_K1(a)))

    def h_limit(self, leg: SmearedVector, t: float) -> complex:
        """Memoryless limit: indicator of [S, T] times (f|g)."""
        inside = leg.start <= t <= leg.stop
        return self.k_inner(leg.profile, COUPLING) if inside else 0.0

    def h_bound(self, leg: SmearedVector) -> float:
        """integral_R |<R_u f | g>| du, valid for every lambda and t."""
        self._require_lorentzian("the h bound")
        d = self.density
        return abs(leg.profile.scale) * d.gamma0  # = |s| * 2 * A / width

    def collective_inner(self, a: SmearedVector, b: SmearedVector, lam: float) -> complex:
        """< a~(lambda) | b~(lambda) > by exact double antiderivatives."""
        if lam <= 0:
            raise ValueError("lambda must be positive")
        self._require_lorentzian("the finite-coupling collective inner product")
        scale = np.conj(a.profile.scale) * b.profile.scale
        corners = [
            (b.stop - a.start, +1),
            (b.start - a.stop, +1),
            (b.stop - a.stop, -1),
            (b.start - a.start, -1),
        ]
        total = 0.0 + 0.0j
        for x, sgn in corners:
            total += sgn * self._lorentzian_K2(x / lam**2)
        return complex(scale * lam**2 * total)

    def limit_collective_inner(self, a: SmearedVector, b: SmearedVector) -> complex:
        """Window overlap length times (f_a | f_b)."""
        return _overlap(a, b) * self.k_inner(a.profile, b.profile)


def lorentzian_model(
    gamma0: float = 1.0,
    width: float = 1.0,
    detuning: float = 0.0,
    omega: float = 0.0,
    n_modes: int | None = None,
    half_width_factor: float = 8.0,
) -> ReservoirModel:
    """Convenience constructor; attaches a uniform grid when n_modes is given."""
    density = LorentzianDensity(gamma0, width, detuning)
    grid = None
    if n_modes is not None:
        grid = uniform_grid(n_modes, half_width_factor * width, center=detuning)
    return ReservoirModel(density, omega=omega, grid=grid)
