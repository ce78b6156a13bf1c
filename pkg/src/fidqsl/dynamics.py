"""Exact reduced dynamics of a two-level atom in a Lorentzian vacuum reservoir.

The atom is resonantly coupled to a zero-temperature bosonic reservoir with
spectral density ``J(w) = gamma0 lambda^2 / (2 pi ((w0 - w)^2 + lambda^2))``.
Everything follows from the amplitude ``G(t)``, which solves

    dG/dt = -int_0^t f(t - s) G(s) ds,   G(0) = 1,
    f(tau) = (gamma0 lambda / 2) exp(-lambda |tau|),

with closed form ``G = exp(-lambda t/2) (cosh(dt/2) + lambda/d sinh(dt/2))``
and ``d = sqrt(lambda^2 - 2 gamma0 lambda)`` (imaginary for strong
coupling, ``gamma0 > lambda/2``).

Basis convention: index 0 is the excited state |1>, index 1 the ground
state |0>. Populations scale with ``|G|^2`` and coherences with ``G``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densmat import check_density
from .errors import CoarseGridError, SingularDecayRateError


@dataclass(frozen=True)
class ReservoirParams:
    """Lorentzian reservoir. ``omega0`` does not enter the resonant dynamics."""

    gamma0: float
    lam: float
    omega0: float = 1.0

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if not self.omega0 >= 0:
            raise ValueError(f"omega0 must be non-negative, got {self.omega0}")

    @property
    def d(self) -> complex:
        return np.sqrt(complex(self.lam * self.lam - 2.0 * self.gamma0 * self.lam))

    @property
    def markovian(self) -> bool:
        return self.gamma0 < self.lam / 2


@dataclass(frozen=True)
class WernerSpec:
    """Mixture ``(1-r)/2 I + r |psi><psi|`` with ``|psi> = (|1> + |0>)/sqrt(2)``."""

    r: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"Werner weight r must lie in [0, 1], got {self.r}")


def werner_state(spec) -> np.ndarray:
    r = spec.r if isinstance(spec, WernerSpec) else WernerSpec(float(spec)).r
    return np.array([[0.5, r / 2], [r / 2, 0.5]], dtype=complex)


def _check_time(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("time must be non-negative")
    return t


def _damped_terms(t: np.ndarray, p: ReservoirParams):
    """Return e^{-lam t/2} cosh(x) and e^{-lam t/2} sinh(x)/x with x = d t / 2.

    Exponents are combined before exponentiating so nothing overflows, and
    for small |x| the ratio sinh(x)/x is taken from ``np.sinc`` which is
    regular at 0 (this covers the critical case d = 0).
    """
    d = p.d
    x = d * t / 2.0
    half = p.lam * t / 2.0
    ch = 0.5 * (np.exp(x - half) + np.exp(-x - half))
    small = np.abs(x) < 1.0
    xs = np.where(small, x, 1.0)
    xl = np.where(small, 1.0, x)
    # sinh(x)/x = sin(i x)/(i x) = sinc(i x / pi)
    shc_small = np.exp(-half) * np.sinc(1j * xs / np.pi)
    shc_large = 0.5 * (np.exp(xl - half) - np.exp(-xl - half)) / xl
    shc = np.where(small, shc_small, shc_large)
    return ch, shc


def g_function(t, p: ReservoirParams):
    """Closed-form amplitude G(t); complex, scalar or array like ``t``."""
    t = _check_time(t)
    ch, shc = _damped_terms(t, p)
    # (lambda/d) sinh(dt/2) = (lambda t / 2) * sinh(x)/x
    g = ch + (p.lam * t / 2.0) * shc
    return g[()] if g.ndim == 0 else g


def g_dot(t, p: ReservoirParams):
    """dG/dt = -(gamma0 lambda / d) e^{-lambda t/2} sinh(dt/2)."""
    t = _check_time(t)
    _, shc = _damped_terms(t, p)
    gd = -p.gamma0 * p.lam * (t / 2.0) * shc
    return gd[()] if gd.ndim == 0 else gd


def memory_kernel(dt, p: ReservoirParams):
    """Reservoir correlation function at resonance, (gamma0 lambda/2) e^{-lambda|dt|}."""
    return 0.5 * p.gamma0 * p.lam * np.exp(-p.lam * np.abs(dt))


def solve_g_volterra(p: ReservoirParams, t_max: float, steps: int):
    """Solve the memory-kernel equation for G numerically on a uniform grid.

    The convolution is discretised with the trapezoidal rule and G is
    advanced with the trapezoidal (second-order) step. The step is linear in
    the new value, so the implicit corrector is solved in closed form rather
    than iterated. Cost is O(steps^2).

    Returns:
        (t, G) arrays of length ``steps + 1``.

    Raises:
        CoarseGridError: fewer than 100 steps or fewer than 10 points per
            kernel memory time 1/lambda.
    """
    if steps < 100:
        raise CoarseGridError(f"need at least 100 steps, got {steps}")
    h = t_max / steps
    if h * p.lam > 0.1:
        raise CoarseGridError(
            f"step {h:.3g} gives fewer than 10 points per memory time 1/lambda={1 / p.lam:.3g}")
    t = np.arange(steps + 1) * h
    f = memory_kernel(t, p)
    y = np.zeros(steps + 1, dtype=complex)
    z = np.zeros(steps + 1, dtype=complex)
    y[0] = 1.0
    denom = 1.0 + 0.25 * h * h * f[0]
    for n in range(1, steps + 1):
        # trapezoid weights: 1/2 at s=0 and s=t_n (the latter kept implicit)
        s = 0.5 * f[n] * y[0] + np.dot(f[n - 1:0:-1], y[1:n])
        y[n] = (y[n - 1] + 0.5 * h * z[n - 1] - 0.5 * h * h * s) / denom
        z[n] = -h * s - 0.5 * h * f[0] * y[n]
    return t, y


def evolve(rho0, t, p: ReservoirParams) -> np.ndarray:
    """State at time(s) ``t``; returns ``(2, 2)`` or ``(len(t), 2, 2)``."""
    rho0 = np.asarray(rho0, dtype=complex)
    g = g_function(t, p)
    g = np.asarray(g)
    out = np.empty(g.shape + (2, 2), dtype=complex)
    exc = rho0[0, 0].real * np.abs(g) ** 2
    out[..., 0, 0] = exc
    out[..., 1, 1] = 1.0 - exc
    out[..., 0, 1] = rho0[0, 1] * g
    out[..., 1, 0] = np.conj(rho0[0, 1] * g)
    return out


def rho_dot(rho0, t, p: ReservoirParams) -> np.ndarray:
    """Analytic time derivative of :func:`evolve`."""
    rho0 = np.asarray(rho0, dtype=complex)
    g = np.asarray(g_function(t, p))
    gd = np.asarray(g_dot(t, p))
    dpop = rho0[0, 0].real * 2.0 * np.real(np.conj(g) * gd)
    out = np.empty(g.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = dpop
    out[..., 1, 1] = -dpop
    out[..., 0, 1] = rho0[0, 1] * gd
    out[..., 1, 0] = np.conj(rho0[0, 1] * gd)
    return out


def decay_rate(t, p: ReservoirParams, g_floor: float = 1e-12):
    """Time-dependent decay rate ``-2 Re(G'/G)`` of the master equation.

    Raises:
        SingularDecayRateError: ``|G(t)|`` below ``g_floor`` at some ``t``.
    """
    g = np.asarray(g_function(t, p))
    if np.any(np.abs(g) < g_floor):
        raise SingularDecayRateError("G(t) vanishes; the decay rate diverges there")
    rate = -2.0 * np.real(np.asarray(g_dot(t, p)) / g)
    return rate[()] if rate.ndim == 0 else rate


def generator(rho, rate) -> np.ndarray:
    """Amplitude-damping generator ``rate * (s- rho s+ - {s+ s-, rho}/2)``."""
    rho = np.asarray(rho, dtype=complex)
    rate = np.asarray(rate, dtype=float)[..., None, None]
    out = np.zeros_like(rho)
    out[..., 0, 0] = -rho[..., 0, 0]
    out[..., 1, 1] = rho[..., 0, 0]
    out[..., 0, 1] = -0.5 * rho[..., 0, 1]
    out[..., 1, 0] = -0.5 * rho[..., 1, 0]
    return rate * out


@dataclass(frozen=True)
class Trajectory:
    """States and derivatives sampled on a uniform time grid."""

    times: np.ndarray
    states: np.ndarray
    derivs: np.ndarray
    initial: np.ndarray
    params: ReservoirParams | None = None

    @property
    def purities(self) -> np.ndarray:
        return np.einsum("nij,nji->n", self.states, self.states).real


class DampedQubit:
    """Evolution model wrapping the closed-form solution for fixed parameters."""

    def __init__(self, params: ReservoirParams):
        self.params = params

    def states(self, rho0, t):
        return evolve(rho0, t, self.params)

    def derivs(self, rho0, t):
        return rho_dot(rho0, t, self.params)


class FrozenModel:
    """Trivial evolution rho(t) = rho0; used to exercise degenerate cases."""

    params = None

    def states(self, rho0, t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(rho0, dtype=complex), t.shape + np.shape(rho0)).copy()

    def derivs(self, rho0, t):
        return np.zeros_like(self.states(rho0, t))


def trajectory(initial, p: ReservoirParams | None, t_max: float, n_points: int,
               model=None) -> Trajectory:
    """Sample states on ``linspace(0, t_max, n_points)``.

    ``initial`` is a density matrix, a :class:`WernerSpec`, or a Werner
    weight r. ``model`` overrides the closed-form damped-qubit evolution.
    """
    if n_points < 2:
        raise ValueError("trajectory needs at least 2 points")
    if isinstance(initial, (WernerSpec, float, int)):
        rho0 = werner_state(initial)
    else:
        rho0 = check_density(initial)
    model = model if model is not None else DampedQubit(p)
    times = np.linspace(0.0, t_max, n_points)
    return Trajectory(times=times, states=model.states(rho0, times),
                      derivs=model.derivs(rho0, times), initial=rho0, params=p)
