"""Quantum speed limit bound built on the purity-weighted fidelity ``new_f``.

For a trajectory rho_t starting at rho_0 the driving time obeys

    tau >= |1 - F_tau| / X_tau,    F_tau = new_f(rho_0, rho_tau),

where X_tau is the time average over [0, tau] of an upper bound on
|d new_f(rho_0, rho_t)/dt|. With a = Tr rho_0^2 and b = Tr rho_t^2,

    speed(t) = sqrt((1-a)/a) sqrt(b/(1-b)) |Tr(rho_t' rho_t) Tr(rho_0 rho_t)| / b^2
             + sqrt(a Tr rho_t'^2)
             + sqrt((1-b)/b) sqrt(1-a) sqrt(Tr rho_t'^2).

The first term is the exact derivative of the purity factor; its
denominator is (Tr rho_t^2)^2, as obtained by differentiating
sqrt((1-b)/b). For a pure rho_0 only the middle term survives and the
bound collapses to the Mandelstam-Tamm form ``|1 - Tr(rho_0 rho_tau)| /
<sqrt(Tr rho_t'^2)>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .densmat import check_density, hs_inner, purity_deficit
from .dynamics import ReservoirParams, Trajectory, trajectory
from .errors import BoundInconsistencyError, NearPuritySingularityError
from .fidelity import FidelityKind, evaluate, new_f


@dataclass(frozen=True)
class QuadratureConfig:
    """Uniform-grid composite Simpson settings.

    ``refinement`` is the number of successive grid halvings available below
    ``n_points``; the error estimate is the Richardson difference between the
    finest grid and the one with twice the step.
    """

    n_points: int = 2001
    refinement: int = 1
    purity_guard: float = 1e-9
    tol: float = 1e-6

    def __post_init__(self):
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise ValueError(f"n_points must be odd and >= 3, got {self.n_points}")
        if self.refinement < 1:
            raise ValueError("refinement must be >= 1")
        panels = self.n_points - 1
        if panels % (2 ** (self.refinement + 1)):
            raise ValueError(f"n_points - 1 = {panels} must be divisible by "
                             f"2**(refinement + 1) = {2 ** (self.refinement + 1)}")
        if not self.purity_guard > 0:
            raise ValueError("purity_guard must be positive")


@dataclass
class BoundResult:
    tau: float
    f_tau: float
    x_tau: float
    tau_qsl: float
    quad_error: float
    converged: bool
    integrand_times: np.ndarray = field(repr=False)
    integrand_values: np.ndarray = field(repr=False)

    def as_dict(self) -> dict:
        return {"tau": self.tau, "f_tau": self.f_tau, "x_tau": self.x_tau,
                "tau_qsl": self.tau_qsl, "quad_error": self.quad_error,
                "converged": self.converged}


def simpson(values: np.ndarray, h: float) -> float:
    """Composite Simpson rule on an odd number of equally spaced samples."""
    n = len(values)
    if n < 3 or n % 2 == 0:
        raise ValueError("Simpson rule needs an odd number (>= 3) of samples")
    return h / 3.0 * (values[0] + values[-1] + 4.0 * values[1:-1:2].sum()
                      + 2.0 * values[2:-1:2].sum())


def time_average(values: np.ndarray, times: np.ndarray, cfg: QuadratureConfig):
    """Mean of ``values`` over the grid span, with a Richardson error estimate.

    Returns:
        (average, error_estimate) where the estimate is ``|S_h - S_2h| / 15``
        divided by the span.
    """
    span = times[-1] - times[0]
    h = times[1] - times[0]
    fine = simpson(values, h)
    coarse = simpson(values[::2], 2 * h)
    if span == 0:
        return 0.0, 0.0
    return fine / span, abs(fine - coarse) / 15.0 / span


def integrand_x(rho0, rho_t, rho_t_dot, guard: float = 1e-9) -> np.ndarray:
    """Pointwise speed bound; broadcasts over a stack of ``rho_t``.

    The factor ``|Tr(rho_t' rho_t)| / sqrt(1 - b)`` is finite wherever the
    purity deficit is resolved, because ``purity_deficit`` evaluates 1 - b
    without cancellation. Only an exactly pure ``rho_t`` (with mixed
    ``rho_0``) needs the guard: the term is dropped if
    ``|Tr(rho_t' rho_t)| <= guard`` and rejected otherwise.

    Raises:
        NearPuritySingularityError: see above.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    rho_t = np.asarray(rho_t, dtype=complex)
    rho_t_dot = np.asarray(rho_t_dot, dtype=complex)
    def0 = purity_deficit(rho0)
    a = 1.0 - def0
    def_t = purity_deficit(rho_t, floor=0.0)
    b = 1.0 - def_t
    speed2 = np.clip(hs_inner(rho_t_dot, rho_t_dot), 0.0, None)
    half_dpur = hs_inner(rho_t_dot, rho_t)
    overlap = hs_inner(rho0[None] if rho_t.ndim == 3 else rho0, rho_t)

    term2 = np.sqrt(a * speed2)
    if def0 == 0.0:
        return term2
    term3 = np.sqrt(def_t / b) * np.sqrt(def0) * np.sqrt(speed2)
    amp = np.sqrt(def0 / a)
    safe = def_t > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(safe, np.sqrt(b / np.where(safe, def_t, 1.0)), 0.0)
    term1 = amp * ratio * np.abs(half_dpur * overlap) / b ** 2
    singular = ~safe & (np.abs(half_dpur) > guard)
    if np.any(singular):
        raise NearPuritySingularityError(
            "rho_t is exactly pure while its purity is still changing "
            f"(|Tr(rho' rho)| = {np.max(np.abs(half_dpur[singular])):.3e})")
    return term1 + term2 + term3


def _speed_samples(rho0, traj: Trajectory, cfg: QuadratureConfig) -> np.ndarray:
    return integrand_x(rho0, traj.states, traj.derivs, guard=cfg.purity_guard)


def x_tau(rho0, traj: Trajectory, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """Time-averaged speed bound over the trajectory's span."""
    avg, _ = time_average(_speed_samples(rho0, traj, cfg), traj.times, cfg)
    return avg


def _build(rho0, p, tau, cfg, model) -> tuple[np.ndarray, Trajectory]:
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    rho0 = check_density(rho0)
    return rho0, trajectory(rho0, p, tau, cfg.n_points, model=model)


def _ratio(numerator: float, denominator: float, what: str) -> float:
    if denominator > 0:
        return numerator / denominator
    if numerator <= 1e-12:
        return 0.0
    raise BoundInconsistencyError(f"{what}: zero speed but fidelity moved by {numerator:.3e}")


def qsl_time(rho0, p: ReservoirParams | None, tau: float,
             cfg: QuadratureConfig = QuadratureConfig(), model=None) -> BoundResult:
    """Lower bound on the time needed to drive ``rho0`` to ``rho_tau``."""
    rho0, traj = _build(rho0, p, tau, cfg, model)
    speed = _speed_samples(rho0, traj, cfg)
    x, x_err = time_average(speed, traj.times, cfg)
    f_tau = float(new_f(rho0, traj.states[-1]))
    gap = abs(1.0 - f_tau)
    tq = _ratio(gap, x, "qsl_time")
    q_err = tq * x_err / x if x > 0 else 0.0
    return BoundResult(tau=float(tau), f_tau=f_tau, x_tau=float(x), tau_qsl=float(tq),
                       quad_error=float(q_err), converged=bool(x_err <= cfg.tol),
                       integrand_times=traj.times, integrand_values=speed)


def mt_pure_bound(rho0, p: ReservoirParams | None, tau: float,
                  cfg: QuadratureConfig = QuadratureConfig(), model=None) -> float:
    """Mandelstam-Tamm type bound ``tau |1 - Tr(rho0 rho_tau)| / int sqrt(Tr rho'^2)``.

    Raises:
        ValueError: ``rho0`` is not pure to within 1e-10.
    """
    rho0 = check_density(rho0)
    if purity_deficit(rho0) > 1e-10:
        raise ValueError("mt_pure_bound requires a pure initial state")
    rho0, traj = _build(rho0, p, tau, cfg, model)
    speed = np.sqrt(np.clip(hs_inner(traj.derivs, traj.derivs), 0.0, None))
    avg, _ = time_average(speed, traj.times, cfg)
    gap = abs(1.0 - float(hs_inner(rho0, traj.states[-1])))
    return float(_ratio(gap, avg, "mt_pure_bound"))


def generic_fidelity_bound(kind, rho0, p: ReservoirParams | None, tau: float,
                           cfg: QuadratureConfig = QuadratureConfig(), model=None) -> float:
    """Speed-limit bound for any fidelity from its own time derivative.

    ``tau |F(rho0, rho0) - F(rho0, rho_tau)| / int_0^tau |dF/dt| dt``, with
    dF/dt from second-order central differences on the trajectory grid.
    Valid for every kind because the integral dominates the net change.
    """
    kind = FidelityKind.parse(kind)
    rho0, traj = _build(rho0, p, tau, cfg, model)
    fids = np.asarray(evaluate(kind, np.broadcast_to(rho0, traj.states.shape), traj.states),
                      dtype=float)
    rate = np.abs(np.gradient(fids, traj.times, edge_order=2))
    avg, _ = time_average(rate, traj.times, cfg)
    gap = abs(float(evaluate(kind, rho0, rho0)) - fids[-1])
    return float(_ratio(gap, avg, f"generic bound ({kind.value})"))
