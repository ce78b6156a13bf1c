"""Stochastic and fixed-example checks of fidelity properties.

Every check produces a :class:`ViolationReport`. A report stores the most
negative slack seen over all trials (``worst_margin``); the property is
violated when that slack falls below ``-tolerance``, in which case the
first violating trial is kept as the counterexample.

Monotonicity under channels and concavity are open conjectures for
``new_f``, so a violation found by those searches is a result, not an
error. The fixed partial-trace example is a hard assertion.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import densmat as dm
from .dynamics import ReservoirParams, evolve, rho_dot
from .fidelity import FidelityKind, evaluate, new_f
from .qsl import integrand_x


@dataclass
class ViolationReport:
    property_name: str
    trials: int
    tolerance: float
    worst_margin: float
    seed: int | None
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return self.worst_margin < -self.tolerance

    def as_dict(self) -> dict:
        return {
            "property": self.property_name,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "worst_margin": self.worst_margin,
            "violated": self.violated,
            "seed": self.seed,
            "counterexample": _jsonable(self.counterexample),
            "details": _jsonable(self.details),
        }


def _jsonable(obj):
    if obj is None:
        return None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _report(name, slack, tol, seed, samples=None, details=None) -> ViolationReport:
    """Build a report from an array of per-trial slacks.

    ``samples`` maps field names to arrays indexed like ``slack``; the entry
    for the first violating trial becomes the counterexample.
    """
    slack = np.asarray(slack, dtype=float)
    worst = float(np.min(slack)) if slack.size else 0.0
    ce = None
    if worst < -tol:
        i = int(np.flatnonzero(slack < -tol)[0])
        ce = {"trial": i, "slack": float(slack[i])}
        for k, v in (samples or {}).items():
            ce[k] = v[i]
    return ViolationReport(name, int(slack.size), tol, worst, seed, ce, dict(details or {}))


def merge_reports(name: str, reports) -> ViolationReport:
    """Combine reports of one property (e.g. over dimensions)."""
    reports = list(reports)
    worst = min(r.worst_margin for r in reports)
    tol = max(r.tolerance for r in reports)
    ce = next((r.counterexample for r in reports if r.counterexample is not None), None)
    details = {}
    for r in reports:
        details.update(r.details)
    return ViolationReport(name, sum(r.trials for r in reports), tol, worst,
                           reports[0].seed, ce, details)


# -- channels -----------------------------------------------------------------

@dataclass(frozen=True)
class ChannelSpec:
    """Stinespring dilation: rho -> Tr_anc U (rho (x) |a><a|) U^dagger."""

    input_dim: int
    ancilla_dim: int
    dilation_unitary: np.ndarray
    ancilla_state: np.ndarray

    def __post_init__(self):
        n = self.input_dim * self.ancilla_dim
        u = np.asarray(self.dilation_unitary)
        if u.shape != (n, n):
            raise dm.DimensionError(f"dilation unitary must be {n}x{n}, got {u.shape}")
        if np.max(np.abs(u @ dm.dagger(u) - np.eye(n))) > 1e-10:
            raise ValueError("dilation unitary is not unitary within 1e-10")
        a = np.asarray(self.ancilla_state)
        if a.shape != (self.ancilla_dim,) or abs(np.vdot(a, a) - 1) > 1e-12:
            raise ValueError("ancilla state must be a unit vector of length ancilla_dim")

    def isometry(self) -> np.ndarray:
        """V = U (I (x) |a>), mapping the input space into system (x) ancilla."""
        embed = np.kron(np.eye(self.input_dim), np.asarray(self.ancilla_state)[:, None])
        return np.asarray(self.dilation_unitary) @ embed


def random_channel(dim: int, ancilla_dim: int, rng) -> ChannelSpec:
    rng = dm.make_rng(rng)
    u = dm.random_unitary(dim * ancilla_dim, rng)
    anc = np.zeros(ancilla_dim, dtype=complex)
    anc[0] = 1.0
    return ChannelSpec(dim, ancilla_dim, u, anc)


def swap_channel(dims=(2, 2), replaced: int = 0) -> ChannelSpec:
    """Channel that discards one qubit of a pair and replaces it with |0>.

    Implemented as a SWAP between the chosen qubit and a fresh |0> ancilla;
    the output is ``|0><0| (x) Tr_0(rho)`` (or the mirror image), which has
    the same fidelities as the bare partial trace.
    """
    d0, d1 = dims
    da = dims[replaced]
    n = d0 * d1 * da
    u = np.zeros((n, n), dtype=complex)
    for i in range(d0):
        for j in range(d1):
            for k in range(da):
                src = (i * d1 + j) * da + k
                if replaced == 0:
                    dst = (k * d1 + j) * da + i
                else:
                    dst = (i * d1 + k) * da + j
                u[dst, src] = 1.0
    anc = np.zeros(da, dtype=complex)
    anc[0] = 1.0
    return ChannelSpec(d0 * d1, da, u, anc)


def apply_channel(c: ChannelSpec, rho) -> np.ndarray:
    """Output of the channel; broadcasts over a stack of input states."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-1] != c.input_dim:
        raise dm.DimensionError(f"channel expects dim {c.input_dim}, got {rho.shape[-1]}")
    v = c.isometry()
    big = v @ rho @ dm.dagger(v)
    return dm.partial_trace(big, [c.input_dim, c.ancilla_dim], keep=0)


def _random_isometries(dim, ancilla_dim, n, rng) -> np.ndarray:
    u = dm.random_unitary(dim * ancilla_dim, rng, size=n)
    # ancilla fixed to |0>: keep the columns with ancilla index 0
    return u[..., ::ancilla_dim]


def _apply_isometries(v, rho, dim, ancilla_dim) -> np.ndarray:
    big = v @ rho @ dm.dagger(v)
    return dm.partial_trace(big, [dim, ancilla_dim], keep=0)


# -- Jozsa axioms -------------------------------------------------------------

AXIOMS = ("A1", "A2", "A3", "A4")


def _random_states(dim, n, rng) -> np.ndarray:
    """Densities of random rank (uniform in 1..dim) so pure edges are covered."""
    out = np.empty((n, dim, dim), dtype=complex)
    ranks = rng.integers(1, dim + 1, size=n)
    for r in range(1, dim + 1):
        idx = np.flatnonzero(ranks == r)
        if idx.size:
            out[idx] = dm.random_density(dim, r, rng, size=idx.size)
    return out


def _jozsa_dim(kind: FidelityKind, dim: int, trials: int, tol: float, rng, seed):
    rho = _random_states(dim, trials, rng)
    sigma = _random_states(dim, trials, rng)
    f = evaluate(kind, rho, sigma)
    reports = {}

    # A1: range [0, 1], F(rho, rho) = 1, and F < 1 - tol for distinct states.
    # The last condition is phrased as slack (1 - F) - 2 tol so that it is
    # violated (slack < -tol) exactly when F > 1 - tol.
    f_self = evaluate(kind, rho, rho)
    distinct = dm.max_entry_distance(rho, sigma) > 1e-10
    upper = np.where(distinct, (1.0 - f) - 2 * tol, 1.0 - f)
    s1 = np.minimum(np.minimum(f, upper), -np.abs(f_self - 1.0))
    reports["A1"] = _report(f"jozsa.A1[{kind.value}]", s1, tol, seed,
                            {"rho": rho, "sigma": sigma, "value": f, "self_value": f_self})

    f_swap = evaluate(kind, sigma, rho)
    reports["A2"] = _report(f"jozsa.A2[{kind.value}]", -np.abs(f - f_swap), tol, seed,
                            {"rho": rho, "sigma": sigma, "value": f, "swapped": f_swap})

    u = dm.random_unitary(dim, rng, size=trials)
    ud = dm.dagger(u)
    f_rot = evaluate(kind, u @ rho @ ud, u @ sigma @ ud)
    reports["A3"] = _report(f"jozsa.A3[{kind.value}]", -np.abs(f - f_rot), tol, seed,
                            {"rho": rho, "sigma": sigma, "unitary": u, "value": f,
                             "rotated": f_rot})

    details = {}
    if kind is FidelityKind.F3 and dim > 2:
        # the affine offset of f3 spoils the pure-state reduction for d > 2;
        # the axiom is only claimed for qubits
        reports["A4"] = ViolationReport(f"jozsa.A4[{kind.value}]", 0, tol, 0.0, seed,
                                        details={f"skipped_dim_{dim}": True})
        return reports
    psi = dm.random_pure(dim, rng, size=trials)
    pure = dm.pure_density(psi)
    expect = np.einsum("ni,nij,nj->n", np.conj(psi), rho, psi).real
    f_pure = evaluate(kind, rho, pure)
    samples = {"rho": rho, "psi": psi, "value": f_pure, "expected": expect}
    if dim == 2:
        # documented counterexample first: rho = I/2, psi = |0>
        e0 = np.array([1.0, 0.0], dtype=complex)
        fixed_rho = dm.maximally_mixed(2)
        fixed_val = float(evaluate(kind, fixed_rho, dm.pure_density(e0)))
        samples = {k: np.concatenate([[w], v]) for (k, v), w in zip(
            samples.items(), [fixed_rho, e0, fixed_val, 0.5])}
        expect = np.concatenate([[0.5], expect])
        f_pure = np.concatenate([[fixed_val], f_pure])
        details["fixed_case"] = {"rho": "I/2", "psi": "|0>", "value": fixed_val, "expected": 0.5}
    reports["A4"] = _report(f"jozsa.A4[{kind.value}]", -np.abs(f_pure - expect), tol, seed,
                            samples, details)
    return reports


def check_jozsa(kind, trials: int = 10_000, dims=(2, 3, 4), seed: int = 0,
                tol: float = 1e-9) -> dict:
    """Check axioms A1-A4 on random state pairs; returns ``{axiom: report}``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    kind = FidelityKind.parse(kind)
    per_axiom = {a: [] for a in AXIOMS}
    for stream, dim in enumerate(dims):
        rng = dm.make_rng(seed, stream)
        for axiom, rep in _jozsa_dim(kind, dim, trials, tol, rng, seed).items():
            per_axiom[axiom].append(rep)
    return {a: merge_reports(f"jozsa.{a}[{kind.value}]", reps) for a, reps in per_axiom.items()}


# -- super-multiplicativity ---------------------------------------------------

def purity_vector_inequality(r1, r2, s1, s2) -> np.ndarray:
    """Slack of the purity inequality behind super-multiplicativity.

    sqrt((1 - r1 r2)(1 - s1 s2)) - <X|Y> with X, Y the Cauchy-Schwarz
    vectors built from the purities; non-negative for purities in [0, 1].
    """
    r1, r2, s1, s2 = (np.clip(np.asarray(v, dtype=float), 0.0, 1.0) for v in (r1, r2, s1, s2))
    x = np.stack([np.sqrt(r1 * (1 - r2)), np.sqrt(r2 * (1 - r1)), np.sqrt((1 - r1) * (1 - r2))])
    y = np.stack([np.sqrt(s1 * (1 - s2)), np.sqrt(s2 * (1 - s1)), np.sqrt((1 - s1) * (1 - s2))])
    return np.sqrt((1 - r1 * r2) * (1 - s1 * s2)) - np.sum(x * y, axis=0)


def check_supermultiplicative(trials: int = 100_000, dims=(2, 2), seed: int = 0,
                              tol: float = 1e-10, batch: int = 20_000) -> ViolationReport:
    """new_f(r1 (x) r2, s1 (x) s2) >= new_f(r1, s1) new_f(r2, s2) on random inputs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    d1, d2 = dims
    rng = dm.make_rng(seed)
    slacks, ineq = [], []
    first_ce = None
    done = 0
    while done < trials:
        n = min(batch, trials - done)
        r1, s1 = _random_states(d1, n, rng), _random_states(d1, n, rng)
        r2, s2 = _random_states(d2, n, rng), _random_states(d2, n, rng)
        lhs = new_f(dm.tensor(r1, r2), dm.tensor(s1, s2))
        rhs = new_f(r1, s1) * new_f(r2, s2)
        slack = lhs - rhs
        slacks.append(slack)
        ineq.append(purity_vector_inequality(dm.purity(r1), dm.purity(r2),
                                             dm.purity(s1), dm.purity(s2)))
        if first_ce is None and np.any(slack < -tol):
            i = int(np.flatnonzero(slack < -tol)[0])
            first_ce = {"trial": done + i, "slack": float(slack[i]), "rho1": r1[i],
                        "sigma1": s1[i], "rho2": r2[i], "sigma2": s2[i],
                        "lhs": float(lhs[i]), "rhs": float(rhs[i])}
        done += n
    slack = np.concatenate(slacks)
    ineq = np.concatenate(ineq)
    rep = _report("supermultiplicativity", slack, tol, seed,
                  details={"purity_inequality_worst": float(ineq.min()),
                           "purity_inequality_violations": int(np.sum(ineq < -tol))})
    rep.counterexample = first_ce
    return rep


# -- monotonicity -------------------------------------------------------------

def fixed_monotonicity_example() -> dict:
    """Two-qubit states |0><0| (x) I/2 and |1><1| (x) I/2 under partial traces.

    Returns the three fidelity values: full states, after tracing out the
    first qubit, and after tracing out the second qubit.
    """
    rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    sigma = np.diag([0.0, 0.0, 0.5, 0.5]).astype(complex)
    return {
        "full": float(new_f(rho, sigma)),
        "trace_first": float(new_f(dm.partial_trace(rho, [2, 2], 1),
                                   dm.partial_trace(sigma, [2, 2], 1))),
        "trace_second": float(new_f(dm.partial_trace(rho, [2, 2], 0),
                                    dm.partial_trace(sigma, [2, 2], 0))),
    }


def check_monotonicity_fixed() -> ViolationReport:
    """Hard assertion: values are exactly 0, 1 and 0 respectively."""
    vals = fixed_monotonicity_example()
    expected = {"full": 0.0, "trace_first": 1.0, "trace_second": 0.0}
    dev = max(abs(vals[k] - expected[k]) for k in expected)
    ce = None if dev == 0.0 else {"values": vals, "expected": expected}
    return ViolationReport("monotonicity.fixed", 3, 0.0, -dev, None, ce,
                           {"values": vals, "expected": expected})


def check_monotonicity(kind=FidelityKind.NEWF, trials: int = 10_000, dims=(2, 3, 4),
                       seed: int = 0, tol: float = 1e-9, ancilla_dims=(2, 3)) -> ViolationReport:
    """Random-channel search for F(Phi rho, Phi sigma) < F(rho, sigma).

    The fixed partial-trace example is always evaluated and stored under
    ``details["fixed"]``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    kind = FidelityKind.parse(kind)
    reps = []
    for stream, dim in enumerate(dims):
        rng = dm.make_rng(seed, stream)
        rho = _random_states(dim, trials, rng)
        sigma = _random_states(dim, trials, rng)
        anc = rng.choice(ancilla_dims, size=trials)
        out_r = np.empty_like(rho)
        out_s = np.empty_like(sigma)
        for k in ancilla_dims:
            idx = np.flatnonzero(anc == k)
            if idx.size:
                v = _random_isometries(dim, k, idx.size, rng)
                out_r[idx] = _apply_isometries(v, rho[idx], dim, k)
                out_s[idx] = _apply_isometries(v, sigma[idx], dim, k)
        before = evaluate(kind, rho, sigma)
        after = evaluate(kind, out_r, out_s)
        reps.append(_report(f"monotonicity[{kind.value}]", after - before, tol, seed,
                            {"rho": rho, "sigma": sigma, "ancilla_dim": anc,
                             "before": before, "after": after}))
    rep = merge_reports(f"monotonicity[{kind.value}]", reps)
    fixed = check_monotonicity_fixed()
    rep.details["fixed"] = fixed.details["values"]
    rep.details["fixed_ok"] = not fixed.violated
    return rep


# -- concavity ----------------------------------------------------------------

def check_concavity(trials: int = 100_000, dims=(2,), seed: int = 0,
                    tol: float = 1e-9, kind=FidelityKind.NEWF) -> ViolationReport:
    """Search for F(rho, p s1 + (1-p) s2) < p F(rho, s1) + (1-p) F(rho, s2)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    kind = FidelityKind.parse(kind)
    reps = []
    for stream, dim in enumerate(dims):
        rng = dm.make_rng(seed, stream)
        rho = _random_states(dim, trials, rng)
        s1 = _random_states(dim, trials, rng)
        s2 = _random_states(dim, trials, rng)
        p = rng.uniform(0.0, 1.0, size=trials)
        mix = p[:, None, None] * s1 + (1 - p)[:, None, None] * s2
        margin = (evaluate(kind, rho, mix) - p * evaluate(kind, rho, s1)
                  - (1 - p) * evaluate(kind, rho, s2))
        reps.append(_report(f"concavity[{kind.value}]", margin, tol, seed,
                            {"rho": rho, "sigma1": s1, "sigma2": s2, "p": p}))
    return merge_reports(f"concavity[{kind.value}]", reps)


# -- derivative chain ---------------------------------------------------------

def check_derivative_chain(rho0, p: ReservoirParams, tau: float = 1.0, n_samples: int = 500,
                           step: float = 1e-6, tol: float = 1e-7, model=None) -> ViolationReport:
    """Pointwise |d new_f(rho0, rho_t)/dt| <= speed integrand, by central differences.

    Samples are uniform on ``[step, tau]`` so both difference points stay
    inside the evolution's domain.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    rho0 = dm.check_density(rho0)
    t = np.linspace(step, tau, n_samples)
    if model is None:
        states = lambda s: evolve(rho0, s, p)  # noqa: E731
        derivs = rho_dot(rho0, t, p)
    else:
        states = lambda s: model.states(rho0, s)  # noqa: E731
        derivs = model.derivs(rho0, t)
    ref = np.broadcast_to(rho0, (n_samples,) + rho0.shape)
    fd = (new_f(ref, states(t + step)) - new_f(ref, states(t - step))) / (2 * step)
    bound = integrand_x(rho0, states(t), derivs)
    return _report("derivative_chain", bound - np.abs(fd), tol, None,
                   {"t": t, "fd_rate": np.abs(fd), "integrand": bound},
                   {"min_slack": float(np.min(bound - np.abs(fd)))})
