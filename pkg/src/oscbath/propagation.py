"""Amplitude dynamics of the coupled system.

The state vector u = (f, g_1, ..., g_N) obeys i du/dt = A u with a real
symmetric arrowhead generator A.  Two independent solvers are provided: a
spectral propagator (one eigendecomposition, exact unitary evolution) and a
fixed-step classical RK4 integrator used to cross-check it.

Only the slowly varying amplitudes are stored; the pure phase prefactors
exp(-i*omega0*t) / exp(-i*omega_k*t) of the lab-frame coherent amplitudes
cancel in every observable built here and are left to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import BathGrid

__all__ = [
    "IntegrationFailure",
    "AmplitudeTrajectory",
    "build_generator",
    "evolve_exact",
    "evolve_rk4",
    "norm_residual",
    "gershgorin_bound",
    "RK4_NORM_LIMIT",
]

# norm drift beyond this flags the fixed-step integration as failed
RK4_NORM_LIMIT = 1e-4


class IntegrationFailure(RuntimeError):
    """Fixed-step integration lost norm beyond the accepted tolerance."""


@dataclass(frozen=True, eq=False)
class AmplitudeTrajectory:
    """Sampled amplitude vectors u(t) = (f(t), g_1(t), ..., g_N(t)).

    method is "exact" (spectral) or "rk4".
    """

    times: np.ndarray
    states: np.ndarray
    method: str

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        states = np.array(self.states, dtype=complex)
        times.flags.writeable = False
        states.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("times must be a non-empty 1-d array")
        if states.ndim != 2 or states.shape[0] != times.size:
            raise ValueError("states must be (n_times, n_modes+1)")

    @property
    def n_bath(self) -> int:
        return self.states.shape[1] - 1

    @property
    def f(self) -> np.ndarray:
        """Central-oscillator amplitude series."""
        return self.states[:, 0]

    @property
    def g(self) -> np.ndarray:
        """Bath amplitude series, column k-1 for mode k."""
        return self.states[:, 1:]


def build_generator(grid: BathGrid) -> np.ndarray:
    """Dense real symmetric generator of i du/dt = A u.

    First row/column carry the couplings gamma_k, the bath diagonal holds
    -2*delta_k, and A[0, 0] = 0.
    """
    n = grid.n + 1
    a = np.zeros((n, n))
    a[0, 1:] = grid.couplings
    a[1:, 0] = grid.couplings
    a[np.arange(1, n), np.arange(1, n)] = -2.0 * grid.detunings
    a.flags.writeable = False
    return a


def gershgorin_bound(gen: np.ndarray) -> float:
    """Upper bound on the spectral radius (row sums of absolute values)."""
    a = np.asarray(gen, dtype=float)
    return float(np.max(np.sum(np.abs(a), axis=1)))


def _check_generator(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise ValueError("generator must be a square matrix of dimension >= 2")
    if not np.array_equal(a, a.T):
        raise ValueError("generator is not symmetric; refusing to eigendecompose")


def _initial_state(n: int, u0) -> np.ndarray:
    if u0 is None:
        u = np.zeros(n, dtype=complex)
        u[0] = 1.0
        return u
    u = np.array(u0, dtype=complex)
    if u.shape != (n,):
        raise ValueError(f"u0 must have length {n}")
    return u


def evolve_exact(gen: np.ndarray, times, u0=None) -> AmplitudeTrajectory:
    """Unitary evolution u(t) = V exp(-i Lambda t) V^T u(0).

    One symmetric eigendecomposition, then a cheap matrix product per batch
    of sample times.  Norm is conserved to roundoff.
    """
    a = np.asarray(gen, dtype=float)
    _check_generator(a)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d array")
    if times[0] < 0:
        raise ValueError("times must start at t >= 0")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    lam, vec = np.linalg.eigh(a)
    u = _initial_state(a.shape[0], u0)
    coeff = vec.T @ u
    phases = np.exp(-1j * np.outer(times, lam))
    states = (phases * coeff) @ vec.T
    return AmplitudeTrajectory(times, states, "exact")


def _rk4_rhs(a: np.ndarray, u: np.ndarray) -> np.ndarray:
    # du/dt = -iAu via one real matmul over the stacked re/im parts
    w = a @ np.column_stack((u.real, u.imag))
    return w[:, 1] - 1j * w[:, 0]


def _rk4_step(a: np.ndarray, u: np.ndarray, dt: float) -> np.ndarray:
    k1 = _rk4_rhs(a, u)
    k2 = _rk4_rhs(a, u + (0.5 * dt) * k1)
    k3 = _rk4_rhs(a, u + (0.5 * dt) * k2)
    k4 = _rk4_rhs(a, u + dt * k3)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve_rk4(gen: np.ndarray, t_end: float, dt: float,
               sample_every: int = 1, u0=None) -> AmplitudeTrajectory:
    """Classical fixed-step RK4 integration of du/dt = -iAu.

    Steps dt until t >= t_end; samples every sample_every steps plus the
    final step.  Stability guideline: dt <= 0.05 / gershgorin_bound(gen).
    Raises IntegrationFailure once the sampled norm drifts from its initial
    value by more than RK4_NORM_LIMIT.
    """
    a = np.asarray(gen, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("generator must be a square matrix")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")

    n_steps = 0 if t_end == 0 else int(math.ceil(t_end / dt - 1e-9))
    u = _initial_state(a.shape[0], u0)
    norm0 = float(np.sum(np.abs(u) ** 2))
    sample_times = [0.0]
    samples = [u.copy()]
    for step in range(1, n_steps + 1):
        u = _rk4_step(a, u, dt)
        if step % sample_every == 0 or step == n_steps:
            drift = abs(norm0 - float(np.sum(np.abs(u) ** 2)))
            if drift > RK4_NORM_LIMIT:
                raise IntegrationFailure(
                    f"norm drift {drift:.3e} at t={step * dt:g} exceeds {RK4_NORM_LIMIT:g}; "
                    f"reduce dt (guideline dt <= {0.05 / gershgorin_bound(a):.3g})")
            sample_times.append(step * dt)
            samples.append(u.copy())
    return AmplitudeTrajectory(np.array(sample_times), np.array(samples), "rk4")


def norm_residual(traj: AmplitudeTrajectory) -> float:
    """max_t |1 - sum_i |u_i(t)|^2| over the sampled trajectory."""
    norms = np.sum(np.abs(traj.states) ** 2, axis=1)
    return float(np.max(np.abs(1.0 - norms)))
