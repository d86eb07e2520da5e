"""Independent concurrence pipeline via the Wootters spin-flip construction.

Two nonorthogonal branch states on each side of a bipartition span a qubit;
in the resulting orthonormal basis the state is an explicit 4x4 density
matrix.  Its Wootters concurrence C = max(0, l1 - l2 - l3 - l4) is computed
from the spectrum of R = sqrt(sqrt(rho) rho~ sqrt(rho)) and validates the
closed form to near machine precision.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .concurrence import concurrence_closed_form
from .model import SuperpositionInit

__all__ = [
    "QubitEmbedding",
    "TwoQubitDensityMatrix",
    "qubit_embedding",
    "build_density_matrix",
    "spin_flip",
    "wootters_concurrence",
    "product_eigenvalues",
    "factored_product_eigenvalues",
    "crosscheck",
]

# sigma_y (x) sigma_y in the ordered basis (1 up, 1 down, 0 up, 0 down)
_SY2 = np.array([
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
])


@dataclass(frozen=True)
class QubitEmbedding:
    """Orthonormal-basis weights for two branch states with overlap magnitude o.

    s_plus/s_minus = sqrt((1 +- o)/2); phase is the unit complex argument of
    the overlap (fixed to 1 when the branches are orthogonal).
    """

    s_plus: float
    s_minus: float
    phase: complex

    def __post_init__(self):
        if not (self.s_plus >= self.s_minus >= 0.0):
            raise ValueError("embedding weights must satisfy s_plus >= s_minus >= 0")
        if abs(self.s_plus ** 2 + self.s_minus ** 2 - 1.0) > 1e-12:
            raise ValueError("embedding weights must satisfy s_plus^2 + s_minus^2 = 1")
        if abs(abs(self.phase) - 1.0) > 1e-12:
            raise ValueError("phase must be a unit complex number")


def qubit_embedding(overlap: complex) -> QubitEmbedding:
    """Embedding weights and phase for a (reversed-order) branch overlap.

    Pass <second branch | first branch>, whose argument fixes the relative
    phase of the basis states.  Only the magnitude enters the weights.
    """
    overlap = complex(overlap)
    o = abs(overlap)
    if o > 1.0 + 1e-12:
        raise ValueError(f"overlap magnitude {o} exceeds 1")
    o = min(o, 1.0)
    # atan2 keeps the phase exactly unit even for subnormal overlaps
    phase = cmath.exp(1j * cmath.phase(overlap)) if o > 0 else complex(1.0)
    return QubitEmbedding(math.sqrt((1.0 + o) / 2.0), math.sqrt((1.0 - o) / 2.0), phase)


@dataclass(frozen=True, eq=False)
class TwoQubitDensityMatrix:
    """4x4 density matrix in the embedded basis, with its raw parameters.

    r, u, v are the phase-dressed parameter combinations appearing in the
    matrix entries.
    """

    matrix: np.ndarray
    weight: float
    p: float
    q: float
    z: complex
    r: float
    u: complex
    v: float


def build_density_matrix(weight: float, p: float, q: float, z: complex,
                         emb_sys: QubitEmbedding,
                         emb_env: QubitEmbedding) -> TwoQubitDensityMatrix:
    """Assemble weight*(p|1><1| + q|2><2| + z|1><2| + z*|2><1|) in the
    embedded two-qubit basis.

    Traces differing from 1 by more than 1e-8 flag physically inconsistent
    parameters with a warning; raw parameter scans are still allowed.
    """
    if weight <= 0 or p < 0 or q < 0:
        raise ValueError("weight must be positive and p, q nonnegative")
    z = complex(z)
    sp, sm = emb_sys.s_plus, emb_sys.s_minus
    tp, tm = emb_env.s_plus, emb_env.s_minus
    zp = z * emb_sys.phase * emb_env.phase
    r = p + q + 2.0 * zp.real
    u = -p + q + 2j * zp.imag
    v = p + q - 2.0 * zp.real
    uc = u.conjugate()
    g = weight
    mat = g * np.array([
        [sp*sp*tp*tp*r,  sp*sp*tp*tm*u,  sp*sm*tp*tp*u,  sp*sm*tp*tm*r],
        [sp*sp*tp*tm*uc, sp*sp*tm*tm*v,  sp*sm*tp*tm*v,  sp*sm*tm*tm*uc],
        [sp*sm*tp*tp*uc, sp*sm*tp*tm*v,  sm*sm*tp*tp*v,  sm*sm*tp*tm*uc],
        [sp*sm*tp*tm*r,  sp*sm*tm*tm*u,  sm*sm*tp*tm*u,  sm*sm*tm*tm*r],
    ], dtype=complex)
    mat.flags.writeable = False
    trace = float(mat.trace().real)
    if abs(trace - 1.0) > 1e-8:
        warnings.warn(f"density matrix trace {trace:.6g} differs from 1; "
                      "parameters are not a normalized physical state", stacklevel=2)
    return TwoQubitDensityMatrix(mat, g, float(p), float(q), z, r, u, v)


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, TwoQubitDensityMatrix):
        mat = rho.matrix
    else:
        mat = np.asarray(rho, dtype=complex)
    if mat.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    return mat


def spin_flip(rho) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y) in the embedded basis."""
    mat = _as_matrix(rho)
    return _SY2 @ mat.conj() @ _SY2


def wootters_concurrence(rho) -> float:
    """C = max(0, l1 - l2 - l3 - l4) with l_i the eigenvalues of
    R = sqrt(sqrt(rho) rho~ sqrt(rho)), in decreasing order.

    The l_i are evaluated as the singular values of
    sqrt(rho) (sigma_y x sigma_y) sqrt(rho)^T, an exact rewriting of the
    spectrum of R that stays accurate to roundoff where squaring into
    rho rho~ and re-rooting would lose half the digits.  Directions of rho
    below its numerical rank are discarded before the root.
    """
    mat = _as_matrix(rho)
    if not np.allclose(mat, mat.conj().T, rtol=0.0,
                       atol=1e-12 * max(1.0, float(np.abs(mat).max()))):
        raise ValueError("density matrix must be Hermitian")
    ev, basis = np.linalg.eigh(mat)
    if ev.min() < -1e-8:
        raise ValueError(f"density matrix eigenvalue {ev.min():.3e} is significantly negative")
    ev = np.clip(ev, 0.0, None)
    ev[ev <= 1e-12 * ev.max()] = 0.0
    root = (basis * np.sqrt(ev)) @ basis.conj().T
    flip_kernel = root @ _SY2 @ root.T
    l = np.linalg.svd(flip_kernel, compute_uv=False)
    return float(max(0.0, l[0] - l[1] - l[2] - l[3]))


def product_eigenvalues(rho) -> np.ndarray:
    """Eigenvalues of rho @ spin_flip(rho), descending, via a general solver.

    Roundoff makes the two rank-deficient eigenvalues come out as noise of
    order eps, so square roots of these are only good to ~1e-8; use
    wootters_concurrence for full-precision concurrences.  Raises when an
    eigenvalue has imaginary part above 1e-8 or real part below -1e-8
    (malformed input); smaller negatives are clipped to zero.
    """
    mat = _as_matrix(rho)
    m = np.linalg.eigvals(mat @ spin_flip(mat))
    if np.abs(m.imag).max() > 1e-8:
        raise ValueError("product spectrum is not real; input is not a valid density matrix")
    m = m.real
    if m.min() < -1e-8:
        raise ValueError(f"product eigenvalue {m.min():.3e} is significantly negative")
    return np.sort(np.clip(m, 0.0, None))[::-1]


def factored_product_eigenvalues(weight: float, p: float, q: float, z: complex,
                                 emb_sys: QubitEmbedding,
                                 emb_env: QubitEmbedding) -> tuple[float, float]:
    """The two nonzero eigenvalues of rho @ spin_flip(rho) in factored form:

    m1 = 16 w^2 (s+ s- s+' s-')^2 (|z| - sqrt(pq))^2 and m2 likewise with
    (|z| + sqrt(pq))^2; the other two eigenvalues vanish identically.
    """
    scale = 16.0 * weight ** 2 * (emb_sys.s_plus * emb_sys.s_minus
                                  * emb_env.s_plus * emb_env.s_minus) ** 2
    root_pq = math.sqrt(p * q)
    return (scale * (abs(z) - root_pq) ** 2,
            scale * (abs(z) + root_pq) ** 2)


def crosscheck(init: SuperpositionInit, xi: float,
               theta_b: float, theta_c: float) -> float:
    """|closed-form C - spin-flip numeric C| for one set of excitation shares.

    Builds the block overlaps o^theta and the branch factor from the stored
    log-overlap, runs the full numeric pipeline (embedding, density matrix,
    spin flip, spectrum), and compares against the closed form.
    """
    w = init.log_overlap
    wc = w.conjugate()
    weight = init.norm_const ** 2
    p = abs(init.a) ** 2
    q = abs(init.b) ** 2
    z = init.a * init.b.conjugate() * cmath.exp(xi * wc)
    emb_sys = qubit_embedding(cmath.exp(theta_b * wc))
    emb_env = qubit_embedding(cmath.exp(theta_c * wc))
    rho = build_density_matrix(weight, p, q, z, emb_sys, emb_env)
    numeric = wootters_concurrence(rho)
    closed = concurrence_closed_form(init, xi, theta_b, theta_c)
    return abs(numeric - closed)
