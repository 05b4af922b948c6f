"""Truncated Fock-space linear algebra for a single bosonic mode.

All states are dense complex density matrices in the number basis
|0>, ..., |dim-1>. Canonical state constructors, displacement and
squeezing channels (computed with a guard band above the working
truncation), and moment / g2 evaluation live here. Everything is
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

DEFAULT_DIM = 50
GAUSS_GUARD = 30

TRACE_TOL = 1e-10
HERM_TOL = 1e-10
EIG_TOL = -1e-8
TOP_POP_TOL = 1e-6


class TruncationLeakError(RuntimeError):
    """Raised when probability piles up at the top retained Fock level."""


class VacuumStateError(ValueError):
    """Raised when a quantity that divides by <N> meets a (near-)vacuum state."""


@dataclass(frozen=True)
class ModeOps:
    """Ladder operators of a single mode truncated to `dim` levels."""

    dim: int
    annihilate: np.ndarray
    create: np.ndarray
    number: np.ndarray


@lru_cache(maxsize=32)
def mode_ops(dim: int) -> ModeOps:
    """Build (and cache) annihilation, creation and number operators.

    annihilate|n> = sqrt(n)|n-1> exactly on the retained levels and
    number == create @ annihilate by construction.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    ad = a.conj().T
    ops = ModeOps(dim=dim, annihilate=a, create=ad, number=ad @ a)
    for arr in (ops.annihilate, ops.create, ops.number):
        arr.setflags(write=False)
    return ops


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, trace-one matrix in the truncated number basis."""

    dim: int = field(init=False)
    elements: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.elements, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "elements", mat)
        object.__setattr__(self, "dim", mat.shape[0])

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.elements))

    @property
    def populations(self) -> np.ndarray:
        return self.elements.diagonal().real

    @property
    def top_population(self) -> float:
        return float(self.populations[-1])

    @property
    def truncation_healthy(self) -> bool:
        return self.top_population < TOP_POP_TOL

    def check(self, positivity: bool = True) -> "DensityMatrix":
        """Validate trace, Hermiticity, positivity and truncation health.

        Returns self so the call can be chained after constructions.
        """
        if abs(self.trace - 1.0) > TRACE_TOL:
            raise ValueError(f"trace deviates from 1 by {abs(self.trace - 1.0):.2e}")
        herm = np.max(np.abs(self.elements - self.elements.conj().T))
        if herm > HERM_TOL:
            raise ValueError(f"Hermiticity defect {herm:.2e}")
        if positivity:
            lo = float(np.linalg.eigvalsh(self.elements)[0])
            if lo < EIG_TOL:
                raise ValueError(f"negative eigenvalue {lo:.2e}")
        if not self.truncation_healthy:
            raise TruncationLeakError(
                f"population {self.top_population:.2e} at top Fock level {self.dim - 1}"
            )
        return self


def _hermitize(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def vacuum_state(dim: int = DEFAULT_DIM) -> DensityMatrix:
    mat = np.zeros((dim, dim), dtype=complex)
    mat[0, 0] = 1.0
    return DensityMatrix(mat)


def fock_state(n: int, dim: int = DEFAULT_DIM) -> DensityMatrix:
    if not 0 <= n < dim:
        raise ValueError(f"Fock level {n} outside truncation dim {dim}")
    mat = np.zeros((dim, dim), dtype=complex)
    mat[n, n] = 1.0
    return DensityMatrix(mat)


def thermal_state(nbar: float, dim: int = DEFAULT_DIM) -> DensityMatrix:
    """Thermal state with p_n ~ (nbar/(1+nbar))^n, renormalized over the
    retained levels so the trace is exactly one."""
    if nbar < 0:
        raise ValueError("nbar must be non-negative")
    if nbar == 0:
        return vacuum_state(dim)
    ratio = nbar / (1.0 + nbar)
    p = ratio ** np.arange(dim)
    p /= p.sum()
    if p[-1] > TOP_POP_TOL:
        raise TruncationLeakError(
            f"thermal nbar={nbar} leaks {p[-1]:.2e} at top level; increase dim"
        )
    return DensityMatrix(np.diag(p.astype(complex)))


def coherent_state(alpha: complex, dim: int = DEFAULT_DIM) -> DensityMatrix:
    """|alpha><alpha| with amplitudes exp(-|a|^2/2) a^n / sqrt(n!)."""
    ns = np.arange(dim)
    log_fact = np.cumsum(np.log(np.maximum(ns, 1)))
    amp = np.exp(-0.5 * abs(alpha) ** 2) * np.power(complex(alpha), ns) * np.exp(
        -0.5 * log_fact
    )
    leak = 1.0 - float(np.vdot(amp, amp).real)
    if leak > TOP_POP_TOL:
        raise TruncationLeakError(
            f"coherent alpha={alpha} leaks {leak:.2e} beyond dim {dim}"
        )
    amp = amp / np.linalg.norm(amp)
    return DensityMatrix(np.outer(amp, amp.conj()))


def make_state(kind: str, dim: int = DEFAULT_DIM, **params) -> DensityMatrix:
    """Dispatching constructor: kind in {'vacuum', 'fock', 'thermal', 'coherent'}.

    'fock' takes n, 'thermal' takes nbar, 'coherent' takes alpha.
    """
    kind = kind.lower()
    if kind == "vacuum":
        return vacuum_state(dim)
    if kind == "fock":
        return fock_state(params.pop("n"), dim)
    if kind == "thermal":
        return thermal_state(params.pop("nbar"), dim)
    if kind == "coherent":
        return coherent_state(params.pop("alpha"), dim)
    raise ValueError(f"unknown state kind {kind!r}")


def expect(state: DensityMatrix, operator: np.ndarray) -> complex:
    """Tr[operator @ state]."""
    op = np.asarray(operator)
    if op.shape != (state.dim, state.dim):
        raise ValueError(
            f"operator shape {op.shape} does not match state dim {state.dim}"
        )
    return complex(np.einsum("ij,ji->", op, state.elements))


def mean_occupation(state: DensityMatrix) -> float:
    return float(np.dot(np.arange(state.dim), state.populations))


def g2_zero(state: DensityMatrix) -> float:
    """Equal-time second-order correlation <b+ b+ b b>/<b+ b>^2.

    Only needs the populations: <b+ b+ b b> = sum_n n(n-1) p_n.
    """
    ns = np.arange(state.dim)
    p = state.populations
    n_mean = float(np.dot(ns, p))
    if n_mean <= 1e-12:
        raise VacuumStateError("g2 undefined: mean occupation <= 1e-12")
    n2 = float(np.dot(ns * (ns - 1.0), p))
    return n2 / n_mean**2


@dataclass(frozen=True)
class GaussianParams:
    """Displacement alpha = alpha_mag e^{i alpha_phase} and squeeze
    xi = squeeze_mag e^{i squeeze_phase}."""

    alpha_mag: float
    alpha_phase: float = 0.0
    squeeze_mag: float = 0.0
    squeeze_phase: float = 0.0

    def __post_init__(self):
        if self.alpha_mag < 0 or self.squeeze_mag < 0:
            raise ValueError("alpha_mag and squeeze_mag must be non-negative")

    @property
    def alpha(self) -> complex:
        return self.alpha_mag * np.exp(1j * self.alpha_phase)

    @property
    def xi(self) -> complex:
        return self.squeeze_mag * np.exp(1j * self.squeeze_phase)


def displacement_operator(alpha: complex, dim: int) -> np.ndarray:
    """D(alpha) = exp(alpha b+ - alpha* b) at the given truncation."""
    ops = mode_ops(dim)
    return expm(alpha * ops.create - np.conj(alpha) * ops.annihilate)


def squeeze_operator(xi: complex, dim: int) -> np.ndarray:
    """S(xi) = exp((xi* b^2 - xi b+^2)/2) at the given truncation."""
    ops = mode_ops(dim)
    b2 = ops.annihilate @ ops.annihilate
    return expm(0.5 * (np.conj(xi) * b2 - xi * b2.conj().T))


def _apply_unitary_guarded(state: DensityMatrix, builder, guard: int) -> DensityMatrix:
    """Conjugate by a unitary built at dim+guard, then project back to dim.

    The guard band gives the matrix exponential headroom before the
    result is cut back; leaked probability must stay below TOP_POP_TOL.
    """
    dim = state.dim
    work = dim + guard
    u = builder(work)
    big = np.zeros((work, work), dtype=complex)
    big[:dim, :dim] = state.elements
    big = u @ big @ u.conj().T
    out = big[:dim, :dim]
    leaked = float(np.trace(big).real - np.trace(out).real)
    if leaked > TOP_POP_TOL or out[-1, -1].real > TOP_POP_TOL:
        raise TruncationLeakError(
            f"Gaussian channel leaks {max(leaked, out[-1, -1].real):.2e} "
            f"past dim {dim}; increase dim or guard"
        )
    return DensityMatrix(_hermitize(out))


def apply_displacement(
    state: DensityMatrix, alpha: complex, guard: int = GAUSS_GUARD
) -> DensityMatrix:
    """D(alpha) rho D+(alpha), trace preserved within the guard-band leak."""
    return _apply_unitary_guarded(state, lambda d: displacement_operator(alpha, d), guard)


def apply_squeeze(
    state: DensityMatrix, xi: complex, guard: int = GAUSS_GUARD
) -> DensityMatrix:
    """S(xi) rho S+(xi), trace preserved within the guard-band leak."""
    return _apply_unitary_guarded(state, lambda d: squeeze_operator(xi, d), guard)
