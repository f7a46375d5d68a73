"""Measurement processes: dephasing, block pinching, repeatable instruments.

The block pinching sends rho to sum_n P_n rho P_n for the eigenprojectors of
an observable; full dephasing is the nondegenerate special case. Both are
idempotent and the pinching is the closest block-diagonal state to rho in
Hilbert-Schmidt distance.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import (
    BadBasisError,
    BadParameterError,
    DimMismatchError,
    NonOrthonormalError,
    VectorOutsideEigenspaceError,
    ZeroProbabilityOutcomeError,
)
from .states import (
    DensityMatrix,
    FineGraining,
    Observable,
    Povm,
    as_generator,
    fine_graining,
)

PROB_FLOOR = 1e-12


def _basis_matrix(basis, dim: int, tol: float = linalg.DEFAULT_TOL) -> np.ndarray:
    b = np.asarray(getattr(basis, "basis", basis), dtype=complex)
    if b.shape != (dim, dim):
        raise BadBasisError(f"basis must be {dim}x{dim}, got {b.shape}")
    if np.max(np.abs(b.conj().T @ b - np.eye(dim))) > tol:
        raise BadBasisError("basis columns are not orthonormal")
    return b


def _hermitized(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2.0


def born_probabilities(rho, measurement) -> np.ndarray:
    """Outcome probabilities Tr(P_n rho) for an Observable or Tr(M_n rho) for a Povm."""
    r = linalg.as_square(rho)
    if isinstance(measurement, Povm):
        ops = measurement.effects
    else:
        ops = measurement.projectors
    if ops[0].shape != r.shape:
        raise DimMismatchError("state and measurement dimensions differ")
    return np.array([float(np.real(np.trace(op @ r))) for op in ops])


def dephase(rho, basis) -> DensityMatrix:
    """Remove all off-diagonal entries of rho in the given orthonormal basis."""
    r = linalg.as_square(rho)
    b = _basis_matrix(basis, r.shape[0])
    diag = np.real(np.diag(b.conj().T @ r @ b))
    return DensityMatrix(matrix=(b * diag) @ b.conj().T)


def luders(rho, obs: Observable) -> DensityMatrix:
    """Nonselective reading: sum_n P_n rho P_n."""
    r = linalg.as_square(rho)
    if obs.dim != r.shape[0]:
        raise DimMismatchError("state and observable dimensions differ")
    out = sum(p @ r @ p for p in obs.projectors)
    return DensityMatrix(matrix=_hermitized(out))


def luders_outcome(
    rho, obs: Observable, n: int, threshold: float = PROB_FLOOR
) -> tuple[float, DensityMatrix]:
    """Probability and normalized post-state for outcome n."""
    r = linalg.as_square(rho)
    if not 0 <= n < obs.n_outcomes:
        raise BadParameterError(f"outcome {n} is out of range")
    p_n = obs.projectors[n]
    prob = float(np.real(np.trace(p_n @ r)))
    if prob <= threshold:
        raise ZeroProbabilityOutcomeError(f"outcome {n} has probability {prob}")
    post = _hermitized(p_n @ r @ p_n) / prob
    return prob, DensityMatrix(matrix=post)


def optimal_fine_grain(obs: Observable, rho) -> FineGraining:
    """The fine-graining that diagonalizes each block P_n rho P_n.

    Dephasing in this basis reproduces the block pinching of rho exactly, so
    the fine measure collapses onto the coarse one.
    """
    r = linalg.as_square(rho)
    if obs.dim != r.shape[0]:
        raise DimMismatchError("state and observable dimensions differ")
    blocks = []
    for n in range(obs.n_outcomes):
        b_n = obs.block_basis(n)
        block_rho = b_n.conj().T @ r @ b_n
        spec = linalg.hermitian_eig(_hermitized(block_rho))
        blocks.append(b_n @ spec.eigenvectors)
    return fine_graining(obs, tuple(blocks))


def repeatable_instrument(obs: Observable, theta, fg: FineGraining | None = None):
    """Kraus operators K_n = sum_i |theta_ni><phi_ni| of a repeatable instrument.

    theta[n] holds d x d_n orthonormal columns inside range(P_n); phi is the
    fine-grained basis (defaults to the observable's own eigenbasis blocks).
    The channel is trace preserving by construction and leaves each outcome's
    post-state inside range(P_n), so an immediate second reading repeats.
    """
    from .channels import kraus_channel

    if fg is None:
        fg = fine_graining(obs)
    elif not fg.refines(obs):
        raise VectorOutsideEigenspaceError("fine-graining does not refine the observable")
    theta = tuple(np.asarray(t, dtype=complex) for t in theta)
    if len(theta) != obs.n_outcomes:
        raise BadParameterError("one theta block per outcome is required")
    ops = []
    for n, (t, p, d_n) in enumerate(zip(theta, obs.projectors, obs.degeneracies)):
        if t.shape != (obs.dim, d_n):
            raise DimMismatchError(f"theta block {n} must be {obs.dim}x{d_n}")
        if np.max(np.abs(t.conj().T @ t - np.eye(d_n))) > linalg.DEFAULT_TOL:
            raise NonOrthonormalError(f"theta block {n} is not orthonormal")
        if np.max(np.abs(p @ t - t)) > linalg.DEFAULT_TOL:
            raise VectorOutsideEigenspaceError(f"theta block {n} leaves range(P_{n})")
        ops.append(t @ fg.blocks[n].conj().T)
    return kraus_channel(ops)


def generalized_luders(rho, povm: Povm) -> DensityMatrix:
    """sum_n M_n^(1/2) rho M_n^(1/2), the square-root reading of a POVM."""
    r = linalg.as_square(rho)
    if povm.dim != r.shape[0]:
        raise DimMismatchError("state and POVM dimensions differ")
    out = np.zeros_like(r)
    for e in povm.effects:
        spec = linalg.hermitian_eig(e)
        # solver noise of order 1e-16 would blow up to 1e-8 under the square
        # root, so eigenvalue components at or below 1e-12 are treated as zero
        w = np.where(spec.eigenvalues > 1e-12, spec.eigenvalues, 0.0)
        root = (spec.eigenvectors * np.sqrt(w)) @ spec.eigenvectors.conj().T
        out += root @ r @ root
    return DensityMatrix(matrix=_hermitized(out))


def unitary_mixing(obs: Observable) -> list[np.ndarray]:
    """Unitaries U_k = sum_j w^(jk) P_j (w the N-th root of unity, j,k = 1..N).

    Averaging rho over them reproduces the block pinching.
    """
    n = obs.n_outcomes
    omega = np.exp(2j * np.pi / n)
    out = []
    for k in range(1, n + 1):
        u = sum(omega ** (j * k) * p for j, p in enumerate(obs.projectors, start=1))
        out.append(np.asarray(u))
    return out


def random_block_diagonal(obs: Observable, seed=0) -> DensityMatrix:
    """Random full-rank state commuting with obs: Dirichlet-weighted random blocks."""
    from .states import random_density

    rng = as_generator(seed)
    weights = rng.dirichlet(np.ones(obs.n_outcomes))
    d = obs.dim
    out = np.zeros((d, d), dtype=complex)
    for n in range(obs.n_outcomes):
        b_n = obs.block_basis(n)
        block = random_density(obs.degeneracies[n], seed=rng).matrix
        out += weights[n] * (b_n @ block @ b_n.conj().T)
    return DensityMatrix(matrix=_hermitized(out))
