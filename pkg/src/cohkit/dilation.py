"""Unitary measurement and channel dilations on system (x) apparatus.

The joint space is ordered system-first. Every builder records the apparatus
initial vector and the readout basis, so Kraus operators can be read back as
<a_n| U |a_0> blocks. Dilations are not unique; the completions here are
deterministic (Gram-Schmidt over standard-basis candidates in index order),
so equal inputs give bitwise equal models.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .channels import (
    GIO,
    IO_NOT_SIO,
    SIO_NOT_GIO,
    KrausChannel,
    classify,
    correlation_matrix_of,
    kraus_channel,
)
from .errors import (
    BadDimensionError,
    BadParameterError,
    IncompatibleFineGrainingError,
    InvalidModelError,
    NotIOFormError,
    NotIsometryError,
    UnsupportedClassError,
)
from .instruments import _basis_matrix
from .states import FineGraining, Observable


@dataclass(eq=False)
class DilationModel:
    """A joint unitary with the apparatus bookkeeping needed to read it."""

    system_dim: int
    ancilla_dim: int
    apparatus_init: np.ndarray      # unit vector, length ancilla_dim
    joint_unitary: np.ndarray       # (system_dim*ancilla_dim) squared
    readout_basis: np.ndarray       # ancilla_dim x n_outcomes orthonormal columns

    def validate(self, tol: float = linalg.DEFAULT_TOL) -> "DilationModel":
        d_s, d_a = self.system_dim, self.ancilla_dim
        if d_s < 1 or d_a < 1:
            raise BadDimensionError("dimensions must be positive")
        u = linalg.as_square(self.joint_unitary)
        if u.shape[0] != d_s * d_a:
            raise BadDimensionError("joint unitary does not match system x apparatus")
        if np.max(np.abs(u.conj().T @ u - np.eye(d_s * d_a))) > tol:
            raise InvalidModelError("joint operator is not unitary within tolerance")
        init = np.asarray(self.apparatus_init, dtype=complex)
        if init.shape != (d_a,):
            raise BadDimensionError("apparatus init vector has the wrong length")
        if abs(np.linalg.norm(init) - 1.0) > tol:
            raise InvalidModelError("apparatus init vector is not normalized")
        basis = np.asarray(self.readout_basis, dtype=complex)
        if basis.ndim != 2 or basis.shape[0] != d_a or basis.shape[1] > d_a:
            raise BadDimensionError("readout basis has the wrong shape")
        if np.max(np.abs(basis.conj().T @ basis - np.eye(basis.shape[1]))) > tol:
            raise InvalidModelError("readout basis columns are not orthonormal")
        return self


def extract_kraus(model: DilationModel) -> KrausChannel:
    """Kraus operators K_n = <a_n| U |a_0>, one per readout vector."""
    model.validate()
    d_s, d_a = model.system_dim, model.ancilla_dim
    t = np.asarray(model.joint_unitary, dtype=complex).reshape(d_s, d_a, d_s, d_a)
    init = np.asarray(model.apparatus_init, dtype=complex)
    ops = []
    for n in range(model.readout_basis.shape[1]):
        a_n = model.readout_basis[:, n]
        ops.append(np.einsum("a,iajb,b->ij", a_n.conj(), t, init))
    return kraus_channel(ops)


def householder_unitary(source, target) -> np.ndarray:
    """A unitary sending the unit vector source to the unit vector target.

    The target is phase-rotated so its overlap with the source is real and
    nonnegative before reflecting; the reflection then uses the sum vector,
    whose norm is bounded below by sqrt(2), so no cancellation occurs even
    when the overlap approaches -1.
    """
    u = np.asarray(source, dtype=complex)
    v = np.asarray(target, dtype=complex)
    if u.shape != v.shape or u.ndim != 1:
        raise BadDimensionError("source and target must be equal-length vectors")
    for x in (u, v):
        if abs(np.linalg.norm(x) - 1.0) > linalg.DEFAULT_TOL:
            raise BadParameterError("householder vectors must be normalized")
    s = complex(np.vdot(v, u))
    phase = s / abs(s) if abs(s) > 0.0 else 1.0 + 0.0j
    v_aligned = phase * v
    w = u + v_aligned
    w = w / np.linalg.norm(w)
    reflect = np.eye(u.size, dtype=complex) - 2.0 * np.outer(w, w.conj())
    return -np.conj(phase) * reflect


def gram_schmidt_complete(columns: np.ndarray, cutoff: float = 1e-8) -> np.ndarray:
    """Extend orthonormal columns to a full basis with standard-basis candidates.

    Candidates are tried in index order; one whose residual after projection
    falls below cutoff is skipped. Returns only the appended columns.
    """
    q = np.asarray(columns, dtype=complex)
    dim = q.shape[0]
    added = []
    for i in range(dim):
        if q.shape[1] == dim:
            break
        cand = np.zeros(dim, dtype=complex)
        cand[i] = 1.0
        for _ in range(2):  # one re-orthogonalization pass for stability
            cand = cand - q @ (q.conj().T @ cand)
        norm = np.linalg.norm(cand)
        if norm < cutoff:
            continue
        cand = cand / norm
        q = np.hstack([q, cand[:, None]])
        added.append(cand)
    if q.shape[1] != dim:
        raise NotIsometryError("could not complete the column space to a basis")
    return np.array(added).T if added else np.zeros((dim, 0), dtype=complex)


def extend_to_unitary(v: np.ndarray, apparatus_init) -> np.ndarray:
    """Unitary U with U(|psi> (x) |a_0>) = V|psi| for an isometry V.

    The remaining columns are filled by Gram-Schmidt completion of both the
    range of V and the apparatus complement of |a_0>, in index order.
    """
    v = np.asarray(v, dtype=complex)
    if v.ndim != 2:
        raise BadDimensionError("V must be a matrix")
    total, d_s = v.shape
    if total % d_s != 0:
        raise BadDimensionError("V must map the system into system x apparatus")
    d_a = total // d_s
    init = np.asarray(apparatus_init, dtype=complex)
    if init.shape != (d_a,):
        raise BadDimensionError("apparatus init vector has the wrong length")
    if abs(np.linalg.norm(init) - 1.0) > linalg.DEFAULT_TOL:
        raise BadParameterError("apparatus init vector is not normalized")
    if np.max(np.abs(v.conj().T @ v - np.eye(d_s))) > linalg.DEFAULT_TOL:
        raise NotIsometryError("V is not an isometry within tolerance")
    eye_s = np.eye(d_s, dtype=complex)
    u = v @ np.kron(eye_s, init[:, None]).conj().T
    anc_complement = gram_schmidt_complete(init[:, None])
    range_complement = gram_schmidt_complete(v)
    if anc_complement.shape[1]:
        domain = np.kron(eye_s, anc_complement)
        u = u + range_complement @ domain.conj().T
    return u


def effective_isometry(ch: KrausChannel, basis=None) -> np.ndarray:
    """V = sum_n K_n (x) |a_n> for an incoherent channel; V^dag V = 1."""
    label = classify(ch, basis)
    if label not in (GIO, SIO_NOT_GIO, IO_NOT_SIO):
        raise NotIOFormError("an incoherent Kraus list is required")
    d, r = ch.dim, ch.n_kraus
    v = np.zeros((d * r, d), dtype=complex)
    for n, k in enumerate(ch.kraus):
        e_n = np.zeros((r, 1), dtype=complex)
        e_n[n] = 1.0
        v += np.kron(k, e_n)
    return v


def _standard_init(dim: int) -> np.ndarray:
    init = np.zeros(dim, dtype=complex)
    init[0] = 1.0
    return init


def dilate_von_neumann(basis) -> DilationModel:
    """Pointer model of the nondegenerate reading in the given basis.

    U maps |phi_n>|a_0> to |phi_n>|a_n>; the extracted Kraus operators are
    the rank-one projectors |phi_n><phi_n|.
    """
    b = np.asarray(getattr(basis, "basis", basis), dtype=complex)
    d = b.shape[0]
    b = _basis_matrix(b, d)
    v = np.zeros((d * d, d), dtype=complex)
    for n in range(d):
        e_n = np.zeros((d, 1), dtype=complex)
        e_n[n] = 1.0
        col = b[:, n:n + 1]
        v += np.kron(col, e_n) @ col.conj().T
    init = _standard_init(d)
    u = extend_to_unitary(v, init)
    return DilationModel(
        system_dim=d,
        ancilla_dim=d,
        apparatus_init=init,
        joint_unitary=u,
        readout_basis=np.eye(d, dtype=complex),
    ).validate()


def dilate_luders(obs: Observable, fg: FineGraining | None = None) -> DilationModel:
    """Pointer model of the degenerate reading; extracted Kraus are the P_n."""
    if fg is not None and not fg.refines(obs):
        raise IncompatibleFineGrainingError("fine-graining does not refine the observable")
    d, n_out = obs.dim, obs.n_outcomes
    v = np.zeros((d * n_out, d), dtype=complex)
    for n, p in enumerate(obs.projectors):
        e_n = np.zeros((n_out, 1), dtype=complex)
        e_n[n] = 1.0
        v += np.kron(p, e_n)
    init = _standard_init(n_out)
    u = extend_to_unitary(v, init)
    return DilationModel(
        system_dim=d,
        ancilla_dim=n_out,
        apparatus_init=init,
        joint_unitary=u,
        readout_basis=np.eye(n_out, dtype=complex),
    ).validate()


def dilate_gio(ch: KrausChannel, basis=None) -> DilationModel:
    """Controlled-apparatus model of a diagonal-Kraus channel.

    U = sum_i |phi_i><phi_i| (x) U_i with U_i |a_0> = |c_i> the dynamical
    vectors; the apparatus dimension is their component count (padded to 2
    for the trivial rank-one case).
    """
    corr = correlation_matrix_of(ch, basis)
    vectors = corr.vectors
    if vectors.shape[0] == 1:
        vectors = np.vstack([vectors, np.zeros((1, vectors.shape[1]), dtype=complex)])
    d_a = vectors.shape[0]
    d = ch.dim
    b = np.eye(d, dtype=complex) if basis is None else _basis_matrix(basis, d)
    init = _standard_init(d_a)
    u = np.zeros((d * d_a, d * d_a), dtype=complex)
    for i in range(d):
        col = b[:, i:i + 1]
        u += np.kron(col @ col.conj().T, householder_unitary(init, vectors[:, i]))
    return DilationModel(
        system_dim=d,
        ancilla_dim=d_a,
        apparatus_init=init,
        joint_unitary=u,
        readout_basis=np.eye(d_a, dtype=complex),
    ).validate()


def dilate_incoherent(ch: KrausChannel, basis=None) -> DilationModel:
    """Isometry-plus-completion model; extracted Kraus equal the input list."""
    v = effective_isometry(ch, basis)
    d, r = ch.dim, ch.n_kraus
    init = _standard_init(r)
    u = extend_to_unitary(v, init)
    return DilationModel(
        system_dim=d,
        ancilla_dim=r,
        apparatus_init=init,
        joint_unitary=u,
        readout_basis=np.eye(r, dtype=complex),
    ).validate()


def dilate(ch: KrausChannel, basis=None) -> DilationModel:
    """Pick the dilation builder matching the channel's incoherence class."""
    label = classify(ch, basis)
    if label == GIO:
        return dilate_gio(ch, basis)
    if label in (SIO_NOT_GIO, IO_NOT_SIO):
        return dilate_incoherent(ch, basis)
    raise UnsupportedClassError(f"no dilation builder for class {label}")


def generalized_cnot(dim: int) -> np.ndarray:
    """sum_n |n><n| (x) X^n with X the cyclic shift; entries exactly 0 or 1."""
    if dim < 2:
        raise BadDimensionError("dim must be at least 2")
    shift = np.roll(np.eye(dim, dtype=complex), 1, axis=0)
    u = np.zeros((dim * dim, dim * dim), dtype=complex)
    power = np.eye(dim, dtype=complex)
    for n in range(dim):
        e_n = np.zeros((dim, dim), dtype=complex)
        e_n[n, n] = 1.0
        u += np.kron(e_n, power)
        power = shift @ power
    return u
