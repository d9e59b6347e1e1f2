"""States as probability vectors over a quorum.

A density matrix rho maps to P_n = <n_n|rho|n_n>, the probability of
measuring the maximal projection along direction n_n.  The inverse map
rebuilds rho from P through the dual basis.  For physical states every P_n
lies in [0, 1], the weighted sum e . P equals Tr[rho] = 1, and the plain sum
stays strictly between 0 and (2s+1)^2 -- the components are probabilities of
*incompatible* measurements and do not sum to one.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvariantViolationError,
    LambdaOutOfRangeError,
    NotHermitianError,
)
from .linalg import hermiticity_deviation, settings
from .spin import _freeze

__all__ = [
    "PVector",
    "PhysicalityReport",
    "OperatorCoefficients",
    "rho_to_pvec",
    "pvec_to_rho",
    "expand_operator",
    "expectation",
    "convex_mix",
]


@dataclass(frozen=True)
class PVector:
    """Real probability vector of length (2s+1)^2, tied to its quorum."""

    values: np.ndarray
    quorum: object

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.quorum.size,):
            raise DimensionMismatchError(
                f"expected {self.quorum.size} components, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("probability vector contains non-finite entries")
        object.__setattr__(self, "values", _freeze(values.copy()))

    @property
    def normalization(self):
        """e . P, which equals Tr[rho] for the reconstructed state."""
        return float(np.dot(self.quorum.dual_traces, self.values))


@dataclass(frozen=True)
class PhysicalityReport:
    """Diagnostics attached to a reconstructed density matrix."""

    trace: float
    min_eigenvalue: float
    e_dot_p: float

    @property
    def physical(self):
        return self.min_eigenvalue >= -1e-10 and abs(self.trace - 1.0) <= 1e-9


@dataclass(frozen=True)
class OperatorCoefficients:
    """Expansion coefficients of one Hermitian operator in both bases.

    ``primal[n] = Tr[A dual_n]`` expands A over the projectors;
    ``dual[n] = Tr[A Q_n]`` expands A over the dual basis.  Both are real
    for Hermitian A.
    """

    primal: np.ndarray
    dual: np.ndarray
    quorum: object


def _same_quorum(a, b):
    if a.quorum is not b.quorum:
        raise DimensionMismatchError("operands belong to different quorums")


def rho_to_pvec(rho, quorum):
    """Probabilities P_n = <n_n|rho|n_n> of a (Hermitian) matrix rho.

    Linear in rho, so unnormalized input is allowed; a non-Hermitian input
    shows up as an imaginary residue and is rejected.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (quorum.dim, quorum.dim):
        raise DimensionMismatchError(
            f"state is {rho.shape}, quorum expects {quorum.dim}x{quorum.dim}")
    psi = quorum.amplitudes
    raw = np.einsum("ni,ij,nj->n", psi.conj(), rho, psi)
    residue = float(np.max(np.abs(raw.imag))) if raw.size else 0.0
    if residue > settings.hermiticity_tol:
        raise NotHermitianError(
            f"probabilities have imaginary residue {residue:.3e}; input is not Hermitian")
    return PVector(raw.real, quorum)


def pvec_to_rho(p):
    """Reconstruct rho = (2s+1)^-1 sum_n P_n dual_n, with a physicality report.

    Unphysical input is *not* rejected: points satisfying the bounds and the
    normalization constraint need not correspond to a positive operator, and
    seeing such excursions is exactly what the report is for.  The round
    trip rho_to_pvec(pvec_to_rho(P)) reproduces P by duality.
    """
    quorum = p.quorum
    rho = np.einsum("n,nij->ij", p.values, quorum.duals) / quorum.dim
    rho = (rho + rho.conj().T) / 2.0
    min_eig = float(np.min(np.linalg.eigvalsh(rho)))
    report = PhysicalityReport(
        trace=float(np.trace(rho).real),
        min_eigenvalue=min_eig,
        e_dot_p=p.normalization,
    )
    return rho, report


def expand_operator(a, quorum):
    """Coefficients of a Hermitian operator in both quorum bases.

    Both reconstruction identities,
    A = (2s+1)^-1 sum_n primal[n] Q_n  and
    A = (2s+1)^-1 sum_n dual[n] dual_n,
    are verified before returning.
    """
    a = np.asarray(a, dtype=complex)
    if a.shape != (quorum.dim, quorum.dim):
        raise DimensionMismatchError(
            f"operator is {a.shape}, quorum expects {quorum.dim}x{quorum.dim}")
    dev = hermiticity_deviation(a)
    if dev > settings.hermiticity_tol:
        raise NotHermitianError(f"operator asymmetric by {dev:.3e}")

    primal_c = np.einsum("ij,nji->n", a, quorum.duals)
    psi = quorum.amplitudes
    dual_c = np.einsum("ni,ij,nj->n", psi.conj(), a, psi)
    residue = max(float(np.max(np.abs(primal_c.imag))),
                  float(np.max(np.abs(dual_c.imag))))
    if residue > settings.realness_tol:
        raise InvariantViolationError(
            f"coefficient imaginary residue {residue:.3e} exceeds "
            f"{settings.realness_tol:.1e}")
    primal = primal_c.real
    dual = dual_c.real

    recon_primal = np.einsum("n,nij->ij", primal, quorum.projectors) / quorum.dim
    recon_dual = np.einsum("n,nij->ij", dual, quorum.duals) / quorum.dim
    err = max(float(np.max(np.abs(recon_primal - a))),
              float(np.max(np.abs(recon_dual - a))))
    if err > settings.duality_tol:
        raise InvariantViolationError(
            f"operator reconstruction error {err:.3e} exceeds {settings.duality_tol:.1e}")
    return OperatorCoefficients(_freeze(primal), _freeze(dual), quorum)


def expectation(coefficients, p):
    """<A> = (2s+1)^-1 sum_n primal[n] P_n, equal to Tr[A rho(P)]."""
    _same_quorum(coefficients, p)
    return float(np.dot(coefficients.primal, p.values)) / p.quorum.dim


def convex_mix(pa, pb, lam):
    """Straight-line mix Pa + lam * (Pb - Pa), the image of state mixing.

    Mixing density matrices and mixing their probability vectors commute
    because both maps are linear.
    """
    _same_quorum(pa, pb)
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise LambdaOutOfRangeError(f"mixing weight must lie in [0, 1], got {lam}")
    return PVector(pa.values + lam * (pb.values - pa.values), pa.quorum)
