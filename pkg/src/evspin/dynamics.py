"""Linear flow of the probability vector: dP/dt = M P.

The generator is the commutator with the Hamiltonian expressed in
P-coordinates,

    M[n, n'] = i/(2s+1) * Tr[ H [Q_n, dual_n'] ],

a real matrix whose spectrum is the set of Bohr frequencies
{i (eps_j - eps_k)} of H: the quantum evolution of the spin is literally a
linear classical dynamical system on (2s+1)^2 real variables.  The weighted
sum e . P is a conserved functional (e^T M = 0), and the images of the
Hamiltonian eigenprojectors are the flow's fixed points.

Both defining forms of M (the coherent-state sandwich and the trace form)
are computed and compared at build time; the trace form is the one kept.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailureError,
    DegenerateSpectrumWarning,
    DimensionMismatchError,
    InvariantViolationError,
    MethodUnsupportedError,
)
from .linalg import expm_real, hermitian_eigendecomposition, settings
from .representation import PVector, rho_to_pvec
from .spin import _freeze, evolve_density_matrix

__all__ = [
    "Generator",
    "DrivenGenerator",
    "Trajectory",
    "build_generator",
    "build_driven_generator",
    "bohr_spectrum",
    "generator_eigenvalues",
    "propagate_exact",
    "propagate_grid",
    "fixed_points",
    "propagation_deviation",
]


def _lexsorted(z):
    z = np.asarray(z, dtype=complex)
    return z[np.lexsort((z.real, z.imag))]


def bohr_spectrum(h_eigenvalues):
    """Multiset {i (eps_j - eps_k)} over all ordered pairs, lexsorted.

    These are the only oscillation frequencies any unitary evolution of the
    system can show, and they are exactly the eigenvalues of the flow
    generator.
    """
    eps = np.asarray(h_eigenvalues, dtype=float)
    diffs = 1j * (eps[:, None] - eps[None, :]).reshape(-1)
    return _lexsorted(diffs)


@dataclass(frozen=True)
class Generator:
    """Real (2s+1)^2 x (2s+1)^2 generator of the probability flow.

    Carries the Hamiltonian it was built from plus the residuals of the
    build-time self-checks (imaginary part of the trace formula, deviation
    between the two defining forms, conservation functional, Bohr-spectrum
    match).
    """

    matrix: np.ndarray
    quorum: object
    hamiltonian: np.ndarray
    h_eigenvalues: np.ndarray
    imag_residue: float
    cross_check_deviation: float
    conservation_residual: float
    bohr_deviation: float


@dataclass(frozen=True)
class DrivenGenerator:
    """Generator family M(t) = M_static + f(t) * M_drive.

    The generator is linear in the Hamiltonian, so a drive
    H(t) = H0 + f(t) H1 needs only the two constituent generators; M(t) is
    then assembled exactly at any stage time.
    """

    static: Generator
    drive: Generator
    envelope: object

    @property
    def quorum(self):
        return self.static.quorum

    def matrix_at(self, t):
        return self.static.matrix + self.envelope(t) * self.drive.matrix

    def hamiltonian_at(self, t):
        return self.static.hamiltonian + self.envelope(t) * self.drive.hamiltonian


def build_generator(hmat, quorum):
    """Build and verify the flow generator for Hamiltonian ``hmat``.

    The trace form i/(2s+1) Tr[H [Q_n, dual_n']] and the sandwich form
    i/(2s+1) <n_n|[dual_n', H]|n_n> are evaluated through different
    contractions and compared; realness, e^T M = 0, and the Bohr-spectrum
    identity are all enforced before the object is returned.
    """
    hmat = np.asarray(hmat, dtype=complex)
    if hmat.shape != (quorum.dim, quorum.dim):
        raise DimensionMismatchError(
            f"Hamiltonian is {hmat.shape}, quorum expects {quorum.dim}x{quorum.dim}")
    h_eigenvalues, _ = hermitian_eigendecomposition(hmat)

    d = quorum.dim
    projectors = quorum.projectors
    duals = quorum.duals

    hq = np.matmul(hmat, projectors)
    hd = np.matmul(hmat, duals)
    t1 = np.einsum("nik,mki->nm", hq, duals)
    t2 = np.einsum("mik,nki->nm", hd, projectors)
    m_trace = 1j * (t1 - t2) / d
    imag_residue = float(np.max(np.abs(m_trace.imag)))
    if imag_residue > settings.realness_tol:
        raise InvariantViolationError(
            f"generator imaginary residue {imag_residue:.3e} exceeds "
            f"{settings.realness_tol:.1e}")

    psi = quorum.amplitudes
    commutators = np.matmul(duals, hmat) - hd
    m_sandwich = 1j * np.einsum("ni,mij,nj->nm", psi.conj(), commutators, psi) / d
    cross = float(np.max(np.abs(m_trace - m_sandwich)))
    if cross > settings.cross_check_tol:
        raise InvariantViolationError(
            f"trace and sandwich forms disagree by {cross:.3e}")

    matrix = np.ascontiguousarray(m_trace.real)
    raw_traces = quorum.dual_traces * d
    scale = max(1.0, float(np.max(np.abs(matrix))))
    raw_conservation = float(np.max(np.abs(raw_traces @ matrix)))
    if raw_conservation > settings.conservation_tol * scale:
        raise InvariantViolationError(
            f"conservation functional violated: max |e^T M| = {raw_conservation:.3e} "
            f"for generator scale {scale:.3e}")
    # e^T M = 0 holds exactly for the true generator; once the raw residual is
    # consistent with rounding, project it out so the conserved functional
    # cannot drift along long trajectories.
    matrix -= np.outer(raw_traces, raw_traces @ matrix) / float(raw_traces @ raw_traces)
    conservation = float(np.max(np.abs(raw_traces @ matrix)))
    if conservation > settings.conservation_tol:
        raise InvariantViolationError(
            f"conservation functional violated after projection: {conservation:.3e}")

    try:
        m_eigs = np.linalg.eigvals(matrix)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailureError(str(exc)) from exc
    bohr_dev = float(np.max(np.abs(_lexsorted(m_eigs) - bohr_spectrum(h_eigenvalues))))
    if bohr_dev > settings.spectrum_tol:
        raise InvariantViolationError(
            f"generator spectrum deviates from Bohr frequencies by {bohr_dev:.3e}")

    return Generator(
        matrix=_freeze(matrix),
        quorum=quorum,
        hamiltonian=_freeze(hmat.copy()),
        h_eigenvalues=_freeze(h_eigenvalues),
        imag_residue=imag_residue,
        cross_check_deviation=cross,
        conservation_residual=conservation,
        bohr_deviation=bohr_dev,
    )


def build_driven_generator(spec, ops, quorum):
    """Generator family for a HamiltonianSpec carrying a drive."""
    from .spin import build_hamiltonian  # local import avoids cycle at module load

    if spec.drive is None:
        raise ValueError("spec has no drive; build_generator handles the static case")
    static = build_generator(build_hamiltonian(spec, ops), quorum)
    drive = build_generator(build_hamiltonian(spec.drive.term, ops), quorum)
    return DrivenGenerator(static, drive, spec.drive.envelope)


def generator_eigenvalues(gen):
    """Eigenvalues of M, lexsorted by (imaginary, real) part."""
    return _lexsorted(np.linalg.eigvals(gen.matrix))


def propagate_exact(gen, p0, t):
    """P(t) = exp(t M) P0 through the real matrix exponential."""
    if p0.quorum is not gen.quorum:
        raise DimensionMismatchError("initial vector belongs to a different quorum")
    return PVector(expm_real(gen.matrix, t) @ p0.values, gen.quorum)


@dataclass(frozen=True)
class Trajectory:
    """Time grid, probability vectors, and per-time invariant monitors.

    ``oracle_dev`` is present only when the run was compared against direct
    density-matrix propagation; it holds max_n |P_n(t) - <n_n|rho(t)|n_n>|
    per time.
    """

    times: np.ndarray
    values: np.ndarray
    quorum: object
    e_dot_p: np.ndarray
    p_min: np.ndarray
    p_max: np.ndarray
    p_sum: np.ndarray
    oracle_dev: np.ndarray = None

    @property
    def states(self):
        return [PVector(row, self.quorum) for row in self.values]

    @property
    def normalization_drift(self):
        """Largest excursion of e . P from its initial value."""
        return float(np.max(np.abs(self.e_dot_p - self.e_dot_p[0])))


def _exact_grid(matrix, p0, dts):
    """Propagate through one eigendecomposition of M, shared across the grid.

    M is similar to the (diagonalizable) commutator superoperator, so a
    complex eigendecomposition exists; if the numerical one reconstructs M
    poorly the routine falls back to one exponential per grid time.
    """
    out = np.empty((dts.size, p0.size))
    out[0] = p0
    scale = max(1.0, float(np.max(np.abs(matrix))))
    try:
        w, vr = np.linalg.eig(matrix)
        recon = (vr * w) @ np.linalg.inv(vr)
        ok = float(np.max(np.abs(recon - matrix))) <= 1e-10 * scale
    except np.linalg.LinAlgError:
        ok = False
    if ok:
        c = np.linalg.solve(vr, p0.astype(complex))
        for i in range(1, dts.size):
            out[i] = ((np.exp(w * dts[i]) * c) @ vr.T).real
        return out
    for i in range(1, dts.size):
        out[i] = expm_real(matrix, dts[i]) @ p0
    return out


def _rk4_step(mfun, t, p, h):
    k1 = mfun(t) @ p
    k2 = mfun(t + h / 2.0) @ (p + (h / 2.0) * k1)
    k3 = mfun(t + h / 2.0) @ (p + (h / 2.0) * k2)
    k4 = mfun(t + h) @ (p + h * k3)
    return p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def propagate_grid(gen, p0, times, method="exact-expm", substeps=10, oracle=None):
    """Propagate P0 over a time grid and record invariant monitors.

    Parameters
    ----------
    gen : Generator or DrivenGenerator
        A DrivenGenerator requires ``method="rk4"``.
    p0 : PVector
        State at ``times[0]``.
    times : array_like
        Strictly increasing grid; the first entry is the initial time.
    method : {"exact-expm", "rk4"}
        Exact propagation reuses a single eigendecomposition of M across the
        whole grid.  rk4 advances with fixed step h = (smallest grid gap) /
        substeps, re-evaluating M(t) at every stage time.
    oracle : (d, d) array_like, optional
        Initial density matrix; when given (autonomous generators only) the
        trajectory carries the per-time deviation from direct density-matrix
        propagation.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("times must be a non-empty 1-D array")
    if np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be strictly increasing")
    driven = isinstance(gen, DrivenGenerator)
    if p0.quorum is not gen.quorum:
        raise DimensionMismatchError("initial vector belongs to a different quorum")
    if method not in ("exact-expm", "rk4"):
        raise ValueError(f"unknown method {method!r}")
    if driven and method == "exact-expm":
        raise MethodUnsupportedError(
            "exact-expm requires an autonomous generator; use rk4 for driven systems")
    if oracle is not None and driven:
        raise MethodUnsupportedError(
            "density-matrix comparison requires an autonomous generator")
    substeps = int(substeps)
    if substeps < 1:
        raise ValueError("substeps must be >= 1")

    if method == "exact-expm":
        values = _exact_grid(gen.matrix, p0.values, times - times[0])
    else:
        values = np.empty((times.size, p0.values.size))
        values[0] = p0.values
        if times.size > 1:
            h_target = float(np.min(np.diff(times))) / substeps
            if driven:
                mfun = gen.matrix_at
            else:
                matrix = gen.matrix
                mfun = lambda _t: matrix
            p = p0.values.copy()
            for i in range(1, times.size):
                gap = times[i] - times[i - 1]
                nsub = max(1, math.ceil(gap / h_target - 1e-9))
                h = gap / nsub
                t = times[i - 1]
                for _ in range(nsub):
                    p = _rk4_step(mfun, t, p, h)
                    t += h
                values[i] = p

    e = gen.quorum.dual_traces
    oracle_dev = None
    if oracle is not None:
        oracle = np.asarray(oracle, dtype=complex)
        hmat = gen.hamiltonian
        oracle_dev = np.empty(times.size)
        for i, t in enumerate(times):
            rho_t = evolve_density_matrix(oracle, hmat, t - times[0])
            reference = rho_to_pvec(rho_t, gen.quorum).values
            oracle_dev[i] = float(np.max(np.abs(values[i] - reference)))
        oracle_dev = _freeze(oracle_dev)

    return Trajectory(
        times=_freeze(times.copy()),
        values=_freeze(values),
        quorum=gen.quorum,
        e_dot_p=_freeze(values @ e),
        p_min=_freeze(values.min(axis=1)),
        p_max=_freeze(values.max(axis=1)),
        p_sum=_freeze(values.sum(axis=1)),
        oracle_dev=oracle_dev,
    )


def fixed_points(hmat, quorum):
    """P-images of the Hamiltonian eigenprojectors: the flow's fixed points.

    Returns 2s+1 probability vectors with M P = 0.  When the spectrum of H
    is degenerate the stationary set is a whole continuum; the returned
    vectors are then just one basis of stationary projectors and a
    DegenerateSpectrumWarning is issued.
    """
    eps, vecs = hermitian_eigendecomposition(np.asarray(hmat, dtype=complex))
    if quorum.dim != eps.size:
        raise DimensionMismatchError(
            f"Hamiltonian is {eps.size}x{eps.size}, quorum expects {quorum.dim}x{quorum.dim}")
    if eps.size > 1:
        gap = float(np.min(np.diff(eps)))
        scale = max(1.0, float(np.max(np.abs(eps))))
        if gap < settings.degeneracy_tol * scale:
            warnings.warn(
                f"Hamiltonian spectrum degenerate (smallest gap {gap:.3e}); the "
                "stationary set is a continuum, returning one basis of it",
                DegenerateSpectrumWarning, stacklevel=2)
    points = []
    for k in range(eps.size):
        projector = np.outer(vecs[:, k], vecs[:, k].conj())
        points.append(rho_to_pvec(projector, quorum))
    return points


def propagation_deviation(gen, rho0, hmat, times):
    """Largest |P_n(t) - <n_n|rho(t)|n_n>| over the grid.

    P(t) comes from the linear flow exp(t M); rho(t) from direct
    density-matrix propagation under ``hmat``.  Agreement of the two
    independent routes is the operational meaning of the representation
    being faithful.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    hmat = gen.hamiltonian if hmat is None else np.asarray(hmat, dtype=complex)
    times = np.asarray(times, dtype=float)
    p0 = rho_to_pvec(rho0, gen.quorum)
    trajectory = propagate_grid(gen, p0, times, method="exact-expm")
    dev = 0.0
    for i, t in enumerate(times):
        rho_t = evolve_density_matrix(rho0, hmat, t - times[0])
        reference = rho_to_pvec(rho_t, gen.quorum).values
        dev = max(dev, float(np.max(np.abs(trajectory.values[i] - reference))))
    return dev
