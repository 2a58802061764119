"""Photon-mediated spin-exchange matrices for atoms near a band edge.

After adiabatic elimination of the band photons, atoms detuned into the gap
talk through the bound photon cloud: U_jl = gbar_c^2 f(z_j, z_l)/(2 Delta)
with f = exp(-|z_j - z_l|/L) E(z_j) E*(z_l) in 1D and a Bessel-K0 kernel in
2D.  The interaction length L = sqrt(alpha omega_b/Delta)/k0 is evaluated at
the atomic detuning (large-detuning regime Delta >> beta), so the matrices
here are the coherent, photon-eliminated limit; dissipative corrections are
handled in `dynamics`.

Sign convention: a lower band edge (alpha > 0) with the atom in the gap
(Delta > 0) gives U > 0; mirroring to an upper edge (alpha < 0, Delta < 0)
flips the sign of every element while |f| is unchanged.

Raman-driven variants scale the two-level matrix by |Omega/delta_L|^2 and
narrow the atomic linewidth by the same factor, which is what keeps the
exchange cooperativity drive-independent.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import k0 as _bessel_k0

from .bound_state import TWOPI, AtomCoupling, BandEdge, _check_finite

HERMITICITY_RTOL = 1e-12
DRIVE_RATIO_WARN = 0.3      # |Omega/delta_L| above this is outside the adiabatic regime
DETUNING_BETA_WARN = 10.0   # Delta/beta below this strains the photon elimination

MATRIX_KINDS = ("two_level_1d", "two_level_2d", "lambda_driven", "four_level",
                "multi_drive", "mechanical")


@dataclass
class AtomArray:
    """Atom positions with the Bloch-function values at each atom."""

    positions: np.ndarray     # (N,) for a 1D chain or (N, 2) for a 2D lattice
    bloch_values: np.ndarray  # complex E_k0(z_j), one per atom
    gamma: float              # free-space linewidth [rad/s]

    def __post_init__(self):
        self.positions = np.atleast_1d(np.asarray(self.positions, dtype=float))
        self.bloch_values = np.atleast_1d(np.asarray(self.bloch_values, dtype=complex))
        if self.positions.ndim not in (1, 2):
            raise ValueError("positions must be (N,) or (N, 2)")
        if len(self.bloch_values) != len(self.positions):
            raise ValueError("positions and bloch_values lengths differ")
        _check_finite(positions=self.positions, gamma=self.gamma)
        if not np.all(np.isfinite(self.bloch_values)):
            raise ValueError("bloch_values must be finite")
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")

    def __len__(self) -> int:
        return len(self.positions)


def atom_array(positions, band: BandEdge, gamma: float,
               bloch_values=None) -> AtomArray:
    """AtomArray with the default edge Bloch wave exp(i k0 z) filled in.

    For 2D position arrays the edge wavevector is taken along the first axis.
    """
    positions = np.atleast_1d(np.asarray(positions, dtype=float))
    if bloch_values is None:
        z_along = positions if positions.ndim == 1 else positions[:, 0]
        bloch_values = np.exp(1j * band.k0 * z_along)
    return AtomArray(positions=positions, bloch_values=bloch_values, gamma=gamma)


@dataclass
class DriveField:
    """One Raman drive on the |s>-|e> leg (plus optional |g>-|e'> leg)."""

    Omega: float        # Rabi amplitude [rad/s]
    Omega_prime: float  # second-leg amplitude, 0 for the Lambda scheme [rad/s]
    delta_L: float      # drive detuning from the excited state [rad/s]
    Delta_L: float      # two-photon detuning from the band edge [rad/s]
    phi: float = 0.0    # relative phase between the two drive legs [rad]

    def __post_init__(self):
        _check_finite(Omega=self.Omega, Omega_prime=self.Omega_prime,
                      delta_L=self.delta_L, Delta_L=self.Delta_L, phi=self.phi)
        if self.delta_L != 0.0 and abs(self.Omega / self.delta_L) > DRIVE_RATIO_WARN:
            warnings.warn(
                f"|Omega/delta_L| = {abs(self.Omega / self.delta_L):.3g} exceeds "
                f"{DRIVE_RATIO_WARN}; adiabatic drive elimination is strained",
                stacklevel=2)


@dataclass
class CouplingMatrix:
    """N x N Hermitian matrix of exchange rates U_jl [rad/s]."""

    values: np.ndarray
    kind: str
    diagonal_regularized: bool = False      # 2D diagonal from the short-range cutoff
    gamma_narrowed: Optional[float] = None  # driven kinds: |Omega|^2 gamma/delta_L^2
    gamma_narrowed_prime: Optional[float] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.kind not in MATRIX_KINDS:
            raise ValueError(f"unknown matrix kind {self.kind!r}")
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError("values must be a square matrix")
        scale = np.max(np.abs(self.values))
        if scale > 0:
            dev = np.max(np.abs(self.values - self.values.conj().T))
            if dev > HERMITICITY_RTOL * scale:
                raise ValueError(f"matrix not Hermitian: max|U - U^dag| = {dev:.3e}")
            if np.max(np.abs(self.values.diagonal().imag)) > HERMITICITY_RTOL * scale:
                raise ValueError("diagonal entries must be real")

    @property
    def n_atoms(self) -> int:
        return self.values.shape[0]


def interaction_length(band: BandEdge, detuning: float) -> float:
    """L = sqrt(alpha omega_b/detuning)/k0 for an in-gap detuning.

    The gap side is set by the curvature sign, so alpha*detuning > 0 is
    required; anything else is a detuning inside the band.
    """
    _check_finite(detuning=detuning)
    if band.alpha * detuning <= 0:
        raise ValueError(
            f"detuning {detuning:.4g} lies inside the band for curvature "
            f"alpha = {band.alpha:.4g}; no exponentially bound interaction")
    return math.sqrt(band.alpha * band.omega_b / detuning) / band.k0


def _gbar_sq(band: BandEdge, coupling: AtomCoupling, L: float) -> float:
    # gbar_c^2 = g_cell^2 * a / L
    return coupling.g_cell**2 * band.a / L


def _warn_small_detuning(detuning: float, beta: float) -> None:
    if abs(detuning) < DETUNING_BETA_WARN * beta:
        warnings.warn(
            f"|detuning|/beta = {abs(detuning) / beta:.3g} < {DETUNING_BETA_WARN:g}; "
            "the photon-eliminated matrix is marginal this close to the edge",
            stacklevel=3)


def _pair_phases(atoms: AtomArray) -> np.ndarray:
    e = atoms.bloch_values
    return np.outer(e, e.conj())


def coupling_matrix_1d(atoms: AtomArray, band: BandEdge,
                       coupling: AtomCoupling) -> CouplingMatrix:
    """Two-level exchange matrix U_jl = gbar_c^2 f(z_j, z_l)/(2 Delta) in 1D."""
    if atoms.positions.ndim != 1:
        raise ValueError("coupling_matrix_1d needs a 1D chain")
    L = interaction_length(band, coupling.Delta)
    _warn_small_detuning(coupling.Delta, coupling.beta)
    sep = np.abs(atoms.positions[:, None] - atoms.positions[None, :])
    scale = _gbar_sq(band, coupling, L) / (2.0 * coupling.Delta)
    values = scale * np.exp(-sep / L) * _pair_phases(atoms)
    return CouplingMatrix(values=values, kind="two_level_1d")


def coupling_matrix_2d(atoms: AtomArray, band: BandEdge,
                       coupling: AtomCoupling) -> CouplingMatrix:
    """Exchange matrix for an isotropic 2D quadratic edge.

    Off-diagonal spatial kernel (2/pi) K0(r/L); the would-be logarithmic
    self-energy on the diagonal is regularized at r_min = a/2 and the matrix
    flagged accordingly.  The overall scale pi g_cell^2 a/(2 L^2 Delta)
    reproduces the k-space integral of the 2D single-band model.
    """
    if atoms.positions.ndim != 2 or atoms.positions.shape[1] != 2:
        raise ValueError("coupling_matrix_2d needs (N, 2) positions")
    L = interaction_length(band, coupling.Delta)
    _warn_small_detuning(coupling.Delta, coupling.beta)
    diff = atoms.positions[:, None, :] - atoms.positions[None, :, :]
    r = np.sqrt(np.sum(diff**2, axis=-1))
    off_diag_zero = (r == 0.0) & ~np.eye(len(atoms), dtype=bool)
    if np.any(off_diag_zero):
        raise ValueError("duplicate atom positions give a divergent 2D kernel")
    np.fill_diagonal(r, 0.5 * band.a)   # short-range cutoff for the self-energy
    # gbar_2d^2 = 2 pi^2 g^2/L^2 with g^2 = g_cell^2 a/(2 pi)
    gbar2d_sq = math.pi * coupling.g_cell**2 * band.a / L**2
    scale = gbar2d_sq / (2.0 * coupling.Delta)
    values = scale * (2.0 / math.pi) * _bessel_k0(r / L) * _pair_phases(atoms)
    return CouplingMatrix(values=values, kind="two_level_2d",
                          diagonal_regularized=True)


def driven_coupling_matrix(atoms: AtomArray, band: BandEdge,
                           coupling: AtomCoupling,
                           drive: DriveField) -> CouplingMatrix:
    """Raman-driven ground-state exchange matrix.

    The two-level matrix at detuning Delta_L, scaled by |Omega/delta_L|^2;
    tagged lambda_driven (Omega_prime = 0, XY exchange S = sigma_gs) or
    four_level (both legs driven, S mixes sigma_sg and sigma_gs).  The
    narrowed linewidths |Omega|^2 gamma/delta_L^2 ride along on the result.
    """
    if atoms.positions.ndim != 1:
        raise ValueError("driven_coupling_matrix needs a 1D chain")
    if drive.delta_L == 0.0:
        raise ValueError("delta_L = 0: drive resonant with the excited state")
    L = interaction_length(band, drive.Delta_L)
    _warn_small_detuning(drive.Delta_L, coupling.beta)
    sep = np.abs(atoms.positions[:, None] - atoms.positions[None, :])
    ratio_sq = (drive.Omega / drive.delta_L) ** 2
    scale = ratio_sq * _gbar_sq(band, coupling, L) / (2.0 * drive.Delta_L)
    values = scale * np.exp(-sep / L) * _pair_phases(atoms)
    kind = "lambda_driven" if drive.Omega_prime == 0.0 else "four_level"
    ratio_prime_sq = (drive.Omega_prime / drive.delta_L) ** 2
    return CouplingMatrix(values=values, kind=kind,
                          gamma_narrowed=ratio_sq * atoms.gamma,
                          gamma_narrowed_prime=ratio_prime_sq * atoms.gamma)


@dataclass
class SpinRotation:
    """Effective spin axis of a four-level drive with relative phase phi.

    The driven exchange operator per atom is S = coeff_x*sigma_x + coeff_y*sigma_y;
    any ground-state splitting term rides separately and is not used here.
    """

    coeff_x: float
    coeff_y: float

    def describe(self) -> str:
        return f"S = {self.coeff_x:+.6g}*sigma_x {self.coeff_y:+.6g}*sigma_y"


def spin_rotation(drive: DriveField) -> SpinRotation:
    """Spin-operator coefficients (2 cos(phi/2), -2 sin(phi/2)) for Omega' = Omega e^{i phi}."""
    return SpinRotation(coeff_x=2.0 * math.cos(drive.phi / 2.0),
                        coeff_y=-2.0 * math.sin(drive.phi / 2.0))


def multi_drive_sum(atoms: AtomArray, band: BandEdge, coupling: AtomCoupling,
                    drives: Sequence[DriveField]) -> CouplingMatrix:
    """Sum of per-drive matrices; adiabatic elimination is additive.

    Each drive keeps its own interaction length L_i.  Drives must sit at
    pairwise distinct detunings delta_L: coincident frequencies interfere at
    the amplitude level and do not add as independent potentials.
    """
    if len(drives) == 0:
        raise ValueError("empty drive list")
    deltas = [d.delta_L for d in drives]
    if len(set(deltas)) != len(deltas):
        raise ValueError("drives must have pairwise distinct delta_L")
    parts = [driven_coupling_matrix(atoms, band, coupling, d) for d in drives]
    if len(parts) == 1:
        return parts[0]
    total = parts[0].values.copy()
    for p in parts[1:]:
        total = total + p.values
    return CouplingMatrix(
        values=total, kind="multi_drive",
        gamma_narrowed=sum(p.gamma_narrowed for p in parts),
        gamma_narrowed_prime=sum(p.gamma_narrowed_prime for p in parts))


def mechanical_potential(atoms: AtomArray, band: BandEdge,
                         coupling: AtomCoupling, omega_L: float,
                         Omega: float) -> CouplingMatrix:
    """Spin-independent pair potential from weak off-resonant driving.

    U_jl = |Omega|^2 gbar_c^2 f(z_j, z_l) / (2 (omega_L - omega_b)(omega_L - omega_a)^2),
    with L evaluated at the laser detuning omega_L - omega_b.  The prefactor
    sign follows the gap side of omega_L.
    """
    if atoms.positions.ndim != 1:
        raise ValueError("mechanical_potential needs a 1D chain")
    omega_a = band.omega_b + coupling.Delta
    if omega_L == omega_a:
        raise ValueError("omega_L resonant with the atom")
    laser_detuning = omega_L - band.omega_b
    L = interaction_length(band, laser_detuning)
    if abs(Omega / (omega_L - omega_a)) > DRIVE_RATIO_WARN:
        warnings.warn(
            "drive is not weak relative to |omega_L - omega_a|; "
            "the mechanical-potential expansion is strained", stacklevel=2)
    sep = np.abs(atoms.positions[:, None] - atoms.positions[None, :])
    scale = Omega**2 * _gbar_sq(band, coupling, L) \
        / (2.0 * laser_detuning * (omega_L - omega_a) ** 2)
    values = scale * np.exp(-sep / L) * _pair_phases(atoms)
    return CouplingMatrix(values=values, kind="mechanical")
