"""Single-excitation dynamics and exchange-fidelity optimization.

Everything here runs in the no-jump sector: one shared excitation moving
through the exchange matrix U while the norm decays under the dressed-state
linewidth Gamma_eff = gamma cos^2(theta) + kappa_p sin^2(theta).  The decayed
norm is reported, never renormalized, so 1 - P_transfer is the physical
error of a transfer attempt.

For two atoms the evolution is closed-form; `evolve_single_excitation`
integrates the same equation numerically for any N and doubles as the
cross-check of the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.integrate import solve_ivp

from .bound_state import (BandEdge, AtomCoupling, _check_finite,
                          bound_state_depth, mixing_angles)
from .interactions import CouplingMatrix

MAX_ATOMS = 10_000
GRID_POINTS_MIN = 200   # log-scan resolution before the golden-section polish


@dataclass
class LossModel:
    """Loss channels weighted by the atom/photon content of the dressed state."""

    kappa_p: float  # photonic loss rate [rad/s]
    gamma: float    # atomic free-space rate [rad/s]
    theta: Union[float, np.ndarray] = 0.0  # mixing angle(s); vector for per-atom weights

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        _check_finite(kappa_p=self.kappa_p, gamma=self.gamma)
        if not np.all(np.isfinite(theta)):
            raise ValueError("theta must be finite")
        if self.kappa_p < 0 or self.gamma < 0:
            raise ValueError("loss rates must be nonnegative")
        self.theta = theta if theta.ndim else float(theta)

    def gamma_eff(self):
        """gamma cos^2(theta) + kappa_p sin^2(theta); vector iff theta is one."""
        c2 = np.cos(self.theta) ** 2
        return self.gamma * c2 + self.kappa_p * (1.0 - c2)


@dataclass
class ExchangeResult:
    """Outcome of a half-swap between two atoms."""

    tau: float                 # transfer time pi/(2 |U12|) [s]
    error: float               # 1 - P_target(tau)
    gamma_eff: float           # dressed linewidth used [rad/s]
    optimal_Delta: Optional[float] = None   # set by optimize_exchange [rad/s]
    cooperativity: Optional[float] = None   # C at the operating point


@dataclass
class ExchangeTrajectory:
    times: np.ndarray        # [s]
    populations: np.ndarray  # (nt, 2), no-jump populations of the two atoms
    norm: np.ndarray         # survival amplitude norm, exp(-Gamma t/2)
    result: ExchangeResult


def exchange_simulate(U12: complex, losses: LossModel,
                      t_grid: Optional[np.ndarray] = None) -> ExchangeTrajectory:
    """Closed-form two-atom transfer under uniform loss.

    Populations e^{-Gamma t} cos^2(|U12| t) and e^{-Gamma t} sin^2(|U12| t);
    the transfer error is evaluated at tau = pi/(2 |U12|).
    """
    u = abs(U12)
    if u == 0.0:
        raise ValueError("U12 = 0: no exchange, transfer time diverges")
    g = losses.gamma_eff()
    if np.ndim(g) != 0:
        raise ValueError("exchange_simulate needs a uniform loss model")
    gamma_eff = float(g)
    tau = math.pi / (2.0 * u)
    error = -math.expm1(-gamma_eff * tau)
    if t_grid is None:
        t_grid = np.linspace(0.0, 2.0 * tau, 201)
    t_grid = np.asarray(t_grid, dtype=float)
    envelope = np.exp(-gamma_eff * t_grid)
    p1 = envelope * np.cos(u * t_grid) ** 2
    p2 = envelope * np.sin(u * t_grid) ** 2
    result = ExchangeResult(tau=tau, error=error, gamma_eff=gamma_eff)
    return ExchangeTrajectory(times=t_grid, populations=np.stack([p1, p2], axis=1),
                              norm=np.exp(-0.5 * gamma_eff * t_grid), result=result)


def cooperativity(gbar_c: float, kappa_p: float, gamma: float) -> float:
    """C = gbar_c^2/(kappa_p gamma)."""
    if kappa_p <= 0 or gamma <= 0:
        raise ValueError("cooperativity needs positive loss rates")
    return gbar_c**2 / (kappa_p * gamma)


def cooperativity_at_length(C_lambda: float, L: float, wavelength: float) -> float:
    """Rescale a one-wavelength cooperativity to bound-state length L: C_L = lambda C/L."""
    if L <= 0 or wavelength <= 0:
        raise ValueError("lengths must be positive")
    return wavelength * C_lambda / L


def dissipator_ratio(kappa: float, Delta: float) -> float:
    """Residual collective-dissipator weight relative to the coherent exchange.

    The eliminated photon returns Gamma_jl = (kappa/(2 Delta)) U_jl, so the
    incoherent piece is kappa/(4 Delta) of the Hamiltonian one at matched
    matrix elements.
    """
    if Delta <= 0:
        raise ValueError("Delta must be positive")
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    return kappa / (4.0 * Delta)


def _exchange_error_curve(Delta: np.ndarray, band: BandEdge,
                          coupling: AtomCoupling, kappa_p: float, gamma: float,
                          separation: float):
    """Transfer error vs detuning for two atoms a fixed distance apart."""
    delta = bound_state_depth(coupling.beta, Delta)
    cos_t, sin_t = mixing_angles(delta, coupling.beta)
    gamma_eff = gamma * cos_t**2 + kappa_p * sin_t**2
    L = np.sqrt(band.alpha * band.omega_b / Delta) / band.k0
    gbar_sq = coupling.g_cell**2 * band.a / L
    u12 = gbar_sq * np.exp(-separation / L) / (2.0 * Delta)
    tau = math.pi / 2.0 / np.abs(u12)
    return -np.expm1(-gamma_eff * tau), tau, gbar_sq


def optimize_exchange(band: BandEdge, coupling: AtomCoupling, losses: LossModel,
                      separation: float,
                      scan: Optional[tuple[float, float]] = None,
                      n_grid: int = 400) -> ExchangeResult:
    """Pick the atomic detuning minimizing the two-atom transfer error.

    The loss weights come from losses.kappa_p and losses.gamma; the mixing
    angle is recomputed at every trial detuning, so losses.theta is ignored.
    Deterministic: a log-spaced scan in Delta (default range centered on the
    loss-balance scale beta (2 kappa_p/gamma)^{2/3}) followed by a
    golden-section polish of the bracketed minimum.  A minimum on the scan
    boundary raises rather than silently returning an edge value.  The
    returned error is checked against the cooperativity bound 2 pi/sqrt(C).
    """
    if band.alpha <= 0:
        raise ValueError("optimize_exchange assumes a lower band edge (alpha > 0)")
    if separation < 0:
        raise ValueError("separation must be nonnegative")
    kappa_p, gamma = losses.kappa_p, losses.gamma
    beta = coupling.beta
    if scan is None:
        if kappa_p > 0 and gamma > 0:
            center = beta * (2.0 * kappa_p / gamma) ** (2.0 / 3.0)
        else:
            center = 1e3 * beta
        lo = max(10.0 * beta, center / 300.0)
        hi = max(300.0 * center, 1e3 * lo)
    else:
        lo, hi = scan
        if not (0 < lo < hi):
            raise ValueError("scan bounds must satisfy 0 < lo < hi")

    def err_at(Delta):
        return _exchange_error_curve(Delta, band, coupling, kappa_p, gamma,
                                     separation)

    n_grid = max(n_grid, GRID_POINTS_MIN)
    grid = np.geomspace(lo, hi, n_grid)
    errs = err_at(grid)[0]

    i = int(np.argmin(errs))
    flat = np.max(errs) - np.min(errs) <= 1e-300
    if (i == 0 or i == n_grid - 1) and not flat:
        raise RuntimeError(
            f"error minimum at scan boundary (Delta = {grid[i]:.4g}, "
            f"error = {errs[i]:.4g}); widen the scan range")

    if flat:
        d_opt = float(grid[n_grid // 2])
    else:
        # golden-section on log(Delta) within the bracketing triple
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = math.log(grid[i - 1]), math.log(grid[i + 1])
        c, d = b - invphi * (b - a), a + invphi * (b - a)
        fc = err_at(np.exp(c))[0]
        fd = err_at(np.exp(d))[0]
        for _ in range(64):
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = err_at(np.exp(c))[0]
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = err_at(np.exp(d))[0]
        d_opt = float(math.exp(0.5 * (a + b)))

    err, tau, gbar_sq = (float(v) for v in err_at(np.asarray(d_opt)))
    delta = float(bound_state_depth(beta, np.asarray(d_opt)))
    cos_t, sin_t = mixing_angles(delta, beta)
    gamma_eff = gamma * cos_t**2 + kappa_p * sin_t**2

    coop = None
    if kappa_p > 0 and gamma > 0:
        coop = cooperativity(math.sqrt(gbar_sq), kappa_p, gamma)
        bound = 2.0 * math.pi / math.sqrt(coop)
        if err > bound:
            raise RuntimeError(
                f"optimized error {err:.4g} violates the cooperativity bound "
                f"{bound:.4g}; the operating point is inconsistent")
    return ExchangeResult(tau=tau, error=err, gamma_eff=float(gamma_eff),
                          optimal_Delta=d_opt, cooperativity=coop)


@dataclass
class AmplitudeState:
    """Single-excitation amplitude vector at one instant."""

    amplitudes: np.ndarray  # length-N complex
    time: float = 0.0       # [s]

    def __post_init__(self):
        self.amplitudes = np.atleast_1d(np.asarray(self.amplitudes, dtype=complex))
        if self.amplitudes.ndim != 1:
            raise ValueError("amplitudes must be a vector")
        if not np.all(np.isfinite(self.amplitudes)):
            raise ValueError("amplitudes must be finite")
        if self.norm > 1.0 + 1e-9:
            raise ValueError("norm exceeds 1: decay can only shrink the state")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass
class EvolutionResult:
    times: np.ndarray       # [s]
    amplitudes: np.ndarray  # (nt, N) complex, no-jump amplitudes
    populations: np.ndarray  # |amplitudes|^2
    norm: np.ndarray        # total no-jump norm at each time

    def light_cone_rows(self):
        """(time, site, population) triples, row-major over times."""
        nt, n = self.populations.shape
        t = np.repeat(self.times, n)
        site = np.tile(np.arange(n), nt)
        return t, site, self.populations.ravel()


def collective_dissipator(U: CouplingMatrix, kappa: float, Delta: float) -> np.ndarray:
    """Residual photon-loss jump matrix, (kappa/(4 Delta)) U_jl.

    The eliminated-photon dissipator carries coefficient g^2 kappa/(8 Delta^2),
    a factor kappa/(4 Delta) below the coherent g^2/(2 Delta).  Emitted for
    inspection only; the integrator keeps just the uniform Gamma_eff decay.
    """
    return dissipator_ratio(kappa, Delta) * np.asarray(U.values)


def evolve_single_excitation(U: CouplingMatrix, losses: LossModel,
                             psi0, t_grid: np.ndarray,
                             rtol: float = 1e-9) -> EvolutionResult:
    """Integrate i dpsi/dt = (U - i Gamma_eff/2) psi on the given time grid.

    psi0 is an AmplitudeState or a plain unit-norm complex vector; Gamma_eff
    may be uniform or per-atom (vector theta in the loss model).  The norm
    decays from 1 and is never renormalized.  On integrator failure the
    raised error carries the last good state as its `last_state` attribute.
    """
    values = np.asarray(U.values)
    n = values.shape[0]
    if n > MAX_ATOMS:
        raise ValueError(f"N = {n} exceeds the supported size {MAX_ATOMS}")
    if isinstance(psi0, AmplitudeState):
        psi0 = psi0.amplitudes
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (n,):
        raise ValueError("psi0 length must match the coupling matrix")
    nrm = np.linalg.norm(psi0)
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError(f"psi0 must be unit-norm (got {nrm:.6g})")

    gamma_eff = np.broadcast_to(np.atleast_1d(losses.gamma_eff()), (n,))
    h_eff = values - 0.5j * np.diag(gamma_eff)

    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2:
        raise ValueError("t_grid must have at least two points")

    def rhs(_, y):
        return -1j * (h_eff @ y)

    sol = solve_ivp(rhs, (t_grid[0], t_grid[-1]), psi0, t_eval=t_grid,
                    method="DOP853", rtol=rtol, atol=1e-12)
    if not sol.success:
        err = RuntimeError(f"integrator failed: {sol.message}")
        if sol.y.size:
            err.last_state = AmplitudeState(amplitudes=sol.y[:, -1],
                                            time=float(sol.t[-1]))
        raise err
    amps = sol.y.T
    pops = np.abs(amps) ** 2
    return EvolutionResult(times=t_grid, amplitudes=amps, populations=pops,
                           norm=np.sqrt(np.sum(pops, axis=1)))
