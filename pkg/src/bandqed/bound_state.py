"""Atom-photon bound states near a quadratic photonic band edge.

Model: a single band with dispersion omega_k = omega_b*(1 - alpha*(k-k0)^2/k0^2)
near its edge at omega_b, and an atom detuned by Delta = omega_a - omega_b.
alpha > 0 is a lower band edge (band below omega_b, gap above); alpha < 0 the
mirror case.  For any Delta the atom seeds one bound state at omega_b + delta,
where delta > 0 solves

    (delta - Delta) * sqrt(delta) = 2 * beta**1.5

with beta the coupling scale set by the per-cell coupling g_cell.  The bound
photon cloud decays over L = sqrt(alpha*omega_b/delta)/k0, and the pair
(atom, cloud) maps onto a Jaynes-Cummings system: a fictitious cavity at
omega_b - delta coupled at gbar_c = g_cell*sqrt(a/L).  That placement is
exact, not cosmetic: the 2x2 JC Hamiltonian with these parameters has the
bound state as its upper dressed state, and at Delta = -beta the mapping is
resonant (delta = beta, mixing angle pi/4).

All frequencies are angular (rad/s) throughout this package; lengths are in
the same unit as `a` (meters in SI mode, units of a when a = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

TWOPI = 2.0 * math.pi

ArrayLike = Union[float, Sequence[float], np.ndarray]

# relative mismatch allowed when beta and g_cell are both supplied
BETA_GCELL_RTOL = 1e-6


def _check_finite(**values) -> None:
    for name, value in values.items():
        if not np.all(np.isfinite(value)):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass
class BandEdge:
    """Quadratic band-edge dispersion parameters."""

    omega_b: float  # band-edge angular frequency [rad/s]
    alpha: float    # dimensionless band curvature; sign selects lower/upper edge
    k0: float       # band-edge wavevector [rad/m]
    a: float        # lattice constant [m]

    def __post_init__(self):
        _check_finite(omega_b=self.omega_b, alpha=self.alpha, k0=self.k0, a=self.a)
        if self.omega_b <= 0 or self.k0 <= 0 or self.a <= 0:
            raise ValueError("omega_b, k0 and a must be positive")
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero (flat band has no quadratic edge)")

    @property
    def curvature(self) -> float:
        """alpha*omega_b/k0^2, the quadratic coefficient of omega_k in k."""
        return self.alpha * self.omega_b / self.k0**2


@dataclass
class AtomCoupling:
    """Atom parameters relative to the band edge.

    beta and g_cell are two parametrizations of one coupling strength; use
    atom_coupling() to derive one from the other, or validate both.
    """

    beta: float    # coupling scale [rad/s]
    Delta: float   # detuning omega_a - omega_b [rad/s]
    gamma: float   # free-space emission rate [rad/s]
    g_cell: float  # per-cell coupling, gbar_c = g_cell*sqrt(a/L) [rad/s]

    def __post_init__(self):
        _check_finite(beta=self.beta, Delta=self.Delta, gamma=self.gamma,
                      g_cell=self.g_cell)
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.gamma < 0 or self.g_cell < 0:
            raise ValueError("gamma and g_cell must be nonnegative")


@dataclass
class BoundState:
    """Solved bound state and its effective-cavity image."""

    delta: float        # bound-state detuning above the edge [rad/s]
    L: float            # photon-cloud decay length [m]
    theta: float        # mixing angle [rad]; cos^2 = atomic weight
    gbar_c: float       # effective cavity coupling [rad/s]
    omega_c_eff: float  # effective cavity frequency omega_b - delta [rad/s]
    Delta_c_eff: float  # atom-cavity detuning Delta + delta [rad/s]
    validity: float     # sqrt(delta/(alpha*omega_b)); model holds when << 1


def beta_from_g_cell(band: BandEdge, g_cell: float, bloch_amplitude: float = 1.0) -> float:
    """Coupling scale beta implied by the per-cell coupling g_cell.

    Uses g = g_cell*sqrt(a/(2 pi)) so that g*sqrt(2 pi/L) == g_cell*sqrt(a/L),
    then beta = (pi g^2 |u|^2 k0 / sqrt(4 alpha omega_b))**(2/3).
    """
    g_sq = g_cell**2 * band.a / TWOPI
    beta_32 = math.pi * g_sq * bloch_amplitude**2 * band.k0 \
        / math.sqrt(4.0 * abs(band.alpha) * band.omega_b)
    return beta_32 ** (2.0 / 3.0)


def g_cell_from_beta(band: BandEdge, beta: float, bloch_amplitude: float = 1.0) -> float:
    """Inverse of beta_from_g_cell."""
    beta_32 = beta**1.5
    g_sq = beta_32 * math.sqrt(4.0 * abs(band.alpha) * band.omega_b) \
        / (math.pi * bloch_amplitude**2 * band.k0)
    return math.sqrt(g_sq * TWOPI / band.a)


def atom_coupling(band: BandEdge, Delta: float, gamma: float,
                  beta: float | None = None, g_cell: float | None = None,
                  bloch_amplitude: float = 1.0) -> AtomCoupling:
    """Build an AtomCoupling from either beta or g_cell (or both, validated).

    Supplying both is allowed only if they describe the same atom to within
    1e-6 relative; a larger mismatch raises ValueError.
    """
    if beta is None and g_cell is None:
        raise ValueError("need beta or g_cell")
    if beta is not None and beta <= 0:
        raise ValueError("beta must be positive")
    if g_cell is not None and g_cell <= 0:
        raise ValueError("g_cell must be positive")
    if beta is None:
        beta = beta_from_g_cell(band, g_cell, bloch_amplitude)
    elif g_cell is None:
        g_cell = g_cell_from_beta(band, beta, bloch_amplitude)
    else:
        implied = beta_from_g_cell(band, g_cell, bloch_amplitude)
        if abs(implied - beta) > BETA_GCELL_RTOL * beta:
            raise ValueError(
                "beta and g_cell are inconsistent: g_cell implies beta = "
                f"{implied:.9e}, got {beta:.9e}")
    return AtomCoupling(beta=beta, Delta=Delta, gamma=gamma, g_cell=g_cell)


def bound_state_depth(beta: ArrayLike, Delta: ArrayLike) -> np.ndarray:
    """Unique positive root delta of (delta - Delta)*sqrt(delta) = 2 beta^{3/2}.

    Closed form on the depressed cubic x^3 - Delta*x - 2 beta^{3/2} = 0 for
    x = sqrt(delta), kept in real arithmetic: Cardano when the discriminant
    beta^3 - Delta^3/27 >= 0, the trigonometric three-root form otherwise
    (Delta > 3 beta), always selecting the single positive root.  One Newton
    step polishes away the cancellation that creeps in for Delta >> beta.
    Vectorized over both arguments.
    """
    beta = np.asarray(beta, dtype=float)
    Delta = np.asarray(Delta, dtype=float)
    _check_finite(beta=beta, Delta=Delta)
    if np.any(beta <= 0):
        raise ValueError("beta must be positive")
    beta, Delta = np.broadcast_arrays(beta, Delta)

    q_half = beta**1.5                      # -q/2 of the depressed cubic
    disc = beta**3 - Delta**3 / 27.0
    x = np.empty_like(q_half)

    one_real = disc >= 0.0
    if np.any(one_real):
        root = np.sqrt(disc[one_real])
        x[one_real] = np.cbrt(q_half[one_real] + root) \
            + np.cbrt(q_half[one_real] - root)
    three_real = ~one_real                  # only reachable for Delta > 3 beta
    if np.any(three_real):
        d3 = Delta[three_real] / 3.0
        phi = np.arccos((beta[three_real] / d3) ** 1.5) / 3.0
        x[three_real] = 2.0 * np.sqrt(d3) * np.cos(phi)

    for _ in range(2):                      # Newton polish; f' = 3x^2 - Delta > 0 at the root
        x = x - (x**3 - Delta * x - 2.0 * q_half) / (3.0 * x**2 - Delta)
    return x * x


def bound_state_depth_bisect(beta: ArrayLike, Delta: ArrayLike,
                             iterations: int = 200) -> np.ndarray:
    """Same root by bracketed bisection; the independent check path.

    Bracket: f(0) < 0 and f(cbrt(2) sqrt(beta) + sqrt(max(Delta, 0))) >= 0
    (expand the cube to see the upper end is always on the positive side).
    """
    beta = np.asarray(beta, dtype=float)
    Delta = np.asarray(Delta, dtype=float)
    if np.any(beta <= 0):
        raise ValueError("beta must be positive")
    beta, Delta = np.broadcast_arrays(beta, Delta)

    q2 = 2.0 * beta**1.5
    lo = np.zeros_like(q2)
    hi = np.cbrt(q2) + np.sqrt(np.maximum(Delta, 0.0))
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        below = mid**3 - Delta * mid - q2 < 0.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    return x * x


def solve_delta(band: BandEdge, coupling: AtomCoupling) -> float:
    """Bound-state detuning delta for one atom (scalar convenience wrapper)."""
    return float(bound_state_depth(coupling.beta, coupling.Delta))


def mixing_angles(delta: ArrayLike, beta: ArrayLike):
    """(cos theta, sin theta) of the dressed bound state.

    cos^2 theta is the excited-atom weight P_e, sin^2 theta the photon weight
    P_p; the two closed forms satisfy cos^2 + sin^2 = 1 identically.
    """
    delta = np.asarray(delta, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if np.any(delta <= 0) or np.any(beta <= 0):
        raise ValueError("delta and beta must be positive")
    cos_theta = 1.0 / np.sqrt(1.0 + (beta / delta) ** 1.5)
    sin_theta = 1.0 / np.sqrt(1.0 + (delta / beta) ** 1.5)
    if cos_theta.ndim == 0:
        return float(cos_theta), float(sin_theta)
    return cos_theta, sin_theta


def decay_length(band: BandEdge, delta: ArrayLike) -> ArrayLike:
    """Photon-cloud decay length L = sqrt(alpha*omega_b/delta)/k0.

    delta > 0 belongs to a lower edge (alpha > 0); a negative-curvature band
    with delta > 0 would put the state inside the band, which is rejected.
    """
    delta = np.asarray(delta, dtype=float)
    _check_finite(delta=delta)
    if np.any(delta <= 0):
        raise ValueError("delta must be positive")
    if band.alpha * band.omega_b < 0:
        raise ValueError(
            "alpha < 0 with delta > 0 is not an in-gap state; "
            "solve the mirrored lower-edge problem instead")
    L = np.sqrt(band.alpha * band.omega_b / delta) / band.k0
    return float(L) if L.ndim == 0 else L


def effective_cavity(band: BandEdge, coupling: AtomCoupling) -> BoundState:
    """Solve the bound state and package it as an effective JC cavity."""
    delta = solve_delta(band, coupling)
    L = decay_length(band, delta)
    cos_t, sin_t = mixing_angles(delta, coupling.beta)
    gbar_c = coupling.g_cell * math.sqrt(band.a / L)
    return BoundState(
        delta=delta,
        L=L,
        theta=math.atan2(sin_t, cos_t),
        gbar_c=gbar_c,
        omega_c_eff=band.omega_b - delta,
        Delta_c_eff=coupling.Delta + delta,
        validity=math.sqrt(delta / (band.alpha * band.omega_b)),
    )


def bloch_edge_wave(band: BandEdge) -> Callable[[ArrayLike], np.ndarray]:
    """Default Bloch sampler E_k0(z) = exp(i k0 z), unit cell-averaged amplitude.

    At lattice sites z = n*a of a k0 = pi/a edge this is the alternating
    sign (-1)^n; per-structure mode shapes can replace it with measured or
    computed samples.
    """
    def sampler(z: ArrayLike) -> np.ndarray:
        return np.exp(1j * band.k0 * np.asarray(z, dtype=float))
    return sampler


def photon_mode_profile(state: BoundState, bloch, z: ArrayLike) -> np.ndarray:
    """Bound photon wavefunction sqrt(2 pi/L) * exp(-|z|/L) * E_k0(z).

    `bloch` is a callable z -> complex amplitude (see bloch_edge_wave) or an
    array of precomputed E_k0 values matching z.
    """
    if state.L <= 0:
        raise ValueError("decay length must be positive")
    z = np.asarray(z, dtype=float)
    envelope = math.sqrt(TWOPI / state.L) * np.exp(-np.abs(z) / state.L)
    cell = bloch(z) if callable(bloch) else np.asarray(bloch)
    return envelope * cell


def mode_weights(state: BoundState, band: BandEdge, k: ArrayLike) -> np.ndarray:
    """Normalized |c_k|^2 of the photon cloud, a squared Lorentzian in k.

    c_k is proportional to 1/(delta + alpha*omega_b*(k-k0)^2/k0^2); |c_k|
    falls to half its peak at |k - k0| = sqrt(delta/(alpha*omega_b))*k0.
    Normalization is analytic over the full line, so a numerical integral
    over the band window recovers 1 up to the far-tail weight.
    """
    if state.delta <= 0:
        raise ValueError("delta must be positive")
    k = np.asarray(k, dtype=float)
    c = band.curvature
    lorentz = 1.0 / (state.delta + c * (k - band.k0) ** 2)
    norm = (math.pi / 2.0) / (math.sqrt(c) * state.delta**1.5)
    return lorentz**2 / norm
