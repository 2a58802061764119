"""Tunable-range coherent interactions mediated by band-gap photons.

Two atoms in the gap exchange virtual photons through their overlapping
bound-state clouds, giving U_jl ~ exp(-|z_j - z_l|/L) with a range L set
only by the detuning from the band edge.  This script prints U/gamma
versus separation for four detunings of a 371 nm alligator waveguide and
shows the 2D counterpart, where the kernel becomes a Bessel K0.
"""

import math

import numpy as np
from scipy.special import k0

from bandqed import (BandEdge, atom_array, atom_coupling, coupling_matrix_1d,
                     coupling_matrix_2d, interaction_length)

TWOPI = 2.0 * math.pi

OMEGA_B = TWOPI * 333.0e12   # rad/s
ALPHA = 10.6
A_CELL = 371.0e-9            # m
G_CELL = TWOPI * 12.2e9      # rad/s
GAMMA = TWOPI * 5.0e6        # rad/s

DETUNINGS_GHZ = (400.0, 800.0, 1300.0, 2800.0)


def main():
    band = BandEdge(omega_b=OMEGA_B, alpha=ALPHA, k0=np.pi / A_CELL, a=A_CELL)

    # one atom per cell over 12 cells; the Bloch factor alternates sign,
    # which the coupling matrix inherits as (-1)^(j-l)
    n_sites = 12
    positions = np.arange(n_sites) * A_CELL
    atoms = atom_array(positions, band, gamma=GAMMA)

    print("interaction range and strength vs detuning:")
    print("%10s %8s %14s" % ("Delta/2pi", "L/a", "|U_01|/gamma"))
    curves = {}
    for ghz in DETUNINGS_GHZ:
        Delta = TWOPI * ghz * 1e9
        cpl = atom_coupling(band, Delta=Delta, gamma=GAMMA, g_cell=G_CELL)
        mat = coupling_matrix_1d(atoms, band, cpl)
        L = interaction_length(band, Delta)
        curves[ghz] = np.abs(mat.values[0, :]) / GAMMA
        print("%7.0f GHz %8.2f %14.4g" % (ghz, L / A_CELL, curves[ghz][1]))

    print()
    print("|U_0j|/gamma vs separation (cells):")
    header = "%6s" + "%12s" * len(DETUNINGS_GHZ)
    print(header % (("j",) + tuple("%g GHz" % g for g in DETUNINGS_GHZ)))
    for j in range(1, n_sites):
        row = tuple(curves[g][j] for g in DETUNINGS_GHZ)
        print(("%6d" + "%12.4g" * len(row)) % ((j,) + row))

    # the log-slope of each curve is -a/L to machine precision
    print()
    for ghz in DETUNINGS_GHZ:
        L = interaction_length(band, TWOPI * ghz * 1e9)
        slopes = np.diff(np.log(curves[ghz]))
        print("%7.0f GHz: fitted decay a/L = %.6f, expected %.6f"
              % (ghz, -slopes.mean(), A_CELL / L))

    # 2D lattice: the same physics with a K0(r/L) kernel instead of an
    # exponential, so the interaction is quasi-long-range below r ~ L
    side = 5
    xy = np.stack(np.meshgrid(np.arange(side), np.arange(side),
                              indexing="ij"), axis=-1).reshape(-1, 2) * A_CELL
    atoms2 = atom_array(xy, band, gamma=GAMMA)
    Delta = TWOPI * 400e9
    cpl = atom_coupling(band, Delta=Delta, gamma=GAMMA, g_cell=G_CELL)
    mat2 = coupling_matrix_2d(atoms2, band, cpl)
    L = interaction_length(band, Delta)
    print()
    print("2D 5x5 lattice at Delta/2pi = 400 GHz (L/a = %.2f):" % (L / A_CELL))
    print("%10s %14s %14s" % ("r/a", "|U|/|U_ref|", "K0(r/L)/K0(a/L)"))
    ref = abs(mat2.values[0, 1])
    k0_ref = k0(A_CELL / L)
    for idx in (1, 2, 3, side, side + 1):
        r = np.linalg.norm(xy[idx] - xy[0])
        print("%10.3f %14.5f %14.5f"
              % (r / A_CELL, abs(mat2.values[0, idx]) / ref,
                 k0(r / L) / k0_ref))


if __name__ == "__main__":
    main()
