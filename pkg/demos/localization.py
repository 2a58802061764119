"""Disorder-induced localization near a dielectric-stack band edge.

Fabrication noise scatters band-edge light, and close to the edge the
localization length collapses with an unusual exponent: xi/a scales as
sigma^(-2/3) rather than the bulk sigma^(-2).  This script evaluates the
analytic prediction for a two-material quarter-wave-like stack and
checks it against a transfer-matrix Monte Carlo.
"""

import math

import numpy as np

from bandqed import (DielectricStack, band_edge_phase, cell_matrix, kp_map,
                     lyapunov_mc, sigma_of, xi_analytic)


def main():
    r = 2.0             # index contrast n_h/n_l
    phi_b = math.pi / 2  # phase scale multiplying the thickness noise

    # clean stack first: the band-edge cell matrix has trace -2, the
    # hallmark of a unit-cell eigenvalue degenerate at -1
    phi_edge = band_edge_phase(r)
    M = cell_matrix(r, phi_edge, phi_edge)
    print("clean stack, r = %.1f:" % r)
    print("  band-edge phase phi = %.6f rad" % phi_edge)
    print("  tr(M)/2 = %.12f, |det M| = %.12f"
          % (M.trace().real / 2.0, abs(np.linalg.det(M))))

    kp = kp_map(DielectricStack(r=r, phi_b=phi_b))
    print("  effective mass map: sin^2(phi_kp) = %.6f, beta/eps_h = %.6f"
          % (math.sin(kp.phi_kp) ** 2, kp.beta_per_eps_h))

    # analytic localization length at one-part-per-thousand thickness noise
    eps = 1e-3
    stack = DielectricStack(r=r, phi_b=phi_b, epsilon=eps, n_cells=10000,
                            seed=0)
    sigma = sigma_of(stack)
    xi = xi_analytic(sigma)
    print()
    print("epsilon = %g: sigma = %.4e, xi/a = %.1f" % (eps, sigma, xi))
    print("a 10 um-period stack would localize band-edge light in %.2f mm"
          % (xi * 10e-6 * 1e3))

    # the -2/3 law: tripling the disorder shrinks xi by 3^(2/3)
    print()
    print("%10s %12s %10s %12s %12s" % ("epsilon", "sigma", "xi/a",
                                        "xi_mc/a", "mc/analytic"))
    for eps in (3e-4, 1e-3, 3e-3):
        stack = DielectricStack(r=r, phi_b=phi_b, epsilon=eps, n_cells=10000,
                                seed=0)
        sigma = sigma_of(stack)
        xi = xi_analytic(sigma)
        mc = lyapunov_mc(stack, n_trials=100)
        print("%10.0e %12.4e %10.2f %12.2f %12.3f"
              % (eps, sigma, xi, mc.xi_mc, mc.xi_mc / xi))
    print("(convention: %s)" % mc.convention)

    ratio = (xi_analytic(sigma_of(DielectricStack(r=r, phi_b=phi_b,
                                                  epsilon=3e-3)))
             / xi_analytic(sigma_of(DielectricStack(r=r, phi_b=phi_b,
                                                    epsilon=1e-3))))
    print()
    print("xi(3e-3)/xi(1e-3) = %.4f, 3^(-2/3) = %.4f"
          % (ratio, 3.0 ** (-2.0 / 3.0)))


if __name__ == "__main__":
    main()
