"""The two-minima story on an orthonormal design.

With an orthonormal design the penalized least-squares problem splits into
independent scalar problems  -2*b0*b + b^2 + lam*(1 - exp(-kappa b^2)).
For small lam there is a single minimum at the unpenalized estimate b0.
As lam grows a second local minimum appears near zero, and past a crossing
weight lam* it takes over as the global one: the estimate snaps from
"essentially unbiased" to "essentially dead".
"""

import numpy as np

from gausspen import lambda_phase_scan, solve_orthonormal

BETA_OLS = 3.0
KAPPA = 10.0


def main():
    grid = np.arange(0.1, 15.2, 1.0)
    profiles, lam_star = lambda_phase_scan(BETA_OLS, KAPPA, grid)

    print(f"unpenalized estimate {BETA_OLS}, kappa {KAPPA}")
    print(f"{'lam':>6} {'minima':>7} {'global argmin':>14} {'global value':>13}")
    for profile in profiles:
        loc, val, _ = profile.minima[profile.global_index]
        print(f"{profile.lam:6.1f} {len(profile.minima):7d} {loc:14.5f} {val:13.5f}")
    print(f"\nvalue crossing at lam* = {lam_star:.4f}")

    # zoom in on the two basins right at the crossing
    profile = solve_orthonormal(BETA_OLS, lam_star, KAPPA)
    for loc, val, curv in profile.minima:
        print(f"  minimum at {loc:8.5f}: value {val:.6f}, curvature {curv:.3f}")


if __name__ == "__main__":
    main()
