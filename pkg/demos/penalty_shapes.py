"""Plot the four penalty shapes side by side.

Lasso and arctan have a kink at the origin; ridge and the bounded
exponential penalty are smooth there and overlap near zero, but only the
exponential one flattens out, leaving large coefficients essentially
unpenalized.  Writes penalty_shapes.csv and, when matplotlib is available,
penalty_shapes.png.
"""

import numpy as np

from gausspen import PenaltySpec, penalty_value

SPECS = [
    PenaltySpec("lasso"),
    PenaltySpec("ridge"),
    PenaltySpec("arctan", gamma=1.0),
    PenaltySpec("gaussian", kappa=1.0),
]


def main():
    betas = np.linspace(-3.0, 3.0, 241)
    curves = {spec.label(): [penalty_value(spec, b) for b in betas] for spec in SPECS}

    with open("penalty_shapes.csv", "w") as out:
        out.write("beta," + ",".join(curves) + "\n")
        for i, beta in enumerate(betas):
            out.write(f"{beta:.6f}," + ",".join(f"{curves[k][i]:.12f}" for k in curves) + "\n")
    print("wrote penalty_shapes.csv")

    # the near-origin overlap of the two smooth shapes
    for beta in (0.05, 0.1, 0.5, 2.0):
        ridge = penalty_value(PenaltySpec("ridge"), beta)
        bounded = penalty_value(PenaltySpec("gaussian", kappa=1.0), beta)
        print(f"beta={beta:4.2f}  ridge={ridge:8.5f}  gaussian={bounded:8.5f}")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, values in curves.items():
        ax.plot(betas, values, label=label)
    ax.set_xlabel("beta")
    ax.set_ylabel("penalty")
    ax.set_ylim(0, 3)
    ax.legend()
    fig.tight_layout()
    fig.savefig("penalty_shapes.png", dpi=120)
    print("wrote penalty_shapes.png")


if __name__ == "__main__":
    main()
