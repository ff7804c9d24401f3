"""Weight decay with the bounded penalty inside a small ReLU network.

The training protocol: Gaussian init with variance 4/(n_in + n_out), mini
batches reshuffled per epoch, a triangular learning rate cycling between
0.01 and 0.25, early stopping once 20 epochs pass without a better total
validation loss (cap 250), best-checkpoint restore, and the median test
error over seeds 1-3.  A noisy-label small-data regime makes the
regularization earn its keep.
"""

import numpy as np

from gausspen import MlpArchitecture, PenaltySpec, TrainConfig, flip_labels, make_blobs, split, train
from gausspen.cli import lower_median


def median_run(splits, arch, penalty, lam):
    errors = []
    for seed in (1, 2, 3):
        config = TrainConfig(penalty=penalty, lam=lam, batch_size=32, seed=seed)
        run = train(*splits, arch, config)
        errors.append(run.test_error_rate)
    return lower_median(errors), errors


def main():
    dataset = make_blobs(num_classes=3, per_class=60, dimension=8, separation=3.0, seed=0)
    tr, va, te = split(dataset, (0.5, 0.25, 0.25), seed=0)
    tr = flip_labels(tr, 0.25, seed=0)  # poison a quarter of the training labels
    splits = (tr, va, te)
    arch = MlpArchitecture((8, 64, 64, 3))

    base, seeds = median_run(splits, arch, PenaltySpec("none"), 0.0)
    print(f"unpenalized: median test error {base:.4f}  per-seed {seeds}")

    penalty = PenaltySpec("gaussian", kappa=10.0)
    print("\nbounded penalty, kappa = 10:")
    best = (np.inf, None)
    for lam in np.geomspace(1e-4, 1e-1, 5):
        med, seeds = median_run(splits, arch, penalty, float(lam))
        marker = ""
        if med < best[0]:
            best = (med, lam)
            marker = "  <- best so far"
        print(f"  lam={lam:9.5f}  median {med:.4f}  per-seed {seeds}{marker}")

    print(f"\nbest median {best[0]:.4f} at lam={best[1]:.5f} vs unpenalized {base:.4f}")


if __name__ == "__main__":
    main()
