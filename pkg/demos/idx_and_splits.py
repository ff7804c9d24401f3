"""Dataset plumbing: IDX binary tensors and stratified splits.

Builds a miniature MNIST-style pair of IDX files from synthetic blobs,
reads them back (byte-for-byte round trip), and carves a stratified
train/validation/test partition.
"""

import gzip

import numpy as np

from gausspen import idx_to_dataset, load_idx, make_blobs, parse_idx, serialize_idx, split


def main():
    # fabricate 8x8 "images": blob features quantized into pixel intensities
    blobs = make_blobs(num_classes=4, per_class=50, dimension=64, separation=2.0, seed=3)
    pixels = np.clip((blobs.features - blobs.features.min()) * 32, 0, 255)
    images = pixels.astype(np.uint8).reshape(-1, 8, 8)
    labels = blobs.labels.astype(np.uint8)

    image_blob = serialize_idx(images)
    label_blob = serialize_idx(labels)
    print(f"image tensor {images.shape} -> {len(image_blob)} bytes of IDX")
    assert serialize_idx(parse_idx(image_blob)) == image_blob  # lossless

    with open("demo_images.idx.gz", "wb") as out:
        out.write(gzip.compress(image_blob))
    with open("demo_labels.idx", "wb") as out:
        out.write(label_blob)
    dataset = idx_to_dataset(load_idx("demo_images.idx.gz"), load_idx("demo_labels.idx"))
    print(f"reloaded: {dataset.n} examples, {dataset.features.shape[1]} features, "
          f"pixel range [{dataset.features.min():.2f}, {dataset.features.max():.2f}]")

    tr, va, te = split(dataset, (0.8, 0.1, 0.1), seed=0)
    for part in (tr, va, te):
        counts = np.bincount(part.labels, minlength=4)
        print(f"{part.split_tag:>10}: {part.n:3d} examples, per-class {counts.tolist()}")


if __name__ == "__main__":
    main()
