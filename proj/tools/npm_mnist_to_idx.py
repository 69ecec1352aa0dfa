#!/usr/bin/env python3
"""Convert the digit JSON files shipped in the npm `mnist` package into IDX files.

The package stores ~10k MNIST digits as flat arrays of pixel intensities in [0, 1]
(three decimals). Pixels are mapped back to bytes with round(v * 255).

usage: npm_mnist_to_idx.py <package/src/digits> <out-dir>
"""
import json
import pathlib
import struct
import sys


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    src = pathlib.Path(sys.argv[1])
    out = pathlib.Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)

    images = bytearray()
    labels = bytearray()
    for digit in range(10):
        flat = json.loads((src / f"{digit}.json").read_text())["data"]
        if len(flat) % 784:
            raise ValueError(f"{digit}.json: length {len(flat)} is not a multiple of 784")
        images.extend(max(0, min(255, round(v * 255))) for v in flat)
        labels.extend([digit] * (len(flat) // 784))

    n = len(labels)
    (out / "train-images-idx3-ubyte").write_bytes(struct.pack(">IIII", 0x803, n, 28, 28) + images)
    (out / "train-labels-idx1-ubyte").write_bytes(struct.pack(">II", 0x801, n) + labels)
    print(f"wrote {n} samples to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
