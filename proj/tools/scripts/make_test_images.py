#!/usr/bin/env python3
"""Writes the 8-bit PGM test images used by the test suites and bench configs.

Sources are scikit-image sample images (public domain / CC0):
  camera.pgm     512x512  cameraman
  astronaut.pgm  512x512  astronaut, ITU-R 601 luma
  brick256.pgm   256x256  centre crop of the brick texture
"""
import pathlib
import sys

import numpy as np
from skimage import color, data


def write_pgm(path, img):
    img = np.asarray(img, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(img.tobytes())


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_pgm(out / "camera.pgm", data.camera())
    luma = np.round(color.rgb2gray(data.astronaut()) * 255.0)
    write_pgm(out / "astronaut.pgm", np.clip(luma, 0, 255))
    brick = data.brick()
    write_pgm(out / "brick256.pgm", brick[128:384, 128:384])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
