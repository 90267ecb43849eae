#!/usr/bin/env python3
"""Regenerate the image fixtures under tests/data from scikit-image's bundled samples.

tests/data/natural/*.pgm      256x256 8-bit grayscale center crops of natural photographs
tests/data/motorcycle/        Middlebury 2014 'Motorcycle' (quarter size) as shipped by scikit-image:
    left.ppm, right.ppm       8-bit RGB views
    disp_left.pgm             16-bit disparity of the left view, stored as round(d * 4), 0 = unknown
"""

import os
import sys

import numpy as np
from PIL import Image
import skimage
from skimage import color

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests", "data")
SRC = os.path.join(os.path.dirname(skimage.__file__), "data")

NATURAL = [
    "camera.png", "astronaut.png", "coffee.png", "chelsea.png", "rocket.jpg",
    "coins.png", "moon.png", "brick.png", "grass.png", "gravel.png",
    "hubble_deep_field.jpg", "clock_motion.png",
]


def write_pgm(path, arr, maxval):
    arr = np.asarray(arr)
    h, w = arr.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n%d\n" % (w, h, maxval))
        f.write(arr.astype(">u2" if maxval > 255 else "u1").tobytes())


def write_ppm(path, arr):
    h, w, _ = arr.shape
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(arr.astype("u1").tobytes())


def main():
    os.makedirs(os.path.join(ROOT, "natural"), exist_ok=True)
    for name in NATURAL:
        img = np.asarray(Image.open(os.path.join(SRC, name)))
        if img.ndim == 3:
            img = np.round(color.rgb2gray(img[..., :3]) * 255.0)
        h, w = img.shape
        y0, x0 = (h - 256) // 2, (w - 256) // 2
        crop = img[y0:y0 + 256, x0:x0 + 256]
        write_pgm(os.path.join(ROOT, "natural", os.path.splitext(name)[0] + ".pgm"), crop, 255)

    moto = os.path.join(ROOT, "motorcycle")
    os.makedirs(moto, exist_ok=True)
    write_ppm(os.path.join(moto, "left.ppm"), np.asarray(Image.open(os.path.join(SRC, "motorcycle_left.png"))))
    write_ppm(os.path.join(moto, "right.ppm"), np.asarray(Image.open(os.path.join(SRC, "motorcycle_right.png"))))
    disp = np.load(os.path.join(SRC, "motorcycle_disp.npz"))["arr_0"]
    raw = np.where(np.isfinite(disp), np.round(disp * 4.0), 0).astype(np.uint16)
    write_pgm(os.path.join(moto, "disp_left.pgm"), raw, 65535)
    return 0


if __name__ == "__main__":
    sys.exit(main())
