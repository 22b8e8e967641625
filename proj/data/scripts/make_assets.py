#!/usr/bin/env python3
"""Regenerates the bundled test photographs and watermark bitmaps.

Photographs come from scikit-image's bundled sample data (public domain /
CC0) and are stored as 512x512 binary PGM. Watermarks are rendered text.
"""
import os
import sys

import numpy as np
from PIL import Image, ImageDraw, ImageFont
from skimage import data, transform

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.dirname(HERE)
FONT = "/usr/share/fonts/truetype/dejavu/DejaVuSans-Bold.ttf"


def save_pgm(name, arr):
    arr = np.asarray(arr, dtype=np.uint8)
    h, w = arr.shape
    with open(os.path.join(OUT, name), "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(arr.tobytes())


def save_pbm(name, bits):
    bits = np.asarray(bits, dtype=np.uint8)
    h, w = bits.shape
    with open(os.path.join(OUT, name), "w") as f:
        f.write("P1\n%d %d\n" % (w, h))
        for row in bits:
            f.write(" ".join(str(int(b)) for b in row) + "\n")


def luma(rgb):
    rgb = rgb.astype(np.int64)
    return ((299 * rgb[..., 0] + 587 * rgb[..., 1] + 114 * rgb[..., 2] + 500) // 1000).astype(np.uint8)


def from_art(rows):
    return np.array([[1 if c == "#" else 0 for c in r] for r in rows], dtype=np.uint8)


LSU_12x12 = [
    "............",
    "............",
    "#...###.#..#",
    "#...#...#..#",
    "#...#...#..#",
    "#...###.#..#",
    "#.....#.#..#",
    "#.....#.#..#",
    "###.###.####",
    "............",
    "............",
    "............",
]

LSU_15x12 = [
    "...............",
    "...............",
    "#....####.#...#",
    "#....#....#...#",
    "#....#....#...#",
    "#....####.#...#",
    "#.......#.#...#",
    "#.......#.#...#",
    "####.####.#####",
    "...............",
    "...............",
    "...............",
]


def render_text(lines, size, font_px):
    img = Image.new("L", (size, size), 255)
    draw = ImageDraw.Draw(img)
    font = ImageFont.truetype(FONT, font_px)
    heights = [draw.textbbox((0, 0), t, font=font) for t in lines]
    total = sum(b[3] - b[1] for b in heights) + 2 * (len(lines) - 1)
    y = (size - total) // 2
    for t, b in zip(lines, heights):
        w = b[2] - b[0]
        draw.text(((size - w) // 2 - b[0], y - b[1]), t, font=font, fill=0)
        y += b[3] - b[1] + 2
    return (np.asarray(img) < 128).astype(np.uint8)


def main():
    # Rightmost 427x427 square of the launch-pad photo (NASA, public domain),
    # upsampled to 512x512.
    rocket = luma(data.rocket()).astype(float)
    square = rocket[:, rocket.shape[1] - 427:]
    up = transform.resize(square, (512, 512), preserve_range=True, anti_aliasing=True)
    save_pgm("photo_launch.pgm", np.clip(np.rint(up), 0, 255))
    save_pgm("photo_gravel.pgm", data.gravel())
    save_pbm("wm_lsu_12x12.pbm", from_art(LSU_12x12))
    save_pbm("wm_lsu_15x12.pbm", from_art(LSU_15x12))
    save_pbm("wm_lsu_32x32.pbm", render_text(["L.S.U", "5760"], 32, 11))
    save_pbm("wm_lsu_64x64.pbm", render_text(["LSU", "5760"], 64, 22))
    return 0


if __name__ == "__main__":
    sys.exit(main())
