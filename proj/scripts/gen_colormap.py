#!/usr/bin/env python3
"""Regenerates data/colormap_inferno.csv and src/colormap_lut.inc.

The table is matplotlib's "inferno" sampled at 256 points and rounded
half-up to 8 bits. Relative luminance (linear-light sRGB) is strictly
increasing across the table; the script refuses to write otherwise.
"""
import pathlib

import matplotlib
import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main():
    cmap = matplotlib.colormaps["inferno"]
    lut = np.floor(np.array([cmap(i)[:3] for i in range(256)]) * 255 + 0.5).astype(int)

    c = lut / 255.0
    linear = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    luminance = linear @ [0.2126, 0.7152, 0.0722]
    assert np.all(np.diff(luminance) > 0), "luminance must be strictly increasing"

    csv = "".join(f"{r},{g},{b}\n" for r, g, b in lut)
    (ROOT / "data" / "colormap_inferno.csv").write_text(csv)

    rows = ",\n".join(f"    {{{r}, {g}, {b}}}" for r, g, b in lut)
    inc = (
        "// Generated by scripts/gen_colormap.py from data/colormap_inferno.csv.\n"
        "// Do not edit by hand.\n"
        f"{rows}\n"
    )
    (ROOT / "src" / "colormap_lut.inc").write_text(inc)


if __name__ == "__main__":
    main()
