#!/usr/bin/env python3
"""Regenerates the bundled test images under data/ from scikit-image samples.

    python3 tools/make_fixtures.py [--out data]

Output is deterministic (fixed seed, lossless PNG).
"""
import argparse
import pathlib

import cv2
import numpy as np
from skimage import data

NATURAL = {
    "astronaut": data.astronaut,
    "coffee": data.coffee,
    "chelsea": data.chelsea,
    "rocket": data.rocket,
}


def save(path, rgb):
    path.parent.mkdir(parents=True, exist_ok=True)
    cv2.imwrite(str(path), cv2.cvtColor(np.ascontiguousarray(rgb), cv2.COLOR_RGB2BGR))


def resize(rgb, w, h):
    return cv2.resize(rgb, (w, h), interpolation=cv2.INTER_AREA)


def to8(x):
    return np.clip(np.rint(x * 255.0), 0, 255).astype(np.uint8)


def night(rgb, gain):
    # dim, crush the mids and add a little sensor noise
    x = (rgb / 255.0) ** 1.6 * gain
    rng = np.random.default_rng(7)
    return to8(x + rng.normal(0.0, 0.004, x.shape))


def shadow_band(rgb, factor=0.3):
    h, w, _ = rgb.shape
    yy, xx = np.mgrid[0:h, 0:w]
    # diagonal band with soft edges, like a pole or building shadow
    d = (xx - 0.6 * yy - 0.25 * w) / (0.18 * w)
    inside = np.clip(1.5 - np.abs(d), 0.0, 1.0)
    shade = 1.0 - (1.0 - factor) * inside
    return to8(rgb / 255.0 * shade[..., None])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    out = pathlib.Path(ap.parse_args().out)

    images = {k: f() for k, f in NATURAL.items()}
    for name, rgb in images.items():
        save(out / "pristine" / f"{name}.png", rgb)

    small = {k: resize(v, 320, 240) for k, v in images.items()}
    for name, gain in (("astronaut", 0.22), ("coffee", 0.18), ("rocket", 0.25)):
        save(out / "samples" / "night" / f"{name}_night.png", night(small[name], gain))
    for name in ("astronaut", "chelsea", "coffee"):
        save(out / "samples" / "shadow" / f"{name}_shadow.png", shadow_band(small[name]))
    save(out / "samples" / "natural" / "chelsea.png", small["chelsea"])

    rng = np.random.default_rng(20240)
    noise = to8(np.clip(rng.normal(0.5, 0.1, (240, 320)), 0.0, 1.0))
    save(out / "noise" / "gaussian.png", np.repeat(noise[..., None], 3, axis=2))

    for w, h in ((320, 240), (640, 480), (1280, 960)):
        save(out / "bench" / f"rocket_{w}x{h}.png", resize(images["rocket"], w, h))


if __name__ == "__main__":
    main()
