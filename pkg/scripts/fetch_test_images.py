#!/usr/bin/env python3
"""Assemble the grayscale benchmark corpus from published package archives.

The classic test images are not redistributed with this repository. This
script pulls them out of source distributions that happen to bundle them
and writes 8-bit grayscale PNGs into the corpus directory:

    lena.png       scipy 0.16.1 sdist, scipy/misc/lena.dat (512x512)
    barbara.png    pyunlocbox 0.6.1 sdist, doc/tutorials/barbara.png (512x512)
    cameraman.png  bm3d 4.0.3 sdist, examples/cameraman256.png (256x256)
    mandrill.png   npm baboon-image 2.1.0, baboon.png (luma of the RGB original)

House and Peppers have no known package source; copy them in by hand as
house.png (256x256) and peppers.png (512x512).

Usage: python scripts/fetch_test_images.py [--out data/corpus] [--cache DIR]
"""

import argparse
import hashlib
import io
import os
import pickle
import re
import sys
import tarfile
import time
import urllib.request

import numpy as np
from PIL import Image

PYPI = "https://pypi.org"
SOURCES = {
    "lena": ("pypi", "scipy", "scipy-0.16.1.tar.gz", "scipy-0.16.1/scipy/misc/lena.dat"),
    "barbara": ("pypi", "pyunlocbox", "pyunlocbox-0.6.1.tar.gz",
                "pyunlocbox-0.6.1/doc/tutorials/barbara.png"),
    "cameraman": ("pypi", "bm3d", "bm3d-4.0.3.tar.gz", "bm3d-4.0.3/examples/cameraman256.png"),
    "mandrill": ("npm", "baboon-image", "baboon-image-2.1.0.tgz", "package/baboon.png"),
}
MANUAL = {"house": "256x256 grayscale House", "peppers": "512x512 grayscale Peppers"}


def fetch(url, timeout=600, tries=3):
    for attempt in range(tries):
        try:
            with urllib.request.urlopen(url, timeout=timeout) as resp:
                return resp.read()
        except OSError as exc:
            if attempt == tries - 1:
                raise
            print(f"  retry {url}: {exc}", file=sys.stderr)
            time.sleep(2)


def archive_url(kind, package, filename):
    if kind == "npm":
        return f"https://registry.npmjs.org/{package}/-/{filename}"
    index = fetch(f"{PYPI}/simple/{package}/").decode()
    for href in re.findall(r'href="([^"]+)"', index):
        path = href.split("#")[0]
        if path.endswith("/" + filename):
            return path if path.startswith("http") else PYPI + "/" + path.lstrip("./")
    raise LookupError(f"{filename} not listed in the {package} index")


class _NoGlobals(pickle.Unpickler):
    def find_class(self, module, name):
        raise pickle.UnpicklingError(f"refusing to load {module}.{name}")


def to_gray(name, member, raw):
    if member.endswith(".dat"):
        arr = np.asarray(_NoGlobals(io.BytesIO(raw), encoding="latin1").load())
        return arr.astype(np.uint8)
    im = Image.open(io.BytesIO(raw))
    if im.mode not in ("L", "P", "1"):
        print(f"  {name}: converting {im.mode} to luma", file=sys.stderr)
    return np.asarray(im.convert("L"))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="data/corpus")
    ap.add_argument("--cache", default=None, help="directory holding already-downloaded archives")
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)

    for name, (kind, package, filename, member) in SOURCES.items():
        target = os.path.join(args.out, f"{name}.png")
        if os.path.exists(target):
            print(f"{name}: present")
            continue
        cached = os.path.join(args.cache, filename) if args.cache else None
        if cached and os.path.exists(cached):
            with open(cached, "rb") as fh:
                blob = fh.read()
        else:
            url = archive_url(kind, package, filename)
            print(f"{name}: downloading {url}")
            blob = fetch(url)
            if args.cache:
                os.makedirs(args.cache, exist_ok=True)
                with open(cached, "wb") as fh:
                    fh.write(blob)
        with tarfile.open(fileobj=io.BytesIO(blob)) as tar:
            raw = tar.extractfile(member).read()
        gray = to_gray(name, member, raw)
        Image.fromarray(gray).save(target)
        digest = hashlib.sha256(open(target, "rb").read()).hexdigest()
        print(f"{name}: {gray.shape[1]}x{gray.shape[0]} -> {target} sha256={digest[:16]}")

    for name, what in MANUAL.items():
        if not os.path.exists(os.path.join(args.out, f"{name}.png")):
            print(f"{name}: not available from any package; place a {what} at "
                  f"{os.path.join(args.out, name + '.png')}")


if __name__ == "__main__":
    main()
