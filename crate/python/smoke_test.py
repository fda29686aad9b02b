"""Builds the extension module, imports it and checks a few known values.

Usage: python3 python/smoke_test.py [--no-build]
"""

import json
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    if "--no-build" not in sys.argv:
        subprocess.run(["cargo", "build", "-p", "szpiro-py", "--release"], cwd=ROOT, check=True)
    lib = os.path.join(ROOT, "target", "release", "libszpiro.so")
    tmp = tempfile.mkdtemp()
    shutil.copy(lib, os.path.join(tmp, "szpiro.so"))
    sys.path.insert(0, tmp)
    import szpiro

    return szpiro


def main():
    sz = load()

    assert sz.factor("1728") == [("2", 6), ("3", 3)]
    assert abs(sz.sigma("1728") - 4.1606) < 0.005
    value, removed, kept = sz.sigma_depleted("1728", 1)
    assert abs(value - 3.0) < 1e-12 and removed == "2^6" and kept == "3^3"
    assert sz.sigma_depleted("2^6*3^3", 2)[0] == 1.0

    e37 = ["0", "0", "1", "-1", "0"]
    h = sz.canonical_height(e37, ("0", "0"))
    assert abs(h - 0.0511114082399688) < 1e-9, h
    hd = sz.canonical_height(e37, ("0", "0"), method="doubling")
    assert abs(h - hd) < 2e-8
    assert abs(sum(v for _, v in sz.local_heights(e37, ("0", "0"))) - h) < 1e-9

    cert = json.loads(sz.certify(e37, ("0", "0")))
    assert 0 < float(cert["lower_bound"]) <= h + 1e-8

    assert sz.frey(1, 8) == ("82944", "2^4")
    csv = sz.abc_scan(200, 1, workers=2)
    assert csv.splitlines()[0] == "J,rank,A,B,C,radical,sigma0,sigma1,frey_disc_case"

    try:
        sz.canonical_height(e37, ("1", "1"))
    except ValueError:
        pass
    else:
        raise AssertionError("point off the curve accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
