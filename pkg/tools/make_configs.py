#!/usr/bin/env python3
"""Regenerate the built-in twin-layer configuration files.

Flat packet index convention: v * 4^J + p * 2^J + q over the half-plane
kernels, with q the horizontal (xi1) frequency band, p the vertical band
and v in {0, 1} the sign of the vertical window.

walexnet (J=3):  drop the two low-pass cells and the 32 corner cells with
p >= 4 and q >= 4; 6 single-cell groups cover the lowest ring, eight
3-cell groups with two outputs each cover the middle ring, ten groups of
6 or 7 cells with one output each cover the outer ring. 32 outputs total.

wresnet (J=2):  drop the two low-pass cells and the 14 cells whose band
touches the Fourier-domain edge (p or q equal to 3); the remaining 16
cells form single-cell groups, the eight lower-frequency ones emitting two
channels each. 24 outputs total.
"""

import json
import pathlib


def flat(J, v, p, q):
    n1 = 2 ** J
    return v * n1 * n1 + p * n1 + q


def walexnet():
    J = 3
    groups = []
    for v in (0, 1):
        for (p, q) in ((0, 1), (1, 0), (1, 1)):
            groups.append({"packets": [flat(J, v, p, q)], "out": 1, "lambda": 0.0})
    mid = [[(0, 2), (0, 3), (1, 3)], [(1, 2), (2, 2), (2, 3)],
           [(2, 0), (3, 0), (3, 1)], [(2, 1), (3, 2), (3, 3)]]
    for v in (0, 1):
        for cells in mid:
            groups.append({"packets": [flat(J, v, p, q) for p, q in cells],
                           "out": 2, "lambda": 4.1e-3})
    high = [
        [(0, 4), (0, 5), (1, 4), (1, 5), (0, 6), (0, 7), (1, 6)],
        [(1, 7), (2, 4), (2, 5), (3, 4), (3, 5), (2, 6), (2, 7)],
        [(3, 6), (3, 7), (4, 0), (4, 1), (5, 0), (5, 1)],
        [(4, 2), (4, 3), (5, 2), (5, 3), (6, 0), (6, 1)],
        [(6, 2), (6, 3), (7, 0), (7, 1), (7, 2), (7, 3)],
    ]
    for v in (0, 1):
        for cells in high:
            groups.append({"packets": [flat(J, v, p, q) for p, q in cells],
                           "out": 1, "lambda": 3.2e-4})
    return {"arch": "walexnet", "m": 4, "J": 3, "L_low": 32, "L_high": 32,
            "mu": [1 / 3, 1 / 3, 1 / 3], "groups": groups}


def wresnet():
    J = 2
    groups = []
    for v in (0, 1):
        for p in range(3):
            for q in range(3):
                if (p, q) == (0, 0):
                    continue
                out = 2 if max(p, q) == 1 or (p, q) == (2, 1) else 1
                groups.append({"packets": [flat(J, v, p, q)],
                               "out": out, "lambda": 0.0})
    return {"arch": "wresnet", "m": 2, "J": 2, "L_low": 40, "L_high": 24,
            "mu": [1 / 3, 1 / 3, 1 / 3], "groups": groups}


def main():
    out = pathlib.Path(__file__).resolve().parents[1] / "src/waveshift/configs"
    out.mkdir(parents=True, exist_ok=True)
    for cfg in (walexnet(), wresnet()):
        path = out / f"{cfg['arch']}.json"
        path.write_text(json.dumps(cfg, indent=1) + "\n")
        n_cells = sum(len(g["packets"]) for g in cfg["groups"])
        n_out = sum(g["out"] for g in cfg["groups"])
        print(f"wrote {path}  cells={n_cells} outputs={n_out}")


if __name__ == "__main__":
    main()
