"""Command-line interface.

Subcommands: filters, decompose, shift-bench, verify, cost, recon-check.
Exit codes: 0 success, 1 a checked bound failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from . import __version__
from .filters import load_filter_pair
from .metrics import ShiftProbe, extract_shifted_patches, feature_consistency
from .ops import blur_pool, cmod, conv_layer, relu, rmax
from .packetbank import build_packet_bank
from .probes import cmod_tone, pink_image, random_inband_tone, rmax_tone, tone_conv
from .costmodel import cost_table
from .spectral import kernel_spectrum
from .twinblock import (load_config, luminance, prop1_eligible, prop2_eligible,
                        synthetic_bandlimited_kernel, verify_prop1, verify_prop2)
from .wpt import wpt_forward, wpt_inverse

CHECK_FAILED = 1

# Cost ratios checked by `cost`: (flops, tolerance), (memory, tolerance).
COST_TARGETS = {
    ("alexnet", "blur"): ((4.0, 0.1), (4.7, 0.05)),
    ("alexnet", "cmod"): ((0.5, 0.1), (0.6, 0.05)),
    ("resnet", "blur"): ((1.0, 0.1), (1.9, 0.05)),
    ("resnet", "ablur"): ((2.1, 0.1), (2.0, 0.15)),
    ("resnet", "cmod"): ((0.5, 0.1), (0.4, 0.05)),
}


def _write_csv(path, header, rows):
    rows = sorted(rows)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _to_png(path, array):
    """8-bit export, symmetric about zero with per-image max-abs scaling."""
    arr = np.asarray(array, dtype=float)
    peak = np.abs(arr).max()
    scaled = np.zeros_like(arr) if peak == 0 else arr / peak
    img = np.round((scaled + 1.0) * 127.5).astype(np.uint8)
    Image.fromarray(img).save(path)


def _load_image(path, mu):
    img = Image.open(path)
    arr = np.asarray(img, dtype=float) / 255.0
    if arr.ndim == 2:
        return arr
    rgb = np.moveaxis(arr[:, :, :3], -1, 0)
    return luminance(rgb, mu)


def _crop_to_multiple(x, mult):
    h = (x.shape[0] // mult) * mult
    w = (x.shape[1] // mult) * mult
    if h == 0 or w == 0:
        raise ValueError(f"image too small for a depth requiring multiples of {mult}")
    return x[:h, :w]


def _bank_for(config):
    pair = load_filter_pair("qshift10")
    return build_packet_bank(pair, config.J)


def cmd_filters(args):
    config = load_config(args.config)
    bank = _bank_for(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta_rows = []
    for i in range(bank.n_kernels):
        k = bank.kernels[i]
        _to_png(out / f"kernel_{i:03d}.png", np.hstack([k.real, k.imag]))
        _to_png(out / f"spectrum_{i:03d}.png",
                kernel_spectrum(k, args.gridsize))
        v, p, q, mirrored = bank.band_of(i)
        meta_rows.append([i, v, p, q, int(mirrored),
                          repr(bank.cell_centers[i, 0]),
                          repr(bank.cell_centers[i, 1]),
                          repr(bank.posx_fractions[i])])
    _write_csv(out / "bank.csv",
               ["kernel", "v", "p", "q", "mirrored", "xi1", "xi2",
                "posx_fraction"],
               meta_rows)
    kern_rows = []
    for i in range(bank.n_halfplane):
        k = bank.kernels[i]
        for r in range(k.shape[0]):
            for c in range(k.shape[1]):
                kern_rows.append([i, r, c, repr(k[r, c].real), repr(k[r, c].imag)])
    _write_csv(out / "kernels.csv", ["kernel", "row", "col", "re", "im"], kern_rows)
    print(f"wrote {bank.n_kernels} kernel files, {bank.n_kernels} spectrum "
          f"files, 2 CSV files to {out}")
    return 0


def cmd_decompose(args):
    config = load_config(args.config)
    bank = _bank_for(config)
    x = _load_image(args.image, config.mu)
    x = _crop_to_multiple(x, 2 ** config.J)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    packets = wpt_forward(x, bank.pair, args.combo, config.J)
    rows = []
    for i, pkt in enumerate(packets):
        _to_png(out / f"packet_{i:03d}.png", pkt)
        rows.append([i, repr(float((pkt ** 2).sum()))])
    _write_csv(out / "packets.csv", ["packet", "energy"], rows)
    print(f"wrote {len(packets)} packet files to {out}")
    return 0


def _max3x3_stride1(y):
    padded = np.pad(y, 1, mode="edge")
    from numpy.lib.stride_tricks import sliding_window_view
    return sliding_window_view(padded, (3, 3)).max(axis=(2, 3))


def _bench_ops(bank, kern_idx, probe, m):
    kern = bank.kernels[kern_idx]

    def op_rmax(s):
        return rmax_tone(kern.real, probe, (16, 16), (s, 0.0), m)

    def op_cmod(s):
        return cmod_tone(kern, probe, (16, 16), (s, 0.0), m)

    def op_blur(s):
        # max-blur pooling: stride-1 max window, then blur and subsample
        y = tone_conv(kern.real, probe, (32, 32), (s, 0.0), stride=m).real
        return blur_pool(_max3x3_stride1(relu(y)), 3)

    return {"rmax": (op_rmax, 2 * m), "cmod": (op_cmod, 2 * m),
            "blur": (op_blur, 2 * m)}


def _bench_image_ops(bank, kern_idx, patches, m):
    """Array-path operators over pre-extracted shifted patches."""
    kern = bank.kernels[kern_idx]

    def op_rmax(s):
        return rmax(patches[s][None], kern.real[None, None], m)[0]

    def op_cmod(s):
        return cmod(patches[s][None], kern[None, None], m)[0]

    def op_blur(s):
        y = conv_layer(patches[s][None], kern.real[None, None], m)[0]
        return blur_pool(_max3x3_stride1(relu(y)), 3)

    return {"rmax": (op_rmax, 2 * m), "cmod": (op_cmod, 2 * m),
            "blur": (op_blur, 2 * m)}


def cmd_shift_bench(args):
    config = load_config(args.config)
    bank = _bank_for(config)
    rng = np.random.default_rng(args.seed)
    shifts = [0.5 * t for t in range(0, 17)]
    kernel_ids = config.selected_packets[:args.kernels]
    curves = {}

    def add(op_name, report):
        acc = curves.setdefault((report.axis, op_name),
                                np.zeros(len(report.shifts)))
        acc += np.asarray(report.distances)

    n_cases = 0
    if args.images:
        axis = "horizontal"
        for path in args.images:
            img = _load_image(path, config.mu)
            patch = 8 * (min(img.shape) - 10) // 8
            patch = min(patch, 64)
            if patch < 4 * 2 ** config.J:
                raise ValueError(f"image {path} too small for benchmarking")
            probe = ShiftProbe(axis, tuple(shifts), patch)
            stack = extract_shifted_patches(img, probe)
            patches = dict(zip(shifts, stack))
            for kern_idx in kernel_ids:
                for name, (op, stride) in _bench_image_ops(
                        bank, kern_idx, patches, config.m).items():
                    add(name, feature_consistency(op, shifts, stride,
                                                  axis=axis,
                                                  operator_name=name))
                n_cases += 1
    else:
        bandwidth = np.pi / 2 ** config.J
        for kern_idx in kernel_ids:
            center = bank.cell_centers[kern_idx]
            probe = random_inband_tone(center, bandwidth, rng)
            for name, (op, stride) in _bench_ops(bank, kern_idx, probe,
                                                 config.m).items():
                add(name, feature_consistency(op, shifts, stride,
                                              operator_name=name, interior=2))
            n_cases += 1
    rows = []
    for (axis, name), acc in curves.items():
        for s, d in zip(shifts, acc / max(n_cases, 1)):
            rows.append([repr(float(s)), axis, name, repr(float(d))])
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "shift_bench.csv",
               ["shift_px", "axis", "operator", "distance"], rows)
    print(f"wrote {out / 'shift_bench.csv'} ({len(rows)} rows, "
          f"{n_cases} probe cases)")
    return 0


def cmd_verify(args):
    config = load_config(args.config)
    bank = _bank_for(config)
    tol = dict(args.tol or [])
    prop1_bound = float(tol.get("prop1", 1e-2))
    prop2_lo = float(tol.get("prop2_lo", 0.95))
    prop2_hi = float(tol.get("prop2_hi", 1.05))
    if not config.selected_packets:
        print("error: configuration selects no packets", file=sys.stderr)
        return CHECK_FAILED
    rng = np.random.default_rng(args.seed)
    if args.image:
        x = _load_image(args.image, config.mu)
        x = _crop_to_multiple(x, 2 ** config.J)
    else:
        x = pink_image(args.size, rng)
    boundary = "valid"
    m = config.m
    failures = 0
    print(f"{'kernel':>6} {'v':>2} {'p':>2} {'q':>2} {'prop1':>12} {'prop2':>10}  eligible")
    for i in sorted(config.selected_packets):
        v, p, q, _ = bank.band_of(i)
        k = bank.kernels[i]
        r1 = verify_prop1(k, x, m, boundary=boundary)
        r2 = verify_prop2(k, x, m, boundary=boundary)
        elig1 = prop1_eligible(bank, i)
        elig2 = prop2_eligible(bank, i)
        mark = ("1" if elig1 else "-") + ("2" if elig2 else "-")
        print(f"{i:>6} {v:>2} {p:>2} {q:>2} {r1:>12.3e} {r2:>10.4f}  {mark}")
        if elig1 and r1 > prop1_bound:
            failures += 1
            print(f"       ^ prop1 residual {r1:.3e} exceeds {prop1_bound}")
        if elig2 and not (prop2_lo <= r2 <= prop2_hi):
            failures += 1
            print(f"       ^ prop2 ratio {r2:.4f} outside [{prop2_lo}, {prop2_hi}]")
    # synthetic reference kernels: both identities to near machine precision
    n_syn = 128
    syn = synthetic_bandlimited_kernel(n_syn, m, rng)
    xs = rng.standard_normal((n_syn, n_syn)) + 1.0
    s1 = verify_prop1(syn, xs, m, boundary="periodic")
    s2 = verify_prop2(syn, xs, m, boundary="periodic")
    print(f"synthetic box-spectrum kernel: prop1={s1:.3e} prop2={s2:.6f}")
    if s1 > float(tol.get("prop1_synth", 1e-10)):
        failures += 1
    if not (0.999 <= s2 <= 1.001):
        failures += 1
    if failures:
        print(f"{failures} bound violation(s)", file=sys.stderr)
        return CHECK_FAILED
    print("all asserted response-identity bounds hold")
    return 0


def cmd_cost(args):
    rows = cost_table()
    out_rows = []
    failures = 0
    for row in rows:
        if args.arch != "both" and row["arch"] != args.arch:
            continue
        key = (row["arch"], row["method"])
        status = "ref"
        if key in COST_TARGETS:
            (f_target, f_tol), (m_target, m_tol) = COST_TARGETS[key]
            ok_f = abs(row["flops_ratio"] - f_target) <= f_tol
            ok_m = abs(row["mem_ratio"] - m_target) <= m_tol
            status = "ok" if (ok_f and ok_m) else "FAIL"
            if status == "FAIL":
                failures += 1
        out_rows.append([row["method"], row["arch"],
                         repr(row["flops_ratio"]), repr(row["mem_ratio"]), status])
        print(f"{row['method']:>6} {row['arch']:>8} "
              f"flops={row['flops_ratio']:.3f} mem={row['mem_ratio']:.3f} {status}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "cost_table.csv",
                   ["method", "arch", "flops_ratio", "mem_ratio", "status"],
                   out_rows)
    return CHECK_FAILED if failures else 0


def cmd_recon_check(args):
    pair = load_filter_pair("qshift10")
    rng = np.random.default_rng(args.seed)
    x = rng.standard_normal((args.size, args.size))
    worst = 0.0
    for J in (1, 2, 3):
        for combo in ("aa", "ab", "ba", "bb"):
            packets = wpt_forward(x, pair, combo, J)
            err = float(np.abs(wpt_inverse(packets, pair, combo, J) - x).max())
            worst = max(worst, err)
            print(f"J={J} combo={combo}: max reconstruction error {err:.3e}")
    if worst >= 1e-8:
        print(f"reconstruction error {worst:.3e} exceeds 1e-8", file=sys.stderr)
        return CHECK_FAILED
    print("perfect reconstruction holds for all tree combinations")
    return 0


def _tol_pair(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected NAME=VALUE")
    name, value = text.split("=", 1)
    return name, float(value)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="waveshift",
        description="Complex-wavelet antialiasing toolkit: filter banks, "
                    "shift benchmarks, response identities and cost tables.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filters", help="export packet kernels and spectra")
    p.add_argument("--config", default="wresnet")
    p.add_argument("--out", required=True)
    p.add_argument("--gridsize", type=int, default=128)
    p.set_defaults(func=cmd_filters)

    p = sub.add_parser("decompose", help="packet-decompose an image")
    p.add_argument("--config", default="wresnet")
    p.add_argument("--image", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--combo", default="aa", choices=["aa", "ab", "ba", "bb"])
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("shift-bench", help="shift-consistency curves")
    p.add_argument("--config", default="wresnet")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kernels", type=int, default=8)
    p.add_argument("--images", nargs="+", default=None,
                   help="benchmark on image patches instead of synthetic tones")
    p.set_defaults(func=cmd_shift_bench)

    p = sub.add_parser("verify", help="check the response identities")
    p.add_argument("--config", default="wresnet")
    p.add_argument("--image", default=None)
    p.add_argument("--size", type=int, default=384)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", action="append", type=_tol_pair, metavar="NAME=VAL")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cost", help="compute/memory ratio table")
    p.add_argument("--arch", default="both", choices=["both", "alexnet", "resnet"])
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("recon-check", help="perfect-reconstruction check")
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_recon_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
