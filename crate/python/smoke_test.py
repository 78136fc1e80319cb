#!/usr/bin/env python3
"""End-to-end exercise of the gff_lab extension module.

Builds a small d=2 basis, audits it, checks kernel values and the
spectral/quadrature pairing agreement, draws exact sphere averages, and
runs one deterministic verification suite. Run python/build_ext.sh first.
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import gff_lab


def close(a, b, tol, what):
    if abs(a - b) > tol:
        raise SystemExit(f"FAIL {what}: {a!r} vs {b!r} (tol {tol!r})")
    print(f"  ok  {what}: {a:.6g} vs {b:.6g}")


def main():
    print("suites:", ", ".join(gff_lab.suite_names()))

    lab = gff_lab.Lab(2, n_max=8, k_max=12, seed=11)
    print(f"basis d={lab.dim} N={lab.n_max} K={lab.k_max}, {lab.mode_count()} modes")
    a = lab.audit()
    if not a["passes"]:
        raise SystemExit(f"FAIL basis audit: {a}")
    print(f"  ok  audit passes (gram deviations {a['psi_gram_dev']:.1e}, "
          f"{a['mode_gram_dev']:.1e})")

    close(gff_lab.scaling_s(2, 0.25), -math.log(0.25), 1e-14, "scaling_s d=2")
    close(gff_lab.scaling_s(3, 0.25), 4.0, 1e-14, "scaling_s d=3")

    g_xy = gff_lab.green_unit_ball(2, [0.3, 0.0], [0.0, 0.4])
    g_yx = gff_lab.green_unit_ball(2, [0.0, 0.4], [0.3, 0.0])
    close(g_xy, g_yx, 1e-14, "kernel symmetry")
    shifted = gff_lab.green_ball([1.0, -2.0], 1.0, [1.3, -2.0], [1.0, -1.6])
    close(shifted, g_xy, 1e-14, "translation invariance")

    # truncated spectral pairing vs the kernel double integral
    quad = gff_lab.pair_quadrature(2, [0.0, 0.0], 0.2, [0.45, 0.0], 0.2)
    spec = lab.spectral_pairing([0.0, 0.0], 0.2, [0.45, 0.0], 0.2)
    close(spec, quad, 0.05 * abs(quad), "spectral vs quadrature pairing")

    # exact circle-average variance at r = 0.5 is ln 2
    ((var, se),) = gff_lab.sphere_average_variance(2, [0.5], 40000, seed=11)
    close(var, math.log(2.0), 4 * se, "circle-average variance at r=0.5")

    # sampled pairing variance against the truncated model
    rows = lab.sample_pairings([([0.0, 0.0], 0.2)], 40000)
    vals = [r[0] for r in rows]
    mean = sum(vals) / len(vals)
    var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
    model = lab.spectral_pairing([0.0, 0.0], 0.2, [0.0, 0.0], 0.2)
    close(var, model, 5 * model * math.sqrt(2.0 / len(vals)), "sampled variance")

    # one deterministic suite end to end
    failed = [r["test"] for r in lab.run_suite("bounds", 1000) if not r["passed"]]
    if failed:
        raise SystemExit(f"FAIL bounds suite rows: {failed}")
    print("  ok  bounds suite rows all pass")

    print("smoke test passed")


if __name__ == "__main__":
    main()
