#!/usr/bin/env python3
"""Reproduce every bundled figure preset and run its trend checks.

Each figure is a parameter sweep over one of the shipped preset configs
(CSV + SVG per figure); the trend checks are the scale-free ratios and
orderings the presets are calibrated to reproduce. Equivalent CLI:

    aoci figure 5 --out demos/output
"""

import time

from aoci.figures import FIGURE_NUMBERS, run_figure

for number in FIGURE_NUMBERS:
    t0 = time.perf_counter()
    checks = run_figure(number, "demos/output", mc_n=10_000, seed=1234)
    elapsed = time.perf_counter() - t0
    print(f"figure {number} ({elapsed:.1f} s): fig{number}.csv, fig{number}.svg")
    for check in checks:
        print(f"  {'PASS' if check.passed else 'FAIL'} - {check.name} ({check.detail})")
    print()
