"""
The least favorable prior
=========================

For each prior ``c`` we take the Bayes rule and compute its Bayes risk. The
prior that makes this largest is least favorable. With three experts of
accuracy 0.8 the curve is flat between ``c = 0.2`` and ``c = 0.8`` (the
Bayes rule is the majority vote throughout, and its risk is the same under
both states) and drops off outside; ``c = 1/2`` sits in the middle.

Pass a path as the first argument to save the curve as CSV.
"""

import sys

from crowdrules import Known, least_favorable_scan

scan = least_favorable_scan(Known((0.8, 0.8, 0.8)))
print(f"c* = {scan.c_star}, peak Bayes risk = {scan.peak:.6f}, plateau = {scan.plateau}")
for c, r in zip(scan.grid[::10], scan.curve[::10]):
    print(f"  c={c:.2f}  {'#' * int(r * 400)} {r:.4f}")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write("c,bayes_risk\n")
        fh.writelines(f"{c!r},{r!r}\n" for c, r in zip(scan.grid, scan.curve))
