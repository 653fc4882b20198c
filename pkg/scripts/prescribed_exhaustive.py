"""Exhaustive linear solvability of the prescribed-minimum-field network over nearby fields.

Compares the receiver list sized by the closed-form count with the full list.
"""

from __future__ import annotations

import argparse
import time

from fieldnet.arith import prime_powers
from fieldnet.gf import construct_field
from fieldnet.lnc import exhaustive_solvable
from fieldnet.netmodel import build_prescribed_qmin_network


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="*", default=[5, 7, 8])
    args = ap.parse_args()
    for q in args.q:
        fields = [f for f in prime_powers(2, q + 1) if f >= 3][-3:]
        for complete in (False, True):
            net = build_prescribed_qmin_network(q, complete=complete)
            start = time.perf_counter()
            verdicts = {f: exhaustive_solvable(net, construct_field(f)) is not None for f in fields}
            smallest = min((f for f, ok in verdicts.items() if ok), default=None)
            label = "complete" if complete else "default"
            print(
                f"q={q:<3} {label:<9} receivers={len(net.receivers):<4} "
                + " ".join(f"GF({f})={'yes' if ok else 'no'}" for f, ok in verdicts.items())
                + f"  smallest solvable among these: {smallest}  ({time.perf_counter() - start:.1f}s)"
            )


if __name__ == "__main__":
    main()
