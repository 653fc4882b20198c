"""List field pairs (q, q') passing the subgroup criterion and the networks separating them."""

from __future__ import annotations

import argparse

from fieldnet.arith import prime_powers
from fieldnet.criterion import criterion_search, theorem3_network


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-q", type=int, default=64)
    ap.add_argument("--max-qprime", type=int, default=128)
    ap.add_argument("--larger-only", action="store_true", help="only pairs with q < q'")
    args = ap.parse_args()
    for q in prime_powers(4, args.max_q + 1):
        for qq in prime_powers(3, args.max_qprime + 1):
            if args.larger_only and qq <= q:
                continue
            res = criterion_search(q, qq)
            for d in res.valid_orders:
                if q - d - 1 < 2:
                    continue
                found = theorem3_network(q, qq, d)
                tag = res.shortcut or "-"
                print(f"q={q:<4} q'={qq:<4} |G|={d:<3} omega={found.omega:<3} d={list(found.d_tuple)} shortcut={tag}")


if __name__ == "__main__":
    main()
