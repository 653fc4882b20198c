"""Built network sizes next to the closed-form size formulas."""

from __future__ import annotations

import argparse

from fieldnet.netmodel import (
    build_combination_network,
    build_prescribed_qmin_network,
    size_stats,
    table_sizes,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="*", default=[5, 7, 8, 9, 11, 13])
    args = ap.parse_args()
    print(f"{'q':>3}  {'network':<20} {'receivers':>15} {'nodes':>11} {'edges':>11}   (built/formula)")
    for q in args.q:
        formulas = table_sizes(q)
        rows = [
            ("prescribed", "prescribed", build_prescribed_qmin_network(q)),
            ("prescribed-complete", "prescribed", build_prescribed_qmin_network(q, complete=True)),
            ("combination", "combination", build_combination_network(q + 1)),
            ("extended", "extended", build_combination_network(q + 1, extended=True)),
        ]
        for name, key, net in rows:
            s, f = size_stats(net), formulas[key]
            cells = [f"{getattr(s, k)}/{getattr(f, k)}" for k in ("receivers", "nodes", "edges")]
            print(f"{q:>3}  {name:<20} {cells[0]:>15} {cells[1]:>11} {cells[2]:>11}")


if __name__ == "__main__":
    main()
