"""Field ranges and verdicts for the worked network instances."""

from __future__ import annotations

from fieldnet.netmodel import NetworkParams
from fieldnet.solvability import field_range, solvable_closed_form

INSTANCES = [
    (3, (3, 3, 3)),
    (3, (5, 5, 10)),
    (4, (2, 2, 2, 4)),
    (3, (3, 6, 9)),
    (3, (2, 2, 2)),
    (4, (2, 2, 2, 2)),
    (5, (2, 2, 2, 2, 2)),
    (7, (5, 5, 5, 5, 5, 5, 10)),
]


def main() -> None:
    print(f"{'omega':>5}  {'d':<24} {'q_min':>6} {'q*_max':>7}  witness divisor at q_min")
    for omega, d in INSTANCES:
        params = NetworkParams(omega, d)
        rng = field_range(params)
        report = solvable_closed_form(params, rng.q_min)
        print(f"{omega:>5}  {str(d):<24} {rng.q_min:>6} {rng.q_star_max:>7}  {report.witness_divisor}")


if __name__ == "__main__":
    main()
