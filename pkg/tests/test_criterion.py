from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fieldnet.arith import divisors, is_prime, prime_powers
from fieldnet.criterion import (
    SHORTCUT_PRIME_PLUS_ONE,
    cross_char_plan,
    criterion_search,
    discover_cross_char,
    lemma2_search,
    omega_sharp_bound,
    omega_sharp_raw,
    omega_weak_bound,
    satisfies_star,
    theorem3_network,
    theorem4_instance,
)
from fieldnet.solvability import q_min, solvable_closed_form

SMALL_PP = list(prime_powers(3, 130))


def test_star_examples():
    assert satisfies_star(7, 8, 3) and satisfies_star(7, 8, 2)
    assert satisfies_star(16, 17, 5)
    assert not satisfies_star(16, 17, 3)
    for bad in (1, 6, 4):
        with pytest.raises(ValueError):
            satisfies_star(7, 8, bad)


def test_criterion_search_examples():
    r = criterion_search(7, 8)
    assert r.valid_orders == (2, 3) and r.shortcut == SHORTCUT_PRIME_PLUS_ONE and r.satisfied
    r = criterion_search(16, 17)
    assert r.valid_orders == (5,) and r.shortcut is None
    r = criterion_search(8, 7)
    assert r.valid_orders == () and not r.satisfied


@given(st.sampled_from(SMALL_PP), st.sampled_from(SMALL_PP))
def test_star_matches_definition(q, qq):
    res = criterion_search(q, qq)  # also cross-checks the shortcut internally
    proper = [e for e in divisors(qq - 1) if e < qq - 1]
    for d in divisors(q - 1):
        if not 1 < d < q - 1:
            continue
        direct = all(d > e or q - d > qq - e for e in proper)
        assert (d in res.valid_orders) == direct


@given(st.sampled_from(SMALL_PP), st.sampled_from(SMALL_PP))
def test_shortcut_hypotheses_imply_all_orders(q, qq):
    if q - 1 < 4 or is_prime(q - 1):
        return
    if qq < q or is_prime(qq - 1):
        res = criterion_search(q, qq)
        assert res.valid_orders == tuple(d for d in divisors(q - 1) if 1 < d < q - 1)


@given(st.sampled_from(SMALL_PP), st.sampled_from(SMALL_PP))
def test_disjuncts_exclusive_for_larger_field(q, qq):
    if qq <= q:
        return
    for d in criterion_search(q, qq).valid_orders:
        for e in divisors(qq - 1):
            if e < qq - 1:
                assert not (d > e and q - d > qq - e)


def test_omega_bounds():
    assert omega_sharp_bound(7, 8, 2) == 4
    assert omega_sharp_bound(7, 8, 3) == 3
    assert omega_sharp_bound(16, 17, 5) == 3
    assert omega_sharp_raw(16, 17, 5) == Fraction(5, 2)
    assert omega_weak_bound(16, 17, 5) == 7
    assert omega_weak_bound(7, 8, 3) == 3
    with pytest.raises(ValueError):
        omega_sharp_bound(16, 17, 3)


@given(st.sampled_from(SMALL_PP), st.sampled_from(SMALL_PP))
def test_weak_bound_dominates_sharp(q, qq):
    for d in criterion_search(q, qq).valid_orders:
        assert omega_weak_bound(q, qq, d) >= omega_sharp_bound(q, qq, d)


@pytest.mark.parametrize(
    "pair, expected",
    [((7, 8, 2), (4, (2, 2, 2, 4))), ((7, 8, 3), (3, (3, 3, 3))), ((16, 17, 5), (3, (5, 5, 10)))],
)
def test_theorem3_examples(pair, expected):
    found = theorem3_network(*pair)
    assert (found.omega, found.d_tuple) == expected
    assert found.verified
    assert found.to_json() == {
        "schema": 1,
        "q": pair[0],
        "q_prime": pair[1],
        "d": pair[2],
        "omega": expected[0],
        "d_tuple": list(expected[1]),
        "verified": True,
    }


def test_every_small_pair_is_realized():
    """Each criterion pair yields a network solvable at q, not at q', with q_min = q."""
    count = 0
    for q in prime_powers(4, 40):
        for qq in prime_powers(3, 70):
            for d in criterion_search(q, qq).valid_orders:
                if q - d - 1 < 2:
                    continue
                found = theorem3_network(q, qq, d)
                p = found.params
                assert solvable_closed_form(p, q).solvable
                assert not solvable_closed_form(p, qq).solvable
                assert q_min(p) == q
                count += 1
    assert count > 20


def test_theorem3_rejects_bad_order():
    with pytest.raises(ValueError):
        theorem3_network(16, 17, 3)


def test_theorem4():
    t2 = theorem4_instance(2)
    assert (t2.q, t2.q_prime, t2.d, t2.omega) == (16, 32, 5, 7)
    assert t2.d_tuple == (5, 5, 5, 5, 5, 5, 10)
    assert t2.q_star_max == 32
    assert t2.notes
    t3 = theorem4_instance(3)
    assert (t3.q, t3.q_prime, t3.d, t3.omega) == (64, 128, 21, 6)
    assert t3.d_tuple == (21,) * 5 + (42,)
    assert t3.q_prime - t3.q == 64
    assert not t3.notes
    with pytest.raises(ValueError):
        theorem4_instance(1)


def test_lemma2():
    assert (2, 1) in lemma2_search(2, 3, 1, 0, 0, 1)
    with pytest.raises(ValueError):
        lemma2_search(2, 3, 0, 0, 0, 1)
    with pytest.raises(ValueError):
        lemma2_search(4, 6, 1, 0, 0, 1)


@given(
    st.sampled_from([(2, 3), (3, 2), (2, 5), (5, 3), (4, 9)]),
    st.fractions(min_value=-3, max_value=3, max_denominator=5),
    st.fractions(min_value=Fraction(6, 5), max_value=4, max_denominator=5),
)
def test_lemma2_wide_interval_hits_every_kprime(pair, c2, width):
    n1, n2 = pair
    c1 = c2 + width
    # an open interval longer than 1 always holds an integer; from k' = 5 on
    # (c2 >= -3) that integer is positive, so no k' is skipped
    hits = lemma2_search(n1, n2, c1, c2, 0, 10**6, max_kprime=30)
    assert {kp for _, kp in hits} >= set(range(5, 31))


@given(st.sampled_from([(2, 3), (3, 2), (2, 7)]), st.integers(0, 5))
def test_lemma2_hits_are_exact(pair, delta):
    import math

    n1, n2 = pair
    for k, kp in lemma2_search(n1, n2, 1, 0, delta, 10, max_kprime=60):
        # integer restatement: n1^(k-1) < n2^kp and n1^k > n2^kp + delta
        assert n1 ** (k - 1) < n2**kp
        assert n1**k > n2**kp + delta
        assert math.log(n2**kp, n1) + 1 > k - 1e-9


def test_cross_char_plans():
    assert cross_char_plan(2, 3).to_json() == {"p": 2, "p_prime": 3, "j": 2, "base": 4, "d": 3, "a": 1}
    assert cross_char_plan(3, 2).base == 9
    assert cross_char_plan(2, 5).a == 2
    with pytest.raises(ValueError):
        cross_char_plan(3, 3)
    with pytest.raises(ValueError):
        cross_char_plan(4, 3)


@pytest.mark.parametrize("pair, first", [((2, 3), (64, 81, 21)), ((3, 2), (9, 32, 2)), ((5, 2), (25, 32, 6))])
def test_cross_char_first_hit(pair, first):
    hits = discover_cross_char(*pair, max_bits=64, max_hits=1)
    h = hits[0]
    assert (h.q, h.q_prime, h.d) == first
    assert h.verified
    assert solvable_closed_form(h.params, h.q).solvable
    assert not solvable_closed_form(h.params, h.q_prime).solvable
    assert h.q_prime % pair[1] == 0 and h.q % pair[0] == 0


def test_cross_char_small_budget_returns_empty():
    assert discover_cross_char(2, 3, max_bits=5) == []
