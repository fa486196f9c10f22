import random

import pytest

from nilqx.errors import HypothesisError, InputError, SearchExhausted
from nilqx.group import (abelian, conjugate, heisenberg, heisenberg_torsion, power,
                         random_element, random_poly, random_presentation)
from nilqx.poly import X, PrimePoly
from nilqx.separability import (Check, conjugacy_test, conjugacy_witness, conjugate_in_quotient,
                                default_pool, power_coset_member, replay_check,
                                residual_witness, thm2_demo, thm3_witness, thm4_witness,
                                verify_witness)
from nilqx.subgroup import canonicalize, is_isolated, member

from oracles import heis_conjugate, heis_conjugate_mod


def E(G, a, c):
    return G.element(a, c)


def gp(G, *gens):
    return canonicalize(list(gens), G)


PX = PrimePoly.of(X)
PX1 = PrimePoly.of(X - 1)


def test_conjugacy_examples(heis):
    assert conjugacy_test(E(heis, [1, 1], [0]), E(heis, [1, 1], [1]))
    assert not conjugacy_test(E(heis, [0, X], [0]), E(heis, [0, X], [1]))
    g = E(heis, [X, 2], [3])
    assert conjugacy_test(g, g)


def test_conjugacy_against_heis_oracle(heis):
    rng = random.Random(31)
    for _ in range(200):
        g = random_element(rng, heis)
        if rng.random() < 0.5:
            h = E(heis, g.a, [g.c[0] + random_poly(rng, 3)])
        else:
            h = random_element(rng, heis)
        assert conjugacy_test(g, h) == heis_conjugate(g, h)


def test_conjugacy_of_conjugates():
    rng = random.Random(32)
    G = random_presentation(rng)
    for _ in range(50):
        g, x = random_element(rng, G), random_element(rng, G)
        h = conjugate(g, x)
        assert conjugacy_test(g, h) and conjugacy_test(h, g)
        k = conjugate(h, random_element(rng, G))
        assert conjugacy_test(g, k)


def test_conjugacy_survives_quotients(heis):
    rng = random.Random(33)
    for _ in range(20):
        g, x = random_element(rng, heis), random_element(rng, heis)
        h = conjugate(g, x)
        for pi in default_pool():
            for i in (1, 2, 3):
                assert conjugate_in_quotient(g, h, pi, i)


def test_quotient_conjugacy_matches_residue_oracle(heis):
    rng = random.Random(34)
    for _ in range(60):
        g = random_element(rng, heis)
        h = E(heis, [v + X * random_poly(rng, 1) * rng.choice([0, 1]) for v in g.a],
              [random_poly(rng, 2)])
        for pi in (X, X - 1):
            for k in (1, 2):
                assert conjugate_in_quotient(g, h, PrimePoly.of(pi), k) == \
                    heis_conjugate_mod(g, h, pi, k)


def test_conjugacy_witness_examples(heis):
    a, b = heis.gen(1), heis.gen(2)
    bx = power(b, X)
    w = conjugacy_witness(bx, E(heis, [0, X], [1]))
    assert (w.prime, w.power) == (PX, 1)
    w = conjugacy_witness(a, b)
    assert (w.prime, w.power) == (PX, 1)
    assert verify_witness(w)
    with pytest.raises(HypothesisError) as exc:
        conjugacy_witness(E(heis, [1, 1], [0]), E(heis, [1, 1], [1]))
    assert exc.value.code == "inputs-conjugate"


def test_conjugacy_witness_uses_factor_primes(heis):
    # c-difference 1 against ideal (x^2 - 2): only x^2 - 2 separates
    g = E(heis, [X ** 2 - 2, 0], [0])
    h = E(heis, [X ** 2 - 2, 0], [1])
    w = conjugacy_witness(g, h)
    assert w.prime == PrimePoly.of(X ** 2 - 2)
    assert verify_witness(w)


def test_conjugacy_witness_search_exhausted(heis):
    g = E(heis, [X ** 2 - 2, 0], [0])
    h = E(heis, [X ** 2 - 2, 0], [1])
    with pytest.raises(SearchExhausted) as exc:
        conjugacy_witness(g, h, prime_pool=[PX], max_power=2)
    assert exc.value.exit_status == 3


def test_power_coset_member_examples(heis):
    a, b = heis.gen(1), heis.gen(2)
    H = gp(heis, b)
    assert not power_coset_member(a, PX, 1, H)
    assert power_coset_member(power(a, X), PX, 1, H)
    assert power_coset_member(E(heis, [0, 1], [X]), PX, 1, H)


def test_coset_chain_monotone(heis):
    rng = random.Random(35)
    H = gp(heis, heis.gen(2))
    for _ in range(30):
        g = random_element(rng, heis)
        flags = [power_coset_member(g, PX, i, H) for i in range(1, 5)]
        for earlier, later in zip(flags, flags[1:]):
            assert later <= earlier


def test_thm3_examples(heis):
    a, b, c = heis.gen(1), heis.gen(2), heis.central_gen(1)
    H = gp(heis, b)
    w = thm3_witness(a, H, PX)
    assert w.power == 1 and w.kind == "Thm3"
    w = thm3_witness(power(c, X ** 2), H, PX)
    assert w.power == 3
    assert [ch.result for ch in w.transcript] == [False, True, True, False]
    assert verify_witness(w)
    with pytest.raises(HypothesisError) as exc:
        thm3_witness(b, H, PX)
    assert exc.value.code == "g-in-H"


def test_thm3_hypotheses(heis):
    with pytest.raises(HypothesisError) as exc:
        thm3_witness(heis.gen(2), gp(heis, power(heis.gen(1), X)), PX)
    assert exc.value.code == "not-isolated"
    T = heisenberg_torsion(PX, 1)
    with pytest.raises(HypothesisError) as exc:
        thm3_witness(T.gen(1), gp(T, T.gen(2)), PX)
    assert exc.value.code == "not-torsion-free"
    with pytest.raises(SearchExhausted) as exc:
        thm3_witness(power(heis.central_gen(1), X ** 5), gp(heis, heis.gen(2)), PX, max_power=3)
    assert exc.value.code == "bound-exceeded"


def test_thm3_minimality(heis):
    rng = random.Random(36)
    H = gp(heis, heis.gen(2))
    for _ in range(20):
        g = random_element(rng, heis)
        if member(g, H):
            continue
        w = thm3_witness(g, H, PX)
        for i in range(1, w.power):
            assert power_coset_member(g, PX, i, H)
        assert not power_coset_member(g, PX, w.power, H)


def test_thm4_examples(heis):
    a, b = heis.gen(1), heis.gen(2)
    w = thm4_witness(a, gp(heis, power(b, X)), PX)
    assert w.power == 1 and w.kind == "Thm4"
    assert verify_witness(w)
    with pytest.raises(HypothesisError) as exc:
        thm4_witness(b, gp(heis, power(b, X)), PX)
    assert exc.value.code == "hypothesis-violated"
    assert thm4_witness(a, gp(heis, b), PX).power == thm3_witness(a, gp(heis, b), PX).power


def test_thm2_examples(heis):
    a, b = heis.gen(1), heis.gen(2)
    d = thm2_demo(heis, PX1, b, a)
    assert d.alpha_prime == PX and d.n == 1
    assert d.u == E(heis, [0, X], [0]) and d.v == E(heis, [0, X], [1])
    assert d.transcript[0].result is False
    assert all(c.result for c in d.transcript[1:])
    assert verify_witness(d)
    d = thm2_demo(heis, PX, b, a)
    assert d.alpha_prime == PX1
    assert d.u == E(heis, [0, X - 1], [0]) and d.v == E(heis, [0, X - 1], [1])


def test_thm2_errors(heis):
    with pytest.raises(HypothesisError) as exc:
        G = abelian(1)
        thm2_demo(G, PX, G.central_gen(1), G.central_gen(1))
    assert exc.value.code == "abelian-input"
    with pytest.raises(HypothesisError) as exc:
        thm2_demo(heis, PX, heis.gen(1), heis.gen(1))
    assert exc.value.code == "z1-trivial"


def test_thm2_random_pairs():
    rng = random.Random(37)
    G = random_presentation(rng)
    for _ in range(5):
        z2, h = random_element(rng, G, 1), random_element(rng, G, 1)
        try:
            d = thm2_demo(G, PX1, z2, h, max_power=3)
        except HypothesisError:
            continue
        assert verify_witness(d)


def test_residual_examples(heis):
    assert residual_witness(heis.gen(1), PX).power == 1
    assert residual_witness(power(heis.gen(1), X ** 2), PX).power == 3
    with pytest.raises(InputError) as exc:
        residual_witness(heis.identity, PX)
    assert exc.value.code == "identity-input"


def test_tampered_transcript_fails(heis):
    w = thm3_witness(heis.gen(1), gp(heis, heis.gen(2)), PX)
    bad = Check(w.transcript[-1].op, w.transcript[-1].power, w.transcript[-1].args, True)
    assert replay_check(bad, w.prime) != bad.result


def test_witness_requires_exact():
    from nilqx.group import quotient_mod_prime_power
    Q, _ = quotient_mod_prime_power(heisenberg(), PX, 1)
    with pytest.raises(InputError) as exc:
        residual_witness(Q.gen(1), PX)
    assert exc.value.code == "wrong-ring"


def test_isolated_random_thm3(heis):
    rng = random.Random(38)
    done = 0
    while done < 10:
        H = canonicalize([random_element(rng, heis, 1)], heis)
        if not is_isolated(H):
            continue
        g = random_element(rng, heis, 1)
        if member(g, H):
            continue
        w = thm3_witness(g, H, PrimePoly.of(rng.choice([X, X - 1, X + 1])))
        assert 1 <= w.power <= 8 and verify_witness(w)
        done += 1
