"""Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic throughout.

Run with ``python3 -m pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import random
import time

from nilqx.errors import SearchExhausted
from nilqx.group import (abelian, conjugate, free_class2, hall_petresco_check,
                         heisenberg, heisenberg_ext, heisenberg_torsion, multiply, power,
                         power_root_of_kernel, quotient_mod_prime_power, random_element,
                         random_poly, random_presentation, torsion_free_rank)
from nilqx.linalg import Mat, howell_nf, smith_nf
from nilqx.poly import EXACT, ONE, X, ZERO, PrimePoly, RingTag
from nilqx.separability import (conjugacy_test, conjugacy_witness, power_coset_member,
                                thm2_demo, thm3_witness, verify_witness)
from nilqx.subgroup import (canonicalize, extract_root, is_isolated, isolator,
                            max_root_exponent, member, subgroup_rank)

from oracles import heis_conjugate, heis_conjugate_mod

PX, PX1 = PrimePoly.of(X), PrimePoly.of(X - 1)


def report(number, ok, detail, capsys=None):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    assert ok, line


def _failures(checks):
    return sum(1 for ok in checks if not ok)


# -- criterion 1 --------------------------------------------------------------


def axiom_failures(G, rng, count):
    bad = 0
    for _ in range(count):
        g, h, k = (random_element(rng, G, max_degree=4) for _ in range(3))
        al, be = random_poly(rng, 4), random_poly(rng, 4)
        checks = [
            power(g, ONE) == g,
            multiply(power(g, al), power(g, be)) == power(g, al + be),
            power(power(g, al), be) == power(g, al * be),
            power(conjugate(g, h), al) == conjugate(power(g, al), h),
            multiply(multiply(g, h), k) == multiply(g, multiply(h, k)),
            hall_petresco_check(g, h, al),
        ]
        bad += _failures(checks)
    return bad


def criterion_1():
    rng = random.Random(101)
    groups = [heisenberg(), random_presentation(rng, 3, 2, 2), random_presentation(rng, 4, 3, 2)]
    start = time.perf_counter()
    bad = sum(axiom_failures(G, rng, 1000) for G in groups)
    elapsed = time.perf_counter() - start
    return bad == 0 and elapsed < 30, f"3 x 1000 triples, {bad} failures, {elapsed:.1f}s"


# -- criterion 2 --------------------------------------------------------------


def criterion_2():
    rng = random.Random(102)
    G = heisenberg()
    bad = 0
    for pi in (X, X - 1, X ** 2 + 1):
        prime = PrimePoly.of(pi)
        for i in (1, 2, 3):
            mod = pi ** i
            _, proj = quotient_mod_prime_power(G, prime, i)
            for _ in range(100):
                g = random_element(rng, G, max_degree=3)
                bad += not proj(power(g, mod)).is_identity()
            for _ in range(100):
                u = [random_poly(rng, 3) for _ in range(G.n)]
                v = [random_poly(rng, 3) for _ in range(G.m)]
                k = G.element([mod * w for w in u], [mod * w for w in v])
                bad += not proj(k).is_identity()
                bad += power(power_root_of_kernel(k, prime, i), mod) != k
    return bad == 0, f"9 (pi, i) cases x 200 samples, {bad} failures"


# -- criterion 3 --------------------------------------------------------------


def _minimal(w, g, H):
    for i in range(1, w.power):
        if not power_coset_member(g, w.prime, i, H):
            return False
    return not power_coset_member(g, w.prime, w.power, H)


def criterion_3():
    G = heisenberg()
    a, b, c = G.gen(1), G.gen(2), G.central_gen(1)
    H = canonicalize([b], G)
    fixed = [thm3_witness(a, H, PX).power == 1,
             thm3_witness(power(c, X ** 2), H, PX).power == 3]
    rng = random.Random(103)
    done = bad = 0
    while done < 50:
        gens = [power(random_element(rng, G, 2), rng.choice([ONE, X, X - 1, X ** 2]))
                for _ in range(rng.randint(1, 2))]
        H = isolator(canonicalize(gens, G))
        g = random_element(rng, G, 2)
        if member(g, H):
            continue
        pi = PrimePoly.of(rng.choice([X, X - 1, X + 1, X ** 2 + 1]))
        w = thm3_witness(g, H, pi)
        bad += not (is_isolated(H) and 1 <= w.power <= 8 and verify_witness(w)
                    and _minimal(w, g, H))
        done += 1
    ok = all(fixed) and bad == 0
    return ok, f"examples give 1 and 3: {all(fixed)}, 50 random instances, {bad} failures"


# -- criterion 4 --------------------------------------------------------------


def criterion_4():
    G = heisenberg()
    start = time.perf_counter()
    d = thm2_demo(G, PX1, G.gen(2), G.gen(1), max_power=5)
    elapsed = time.perf_counter() - start
    pair = d.u == G.element([0, X], [0]) and d.v == G.element([0, X], [1])
    apart = not conjugacy_test(d.u, d.v)
    joined = [conjugate_mod(d.u, d.v, X - 1, m) for m in range(1, 6)]
    ok = pair and apart and all(joined) and verify_witness(d) and elapsed < 5
    return ok, f"pair (0,x;0)/(0,x;1): {pair}, m = 1..5 conjugate: {all(joined)}, {elapsed:.2f}s"


def conjugate_mod(g, h, pi, m):
    return heis_conjugate_mod(g, h, pi, m)


# -- criterion 5 --------------------------------------------------------------


def criterion_5():
    rng = random.Random(105)
    G = heisenberg()
    done = bad = 0
    while done < 50:
        g = random_element(rng, G, 2)
        if rng.random() < 0.5:
            h = G.element(g.a, [g.c[0] + random_poly(rng, 2, allow_zero=False)])
        else:
            h = random_element(rng, G, 2)
        if heis_conjugate(g, h):
            continue
        try:
            w = conjugacy_witness(g, h)
        except SearchExhausted:
            bad += 1
            done += 1
            continue
        pi = w.prime.poly
        for check in w.transcript:
            u, v = check.args
            expect = heis_conjugate(u, v) if check.power == 0 else \
                heis_conjugate_mod(u, v, pi, check.power)
            bad += check.result != expect
        bad += w.transcript[-1].result or not verify_witness(w)
        done += 1
    return bad == 0, f"50 non-conjugate pairs, {bad} failures"


# -- criterion 6 --------------------------------------------------------------


def _snf_ok(A):
    res = smith_nf(A)
    U, D, V = res.U, res.D, res.V
    if (U @ A) @ V != D:
        return False
    r, c = A.shape
    if any(D[i][j] for i in range(r) for j in range(c) if i != j):
        return False
    diag = [D[i][i] for i in range(min(r, c))]
    nz = [d for d in diag if d]
    if diag[:len(nz)] != nz or not all(d.lc == 1 for d in nz):
        return False
    if not all(d1.divides(d2) for d1, d2 in zip(nz, nz[1:])):
        return False
    return U.det().degree == 0 and V.det().degree == 0


def _random_mat(rng, r, c, deg, tag):
    return Mat.from_rows([[random_poly(rng, deg) for _ in range(c)] for _ in range(r)], c, tag)


def _random_unimodular(rng, n, tag):
    U = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for _ in range(6):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        q = random_poly(rng, 1)
        U[i] = [x + q * y for x, y in zip(U[i], U[j])]
    if n > 1:
        i, j = rng.sample(range(n), 2)
        U[i], U[j] = U[j], U[i]
    scale = rng.choice([2, -1, 3])
    U[0] = [e * scale for e in U[0]]
    return Mat.from_rows(U, n, tag)


def criterion_6():
    rng = random.Random(106)
    snf_bad = sum(not _snf_ok(_random_mat(rng, rng.randint(1, 4), rng.randint(1, 4), 3,
                                          EXACT))
                  for _ in range(200))
    howell_bad = 0
    cases = [(X, 2), (X - 1, 3), (X ** 2 + 1, 2), (X + 1, 1)]
    for n in range(200):
        pi, i = cases[n % len(cases)]
        tag = RingTag.residue(PrimePoly.of(pi), i)
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        A = _random_mat(rng, r, c, 3, tag)
        U = _random_unimodular(rng, r, EXACT)
        howell_bad += U.det().degree != 0
        B = Mat.from_rows(U.entries, r, tag) @ A
        extra = [tag.modulus * random_poly(rng, 1) + e for e in B.entries[0]]
        B = Mat.from_rows(list(B.entries) + [extra], c, tag)
        howell_bad += howell_nf(A) != howell_nf(B)
    ok = snf_bad == 0 and howell_bad == 0
    return ok, f"200 SNF, {snf_bad} failures; 200 Howell pairs, {howell_bad} failures"


# -- criterion 7 --------------------------------------------------------------


def criterion_7():
    rng = random.Random(107)
    G = heisenberg()
    bad = conj = 0
    for n in range(500):
        g = random_element(rng, G, 3)
        if n % 3 == 0:
            h = conjugate(g, random_element(rng, G, 3))
        elif n % 3 == 1:
            h = G.element(g.a, [g.c[0] + random_poly(rng, 3)])
        else:
            h = random_element(rng, G, 3)
        expect = heis_conjugate(g, h)
        conj += expect
        bad += conjugacy_test(g, h) != expect
    return bad == 0, f"500 pairs ({conj} conjugate), {bad} disagreements"


# -- criterion 8 --------------------------------------------------------------


def criterion_8():
    rng = random.Random(108)
    groups = [heisenberg(), heisenberg_ext(), free_class2(3), random_presentation(rng)]
    bad = 0
    for n in range(200):
        G = groups[n % len(groups)]
        g = random_element(rng, G, 3)
        lam = random_poly(rng, 3, allow_zero=False)
        bad += extract_root(power(g, lam), lam).root != g
    G = heisenberg()
    c = G.central_gen(1)
    exps = [max_root_exponent(power(c, X ** k), X) for k in range(7)]
    ok = bad == 0 and exps == list(range(7))
    return ok, f"200 roots, {bad} failures; exponents for k = 0..6: {exps}"


# -- criterion 9 --------------------------------------------------------------


def bundled_presets():
    return [heisenberg(), heisenberg_ext(), abelian(1), abelian(3), free_class2(2),
            free_class2(3), free_class2(4), heisenberg_torsion(PX, 1),
            heisenberg_torsion(PrimePoly.of(X ** 2 + 1), 2)]


def criterion_9():
    rng = random.Random(109)
    groups = [heisenberg(), heisenberg_ext(), free_class2(3), random_presentation(rng)]
    bad = 0
    for n in range(100):
        G = groups[n % len(groups)]
        gens = [power(random_element(rng, G, 1), rng.choice([ONE, X, X - 1, X ** 2]))
                for _ in range(rng.randint(1, 3))]
        H = canonicalize(gens, G)
        bad += subgroup_rank(H) > torsion_free_rank(G)
        bad += subgroup_rank(H) > G.n + G.m
    add_bad = 0
    presets = bundled_presets()
    for G in presets:
        central = canonicalize([G.central_gen(k + 1) for k in range(G.m)], G)
        add_bad += torsion_free_rank(G) != G.n + subgroup_rank(central)
    ok = bad == 0 and add_bad == 0
    return ok, f"100 subgroups, {bad} failures; additivity on {len(presets)} presets, " \
               f"{add_bad} failures"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9]


def test_criterion_1_axioms(capsys):
    report(1, *criterion_1(), capsys)


def test_criterion_2_kernel_identity(capsys):
    report(2, *criterion_2(), capsys)


def test_criterion_3_isolated_subgroup_witnesses(capsys):
    report(3, *criterion_3(), capsys)


def test_criterion_4_non_separable_pair(capsys):
    report(4, *criterion_4(), capsys)


def test_criterion_5_conjugacy_witnesses(capsys):
    report(5, *criterion_5(), capsys)


def test_criterion_6_normal_forms(capsys):
    report(6, *criterion_6(), capsys)


def test_criterion_7_conjugacy_oracle(capsys):
    report(7, *criterion_7(), capsys)


def test_criterion_8_root_calculus(capsys):
    report(8, *criterion_8(), capsys)


def test_criterion_9_rank(capsys):
    report(9, *criterion_9(), capsys)


if __name__ == "__main__":
    failed = 0
    for number, fn in enumerate(CRITERIA, 1):
        try:
            report(number, *fn())
        except AssertionError:
            failed += 1
    raise SystemExit(1 if failed else 0)
