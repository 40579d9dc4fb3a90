import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hyperlab.counts as counts
from hyperlab import (
    Budget,
    EmptyInput,
    Fp,
    InvalidArgument,
    ModulusMismatch,
    ResourceLimit,
    ScalarSet,
    TranslateSet,
    additive_energy,
    borel_coset_mass,
    borel_t3_mass,
    cs_chain_report,
    d_histogram,
    difference_set,
    energy_borel_split,
    energy_system_counts,
    gen_cartesian,
    minkowski_grid,
    minkowski_realisations,
    product_rep_energy,
    q_rect,
    quotient_histogram,
    rich_hyperbolae,
    rich_lines,
    sigma,
    sigma_rect,
    sumprod_quadruples,
    sumset,
    t_k,
)

A16 = ScalarSet(7, (1, 6))
H00 = TranslateSet(7, ((0, 0),))
H2 = TranslateSet(7, ((1, 0), (2, 0)))
HD = TranslateSet(7, ((0, 0), (1, 1)))
B01 = ScalarSet(7, (0, 1))


def rand_translates(rng, p, n):
    return TranslateSet(p, tuple(divmod(v, p) for v in rng.sample(range(p * p), n)))


# ------------------------------------------------------------ sigma

def test_sigma_pin():
    assert sigma(A16, H00) == 2


def test_sigma_rect_asymmetric():
    B = ScalarSet(7, (1,))
    C = ScalarSet(7, (6,))
    # y = -1/x maps 1 to 6
    assert sigma_rect(B, C, H00) == 1
    assert sigma_rect(C, B, H00) == 1
    assert sigma_rect(B, B, H00) == 0


def test_sigma_other_lambda():
    # (x-0)(y-0) = 1: x=1,y=1 and x=6,y=6
    assert sigma(A16, H00, lam=1) == 2
    assert sigma(ScalarSet(7, (1, 2)), H00, lam=2) == 2  # 1*2 = 2*1 = 2


def test_sigma_rejects_mismatch_and_zero_lambda():
    with pytest.raises(ModulusMismatch):
        sigma(ScalarSet(11, (1,)), H00)
    with pytest.raises(InvalidArgument):
        sigma(A16, H00, lam=0)
    with pytest.raises(InvalidArgument):
        sigma(A16, H00, lam=7)


def test_sigma_brute_force_small():
    rng = random.Random(5)
    for _ in range(20):
        A = ScalarSet(11, tuple(rng.sample(range(11), rng.randint(1, 6))))
        H = rand_translates(rng, 11, rng.randint(1, 8))
        lam = rng.randrange(1, 11)
        expected = 0
        for a, b in H:
            for x in A:
                for y in A:
                    if (x - b) * (y - a) % 11 == lam:
                        expected += 1
        assert sigma(A, H, lam) == expected


# ------------------------------------------------------------ energies

def test_quotient_histogram_pin():
    hist = quotient_histogram(H2)
    assert hist.entries == {(1, 0, 0, 1): 2, (1, 6, 0, 1): 1, (1, 1, 0, 1): 1}
    assert hist.total_mass == 4
    assert hist[(9, 9, 9, 9)] == 0
    assert len(hist) == 3


def test_projective_folding_is_coarser():
    rng = random.Random(1)
    for _ in range(10):
        H = rand_translates(rng, 13, 8)
        plain = quotient_histogram(H)
        folded = quotient_histogram(H, projective=True)
        assert folded.total_mass == plain.total_mass
        assert len(folded) <= len(plain)


def test_t2_pin():
    assert t_k(H2, 2) == 6


def test_t3_pin():
    for p in (7, 101, 499):
        H = TranslateSet(p, ((0, 0), (1, 1)))
        assert t_k(H, 3) == 20


def test_t4_brute_force_tiny():
    # T4 via explicit quadruple loop over the embedded group elements
    from hyperlab import compose, embed_translate, invert

    F = Fp(7)
    hh = list(HD)
    mats = [embed_translate(F, h) for h in hh]
    inv = [invert(m) for m in mats]
    from collections import Counter

    prod = Counter()
    for m1 in mats:
        for m2 in inv:
            for m3 in mats:
                for m4 in inv:
                    prod[compose(compose(compose(m1, m2), m3), m4).entries] += 1
    expected = sum(v * v for v in prod.values())
    assert t_k(HD, 4) == expected


def test_t_k_domain():
    assert t_k(TranslateSet(7, ()), 2) == 0
    with pytest.raises(InvalidArgument):
        t_k(HD, 5)
    with pytest.raises(InvalidArgument):
        t_k(HD, 1)


def test_t3_budget_gate():
    rng = random.Random(0)
    H = rand_translates(rng, 101, 40)
    with pytest.raises(ResourceLimit):
        t_k(H, 3, Budget(t3_max_h=24))
    with pytest.raises(ResourceLimit):
        t_k(H, 3, Budget(table_entries=1000))


def test_t4_budget_gate():
    rng = random.Random(0)
    H = rand_translates(rng, 101, 30)
    with pytest.raises(ResourceLimit):
        t_k(H, 4, Budget(t4_support_product=10))


def test_budget_from_env(monkeypatch):
    monkeypatch.delenv("HYPERLAB_BUDGET_MB", raising=False)
    assert Budget.from_env().table_entries is None
    monkeypatch.setenv("HYPERLAB_BUDGET_MB", "2")
    assert Budget.from_env().table_entries == 20_000
    monkeypatch.setenv("HYPERLAB_BUDGET_MB", "lots")
    with pytest.raises(InvalidArgument):
        Budget.from_env()


# ------------------------------------------------------------ rectangular quadruples

def test_d_histogram_and_q_pin():
    hist = d_histogram(HD)
    assert hist.entries == {0: 2, 1: 2}
    assert q_rect(HD) == 8


# ------------------------------------------------------------ minkowski

def test_minkowski_grid_pin():
    assert tuple(minkowski_grid(B01)) == ((0, 0), (1, 1), (1, 6), (2, 0))


def test_minkowski_realisations_pin():
    assert minkowski_realisations(B01, 1) == 4
    with pytest.raises(InvalidArgument):
        minkowski_realisations(B01, 0)


def test_minkowski_brute_force_small():
    rng = random.Random(3)
    for _ in range(20):
        p = 13
        A = ScalarSet(p, tuple(rng.sample(range(p), rng.randint(1, 6))))
        lam = rng.randrange(1, p)
        expected = 0
        for x1 in A:
            for y1 in A:
                for x2 in A:
                    for y2 in A:
                        if ((x1 - x2) ** 2 - (y1 - y2) ** 2) % p == lam:
                            expected += 1
        assert minkowski_realisations(A, lam) == expected
        # the 45-degree image turns Minkowski distance into D
        assert d_histogram(minkowski_grid(A))[lam] == expected


def test_minkowski_rect_cover_is_one_sided():
    # the rectangle reformulation over A+A and A-A covers every
    # realisation pair but can strictly overcount
    A = ScalarSet(101, (20, 38, 53, 95))
    lam = 73
    direct = minkowski_realisations(A, lam)
    swapped = TranslateSet(101, tuple(((x - y) % 101, (x + y) % 101) for x in A for y in A))
    srect = sigma_rect(sumset(A, A), difference_set(A, A), swapped, lam)
    assert direct == 0
    assert srect == 25
    assert direct < srect


# ------------------------------------------------------------ rich curves

def test_rich_hyperbolae_pins():
    rc = rich_hyperbolae(A16, 2)
    assert rc.count == 3
    assert rc.witnesses == ((0, 0), (3, 4), (4, 3))
    assert rich_hyperbolae(A16, 3).count == 0


def test_rich_hyperbolae_ap_pin():
    A = ScalarSet(61, tuple(range(1, 9)))
    for k, expected in ((2, 1140), (3, 320), (4, 42)):
        assert rich_hyperbolae(A, k, mode="pairs").count == expected
        assert rich_hyperbolae(A, k, mode="exhaustive").count == expected


def test_rich_hyperbolae_within_filter():
    win = TranslateSet(7, ((0, 0), (1, 1)))
    rc = rich_hyperbolae(A16, 2, within=win)
    assert rc.witnesses == ((0, 0),)
    rce = rich_hyperbolae(A16, 2, mode="exhaustive", within=win)
    assert rce.witnesses == ((0, 0),)


def test_rich_hyperbolae_domain():
    with pytest.raises(InvalidArgument):
        rich_hyperbolae(A16, 1, mode="pairs")
    with pytest.raises(InvalidArgument):
        rich_hyperbolae(A16, 2, mode="nosuch")
    with pytest.raises(ResourceLimit):
        rich_hyperbolae(ScalarSet(2053, (0, 1)), 1, mode="exhaustive")


def test_rich_lines_pins():
    assert rich_lines(B01, B01, 2).count == 6
    assert rich_lines(B01, B01, 2, include_axis_parallel=False).count == 2
    with pytest.raises(InvalidArgument):
        rich_lines(B01, B01, 1)


def test_rich_lines_brute_force_small():
    # all lines through >= 2 grid points, counted by point-pair closure
    p = 11
    rng = random.Random(9)
    B = ScalarSet(p, tuple(rng.sample(range(p), 4)))
    C = ScalarSet(p, tuple(rng.sample(range(p), 4)))
    pts = [(x, y) for x in B for y in C]
    lines = set()
    for i, (x1, y1) in enumerate(pts):
        for x2, y2 in pts[i + 1 :]:
            if x1 == x2:
                lines.add(("v", x1))
            else:
                m = (y1 - y2) * pow(x1 - x2, p - 2, p) % p
                c = (y1 - m * x1) % p
                lines.add(("s", m, c))
    k = 3
    expected = 0
    for line in lines:
        if line[0] == "v":
            on = sum(1 for x, y in pts if x == line[1])
        else:
            on = sum(1 for x, y in pts if (line[1] * x + line[2]) % p == y)
        if on >= k:
            expected += 1
    assert rich_lines(B, C, k).count == expected


# ------------------------------------------------------------ scalar-set counts

def test_additive_energy_pins():
    assert additive_energy(B01) == 6
    assert additive_energy(ScalarSet(7, (2,))) == 1


def test_product_rep_energy_pin():
    assert product_rep_energy(B01) == 152


def test_sumprod_pins():
    A = ScalarSet(5, (0, 1))
    assert sumprod_quadruples(A, 1) == 4
    assert sumprod_quadruples(ScalarSet(5, (1,)), 1) == 0
    for variant in (2, 3, 4):
        assert sumprod_quadruples(A, variant) >= 0
    with pytest.raises(InvalidArgument):
        sumprod_quadruples(A, 5)


def test_sumprod_brute_force_variant2():
    # (a1 + a2 - a4)(a3 + a2 + a4) = 1 by full quadruple scan
    p = 11
    A = ScalarSet(p, (1, 3, 4, 9))
    expected = 0
    for a1 in A:
        for a2 in A:
            for a3 in A:
                for a4 in A:
                    if (a1 + a2 - a4) * (a3 + a2 + a4) % p == 1:
                        expected += 1
    assert sumprod_quadruples(A, 2) == expected


# ------------------------------------------------------------ borel structure

def test_borel_masses_pin():
    hist, max_nb = borel_coset_mass(H2)
    assert max_nb == 0
    assert hist.total_mass == 6
    (label,) = hist.entries
    assert str(label) == "oo"


def test_borel_masses_generic():
    rng = random.Random(7)
    for _ in range(10):
        H = rand_translates(rng, 13, 9)
        hist, max_nb = borel_coset_mass(H)
        assert hist.total_mass == t_k(H, 2)
        assert max_nb <= len(H) ** 2
        bor, rest = energy_borel_split(H)
        assert bor + rest == t_k(H, 2)
        assert borel_t3_mass(H) <= t_k(H, 3)


def test_energy_system_counts():
    rng = random.Random(11)
    for _ in range(10):
        H = rand_translates(rng, 13, 8)
        n1, n2 = energy_system_counts(H)
        e = t_k(H, 2)
        assert len(H) ** 2 <= n1 <= len(H) ** 3
        assert n1 <= e  # its key refines the quotient key
        swapped = TranslateSet(13, tuple((b, a) for a, b in H))
        assert energy_system_counts(swapped) == (n2, n1)


# ------------------------------------------------------------ cauchy-schwarz chain

def test_cs_chain_pin():
    rep = cs_chain_report(A16, H00)
    assert rep.sigma == 2
    assert rep.lhs_sq == 4
    assert rep.rhs_cs == 4  # tight: one translate, every mass on it
    assert rep.delta == Fraction(2, 3)
    assert rep.omega_size == 1
    assert rep.omega_incidence_share == 1


def test_cs_chain_inequality_random():
    rng = random.Random(13)
    for _ in range(15):
        A = ScalarSet(101, tuple(rng.sample(range(101), rng.randint(1, 8))))
        H = rand_translates(rng, 101, rng.randint(1, 10))
        rep = cs_chain_report(A, H)
        assert rep.lhs_sq <= rep.rhs_cs
        assert 0 <= rep.omega_incidence_share <= 1
        assert rep.omega_size <= len(quotient_histogram(H))


def test_cs_chain_domain():
    with pytest.raises(EmptyInput):
        cs_chain_report(ScalarSet(7, ()), H00)
    with pytest.raises(InvalidArgument):
        cs_chain_report(A16, H00, lam=3)


# ------------------------------------------------------------ cartesian identities

def test_cartesian_energy_exact_identity():
    # E(BxB) = 2|B|^2 E+(B) - |B|^4 holds exactly; with B = {0,1} mod 7
    # it gives 32, strictly above |B|^2 E+(B) = 24
    rng = random.Random(17)
    for _ in range(12):
        B = ScalarSet(101, tuple(rng.sample(range(101), rng.randint(1, 6))))
        H = gen_cartesian(B, B)
        e = t_k(H, 2)
        eplus = additive_energy(B)
        assert e == 2 * len(B) ** 2 * eplus - len(B) ** 4
        bor, rest = energy_borel_split(H)
        assert rest == len(B) ** 2 * (eplus - len(B) ** 2)
    H = gen_cartesian(B01, B01)
    assert t_k(H, 2) == 32
    assert 32 > len(B01) ** 2 * additive_energy(B01)


@given(st.integers(0, 1))
@settings(max_examples=2, deadline=None)
def test_q_of_cartesian_square(flip):
    # D-histogram of B x B factors through the difference set squared
    B = ScalarSet(7, (0, 1, 3) if flip else (2, 5))
    H = gen_cartesian(B, B)
    diff = d_histogram(H)
    r = {}
    for x in B:
        for y in B:
            r[(x - y) % 7] = r.get((x - y) % 7, 0) + 1
    expected = {}
    for da, ca in r.items():
        for db, cb in r.items():
            key = da * db % 7
            expected[key] = expected.get(key, 0) + ca * cb
    assert diff.entries == expected
