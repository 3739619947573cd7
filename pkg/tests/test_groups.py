from gbimod.groups import AbelianGroup, schur_order, second_cohomology_order, smith_normal_form
from gbimod.scalars import make_field


def divisor_count(n):
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def test_cyclic_basics():
    G = AbelianGroup([4])
    assert G.order == 4 and G.exponent == 4
    g = (1,)
    assert G.op(g, g) == (2,)
    assert G.inv(g) == (3,)
    assert G.order_of(g) == 4
    assert G.order_of((2,)) == 2


def test_subgroups_cyclic():
    # subgroup count of Z/n is the divisor count
    for n in (2, 3, 4, 6, 12):
        G = AbelianGroup([n])
        assert len(G.subgroups()) == divisor_count(n)


def test_subgroups_klein():
    G = AbelianGroup([2, 2])
    subs = G.subgroups()
    assert [len(s) for s in subs] == [1, 2, 2, 2, 4]


def test_invariant_factors():
    G = AbelianGroup([2, 4])
    assert G.invariant_factors() == (2, 4)
    V = AbelianGroup([2, 2])
    assert V.invariant_factors() == (2, 2)
    full = [s for s in V.subgroups() if len(s) == 4][0]
    assert V.invariant_factors(full) == (2, 2)
    order2 = [s for s in V.subgroups() if len(s) == 2][0]
    assert V.invariant_factors(order2) == (2,)
    assert V.invariant_factors([V.identity]) == ()
    Z12 = AbelianGroup([12])
    assert Z12.invariant_factors() == (12,)


def test_characters_whole_group():
    for orders in ([3], [2, 2], [2, 4]):
        G = AbelianGroup(orders)
        chars = G.characters()
        assert len(chars) == G.order
        # pairwise distinct and multiplicative
        keys = {c.key() for c in chars}
        assert len(keys) == G.order
        for c in chars[:4]:
            for a in G.elements:
                for b in G.elements:
                    assert (c.vals[G.op(a, b)] - c.vals[a] - c.vals[b]) % G.exponent == 0


def test_characters_orthogonality():
    G = AbelianGroup([4])
    F = make_field(4)
    chars = G.characters()
    for c1 in chars:
        for c2 in chars:
            s = F.zero
            for g in G.elements:
                s = s + c1.scalar(F, g) * c2.inverse().scalar(F, g)
            if c1 == c2:
                assert s == 4
            else:
                assert not s


def test_characters_of_subgroup():
    G = AbelianGroup([2, 2])
    for sub in G.subgroups():
        chars = G.characters(sub)
        assert len(chars) == len(sub)
        for c in chars:
            assert set(c.domain()) == set(sub)


def test_char_ops():
    G = AbelianGroup([4])
    chars = G.characters()
    triv = G.trivial_char()
    assert triv.is_trivial()
    for c in chars:
        assert c.mul(c.inverse()) == triv
    labels = {c.label() for c in chars}
    assert len(labels) == 4 and "triv" in labels


def test_schur_order():
    assert schur_order(()) == 1
    assert schur_order((4,)) == 1
    assert schur_order((2, 2)) == 2
    assert schur_order((2, 4)) == 2
    assert schur_order((2, 2, 2)) == 8
    assert schur_order((3, 3)) == 3


def test_smith_small():
    rows = {0: {0: 2, 1: 4}, 1: {0: 6, 1: 8}}
    diag = sorted(smith_normal_form(rows))
    assert diag == [2, 4]  # det 8 = 2*4, gcd 2
    rows = {0: {0: 1}}
    assert smith_normal_form(rows) == [1]


def test_second_cohomology_matches_schur_multiplier():
    # H^2(K, k*) for algebraically closed k of char 0 has order
    # prod gcd(d_i, d_j) over the invariant factors
    cases = [
        ([2], None),
        ([4], None),
        ([2, 2], None),
        ([6], None),
        ([2, 4], None),
    ]
    for orders, _ in cases:
        G = AbelianGroup(orders)
        for sub in G.subgroups():
            expect = schur_order(G.invariant_factors(sub))
            got = second_cohomology_order(G, sub)
            assert got == expect, (orders, sub, got, expect)


def test_characters_deterministic():
    G = AbelianGroup([2, 4])
    a = [c.key() for c in G.characters()]
    b = [c.key() for c in G.characters()]
    assert a == b == sorted(a)
