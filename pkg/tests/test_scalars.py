from fractions import Fraction

import pytest

from gbimod.scalars import InvalidConductor, RootNotInField, make_field


def test_rational_field():
    F = make_field(1)
    assert F.degree == 1
    a = F.from_fraction(Fraction(3, 4))
    b = F.from_fraction(Fraction(1, 4))
    assert a + b == 1
    assert a - b == Fraction(1, 2)
    assert (a * b).rational() == Fraction(3, 16)
    assert a.inverse() * a == F.one


def test_zeta_orders():
    for m in (2, 3, 4, 6, 8, 12):
        F = make_field(m)
        z = F.zeta(m)
        p = F.one
        for _ in range(1, m):
            p = p * z
            assert p != F.one
        assert p * z == F.one


def test_zeta4_is_i():
    F = make_field(4)
    i = F.zeta(4)
    assert i * i == -1
    assert (1 + i) * (1 - i) == 2
    assert i.inverse() == -i


def test_subfield_roots():
    F = make_field(12)
    assert F.zeta(2) == -1
    w = F.zeta(3)
    assert w * w + w + 1 == 0
    assert F.zeta(4) * F.zeta(4) == -1
    with pytest.raises(RootNotInField):
        F.zeta(5)
    with pytest.raises(RootNotInField):
        F.zeta(8)


def test_primitive_root_sums():
    # sum over the group of all m-th roots vanishes for m > 1
    for m in (2, 3, 4, 8):
        F = make_field(m)
        s = F.zero
        for j in range(m):
            s = s + F.zeta(m, j)
        assert not s


def test_inverse_random():
    import random

    from gbimod.scalars import Scalar

    rng = random.Random(7)
    F = make_field(8)
    for _ in range(25):
        coeffs = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(F.degree))
        a = Scalar(F, coeffs)
        if not a:
            continue
        assert a * a.inverse() == F.one


def test_degree_matches_euler_phi():
    phi = {1: 1, 2: 1, 3: 2, 4: 2, 5: 4, 6: 2, 8: 4, 12: 4, 16: 8}
    for m, d in phi.items():
        assert make_field(m).degree == d


def test_render():
    F = make_field(4)
    i = F.zeta(4)
    assert str(F.zero) == "0"
    assert str(F.one) == "1"
    assert str(-F.one) == "-1"
    assert str(i) == "zeta(4)"
    assert str(-i) == "-zeta(4)"
    half = F.from_fraction(Fraction(1, 2))
    assert str(half + half * i) == "1/2 + 1/2*zeta(4)"
    assert str(half - half * i) == "1/2 - 1/2*zeta(4)"
    F8 = make_field(8)
    assert str(2 * F8.zeta(8, 3)) == "2*zeta(8)^3"


def test_zeta_power_wraps():
    F = make_field(6)
    assert F.zeta(6, 7) == F.zeta(6, 1)
    assert F.zeta(6, 0) == F.one
    assert F.zeta(3, 2) == F.zeta(6, 4)


def test_bad_conductor():
    with pytest.raises(InvalidConductor):
        make_field(0)


def test_mixed_field_arithmetic_rejected():
    a = make_field(4).zeta(4)
    b = make_field(8).zeta(8)
    with pytest.raises(ValueError):
        a + b


def test_division():
    F = make_field(3)
    w = F.zeta(3)
    assert (w * w) / w == w
    assert 1 / w == w * w
    assert w / 2 == w * Fraction(1, 2)
