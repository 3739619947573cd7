import random
from fractions import Fraction

from gbimod.linalg import Echelon, Mat, nullspace, rref, span_solve, v_add, v_from_list, v_kron, v_scale, v_sub
from gbimod.scalars import make_field

F = make_field(4)


def rand_vec(rng, n, density=0.6):
    out = {}
    for i in range(n):
        if rng.random() < density:
            q = Fraction(rng.randint(-3, 3))
            if q:
                out[i] = F.from_fraction(q)
    return out


def test_vec_ops():
    a = v_from_list(F, [1, 0, 2])
    b = v_from_list(F, [-1, 3, 0])
    assert v_add(a, b) == v_from_list(F, [0, 3, 2])
    assert v_sub(a, a) == {}
    assert v_scale(a, 0) == {}
    k = v_kron(v_from_list(F, [1, 2]), v_from_list(F, [0, 3]), 2)
    assert k == v_from_list(F, [0, 3, 0, 6])


def test_mat_mul_identity():
    rng = random.Random(3)
    a = Mat.from_entries(F, 4, 4, [(i, j, Fraction(rng.randint(-2, 2))) for i in range(4) for j in range(4)])
    i4 = Mat.identity(F, 4)
    assert a.mul(i4) == a
    assert i4.mul(a) == a


def test_mat_mul_assoc_random():
    rng = random.Random(11)
    for _ in range(10):
        a = Mat.from_entries(F, 3, 4, [(rng.randrange(3), rng.randrange(4), Fraction(rng.randint(-2, 2))) for _ in range(6)])
        b = Mat.from_entries(F, 4, 2, [(rng.randrange(4), rng.randrange(2), Fraction(rng.randint(-2, 2))) for _ in range(5)])
        c = Mat.from_entries(F, 2, 3, [(rng.randrange(2), rng.randrange(3), Fraction(rng.randint(-2, 2))) for _ in range(4)])
        assert a.mul(b).mul(c) == a.mul(b.mul(c))


def test_apply_matches_mul():
    rng = random.Random(5)
    a = Mat.from_entries(F, 5, 5, [(rng.randrange(5), rng.randrange(5), Fraction(rng.randint(-2, 2))) for _ in range(12)])
    v = rand_vec(rng, 5)
    col = Mat(F, 5, 1, {i: {0: x} for i, x in v.items()})
    prod = a.mul(col)
    assert a.apply(v) == {i: r[0] for i, r in prod.rows.items()}


def test_transpose_kron_trace():
    a = Mat.from_dense(F, [[1, 2], [3, 4]])
    b = Mat.from_dense(F, [[0, 1], [1, 0]])
    assert a.transpose().transpose() == a
    assert a.trace() == 5
    k = a.kron(b)
    assert k.nr == 4 and k.nc == 4
    assert k.entry(0, 1) == 1 and k.entry(0, 3) == 2
    # trace of kron is product of traces
    assert not k.trace()
    assert a.kron(a).trace() == a.trace() * a.trace()


def test_rank_and_rref():
    rows = [v_from_list(F, [1, 2, 3]), v_from_list(F, [2, 4, 6]), v_from_list(F, [0, 1, 1])]
    red, pivs = rref(rows, F)
    assert pivs == [0, 1]
    assert len(red) == 2
    # canonical: row 0 has zero at column 1
    assert 1 not in red[0]


def test_nullspace():
    rows = [v_from_list(F, [1, 0, -1]), v_from_list(F, [0, 1, 1])]
    basis = nullspace(rows, 3, F)
    assert len(basis) == 1
    v = basis[0]
    assert v[2] == F.one and v[0] == F.one and v[1] == -F.one
    for r in rows:
        s = F.zero
        for k, c in r.items():
            if k in v:
                s = s + c * v[k]
        assert not s


def test_nullspace_rank_nullity_random():
    rng = random.Random(17)
    for _ in range(8):
        rows = [rand_vec(rng, 6) for _ in range(4)]
        red, pivs = rref(rows, F)
        basis = nullspace(rows, 6, F)
        assert len(pivs) + len(basis) == 6


def test_echelon_tracking():
    ech = Echelon(F, track=True)
    v1 = v_from_list(F, [1, 1, 0])
    v2 = v_from_list(F, [0, 1, 1])
    assert ech.insert(v1)
    assert ech.insert(v2)
    assert not ech.insert(v_add(v1, v2))
    target = v_add(v_scale(v1, F.from_fraction(2)), v_scale(v2, F.from_fraction(-3)))
    combo = ech.solve(target)
    assert combo == {0: F.from_fraction(2), 1: F.from_fraction(-3)}
    assert ech.solve(v_from_list(F, [0, 0, 5])) is None


def test_span_solve():
    vs = [v_from_list(F, [1, 0, 1]), v_from_list(F, [0, 2, 0])]
    combo = span_solve(vs, v_from_list(F, [3, 4, 3]), F)
    assert combo == {0: F.from_fraction(3), 1: F.from_fraction(2)}


def test_inverse():
    import pytest

    a = Mat.from_dense(F, [[1, 2], [3, 5]])
    ainv = a.inverse()
    assert a.mul(ainv) == Mat.identity(F, 2)
    assert ainv.mul(a) == Mat.identity(F, 2)
    z = F.zeta(4)
    b = Mat.from_dense(F, [[z, 1], [0, z]])
    assert b.mul(b.inverse()) == Mat.identity(F, 2)
    with pytest.raises(ZeroDivisionError):
        Mat.from_dense(F, [[1, 1], [1, 1]]).inverse()


def test_rref_canonical_under_row_order():
    rng = random.Random(23)
    rows = [rand_vec(rng, 5) for _ in range(4)]
    red1, p1 = rref(rows, F)
    shuffled = list(rows)
    rng.shuffle(shuffled)
    red2, p2 = rref(shuffled, F)
    assert p1 == p2 and red1 == red2
