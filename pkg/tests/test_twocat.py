import itertools
from fractions import Fraction

import pytest

from gbimod.algebra import Algebra, Presentation, build_action
from gbimod.bimodx import LeftModule, XMor, top_multiplicities
from gbimod.groups import AbelianGroup, second_cohomology_order
from gbimod.linalg import Mat
from gbimod.scalars import make_field
from gbimod.twocat import (
    BUILTIN_NAMES,
    AdjunctionError,
    NeedsLargerConductor,
    NotInnerError,
    UnsupportedAlgebraError,
    act_on_module,
    adjunction,
    automorphism_toolkit,
    builtin,
    cartan_matrix,
    catalogue,
    cells,
    classify_count,
    cyclic_example,
    end_rad_profile,
    fiat_report,
    functor_tensor_check,
    hcell_realization_check,
    hcell_solve,
    interchange_check,
    mult_table,
    star_label,
    table_is_associative,
)
from gbimod.twocat import _m2comb, _m2mul, _peval_alg, _sqrt_polynomial

_CACHE = {}


def instance(name):
    """Catalogue plus multiplication table, shared across tests."""
    if name not in _CACHE:
        cat = catalogue(builtin(name))
        _CACHE[name] = (cat, mult_table(cat))
    return _CACHE[name]


def id_label_for(cat, chi):
    for l in cat.labels:
        if cat.kind[l] == "id" and cat.objects[l].chi == chi:
            return l
    raise AssertionError(f"no identity label with character {chi!r}")


def cell_sets(cs):
    return set(frozenset(c) for c in cs)


# ---------------------------------------------------------------------------
# catalogue


def test_builtin_names_construct():
    for name in BUILTIN_NAMES:
        act = builtin(name)
        assert act.algebra.dim > 0
    with pytest.raises(KeyError):
        builtin("nonesuch")


def test_catalogue_counts():
    expected = {
        "cyclic:3": (3, 3),
        "kx2:c2": (2, 2),
        "kxy:v4": (4, 4),
        "signedswap": (4, 4),
        "a2": (1, 4),
    }
    for name, (nid, nproj) in expected.items():
        cat, _ = instance(name)
        kinds = [cat.kind[l] for l in cat.labels]
        assert kinds.count("id") == nid
        assert kinds.count("proj") == nproj
        assert len(cat.labels) == nid + nproj


def test_semisimple_block_rejected():
    F = make_field(2)
    pres = Presentation(F, ["1"], [], relations=[])
    A = Algebra.from_presentation(pres)
    act = build_action(A, AbelianGroup([1]), [{"e1": {0: 1}}])
    with pytest.raises(UnsupportedAlgebraError):
        catalogue(act)


# ---------------------------------------------------------------------------
# multiplication table


def test_identity_fusion():
    cat, table = instance("kx2:c2")
    ids = [l for l in cat.labels if cat.kind[l] == "id"]
    for la, lb in itertools.product(ids, repeat=2):
        prod = cat.objects[la].chi.mul(cat.objects[lb].chi)
        assert table[(la, lb)] == {id_label_for(cat, prod): 1}


def test_twist_absorption():
    for name in ("kx2:c2", "cyclic:3"):
        cat, table = instance(name)
        ids = [l for l in cat.labels if cat.kind[l] == "id"]
        projs = [l for l in cat.labels if cat.kind[l] == "proj"]
        for li, lp in itertools.product(ids, projs):
            P = cat.objects[lp]
            chi = cat.objects[li].chi.restrict(P.stab)
            want = None
            for lq in projs:
                Q = cat.objects[lq]
                if (Q.bimod.vi, Q.bimod.vj) == (P.bimod.vi, P.bimod.vj) \
                        and Q.chi == P.chi.mul(chi):
                    want = lq
            assert table[(li, lp)] == {want: 1}
            assert table[(lp, li)] == {want: 1}


def test_projective_products_cyclic3():
    cat, table = instance("cyclic:3")
    projs = [l for l in cat.labels if cat.kind[l] == "proj"]
    # each rotation contributes one middle Peirce line, so every product of
    # projectives contains each projective class exactly once
    for la, lb in itertools.product(projs, repeat=2):
        assert table[(la, lb)] == {l: 1 for l in projs}


def test_projective_products_dual_numbers():
    cat, table = instance("kx2:c2")
    projs = [l for l in cat.labels if cat.kind[l] == "proj"]
    for la, lb in itertools.product(projs, repeat=2):
        assert table[(la, lb)] == {l: 1 for l in projs}


def test_hereditary_products_vanish_against_missing_paths():
    cat, table = instance("a2")
    assert table[("P(1,1;chi=triv)", "P(2,1;chi=triv)")] == {}
    assert table[("P(2,1;chi=triv)", "P(2,2;chi=triv)")] == {}
    assert table[("P(1,2;chi=triv)", "P(2,1;chi=triv)")] == {"P(1,1;chi=triv)": 1}


def test_table_associative():
    for name in ("kx2:c2", "cyclic:3", "a2", "signedswap"):
        cat, table = instance(name)
        assert table_is_associative(cat, table)


# ---------------------------------------------------------------------------
# cells


def test_cells_cyclic3():
    cat, table = instance("cyclic:3")
    st = cells(cat, table)
    ids = frozenset(l for l in cat.labels if cat.kind[l] == "id")
    projs = frozenset(l for l in cat.labels if cat.kind[l] == "proj")
    assert cell_sets(st.two_sided_cells) == {ids, projs}
    assert len(ids) == 3
    # the orbit collapse makes left and right cells coincide with the
    # two-sided ones here
    assert cell_sets(st.left_cells) == {ids, projs}
    assert cell_sets(st.right_cells) == {ids, projs}


def test_cells_hereditary():
    cat, table = instance("a2")
    st = cells(cat, table)
    assert cell_sets(st.two_sided_cells) == {
        frozenset({"Id(1;chi=triv)"}),
        frozenset({"P(1,1;chi=triv)", "P(1,2;chi=triv)",
                   "P(2,1;chi=triv)", "P(2,2;chi=triv)"}),
    }
    # left cells fix the source vertex, right cells the target vertex
    assert cell_sets(st.left_cells) == {
        frozenset({"Id(1;chi=triv)"}),
        frozenset({"P(1,1;chi=triv)", "P(2,1;chi=triv)"}),
        frozenset({"P(1,2;chi=triv)", "P(2,2;chi=triv)"}),
    }
    assert cell_sets(st.right_cells) == {
        frozenset({"Id(1;chi=triv)"}),
        frozenset({"P(1,1;chi=triv)", "P(1,2;chi=triv)"}),
        frozenset({"P(2,1;chi=triv)", "P(2,2;chi=triv)"}),
    }


# ---------------------------------------------------------------------------
# duals and adjunctions


def test_star_pattern_cyclic3():
    cat, _ = instance("cyclic:3")
    assert star_label(cat, "P(1,1;chi=triv)") == "P(1,3;chi=triv)"
    assert star_label(cat, "P(1,2;chi=triv)") == "P(1,2;chi=triv)"
    assert star_label(cat, "P(1,3;chi=triv)") == "P(1,1;chi=triv)"
    assert star_label(cat, "Id(1;chi=z3:1,2)") == "Id(1;chi=z3:2,1)"


def test_star_is_table_antihomomorphism():
    for name in ("cyclic:3", "signedswap"):
        cat, table = instance(name)
        star = {l: star_label(cat, l) for l in cat.labels}
        for (la, lb), dec in table.items():
            lhs = {star[l]: k for l, k in dec.items()}
            assert lhs == table[(star[lb], star[la])]


def test_adjunction_exact():
    for name in ("kx2:c2", "cyclic:2"):
        cat, _ = instance(name)
        for label in cat.labels:
            d = adjunction(cat, label)
            assert d.seeded
            assert d.verify()
            assert d.right_label == star_label(cat, label)


def test_adjunction_triangles_are_idempotents():
    cat, _ = instance("kx2:c2")
    d = adjunction(cat, "P(1,1;chi=z2:1)")
    lt, rt = d.triangles()
    assert lt == d.left.idem
    assert rt == d.right.idem


def test_unit_perturbation_breaks_a_triangle():
    cat, _ = instance("kx2:c2")
    d = adjunction(cat, "P(1,1;chi=triv)")
    n = 0
    for g, m in d.unit.comps.items():
        for r, row in m.rows.items():
            for c, v in row.items():
                comps = {g2: m2.copy() for g2, m2 in d.unit.comps.items()}
                comps[g].add_entry(r, c, v)  # doubles one nonzero scalar
                pert = XMor(d.unit.src, d.unit.tgt, comps)
                assert not d.verify(unit=pert)
                n += 1
    assert n > 0


def test_adjunction_requires_self_injective():
    cat, _ = instance("a2")
    with pytest.raises(AdjunctionError):
        adjunction(cat, "P(1,1;chi=triv)")


def test_fiat_report_dual_numbers():
    cat, _ = instance("kx2:c2")
    rep = fiat_report(cat)
    assert rep["self_injective"] and rep["weakly_fiat"] and rep["fiat"]
    star = rep["star"]
    assert sorted(star) == cat.labels
    assert all(star[star[l]] == l for l in cat.labels)


def test_fiat_report_hereditary():
    cat, _ = instance("a2")
    rep = fiat_report(cat)
    assert rep == {"self_injective": False, "weakly_fiat": False,
                   "fiat": False, "star": None}


# ---------------------------------------------------------------------------
# classification counts


def test_classify_cyclic_counts_divisors():
    for n in range(2, 9):
        _, total = classify_count(AbelianGroup([n]))
        divisors = sum(1 for d in range(1, n + 1) if n % d == 0)
        assert total == divisors


def test_classify_klein_four():
    G = AbelianGroup([2, 2])
    entries, total = classify_count(G)
    assert total == 6
    for e in entries:
        assert e["count"] == second_cohomology_order(G, e["subgroup"])


def test_classify_accepts_action():
    act = builtin("kxy:v4")
    _, total = classify_count(act)
    assert total == 6


# ---------------------------------------------------------------------------
# two-element cell arithmetic


def test_hcell_solutions_are_diagonal():
    assert hcell_solve(10) == [(n, n, n, n) for n in range(1, 11)]


def test_hcell_no_solution_with_zero_corner():
    # with y = 0 the cell constraints force b, c >= 1 and the associativity
    # identities then have no common solution
    found = []
    for x, b, c in itertools.product(range(11), repeat=3):
        if b == 0 or c == 0:
            continue
        lf = ((x, b), (0, b))
        lg = ((c, 0), (c, x))
        if (_m2mul(lf, lf) == _m2comb(x, lf, 0, lg)
                and _m2mul(lf, lg) == _m2comb(b, lf, b, lg)
                and _m2mul(lg, lf) == _m2comb(c, lf, c, lg)
                and _m2mul(lg, lg) == _m2comb(0, lf, x, lg)):
            found.append((x, 0, b, c))
    assert found == []


# ---------------------------------------------------------------------------
# automorphism toolkit


def test_toolkit_signed_swap():
    act = builtin("signedswap")
    alg = act.algebra
    ctx = alg.ctx
    g = act.group.generators()[0]
    out = automorphism_toolkit(alg, act.mats[g])
    assert out["order"] == 4

    e1, e2 = alg.idem
    a = out["witness"]
    assert set(a) == {e1, e2} and a[e2] == -a[e1]

    minus = ctx.scalar(-1)
    assert out["twist"] == {e1: minus, e2: minus}
    assert out["twist_central"]

    half = ctx.scalar(Fraction(1, 2))
    i = ctx.zeta(4, 1)
    c0 = (ctx.one + i) * half
    c1 = (ctx.one - i) * half
    assert out["sqrt_poly"] == [c0, c1]
    b = out["sqrt"]
    assert b == {e1: c0 + c1 * a[e1], e2: c0 + c1 * a[e2]}
    assert alg.mult(b, b) == out["witness_inverse"]

    assert out["sigma_phi_order"] == 4
    assert out["fourth_power_identity"]


def test_toolkit_identity_automorphism():
    alg = builtin("kx2:c2").algebra
    out = automorphism_toolkit(alg, Mat.identity(alg.ctx, alg.dim))
    one = alg.ctx.one
    assert out["order"] == 1
    assert out["witness"] == {0: one}
    assert out["sqrt"] == {0: one}
    assert out["sigma_phi_order"] == 1
    assert out["fourth_power_identity"]


def test_toolkit_rejects_non_automorphism():
    alg = builtin("kx2:c2").algebra
    with pytest.raises(ValueError):
        automorphism_toolkit(alg, Mat.zeros(alg.ctx, alg.dim, alg.dim))


def test_toolkit_square_not_inner():
    act = builtin("cyclic:3")
    g = act.group.generators()[0]
    with pytest.raises(NotInnerError):
        automorphism_toolkit(act.algebra, act.mats[g])


def test_toolkit_needs_larger_conductor():
    # same quiver and automorphism as signedswap, but over a field with no
    # fourth root of unity: the square root of the witness does not exist
    F = make_field(2)
    pres = Presentation(
        F, ["1", "2"], [("al", "1", "2"), ("be", "2", "1")],
        relations=[[(1, ("al", "be"))], [(1, ("be", "al"))]])
    A = Algebra.from_presentation(pres)
    G = AbelianGroup([4])
    act = build_action(A, G, [{
        "e1": {A.idem[1]: 1},
        "e2": {A.idem[0]: 1},
        "al": {A._bindex[(1,)]: -1},
        "be": {A._bindex[(0,)]: 1},
    }])
    with pytest.raises(NeedsLargerConductor):
        automorphism_toolkit(A, act.mats[G.generators()[0]])


def test_square_root_with_nilpotent_part():
    alg = builtin("kx2:c4").algebra
    ctx = alg.ctx
    c = {0: ctx.one, 1: ctx.one}
    b = _peval_alg(alg, _sqrt_polynomial(alg, c), c)
    assert b == {0: ctx.one, 1: ctx.scalar(Fraction(1, 2))}
    assert alg.mult(b, b) == c


def test_square_root_outside_field():
    alg = builtin("kx2:c4").algebra
    with pytest.raises(NeedsLargerConductor):
        _sqrt_polynomial(alg, {0: alg.ctx.zeta(4, 1)})


# ---------------------------------------------------------------------------
# cell realization


def test_realization_signed_swap():
    cat, table = instance("signedswap")
    rep = hcell_realization_check(cat, table)
    assert rep["realized"]
    assert rep["n"] == 1
    assert set(rep["pair"]) == {"P(1,1;chi=triv)", "P(1,2;chi=z2:1)"}
    assert rep["cartan"] == [[1, 1], [1, 1]]


def test_realization_cyclic2():
    cat, table = instance("cyclic:2")
    rep = hcell_realization_check(cat, table)
    assert rep["realized"] and rep["n"] == 1
    assert rep["cartan"] == [[1, 1], [1, 1]]


def test_realization_needs_two_vertices():
    cat, _ = instance("kx2:c2")
    with pytest.raises(UnsupportedAlgebraError):
        hcell_realization_check(cat)


def test_realization_hereditary_fails():
    cat, table = instance("a2")
    rep = hcell_realization_check(cat, table)
    assert rep == {"realized": False, "reason": "not self-injective",
                   "cartan": [[1, 0], [1, 1]]}


def test_cartan_matrix_a2():
    assert cartan_matrix(builtin("a2").algebra) == [[1, 0], [1, 1]]


# ---------------------------------------------------------------------------
# values on modules and structural invariants


def test_identity_object_preserves_projectives():
    cat, _ = instance("cyclic:3")
    act = cat.act
    for label in ("Id(1;chi=triv)", "Id(1;chi=z3:1,2)"):
        O = cat.objects[label]
        for v in range(act.algebra.nv):
            V = LeftModule.projective(act, v)
            W = act_on_module(O, V)
            assert W.dim == V.dim
            assert top_multiplicities(W) == {
                w: int(w == v) for w in range(act.algebra.nv)}


def test_projective_object_value_dimension():
    cat, _ = instance("kx2:c2")
    P = cat.objects["P(1,1;chi=triv)"]
    V = LeftModule.projective(cat.act, 0)
    assert act_on_module(P, V).dim == 4


def test_end_rad_matches_stabilizer_order():
    for name in ("kx2:c2", "cyclic:3", "signedswap"):
        cat, _ = instance(name)
        prof = end_rad_profile(cat)
        assert sorted(prof) == sorted(cat.labels)
        for label, (dim, stab) in prof.items():
            assert dim == stab, label


def test_functor_composition_matches_table():
    for name in ("kx2:c2", "cyclic:2"):
        cat, table = instance(name)
        rep = functor_tensor_check(cat, table)
        assert rep["labels"] == len(cat.labels)
        assert rep["checks"] > 0


def test_interchange_on_random_squares():
    cat, _ = instance("kx2:c2")
    assert interchange_check(cat, trials=50, seed=1) == 50


def test_cyclic_example_sizes():
    act = cyclic_example(5)
    assert act.algebra.nv == 5
    assert act.algebra.dim == 25
    assert len(act.group.elements) == 5
