import itertools

import pytest

from gbimod.algebra import Algebra, Presentation, build_action
from gbimod.bimodx import ProjBimodule, RegularBimodule, XMor, xmor_is_morphism
from gbimod.completion import (
    DecomposeError,
    averaged_idempotent,
    decompose,
    decompose_hom,
    decompose_trace,
    end_mod_rad_dim,
    hom_completed,
    id_object,
    iso_equal,
    multiplicity,
    obj_tensor,
    pi_tilde,
    plain_object,
    proj_object,
    unitor_left,
    unitor_right,
)
from gbimod.groups import AbelianGroup
from gbimod.scalars import make_field


def dual_c2():
    F = make_field(2)
    pres = Presentation(F, ["1"], [("x", "1", "1")], relations=[[(1, ("x", "x"))]])
    A = Algebra.from_presentation(pres)
    return build_action(A, AbelianGroup([2]), [{"e1": {0: 1}, "x": {1: -1}}])


def dual_c4():
    F = make_field(4)
    pres = Presentation(F, ["1"], [("x", "1", "1")], relations=[[(1, ("x", "x"))]])
    A = Algebra.from_presentation(pres)
    return build_action(A, AbelianGroup([4]), [{"e1": {0: 1}, "x": {1: F.zeta(4, 1)}}])


def twoloops_c4():
    """Two fixed loops swapped by the generator; its square fixes vertices."""
    F = make_field(4)
    pres = Presentation(
        F,
        ["1", "2"],
        [("x1", "1", "1"), ("x2", "2", "2")],
        relations=[[(1, ("x1", "x1"))], [(1, ("x2", "x2"))]],
    )
    A = Algebra.from_presentation(pres)
    images = {
        "e1": {A.idem[1]: 1},
        "e2": {A.idem[0]: 1},
        "x1": {A._bindex[(1,)]: 1},
        "x2": {A._bindex[(0,)]: -1},
    }
    return build_action(A, AbelianGroup([4]), [images])


def id_candidates(act):
    return [id_object(act, chi) for chi in act.group.characters()]


def test_averaged_idempotents_orthogonal_and_complete():
    act = dual_c4()
    A = RegularBimodule(act)
    chars = act.group.characters()
    idems = [pi_tilde(A, chi) for chi in chars]
    total = None
    for k, e in enumerate(idems):
        assert e.compose(e) == e
        assert xmor_is_morphism(e)
        for l, f in enumerate(idems):
            if l != k:
                assert e.compose(f).is_zero()
        total = e if total is None else total.add(e)
    assert total == XMor.identity(A)


def test_eps_idempotent_on_pair_stabilizer():
    act = twoloops_c4()
    P = ProjBimodule(act, 0, 0)
    stab = P.stabilizer()
    assert len(stab) == 2
    for chi in act.group.characters(sub=stab):
        e = averaged_idempotent(P, chi, stab)
        assert e.compose(e) == e
        assert xmor_is_morphism(e)


def test_rank_formulas():
    act = twoloops_c4()
    # group order times dim over stabilizer order
    for chi in act.group.characters():
        assert id_object(act, chi).rank() == 4  # 4 * 4 / 4
    stab = ProjBimodule(act, 0, 0).stabilizer()
    for chi in act.group.characters(sub=stab):
        assert proj_object(act, 0, 0, chi).rank() == 8  # 4 * 4 / 2
    assert plain_object(RegularBimodule(act)).rank() == 16


def test_proj_object_requires_matching_domain():
    act = twoloops_c4()
    full = act.group.characters()[1]
    with pytest.raises(AssertionError):
        proj_object(act, 0, 0, full)


def test_indecomposables_are_local():
    act = dual_c2()
    for chi in act.group.characters():
        assert end_mod_rad_dim(id_object(act, chi)) == 1
        assert end_mod_rad_dim(proj_object(act, 0, 0, chi)) == 1


def test_plain_object_end_over_rad_counts_summands():
    act = dual_c2()
    # multiplicity-free: one summand per character of the stabilizer
    assert end_mod_rad_dim(plain_object(RegularBimodule(act))) == 2
    assert end_mod_rad_dim(plain_object(ProjBimodule(act, 0, 0))) == 2

    act = twoloops_c4()
    assert end_mod_rad_dim(plain_object(ProjBimodule(act, 0, 0))) == 2
    # the two blocks form one orbit: two identity classes, each twice,
    # so End/Rad is M2 x M2
    assert end_mod_rad_dim(plain_object(RegularBimodule(act))) == 8


def block_id_objects(act):
    """Identity summands of the two-block orbit, via restricted coordinates."""
    alg = act.algebra
    coords = [c for c in range(alg.dim) if alg.block_of[alg.src[c]] == alg.block_of[0]]
    M = RegularBimodule(act, coords)
    stab = M.stabilizer()
    assert stab == (act.group.elements[0], act.group.elements[2])
    return [id_object(act, chi, coords=coords) for chi in act.group.characters(sub=stab)]


def test_block_restricted_identity_objects():
    act = twoloops_c4()
    cands = block_id_objects(act)
    for c in cands:
        assert c.rank() == 4
        assert end_mod_rad_dim(c) == 1
    out = decompose(plain_object(RegularBimodule(act)), cands)
    assert out == {c.label: 2 for c in cands}


def test_decompose_regular_object():
    act = dual_c2()
    cands = id_candidates(act)
    out = decompose(plain_object(RegularBimodule(act)), cands)
    assert out == {c.label: 1 for c in cands}
    for c in cands:
        out = decompose(c, cands)
        assert out == {d.label: (1 if d is c else 0) for d in cands}


def test_decompose_trace_and_hom_agree():
    act = dual_c2()
    stab = ProjBimodule(act, 0, 0).stabilizer()
    cands = [proj_object(act, 0, 0, chi) for chi in act.group.characters(sub=stab)]
    plain = plain_object(ProjBimodule(act, 0, 0))
    want = {c.label: 1 for c in cands}
    assert decompose_trace(plain, cands) == want
    assert decompose_hom(plain, cands) == want
    square = obj_tensor(cands[0], cands[0])
    assert square.bimod.biproj
    assert decompose_trace(square, cands) == decompose_hom(square, cands) == want


def test_rank_audit_rejects_incomplete_candidates():
    act = dual_c2()
    cands = id_candidates(act)[:1]
    with pytest.raises(DecomposeError):
        decompose_hom(plain_object(RegularBimodule(act)), cands)


def test_multiplicity_requires_local_candidate():
    act = dual_c2()
    plain = plain_object(RegularBimodule(act))
    with pytest.raises(AssertionError):
        multiplicity(plain, plain)


def test_identity_fusion_is_character_product():
    for act in (dual_c2(), dual_c4()):
        cands = id_candidates(act)
        for X, Y in itertools.product(cands, repeat=2):
            out = decompose(obj_tensor(X, Y), cands)
            want_chi = X.chi.mul(Y.chi)
            assert out == {c.label: (1 if c.chi == want_chi else 0) for c in cands}


def test_absorption_shifts_character():
    act = dual_c2()
    stab = ProjBimodule(act, 0, 0).stabilizer()
    cands = [proj_object(act, 0, 0, chi) for chi in act.group.characters(sub=stab)]
    for X in cands:
        for zeta in act.group.characters():
            T = obj_tensor(X, id_object(act, zeta))
            want_chi = X.chi.mul(zeta.restrict(stab))
            assert decompose(T, cands) == {
                c.label: (1 if c.chi == want_chi else 0) for c in cands
            }


def test_iso_equal():
    act = dual_c2()
    cands = id_candidates(act)
    triv, sgn = cands
    assert iso_equal(obj_tensor(sgn, sgn), triv, cands)
    assert not iso_equal(obj_tensor(sgn, sgn), sgn, cands)


def unitor_case(X, zeta, side):
    src, tgt, f, g = (unitor_right if side == "R" else unitor_left)(X, zeta)
    assert xmor_is_morphism(f) and xmor_is_morphism(g)
    assert src.chi == X.chi.mul(zeta.restrict(X.stab))
    assert g.compose(f) == src.idem
    assert f.compose(g) == tgt.idem


def test_unitors_invert_onto_shifted_idempotent():
    act = dual_c2()
    chars = act.group.characters()
    for chi, zeta, side in itertools.product(chars, chars, "RL"):
        unitor_case(id_object(act, chi), zeta, side)


def test_unitors_complex_character():
    act = dual_c4()
    z = act.group.characters()[1]
    assert not z.mul(z).is_trivial()
    unitor_case(id_object(act, z), z, "R")
    unitor_case(id_object(act, z), z, "L")


def test_unitors_on_proper_stabilizer():
    act = twoloops_c4()
    stab = ProjBimodule(act, 0, 0).stabilizer()
    chi = act.group.characters(sub=stab)[1]
    zeta = act.group.characters()[1]
    unitor_case(proj_object(act, 0, 0, chi), zeta, "R")
    unitor_case(proj_object(act, 0, 0, chi), zeta, "L")


def test_hom_completed_counts_radical_maps():
    act = dual_c2()
    cands = id_candidates(act)
    triv, sgn = cands
    assert len(hom_completed(triv, triv)) == 1
    # socle embedding: nonzero hom between distinct classes, but radical
    assert len(hom_completed(triv, sgn)) == 1
    square = obj_tensor(sgn, sgn)
    assert len(hom_completed(triv, square)) == len(hom_completed(sgn, square)) == 1
    assert multiplicity(triv, square) == 1
    assert multiplicity(sgn, square) == 0
