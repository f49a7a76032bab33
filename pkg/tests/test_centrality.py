import numpy as np
import pytest

from cextkit.centrality import (MaltsevOperation, check_product_decomposition,
                                degenerate_subgroup, diamond_pullback_holds, diamond_space,
                                is_H_central, p2, pr_A, pr_A_altsum, punctured_space,
                                punctured_space_via_limit, sign_profile)
from cextkit.corpus import named_group
from cextkit.cubes import arrow, cube_of_quotients, direction
from cextkit.groups import GroupHom, abelianize, cyclic, generated_subgroup

from oracles import retraction_exists


def d4_to_c2():
    D4 = named_group("D4")
    return cube_of_quotients(D4, [generated_subgroup(D4, [D4.labels.index("r")])])


def q8_to_v4():
    Q8 = named_group("Q8")
    return cube_of_quotients(Q8, [generated_subgroup(Q8, [Q8.labels.index("a²")])])


def test_centrality_examples():
    assert is_H_central(q8_to_v4())
    rep = is_H_central(d4_to_c2())
    assert not rep
    D4 = d4_to_c2().top_object
    assert D4.labels[rep.witness[2]] == "r²"


def test_diamond_counts_for_reduction():
    C4 = cyclic(4)
    F = arrow(GroupHom(C4, cyclic(2), [0, 1, 0, 1]))
    box = diamond_space(F)
    assert box.order == 8
    P = punctured_space(F, 0, box)
    assert P.order == 4
    assert np.array_equal(P.pi.kernel().elements, box.kappa(0, [0, 2]))


def test_c4_double_counts(c4_double):
    box = diamond_space(c4_double)
    assert box.order == 64
    for I in range(4):
        P = punctured_space(c4_double, I, box)
        assert P.order == 32
        assert box.order == direction(c4_double).order * P.order


def test_c4_double_decomposes_everywhere(c4_double):
    for I in range(4):
        cert = check_product_decomposition(c4_double, I)
        assert cert.ok and all(cert.checks.values())
        assert cert.D.order == 32


def test_dihedral_arrow_does_not_decompose():
    F = d4_to_c2()
    for I in range(2):
        cert = check_product_decomposition(F, I)
        assert not cert.ok
        assert cert.checks["abelian"] and cert.checks["count"] and not cert.checks["D_normal"]


def test_punctured_space_two_routes(ext_n2):
    for F in ext_n2[::5]:
        for I in range(F.top + 1):
            direct = punctured_space(F, I).group.rows
            via = punctured_space_via_limit(F, I)
            assert sorted(map(tuple, direct.tolist())) == sorted(map(tuple, via.tolist()))


def test_altsum_on_c4_double(c4_double):
    cert = check_product_decomposition(c4_double, 0)
    Q, eta = ab = abelianize(c4_double.top_object)
    alt = pr_A_altsum(c4_double, cert.box.rows, ab)
    assert np.array_equal(eta.images[cert.pr_A], alt)


def test_sign_profile_pinned_at_empty_puncture(ext_n2):
    for F in ext_n2:
        if is_H_central(F):
            assert sign_profile(F, 0) == 1


def test_pr_A_is_a_retraction(ext_n2):
    for F in ext_n2[::4]:
        cert = check_product_decomposition(F, 0)
        if not cert.ok:
            continue
        A = direction(F).subgroup.elements
        assert all(pr_A(cert, int(k)) == a for a, k in zip(A, cert.box.kappa(0, A)))
        G = cert.box.group
        x, y = np.meshgrid(np.arange(G.order), np.arange(G.order))
        xy = np.asarray(G.mul(x.ravel(), y.ravel()))
        X = F.top_object
        assert np.array_equal(cert.pr_A[xy], X.mul(cert.pr_A[x.ravel()], cert.pr_A[y.ravel()]))


def test_degenerate_subgroup_complements_direction(c4_double):
    box = diamond_space(c4_double)
    D = degenerate_subgroup(box)
    assert D.is_normal() and D.order * 2 == box.order


def test_decomposition_agrees_with_retraction_search(ext_n1, ext_n2):
    checked = 0
    for F in list(ext_n1[:80]) + list(ext_n2[::10]):
        for I in range(F.top + 1):
            r = retraction_exists(F, I, max_candidates=4096)
            if r is None:
                continue
            assert r == bool(check_product_decomposition(F, I)), (F.name, I)
            checked += 1
    assert checked >= 150


def test_maltsev_identities_on_c4_double(c4_double):
    # α at {0}, β at {0,1}, γ at {1}: α ~ β along f_1 and γ ~ β along f_0
    op = MaltsevOperation(c4_double, 0)
    X = c4_double.top_object
    f0, f1 = c4_double.top_map(0).images, c4_double.top_map(1).images
    first = second = 0
    for a in range(X.order):
        for g in range(X.order):
            if f0[a] == f0[g]:
                assert p2(op, a, a, g) == g
                first += 1
            if f1[a] == f1[g]:
                assert p2(op, a, g, g) == a
                second += 1
    assert first == 8 and second == 16


def test_diamond_pullback_lemma(ext_n2):
    for F in ext_n2[::3]:
        for I in range(F.top + 1):
            assert diamond_pullback_holds(F, I)


def test_maltsev_needs_decomposition():
    with pytest.raises(ValueError):
        MaltsevOperation(d4_to_c2(), 0)
