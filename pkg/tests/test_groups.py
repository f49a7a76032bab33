import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cextkit.corpus import named_group, small_groups
from cextkit.errors import NotAHomomorphism
from cextkit.groups import (FiniteGroup, GroupHom, Subgroup, abelianize, all_homomorphisms,
                            centre, closure, commutator_subgroup, cyclic, derived_subgroup,
                            dihedral, direct_product, find_isomorphism, from_permutations,
                            full_subgroup, generated_subgroup, normal_closure, quaternion,
                            quotient, symmetric)

SMALL = small_groups(12)


def test_dihedral_labels_and_rotation_closure():
    D4 = dihedral(4)
    assert D4.order == 8
    assert D4.labels[:4] == ["e", "r", "r²", "r³"]
    r = D4.labels.index("r")
    C = closure(D4, [r])
    assert sorted(D4.labels[g] for g in C) == sorted(["e", "r", "r²", "r³"])


def test_quaternion_derived_subgroup_is_centre():
    Q8 = quaternion()
    D = derived_subgroup(Q8)
    assert D.order == 2
    assert np.array_equal(D.elements, centre(Q8).elements)


@pytest.mark.parametrize("name", ["D4", "Q8"])
def test_abelianization_is_klein(name):
    G = named_group(name)
    Q, eta = abelianize(G)
    assert Q.order == 4 and Q.is_abelian() and Q.exponent == 2
    assert eta.is_surjective()


def test_quotients():
    C4 = cyclic(4)
    Q, q = quotient(C4, generated_subgroup(C4, [2]))
    assert Q.order == 2 and q.kernel().order == 2
    D4 = dihedral(4)
    r2 = D4.labels.index("r²")
    Q, q = quotient(D4, generated_subgroup(D4, [r2]))
    assert Q.order == 4 and Q.is_abelian()


def test_homomorphism_kernels_and_images():
    C4, C2 = cyclic(4), cyclic(2)
    red = GroupHom(C4, C2, [0, 1, 0, 1])
    assert red.kernel().order == 2 and red.is_surjective()
    inc = GroupHom(C2, C4, [0, 2])
    assert inc.kernel().is_trivial() and inc.is_injective()
    assert list(inc.image().elements) == [0, 2]


def test_non_homomorphism_is_rejected():
    with pytest.raises(NotAHomomorphism):
        GroupHom(cyclic(3), cyclic(3), [0, 1, 1])


def test_table_validation_rejects_non_groups():
    with pytest.raises(ValueError):
        FiniteGroup(np.array([[0, 1], [1, 1]]))


def test_permutation_generation_gives_s4():
    S4, perms = from_permutations([[1, 0, 2, 3], [1, 2, 3, 0]])
    assert S4.order == 24 and perms[0] == (0, 1, 2, 3)
    assert find_isomorphism(S4, symmetric(4)) is not None


def test_commutator_of_dihedral_rotation_with_whole_group():
    D4 = dihedral(4)
    C4 = generated_subgroup(D4, [D4.labels.index("r")])
    comm = commutator_subgroup(D4, C4, full_subgroup(D4))
    assert [D4.labels[g] for g in comm.elements] == ["e", "r²"]


group_strategy = st.sampled_from(SMALL)


@given(group_strategy, st.data())
def test_commutator_symmetry(G, data):
    a = data.draw(st.integers(0, G.order - 1))
    b = data.draw(st.integers(0, G.order - 1))
    assert G.inv(G.commutator(a, b)) == G.commutator(b, a)


@given(group_strategy, st.data())
def test_commutator_subgroup_symmetric_and_normal(G, data):
    subs = [generated_subgroup(G, [g]) for g in range(G.order)]
    K = data.draw(st.sampled_from(subs))
    L = data.draw(st.sampled_from(subs))
    KN = normal_closure(G, K.elements)
    LN = normal_closure(G, L.elements)
    A = commutator_subgroup(G, KN, LN)
    B = commutator_subgroup(G, LN, KN)
    assert np.array_equal(A.elements, B.elements)
    assert A.is_normal()


@given(group_strategy, group_strategy)
def test_first_isomorphism_theorem(G, H):
    for h in all_homomorphisms(G, H)[:6]:
        Q, q = quotient(G, h.kernel())
        assert Q.order * h.kernel().order == G.order
        assert Q.order == h.image().order


@given(group_strategy)
def test_associativity_and_inverses(G):
    els = G.elements
    for a, b in itertools.product(range(G.order), repeat=2):
        lhs = G.mul(G.mul(a, b), els)
        rhs = G.mul(a, G.mul(b, els))
        assert np.array_equal(lhs, rhs)
    assert np.all(G.mul(els, G.inv(els)) == 0)


@given(group_strategy, group_strategy)
def test_direct_product_order_and_projections(G, H):
    P = direct_product(G, H)
    assert P.order == G.order * H.order
    assert P.is_abelian() == (G.is_abelian() and H.is_abelian())


def test_subgroup_mask_roundtrip():
    S3 = symmetric(3)
    S = Subgroup(S3, [0, 1])
    assert S.mask.sum() == 2 and S.contains(1)
    H, inc = S.as_group()
    assert H.order == 2 and inc.is_injective()
