import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cextkit.ablinalg import FinAbGroup
from cextkit.classify import (Cocycle2, baer_sum, classify_centr1, cocycle_quotient,
                              cohomology_group, extension_from_cocycle, find_equivalence,
                              normalized_cocycles, pushforward, pushforward_cocycle,
                              verify_main_theorem)
from cextkit.corpus import group_name, named_group
from cextkit.errors import BudgetExceeded, PreconditionError
from cextkit.groups import GroupHom

from oracles import brute_h2


@pytest.mark.parametrize("z,a,expected", [("C2", "C2", (2,)), ("C3", "C2", ()),
                                          ("C1", "C2", ()), ("C2×C2", "C2", (2, 2, 2)),
                                          ("C4", "C2", (2,)), ("C2", "C4", (2,)),
                                          ("C3", "C3", (3,)), ("S3", "C2", (2,)),
                                          ("C6", "C3", (3,)), ("C2", "C2×C2", (2, 2))])
def test_second_cohomology_values(z, a, expected):
    assert cohomology_group(named_group(z), named_group(a), 2).invariant_factors == expected


@pytest.mark.parametrize("z,a", [("C2", (2,)), ("C3", (2,)), ("C4", (2,)), ("C2×C2", (2,)),
                                 ("C2", (4,)), ("C3", (3,)), ("C2", (2, 2)), ("C3", (4,)),
                                 ("C3", (2, 2)), ("C2", (3,))])
def test_second_cohomology_against_cochain_listing(z, a):
    Z = named_group(z)
    brute = brute_h2(Z, a)
    assert brute is not None
    assert cohomology_group(Z, FinAbGroup.from_orders(a), 2).invariant_factors == brute


def test_first_and_third_cohomology():
    C2, C4 = named_group("C2"), named_group("C4")
    assert cohomology_group(C2, C4, 1).invariant_factors == (2,)
    assert cohomology_group(named_group("C3"), C4, 1).invariant_factors == ()
    assert cohomology_group(C2, named_group("C2"), 3).invariant_factors == (2,)
    with pytest.raises(ValueError):
        cohomology_group(C2, C4, 0)


def test_cohomology_caps():
    with pytest.raises(BudgetExceeded):
        cohomology_group(named_group("C7"), named_group("C2"), 2)


def test_nontrivial_cocycle_gives_c4():
    C2 = named_group("C2")
    c = Cocycle2(C2, FinAbGroup((2,)), np.array([[0, 0], [0, 1]]))
    assert c.is_cocycle()
    E = extension_from_cocycle(c)
    assert E.check() and group_name(E.X) == "C4"


def test_cohomologous_cocycles_give_equivalent_extensions():
    Z, A = named_group("C4"), FinAbGroup((2,))
    Q = cocycle_quotient(Z, A)
    cocs = normalized_cocycles(Z, A)
    exts = [extension_from_cocycle(c) for c in cocs]
    for (i, c), (j, d) in itertools.combinations(enumerate(cocs), 2):
        same = Q.coset_of(c) == Q.coset_of(d)
        assert same == (find_equivalence(exts[i], exts[j]) is not None)


def test_classification_examples():
    G = classify_centr1(named_group("C2"), named_group("C2"))
    assert G.order == 2 and not G.law_violations()
    assert sorted(cl.name for cl in G.classes) == ["C2×C2", "C4"]
    assert G.classes[G.neutral].name == "C2×C2"
    c4 = next(i for i, cl in enumerate(G.classes) if cl.name == "C4")
    assert G.table[c4, c4] == G.neutral
    assert classify_centr1(named_group("C3"), named_group("C2")).order == 1


def test_baer_laws_and_neutral_on_grid():
    for z, a in [("C4", "C2"), ("C2×C2", "C2"), ("S3", "C3"), ("C2", "C2×C2")]:
        G = classify_centr1(named_group(z), named_group(a))
        assert not G.law_violations(), (z, a)
        for i, cl in enumerate(G.classes):
            E = cl.representative
            N = G.classes[G.neutral].representative
            assert G.identify(baer_sum(E, N)) == i


def test_pushforward_along_zero_is_neutral():
    Z, A = named_group("C2"), named_group("C2")
    G = classify_centr1(Z, A)
    zero = GroupHom(A, A, [0, 0])
    for cl in G.classes:
        assert G.identify(pushforward(cl.representative, zero)) == G.neutral


def test_pushforward_matches_cocycle_pushforward():
    Z = named_group("C2")
    B = FinAbGroup((4,))
    inc = GroupHom(named_group("C2"), B.as_group(), [0, 2])
    G4 = classify_centr1(Z, B)
    for c in normalized_cocycles(Z, FinAbGroup((2,))):
        E = extension_from_cocycle(c)
        via_cube = G4.identify(pushforward(E, inc))
        via_cocycle = G4.identify(extension_from_cocycle(pushforward_cocycle(c, inc, B)))
        assert via_cube == via_cocycle


def test_classification_cap_is_enforced():
    with pytest.raises(BudgetExceeded):
        classify_centr1(named_group("C6"), named_group("C2×C2"), cap=16)


def test_non_abelian_coefficients_rejected():
    with pytest.raises((PreconditionError, ValueError)):
        classify_centr1(named_group("C2"), named_group("S3"))


@pytest.mark.parametrize("z,a", [("C2", "C2"), ("C3", "C2"), ("C4", "C2"), ("C2×C2", "C2"),
                                 ("C2", "C2×C2")])
def test_main_theorem_small(z, a):
    assert verify_main_theorem(named_group(z), named_group(a)).ok


@given(st.sampled_from(["C2", "C3", "C4", "C2×C2"]), st.sampled_from([(2,), (3,), (4,)]),
       st.data())
def test_cocycle_sums_are_cocycles(z, a, data):
    Z, A = named_group(z), FinAbGroup(a)
    cocs = normalized_cocycles(Z, A)
    c = data.draw(st.sampled_from(cocs))
    d = data.draw(st.sampled_from(cocs))
    assert (c + d).is_cocycle()
