import numpy as np
import pytest

from cextkit.centrality import is_H_central
from cextkit.corpus import named_group, non_resolution_example, quotient_truncation
from cextkit.cubes import direction
from cextkit.groups import cyclic, generated_subgroup
from cextkit.limits import simplicial_kernel
from cextkit.simplicial import (HornMultiplication, boundary_map, coskeleton, cycles, decalage,
                                delta_lambda_square_is_pullback, horns, is_resolution,
                                k_object, neutral_torsor, torsor_check)

from oracles import enumerated_sum_condition


def c4_over_c2():
    C4 = cyclic(4)
    return quotient_truncation(C4, generated_subgroup(C4, [2]))


def d4_over_c2():
    D4 = named_group("D4")
    return quotient_truncation(D4, generated_subgroup(D4, [D4.labels.index("r")]))


def test_one_cycles_are_the_kernel_pair():
    assert cycles(c4_over_c2(), 1).order == 8


def test_two_cycles_of_k_object_two_routes():
    K = k_object(cyclic(2), cyclic(2), 1)
    cyc = cycles(K, 2)
    G, _ = simplicial_kernel([K.face(1, i) for i in range(2)])
    assert cyc.order == G.order
    # brute force: (x0, x1, x2) with d_i x_j = d_{j-1} x_i for i < j
    X1, d = K.level(1), [K.face(1, i).images for i in range(2)]
    brute = sum(1 for a in range(X1.order) for b in range(X1.order) for c in range(X1.order)
                if d[0][b] == d[0][a] and d[0][c] == d[1][a] and d[1][c] == d[1][b])
    assert cyc.order == brute


def test_k_object_identities_and_resolution():
    for n in (0, 1, 2):
        K = k_object(cyclic(3), cyclic(2), n)
        assert K.identity_witness() is None
        assert is_resolution(K.truncate(n))


def test_non_resolution_has_witness():
    rep = is_resolution(non_resolution_example())
    assert not rep and rep.level == 1 and rep.witness is not None


def test_coskeleton_of_zero_truncation():
    T = c4_over_c2()
    C = coskeleton(T, 1)
    assert C.level(1).order == 8
    diag = C.degen(0, 0).images
    assert all(tuple(r) == (x, x) for x, r in zip(range(4), C.level(1).rows[diag].tolist()))
    assert C.identity_witness() is None


def test_coskeleton_levels_are_cycles():
    T = neutral_torsor(cyclic(2), cyclic(2), 1)
    C = coskeleton(T, 2)
    assert C.identity_witness() is None
    for k in (1, 2):
        b = boundary_map(C, k)
        assert b.is_injective()


def test_simplicial_identities_on_corpus(torsors):
    assert all(T.identity_witness() is None for T in torsors)


def test_torsor_examples():
    assert torsor_check(c4_over_c2()).ok
    cert = torsor_check(d4_over_c2())
    assert not cert.ok


def test_neutral_torsors_certify():
    for n in (1, 2):
        cert = torsor_check(neutral_torsor(named_group("S3"), cyclic(2), n))
        assert cert.ok and cert.n == n and cert.direction.order == 2


def test_horn_kernels_are_the_direction(torsors):
    for T in torsors[::6]:
        cert = torsor_check(T)
        if not cert.ok:
            continue
        for hn in cert.horns.values():
            ker = np.flatnonzero(hn.restriction.images == 0)
            assert len(ker) == cert.direction.order
            assert set(cert.varsigma[ker].tolist()) == set(cert.direction.subgroup.elements.tolist())


def test_unique_null_completion_of_horns(torsors):
    for T in torsors[::6]:
        cert = torsor_check(T)
        if not cert.ok:
            continue
        null = np.flatnonzero(cert.varsigma == 0)
        for i, hn in cert.horns.items():
            assert len(null) == hn.group.order
            assert len(np.unique(hn.restriction.images[null])) == hn.group.order
            assert (HornMultiplication(cert, i).table >= 0).all()


def test_delta_lambda_pullback(torsors):
    for T in torsors[::8]:
        n = T.t + 1
        for i in range(n + 1):
            assert delta_lambda_square_is_pullback(T, n, i)


def test_sum_condition_against_full_enumeration(torsors):
    checked = 0
    for T in torsors[::3]:
        cert = torsor_check(T)
        if not cert.ok or cert.cycles.order > 32:
            continue
        ok, count = enumerated_sum_condition(T, cert)
        assert ok and count > 0
        checked += 1
    assert checked >= 30


def test_torsor_and_centrality_agree(torsors):
    for T in torsors[::4]:
        assert torsor_check(T).ok == bool(is_H_central(T.underlying_cube()))


def test_decalage_shape():
    K = k_object(cyclic(2), cyclic(3), 2)
    D, d = decalage(K)
    assert D.t == K.t - 1 and D.identity_witness() is None
    for k, h in d.items():
        assert h.domain is K.level(k + 1) and h.codomain is K.level(k)


def test_full_k_object_is_not_an_extension():
    from cextkit.cubes import is_extension
    K = k_object(cyclic(2), cyclic(2), 1)
    assert not is_extension(K.underlying_cube())


def test_horn_bounds():
    T = c4_over_c2()
    with pytest.raises(ValueError):
        horns(T, 1, 2)
    with pytest.raises(ValueError):
        cycles(T, 3)


def test_direction_of_neutral_torsor_is_coefficients():
    T = neutral_torsor(cyclic(3), cyclic(4), 2)
    A = direction(T.underlying_cube())
    assert A.order == 4 and A.group.exponent == 4
