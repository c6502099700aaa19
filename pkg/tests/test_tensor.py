import pytest

from minorbit import liealg, ratlin, tensor
from minorbit.catalog import Family, dual_pair, get_class


def test_o66_rank2_stabilizer_dimensions(o3):
    dec = tensor.stabilizer_sk(o3, 2)
    assert dec.dims() == {
        "s_k": 22, "s_k_prime": 18, "u_k": 8, "l_k": 4, "g_k": 10, "h_k": 6}


def test_gl6_rank2_stabilizer_dimensions(gl3):
    dec = tensor.stabilizer_sk(gl3, 2)
    assert dec.dims() == {
        "s_k": 10, "s_k_prime": 8, "u_k": 4, "l_k": 2, "g_k": 4, "h_k": 2}


def test_rank1_consistency_with_direct_stabilizer(all_models):
    for m in all_models:
        dec = tensor.stabilizer_sk(m, 1)
        direct = liealg.stabilizer_algebra(m, m.triples[0].y)
        assert dec.s_k_dim == direct.dim
        assert ratlin.span_intersection_dim(dec.s_k.coords, direct.coords) == direct.dim
        # the two stabilizers coincide at k = 1
        assert dec.s_k_prime_dim == dec.s_k_dim


def test_k_range_validation(o2):
    with pytest.raises(ValueError):
        tensor.stabilizer_sk(o2, 0)
    with pytest.raises(ValueError):
        tensor.stabilizer_sk(o2, 2)


def test_structure_invariants(o3, gl3):
    for m, k in ((o3, 2), (gl3, 2), (o3, 1)):
        dec = tensor.stabilizer_sk(m, k)
        rep = tensor.decomposition_invariants(m, dec)
        assert rep.passed, rep.to_json()


def test_audit_matches_catalog(o3, gl3):
    rep = tensor.audit_dual_pair(o3, 2)
    assert rep.passed, rep.to_json()
    assert rep.meta["expected"] == "Sp_4(R)/[SL_2(R)]^2"
    rep = tensor.audit_dual_pair(gl3, 2)
    assert rep.passed
    assert rep.meta["expected"] == "GL_2(R)/[GL_1(R)]^2"


def test_audit_dims_against_closed_forms(o3):
    pair = dual_pair(get_class(Family.O2N2N), 2, n=3)
    dec = tensor.stabilizer_sk(o3, 2)
    assert dec.g_k_dim == pair.g_dim == 10   # k(2k+1) for Sp_2k(R)
    assert dec.h_k_dim == pair.h_dim == 6    # 3k for [SL_2(R)]^k


def test_nilradical_shared_between_stabilizers(o3):
    dec = tensor.stabilizer_sk(o3, 2)
    rad_prime = tensor._form_radical(o3, dec.s_k_prime)
    assert rad_prime.dim == dec.u_k_dim
    assert ratlin.span_intersection_dim(
        rad_prime.coords, dec.nilradical.coords) == dec.u_k_dim
