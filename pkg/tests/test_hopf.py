"""Hopf axioms and the strong-core Hopf-subalgebra certificates."""

import pytest

from diffalg.findiff import is_strongly_sigma_etale, strong_core
from diffalg.gallery import (broken_antipode_fixture, collapsed_dual_hopf,
                             group_automorphism_duals, group_dual_hopf,
                             invalid_swap_dual, product_carrier,
                             product_carrier_hopf, z3_inversion_dual)
from diffalg.hopf import (TruncatedGroupLikeHopf, hopf_validate,
                          hopf_validate_truncated,
                          strong_core_is_hopf_subalgebra,
                          strong_core_is_hopf_subalgebra_truncated,
                          union_of_etale_subalgebras_probe)


def test_group_like_product_carrier_validates():
    for char in (5, 7):
        H = product_carrier_hopf(char)
        rep = hopf_validate_truncated(H, 1)
        assert rep.ok, rep.violations[:5]


def test_collapsed_dual_is_a_difference_hopf_algebra():
    rep = hopf_validate(collapsed_dual_hopf(5))
    assert rep.ok


def test_z3_inversion_dual_validates_and_swaps_idempotents():
    H = z3_inversion_dual(5)
    assert hopf_validate(H).ok
    A = H.carrier
    images = [A.apply_sigma(A.basis_vec(j)) for j in range(3)]
    moved = sum(0 if A.vec_eq(images[j], A.basis_vec(j)) else 1 for j in range(3))
    assert moved == 2


def test_translation_dual_fails_sigma_compatibility():
    rep = hopf_validate(invalid_swap_dual(5))
    assert not rep.ok
    assert any(v[0] == "comul-sigma" for v in rep.violations)


def test_broken_antipode_reported_with_witness():
    rep = hopf_validate(broken_antipode_fixture(5))
    assert not rep.ok
    witnesses = [v[1] for v in rep.violations if v[0] == "antipode-law"]
    assert witnesses and 1 in witnesses    # the group-like basis vector


def test_group_like_hopf_requires_unit_caps():
    from diffalg.exactfield import PrimeField
    from diffalg.diffpoly import Presentation

    pres = Presentation(PrimeField(5), ["y"], ["y0^2-2"])
    with pytest.raises(ValueError):
        TruncatedGroupLikeHopf(pres)


def test_core_containment_on_matrix_carriers():
    for H in (z3_inversion_dual(5), collapsed_dual_hopf(5)):
        cert = strong_core_is_hopf_subalgebra(H)
        assert cert["status"] == "verified"
        assert len(cert["comul_witness"]) == cert["core_dimension"]


def test_core_containment_on_truncated_carrier():
    for char in (5, 7):
        cert = strong_core_is_hopf_subalgebra_truncated(
            product_carrier_hopf(char), 2)
        assert cert["status"] == "verified" and cert["core_dimension"] == 1


def test_every_automorphism_dual_has_a_full_hopf_core():
    duals = group_automorphism_duals(5)
    assert len(duals) >= 8
    for H in duals:
        assert hopf_validate(H).ok
        assert is_strongly_sigma_etale(H.carrier)
        cert = strong_core_is_hopf_subalgebra(H)
        assert cert["status"] == "verified"
        assert cert["core_dimension"] == H.carrier.dim


def test_collapsed_dual_core_is_proper():
    H = collapsed_dual_hopf(5)
    core = strong_core(H.carrier)
    assert core.algebra.dim == 1 < H.carrier.dim


def test_union_probe_grows_while_core_stays_small():
    for char in (5, 7):
        pres = product_carrier(char)
        dims = []
        for level in (1, 2, 3):
            probe = union_of_etale_subalgebras_probe(pres, level)
            assert probe["all_etale"]
            assert probe["slice_dimension"] >= 2 ** level
            dims.append(probe["slice_dimension"])
        assert dims[0] < dims[1] < dims[2]


def test_union_probe_zero_for_injective_sigma():
    from diffalg.gallery import swap_presentation

    probe = union_of_etale_subalgebras_probe(swap_presentation(5), 1)
    assert probe["slice_dimension"] == 0


def test_collapsed_line_probe_is_one_dimensional():
    from diffalg.gallery import collapsed_line

    probe = union_of_etale_subalgebras_probe(collapsed_line(5), 2)
    assert probe["slice_dimension"] == 1 and probe["all_etale"]


def test_z4_inversion_dual_validates():
    H = group_dual_hopf(5, (4,), lambda g: ((-g[0]) % 4,))
    assert hopf_validate(H).ok
    assert strong_core_is_hopf_subalgebra(H)["status"] == "verified"
