"""Towers: construction, limit degree, cores, chains, compatibility."""

import math
import random

import pytest

from diffalg.exactfield import FunctionField, PrimeField, Rationals, ShiftField
from diffalg.gallery import (chain_for, collapse_tower_f5, corrupted_chain,
                             cubic_tower_f7, fourth_root_tower_f5,
                             frobenius_tower, radical_tower_f5, repaired_chain,
                             stacked_tower_f5)
from diffalg.towers import (BabbittChain, InconsistentDynamicsError,
                            NotGaloisError, TowerError, TowerExtension,
                            babbitt_search, babbitt_verify, benign_make,
                            compatible, core_sradicial_over_strong_core_check,
                            field_sigma_radicial_over, inversive_closure,
                            is_sigma_radicial, limit_degree,
                            strong_core_finite_ext, tower_from_json,
                            tower_make, tower_to_json)

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)
S5 = ShiftField(F5)


# -- construction --------------------------------------------------------------


def test_radical_tower_construction():
    T = radical_tower_f5()
    a0 = T.gen_by_name("a0")
    sq = T.mul(a0, a0)
    assert T.eq(sq, T.const(S5.t(0)))
    # sigma rule closure: sigma(a0) = a1 and a1^2 = t1
    sa = T.sigma(a0)
    a1 = T.gen_by_name("a1")
    assert T.eq(sa, a1)


def test_finite_tower_frobenius():
    T = frobenius_tower(3, [1, 0, 1], 1)
    al = T.gen_by_name("g")
    assert T.eq(T.sigma(al), T.neg(al))


def test_inconsistent_sigma_rule_rejected():
    with pytest.raises(InconsistentDynamicsError):
        tower_make(F3, [{"name": "a", "minpoly": [1, 0, 1], "sigma": "a+1"}])


def test_reducible_explicit_level_rejected():
    with pytest.raises(TowerError):
        tower_make(F5, [{"name": "a", "minpoly": [-1, 0, 1], "sigma": "a"}])


def test_inseparable_level_rejected():
    K = FunctionField(F5, [0, 0, 1], [1])
    with pytest.raises(TowerError):
        tower_make(K, [{"name": "a", "minpoly": ["-t", 0, 0, 0, 0, 1],
                        "sigma": "t"}])


def test_trivial_benign_rejected():
    with pytest.raises(TowerError):
        benign_make(S5, ["-1", 1], kind="radical")


def test_benign_galois_requires_roots_of_unity():
    with pytest.raises(NotGaloisError):
        benign_make(S5, ["-t0", 0, 0, 1], kind="radical")


def test_tower_inverse_through_levels():
    T = radical_tower_f5()
    from diffalg.towers import _TowerFieldView

    a0 = T.gen_by_name("a0")
    x = T.add(a0, T.one())
    view = _TowerFieldView(T, len(T.levels))
    inv = view.inv(x)
    assert T.eq(T.mul(inv, x), T.one())


# -- limit degree ----------------------------------------------------------------


def test_limit_degree_radical_certified():
    rep = limit_degree(radical_tower_f5(), horizon=5)
    assert rep.d_sequence == [2] * 6
    assert rep.value == 2 and rep.certified


def test_limit_degree_cubic():
    rep = limit_degree(cubic_tower_f7(), horizon=4)
    assert rep.value == 3 and rep.certified


def test_limit_degree_finite_extension_drops_to_one():
    rep = limit_degree(frobenius_tower(3, [1, 0, 1], 1), horizon=5)
    assert rep.d_sequence[0] == 2 and rep.value == 1


def test_limit_degree_stacked_multiplicative():
    rep = limit_degree(stacked_tower_f5(), horizon=4)
    assert rep.d_sequence[0] == 8
    assert rep.value == 4
    block = limit_degree(radical_tower_f5(), horizon=4)
    assert rep.value == block.value * 2   # two stacked quadratic blocks


def test_limit_degree_nonincreasing_enforced():
    rep = limit_degree(stacked_tower_f5(), horizon=6)
    seq = rep.d_sequence
    assert all(b <= a for a, b in zip(seq, seq[1:]))


# -- transform degree laws ----------------------------------------------------------


def test_transform_of_generator_keeps_degree():
    T = radical_tower_f5()
    a0 = T.gen_by_name("a0")
    sa = T.sigma(a0)
    lc = len(T.levels)
    assert T.degree_over_base(a0, lc) == T.degree_over_base(sa, lc) == 2


def test_elements_of_the_bottom_level_never_reach_the_base():
    T = radical_tower_f5()
    a0 = T.gen_by_name("a0")
    b = T.add(a0, T.one())
    cur = b
    for _ in range(4):
        cur = T.sigma(cur)
        assert not T.in_base(cur)


# -- sigma-radicial ------------------------------------------------------------------


def test_radicial_collapse_example():
    T = collapse_tower_f5()
    v = is_sigma_radicial(T, horizon=4)
    assert v.status == "radicial" and v.exponents == {"a": 1}


def test_radicial_unknown_for_benign():
    v = is_sigma_radicial(radical_tower_f5(), horizon=3)
    assert v.status == "unknown" and v.evidence


def test_field_inversive_closure_is_radicial():
    deep = inversive_closure(S5, 2)
    v = field_sigma_radicial_over(deep, S5)
    assert v.status == "radicial" and v.exponents["t"] == 2
    assert inversive_closure(F5, 3) == F5


def test_tower_inversive_closure_preimage_chain():
    B = radical_tower_f5()
    Bs = inversive_closure(B, 2)
    am2 = Bs.gen_by_name("a_m2")
    am1 = Bs.gen_by_name("a_m1")
    assert Bs.eq(Bs.sigma(am2), am1)
    sq = Bs.mul(am2, am2)
    assert Bs.eq(sq, Bs.const(Bs.base.t(-2)))


def test_inversive_closure_unsupported_for_expanding_function_field():
    K = FunctionField(F5, [0, 0, 1], [1])
    with pytest.raises(TowerError):
        inversive_closure(K, 1)


# -- strong cores of finite extensions --------------------------------------------------


def test_core_of_frobenius_extension_is_everything():
    res = strong_core_finite_ext(frobenius_tower(3, [1, 0, 1], 1))
    assert res.algebra.dim == 2 and res.strongly_sigma_etale
    assert res.radicial_exponents == {"g": 0}


def test_core_of_collapse_tower_is_base():
    res = strong_core_finite_ext(collapse_tower_f5())
    assert res.algebra.dim == 1
    assert res.radicial_exponents == {"a": 1}
    assert res.strongly_sigma_etale


def test_core_of_fourth_root_tower():
    res = strong_core_finite_ext(fourth_root_tower_f5())
    assert res.algebra.dim == 1
    assert res.radicial_exponents == {"a": 2}


def test_core_idempotence_via_relative_rerun():
    T = fourth_root_tower_f5()
    first = strong_core_finite_ext(T)
    again = strong_core_finite_ext(T, over=first.basis_elements)
    assert again.span.equals(first.span)

    T2 = frobenius_tower(2, [1, 1, 1], 1)
    first2 = strong_core_finite_ext(T2)
    again2 = strong_core_finite_ext(T2, over=first2.basis_elements)
    assert again2.span.equals(first2.span)


def test_core_certificate_bundle():
    cert = core_sradicial_over_strong_core_check(collapse_tower_f5())
    assert cert["strongly_sigma_etale"] and cert["radicial_exponents"] == {"a": 1}
    cert2 = core_sradicial_over_strong_core_check(frobenius_tower(2, [1, 1, 1], 0))
    assert cert2["radicial_exponents"] == {"g": 0}


def test_core_closed_under_realized_conjugation():
    # the materialized conjugation of F9 over F3 maps the core into itself
    T = frobenius_tower(3, [1, 0, 1], 1)
    res = strong_core_finite_ext(T)
    g = T.gen_by_name("g")
    conj = T.neg(g)   # the nontrivial conjugate of the generator
    cv = T.coords(conj, res.monos, res.index)
    assert cv is not None and res.span.contains(cv)


# -- Babbitt chains -------------------------------------------------------------------------


def test_shipped_chains_verify():
    for chain in (chain_for(radical_tower_f5()), chain_for(cubic_tower_f7())):
        cert = babbitt_verify(chain, horizon=4)
        assert cert["verdict"] == "verified", cert


def test_stacked_chain_has_two_benign_steps():
    chain = chain_for(stacked_tower_f5())
    assert len(chain.steps) == 3
    cert = babbitt_verify(chain, horizon=3)
    assert cert["verdict"] == "verified"


def test_corrupted_chain_refuted_with_witness():
    cert = babbitt_verify(corrupted_chain(), horizon=3)
    assert cert["verdict"] == "refuted"
    assert cert["witness"] is not None and "element" in cert["witness"]


def test_repaired_chain_verifies():
    cert = babbitt_verify(repaired_chain(), horizon=3)
    assert cert["verdict"] == "verified"


def test_search_finds_benign_generator():
    rep = babbitt_search(radical_tower_f5(), ["a0"], horizon=3)
    assert rep["found"] and rep["steps"] == 1
    assert rep["certificate"]["verdict"] == "verified"


def test_search_empty_candidates_fails_gracefully():
    rep = babbitt_search(radical_tower_f5(), [], horizon=3)
    assert not rep["found"] and "reason" in rep


def test_search_finite_case_returns_zero_steps():
    rep = babbitt_search(frobenius_tower(3, [1, 0, 1], 1), [], horizon=3)
    assert rep["found"] and rep["steps"] == 0


def test_chain_json_round_trip():
    chain = chain_for(radical_tower_f5())
    blob = chain.to_json()
    again = BabbittChain.from_json(blob)
    cert = babbitt_verify(again, horizon=3)
    assert cert["verdict"] == "verified"


# -- compatibility ----------------------------------------------------------------------------


def _oracle(d1, m1, d2, m2):
    D = math.lcm(d1, d2)
    return any((r - m1) % d1 == 0 and (r - m2) % d2 == 0 for r in range(D))


def test_compatibility_matches_embedding_oracle_on_all_pairs():
    structures = [(2, m, frobenius_tower(2, [1, 1, 1], m)) for m in range(2)]
    structures += [(4, m, frobenius_tower(2, [1, 1, 0, 0, 1], m)) for m in range(4)]
    for d1, m1, T1 in structures:
        for d2, m2, T2 in structures:
            v = compatible(T1, T2)
            assert v.compatible == _oracle(d1, m1, d2, m2), (d1, m1, d2, m2)
            if v.compatible:
                assert v.witness is not None


def test_twisted_f4_pair_incompatible():
    L = frobenius_tower(2, [1, 1, 1], 1)
    Lp = frobenius_tower(2, [1, 1, 1], 0)
    assert not compatible(L, Lp).compatible
    assert compatible(L, L).compatible


def test_radicial_extensions_compatible_with_anything_available():
    radicial = collapse_tower_f5()
    for other in (fourth_root_tower_f5(), collapse_tower_f5()):
        assert compatible(other, radicial).compatible


def test_compatibility_rejects_mixed_bases():
    with pytest.raises(TypeError):
        compatible(frobenius_tower(2, [1, 1, 1], 0), collapse_tower_f5())


# -- serialization -----------------------------------------------------------------------------


def test_tower_json_round_trip_explicit_and_lazy():
    for T in (frobenius_tower(3, [1, 0, 1], 1), radical_tower_f5(),
              stacked_tower_f5()):
        blob = tower_to_json(T)
        again = tower_from_json(blob)
        r1 = limit_degree(T, horizon=3)
        r2 = limit_degree(again, horizon=3)
        assert r1.d_sequence == r2.d_sequence
