"""Finite-dimensional difference algebras: predicates, idempotents, cores."""

import random

import pytest

import diffalg._linalg as la
from diffalg.exactfield import GaloisField, PrimeField, Rationals
from diffalg.findiff import (FinSigmaAlgebra, RestrictedAutomationError,
                             ZeroRingError, algebra_validate, base_change,
                             is_etale, is_periodic, is_sigma_reduced,
                             is_sigma_separable, is_strongly_sigma_etale,
                             minimal_polynomial, primitive_idempotents,
                             quotient_by_sigma_ideal, restrict_scalars,
                             sigma_subalgebra_generated, splitting_extension,
                             strong_core, tensor_product, twist_and_psi)
from diffalg.instances import (conjugate, diagonal_algebra, field_algebra,
                               nilpotent_sigma_separable, random_invertible,
                               random_point_algebra, random_strongly_setale,
                               random_valid_algebra)
from diffalg.poly import factor_over_finite_field

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


def collapsed_pair(k):
    """Two points; sigma sends one indicator to one and the other to zero."""
    return diagonal_algebra(k, [0, 0])


def swap_pair(k):
    return diagonal_algebra(k, [1, 0])


def poly_quotient(k, coeffs_f, image_exp):
    """k[y]/(f) with sigma(y) = y^image_exp, as explicit structure data."""
    from diffalg import _polycore as pc

    f = [k.canon(c) for c in coeffs_f]
    n = len(f) - 1
    pows = []
    for e in range(2 * n):
        xe = pc.mod(k, pc.shift(k, [k.one()], e), f)
        pows.append(list(xe) + [k.zero()] * (n - len(xe)))
    mul = [[list(pows[i + j]) for j in range(n)] for i in range(n)]
    unit = [k.one()] + [k.zero()] * (n - 1)
    sig_cols = []
    for e in range(n):
        ye = pc.mod(k, pc.shift(k, [k.one()], e * image_exp), f)
        sig_cols.append(list(ye) + [k.zero()] * (n - len(ye)))
    sigma = [[sig_cols[c][r] for c in range(n)] for r in range(n)]
    return FinSigmaAlgebra(k, mul, unit, sigma)


# -- validation ------------------------------------------------------------------


def test_validation_accepts_the_gallery():
    for A in (collapsed_pair(F5), swap_pair(F5), field_algebra(2, [1, 1, 1])):
        assert algebra_validate(A).ok


def test_validation_reports_commutativity_defect():
    A = swap_pair(F5)
    A.mul[0][1] = [F5.one(), F5.zero()]     # break e1*e2 without touching e2*e1
    rep = algebra_validate(A)
    assert not rep.ok
    assert any(v[0] == "commutativity" for v in rep.violations)


def test_validation_reports_sigma_unit_defect():
    A = swap_pair(F5)
    A.sigma[0][0] = F5.one()    # sigma(e1) = e1 + e2 while sigma(e2) = e1
    rep = algebra_validate(A)
    assert not rep.ok
    assert any("sigma" in v[0] for v in rep.violations)


# -- predicates -------------------------------------------------------------------


def test_collapsed_pair_predicate_profile():
    R1 = collapsed_pair(F5)
    assert not is_sigma_separable(R1)
    assert not is_sigma_reduced(R1)
    assert is_etale(R1)
    assert not is_strongly_sigma_etale(R1)


def test_swap_pair_predicate_profile():
    SW = swap_pair(F5)
    assert is_sigma_separable(SW) and is_etale(SW)
    assert is_strongly_sigma_etale(SW)


def test_field_case_predicates():
    A = field_algebra(2, [1, 1, 1])
    assert is_sigma_separable(A) and is_etale(A) and is_strongly_sigma_etale(A)


def test_etale_cross_checked_with_factorization():
    # split <=> squarefree defining polynomial, cross-check the trace form
    square_free = poly_quotient(F5, [4, 0, 1], 1)   # y^2 - 1
    doubled = poly_quotient(F5, [0, 0, 1], 1)       # y^2
    assert is_etale(square_free)
    assert not is_etale(doubled)
    from diffalg.poly import Poly

    fl = factor_over_finite_field(Poly.from_ints(F5, [4, 0, 1]))
    assert all(m == 1 for _, m in fl.factors)


def test_nilpotent_sigma_separable_profile():
    A = nilpotent_sigma_separable(F5, F5.from_int(2))
    assert is_sigma_separable(A) and not is_etale(A)


def test_separability_reduction_equivalence_over_inversive_bases():
    rng = random.Random(17)
    for _ in range(200):
        k = (F2, F3, F5)[rng.randrange(3)]
        A = random_valid_algebra(k, rng, max_dim=4)
        assert is_sigma_separable(A) == is_sigma_reduced(A)


def test_frobenius_structures_tie_separability_to_etale():
    # with sigma the p-power map, sigma-separable and etale coincide
    rng = random.Random(19)
    count = 0
    for p in (2, 3):
        k = PrimeField(p)
        for _ in range(60):
            dim = rng.randint(1, 4)
            coeffs = [k.sample(rng) for _ in range(dim)] + [k.one()]
            A = poly_quotient(k, coeffs, p)
            assert algebra_validate(A).ok
            assert is_sigma_separable(A) == is_etale(A)
            count += 1
    assert count == 120


# -- idempotents --------------------------------------------------------------------


def test_primitive_idempotents_of_split_quadratic():
    A = poly_quotient(F5, [4, 0, 1], 1)   # y^2 = 1
    prims = primitive_idempotents(A)
    assert len(prims) == 2
    # the indicator idempotents (1 +- y)/2 with 1/2 = 3 mod 5
    found = {tuple(e.coords) for e in prims}
    assert found == {(3, 3), (3, 2)}
    e1, e2 = [e.coords for e in prims]
    assert A.vec_is_zero(A.multiply(e1, e2))
    assert A.vec_eq(A.vec_add(e1, e2), A.unit)


def test_primitive_idempotents_of_a_field():
    A = field_algebra(3, [1, 0, 1])
    prims = primitive_idempotents(A)
    assert len(prims) == 1
    assert A.vec_eq(prims[0].coords, A.unit)


def test_primitive_idempotents_with_radical_part():
    # y^2(y+1): one local factor with nilpotents, one reduced point
    A = poly_quotient(F2, [0, 0, 1, 1], 1)
    prims = primitive_idempotents(A)
    assert len(prims) == 2


def test_supplied_idempotents_are_verified():
    A = swap_pair(F5)
    with pytest.raises(ValueError):
        primitive_idempotents(A, supplied=[[F5.from_int(2), F5.zero()]])
    ok = primitive_idempotents(A, supplied=[A.basis_vec(0), A.basis_vec(1)])
    assert len(ok) == 2


def test_enumeration_needs_finite_base_or_supplied_data():
    Q = Rationals()
    one = Q.one()
    zero = Q.zero()
    A = FinSigmaAlgebra(Q, [[[one]]], [one], [[one]])
    # dim-1 over Q: restricted automation
    with pytest.raises(RestrictedAutomationError):
        primitive_idempotents(A)


# -- periodicity ----------------------------------------------------------------------


def test_periodicity_examples():
    SW = swap_pair(F5)
    res = is_periodic(SW, SW.basis_vec(0))
    assert res.is_periodic() and res.period == 2

    R1 = collapsed_pair(F5)
    res2 = is_periodic(R1, R1.basis_vec(1))
    assert res2.status == "nonperiodic" and res2.reason == "orbit-hits-zero"
    res3 = is_periodic(R1, R1.basis_vec(0))
    assert res3.status == "nonperiodic"

    ident = diagonal_algebra(F5, [0, 1])
    res4 = is_periodic(ident, ident.basis_vec(0))
    assert res4.is_periodic() and res4.period == 1


# -- subalgebras and quotients -----------------------------------------------------------


def test_subalgebra_generated_by_nothing_is_scalars():
    SW = swap_pair(F5)
    sub, incl = sigma_subalgebra_generated(SW, [])
    assert sub.dim == 1 and incl.validate().ok


def test_subalgebra_generated_by_one_indicator_is_everything():
    SW = swap_pair(F5)
    sub, incl = sigma_subalgebra_generated(SW, [SW.basis_vec(0)])
    assert sub.dim == 2 and incl.validate().ok


def test_generated_by_periodic_idempotents_is_strongly_setale():
    rng = random.Random(23)
    for _ in range(50):
        A = random_point_algebra(F5, rng, rng.randint(2, 4))
        prims = primitive_idempotents(A)
        periodic = [e.coords for e in prims
                    if is_periodic(A, e.coords).is_periodic()]
        sub, _ = sigma_subalgebra_generated(A, periodic)
        assert is_strongly_sigma_etale(sub)


def test_quotient_by_whole_algebra_rejected():
    SW = swap_pair(F5)
    with pytest.raises(ZeroRingError):
        quotient_by_sigma_ideal(SW, [SW.basis_vec(0)])


def test_quotient_by_zero_ideal_is_identity():
    SW = swap_pair(F5)
    Q, proj = quotient_by_sigma_ideal(SW, [])
    assert Q.dim == SW.dim and proj.validate().ok


def test_quotient_of_collapsed_pair():
    R1 = collapsed_pair(F5)
    Q, proj = quotient_by_sigma_ideal(R1, [R1.basis_vec(1)])
    assert Q.dim == 1 and proj.validate().ok


# -- tensor products ----------------------------------------------------------------------


def test_tensor_unit_law():
    SW = swap_pair(F5)
    one_dim = diagonal_algebra(F5, [0])
    T = tensor_product(one_dim, SW)
    assert T.dim == 2 and algebra_validate(T).ok
    assert is_strongly_sigma_etale(T)


def test_tensor_of_swaps_has_two_two_cycles():
    SW = swap_pair(F5)
    T = tensor_product(SW, SW)
    assert algebra_validate(T).ok
    prims = primitive_idempotents(T)
    periods = sorted(is_periodic(T, e.coords).period for e in prims)
    assert periods == [2, 2, 2, 2]


def test_tensor_mixed_bases_rejected():
    with pytest.raises(TypeError):
        tensor_product(swap_pair(F5), swap_pair(F3))


# -- twist and the canonical map -------------------------------------------------------------


def test_twist_psi_is_a_morphism_and_detects_separability():
    rng = random.Random(31)
    for _ in range(40):
        A = random_valid_algebra(F5, rng, max_dim=4)
        twisted, psi = twist_and_psi(A)
        assert psi.validate().ok
        assert (la.rank(F5, psi.matrix) == A.dim) == is_sigma_separable(A)


def test_twist_psi_kernel_on_collapsed_pair():
    R1 = collapsed_pair(F5)
    _, psi = twist_and_psi(R1)
    assert la.rank(F5, psi.matrix) == 1
    kernel = la.nullspace(F5, psi.matrix)
    assert len(kernel) == 1


def test_twist_psi_bijective_over_inversive_base_when_separable():
    SW = swap_pair(F5)
    _, psi = twist_and_psi(SW)
    assert la.rank(F5, psi.matrix) == 2


# -- strong cores -------------------------------------------------------------------------------


def test_strong_core_of_collapsed_pair_is_scalars():
    core = strong_core(collapsed_pair(F5))
    assert core.algebra.dim == 1 and core.complete
    assert core.inclusion.validate().ok


def test_strong_core_of_swap_is_everything():
    core = strong_core(swap_pair(F5))
    assert core.algebra.dim == 2


def test_strong_core_of_field_extension_is_everything():
    A = field_algebra(3, [1, 0, 1])
    core = strong_core(A)
    assert core.algebra.dim == 2


def test_strong_core_hidden_by_conjugation():
    rng = random.Random(41)
    A = collapsed_pair(F5)
    C = conjugate(A, random_invertible(F5, 2, rng))
    core = strong_core(C)
    assert core.algebra.dim == 1


def test_strong_core_tensor_of_named_factors():
    R1 = collapsed_pair(F5)
    SW = swap_pair(F5)
    assert strong_core(tensor_product(R1, SW)).algebra.dim == 2
    assert strong_core(tensor_product(R1, R1)).algebra.dim == 1


def test_strong_core_matches_exhaustive_span_on_every_small_point_map():
    import itertools

    from diffalg.suites import _oracle_periodic_span

    for p in (2, 3):
        k = PrimeField(p)
        for n in (2, 3):
            for pm in itertools.product(range(n), repeat=n):
                A = diagonal_algebra(k, list(pm))
                assert strong_core(A).span.equals(_oracle_periodic_span(A)), pm


def test_strong_core_on_tree_over_cycle_dynamics():
    from diffalg.suites import _oracle_periodic_span

    rng = random.Random(2)
    k = PrimeField(2)
    for pm in [(1, 0, 0, 0), (1, 2, 0, 0), (0, 0, 1, 2), (3, 2, 1, 0),
               (1, 1, 1, 1), (2, 3, 3, 2)]:
        A = conjugate(diagonal_algebra(k, list(pm)), random_invertible(k, 4, rng))
        assert strong_core(A).span.equals(_oracle_periodic_span(A)), pm


def test_is_periodic_unknown_at_tiny_horizon():
    SW = swap_pair(F5)
    res = is_periodic(SW, SW.basis_vec(0), horizon=1)
    assert res.status == "unknown"


def test_strong_core_lower_bound_over_rationals():
    Q = Rationals()
    one, zero = Q.one(), Q.zero()
    mul = [[[one, zero], [zero, one]], [[zero, one], [one, zero]]]
    unit = [one, zero]
    sigma = [[one, zero], [zero, one]]
    A = FinSigmaAlgebra(Q, mul, unit, sigma)   # group algebra of Z/2 over Q
    core = strong_core(A, supplied_idempotents=[])
    assert not core.complete and core.algebra.dim >= 1


def test_sigma_permutes_primitive_idempotents_when_strongly_setale():
    rng = random.Random(43)
    for _ in range(60):
        A = random_strongly_setale(F5, rng, max_dim=4)
        prims = [e.coords for e in primitive_idempotents(A)]
        images = [A.apply_sigma(e) for e in prims]
        for img in images:
            assert any(A.vec_eq(img, e) for e in prims)
        keys = {repr([F5.scalar_to_json(c) for c in img]) for img in images}
        assert len(keys) == len(prims)
        for e in prims:
            assert is_periodic(A, e).is_periodic()


# -- base change -------------------------------------------------------------------------------


def test_base_change_preserves_predicates():
    rng = random.Random(47)
    for _ in range(60):
        k = (F2, F3, F5)[rng.randrange(3)]
        A = random_valid_algebra(k, rng, max_dim=3)
        K, embed = splitting_extension(k, rng.randint(2, 3))
        AK = base_change(A, K, embed)
        assert algebra_validate(AK).ok
        assert AK.dim == A.dim
        assert is_strongly_sigma_etale(A) == is_strongly_sigma_etale(AK)
        assert is_sigma_separable(A) == is_sigma_separable(AK)
        assert is_etale(A) == is_etale(AK)


def test_base_change_of_base_field_is_target():
    k = F3
    one = k.one()
    A = FinSigmaAlgebra(k, [[[one]]], [one], [[one]])
    K, embed = splitting_extension(k, 2)
    AK = base_change(A, K, embed)
    assert AK.dim == 1 and AK.base == K


def test_minimal_polynomial_matches_defining_relation():
    A = poly_quotient(F5, [4, 0, 1], 1)
    y = A.basis_vec(1)
    m = minimal_polynomial(A, y)
    assert m.to_json() == ["4", "0", "1"]


def test_restrict_scalars_keeps_strongly_setale():
    K = GaloisField(3, [1, 0, 1])
    rng = random.Random(53)
    R = random_strongly_setale(K, rng, max_dim=2, conjugated=False)
    flat = restrict_scalars(R, F3)
    assert algebra_validate(flat).ok
    assert flat.dim == 2 * R.dim
    assert is_strongly_sigma_etale(flat)
