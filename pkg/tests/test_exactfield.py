"""Field constructions, endomorphism laws, canonical forms, serialization."""

import json
import random

import pytest
from hypothesis import given, strategies as st

from diffalg.exactfield import (FieldError, FrobeniusDescriptor, FunctionField,
                                GaloisField, PrimeField, Rationals, ShiftField,
                                field_make, is_inversive, sigma_apply)

F4 = GaloisField(2, [1, 1, 1])
F9 = GaloisField(3, [1, 0, 1])
Q = Rationals()
QT_SQUARE = FunctionField(Q, [0, 0, 1], [1])       # sigma(t) = t^2
S5 = ShiftField(PrimeField(5))


def all_fields():
    return [Q, PrimeField(5), F4, F9, QT_SQUARE, ShiftField(PrimeField(5))]


# -- construction -------------------------------------------------------------


def test_f4_frobenius_order_matches_degree():
    a = F4.generator()
    assert F4.sigma(a) == F4.mul(a, a)
    assert F4.sigma(F4.sigma(a)) == a


def test_rationals_identity_is_inversive():
    assert is_inversive(Q)
    x = Q.scalar_from_json("7/3")
    assert Q.sigma(x) == x


def test_reducible_defining_polynomial_names_a_factor():
    with pytest.raises(FieldError) as err:
        GaloisField(2, [1, 0, 1])  # (x+1)^2
    assert "factor" in str(err.value)


def test_reducible_split_polynomial_names_a_factor():
    with pytest.raises(FieldError):
        GaloisField(5, [4, 0, 1])  # x^2 - 4 = (x-2)(x+2)


def test_constant_sigma_t_rejected():
    with pytest.raises(FieldError):
        FunctionField(Q, [3], [1])


def test_frobenius_descriptor_validation():
    with pytest.raises(FieldError):
        FrobeniusDescriptor(4, 1)
    with pytest.raises(FieldError):
        FrobeniusDescriptor(5, -1)
    assert FrobeniusDescriptor(5, 0).m == 0


# -- sigma is a ring endomorphism ----------------------------------------------


@pytest.mark.parametrize("field_index", range(6))
def test_sigma_ring_laws_on_samples(field_index):
    F = all_fields()[field_index]
    rng = random.Random(100 + field_index)
    for _ in range(25):
        a = F.sample(rng)
        b = F.sample(rng)
        assert F.eq(F.sigma(F.add(a, b)), F.add(F.sigma(a), F.sigma(b)))
        assert F.eq(F.sigma(F.mul(a, b)), F.mul(F.sigma(a), F.sigma(b)))
    assert F.eq(F.sigma(F.one()), F.one())


@given(st.fractions(), st.fractions())
def test_rationals_sigma_additive(a, b):
    assert Q.sigma(a + b) == Q.sigma(a) + Q.sigma(b)


@given(st.integers(), st.integers())
def test_prime_field_canon_idempotent(a, b):
    F7 = PrimeField(7)
    x = F7.canon(a * b)
    assert F7.canon(x) == x


def test_canonicalization_idempotent_everywhere():
    rng = random.Random(7)
    for F in all_fields():
        for _ in range(15):
            x = F.sample(rng)
            assert F.eq(F.canon(x), x)


def test_sigma_apply_rejects_non_canonical():
    F5 = PrimeField(5)
    with pytest.raises(AssertionError):
        sigma_apply(F5, 12)
    assert sigma_apply(F5, 2) == 2


# -- worked sigma examples -------------------------------------------------------


def test_f9_sigma_of_alpha_is_minus_alpha():
    al = F9.generator()
    assert F9.sigma(al) == F9.neg(al)


def test_function_field_substitution():
    t = QT_SQUARE.t()
    one = QT_SQUARE.one()
    x = QT_SQUARE.div(QT_SQUARE.add(t, one), t)         # (t+1)/t
    t2 = QT_SQUARE.mul(t, t)
    expected = QT_SQUARE.div(QT_SQUARE.add(t2, one), t2)
    assert QT_SQUARE.eq(QT_SQUARE.sigma(x), expected)


def test_shift_field_index_shift():
    t0, t1, t2 = S5.t(0), S5.t(1), S5.t(2)
    assert S5.eq(S5.sigma(S5.mul(t0, t1)), S5.mul(t1, t2))


# -- inversivity ------------------------------------------------------------------


def test_finite_fields_inversive_and_bijective():
    for F in (PrimeField(5), F4, F9):
        assert is_inversive(F)
        elems = list(F.all_elements()) if hasattr(F, "all_elements") else list(range(F.p))
        images = [F.sigma(x) for x in elems]
        as_set = {repr(F.scalar_to_json(x)) for x in images}
        assert len(as_set) == len(elems)


def test_finite_field_orbits_are_finite():
    rng = random.Random(3)
    for F in (F4, F9, GaloisField(2, [1, 1, 0, 0, 1])):
        for _ in range(10):
            x = F.sample(rng)
            seen = [x]
            cur = x
            for _ in range(2 * F.order):
                cur = F.sigma(cur)
                if any(F.eq(cur, s) for s in seen):
                    break
                seen.append(cur)
            else:
                raise AssertionError("orbit did not close")


def test_expanding_function_field_not_inversive():
    # sigma doubles numerator and denominator degrees, so t has no preimage
    assert not is_inversive(QT_SQUARE)
    rng = random.Random(5)
    for _ in range(20):
        f = QT_SQUARE.sample(rng)
        img = QT_SQUARE.sigma(f)
        num, den = img
        for coeffs in (num, den):
            for i, c in enumerate(coeffs):
                if i % 2 == 1:
                    assert QT_SQUARE.base.is_zero(c) or len(coeffs) != i + 1
        # degrees of the image are even: t (odd degree over even) is missed
        assert (len(num) - 1) % 2 == 0 or all(Q.is_zero(c) for c in num)


def test_moebius_function_field_inversive():
    assert is_inversive(FunctionField(Q, [1, 1], [1]))           # t -> t+1
    assert is_inversive(FunctionField(Q, [1], [0, 1]))           # t -> 1/t


def test_shift_field_not_inversive():
    assert not is_inversive(S5)


# -- shift field specifics ----------------------------------------------------------


def test_shift_field_horizon_grows_monotonically():
    S = ShiftField(PrimeField(5))
    start = S.horizon
    x = S.t(3)
    assert S.horizon >= 3 >= start
    S.sigma(x)
    assert S.horizon >= 4


def test_shift_field_min_index_enforced():
    S = ShiftField(PrimeField(5), min_index=0)
    with pytest.raises(FieldError):
        S.t(-1)
    deep = ShiftField(PrimeField(5), min_index=-2)
    tm2 = deep.t(-2)
    assert deep.eq(deep.sigma(tm2), deep.t(-1))


def test_shift_fraction_normalization_unique():
    S = ShiftField(PrimeField(5))
    t0, t1 = S.t(0), S.t(1)
    a = S.div(S.mul(t0, t1), t0)
    assert S.eq(a, t1)
    b = S.div(S.add(S.mul(t0, t0), S.neg(S.mul(t1, t1))),
              S.add(t0, S.neg(t1)))
    assert S.eq(b, S.add(t0, t1))


# -- descriptors and serialization ------------------------------------------------------


def test_descriptor_round_trips():
    for F in all_fields():
        blob = json.dumps(F.descriptor())
        again = field_make(json.loads(blob))
        assert again == F


def test_scalar_round_trips():
    rng = random.Random(11)
    for F in all_fields():
        for _ in range(10):
            x = F.sample(rng)
            blob = json.dumps(F.scalar_to_json(x))
            assert F.eq(F.scalar_from_json(json.loads(blob)), x)


def test_field_make_prime_shorthand():
    F = field_make({"kind": "Fq", "p": 7})
    assert isinstance(F, PrimeField) and F.p == 7


def test_field_make_unknown_kind():
    with pytest.raises(FieldError):
        field_make({"kind": "padic"})
