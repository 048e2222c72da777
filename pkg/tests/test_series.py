from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramify.errors import (
    CompositionUndefined,
    FieldMismatch,
    NotSimpleRoot,
    PrecisionExhausted,
    ZeroElement,
)
from ramify.fields import field_create
from ramify.series import LaurentSeries, compose, hensel_lift_root

F2 = field_create(2, 1)
F3 = field_create(3, 1)
F5 = field_create(5, 1)


def sparse(field, pairs):
    return LaurentSeries.from_sparse(field, pairs)


def test_valuation_examples():
    f = sparse(F2, [[-1, [1]], [0, [1]], [1, [1]]])
    assert f.valuation() == -1
    t = sparse(F2, [[1, [1]]])
    t_inv = sparse(F2, [[-1, [1]]])
    assert (t * t_inv) == LaurentSeries.one(F2)


def test_inverse_geometric_series():
    # Oracle: sum of t^i must multiply back to 1 within the window.
    f = sparse(F2, [[0, [1]], [1, [1]]])
    inv = f.inverse(prec=4)
    expected = {i: F2.one() for i in range(4)}
    assert dict(inv.support()) == expected
    back = f * inv
    assert back.coeff(0) == F2.one()
    assert all(not back.coeff(i) for i in range(1, back.abs_prec))


def test_inverse_of_inverse_roundtrips():
    f = sparse(F5, [[-2, [3]], [0, [1]], [3, [4]]]).truncate(20)
    double = f.inverse().inverse()
    assert (double - f).is_zero_known()


def test_inverse_monomial_is_exact():
    m = sparse(F3, [[5, [2]]])
    inv = m.inverse()
    assert inv.is_exact
    assert (m * inv) == LaurentSeries.one(F3)


def test_zero_inversion_errors():
    with pytest.raises(ZeroElement):
        LaurentSeries.zero(F2).inverse()
    approx_zero = LaurentSeries(F2, 3, [], 3)
    with pytest.raises(PrecisionExhausted):
        approx_zero.inverse()
    with pytest.raises(PrecisionExhausted):
        approx_zero.valuation()


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        LaurentSeries.one(F2) + LaurentSeries.one(F3)


coeff_lists = st.lists(st.integers(min_value=0, max_value=4), min_size=1, max_size=8)


@settings(max_examples=60, deadline=None)
@given(coeff_lists, coeff_lists, st.integers(-5, 5), st.integers(-5, 5))
def test_product_valuation_additive(cs1, cs2, v1, v2):
    f = LaurentSeries(F5, v1, [F5.from_int(c) for c in cs1], v1 + len(cs1)).truncate(v1 + 32)
    g = LaurentSeries(F5, v2, [F5.from_int(c) for c in cs2], v2 + len(cs2)).truncate(v2 + 32)
    if f.is_zero_known() or g.is_zero_known():
        return
    assert (f * g).valuation() == f.valuation() + g.valuation()


@settings(max_examples=40, deadline=None)
@given(coeff_lists)
def test_inv_inv_identity_property(cs):
    if cs[0] % 5 == 0:
        cs = [1] + cs
    f = LaurentSeries(F5, -2, [F5.from_int(c) for c in cs], -2 + len(cs)).truncate(30)
    assert (f.inverse().inverse() - f).is_zero_known()


def test_compose_examples():
    t = sparse(F2, [[1, [1]]])
    s2 = sparse(F2, [[2, [1]]])
    assert compose(t, s2) == s2
    t_inv = sparse(F2, [[-1, [1]]])
    assert compose(t_inv, s2) == sparse(F2, [[-2, [1]]])
    mixed = sparse(F2, [[-1, [1]], [1, [1]]])
    s3 = sparse(F2, [[3, [1]]])
    assert compose(mixed, s3) == sparse(F2, [[-3, [1]], [3, [1]]])


def test_compose_requires_positive_valuation():
    f = sparse(F2, [[1, [1]]])
    unit = sparse(F2, [[0, [1]], [1, [1]]])
    with pytest.raises(CompositionUndefined):
        compose(f, unit)


def test_compose_associative_on_valid_triples():
    f = sparse(F3, [[-1, [2]], [0, [1]], [2, [1]]])
    g = sparse(F3, [[1, [1]], [2, [2]]]).truncate(16)
    h = sparse(F3, [[1, [2]], [3, [1]]]).truncate(16)
    left = compose(compose(f, g), h)
    right = compose(f, compose(g, h))
    assert (left - right).is_zero_known()
    assert min(left.abs_prec, right.abs_prec) >= 4


def test_compose_precision_tracks_truncation():
    f = sparse(F3, [[0, [1]], [1, [1]]]).truncate(5)
    g = sparse(F3, [[2, [1]], [3, [1]]])
    out = compose(f, g)
    assert out.abs_prec is not None
    assert out.abs_prec <= 10  # O(g^{prec(f)}) = O(s^10)


def test_hensel_identity_case():
    t = sparse(F2, [[1, [1]]])
    coeffs = [-t, LaurentSeries.one(F2)]
    assert hensel_lift_root(coeffs, t, 10) == t


def test_hensel_square_root_mod3():
    one_plus_s = sparse(F3, [[0, [1]], [1, [1]]])
    coeffs = [-one_plus_s, LaurentSeries.zero(F3), LaurentSeries.one(F3)]
    root = hensel_lift_root(coeffs, LaurentSeries.one(F3), 12)
    assert root.coeff(0) == F3.one()
    assert root.coeff(1) == F3.from_int(2)
    residual = root * root - one_plus_s
    assert residual.is_zero_known() and residual.abs_prec >= 12


def test_hensel_not_simple_root():
    one_plus_s = sparse(F2, [[0, [1]], [1, [1]]])
    coeffs = [-one_plus_s, LaurentSeries.zero(F2), LaurentSeries.one(F2)]
    with pytest.raises(NotSimpleRoot):
        hensel_lift_root(coeffs, LaurentSeries.one(F2), 8)


def test_hensel_bad_seed_rejected():
    # P(x) = x - 1 - s with seed of valuation 0 but P(seed) a unit offset.
    coeffs = [sparse(F3, [[0, [1]], [1, [1]]]).scale(-F3.one()), LaurentSeries.one(F3)]
    root = hensel_lift_root(coeffs, LaurentSeries.one(F3), 8)
    assert root.coeff(1) == F3.one()
    bad = [sparse(F3, [[0, [2]], [1, [1]]]).scale(-F3.one()), LaurentSeries.one(F3)]
    with pytest.raises(NotSimpleRoot):
        hensel_lift_root(bad, LaurentSeries.one(F3), 8)


def test_truncate_then_add_tracks_min_precision():
    f = sparse(F5, [[0, [1]], [4, [2]]]).truncate(6)
    g = sparse(F5, [[1, [3]]]).truncate(9)
    assert (f + g).abs_prec == 6


def test_shift_and_scale():
    f = sparse(F5, [[0, [1]], [1, [2]]])
    assert f.shift(3).valuation() == 3
    assert f.scale(F5.from_int(2)).coeff(1) == F5.from_int(4)
    assert f.scale(F5.zero()).is_exact_zero()
