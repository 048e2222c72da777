from math import comb

import pytest

from ramify.covers import (
    BreakTable,
    GaloisCover,
    artin_schreier_reduce,
    build_artin_schreier,
    build_compositum_tower,
    build_kummer,
    lower_break_table,
    trivial_cover,
)
from ramify.errors import (
    MismatchDetected,
    MissingRootsOfUnity,
    NotGaloisOverBase,
    PoleOrderDivisibleByP,
    PrecisionExhausted,
)
from ramify.fields import field_create
from ramify.series import LaurentSeries, compose

F2 = field_create(2, 1)
F3 = field_create(3, 1)
F4 = field_create(2, 2)
F5 = field_create(5, 1)


def as_break_oracle(p, m, j):
    """Independent break computation via valuations in the y-basis.

    With v(t) = p and v(y) = -m, the action difference t^a((y+j)^b - y^b)
    expands into monomials t^a y^i of valuation a*p - m*i; distinct i give
    distinct valuations mod p, so the minimum over nonzero terms is exact.
    """
    b = next(bb for bb in range(1, p) if (1 + bb * m) % p == 0)
    a = (1 + b * m) // p
    vals = []
    for i in range(b):
        coeff = comb(b, i) * pow(j, b - i) % p
        if coeff:
            vals.append(a * p - m * i)
    return min(vals)


def as_sparse(field, pairs):
    return LaurentSeries.from_sparse(field, pairs)


@pytest.mark.parametrize(
    "field,p,m",
    [(F2, 2, 1), (F2, 2, 3), (F3, 3, 1), (F3, 3, 2), (F5, 5, 1)],
)
def test_artin_schreier_breaks_match_oracle(field, p, m):
    cover = build_artin_schreier(field, as_sparse(field, [[-m, [1]]]), prec=16)
    assert cover.e == p and cover.degree == p
    bt = lower_break_table(cover)
    for j in range(1, p):
        assert bt.i_map[j] == as_break_oracle(p, m, j) == m + 1


@pytest.mark.parametrize(
    "field,p,m,terms",
    [
        (F5, 5, 3, [[-3, [2]], [-1, [1]], [0, [4]]]),
        (F3, 3, 4, [[-4, [2]], [-1, [2]]]),
        (F4, 2, 3, [[-3, [0, 1]], [-1, [1, 1]]]),
    ],
)
def test_artin_schreier_nonunit_leading_coeff(field, p, m, terms):
    # Exercises the general leading-data path (tau, eta != 1) and the
    # b-th root extraction with b > 1.
    cover = build_artin_schreier(field, as_sparse(field, terms), prec=20)
    bt = lower_break_table(cover)
    for j in range(1, p):
        assert bt.i_map[j] == as_break_oracle(p, m, j) == m + 1


def test_tower_with_nonunit_coefficient():
    kum = build_kummer(F4, 3)
    tower = build_compositum_tower(kum, as_sparse(F4, [[-1, [0, 1]]]), prec=24)
    by_label = lower_break_table(tower).by_label()
    assert by_label["sigma"] == 4
    assert by_label["tau"] == 1


def test_as_p2_m1_series_against_closed_form():
    cover = build_artin_schreier(F2, as_sparse(F2, [[-1, [1]]]), prec=20)
    # Closed form: t = s^2 / (1 + s), via a different code path (inverse).
    s2 = as_sparse(F2, [[2, [1]]])
    denom = as_sparse(F2, [[0, [1]], [1, [1]]])
    expected = s2 * denom.inverse(prec=24)
    assert (cover.t_in_s - expected).is_zero_known()
    # sigma(s) - s = t * s-unit has valuation 2
    diff = cover.sigma_action[1] - LaurentSeries.uniformizer(F2)
    assert diff.valuation() == 2


def test_cover_action_valuations_and_group_law():
    cover = build_artin_schreier(F3, as_sparse(F3, [[-2, [1]]]), prec=16)
    s = LaurentSeries.uniformizer(F3)
    for i, act in cover.sigma_action.items():
        assert act.valuation() == 1
    for i in range(cover.group.n):
        for j in range(cover.group.n):
            k = cover.group.product(j, i)
            lhs = compose(cover.sigma_action[j], cover.sigma_action[i])
            assert (lhs - cover.sigma_action[k]).is_zero_known()
    assert (compose(cover.t_in_s, cover.sigma_action[1]) - cover.t_in_s).is_zero_known()


def test_artin_schreier_reduction_equivalent_cover():
    # t^-2 over F_2 reduces to t^-1; the reduced cover must have the same breaks.
    direct = build_artin_schreier(F2, as_sparse(F2, [[-1, [1]]]), prec=16)
    reduced = build_artin_schreier(F2, as_sparse(F2, [[-2, [1]]]), prec=16)
    assert lower_break_table(direct).by_label() == lower_break_table(reduced).by_label()
    red = artin_schreier_reduce(as_sparse(F2, [[-2, [1]]]))
    assert red.valuation() == -1


def test_artin_schreier_trivializing_input_rejected():
    with pytest.raises(PoleOrderDivisibleByP):
        build_artin_schreier(F2, as_sparse(F2, [[-2, [1]], [-1, [1]]]))
    with pytest.raises(PoleOrderDivisibleByP):
        build_artin_schreier(F2, as_sparse(F2, [[0, [1]]]))


def test_kummer_examples():
    cover = build_kummer(F4, 3)
    assert cover.e == 3
    bt = lower_break_table(cover)
    assert bt.by_label() == {"tau": 1, "tau^2": 1}
    assert cover.t_in_s == as_sparse(F4, [[3, [1]]])

    cover2 = build_kummer(F3, 2)
    assert lower_break_table(cover2).by_label() == {"tau": 1}

    with pytest.raises(MissingRootsOfUnity):
        build_kummer(F2, 3)


def test_tower_z6_breaks():
    kum = build_kummer(F4, 3)
    tower = build_compositum_tower(kum, as_sparse(F4, [[-1, [1, 0]]]), prec=24)
    assert tower.degree == 6 and tower.e == 6
    bt = lower_break_table(tower)
    by_label = bt.by_label()
    # Oracle: the wild generator acts through the rank-3 pole over the tame
    # layer, so its break is the oracle value for (p, m') = (2, 3); every
    # element moving the tame layer has break 1.
    assert by_label["sigma"] == as_break_oracle(2, 3, 1) == 4
    for label in ("tau", "tau^2", "sigma*tau", "sigma*tau^2"):
        assert by_label[label] == 1
    assert tower.intermediate is not None
    assert len(tower.intermediate.H_indices) == 2


def test_tower_z10_breaks():
    kum = build_kummer(F5, 2)
    tower = build_compositum_tower(kum, as_sparse(F5, [[-1, [1]]]), prec=24)
    bt = lower_break_table(tower).by_label()
    for j in (1, 2, 3, 4):
        label = "sigma" if j == 1 else f"sigma^{j}"
        assert bt[label] == as_break_oracle(5, 2, j) == 3
    assert bt["tau"] == 1 and bt["sigma*tau"] == 1


def test_tower_degenerate_tame_layer():
    tower = build_compositum_tower(
        trivial_cover(F2), as_sparse(F2, [[-1, [1]]]), prec=16
    )
    plain = build_artin_schreier(F2, as_sparse(F2, [[-1, [1]]]), prec=16)
    assert lower_break_table(tower).by_label() == lower_break_table(plain).by_label()
    assert tower.intermediate is not None
    assert tower.group.labels == plain.group.labels


def test_tower_reducible_pullback_still_builds():
    # f = t^-2 pulled back through degree 3 has pole order 6; reduction
    # inside the wild layer brings it to 3 and the tower still closes up.
    kum = build_kummer(F4, 3)
    tower = build_compositum_tower(kum, as_sparse(F4, [[-2, [1, 0]]]), prec=24)
    assert lower_break_table(tower).by_label()["sigma"] == 4


def test_tower_trivializing_pullback_rejected():
    kum = build_kummer(F4, 3)
    with pytest.raises(PoleOrderDivisibleByP):
        build_compositum_tower(kum, as_sparse(F4, [[-2, [1, 0]], [-1, [1, 0]]]), prec=24)


def test_tower_requires_tame_lower_layer():
    wild = build_artin_schreier(F2, as_sparse(F2, [[-1, [1]]]), prec=16)
    with pytest.raises(NotGaloisOverBase):
        build_compositum_tower(wild, as_sparse(F2, [[-1, [1]]]))


def test_break_table_is_class_function():
    kum = build_kummer(F4, 3)
    tower = build_compositum_tower(kum, as_sparse(F4, [[-1, [1, 0]]]), prec=24)
    bt = lower_break_table(tower)
    g = tower.group
    for t in range(g.n):
        for s, v in bt.i_map.items():
            assert bt.i_map[g.conjugate(t, s)] == v


def test_break_table_rejects_values_below_one():
    z2 = build_kummer(F3, 2).group
    with pytest.raises(MismatchDetected):
        BreakTable(z2, {1: 0})


def test_break_table_rejects_non_class_function():
    from ramify.groups import group_closure
    from ramify.linalg import MatrixFF

    F7 = field_create(7, 1)
    s3 = group_closure(
        [
            MatrixFF.from_int_rows(F7, [[0, 1], [1, 0]]),
            MatrixFF.from_int_rows(F7, [[0, 6], [1, 6]]),
        ]
    )
    orders = [s3.order_of(i) for i in range(s3.n)]
    i_map = {}
    seen_transposition = False
    for i, o in enumerate(orders):
        if o == 2:
            i_map[i] = 2 if not seen_transposition else 1
            seen_transposition = True
        elif o == 3:
            i_map[i] = 1
    with pytest.raises(MismatchDetected):
        BreakTable(s3, i_map)


def test_precision_escalation_rebuilds_cover():
    base = build_artin_schreier(F2, as_sparse(F2, [[-3, [1]]]), prec=16)
    # Doctor a copy whose action series are truncated below the break.
    doctored = GaloisCover(
        base_field=base.base_field,
        group=base.group,
        t_in_s=base.t_in_s,
        sigma_action={i: a.truncate(3) for i, a in base.sigma_action.items()},
        e=base.e,
        degree=base.degree,
        kind=base.kind,
        prec=4,
        rebuild=base._rebuild,
    )
    bt = lower_break_table(doctored)
    assert bt.by_label() == {"sigma": 4}


def test_precision_cap_respected(monkeypatch):
    base = build_artin_schreier(F2, as_sparse(F2, [[-3, [1]]]), prec=16)
    doctored = GaloisCover(
        base_field=base.base_field,
        group=base.group,
        t_in_s=base.t_in_s,
        sigma_action={i: a.truncate(3) for i, a in base.sigma_action.items()},
        e=base.e,
        degree=base.degree,
        kind=base.kind,
        prec=4,
        rebuild=base._rebuild,
    )
    monkeypatch.setenv("RAMIFY_PRECISION_CAP", "4")
    with pytest.raises(PrecisionExhausted):
        lower_break_table(doctored)


def test_defining_function_must_match_base():
    with pytest.raises(NotGaloisOverBase):
        build_artin_schreier(F2, as_sparse(F3, [[-1, [1]]]))
