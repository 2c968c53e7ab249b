"""Tests for the ladder-operator state construction and table builder."""

from fractions import Fraction

import pytest

from cgexact.formulas import CouplingSpec, MalformedCouplingError, cg_racah
from cgexact.ladder import (
    CoefficientRecord,
    StateVector,
    TableRoute,
    alpha_sequence,
    apply_jminus,
    apply_jplus,
    beta_closed_form,
    build_full_table,
    cg_ladder,
    highest_weight_state,
    lower_normalized,
    stretched_multiplet_state,
)
from cgexact.numerics import HalfInt, RadicalSum, binomial, to_decimal

SQRT = RadicalSum.sqrt
HALF = Fraction(1, 2)


def components_of(state):
    return {
        (m1.twice, m2.twice): value for (m1, m2), value in state.components.items()
    }


# ---------------------------------------------------------------------------
# Stretched multiplet
# ---------------------------------------------------------------------------


def test_stretched_top_state():
    state = stretched_multiplet_state("1/2", "1/2", 0)
    assert components_of(state) == {(1, 1): RadicalSum.one()}


def test_stretched_one_lowering_half_half():
    state = stretched_multiplet_state("1/2", "1/2", 1)
    assert components_of(state) == {(-1, 1): SQRT(HALF), (1, -1): SQRT(HALF)}


def test_stretched_reference_row():
    state = stretched_multiplet_state(2, 1, 3)
    expected = {
        (-2, 2): SQRT(Fraction(1, 5)),
        (0, 0): SQRT(Fraction(3, 5)),
        (2, -2): SQRT(Fraction(1, 5)),
    }
    assert components_of(state) == expected
    rendered = {key: to_decimal(v, 5) for key, v in components_of(state).items()}
    assert rendered == {(-2, 2): "0.44721", (0, 0): "0.77460", (2, -2): "0.44721"}


def test_stretched_lowering_once_matches_reference():
    state = stretched_multiplet_state(2, 1, 1)
    assert components_of(state) == {
        (4, 0): SQRT(Fraction(1, 3)),
        (2, 2): SQRT(Fraction(2, 3)),
    }


def test_stretched_norm_and_range():
    for n in range(7):
        assert stretched_multiplet_state(2, 1, n).norm_squared() == 1
    with pytest.raises(ValueError):
        stretched_multiplet_state(2, 1, 7)
    with pytest.raises(ValueError):
        stretched_multiplet_state(2, 1, -1)


# ---------------------------------------------------------------------------
# Alpha sequence
# ---------------------------------------------------------------------------


def test_alpha_singlet():
    seq = alpha_sequence("1/2", "1/2", 1)
    assert list(seq.alphas) == [SQRT(HALF), -SQRT(HALF)]


def test_alpha_depth_zero_is_trivial():
    for j1, j2 in [(0, 0), (1, 1), ("3/2", 2), (5, "1/2")]:
        assert list(alpha_sequence(j1, j2, 0).alphas) == [RadicalSum.one()]


def test_alpha_reference_values():
    seq = alpha_sequence(1, 1, 1)
    assert list(seq.alphas) == [SQRT(HALF), -SQRT(HALF)]
    assert [to_decimal(a, 5) for a in seq.alphas] == ["0.70711", "-0.70711"]


def test_alpha_range_errors():
    with pytest.raises(ValueError):
        alpha_sequence(1, 1, 3)
    with pytest.raises(ValueError):
        alpha_sequence(1, 1, -1)


def test_alpha_invariants_small_sweep():
    for tj1 in range(0, 7):
        for tj2 in range(0, 7):
            for m in range(min(tj1, tj2) + 1):
                seq = alpha_sequence(
                    HalfInt.from_twice(tj1), HalfInt.from_twice(tj2), m
                )
                assert len(seq.alphas) == m + 1
                assert seq.alphas[0].sign() == 1
                total = RadicalSum.zero()
                for alpha in seq.alphas:
                    total = total + alpha * alpha
                assert total == RadicalSum.one()
                # two-term recurrence with exact radical coefficients
                for l in range(1, m + 1):
                    ratio = Fraction(tj2 - m + l, tj1 - l + 1)
                    root = SQRT(
                        Fraction(
                            binomial(tj2, tj2 - m + l) * binomial(tj1, tj1 - l),
                            binomial(tj2, tj2 - m + l - 1)
                            * binomial(tj1, tj1 - l + 1),
                        )
                    )
                    expected = -(seq.alphas[l - 1] * root * ratio)
                    assert seq.alphas[l] == expected


# ---------------------------------------------------------------------------
# Highest-weight states
# ---------------------------------------------------------------------------


def test_highest_weight_examples():
    assert components_of(highest_weight_state(1, 1, 2)) == {(2, 2): RadicalSum.one()}
    assert components_of(highest_weight_state(1, 1, 1)) == {
        (2, 0): SQRT(HALF),
        (0, 2): -SQRT(HALF),
    }
    state = highest_weight_state(2, 1, 2)
    assert components_of(state) == {
        (4, 0): SQRT(Fraction(2, 3)),
        (2, 2): -SQRT(Fraction(1, 3)),
    }
    rendered = {key: to_decimal(v, 5) for key, v in components_of(state).items()}
    assert rendered == {(4, 0): "0.81650", (2, 2): "-0.57735"}


def test_highest_weight_triangle_violation():
    with pytest.raises(ValueError):
        highest_weight_state(2, 1, 0)
    with pytest.raises(ValueError):
        highest_weight_state(1, 1, "1/2")


def test_jplus_annihilates_highest_weight():
    for tj1 in range(0, 9):
        for tj2 in range(0, 9):
            for tJ in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
                state = highest_weight_state(
                    HalfInt.from_twice(tj1),
                    HalfInt.from_twice(tj2),
                    HalfInt.from_twice(tJ),
                )
                assert apply_jplus(state).is_zero
                assert state.norm_squared() == 1


# ---------------------------------------------------------------------------
# Lowering
# ---------------------------------------------------------------------------


def test_lowering_reference_row():
    state = lower_normalized(highest_weight_state(1, 1, 1), 1)
    assert components_of(state) == {(-2, 2): -SQRT(HALF), (2, -2): SQRT(HALF)}


def test_lowering_matches_ladder_equation():
    j1, j2, J = HalfInt(2), HalfInt("3/2"), HalfInt("3/2")
    state = highest_weight_state(j1, j2, J)
    tJ = J.twice
    for step in range(tJ):
        tM = tJ - 2 * step
        lowered = apply_jminus(state)
        next_state = lower_normalized(state, J)
        scale = SQRT(Fraction(tJ * (tJ + 2) - tM * (tM - 2), 4))
        assert lowered.components == next_state.scaled(scale).components
        state = next_state


def test_lowering_below_bottom_rejected():
    state = highest_weight_state(1, 1, 1)
    state = lower_normalized(state, 1)
    state = lower_normalized(state, 1)
    with pytest.raises(ValueError):
        lower_normalized(state, 1)


def test_state_vector_properties():
    state = highest_weight_state(2, 1, 2)
    assert state.m_total() == HalfInt(2)
    assert state.component(2, 0) == SQRT(Fraction(2, 3))
    assert state.component(0, 0).is_zero
    other = highest_weight_state(2, 1, 3)
    lowered_other = lower_normalized(other, 3)
    # distinct J at the same M: exactly orthogonal
    assert state.inner(lowered_other).is_zero
    with pytest.raises(ValueError):
        state.inner(highest_weight_state(2, 2, 2))
    mixed = StateVector(
        HalfInt(1), HalfInt(1),
        {
            (HalfInt(1), HalfInt(0)): RadicalSum.one(),
            (HalfInt(0), HalfInt(0)): RadicalSum.one(),
        },
    )
    with pytest.raises(ValueError):
        mixed.m_total()


# ---------------------------------------------------------------------------
# Beta closed form
# ---------------------------------------------------------------------------


def test_beta_reduces_to_stretched_coefficients():
    for tj1, tj2 in [(4, 2), (3, 3), (2, 5)]:
        j1, j2 = HalfInt.from_twice(tj1), HalfInt.from_twice(tj2)
        for n in range(tj1 + tj2 + 1):
            for k in range(n + 1):
                numer = binomial(tj1, k) * binomial(tj2, n - k)
                expected = SQRT(Fraction(numer, binomial(tj1 + tj2, n)))
                assert beta_closed_form(j1, j2, 0, n, 0, k) == expected


def test_beta_state_matches_lowering_oracle():
    chain = highest_weight_state(1, 1, 1)
    chain = lower_normalized(chain, 1)
    beta_components = {}
    for l in range(2):
        for p in range(2):
            value = beta_closed_form(1, 1, 1, 1, l, p)
            if value.is_zero:
                continue
            key = (2 - 2 * (l + p), 2 - 2 * (1 - l + 1 - p))
            beta_components[key] = beta_components.get(key, RadicalSum.zero()) + value
    beta_components = {k: v for k, v in beta_components.items() if not v.is_zero}
    assert beta_components == components_of(chain)


def test_beta_matches_reference_table_rows():
    # (j1=2, j2=1), J=2, M=0: reference values -0.70711 and 0.70711 with a
    # vanishing (0, 0) component produced by cancellation across l
    state_components = {}
    for l in range(2):
        for p in range(3):
            value = beta_closed_form(2, 1, 1, 2, l, p)
            if value.is_zero:
                continue
            key = (4 - 2 * (l + p), 2 - 2 * (1 - l + 2 - p))
            state_components[key] = (
                state_components.get(key, RadicalSum.zero()) + value
            )
    state_components = {k: v for k, v in state_components.items() if not v.is_zero}
    assert state_components == {(-2, 2): -SQRT(HALF), (2, -2): SQRT(HALF)}


def test_beta_out_of_range_indices_are_zero():
    assert beta_closed_form(1, 1, 1, 1, 5, 0).is_zero
    assert beta_closed_form(1, 1, 1, 1, 0, 9).is_zero
    assert beta_closed_form(1, 1, 1, 9, 0, 0).is_zero
    with pytest.raises(ValueError):
        beta_closed_form(1, 1, 7, 0, 0, 0)


# ---------------------------------------------------------------------------
# cg_ladder
# ---------------------------------------------------------------------------


def test_cg_ladder_reference_and_errors():
    assert cg_ladder(CouplingSpec.of(2, 1, 0, 0, 3, 0)) == SQRT(Fraction(3, 5))
    assert cg_ladder(CouplingSpec.of(1, 1, 1, 1, 1, 0)).is_zero
    with pytest.raises(MalformedCouplingError):
        cg_ladder(CouplingSpec.of("1/2", "1/2", 0, "1/2", 1, "1/2"))


def test_cg_ladder_matches_racah_small_sweep():
    for tj1, tj2 in [(1, 1), (2, 1), (3, 2), (2, 2)]:
        j1, j2 = HalfInt.from_twice(tj1), HalfInt.from_twice(tj2)
        for tJ in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
            for tM in range(-tJ, tJ + 1, 2):
                for tm1 in range(max(-tj1, tM - tj2), min(tj1, tM + tj2) + 1, 2):
                    spec = CouplingSpec(
                        j1, j2,
                        HalfInt.from_twice(tm1), HalfInt.from_twice(tM - tm1),
                        HalfInt.from_twice(tJ), HalfInt.from_twice(tM),
                    )
                    assert cg_ladder(spec) == cg_racah(spec)


# ---------------------------------------------------------------------------
# Full tables
# ---------------------------------------------------------------------------


def test_table_sizes_and_sorting():
    records = build_full_table(2, 1, TableRoute.CLOSED_FORM)
    assert len(records) == 36
    keys = [r.sort_key() for r in records]
    assert keys == sorted(keys)
    assert len(build_full_table(1, 1, TableRoute.CLOSED_FORM)) == 18


def test_table_route_equivalence_small():
    for tj1 in range(0, 7):
        for tj2 in range(0, 7):
            j1, j2 = HalfInt.from_twice(tj1), HalfInt.from_twice(tj2)
            reference = build_full_table(j1, j2, TableRoute.CLOSED_FORM)
            for route in (
                TableRoute.LADDER_ITERATIVE,
                TableRoute.BETA_CLOSED_FORM,
                TableRoute.RACAH,
            ):
                assert build_full_table(j1, j2, route) == reference


def test_table_identity_for_trivial_second_factor():
    for j1 in [0, "1/2", 1, "3/2", 2]:
        records = build_full_table(j1, 0, TableRoute.LADDER_ITERATIVE)
        j1_half = HalfInt(j1)
        assert len(records) == j1_half.twice + 1
        for r in records:
            assert r.J == j1_half
            assert r.m2 == HalfInt(0)
            assert r.M == r.m1
            assert r.exact == RadicalSum.one()


def test_table_zero_dimensional_cell():
    records = build_full_table(0, 0, TableRoute.BETA_CLOSED_FORM)
    assert len(records) == 1
    record = records[0]
    assert (record.J, record.M, record.m1, record.m2) == (
        HalfInt(0), HalfInt(0), HalfInt(0), HalfInt(0)
    )
    assert record.exact == RadicalSum.one()
    assert record.exact_text == "1"
    assert record.value_text == "1.00000"


def test_record_value_text_is_five_place_rendering():
    for record in build_full_table("3/2", 1, TableRoute.CLOSED_FORM):
        assert record.value_text == to_decimal(record.exact, 5)
        assert len(record.value_text.split(".")[1]) == 5


def test_single_m_support_everywhere():
    for route in (TableRoute.LADDER_ITERATIVE, TableRoute.BETA_CLOSED_FORM):
        for record in build_full_table("5/2", "3/2", route):
            assert record.M == record.m1 + record.m2
