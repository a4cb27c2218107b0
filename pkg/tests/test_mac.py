"""Capacitor-array MAC: closed form, charge oracle, decode, invariants."""

import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from scmac import (
    Bitstream,
    MacConfig,
    MacError,
    MacInputs,
    MacPhase,
    PHASE_SEQUENCE,
    ProductCounts,
    SignedStochNumber,
    charge_oracle,
    charge_oracle_trace,
    charge_share,
    count_products,
    decode_voltage,
    mac_evaluate,
    phase1_voltages,
)
from scmac.mac import baseline_voltage, max_voltage


def worked_inputs():
    # IN1=110 W1=+100, IN2=111 W2=-110: n_p = 1, n_n = 2
    return MacInputs.from_streams(
        [Bitstream.from_string("110"), Bitstream.from_string("111")],
        [
            SignedStochNumber(Bitstream.from_string("100"), 1),
            SignedStochNumber(Bitstream.from_string("110"), 0),
        ],
    )


CFG32 = MacConfig(3, 2, 1.0)


def random_inputs(rng, m, n):
    return MacInputs(
        rng.integers(0, 2, (n, m)), rng.integers(0, 2, (n, m)), rng.integers(0, 2, n)
    )


def all_inputs(m, n):
    for in_word in range(1 << (m * n)):
        in_bits = [[(in_word >> (i * m + j)) & 1 for j in range(m)] for i in range(n)]
        for w_word in range(1 << (m * n)):
            w_bits = [[(w_word >> (i * m + j)) & 1 for j in range(m)] for i in range(n)]
            for sign_word in range(1 << n):
                yield MacInputs(in_bits, w_bits, [(sign_word >> i) & 1 for i in range(n)])


def test_count_products_worked_example():
    counts = count_products(worked_inputs())
    assert counts == ProductCounts(n_p=1, n_n=2)


def test_count_products_trivial_cases():
    m, n = 3, 2
    zero = MacInputs(np.zeros((n, m)), np.ones((n, m)), np.ones(n))
    assert count_products(zero) == ProductCounts(0, 0)
    full = MacInputs(np.ones((n, m)), np.ones((n, m)), np.ones(n))
    assert count_products(full) == ProductCounts(m * n, 0)


def test_phase1_voltages_examples():
    vp, vn = phase1_voltages(ProductCounts(3, 0), CFG32)
    assert vp == pytest.approx(3 / 7, abs=1e-15)
    assert vn == pytest.approx(6 / 7, abs=1e-15)
    vp, _ = phase1_voltages(ProductCounts(0, 0), CFG32)
    assert vp == 0.0


def test_phase1_rejects_overflow_counts():
    with pytest.raises(MacError):
        phase1_voltages(ProductCounts(7, 0), CFG32)


def test_charge_share_worked_example():
    vp, vn = phase1_voltages(ProductCounts(1, 2), CFG32)
    v = charge_share(vp, vn, CFG32)
    assert v == pytest.approx(5 / 14, abs=1e-15)


def test_charge_share_symmetric_counts_hit_baseline():
    for k in range(4):
        vp, vn = phase1_voltages(ProductCounts(k, k), CFG32)
        assert charge_share(vp, vn, CFG32) == pytest.approx(baseline_voltage(CFG32), abs=1e-15)


def test_charge_share_saturation():
    vp, vn = phase1_voltages(ProductCounts(6, 0), CFG32)
    assert charge_share(vp, vn, CFG32) == pytest.approx(6 / 7, abs=1e-15)
    assert max_voltage(CFG32) == pytest.approx(6 / 7, abs=1e-15)


def test_mac_evaluate_composition():
    v, counts = mac_evaluate(worked_inputs(), CFG32)
    assert counts.difference == -1
    assert v == pytest.approx(5 / 14, abs=1e-15)


def test_mac_evaluate_zero_inputs_give_baseline():
    zero = MacInputs(np.zeros((2, 3)), np.ones((2, 3)), np.asarray([1, 0]))
    v, _ = mac_evaluate(zero, CFG32)
    assert v == pytest.approx(baseline_voltage(CFG32), abs=1e-15)


def test_phase_sequence_shape():
    assert PHASE_SEQUENCE == (MacPhase.IDLE, MacPhase.ACCUMULATE, MacPhase.SHARE)


def test_decode_voltage_examples():
    assert decode_voltage(5 / 14, CFG32) == -1
    assert decode_voltage(baseline_voltage(CFG32), CFG32) == 0
    assert decode_voltage(max_voltage(CFG32), CFG32) == 6


def test_decode_voltage_rejects_out_of_range():
    with pytest.raises(MacError):
        decode_voltage(1.0, CFG32)
    with pytest.raises(MacError):
        decode_voltage(-0.01, CFG32)


def test_charge_oracle_equals_closed_form_exhaustive_2x2():
    cfg = MacConfig(2, 2, 1.0)
    for inputs in all_inputs(2, 2):
        v, _ = mac_evaluate(inputs, cfg)
        assert abs(v - charge_oracle(inputs, cfg)) <= 1e-12


@given(
    st.integers(1, 4),
    st.integers(1, 4),
    st.integers(0, 2**32 - 1),
    st.floats(0.5, 3.0),
)
@settings(max_examples=150, deadline=None)
def test_charge_oracle_equals_closed_form_random(m, n, seed, vdd):
    rng = np.random.default_rng(seed)
    cfg = MacConfig(m, n, vdd)
    inputs = random_inputs(rng, m, n)
    v, _ = mac_evaluate(inputs, cfg)
    assert abs(v - charge_oracle(inputs, cfg)) <= 1e-12 * vdd


def test_charge_conservation_through_share():
    rng = np.random.default_rng(5)
    cfg = MacConfig(4, 3, 1.0)
    for _ in range(200):
        trace = charge_oracle_trace(random_inputs(rng, 4, 3), cfg)
        if trace.charge_phase1 == 0.0:
            assert trace.charge_shared == 0.0
        else:
            rel = abs(trace.charge_shared - trace.charge_phase1) / abs(trace.charge_phase1)
            assert rel <= 1e-15


def test_single_bit_monotonicity():
    """Raising one IN bit with its W bit high moves V by exactly vdd/2/(mN+1)."""
    rng = np.random.default_rng(11)
    cfg = MacConfig(3, 3, 1.0)
    step = 0.5 * cfg.vdd / cfg.caps_per_side
    for _ in range(100):
        inputs = random_inputs(rng, 3, 3)
        i = int(rng.integers(0, 3))
        j = int(rng.integers(0, 3))
        in_bits = inputs.in_bits.copy()
        w_bits = inputs.w_bits.copy()
        in_bits[i, j] = 0
        w_bits[i, j] = 1
        low = MacInputs(in_bits, w_bits, inputs.signs)
        hi_bits = in_bits.copy()
        hi_bits[i, j] = 1
        high = MacInputs(hi_bits, w_bits, inputs.signs)
        delta = mac_evaluate(high, cfg)[0] - mac_evaluate(low, cfg)[0]
        expect = step if inputs.signs[i] else -step
        assert delta == pytest.approx(expect, abs=1e-15)


def test_output_range_bounds_attained():
    cfg = MacConfig(2, 2, 1.0)
    lo = min(mac_evaluate(i, cfg)[0] for i in all_inputs(2, 2))
    hi = max(mac_evaluate(i, cfg)[0] for i in all_inputs(2, 2))
    assert lo == 0.0  # n_n = mN, n_p = 0
    assert hi == pytest.approx(max_voltage(cfg), abs=1e-15)


def test_decode_matches_counts_everywhere():
    cfg = MacConfig(2, 2, 1.0)
    for inputs in all_inputs(2, 2):
        v, counts = mac_evaluate(inputs, cfg)
        assert decode_voltage(v, cfg) == counts.difference


@given(
    hnp.arrays(np.uint8, (4, 3), elements=st.integers(0, 1)),
    hnp.arrays(np.uint8, (4, 3), elements=st.integers(0, 1)),
    hnp.arrays(np.uint8, (4,), elements=st.integers(0, 1)),
)
@settings(max_examples=150)
def test_mac_semantics_brute_force(in_bits, w_bits, signs):
    inputs = MacInputs(in_bits, w_bits, signs)
    counts = count_products(inputs)
    brute = sum(
        (1 if s else -1) * sum(int(a & b) for a, b in zip(row_i, row_w))
        for row_i, row_w, s in zip(in_bits, w_bits, signs)
    )
    assert counts.difference == brute


def test_mismatch_hook_ideal_scales_agree():
    rng = np.random.default_rng(3)
    cfg = MacConfig(3, 2, 1.0)
    ones = np.ones(cfg.caps_per_side)
    for _ in range(50):
        inputs = random_inputs(rng, 3, 2)
        ideal = charge_oracle(inputs, cfg)
        scaled = charge_oracle(inputs, cfg, cap_scale=(ones, ones))
        assert scaled == pytest.approx(ideal, abs=1e-12)


def test_mismatch_hook_perturbs_voltage():
    cfg = MacConfig(3, 2, 1.0)
    inputs = worked_inputs()
    rng = np.random.default_rng(8)
    caps = 1.0 + 0.05 * rng.standard_normal(cfg.caps_per_side)
    v = charge_oracle(inputs, cfg, cap_scale=(caps, caps))
    ideal = charge_oracle(inputs, cfg)
    assert v != ideal
    assert abs(v - ideal) < 0.1 * cfg.vdd


def test_mismatch_hook_validates_shapes():
    cfg = MacConfig(3, 2, 1.0)
    with pytest.raises(MacError):
        charge_oracle(worked_inputs(), cfg, cap_scale=(np.ones(3), np.ones(7)))


def test_inputs_validation():
    with pytest.raises(MacError):
        MacInputs(np.zeros((2, 3)), np.zeros((2, 4)), np.zeros(2))
    with pytest.raises(MacError):
        MacInputs(np.zeros((2, 3)), np.zeros((2, 3)), np.zeros(3))
    with pytest.raises(MacError):
        MacInputs(2 * np.ones((2, 3)), np.zeros((2, 3)), np.zeros(2))
    with pytest.raises(MacError):
        SignedStochNumber(Bitstream.from_string("101"), 2)
    with pytest.raises(MacError):
        MacConfig(0, 1)
    with pytest.raises(MacError):
        mac_evaluate(worked_inputs(), MacConfig(3, 4, 1.0))


def test_voltages_use_exact_fractions():
    # 1/3-style ratios survive: VP at n_p=1, m=1, N=2 is exactly 1/3 in binary64
    vp, _ = phase1_voltages(ProductCounts(1, 0), MacConfig(1, 2, 1.0))
    assert vp == float(Fraction(1, 3))
