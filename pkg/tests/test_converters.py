"""LFSR, BSC/SBC, ADC, reference ladder, and thermometer ASC."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scmac import (
    Bitstream,
    ConversionError,
    Lfsr,
    RefLadder,
    ThermometerCode,
    adc_quantize,
    adc_quantize_flagged,
    asc_encode,
    bsc_encode,
    default_lfsr,
    lfsr_next,
    ref_ladder,
    sbc_decode,
    thermometer_quantize,
)
from scmac.lfsr import MAXIMAL_TAPS, cycle_length, lfsr_outputs


def test_lfsr_4bit_visits_all_states():
    l = Lfsr(4, (4, 3), 0b1000)
    seen = set()
    cur = l
    for _ in range(15):
        cur, out = lfsr_next(cur)
        seen.add(out)
    assert seen == set(range(1, 16))
    assert cur.state == l.state  # back home after a full period


def test_lfsr_3bit_period_7():
    outs = lfsr_outputs(Lfsr(3, (3, 2), 1), 7)
    assert sorted(outs) == list(range(1, 8))


@pytest.mark.parametrize("width", sorted(MAXIMAL_TAPS))
def test_shipped_taps_are_maximal(width):
    assert cycle_length(width, MAXIMAL_TAPS[width]) == (1 << width) - 1


def test_lfsr_rejects_zero_state():
    with pytest.raises(ConversionError):
        Lfsr(4, (4, 3), 0)
    with pytest.raises(ConversionError):
        Lfsr(4, (4, 3), 16)


def test_lfsr_rejects_bad_taps():
    with pytest.raises(ConversionError):
        Lfsr(4, (3, 2), 1)  # must include the width
    with pytest.raises(ConversionError):
        Lfsr(4, (5, 4), 1)


def test_bsc_zero_and_full_scale():
    l = default_lfsr(4)
    assert bsc_encode(0, l) == Bitstream.zeros(15)
    assert bsc_encode(15, l) == Bitstream.ones(15)


def test_bsc_code_8_has_8_ones():
    assert bsc_encode(8, default_lfsr(4)).ones_count() == 8


@pytest.mark.parametrize("k", range(16))
def test_bsc_ones_count_exhaustive(k):
    assert bsc_encode(k, default_lfsr(4)).ones_count() == k


def test_bsc_out_of_range():
    with pytest.raises(ConversionError):
        bsc_encode(16, default_lfsr(4))


def test_sbc_examples():
    assert sbc_decode(Bitstream.from_string("01011100")) == 4
    assert sbc_decode(Bitstream.zeros(15)) == 0


def test_bsc_sbc_roundtrip_exhaustive():
    l = default_lfsr(4)
    assert [sbc_decode(bsc_encode(k, l)) for k in range(16)] == list(range(16))


def test_adc_examples():
    assert adc_quantize(0.0, 4) == 0
    assert adc_quantize(1.0, 4) == 15
    assert adc_quantize(0.5, 4) == 8


def test_adc_saturation_flag_and_clamp():
    assert adc_quantize_flagged(1.25, 4) == (15, True)
    assert adc_quantize_flagged(-0.1, 4) == (0, True)
    assert adc_quantize_flagged(0.3, 4) == (4, False)


def test_adc_rejects_nan():
    with pytest.raises(ConversionError):
        adc_quantize(float("nan"), 4)


def test_ref_ladder_examples():
    assert ref_ladder(3, 1.0).vref_volts == (0.25, 0.50, 0.75)
    assert ref_ladder(1, 1.0).vref_volts == (0.5,)
    assert ref_ladder(7, 1.0).vrefs == tuple(Fraction(i, 8) for i in range(1, 8))


def test_ref_ladder_scales_with_vdd():
    assert ref_ladder(3, 1.2).vrefs == tuple(Fraction(i, 4) * Fraction(1.2) for i in (1, 2, 3))


def test_ref_ladder_rejects_zero_taps():
    with pytest.raises(ConversionError):
        ref_ladder(0, 1.0)


def test_ref_ladder_must_increase():
    with pytest.raises(ConversionError):
        RefLadder((Fraction(1, 2), Fraction(1, 2)), Fraction(1))
    with pytest.raises(ConversionError):
        RefLadder((Fraction(1, 2), Fraction(3, 2)), Fraction(1))


def test_thermometer_code_validation():
    ThermometerCode((1, 1, 0))
    with pytest.raises(ConversionError):
        ThermometerCode((1, 0, 1))
    assert ThermometerCode.from_count(2, 3).bits == (1, 1, 0)


def test_asc_encode_examples():
    ladder = ref_ladder(3, 1.0)
    code, act = asc_encode(0.1, ladder)
    assert code.bits == (0, 0, 0) and act.enabled_sa_count == 1
    code, act = asc_encode(0.9, ladder)
    assert code.bits == (1, 1, 1) and act.enabled_sa_count == 3
    code, act = asc_encode(0.6, ladder)
    assert code.bits == (1, 1, 0) and act.enabled_sa_count == 3
    assert act.fired == (True, True, True)


def test_asc_tie_resolves_high():
    ladder = ref_ladder(3, 1.0)
    code, _ = asc_encode(Fraction(1, 4), ladder)
    assert code.bits == (1, 0, 0)


def test_asc_clamps_with_flag():
    ladder = ref_ladder(3, 1.0)
    code, act = asc_encode(1.5, ladder)
    assert code.count == 3 and act.input_clamped
    code, act = asc_encode(-0.2, ladder)
    assert code.count == 0 and act.input_clamped


@given(st.floats(-0.5, 1.5, allow_nan=False), st.integers(1, 12))
@settings(max_examples=200)
def test_asc_monotone_and_gating_pure(x, m):
    ladder = ref_ladder(m, 1.0)
    gated, activity = asc_encode(x, ladder)
    plain, _ = asc_encode(x, ladder, gating=False)
    # monotone by construction of ThermometerCode; equality shows gating
    # never alters the code
    assert gated == plain
    assert activity.enabled_sa_count == 1 + min(gated.count, m - 1)


@given(st.floats(0.0, 1.0, allow_nan=False), st.integers(1, 12))
@settings(max_examples=200)
def test_asc_count_matches_floor_formula(x, m):
    ladder = ref_ladder(m, 1.0)
    code, _ = asc_encode(x, ladder)
    expected = min(math.floor(Fraction(x) * (m + 1)), m)
    assert code.count == expected == thermometer_quantize(x, m)
