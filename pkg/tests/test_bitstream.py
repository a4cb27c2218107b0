"""Bitstream value semantics and gate-level SC arithmetic."""

import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings
from hypothesis import strategies as st

from scmac import (
    Alternating,
    Bitstream,
    ExplicitStream,
    LengthMismatchError,
    PseudoRandomLfsr,
    StreamError,
    inject_bitflips,
    mux_add,
    mux_tree_accumulate,
    mux_tree_scale,
    sc_mul,
    value,
)
from scmac._prng import unit_floats

def test_value_examples():
    assert value(Bitstream.from_string("01011100")) == Fraction(4, 8)
    assert value(Bitstream.zeros(8)) == 0
    assert value(Bitstream.ones(8)) == 1


def test_value_is_exact_rational():
    v = value(Bitstream.from_string("0110"))
    assert isinstance(v, Fraction)
    assert v == Fraction(2, 4) == Fraction(1, 2)


def test_bitstream_validation():
    with pytest.raises(StreamError):
        Bitstream([])
    with pytest.raises(StreamError):
        Bitstream([0, 2])
    with pytest.raises(StreamError):
        Bitstream([[0, 1], [1, 0]])
    with pytest.raises(StreamError):
        Bitstream.from_string("01x0")


def test_bitstream_immutable():
    b = Bitstream.from_string("0101")
    with pytest.raises(ValueError):
        b.bits[0] = 1


def test_sc_mul_worked_example():
    a = Bitstream.from_string("01011100")
    b = Bitstream.from_string("11101000")
    out = sc_mul(a, b)
    assert out == Bitstream.from_string("01001000")
    assert value(out) == Fraction(2, 8)


def test_sc_mul_identity_and_annihilator():
    x = Bitstream.from_string("0110101101")
    assert sc_mul(x, Bitstream.ones(10)) == x
    assert sc_mul(x, Bitstream.zeros(10)) == Bitstream.zeros(10)


def test_sc_mul_length_mismatch():
    with pytest.raises(LengthMismatchError):
        sc_mul(Bitstream.from_string("01"), Bitstream.from_string("011"))


@given(
    st.integers(1, 48).flatmap(
        lambda n: st.tuples(
            st.lists(st.integers(0, 1), min_size=n, max_size=n),
            st.lists(st.integers(0, 1), min_size=n, max_size=n),
        )
    )
)
def test_sc_mul_bounded_by_min(pair):
    a, b = Bitstream(pair[0]), Bitstream(pair[1])
    assert value(sc_mul(a, b)) <= min(value(a), value(b))


def test_mux_add_identical_operands():
    x = Bitstream.from_string("10101010")
    for sel in (Alternating(), ExplicitStream(Bitstream.from_string("01110001"))):
        assert mux_add(x, x, sel) == x


def test_mux_add_explicit_selection():
    a = Bitstream.from_string("11111111")
    b = Bitstream.from_string("00000000")
    out = mux_add(a, b, ExplicitStream(Bitstream.from_string("01010101")))
    assert value(out) == Fraction(4, 8)


def test_mux_add_alternating_worked_example():
    a = Bitstream.from_string("11110000")
    b = Bitstream.from_string("00001111")
    out = mux_add(a, b, Alternating())
    assert out == Bitstream.from_string("10100101")
    assert value(out) == Fraction(4, 8) == (value(a) + value(b)) / 2


def test_mux_add_accepts_raw_stream_as_select():
    a = Bitstream.from_string("1100")
    b = Bitstream.from_string("0011")
    assert mux_add(a, b, Bitstream.from_string("0101")) == Bitstream.from_string("1001")


def test_mux_add_select_length_mismatch():
    with pytest.raises(LengthMismatchError):
        mux_add(
            Bitstream.from_string("1100"),
            Bitstream.from_string("0011"),
            ExplicitStream(Bitstream.from_string("01")),
        )


@given(
    st.integers(1, 32).flatmap(
        lambda n: st.tuples(
            st.lists(st.integers(0, 1), min_size=n, max_size=n),
            st.lists(st.integers(0, 1), min_size=n, max_size=n),
            st.lists(st.integers(0, 1), min_size=n, max_size=n),
        )
    )
)
def test_mux_add_exact_count_form(triple):
    """value(out) = (ones of a at sel=0 + ones of b at sel=1) / L, exactly."""
    a, b, sel = (Bitstream(bits) for bits in triple)
    out = mux_add(a, b, ExplicitStream(sel))
    expect = sum(
        (bv if sv else av) for av, bv, sv in zip(a.bits, b.bits, sel.bits)
    )
    assert value(out) == Fraction(int(expect), len(a))


def test_mux_tree_singleton():
    x = Bitstream.from_string("0110")
    assert mux_tree_accumulate([x], Alternating()) == x


def test_mux_tree_all_ones():
    ones = [Bitstream.ones(8)] * 4
    out = mux_tree_accumulate(ones, PseudoRandomLfsr())
    assert value(out) == 1


def test_mux_tree_two_streams_explicit():
    out = mux_tree_accumulate(
        [Bitstream.from_string("1111"), Bitstream.from_string("0000")],
        ExplicitStream(Bitstream.from_string("0101")),
    )
    assert value(out) == Fraction(2, 4)


def test_mux_tree_pads_to_power_of_two():
    streams = [Bitstream.ones(4)] * 3
    out = mux_tree_accumulate(streams, ExplicitStream(Bitstream.zeros(4)))
    # sel always 0 walks down the leftmost leaf
    assert out == Bitstream.ones(4)
    assert mux_tree_scale(3) == 4


def test_mux_tree_empty_rejected():
    with pytest.raises(StreamError):
        mux_tree_accumulate([], Alternating())


def test_inject_bitflips_endpoints():
    a = Bitstream.from_string("01101010")
    assert inject_bitflips(a, 0.0, 99) == a
    assert inject_bitflips(a, 1.0, 99) == Bitstream(1 - a.bits)


def test_single_flip_moves_value_one_eighth():
    a = Bitstream.from_string("01101010")
    assert value(a) == Fraction(4, 8)
    for i in range(8):
        bits = a.bits.copy()
        bits[i] ^= 1
        v = value(Bitstream(bits))
        assert v in (Fraction(3, 8), Fraction(5, 8))


@given(st.integers(0, 2**63 - 1), st.floats(0.0, 1.0), st.integers(1, 128))
@settings(max_examples=60)
def test_inject_bitflips_reproducible(seed, p, length):
    b = Bitstream((np.arange(length) * 7 + 3) % 2)
    assert inject_bitflips(b, p, seed) == inject_bitflips(b, p, seed)


def test_flip_probability_validated():
    with pytest.raises(StreamError):
        inject_bitflips(Bitstream.ones(4), 1.5, 0)


def _bernoulli_stream_values(p, q, length, trials, seed):
    """Mean product value over seeded iid Bernoulli stream pairs."""
    idx = np.arange(trials * length, dtype=np.uint64)
    ua = unit_floats(seed, idx).reshape(trials, length)
    ub = unit_floats(seed + 1, idx).reshape(trials, length)
    a = ua < p
    b = ub < q
    return (a & b).mean(axis=1)


def test_product_statistics_match_pq():
    """Mean of value(sc_mul) over 10^4 random stream pairs stays near p*q."""
    p, q, length, trials = 0.7, 0.4, 256, 10_000
    vals = _bernoulli_stream_values(p, q, length, trials, seed=20_260_810)
    sigma_single = np.sqrt(p * q * (1 - p * q) / length)
    assert abs(vals.mean() - p * q) <= 3 * sigma_single / np.sqrt(trials)
