#!/usr/bin/env python3
"""Domain-boundary converters: LFSR streams, counters, ADC, thermometer ASC.

Conversion, not logic, is where stochastic systems burn their energy; this
demo shows each converter and the sense-amplifier gating trick that cheapens
the analog-to-stochastic step.
"""

from scmac import (
    adc_quantize,
    asc_encode,
    bsc_encode,
    default_lfsr,
    lfsr_next,
    ref_ladder,
    sbc_decode,
)

print("== a maximal-length 4-bit LFSR walks all 15 nonzero states ==")
reg = default_lfsr(4)
states = []
for _ in range(15):
    reg, out = lfsr_next(reg)
    states.append(out)
print(f"states: {states}")
print(f"distinct: {len(set(states))} of 15, returns to seed: {reg.state == 0b1000}")

print("\n== binary -> stochastic: LFSR + comparator ==")
reg = default_lfsr(4)
for code in (0, 4, 8, 15):
    stream = bsc_encode(code, reg)
    print(f"code {code:>2} -> {stream.to_string()}  ({stream.ones_count()} ones of 15)")

print("\n== stochastic -> binary: count the ones ==")
stream = bsc_encode(11, reg)
print(f"decode({stream.to_string()}) = {sbc_decode(stream)}")
print(f"round trip holds for every code: "
      f"{all(sbc_decode(bsc_encode(k, reg)) == k for k in range(16))}")

print("\n== behavioral ADC: floor quantization with clamping ==")
for x in (0.0, 0.49, 0.5, 1.0):
    print(f"adc_quantize({x}, 4 bits) = {adc_quantize(x, 4)}")

print("\n== analog -> stochastic: thermometer-coded sense amplifiers ==")
ladder = ref_ladder(3, vdd=1.0)
print(f"reference ladder (equal capacitor divider): {ladder.vref_volts}")
for x in (0.1, 0.6, 0.9):
    code, activity = asc_encode(x, ladder)
    print(
        f"x = {x:0.2f} V -> Y = {''.join(map(str, code.bits))}  "
        f"level {code.count}/3, SAs fired: {activity.enabled_sa_count} "
        f"(skipped {activity.disabled_sa_count})"
    )
print("a low input resolves at the first sense amplifier; the rest stay dark,")
print("and monotonicity guarantees the skipped comparators would output 0 anyway")

print("\n== gating never changes the code ==")
for x in (0.05, 0.33, 0.77):
    gated, _ = asc_encode(x, ladder)
    plain, _ = asc_encode(x, ladder, gating=False)
    print(f"x = {x:0.2f}: gated {gated.bits} == ungated {plain.bits}: {gated == plain}")
