#!/usr/bin/env python3
"""Accuracy experiments: exact decode, stochastic convergence, noise sweeps.

The proposed datapath decodes its quantized oracle exactly; the conventional
one is unbiased with RMSE shrinking like 1/sqrt(L). Both degrade gracefully
under bit flips.
"""

import numpy as np

from scmac import PipelineConfig, conventional_pipeline, proposed_pipeline, run_comparison

print("== proposed datapath: deterministic coding decodes exactly ==")
cfg = PipelineConfig(variant="proposed", n_inputs=8, m=15, trials=200, seed=2)
res = proposed_pipeline(None, None, cfg)
print(f"200 random trials, 8 inputs, 15-bit codes: max |error| = {res.max_abs_error}")

print("\n== conventional datapath: RMSE vs stream length ==")
lengths = [16, 64, 256, 1024]
rmses = []
for length in lengths:
    cfg = PipelineConfig(
        variant="conventional", n_inputs=4, trials=3000, seed=42, stream_length=length
    )
    res = conventional_pipeline(None, None, cfg)
    rmses.append(res.rmse)
    print(f"  L = {length:>5}: rmse = {res.rmse:.5f}")
slope = np.polyfit(np.log(lengths), np.log(rmses), 1)[0]
print(f"  log-log slope: {slope:.3f} (theory: -0.5, each bit is one Bernoulli sample)")

print("\n== bit-flip sweep on the product streams ==")
print(f"{'p':>8}{'conventional rmse':>20}{'proposed rmse':>16}")
for p in (0.0, 0.005, 0.02, 0.05):
    conv = conventional_pipeline(
        None,
        None,
        PipelineConfig(
            variant="conventional",
            n_inputs=4,
            trials=1500,
            seed=5,
            stream_length=256,
            flip_probability=p,
        ),
    )
    prop = proposed_pipeline(
        None,
        None,
        PipelineConfig(
            variant="proposed", n_inputs=4, m=15, trials=1500, seed=5, flip_probability=p
        ),
    )
    print(f"{p:>8.3f}{conv.rmse:>20.5f}{prop.rmse:>16.5f}")
print("(proposed errors are in integer decode steps; they grow smoothly with p)")

print("\n== side-by-side comparison on identical inputs ==")
conv_cfg = PipelineConfig(variant="conventional", n_inputs=300, trials=50, seed=1)
prop_cfg = PipelineConfig(variant="proposed", n_inputs=300, trials=50, seed=1)
cmp_res = run_comparison(conv_cfg, prop_cfg)
print(f"conventional rmse: {cmp_res.conventional.rmse:.3f} "
      f"(the MUX tree rescales by 2^ceil(log2 N) = 512, hence the noise)")
print(f"proposed rmse:     {cmp_res.proposed.rmse:.3f}")
print(f"energy reduction (calibrated profile): {cmp_res.reduction_percent:.1f}%")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.loglog(lengths, rmses, "o-", label="conventional path")
    ax.loglog(lengths, rmses[0] * (np.asarray(lengths) / lengths[0]) ** -0.5, "--",
              label="1/sqrt(L) reference")
    ax.set_xlabel("stream length L")
    ax.set_ylabel("RMSE")
    ax.legend()
    fig.tight_layout()
    fig.savefig("rmse_vs_length.png", dpi=120)
    print("\nsaved rmse_vs_length.png")
except ImportError:
    print("\n(matplotlib not installed; skipping the plot)")
