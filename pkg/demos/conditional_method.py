"""
The conditional Beta-binomial method
====================================

Given the case split between arms, the share of cases in the vaccine arm
is binomial with success probability theta. A Beta prior on theta is
conjugate, so the posterior is available in closed form and every VE
summary follows by pushing theta through a decreasing map.
"""

from ve_infer import (
    PFIZER_BETA_PRIOR,
    PFIZER_INTERIM,
    BetaDistributionParams,
    analyze_conditional,
    posterior_theta,
    theta_from_ve,
    ve_credible_interval,
)

data = PFIZER_INTERIM
print(data)

# %%
# The trial's prior, Beta(0.700102, 1), puts prior mean VE near 30%.
# Eight vaccine-arm cases and 162 control cases update it to
# Beta(8.700102, 163).
post = posterior_theta(PFIZER_BETA_PRIOR, data.x_v, data.x_c)
print("posterior on theta:", post)

# %%
# Equal-tail interval for VE. The upper theta quantile becomes the lower
# VE bound.
lo, hi = ve_credible_interval(post, data.s_v, data.s_c, 0.95)
print(f"95% credible interval for VE: ({100 * lo:.1f}, {100 * hi:.1f})")

# %%
# Everything at once, with two success thresholds.
summary = analyze_conditional(data, PFIZER_BETA_PRIOR, 0.95, thresholds=(0.3, 0.9))
print(f"posterior mean VE   {100 * summary.mean_ve:.2f}")
print(f"posterior median VE {100 * summary.median_ve:.2f}")
print(f"plug-in VE (x/s)    {100 * summary.irr_point_estimate:.2f}")
for t, p in summary.prob_ve_above.items():
    print(f"P(VE > {t:.0%}) = {p:.6f}")

# %%
# The posterior mean (94.6) and the crude plug-in estimate (95.0) differ.
# The published interim summary quotes 95.0, which matches the plug-in.
#
# The theta that corresponds to a 30% VE threshold:
print("theta at VE = 0.3:", theta_from_ve(0.3, data.s_v, data.s_c))

# %%
# With a flat prior and equal surveillance the interval is analytic:
# theta in (0.025, 0.975) gives VE in (-38, 0.974).
print(ve_credible_interval(BetaDistributionParams(1, 1), 1.0, 1.0, 0.95))
