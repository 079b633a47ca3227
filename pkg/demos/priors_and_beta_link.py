"""
Elicited priors and the Beta link
=================================

Default Gamma priors come from two guesses: a prior VE and a control
infection rate. Independent Gamma rates also induce a Beta prior on the
weighted share b_v L_v / (b_v L_v + b_c L_c), which is how the full model
can mimic the conditional method's prior.
"""

from ve_infer import PFIZER_MIMIC_PRIORS, elicit_priors, prior_mean_ve
from ve_infer.oracles import beta_representation_check

# %%
# A prior VE of 30% and a one-week mean time to infection.
priors = elicit_priors(ve_hat=0.3, lambda_c_hat=365 / 7)
print(priors)
print("prior mean VE:", prior_mean_ve(priors))

# %%
# The mimic priors have a_c = 1, so E[1/lambda_c] and the prior mean of VE
# do not exist.
try:
    prior_mean_ve(PFIZER_MIMIC_PRIORS)
except ValueError as exc:
    print("mimic priors:", exc)

# %%
# Kolmogorov-Smirnov distance between simulated weighted ratios and the
# Beta(a_v, a_c) CDF.
for p in (PFIZER_MIMIC_PRIORS, priors):
    print(f"a_v={p.a_v}, a_c={p.a_c:.6f}: KS = {beta_representation_check(p, 100_000, seed=1):.4f}")
