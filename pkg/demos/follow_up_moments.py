"""
Moments of the follow-up time
=============================

Participants are recruited uniformly over ``[0, d]`` and followed until
infection (exponential with rate lambda) or the end of the study. The full
model needs the mean and variance of one participant's follow-up time
min(T, C). Here the closed forms are checked against adaptive quadrature
and against simulation, and the published program's second moment is
shown to drift away once lambda*d is no longer small.
"""

import numpy as np

from ve_infer import MomentMode, mc_moments, surveillance_moments
from ve_infer.moments import surveillance_mean, surveillance_variance
from ve_infer.oracles import quadrature_moment_oracle

# %%
# Limits: with no infections the follow-up is Uniform(0, d).
d = 0.29
print("mean at lambda=0:", surveillance_mean(0.0, d), "(d/2 =", d / 2, ")")
print("corrected variance at lambda=1e-9:", surveillance_variance(1e-9, d), "(d^2/12 =", d * d / 12, ")")

# %%
# Closed form against quadrature at the interim study's scale.
lam = 2.0
print(surveillance_moments(lam, d))
print("quadrature mean:", quadrature_moment_oracle(lam, d, 1))

# %%
# Corrected and paper-mode variances against simulation over a range of
# lambda*d. The z-score is (Monte Carlo - formula) / standard error.
print(f"{'lambda*d':>9} {'corrected z':>12} {'paper z':>10}")
for x in (0.01, 0.1, 1.0, 2.0, 5.0, 10.0):
    mc = mc_moments(200_000, x, 1.0, seed=1)
    z_c = (mc.variance - surveillance_variance(x, 1.0, MomentMode.CORRECTED)) / mc.se_var
    z_p = (mc.variance - surveillance_variance(x, 1.0, MomentMode.PAPER_COMPAT)) / mc.se_var
    print(f"{x:>9.2f} {z_c:>12.2f} {z_p:>10.1f}")

# %%
# The paper-mode variance turns negative past lambda*d of about 2, so it
# cannot be used as a Normal variance there.
xs = np.array([0.5, 1.0, 2.0, 3.0])
print(surveillance_variance(xs, 1.0, MomentMode.PAPER_COMPAT))
