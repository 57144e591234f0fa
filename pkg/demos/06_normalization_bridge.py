# %% [markdown]
# # From additive to multiplicative operators
#
# The trigonometric D_r and H_l are scalar multiples of calD_r and calH_l.
# Comparing coefficients at random points pins the scalars down:
#
#     D_r = t^{-r(n-1)/2} calD_r,       H_l = q^{l/2} t^{-nl/2} calH_l,
#
# with t^{1/2} = e(kappa/2) and q^{1/2} = e(delta/2).  The alternative
# prefactors t^{-r(n-r)/2} and q^{-l/2} t^{-nl/2} agree only for D_1.

# %%
import random

import mpmath

from artifact.macdonald import normalization_bridge_residual

rng = random.Random(5)


def draw(k):
    return [mpmath.mpc(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3)) for _ in range(k)]


n = 3
x = draw(n)
delta, kappa = draw(2)
for kind in ("D", "H"):
    for k in (1, 2, 3):
        full = normalization_bridge_residual(kind, k, x, delta, kappa, "full")
        naive = normalization_bridge_residual(kind, k, x, delta, kappa, "naive")
        print(f"{kind}_{k}:  full {full:.1e}   naive {naive:.1e}")
