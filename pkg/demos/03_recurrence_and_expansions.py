# %% [markdown]
# # The recurrence linking D_r and H_l
#
#     sum_{r+s=l} (-1)^r [r kappa + s delta] D_r H_s = 0      (l >= 1)
#
# determines H_l from D_1, ..., D_l.  Solving it gives a determinant and an
# explicit sum over compositions of l.

# %%
import random

from artifact import (
    BracketFunction,
    build_D,
    build_H,
    d_via_determinant,
    h_via_compositions,
    h_via_determinant,
    op_equal_at,
    op_vanishes_at,
    wronski_residual_op,
)
from artifact.ruijsenaars import h3_closed_form, sample_params

p = sample_params(3, BracketFunction("trigonometric"), random.Random(2))
for l in range(1, 5):
    print(l, op_vanishes_at(wronski_residual_op(l, p), num_samples=5).max_residual)

# %%
for l in (2, 3):
    det = op_equal_at(h_via_determinant(l, p), build_H(l, p), num_samples=5)
    comp = op_equal_at(h_via_compositions(l, p), build_H(l, p), num_samples=5)
    print(f"H_{l}: determinant {det.max_residual:.1e}, compositions {comp.max_residual:.1e}")

# %% [markdown]
# The converse determinant in H_1..H_l reproduces D_l, and it vanishes
# identically when l exceeds the number of variables.

# %%
q2 = sample_params(2, BracketFunction("rational"), random.Random(3))
print(op_equal_at(d_via_determinant(2, q2), build_D(2, q2), num_samples=5).passed)
print(op_vanishes_at(d_via_determinant(3, q2), num_samples=5).passed)

# %% [markdown]
# Written out, H_3 has four terms.  The coefficient of D_2 D_1 carries the
# bracket [kappa + 2 delta]; with [kappa + delta] in its place the
# expression is no longer H_3.

# %%
good = op_equal_at(h3_closed_form(p, (1, 2)), build_H(3, p), num_samples=5)
bad = op_equal_at(h3_closed_form(p, (1, 1)), build_H(3, p), num_samples=5)
print(f"[k+2d]: {good.max_residual:.1e}   [k+d]: {bad.max_residual:.1e}")
