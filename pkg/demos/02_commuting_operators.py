# %% [markdown]
# # D_r and H_l commute
#
# D_r shifts r of the n variables at once; H_l shifts by any multi-index of
# total degree l.  Operators are stored as evaluators of their
# coefficients, and identities are checked coefficient by coefficient at
# random points.

# %%
import random

from artifact import BracketFunction, build_D, build_H, commutator_residual, op_vanishes_at
from artifact.ruijsenaars import sample_params

p = sample_params(3, BracketFunction("elliptic"), random.Random(1))
D1, D2, H2 = build_D(1, p), build_D(2, p), build_H(2, p)
print(D1, D2, H2)
print("H_2 shifts:", H2.support)

# %% [markdown]
# A coefficient is an ordinary function of x.

# %%
x = (0.1 + 0.2j, -0.3 + 0.05j, 0.4 - 0.1j)
for mu, value in D1.coefficients(x).items():
    print(mu, value)

# %% [markdown]
# Commutators vanish.  The residual of each coefficient is divided by the
# sum of the absolute values of the products that formed it.

# %%
for kind, r, s in [("DD", 1, 2), ("DH", 2, 2), ("HH", 1, 3)]:
    report = op_vanishes_at(commutator_residual(r, s, p, kind), num_samples=5)
    print(f"[{kind[0]}_{r}, {kind[1]}_{s}]  worst {report.max_residual:.2e}  passed={report.passed}")

# %% [markdown]
# A deliberately wrong claim fails by many orders of magnitude.

# %%
from artifact import op_equal_at

print(op_equal_at(D1, D2, num_samples=3).max_residual)
