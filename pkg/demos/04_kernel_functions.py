# %% [markdown]
# # Kernel functions
#
# The dual Cauchy kernel Psi(x;y) = prod [x_i - y_k] intertwines H_r in x
# with D_r in y (delta and kappa exchanged) once m kappa + n delta = 0.

# %%
import random

from gmpy2 import mpq

from artifact import BracketFunction, DualityParams, kajihara_preset, kajihara_residual
from artifact.diffop import sample_point
from artifact.kernels import duality_sum_terms, hd_identity_terms, relative_residual, trig_kernel_residuals

rng = random.Random(4)
for flavor in ("elliptic", "trigonometric", "rational"):
    b = BracketFunction(flavor)
    lhs, rhs = hd_identity_terms(2, sample_point(rng, 3), sample_point(rng, 2), 0.31 + 0.1j, b)
    print(f"{flavor:>13}: {relative_residual(lhs, rhs):.1e}")

# %% [markdown]
# Balanced duality sums: with sum(a) = sum(b), a sum over N^m equals a sum
# over N^n.  `balanced` fills in the last b.

# %%
b = BracketFunction("elliptic")
dp = DualityParams.balanced(sample_point(rng, 3), sample_point(rng, 1), 0.27 - 0.1j, b)
lhs, rhs = duality_sum_terms(3, sample_point(rng, 3), sample_point(rng, 2), dp)
print(len(lhs), "terms against", len(rhs), "->", f"{relative_residual(lhs, rhs):.1e}")

# %% [markdown]
# In the trigonometric case the kernels become power series in u; the
# identities are compared coefficient by coefficient.

# %%
for kind, m, n in [("DD", 3, 2), ("HH", 2, 2), ("HD", 2, 1)]:
    print(kind, m, n, f"{trig_kernel_residuals(kind, m=m, n=n, series_order=3):.1e}")

# %% [markdown]
# Kajihara's Euler transformation is checked exactly over the rationals.
# The three presets specialize it to the kernel identities above.

# %%
q, t = mpq(3, 5), mpq(2, 7)
z, w = [mpq(1, 7), mpq(2, 7)], [mpq(-2, 5)]
for kind in ("DD", "HH", "HD"):
    a, bb = kajihara_preset(kind, 2, 1, q, t)
    print(kind, kajihara_residual(3, z, w, a, bb, q))
