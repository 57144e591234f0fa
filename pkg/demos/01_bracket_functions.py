# %% [markdown]
# # Bracket functions
#
# Every operator in the package is built from one odd entire function [z]
# satisfying the three-term relation
#
#     [z+a][z-a][b+c][b-c] + [z+b][z-b][c+a][c-a] + [z+c][z-c][a+b][a-b] = 0.
#
# Three flavors are available: a theta function (elliptic), sin(pi z/omega)
# (trigonometric) and z itself (rational).

# %%
import random

import mpmath
from mpmath import mp

from artifact import BracketFunction, hirota_residual, shifted_factorial
from artifact.bracket import hirota_terms

ell = BracketFunction("elliptic", omega1=1, omega2=1j)
trig = BracketFunction("trigonometric", omega=1)
rat = BracketFunction("rational")

print(ell(0.3 + 0.1j))
print(trig(0.5), rat(2))

# %% [markdown]
# The elliptic flavor is a normalized theta_1.  mpmath's `jtheta` gives the
# same values through a different series.

# %%
with mp.workdps(64):
    tau = mpmath.mpc(0, 1)
    z = mpmath.mpc("0.3", "0.1")
    other = 1j * mpmath.expjpi(-tau / 4) * mpmath.jtheta(1, mpmath.pi * z, mpmath.expjpi(tau))
    print("difference from jtheta:", mpmath.nstr(abs(ell(z) - other), 3))

# %% [markdown]
# The relation holds to working precision for random arguments.  Residuals
# are reported relative to the largest of the three products.

# %%
rng = random.Random(0)
with mp.workdps(64):
    for b in (ell, trig, rat):
        args = [mpmath.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(4)]
        terms = hirota_terms(b, *args)
        rel = abs(hirota_residual(b, *args)) / sum(abs(t) for t in terms)
        print(f"{b.flavor:>13}: relative residual {mpmath.nstr(rel, 3)}")

# %% [markdown]
# Multiplying by a Gaussian e^{c z^2} preserves the relation, and shifted
# factorials [z]_k = [z][z+d]...[z+(k-1)d] are the building block of the
# H_l coefficients.

# %%
gauss = BracketFunction("trigonometric", gauss_c=0.4 - 0.2j)
with mp.workdps(64):
    print("gauss-twisted residual:", mpmath.nstr(abs(hirota_residual(gauss, 0.1, 0.2j, -0.3, 0.45)), 3))
print(shifted_factorial(rat, 1, 4, 1))  # 1*2*3*4
