# %% [markdown]
# # Macdonald polynomials
#
# With [z] = sin(pi z) and z = e(x), q = e(delta), t = e(kappa), the
# operators become q-difference operators with rational coefficients.
# Their action on symmetric polynomials is computed exactly over Q.

# %%
from artifact import QTField, apply_calD, apply_calH, macdonald_poly
from artifact.macdonald import eigenvalue_D, g_value, spectral_point
from artifact.symmetric import SymPoly

qt = QTField("3/5", "2/7")
P = macdonald_poly((2, 1), 3, qt)
print(P)

# %% [markdown]
# P_lambda is an eigenfunction of every calD_r and calH_l.

# %%
for r in range(1, 4):
    ok = apply_calD(r, P, qt) == P.scale(eigenvalue_D((2, 1), r, 3, qt))
    print(f"calD_{r}: eigenvalue {eigenvalue_D((2, 1), r, 3, qt)}  {ok}")
xi = spectral_point((2, 1), 3, qt)
for l in range(1, 4):
    print(f"calH_{l}: {apply_calH(l, P, qt) == P.scale(g_value(l, xi, qt))}")

# %% [markdown]
# A monomial symmetric function is not an eigenfunction.

# %%
m = SymPoly.monomial((2, 1), 3)
print(apply_calD(1, m, qt))

# %% [markdown]
# The exact suite covers the eigenvalues, g_l, both recurrences and the
# generating functions.

# %%
from artifact.suites import macdonald_checks

for rec in macdonald_checks(2, qt, max_size=3, lmax=3, genfun_order=2):
    print(rec.line())
