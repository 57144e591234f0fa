"""The bracket function [z] and its elementary products.

[z] is a nonzero odd entire function satisfying the three-term relation

    [z+a][z-a][b+g][b-g] + [z+b][z-b][g+a][g-a] + [z+g][z-g][a+b][a-b] = 0.

Every such function is, up to a constant, e^{cz^2} times one of
sigma(z), sin(pi z / omega) or z.  The elliptic flavor uses the odd theta
series in the nome p = e(omega2/omega1), which lies in the sigma class up
to an admissible Gaussian factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
from mpmath import mp

from .errors import InvalidParameters, PrecisionUnreachable

FLAVORS = ("elliptic", "trigonometric", "rational")
_ALIASES = {"trig": "trigonometric", "ell": "elliptic", "rat": "rational"}

MAX_THETA_TERMS = 10_000


def e(u):
    """e(u) = exp(2 pi i u)."""
    return mpmath.expjpi(2 * u)


@dataclass(frozen=True)
class BracketFunction:
    """An odd entire solution of the three-term relation.

    ``omega1``/``omega2`` are used by the elliptic flavor only and ``omega``
    by the trigonometric flavor only.  ``gauss_c`` multiplies every flavor by
    e^{c z^2}.  ``precision`` is the working number of decimal digits.
    """

    flavor: str = "elliptic"
    omega1: complex = 1
    omega2: complex = 1j
    omega: complex = 1
    gauss_c: complex = 0
    precision: int = 64
    _theta: list = field(default_factory=list, init=False, repr=False, compare=False)

    def __post_init__(self):
        flavor = _ALIASES.get(self.flavor, self.flavor)
        if flavor not in FLAVORS:
            raise InvalidParameters(f"unknown bracket flavor {self.flavor!r}")
        object.__setattr__(self, "flavor", flavor)
        if self.precision < 15:
            raise InvalidParameters("precision must be at least 15 digits")
        with mp.workdps(self.precision):
            if flavor == "elliptic":
                if self.omega1 == 0:
                    raise InvalidParameters("omega1 must be nonzero")
                tau = mpmath.mpmathify(self.omega2) / mpmath.mpmathify(self.omega1)
                if tau.imag <= 0:
                    raise InvalidParameters("elliptic flavor needs Im(omega2/omega1) > 0")
            elif flavor == "trigonometric" and self.omega == 0:
                raise InvalidParameters("omega must be nonzero")

    # -- elliptic theta series ------------------------------------------------

    @property
    def nome(self):
        """p = e(omega2/omega1); only meaningful for the elliptic flavor."""
        with mp.workdps(self.precision):
            return e(mpmath.mpmathify(self.omega2) / mpmath.mpmathify(self.omega1))

    def _theta_coefficient(self, k: int):
        # (-1)^k p^{k(k+1)/2}, extended lazily and shared between calls
        coeffs = self._theta
        if not coeffs:
            coeffs.append(mpmath.mpc(1))
        p = None
        while len(coeffs) <= k:
            if p is None:
                p = self.nome
            j = len(coeffs)
            coeffs.append(-coeffs[-1] * p**j)
        return coeffs[k]

    def _theta_terms(self, imag_w: float) -> int:
        # smallest K with |p|^{K(K+1)/2} e^{2 pi (K+1/2)|Im w|} < 10^-(precision+10)
        log_p = self._log_abs_nome
        target = -(self.precision + 10) * math.log(10)
        growth = 2 * math.pi * abs(imag_w)
        for k in range(MAX_THETA_TERMS):
            if k * (k + 1) / 2 * log_p + growth * (k + 0.5) < target:
                return k
        raise PrecisionUnreachable(
            f"theta series with |Im(z/omega1)|={abs(imag_w):.3g} needs more than "
            f"{MAX_THETA_TERMS} terms for {self.precision} digits"
        )

    @property
    def _log_abs_nome(self) -> float:
        tau = complex(self.omega2) / complex(self.omega1)
        return -2 * math.pi * tau.imag

    def _elliptic(self, z):
        w = z / self.omega1
        count = self._theta_terms(float(w.imag))
        self._theta_coefficient(count)
        coeffs = self._theta
        y = mpmath.expjpi(w)  # e(w/2)
        y2 = y * y
        fwd, bwd = y, 1 / y
        bwd2 = 1 / y2
        total = coeffs[0] * (fwd - bwd)
        for k in range(1, count):
            fwd *= y2
            bwd *= bwd2
            total += coeffs[k] * (fwd - bwd)
        return total

    # -- public evaluation ----------------------------------------------------

    def __call__(self, z):
        with mp.workdps(self.precision):
            z = mpmath.mpmathify(z)
            if self.flavor == "rational":
                value = z
            elif self.flavor == "trigonometric":
                value = mpmath.sinpi(z / self.omega)
            else:
                value = self._elliptic(z)
            if self.gauss_c:
                value *= mpmath.exp(self.gauss_c * z * z)
            return +value


def evaluate(b: BracketFunction, z):
    """Return [z]."""
    return b(z)


def shifted_factorial(b: BracketFunction, z, k: int, delta):
    """[z]_k = [z][z+delta]...[z+(k-1)delta]; the empty product is 1."""
    if k < 0:
        raise ValueError("k must be non-negative")
    with mp.workdps(b.precision):
        z, delta = mpmath.mpmathify(z), mpmath.mpmathify(delta)
        result = mpmath.mpc(1)
        for j in range(k):
            result *= b(z + j * delta)
        return result


def hirota_terms(b: BracketFunction, z, alpha, beta, gamma):
    """The three products in the three-term relation, in their natural order."""
    with mp.workdps(b.precision):
        z, alpha, beta, gamma = (mpmath.mpmathify(v) for v in (z, alpha, beta, gamma))

        def pm(u, v):
            return b(u + v) * b(u - v)

        return (
            pm(z, alpha) * pm(beta, gamma),
            pm(z, beta) * pm(gamma, alpha),
            pm(z, gamma) * pm(alpha, beta),
        )


def hirota_residual(b: BracketFunction, z, alpha, beta, gamma):
    """Left side of the three-term relation; vanishes for a valid bracket."""
    with mp.workdps(b.precision):
        return mpmath.fsum(hirota_terms(b, z, alpha, beta, gamma))


def delta_product(b: BracketFunction, x: Sequence) -> complex:
    """Difference product prod_{i<j} [x_i - x_j]."""
    with mp.workdps(b.precision):
        x = [mpmath.mpmathify(v) for v in x]
        result = mpmath.mpc(1)
        for i in range(len(x)):
            for j in range(i + 1, len(x)):
                result *= b(x[i] - x[j])
        return result
