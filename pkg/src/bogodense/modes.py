"""Density moments, the maximally coupled excited mode, and its couplings.

The second mode retained by the two-mode truncation is the density-weighted
companion of the ground mode,

    xi1 = beta * (xi0^2 - alpha2) * xi0,      beta = (alpha3 - alpha2^2)^(-1/2),

with alpha_n = integral(xi0^(2n)).  This is the (normalized) component of
xi0^3 orthogonal to xi0; it maximizes the density-density coupling among all
modes orthogonal to xi0.
"""

import math
from dataclasses import dataclass

from .errors import DegenerateModeError
from .grid import RadialField, integrate, laplacian


def moment(gm, n):
    """alpha_n = integral of xi0^(2n) over all space (alpha_1 = 1)."""
    return integrate(RadialField(gm.xi0.grid, gm.xi0.values ** (2 * n)))


@dataclass(frozen=True, eq=False)
class ModeOne:
    xi1: RadialField
    beta: float
    alpha2: float
    alpha3: float


@dataclass(frozen=True)
class CouplingCoefficients:
    """Two-mode Hamiltonian coefficients in units of hbar*omega.

    gamma is the anomalous pair-exchange strength, mu1 the excited-mode
    energy, g01 = g/beta the number-fluctuation coupling.
    """

    alpha2: float
    alpha3: float
    alpha4: float
    beta: float
    gamma: float
    mu1: float
    mu: float
    g01: float
    nbar: float

    @property
    def g(self):
        """Bare interaction strength, recovered exactly as g01 * beta."""
        return self.g01 * self.beta

    @property
    def g_alpha2(self):
        return self.g * self.alpha2


def build_xi1(gm):
    """Construct the maximally coupled mode from a ground mode.

    Raises a degenerate-mode error when alpha3 <= alpha2^2 (zero density
    variance, e.g. a uniform profile), where no such mode exists.
    """
    alpha2 = moment(gm, 2)
    alpha3 = moment(gm, 3)
    variance = alpha3 - alpha2**2
    if variance <= 1e-12 * alpha3:
        raise DegenerateModeError(
            f"density variance alpha3 - alpha2^2 = {variance!r} is not positive"
        )
    beta = 1.0 / math.sqrt(variance)
    xi0 = gm.xi0.values
    xi1 = RadialField(gm.xi0.grid, beta * (xi0**2 - alpha2) * xi0)
    return ModeOne(xi1=xi1, beta=beta, alpha2=alpha2, alpha3=alpha3)


def coefficients(gm, m1, dp):
    """Coupling coefficients of the two-mode Hamiltonian.

    gamma = [beta^2*(alpha4 - alpha2^3) - 2*alpha2] * g and mu1 picks up the
    kinetic mismatch between xi1 and the condensate background,
    mu1 = mu + 1/2 * integral(xi1 * beta * (xi0^2*lap(xi0) - lap(xi0^3))).
    """
    grid = gm.xi0.grid
    xi0 = gm.xi0.values
    alpha2 = m1.alpha2
    alpha4 = moment(gm, 4)
    beta = m1.beta
    gamma = (beta**2 * (alpha4 - alpha2**3) - 2.0 * alpha2) * dp.g
    lap_xi0 = laplacian(gm.xi0).values
    lap_xi03 = laplacian(RadialField(grid, xi0**3)).values
    kin = integrate(
        RadialField(grid, m1.xi1.values * beta * (xi0**2 * lap_xi0 - lap_xi03))
    )
    mu1 = gm.mu + 0.5 * kin
    return CouplingCoefficients(
        alpha2=alpha2,
        alpha3=m1.alpha3,
        alpha4=alpha4,
        beta=beta,
        gamma=gamma,
        mu1=mu1,
        mu=gm.mu,
        g01=dp.g / beta,
        nbar=gm.nbar,
    )
