"""Closed-form channel coefficients, best-Pauli distance, hardware mapping.

Everything here is analytic or a one-dimensional optimization: the
two-cycle repetition-code channels for independent phase flips and for
quasistatic phase damping, the 16 signed cycle-resolved weights, the
max-norm distance between the two channels with its minimizer, and the
spin-qubit curve mapping measurement time to (p, q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coherent import p_of_sigma, sigma_of_p  # noqa: F401  (re-exported conversions)

SYNDROME_PAIRS = ("++", "-+", "+-", "--")


@dataclass(frozen=True)
class TwoCycleChannel:
    """Coefficients c_s, d_s of the two-cycle repetition-code channel.

    Keys are the syndrome pairs (s1, s2) written as '++', '-+', '+-', '--'.
    For final outcome +1, c/d multiply rho and Z_L rho Z_L; for -1 they
    multiply Z_A rho Z_A and Z_B rho Z_B.
    """

    c: dict[str, float]
    d: dict[str, float]

    def total(self) -> float:
        return sum(self.c.values()) + sum(self.d.values())

    def as_array(self) -> np.ndarray:
        """(4, 2) array in SYNDROME_PAIRS order, columns (c, d)."""
        return np.array([[self.c[s], self.d[s]] for s in SYNDROME_PAIRS])


def pauli_two_cycle(p: float) -> TwoCycleChannel:
    """Two-cycle coefficients for independent phase flips of rate p."""
    c_pp = (1 - p) ** 4 + p**4
    pair = 2 * p**2 * (1 - p) ** 2
    rest = p * (1 - p) ** 3 + p**3 * (1 - p)
    return TwoCycleChannel(
        c={"++": c_pp, "-+": pair, "+-": rest, "--": rest},
        d={"++": pair, "-+": pair, "+-": rest, "--": rest},
    )


def coherent_two_cycle(sigma: float) -> TwoCycleChannel:
    """Two-cycle coefficients for quasistatic phase damping of spread sigma."""
    e4 = math.exp(-4 * sigma**2)
    e8 = math.exp(-8 * sigma**2)
    e16 = math.exp(-16 * sigma**2)
    c_pp = (e16 + 2 * e8 + 8 * e4 + 5) / 16
    c_mp = (e16 + 2 * e8 - 8 * e4 + 5) / 16
    d_pp = (1 - e8) ** 2 / 16
    rest = (1 - e16) / 16
    return TwoCycleChannel(
        c={"++": c_pp, "-+": c_mp, "+-": rest, "--": rest},
        d={"++": d_pp, "-+": d_pp, "+-": rest, "--": rest},
    )


# The 16 cycle-resolved error scenarios of the two-qubit code over two
# cycles, as (first-cycle, second-cycle) Z-string masks with qubit A = bit 0
# and B = bit 1, together with the signed coherent weights as polynomials in
# p (ascending powers).  Scenario order groups by syndrome history.
TWO_CYCLE_SCENARIOS: tuple[tuple[int, int], ...] = (
    (0b00, 0b00),
    (0b11, 0b11),
    (0b00, 0b11),
    (0b11, 0b00),
    (0b01, 0b01),
    (0b10, 0b10),
    (0b01, 0b10),
    (0b10, 0b01),
    (0b00, 0b01),
    (0b11, 0b10),
    (0b00, 0b10),
    (0b11, 0b01),
    (0b01, 0b00),
    (0b10, 0b11),
    (0b01, 0b11),
    (0b10, 0b00),
)

_POLY_A = (1, -4, 11, -26, 46, -60, 56, -32, 8)  # no error, trivial history
_POLY_B = (0, 0, 1, -6, 26, -52, 56, -32, 8)
_POLY_C = (0, 0, 2, -12, 34, -56, 56, -32, 8)
_POLY_D = (0, 0, 4, -16, 36, -56, 56, -32, 8)
_POLY_E = (0, 1, -6, 19, -40, 58, -56, 32, -8)
_POLY_F = (0, 0, -1, 9, -30, 54, -56, 32, -8)  # negative at small p

TWO_CYCLE_WEIGHT_POLYS: tuple[tuple[int, ...], ...] = (
    _POLY_A,
    _POLY_B,
    _POLY_C,
    _POLY_C,
    _POLY_D,
    _POLY_D,
    _POLY_C,
    _POLY_C,
    _POLY_E,
    _POLY_F,
    _POLY_E,
    _POLY_F,
    _POLY_E,
    _POLY_F,
    _POLY_F,
    _POLY_E,
)


def two_cycle_signed_weights(p: float) -> np.ndarray:
    """The 16 signed scenario weights as polynomials in p = <sin^2 theta>."""
    powers = np.array([p**k for k in range(9)])
    return np.array([np.dot(poly, powers) for poly in TWO_CYCLE_WEIGHT_POLYS])


def two_cycle_pauli_probabilities(p: float) -> np.ndarray:
    """Independent-phase-flip probabilities of the same 16 scenarios."""
    out = []
    for e1, e2 in TWO_CYCLE_SCENARIOS:
        k = e1.bit_count() + e2.bit_count()
        out.append(p**k * (1 - p) ** (4 - k))
    return np.array(out)


def tvd(p: float, sigma: float) -> float:
    """Max-norm distance between the two-cycle Pauli and coherent channels.

    Despite the conventional name, this is a maximum over the eight
    coefficient pairs of the absolute difference.
    """
    diff = np.abs(pauli_two_cycle(p).as_array() - coherent_two_cycle(sigma).as_array())
    return float(diff.max())


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def best_pauli(sigma: float, tol: float = 1e-10) -> tuple[float, float]:
    """Best single-parameter phase-flip approximation of the coherent channel.

    Returns (p_best, delta_min) minimizing tvd(p, sigma) over p in [0, 1/2).
    Golden-section on a grid-located bracket; the objective is quasiconvex
    because every coefficient is monotone in p.
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    grid = np.linspace(0.0, 0.5 - 1e-9, 1001)
    vals = [tvd(p, sigma) for p in grid]
    k = int(np.argmin(vals))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = tvd(x1, sigma), tvd(x2, sigma)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = tvd(x1, sigma)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = tvd(x2, sigma)
    p_best = 0.5 * (a + b)
    return p_best, tvd(p_best, sigma)


@dataclass(frozen=True)
class HardwarePoint:
    """Spin-qubit operating point for one measurement integration time."""

    t_meas: float  # us
    t2_star: float  # us
    tau: float  # us
    sigma: float
    p: float
    q: float


def hardware_point(t_meas: float, t2_star: float = 10.0, tau: float = 0.21) -> HardwarePoint:
    """Map measurement time to noise rates: sigma = sqrt(2) T_meas / T2*, q = (tau/T_meas)^5."""
    if t_meas <= 0 or t2_star <= 0 or tau <= 0:
        raise ValueError("times must be positive")
    sigma = math.sqrt(2.0) * t_meas / t2_star
    return HardwarePoint(
        t_meas=t_meas,
        t2_star=t2_star,
        tau=tau,
        sigma=sigma,
        p=p_of_sigma(sigma),
        q=(tau / t_meas) ** 5,
    )


def hardware_curve(
    t_meas_values, t2_star: float = 10.0, tau: float = 0.21
) -> list[HardwarePoint]:
    """Parametric (p, q) curve over a range of measurement times."""
    return [hardware_point(t, t2_star, tau) for t in t_meas_values]
