"""Coin jets, the Fourier-space walk operator, and its first-order expansion.

A coin is the U(2) matrix

    C = e^{i delta} rot('z', zeta) rot('y', theta) rot('z', phi)

whose angles depend on the small parameter eps through a first-order jet.
Two jet modes exist:

* ``time``     -- zeta, theta, phi all expand linearly in eps
                  (lattice spacing held fixed);
* ``plastic``  -- only theta expands, in powers of eps**b with a rational
                  exponent b in (0, 1], and the lattice spacing scales as
                  eps**a.

Angles are stored unreduced (no mod-2pi normalization) so integer
witnesses stay recoverable by the constraint checkers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.typing import NDArray

from .mat2 import SY, SZ, dag, rot
from ._util import stack_power

__all__ = [
    "CoinJet",
    "WalkConfig",
    "coin_at",
    "shift_symbol",
    "walk_k",
    "first_order_blocks",
    "walk_power_expansion",
]

_MODES = ("time", "plastic")


@dataclass(frozen=True)
class CoinJet:
    """First-order jet of one coin's four angles.

    delta is the eps-independent global phase.  In time mode the angle at
    eps is  w0 + w1 * eps  for each of zeta, theta, phi.  In plastic mode
    zeta and phi are frozen (zeta1 = phi1 = 0) and
    theta(eps) = theta0 + theta1 * eps**b_exp.
    """

    delta: float = 0.0
    zeta0: float = 0.0
    zeta1: float = 0.0
    theta0: float = 0.0
    theta1: float = 0.0
    phi0: float = 0.0
    phi1: float = 0.0
    b_exp: Fraction = Fraction(1)
    mode: str = "time"

    def __post_init__(self):
        for name in ("delta", "zeta0", "zeta1", "theta0", "theta1", "phi0", "phi1"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"CoinJet.{name} must be finite")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        b = Fraction(self.b_exp)
        object.__setattr__(self, "b_exp", b)
        if not (0 < b <= 1):
            raise ValueError(f"b_exp must lie in (0, 1], got {b}")
        if self.mode == "time" and b != 1:
            raise ValueError("time mode fixes b_exp = 1")
        if self.mode == "plastic" and (self.zeta1 != 0.0 or self.phi1 != 0.0):
            raise ValueError("plastic mode expands theta only (zeta1 = phi1 = 0)")

    def angles_at(self, eps: float) -> tuple[float, float, float]:
        """(zeta, theta, phi) evaluated at eps."""
        if self.mode == "time":
            return (self.zeta0 + self.zeta1 * eps,
                    self.theta0 + self.theta1 * eps,
                    self.phi0 + self.phi1 * eps)
        step = float(eps) ** float(self.b_exp)
        return (self.zeta0, self.theta0 + self.theta1 * step, self.phi0)


@dataclass(frozen=True)
class WalkConfig:
    """One walk family: two coin jets, stroboscopic step, space scaling.

    The lattice spacing is Delta = eps**a_exp when a_exp > 0, else the
    fixed ``delta_spatial`` (unity for the pure continuous-time scaling).
    """

    coin_x: CoinJet
    coin_y: CoinJet
    tau: int = 2
    a_exp: Fraction = Fraction(0)
    delta_spatial: float = 1.0

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError(f"tau must be >= 1, got {self.tau}")
        a = Fraction(self.a_exp)
        object.__setattr__(self, "a_exp", a)
        if not (0 <= a <= 1):
            raise ValueError(f"a_exp must lie in [0, 1], got {a}")
        if self.delta_spatial <= 0:
            raise ValueError("delta_spatial must be positive")
        if self.coin_x.mode != self.coin_y.mode:
            raise ValueError("both coins must use the same jet mode")
        if self.mode == "plastic" and self.coin_x.b_exp != self.coin_y.b_exp:
            raise ValueError("plastic mode requires a common b_exp for both coins")

    @property
    def mode(self) -> str:
        return self.coin_x.mode

    @property
    def delta_sum(self) -> float:
        """Total global phase delta_x + delta_y."""
        return self.coin_x.delta + self.coin_y.delta

    def spacing(self, eps: float) -> float:
        if self.a_exp > 0:
            if eps <= 0:
                raise ValueError("eps must be positive when the spacing scales as eps**a")
            return float(eps) ** float(self.a_exp)
        return self.delta_spatial


def coin_at(jet: CoinJet, eps: float) -> NDArray[np.complex128]:
    """Evaluate the U(2) coin matrix at eps (eps = 0 gives the zeroth-order coin)."""
    zeta, theta, phi = jet.angles_at(eps)
    return np.exp(1j * jet.delta) * (rot("z", zeta) @ rot("y", theta) @ rot("z", phi))


def shift_symbol(k, delta_spatial: float = 1.0) -> NDArray[np.complex128]:
    """Fourier symbol e^{i k Delta sigma_z} of the spin-dependent shift.

    Equals rot('z', -2 k Delta); diagonal and unitary.  ``k`` may be an
    array, giving a (..., 2, 2) stack.
    """
    return rot("z", -2.0 * np.asarray(k, dtype=np.float64) * delta_spatial)


def walk_k(cfg: WalkConfig, kx, ky, eps: float) -> NDArray[np.complex128]:
    """One-step walk symbol W(k) = S_x(kx) C_x(eps) S_y(ky) C_y(eps).

    kx, ky broadcast; in plastic mode they are physical momenta and the
    shift phase is k * eps**a.
    """
    spacing = cfg.spacing(eps)
    cx = coin_at(cfg.coin_x, eps)
    cy = coin_at(cfg.coin_y, eps)
    return shift_symbol(kx, spacing) @ cx @ shift_symbol(ky, spacing) @ cy


def first_order_blocks(jet: CoinJet, k) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Zeroth/first expansion blocks (A_j, B_j) of one shift-coin factor.

    With zeta' = zeta0 - 2k,

        A = rot('z', zeta') rot('y', theta0) rot('z', phi0)
        B = zeta1 sz A  +  theta1 sy rot('z', -2 zeta') A  +  phi1 A sz

    so that S(k) C(eps) = e^{i delta} (A - i eps B / 2) + O(eps^2).
    Time-mode jets only.  ``k`` may be an array.
    """
    if jet.mode != "time":
        raise ValueError("first_order_blocks applies to time-mode jets only")
    k = np.asarray(k, dtype=np.float64)
    zp = jet.zeta0 - 2.0 * k
    a = rot("z", zp) @ rot("y", jet.theta0) @ rot("z", jet.phi0)
    b = jet.zeta1 * (SZ @ a) + jet.theta1 * (SY @ rot("z", -2.0 * zp) @ a) + jet.phi1 * (a @ SZ)
    return a, b


def walk_power_expansion(cfg: WalkConfig, kx, ky) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Zeroth- and first-order coefficients of W(k)^tau in eps.

    Returns (zeroth, first) with

        W^tau = zeroth + eps * first + O(eps^2)
        zeroth = (e^{i delta} A)^tau
        first  = -(i/2) zeroth A^{-1} sum_{j=0}^{tau-1} A^{-j} B A^j

    where A = A_x A_y and B = A_x B_y + B_x A_y.  Time mode only.
    """
    if cfg.mode != "time":
        raise ValueError("walk_power_expansion applies to time-mode configs only")
    ax, bx = first_order_blocks(cfg.coin_x, kx)
    ay, by = first_order_blocks(cfg.coin_y, ky)
    a = ax @ ay
    b = ax @ by + bx @ ay
    phase = np.exp(1j * cfg.delta_sum)

    a_inv = dag(a)  # A is unitary
    zeroth = stack_power(phase * a, cfg.tau)

    total = np.zeros_like(b)
    conj = b
    for _ in range(cfg.tau):
        total = total + conj
        conj = a_inv @ conj @ a
    first = -0.5j * (zeroth @ a_inv @ total)
    return zeroth, first
