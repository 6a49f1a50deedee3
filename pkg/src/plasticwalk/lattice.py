"""Real-space spinor fields on a periodic 2D grid.

A field holds two complex amplitudes (psi_L, psi_R) per site (l, m) of an
Nx x Ny torus, stored as a (2, Nx, Ny) complex array.  The walk step is
W = V_x V_y with V_i = S_i (C_i (x) Id): the y-factor acts first.

The spin-dependent shift moves the L component against the axis index and
the R component along it: output L at l reads input L at l+1 (x axis),
output R at l reads input R at l-1.

Fourier conventions (matching numpy's fft): forward kernel
e^{-i(kx l + ky m)} unnormalized, inverse carries 1/(Nx Ny); discrete
momenta 2 pi j / N mapped to (-pi, pi].

File formats
------------
CSV: header ``l,m,re_L,im_L,re_R,im_R``, one row per site, row-major in
(l, m), floats at 17 significant digits.

Binary (little-endian): magic ``b"PWFLD1\\x00\\x00"`` (8 bytes), then Nx,
Ny as uint32, then the payload: row-major over sites, for each site
psi_L then psi_R as complex128 (re, im float64 pairs).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .coins import WalkConfig, coin_at
from .mat2 import ID2, dag, exp_herm, op_norm

__all__ = [
    "SpinorField",
    "shift",
    "apply_coin",
    "apply_shift_word",
    "step",
    "dft",
    "idft",
    "evolve_by_symbol",
    "momentum_grid",
    "save_csv",
    "load_csv",
    "save_binary",
    "load_binary",
]

_MAGIC = b"PWFLD1\x00\x00"


@dataclass(frozen=True)
class SpinorField:
    """Two-component wavefunction on a periodic Nx x Ny grid."""

    data: NDArray[np.complex128]  # shape (2, Nx, Ny)

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.complex128)
        if d.ndim != 3 or d.shape[0] != 2 or d.shape[1] < 2 or d.shape[2] < 2:
            raise ValueError(f"field data must have shape (2, Nx>=2, Ny>=2), got {d.shape}")
        object.__setattr__(self, "data", d)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[1], self.data.shape[2]

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.data) ** 2)))

    @staticmethod
    def delta(nx: int, ny: int, site: tuple[int, int] = (0, 0),
              component: int = 0) -> "SpinorField":
        """Unit amplitude in one component at one site."""
        d = np.zeros((2, nx, ny), dtype=np.complex128)
        d[component, site[0] % nx, site[1] % ny] = 1.0
        return SpinorField(d)

    @staticmethod
    def plane_wave(nx: int, ny: int, kx: float, ky: float,
                   spinor=(1.0, 0.0)) -> "SpinorField":
        """Normalized plane wave e^{i(kx l + ky m)} times a fixed spinor."""
        ll = np.arange(nx)[:, None]
        mm = np.arange(ny)[None, :]
        wave = np.exp(1j * (kx * ll + ky * mm))
        sp = np.asarray(spinor, dtype=np.complex128)
        sp = sp / np.linalg.norm(sp)
        d = sp[:, None, None] * wave[None, :, :] / np.sqrt(nx * ny)
        return SpinorField(d)

    @staticmethod
    def random(nx: int, ny: int, rng: np.random.Generator | None = None) -> "SpinorField":
        rng = rng or np.random.default_rng()
        d = rng.normal(size=(2, nx, ny)) + 1j * rng.normal(size=(2, nx, ny))
        return SpinorField(d / np.linalg.norm(d))


def shift(field: SpinorField, axis: str) -> SpinorField:
    """Spin-dependent shift along 'x' or 'y'; an exact permutation."""
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    ax = 0 if axis == "x" else 1
    out = np.empty_like(field.data)
    out[0] = np.roll(field.data[0], -1, axis=ax)  # L at l reads input at l+1
    out[1] = np.roll(field.data[1], +1, axis=ax)  # R at l reads input at l-1
    return SpinorField(out)


def apply_coin(field: SpinorField, c: NDArray[np.complex128]) -> SpinorField:
    """Left-multiply the spinor at every site by the unitary 2x2 coin."""
    c = np.asarray(c, dtype=np.complex128)
    if float(op_norm(dag(c) @ c - ID2)) > 1e-10:
        raise ValueError("coin must be unitary to 1e-10")
    return SpinorField(np.einsum("ab,bxy->axy", c, field.data))


def apply_shift_word(field: SpinorField, px: int, py: int) -> SpinorField:
    """Apply the shift word S_x^px S_y^py (negative powers are inverses)."""
    l_part = np.roll(np.roll(field.data[0], -px, axis=0), -py, axis=1)
    r_part = np.roll(np.roll(field.data[1], +px, axis=0), +py, axis=1)
    return SpinorField(np.stack([l_part, r_part]))


def step(field: SpinorField, cfg: WalkConfig, eps: float) -> SpinorField:
    """One walk step W = V_x V_y (the y factor acts first)."""
    out = apply_coin(field, coin_at(cfg.coin_y, eps))
    out = shift(out, "y")
    out = apply_coin(out, coin_at(cfg.coin_x, eps))
    out = shift(out, "x")
    return out


def dft(field: SpinorField) -> NDArray[np.complex128]:
    """Componentwise 2D DFT, unnormalized forward kernel e^{-i k.x}."""
    return np.fft.fft2(field.data, axes=(1, 2))


def idft(fhat: NDArray[np.complex128]) -> SpinorField:
    """Inverse of :func:`dft` (carries the 1/(Nx Ny) factor)."""
    return SpinorField(np.fft.ifft2(np.asarray(fhat, dtype=np.complex128), axes=(1, 2)))


def momentum_grid(nx: int, ny: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Discrete momenta 2 pi j / N mapped to (-pi, pi], as broadcastable grids."""
    kx = 2.0 * np.pi * np.fft.fftfreq(nx)
    ky = 2.0 * np.pi * np.fft.fftfreq(ny)
    kx = np.where(kx <= -np.pi + 1e-15, kx + 2.0 * np.pi, kx)
    ky = np.where(ky <= -np.pi + 1e-15, ky + 2.0 * np.pi, ky)
    return kx[:, None], ky[None, :]


def evolve_by_symbol(field: SpinorField, symbol, t: float,
                     generator: bool = False) -> SpinorField:
    """Evolve by a momentum-space 2x2 symbol.

    symbol(kx, ky) must accept broadcastable momentum grids and return a
    (..., 2, 2) stack.  With ``generator=False`` the symbol is a
    Hamiltonian H(k) (Hermitian, checked) and the evolution is
    e^{-i H t}; with ``generator=True`` the symbol G(k) is the d/dt
    generator and the evolution is e^{G t} (G must be anti-Hermitian,
    checked, so the evolution stays unitary).
    """
    nx, ny = field.shape
    kx, ky = momentum_grid(nx, ny)
    sym = np.asarray(symbol(kx, ky), dtype=np.complex128)
    sym = np.broadcast_to(sym, (nx, ny, 2, 2))
    if generator:
        h = 1j * sym  # anti-Hermitian G => Hermitian iG, e^{G t} = e^{-i (iG) t}
    else:
        h = sym
    u = exp_herm(h, t)
    fhat = dft(field)
    out = np.einsum("xyab,bxy->axy", u, fhat)
    return idft(out)


def save_csv(field: SpinorField, path) -> None:
    nx, ny = field.shape
    with open(path, "w") as fh:
        fh.write("l,m,re_L,im_L,re_R,im_R\n")
        for l in range(nx):
            for m in range(ny):
                vl = field.data[0, l, m]
                vr = field.data[1, l, m]
                fh.write(f"{l},{m},{vl.real:.17g},{vl.imag:.17g},{vr.real:.17g},{vr.imag:.17g}\n")


def load_csv(path) -> SpinorField:
    raw = np.loadtxt(path, delimiter=",", skiprows=1)
    raw = np.atleast_2d(raw)
    nx = int(raw[:, 0].max()) + 1
    ny = int(raw[:, 1].max()) + 1
    d = np.zeros((2, nx, ny), dtype=np.complex128)
    ll = raw[:, 0].astype(int)
    mm = raw[:, 1].astype(int)
    d[0, ll, mm] = raw[:, 2] + 1j * raw[:, 3]
    d[1, ll, mm] = raw[:, 4] + 1j * raw[:, 5]
    return SpinorField(d)


def save_binary(field: SpinorField, path) -> None:
    nx, ny = field.shape
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(np.array([nx, ny], dtype="<u4").tobytes())
        # row-major over sites, psi_L then psi_R per site
        payload = np.moveaxis(field.data, 0, -1).astype("<c16")
        fh.write(payload.tobytes())


def load_binary(path) -> SpinorField:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _MAGIC:
            raise ValueError(f"not a spinor-field file (bad magic {magic!r})")
        nx, ny = np.frombuffer(fh.read(8), dtype="<u4")
        payload = np.frombuffer(fh.read(), dtype="<c16")
    if payload.size != 2 * nx * ny:
        raise ValueError("truncated spinor-field file")
    d = np.moveaxis(payload.reshape(nx, ny, 2), -1, 0).astype(np.complex128)
    return SpinorField(d)
