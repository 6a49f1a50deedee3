"""Dense 2x2 complex linear algebra in closed form.

Everything in this package lives in the space of 2x2 complex matrices:
coins, shift symbols, walk operators, Hamiltonian symbols, transport
matrices.  This module provides the shared primitives as broadcast-aware
closed forms over numpy arrays of shape (..., 2, 2), so k-grid sweeps
stay vectorized.

Rotation convention, fixed once for the whole package:

    rot(m, w) = exp(-i w sigma_m / 2)

All tolerances are absolute; default 1e-12 for algebraic identities and
1e-10 for decomposition preconditions.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "ID2",
    "SX",
    "SY",
    "SZ",
    "pauli",
    "rot",
    "dag",
    "det2",
    "op_norm",
    "eigvals2",
    "eig2",
    "Eig2Result",
    "exp_herm",
    "is_unitary",
    "is_hermitian",
]

ID2 = np.eye(2, dtype=np.complex128)
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)

_PAULI = {"x": SX, "y": SY, "z": SZ}


def pauli(axis: str) -> NDArray[np.complex128]:
    """Return sigma_x, sigma_y or sigma_z (a fresh copy)."""
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"axis must be one of 'x', 'y', 'z', got {axis!r}") from None


def rot(axis: str, angle) -> NDArray[np.complex128]:
    """SU(2) rotation exp(-i angle sigma_axis / 2).

    Parameters
    ----------
    axis : {'x', 'y', 'z'}
    angle : float or array_like
        Rotation angle(s) in radians; broadcasts to output shape
        ``angle.shape + (2, 2)``.
    """
    if axis not in _PAULI:
        raise ValueError(f"axis must be one of 'x', 'y', 'z', got {axis!r}")
    w = np.asarray(angle, dtype=np.float64)
    c = np.cos(w / 2.0).astype(np.complex128)
    s = np.sin(w / 2.0).astype(np.complex128)
    out = np.zeros(w.shape + (2, 2), dtype=np.complex128)
    if axis == "z":
        out[..., 0, 0] = c - 1j * s
        out[..., 1, 1] = c + 1j * s
    elif axis == "y":
        out[..., 0, 0] = c
        out[..., 0, 1] = -s
        out[..., 1, 0] = s
        out[..., 1, 1] = c
    else:
        out[..., 0, 0] = c
        out[..., 0, 1] = -1j * s
        out[..., 1, 0] = -1j * s
        out[..., 1, 1] = c
    return out


def dag(m: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Conjugate transpose over the trailing two axes."""
    return np.conj(np.swapaxes(m, -1, -2))


def det2(m: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Determinant of a (..., 2, 2) stack."""
    m = np.asarray(m)
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def op_norm(m: NDArray[np.complex128]) -> NDArray[np.float64]:
    """Largest singular value, via the closed-form 2x2 SVD.

    ||M||^2 is the larger eigenvalue of the Hermitian matrix M^dag M,
    written as mean + sqrt(((p - r)/2)^2 + |q|^2) so the discriminant is
    a sum of nonnegative terms (no cancellation when the two singular
    values are close).
    """
    m = np.asarray(m, dtype=np.complex128)
    g = dag(m) @ m
    p = g[..., 0, 0].real
    r = g[..., 1, 1].real
    q = g[..., 0, 1]
    lam = 0.5 * (p + r) + np.sqrt((0.5 * (p - r)) ** 2 + np.abs(q) ** 2)
    return np.sqrt(np.maximum(lam, 0.0))


def eigvals2(m: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Both eigenvalues of a (..., 2, 2) stack, by the quadratic formula.

    Returns shape (..., 2).  No eigenvectors; see :func:`eig2` for the
    full decomposition of a single matrix.
    """
    m = np.asarray(m, dtype=np.complex128)
    half_tr = 0.5 * (m[..., 0, 0] + m[..., 1, 1])
    disc = np.sqrt(half_tr * half_tr - det2(m) + 0j)
    return np.stack([half_tr + disc, half_tr - disc], axis=-1)


class Eig2Result(NamedTuple):
    values: NDArray[np.complex128]      # shape (2,)
    vectors: NDArray[np.complex128]     # shape (2, 2), columns are eigenvectors
    degenerate: bool                    # eigenvalues coincide within tolerance
    defective: bool                     # no independent eigenvector pair found


def eig2(m: NDArray[np.complex128], assume: str = "general",
         tol: float = 1e-10) -> Eig2Result:
    """Closed-form eigendecomposition of a single 2x2 matrix.

    Parameters
    ----------
    m : (2, 2) complex array
    assume : {'general', 'unitary', 'hermitian'}
        'hermitian' projects the eigenvalues onto the real axis,
        'unitary' onto the unit circle; both assume the corresponding
        precondition holds to ~tol.
    tol : float
        Degeneracy / defectiveness threshold.

    Returns
    -------
    Eig2Result
        Unit-norm eigenvector columns; ``m @ v = lam * v`` to 1e-12 for
        diagonalizable input.  For a degenerate scalar matrix the
        canonical basis is returned and ``degenerate`` is set.
        ``defective`` flags inputs with a double eigenvalue but only a
        one-dimensional eigenspace (e.g. a Jordan block).
    """
    if assume not in ("general", "unitary", "hermitian"):
        raise ValueError(f"unknown assume={assume!r}")
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError(f"eig2 expects a single (2, 2) matrix, got {m.shape}")

    lam = eigvals2(m)
    if assume == "hermitian":
        lam = lam.real.astype(np.complex128)
    elif assume == "unitary":
        lam = lam / np.abs(lam)

    scale = max(float(op_norm(m)), 1.0)
    degenerate = bool(abs(lam[0] - lam[1]) <= tol * scale)

    vectors = np.empty((2, 2), dtype=np.complex128)
    defective = False
    if degenerate and op_norm(m - lam[0] * ID2) <= tol * scale:
        # scalar matrix: canonical basis, by convention
        vectors[:] = ID2
    else:
        for j in range(2):
            a = m - lam[j] * ID2
            # null vector of a singular 2x2: pick the larger row
            r0, r1 = a[0], a[1]
            row = r0 if np.linalg.norm(r0) >= np.linalg.norm(r1) else r1
            v = np.array([-row[1], row[0]], dtype=np.complex128)
            nrm = np.linalg.norm(v)
            if nrm <= tol * scale:
                v = np.array([1.0, 0.0], dtype=np.complex128)
                nrm = 1.0
            vectors[:, j] = v / nrm
        overlap = abs(np.vdot(vectors[:, 0], vectors[:, 1]))
        if degenerate and overlap > 1.0 - 1e-10:
            defective = True
    return Eig2Result(lam, vectors, degenerate, defective)


def exp_herm(h: NDArray[np.complex128], t) -> NDArray[np.complex128]:
    """exp(-i H t) for Hermitian H, via the Pauli decomposition.

    H = h0 I + h . sigma gives
    exp(-i H t) = e^{-i h0 t} (cos(|h| t) I - i sin(|h| t) hhat . sigma),
    with the |h| = 0 case handled by the identity branch.

    Accepts a (..., 2, 2) stack and scalar or broadcastable ``t``.
    Raises ValueError if any slice deviates from Hermiticity by more
    than 1e-10 in operator norm.
    """
    h = np.asarray(h, dtype=np.complex128)
    herm_defect = op_norm(h - dag(h))
    if np.any(herm_defect > 1e-10):
        raise ValueError(
            f"exp_herm requires Hermitian input; max deviation {float(np.max(herm_defect)):.3e}"
        )
    t = np.asarray(t, dtype=np.float64)
    h0 = 0.5 * (h[..., 0, 0] + h[..., 1, 1]).real
    hx = 0.5 * (h[..., 0, 1] + h[..., 1, 0]).real
    hy = 0.5 * (h[..., 1, 0] - h[..., 0, 1]).imag
    hz = 0.5 * (h[..., 0, 0] - h[..., 1, 1]).real
    r = np.sqrt(hx * hx + hy * hy + hz * hz)

    phase = np.exp(-1j * h0 * t)
    c = np.cos(r * t)
    # sin(r t)/r, finite at r = 0
    sinc = np.where(r > 0.0, np.sin(r * t) / np.where(r > 0.0, r, 1.0), t)

    out = np.zeros(np.broadcast(phase, c).shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = phase * (c - 1j * sinc * hz)
    out[..., 1, 1] = phase * (c + 1j * sinc * hz)
    out[..., 0, 1] = phase * (-1j * sinc * (hx - 1j * hy))
    out[..., 1, 0] = phase * (-1j * sinc * (hx + 1j * hy))
    return out


def is_unitary(m: NDArray[np.complex128], tol: float = 1e-10) -> bool:
    """True when every slice satisfies M^dag M = I within tol."""
    m = np.asarray(m, dtype=np.complex128)
    return bool(np.all(op_norm(dag(m) @ m - ID2) <= tol))


def is_hermitian(m: NDArray[np.complex128], tol: float = 1e-10) -> bool:
    """True when every slice satisfies M = M^dag within tol."""
    m = np.asarray(m, dtype=np.complex128)
    return bool(np.all(op_norm(m - dag(m)) <= tol))
