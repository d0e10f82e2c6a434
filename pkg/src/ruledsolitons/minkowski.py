"""Vector algebra of Minkowski 3-space with the metric dx^2 + dy^2 - dz^2.

Vectors are plain numpy arrays whose last axis has length 3, so every
function here also works on stacks of vectors (shape ``(..., 3)``).

Sign convention: the Lorentzian cross product is defined by
``<a x b, c> = det(a, b, c)`` for all ``c``.  Because the metric flips the
sign of the third coordinate, this gives ``e1 x e2 = -e3``, which is the
opposite of the Euclidean rule.  The signature is fixed; it is not a
parameter anywhere in the package.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import LightlikeNormalization

#: Default relative width of the lightlike band, see :func:`causal_character`.
LIGHTLIKE_TOL = 1e-10

METRIC = np.diag([1.0, 1.0, -1.0])

MVec3 = np.ndarray


def mvec(x, y=None, z=None) -> MVec3:
    """Build a finite 3-vector from three numbers or one length-3 sequence."""
    if y is None and z is None:
        arr = np.asarray(x, dtype=float)
    else:
        arr = np.array([x, y, z], dtype=float)
    if arr.shape[-1:] != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector components must be finite")
    return arr


def mink_dot(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2]


def mink_cross(a, b) -> MVec3:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ax, ay, az = a[..., 0], a[..., 1], a[..., 2]
    bx, by, bz = b[..., 0], b[..., 1], b[..., 2]
    return np.stack(
        [ay * bz - az * by, az * bx - ax * bz, -(ax * by - ay * bx)], axis=-1
    )


def triple(a, b, c):
    """Determinant of the matrix with rows a, b, c."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    return (
        a[..., 0] * (b[..., 1] * c[..., 2] - b[..., 2] * c[..., 1])
        - a[..., 1] * (b[..., 0] * c[..., 2] - b[..., 2] * c[..., 0])
        + a[..., 2] * (b[..., 0] * c[..., 1] - b[..., 1] * c[..., 0])
    )


def euclid_norm2(a):
    a = np.asarray(a, dtype=float)
    return np.sum(a * a, axis=-1)


class CausalCharacter(enum.Enum):
    SPACELIKE = "Spacelike"
    TIMELIKE = "Timelike"
    LIGHTLIKE = "Lightlike"
    ZERO = "ZeroVector"

    @property
    def sign(self) -> int:
        return {"Spacelike": 1, "Timelike": -1}.get(self.value, 0)


def causal_character(a, tol: float = LIGHTLIKE_TOL) -> CausalCharacter:
    """Classify a single vector by the sign of <a, a>.

    The lightlike band is relative: ``|<a,a>| <= tol * |a|_E^2``, which makes
    the answer invariant under dilations.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.asarray(a, dtype=float)
    if np.all(np.abs(a) <= tol):
        return CausalCharacter.ZERO
    q = float(mink_dot(a, a))
    if abs(q) <= tol * float(euclid_norm2(a)):
        return CausalCharacter.LIGHTLIKE
    return CausalCharacter.SPACELIKE if q > 0 else CausalCharacter.TIMELIKE


def boost_x(phi: float) -> np.ndarray:
    """Hyperbolic rotation fixing e1 (the ruling direction (1,0,0))."""
    ch, sh = np.cosh(phi), np.sinh(phi)
    return np.array([[1.0, 0.0, 0.0], [0.0, ch, sh], [0.0, sh, ch]])


def rot_z(theta: float) -> np.ndarray:
    """Euclidean rotation about the time axis e3."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def apply(matrix: np.ndarray, a) -> MVec3:
    """Apply a linear map to a vector or a stack of vectors."""
    return np.asarray(a, dtype=float) @ np.asarray(matrix).T


def is_isometry(matrix: np.ndarray, atol: float = 1e-12) -> bool:
    m = np.asarray(matrix, dtype=float)
    return bool(np.allclose(m.T @ METRIC @ m, METRIC, atol=atol))


def normalize(a, tol: float = LIGHTLIKE_TOL) -> MVec3:
    """Scale ``a`` so that ``|<u,u>| = 1``; undefined for null vectors."""
    char = causal_character(a, tol)
    if char in (CausalCharacter.LIGHTLIKE, CausalCharacter.ZERO):
        raise LightlikeNormalization(f"cannot normalize a {char.value} vector {a!r}")
    a = np.asarray(a, dtype=float)
    return a / np.sqrt(abs(float(mink_dot(a, a))))
