"""Linear algebra of R^{2+1} and the hyperboloid model of H^2.

Coordinates are ordered (x, y, t) and the bilinear form is
<u, v> = u.x v.x + u.y v.y - u.t v.t, i.e. the Gram matrix
G = diag(1, 1, -1).

The identification PSL(2,R) ~ SO(2,1)_0 is realized concretely by the
adjoint action of SL(2,R) on traceless 2x2 matrices, written in the
fixed basis

    E1 = [[1, 0], [0, -1]]   (spacelike, x-axis)
    E2 = [[0, 1], [1,  0]]   (spacelike, y-axis)
    E3 = [[0, 1], [-1, 0]]   (timelike,  t-axis)

for which minus the determinant is exactly the quadratic form above.
The normalization of this basis is a free choice; it is fixed here once
and used consistently by every other module.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

EPS = 1e-9

G = np.diag([1.0, 1.0, -1.0])

# Basis of traceless 2x2 matrices matching (x, y, t), see module docstring.
SL2_BASIS = (
    np.array([[1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [1.0, 0.0]]),
    np.array([[0.0, 1.0], [-1.0, 0.0]]),
)


def inner(u, v):
    """Minkowski inner product <u,v> = ux vx + uy vy - ut vt."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


class CausalClass(enum.Enum):
    TIMELIKE = "timelike"
    NULL = "null"
    SPACELIKE = "spacelike"
    ZERO = "zero"


def classify(v, eps=EPS):
    """Causal trichotomy of v by the sign of <v,v> relative to eps*|v|^2."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    v = np.asarray(v, dtype=float)
    sup = np.max(np.abs(v))
    if sup < eps:
        return CausalClass.ZERO
    q = inner(v, v)
    scale = float(np.dot(v, v))  # Euclidean |v|^2
    if q > eps * scale:
        return CausalClass.SPACELIKE
    if q < -eps * scale:
        return CausalClass.TIMELIKE
    return CausalClass.NULL


class Mat2:
    """Unimodular 2x2 real matrix, canonicalized up to sign.

    Representatives are unique: the first entry (row-major scan) larger
    than tolerance in absolute value is made positive, so values are
    hashable stand-ins for elements of PSL(2,R).
    """

    __slots__ = ("m",)

    def __init__(self, m, eps=EPS):
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise ValueError("Mat2 expects a 2x2 matrix")
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if det <= 0 or abs(det - 1.0) > 1e-6:
            # tolerate scaled input: renormalize if determinant is positive
            if det <= 0:
                raise ValueError("matrix must have positive determinant")
            m = m / math.sqrt(det)
        else:
            m = m / math.sqrt(det)
        self.m = _canonical_sign(m)

    @classmethod
    def identity(cls):
        return cls(np.eye(2))

    def inverse(self):
        a, b, c, d = self.m.ravel()
        return Mat2(np.array([[d, -b], [-c, a]]))

    def __matmul__(self, other):
        return Mat2(self.m @ other.m)

    def trace(self):
        return float(self.m[0, 0] + self.m[1, 1])

    def is_hyperbolic(self, eps=EPS):
        return abs(self.trace()) > 2.0 + eps

    def key(self, ndigits=9):
        return tuple(round(float(x), ndigits) for x in self.m.ravel())

    def dist(self, other):
        return float(np.max(np.abs(self.m - other.m)))

    def is_identity(self, tol=1e-8):
        return float(np.max(np.abs(self.m - np.eye(2)))) < tol

    def __repr__(self):
        a, b, c, d = self.m.ravel()
        return "Mat2([[%.6g, %.6g], [%.6g, %.6g]])" % (a, b, c, d)


def _canonical_sign(m, tol=1e-12):
    for x in m.ravel():
        if abs(x) > tol:
            return m if x > 0 else -m
    return m


def adjoint_to_so21(m):
    """Adjoint action of a Mat2 on sl(2,R), as a 3x3 matrix in SO(2,1)_0.

    Columns are the images of the fixed basis E1, E2, E3; well defined on
    PSL since the adjoint kills the sign.
    """
    if not isinstance(m, Mat2):
        m = Mat2(m)
    a = m.m
    ainv = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]])
    cols = []
    for E in SL2_BASIS:
        X = a @ E @ ainv
        # coordinates of X = x E1 + y E2 + t E3
        x = 0.5 * (X[0, 0] - X[1, 1])
        y = 0.5 * (X[0, 1] + X[1, 0])
        t = 0.5 * (X[0, 1] - X[1, 0])
        cols.append((x, y, t))
    return np.array(cols).T


def is_lorentz_linear(A, eps=EPS):
    """Check A^T G A = G, det A = 1, and orthochronous A[t][t] >= 1."""
    A = np.asarray(A, dtype=float)
    if np.max(np.abs(A.T @ G @ A - G)) > eps * max(1.0, np.max(np.abs(A)) ** 2):
        return False
    if abs(np.linalg.det(A) - 1.0) > 1e-6:
        return False
    return A[2, 2] >= 1.0 - eps


@dataclass(frozen=True)
class LorentzIsometry:
    """Affine map x -> A x + b with A in SO(2,1)_0."""

    linear: np.ndarray
    translation: np.ndarray

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.zeros(3))

    def __call__(self, p):
        return self.linear @ np.asarray(p, dtype=float) + self.translation

    def compose(self, other):
        return LorentzIsometry(
            self.linear @ other.linear,
            self.linear @ other.translation + self.translation,
        )

    def inverse(self):
        Ainv = G @ self.linear.T @ G
        return LorentzIsometry(Ainv, -(Ainv @ self.translation))

    def dist(self, other):
        return max(
            float(np.max(np.abs(self.linear - other.linear))),
            float(np.max(np.abs(self.translation - other.translation))),
        )


def hyperboloid_normalize(v):
    """Project v onto the upper hyperboloid <v,v> = -1, t > 0."""
    v = np.asarray(v, dtype=float)
    q = inner(v, v)
    if q >= 0 or v[2] <= 0:
        raise ValueError("point must be future timelike")
    return v / math.sqrt(-q)


def apex():
    return np.array([0.0, 0.0, 1.0])


def h2_distance(p, q):
    """Hyperbolic distance arccosh(-<p,q>) between hyperboloid points."""
    c = -inner(p, q)
    if c < 1.0 - 1e-6:
        raise ValueError("inputs are not points of the hyperboloid")
    return math.acosh(max(c, 1.0))


def boost_y_axis(lam):
    """Boost T(lam) fixing the spacelike y-axis, translating the geodesic
    {y = 0} of H^2 by lam.  This is the standard boost every cyclic and
    torus construction in the package is anchored to: it preserves the
    region {t^2 > x^2, t > 0} and commutes with translations (0, e, 0).
    """
    c, s = math.cosh(lam), math.sinh(lam)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def rotation_t_axis(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


class RP1Point:
    """Point of RP^1, stored as a unit 2-vector with angle in [0, pi).

    The circle parameter is theta = angle / pi in [0, 1); it is monotone
    with respect to the cyclic order of the corresponding null directions.
    """

    __slots__ = ("v",)

    def __init__(self, v):
        v = np.asarray(v, dtype=float)
        n = math.hypot(v[0], v[1])
        if n == 0.0:
            raise ValueError("zero vector is not projective")
        v = v / n
        if v[1] < 0 or (v[1] == 0 and v[0] < 0):
            v = -v
        self.v = v

    @classmethod
    def from_theta(cls, theta):
        a = (theta % 1.0) * math.pi
        return cls(np.array([math.cos(a), math.sin(a)]))

    @property
    def theta(self):
        a = math.atan2(self.v[1], self.v[0])
        if a < 0:
            a += math.pi
        return (a / math.pi) % 1.0

    def apply(self, m):
        mat = m.m if isinstance(m, Mat2) else np.asarray(m, dtype=float)
        return RP1Point(mat @ self.v)

    def null_vector(self):
        """Future null direction of this ideal point under the fixed
        sl(2) <-> R^{2+1} identification, normalized to t = 1."""
        x, y = self.v
        n = np.array([-2.0 * x * y, x * x - y * y, x * x + y * y])
        return n / n[2]

    def dist(self, other):
        d = abs(self.theta - other.theta)
        return min(d, 1.0 - d)

    def __repr__(self):
        return "RP1Point(theta=%.6f)" % self.theta


def geodesic_normal(end1, end2, toward=None):
    """Unit spacelike normal of the plane through the origin spanned by
    two distinct ideal points (null directions).

    If `toward` is given, the sign is fixed so <n, toward> > 0, i.e. the
    normal points into the side containing `toward`.
    """
    u = end1.null_vector() if isinstance(end1, RP1Point) else np.asarray(end1, float)
    v = end2.null_vector() if isinstance(end2, RP1Point) else np.asarray(end2, float)
    cr = np.cross(u, v)
    n = G @ cr
    # the direct <n,n> cancels catastrophically for nearby endpoints;
    # the Lagrange identity form stays accurate down to tiny gaps
    q = float(inner(u, v)) ** 2 - float(inner(u, u)) * float(inner(v, v))
    scale = float(np.dot(u, u)) * float(np.dot(v, v))
    if q <= 1e-25 * scale:
        raise ValueError("ideal endpoints coincide")
    n = n / math.sqrt(q)
    if toward is not None:
        s = inner(n, np.asarray(toward, dtype=float))
        if s < 0:
            n = -n
    return n
