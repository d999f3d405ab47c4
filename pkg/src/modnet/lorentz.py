"""Minkowski geometry, SL(2,C) and the covering map onto the Lorentz group.

Conventions: metric ``diag(1, -1, -1, -1)``; a four-vector ``p`` corresponds
to the Hermitian matrix ``p0 * 1 + sum_i p_i sigma_i`` and ``A`` acts by
``p~ -> A p~ A^dagger``.  Lifts of boosts and rotations are
``lambda_j(t) = exp(sigma_j t / 2)`` and ``r_j(theta) = exp(i sigma_j theta / 2)``.
With these conventions ``Lambda(r_3(theta))`` turns the ``(x1, x2)`` plane
clockwise by ``theta``.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GroupElementError
from .linalg import dagger

SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
CENTER = -np.eye(2, dtype=complex)  # r(2 pi)


def minkowski(x, y):
    return float(np.asarray(x) @ METRIC @ np.asarray(y))


def tilde(p):
    p = np.asarray(p)
    return sum(p[mu] * SIGMA[mu] for mu in range(4))


def untilde(X):
    return np.array([np.trace(SIGMA[mu] @ X).real / 2 for mu in range(4)])


def check_sl2(A, tol=1e-9):
    A = np.asarray(A, dtype=complex)
    if A.shape != (2, 2):
        raise GroupElementError(f"expected a 2x2 matrix, got {A.shape}")
    if abs(np.linalg.det(A) - 1) > tol:
        raise GroupElementError(f"det A = {np.linalg.det(A):.6g}, expected 1")
    return A


def check_su2(A, tol=1e-9):
    A = check_sl2(A, tol)
    if np.linalg.norm(dagger(A) @ A - np.eye(2)) > tol:
        raise GroupElementError("A is not unitary")
    return A


def covering_map(A, tol=1e-9):
    """Lorentz matrix ``Lambda(A)_{mu nu} = tr(sigma_mu A sigma_nu A^dagger) / 2``."""
    A = check_sl2(A, tol)
    Ad = dagger(A)
    L = np.empty((4, 4))
    for nu in range(4):
        L[:, nu] = untilde(A @ SIGMA[nu] @ Ad)
    return L


def is_lorentz(L, tol=1e-9):
    L = np.asarray(L)
    return (
        np.linalg.norm(L.T @ METRIC @ L - METRIC) <= tol * max(1.0, np.linalg.norm(L) ** 2)
        and L[0, 0] >= 1 - tol
        and abs(np.linalg.det(L) - 1) <= tol * max(1.0, np.linalg.norm(L) ** 4)
    )


def _axis(alpha):
    if alpha not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {alpha}")
    return SIGMA[alpha]


def boost_sl2(alpha, t):
    """``lambda_alpha(t) = exp(sigma_alpha t / 2)``."""
    return np.cosh(t / 2) * SIGMA[0] + np.sinh(t / 2) * _axis(alpha)


def rotation_sl2(alpha, theta):
    """``r_alpha(theta) = exp(i sigma_alpha theta / 2)``."""
    return np.cos(theta / 2) * SIGMA[0] + 1j * np.sin(theta / 2) * _axis(alpha)


def boost_lorentz(alpha, t):
    """Pure boost along ``x_alpha`` written out directly (no covering map)."""
    L = np.eye(4)
    L[0, 0] = L[alpha, alpha] = np.cosh(t)
    L[0, alpha] = L[alpha, 0] = np.sinh(t)
    return L


def boost(alpha, t):
    A = boost_sl2(alpha, t)
    return A, covering_map(A)


def rotation(alpha, theta):
    A = rotation_sl2(alpha, theta)
    return A, covering_map(A)


def j3_conjugate(A):
    """Adjoint action of the x0-x3 reflection on SL(2,C): ``A -> sigma_3 A sigma_3``.

    The reflection itself has two lifts (differing by ``r(2 pi)``); no choice
    between them is made here.
    """
    return SIGMA[3] @ A @ SIGMA[3]


J3_LORENTZ = np.diag([-1.0, 1.0, 1.0, -1.0])
J3_SIGNS = (1, -1)


@dataclass(frozen=True, eq=False)
class Poincare:
    """Element ``(a, A)`` of R^4 x| SL(2,C), acting as ``x -> Lambda(A) x + a``."""

    A: np.ndarray = field(default_factory=lambda: np.eye(2, dtype=complex))
    a: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self):
        object.__setattr__(self, "A", check_sl2(self.A))
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))

    @cached_property
    def lorentz(self):
        return covering_map(self.A)

    def act(self, x):
        return self.lorentz @ np.asarray(x, dtype=float) + self.a

    def __matmul__(self, other):
        return Poincare(self.A @ other.A, self.a + self.lorentz @ other.a)

    def inverse(self):
        Ainv = np.linalg.inv(self.A)
        return Poincare(Ainv, -covering_map(Ainv) @ self.a)


# -- wedges --------------------------------------------------------------------

# r_alpha' with Lambda(r) W_alpha = W_alpha'
_BASE_REFLECTION = {1: 2, 2: 3, 3: 1}


def _base_covectors(alpha):
    e = np.zeros(4)
    e[alpha] = 1.0
    lead = np.zeros(4)
    lead[0] = 1.0
    # x_alpha - x0 > 0 and x_alpha + x0 > 0
    return np.array([e - lead, e + lead])


@dataclass(frozen=True, eq=False)
class Wedge:
    """The region ``a + Lambda(g) W_base`` with ``W_alpha = {|x0| < x_alpha}``."""

    base: int = 1
    g: np.ndarray = field(default_factory=lambda: np.eye(2, dtype=complex))
    a: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self):
        _axis(self.base)
        object.__setattr__(self, "g", check_sl2(self.g))
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))

    @cached_property
    def normal_form(self):
        """``(C, b)``: the wedge is ``{x : C @ x > b}`` with two lightlike rows.

        Rows are scaled to unit time component and sorted, so two wedges are
        equal iff their normal forms agree.
        """
        Linv = np.linalg.inv(covering_map(self.g))
        C = _base_covectors(self.base) @ Linv
        C = C / np.abs(C[:, :1])
        b = C @ self.a
        order = np.lexsort(np.round(C, 9).T[::-1])
        return C[order], b[order]

    def contains(self, x):
        C, b = self.normal_form
        return bool(np.all(C @ np.asarray(x, dtype=float) > b))

    def same_as(self, other, tol=1e-9):
        C1, b1 = self.normal_form
        C2, b2 = other.normal_form
        best = np.inf
        for perm in ((0, 1), (1, 0)):
            p = list(perm)
            best = min(best, np.abs(C1 - C2[p]).max() + np.abs(b1 - b2[p]).max())
        return best <= tol * max(1.0, np.abs(b1).max(initial=0.0))

    def complement(self):
        r = rotation_sl2(_BASE_REFLECTION[self.base], np.pi)
        return Wedge(self.base, self.g @ r, self.a)

    def transform(self, h):
        """Image ``h W`` under a Poincare element."""
        return Wedge(self.base, h.A @ self.g, h.act(self.a))

    def _conjugate(self, B):
        """Poincare element ``x -> a + Lambda(g B g^-1)(x - a)``."""
        A = self.g @ B @ np.linalg.inv(self.g)
        L = covering_map(A)
        return Poincare(A, self.a - L @ self.a)

    def fixing_boost(self, t):
        return self._conjugate(boost_sl2(self.base, t))

    def fixing_rotation(self, theta):
        return self._conjugate(rotation_sl2(self.base, theta))

    def reflection_element(self):
        """``r_W`` with ``Lambda(r_W) W = W'``."""
        return self._conjugate(rotation_sl2(_BASE_REFLECTION[self.base], np.pi))

    def sample_points(self, rng, count=100, scale=5.0):
        """Random interior points (rejection-free: built from the base wedge)."""
        L = covering_map(self.g)
        pts = []
        for _ in range(count):
            x = rng.uniform(-scale, scale, 4)
            x[self.base] = abs(x[0]) + rng.uniform(1e-3, scale)
            pts.append(L @ x + self.a)
        return np.array(pts)


def wedge_complement(W):
    return W.complement()


def membership(W, x):
    return W.contains(x)


@dataclass
class StabilizerGenerators:
    """Generators of ``G_W^0`` (rotation and boost samplers, ``r(2 pi)``) and
    translation directions spanning R^4."""

    wedge: Wedge

    def rotation(self, theta):
        return self.wedge.fixing_rotation(theta)

    def boost(self, t):
        return self.wedge.fixing_boost(t)

    @property
    def center(self):
        return Poincare(CENTER)

    @property
    def translations(self):
        alpha = self.wedge.base
        dirs = []
        for beta in (1, 2, 3):
            if beta != alpha:
                e = np.zeros(4)
                e[beta] = 1.0
                dirs.append(e)
        for sign in (1.0, -1.0):
            v = np.zeros(4)
            v[0], v[alpha] = sign, 1.0
            dirs.append(v)
        L = covering_map(self.wedge.g)
        return [L @ d for d in dirs]

    def sample(self, rng, count=10):
        out = [self.center]
        for _ in range(count):
            out.append(self.rotation(rng.uniform(-np.pi, np.pi)))
            out.append(self.boost(rng.uniform(-3, 3)))
        return out


def wedge_stabilizer_generators(W):
    return StabilizerGenerators(W)


W1 = Wedge(1)
W2 = Wedge(2)
W3 = Wedge(3)
