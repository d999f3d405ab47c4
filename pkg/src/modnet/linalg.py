"""Dense complex linear algebra shared by every other module.

Linear operators are plain ``numpy`` arrays.  Antilinear operators are stored
by a matrix ``A`` acting as ``v -> A @ conj(v)``; with that convention the
antilinear adjoint is ``A.T`` and composing two antilinear maps gives the
linear matrix ``A2 @ conj(A1)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitianError, NotInvolutionError, NotPositiveError

DEFAULT_TOL = 1e-9
GAP_MIN = 1e3


def dagger(X):
    return np.conj(np.asarray(X)).T


def as_operator(X):
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {X.shape}")
    return X


def op_norm(X):
    X = np.asarray(X)
    if X.size == 0:
        return 0.0
    return float(np.linalg.norm(X, 2))


def is_hermitian(X, tol=DEFAULT_TOL):
    X = np.asarray(X)
    return op_norm(X - dagger(X)) <= tol * max(1.0, op_norm(X))


def is_unitary(U, tol=DEFAULT_TOL):
    U = np.asarray(U)
    return op_norm(dagger(U) @ U - np.eye(U.shape[0])) <= tol


def commutator(X, Y):
    return X @ Y - Y @ X


def spectral_decomposition(X, tol=DEFAULT_TOL):
    """Eigenvalue/eigenprojection pairs of a Hermitian matrix.

    Eigenvalues closer than ``tol`` (relative to the spectral radius) are
    merged into one cluster whose projection is basis independent.
    """
    X = as_operator(X)
    if not is_hermitian(X, tol):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    X = (X + dagger(X)) / 2
    w, V = np.linalg.eigh(X)
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    pairs = []
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > tol * scale:
            block = V[:, start:k]
            pairs.append((float(np.mean(w[start:k])), block @ dagger(block)))
            start = k
    return pairs


def apply_spectral(X, f, tol=DEFAULT_TOL):
    """``f(X)`` for Hermitian ``X`` via eigenprojections."""
    X = as_operator(X)
    out = np.zeros_like(X)
    for lam, P in spectral_decomposition(X, tol):
        out = out + f(lam) * P
    return out


_POSITIVE_KINDS = {"log", "inverse-sqrt", "power-it"}


def hermitian_function(X, kind, t=None, interval=None, tol=DEFAULT_TOL):
    """Spectral calculus on a Hermitian matrix.

    ``kind`` is one of ``sqrt``, ``inverse-sqrt``, ``exp``, ``log``,
    ``power-it`` (needs ``t``; returns ``X**(i t)``) and
    ``spectral-restrict`` (needs ``interval=(a, b)``; keeps ``lam * P`` for
    eigenvalues in the closed interval).
    """
    pairs = spectral_decomposition(X, tol)
    lams = [lam for lam, _ in pairs]
    if kind in _POSITIVE_KINDS and any(lam <= 0 for lam in lams):
        raise NotPositiveError(f"{kind} requires a positive definite matrix")
    if kind == "sqrt" and any(lam < -tol for lam in lams):
        raise NotPositiveError("sqrt requires a positive semidefinite matrix")

    if kind == "sqrt":
        f = lambda lam: np.sqrt(max(lam, 0.0))
    elif kind == "inverse-sqrt":
        f = lambda lam: 1.0 / np.sqrt(lam)
    elif kind == "exp":
        f = np.exp
    elif kind == "log":
        f = np.log
    elif kind == "power-it":
        if t is None:
            raise ValueError("power-it needs t")
        f = lambda lam: np.exp(1j * t * np.log(lam))
    elif kind == "spectral-restrict":
        if interval is None:
            raise ValueError("spectral-restrict needs an interval")
        a, b = interval
        f = lambda lam: lam if a <= lam <= b else 0.0
    else:
        raise ValueError(f"unknown spectral function {kind!r}")

    n = len(X)
    out = np.zeros((n, n), dtype=complex)
    for lam, P in pairs:
        out = out + f(lam) * P
    return out


@dataclass(frozen=True, eq=False)
class Antilinear:
    """Antilinear operator ``v -> matrix @ conj(v)``."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_operator(self.matrix))

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __call__(self, v):
        return self.matrix @ np.conj(v)

    def adjoint(self):
        return Antilinear(self.matrix.T)

    def then(self, other):
        """``other o self``.  Linear result if ``other`` is antilinear."""
        if isinstance(other, Antilinear):
            return other.matrix @ np.conj(self.matrix)
        return Antilinear(np.asarray(other) @ self.matrix)

    def after(self, L):
        """``self o L`` for a linear ``L``."""
        return Antilinear(self.matrix @ np.conj(L))

    def conjugate(self, X):
        """Linear operator ``self o X o self^{-1}``."""
        return self.matrix @ np.conj(X) @ np.linalg.inv(self.matrix)

    def square(self):
        return self.matrix @ np.conj(self.matrix)

    def is_involution(self, tol=DEFAULT_TOL):
        return op_norm(self.square() - np.eye(self.dim)) <= tol * max(1.0, op_norm(self.matrix) ** 2)

    def is_antiunitary(self, tol=DEFAULT_TOL):
        return is_unitary(self.matrix, tol)

    def realified(self):
        """Real ``2n x 2n`` matrix acting on ``(Re v, Im v)``."""
        Ar, Ai = self.matrix.real, self.matrix.imag
        return np.block([[Ar, Ai], [Ai, -Ar]])


def conjugation(n):
    return Antilinear(np.eye(n))


def polar_antilinear(S, tol=DEFAULT_TOL):
    """Polar decomposition ``S = J o Delta^{1/2}`` of an antilinear involution.

    ``Delta = S^* S`` is the linear matrix ``A.T @ conj(A)``.
    """
    if not S.is_involution(tol):
        raise NotInvolutionError("S o S differs from the identity")
    A = S.matrix
    delta = A.T @ np.conj(A)
    delta = (delta + dagger(delta)) / 2
    w = np.linalg.eigvalsh(delta)
    if w[0] <= tol * w[-1]:
        raise NotPositiveError("modular operator is singular beyond tolerance")
    inv_sqrt = hermitian_function(delta, "inverse-sqrt", tol=tol)
    J = Antilinear(A @ np.conj(inv_sqrt))
    return J, delta


@dataclass
class Nullspace:
    basis: np.ndarray          # columns are orthonormal
    singular_values: np.ndarray
    threshold: float
    gap: float                 # smallest kept singular value / largest discarded one
    gap_min: float = GAP_MIN

    @property
    def clear(self):
        return self.gap >= self.gap_min

    @property
    def dim(self):
        return self.basis.shape[1]

    def vectors(self):
        return [self.basis[:, k] for k in range(self.dim)]


def nullspace(M, tol=DEFAULT_TOL, gap_min=GAP_MIN, floor=0.0):
    """Orthonormal kernel basis of ``M`` from the SVD.

    Directions with singular value ``<= max(tol * ||M||, floor)`` are kept;
    ``floor`` guards systems that vanish up to rounding.  The gap
    ratio is reported, never acted on; callers decide what an unclear gap
    means.
    """
    M = np.atleast_2d(np.asarray(M))
    m, n = M.shape
    if m == 0:
        return Nullspace(np.eye(n, dtype=M.dtype), np.zeros(0), 0.0, np.inf, gap_min)
    # only the right factor is needed; a reduced SVD already yields all of it when m >= n
    _, s, vh = np.linalg.svd(M, full_matrices=m < n)
    smax = float(s[0]) if s.size else 0.0
    thr = max(tol * smax, floor)
    rank = int(np.sum(s > thr))
    basis = np.conj(vh[rank:]).T
    big = s[:rank]
    small = np.concatenate([s[rank:], np.zeros(max(0, n - len(s)))])
    if big.size == 0 or small.size == 0:
        gap = np.inf
    elif small.max() == 0:
        gap = np.inf
    else:
        gap = float(big.min() / small.max())
    return Nullspace(basis, s, thr, gap, gap_min)


# -- real structure -----------------------------------------------------------

def realify(vectors):
    """Complex ``(n, k)`` columns to real ``(2n, k)`` columns ``(Re; Im)``."""
    V = np.asarray(vectors, dtype=complex)
    if V.ndim == 1:
        V = V[:, None]
    return np.vstack([V.real, V.imag])


def complexify(R):
    R = np.asarray(R, dtype=float)
    n = R.shape[0] // 2
    return R[:n] + 1j * R[n:]


def times_i(n):
    """Real ``2n x 2n`` matrix of multiplication by ``i``."""
    Z = np.zeros((n, n))
    I = np.eye(n)
    return np.block([[Z, -I], [I, Z]])


def real_linear(L):
    """Real ``2n x 2n`` matrix of a complex-linear ``L``."""
    L = np.asarray(L, dtype=complex)
    return np.block([[L.real, -L.imag], [L.imag, L.real]])


def orth(R, tol=DEFAULT_TOL):
    """Orthonormal basis of the column span of a real matrix."""
    R = np.asarray(R, dtype=float)
    if R.size == 0 or R.shape[1] == 0:
        return np.zeros((R.shape[0], 0))
    u, s, _ = np.linalg.svd(R, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((R.shape[0], 0))
    rank = int(np.sum(s > tol * s[0]))
    return u[:, :rank]


def numerical_rank(M, tol=DEFAULT_TOL):
    s = np.linalg.svd(np.atleast_2d(M), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def haar_unitary(n, rng):
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
