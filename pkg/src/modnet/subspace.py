"""Real subspaces of C^n, standard subspaces and their modular data.

A real subspace is stored by an orthonormal frame of its realification in
R^{2n}.  Every comparison (equality, inclusion, intersection) goes through
real-orthogonal projections, so the answers never depend on the basis a
caller happened to supply.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NotStandardError, NotUnitaryError
from .linalg import (
    DEFAULT_TOL,
    Antilinear,
    complexify,
    dagger,
    haar_unitary,
    hermitian_function,
    is_unitary,
    nullspace,
    numerical_rank,
    op_norm,
    orth,
    polar_antilinear,
    real_linear,
    realify,
    times_i,
)


class RealSubspace:
    """Real-linear subspace of C^n."""

    def __init__(self, n, frame):
        frame = np.asarray(frame, dtype=float)
        if frame.shape[0] != 2 * n:
            raise ValueError(f"frame has {frame.shape[0]} rows, expected {2 * n}")
        self.n = n
        self.frame = frame

    @classmethod
    def span(cls, n, vectors, tol=DEFAULT_TOL):
        """Real span of complex vectors (dependent vectors are dropped)."""
        V = np.asarray(vectors, dtype=complex).reshape(-1, n).T if len(vectors) else np.zeros((n, 0))
        return cls(n, orth(realify(V), tol))

    @classmethod
    def zero(cls, n):
        return cls(n, np.zeros((2 * n, 0)))

    @classmethod
    def full(cls, n):
        return cls(n, np.eye(2 * n))

    @property
    def real_dim(self):
        return self.frame.shape[1]

    @property
    def basis(self):
        """Complex ``(n, k)`` matrix whose columns span the subspace over R."""
        return complexify(self.frame)

    @cached_property
    def projector(self):
        return self.frame @ self.frame.T

    def distance(self, other):
        return op_norm(self.projector - other.projector)

    def equals(self, other, tol=DEFAULT_TOL):
        return self.distance(other) <= tol

    def excess_over(self, other):
        """``||(1 - P_other) P_self||``; zero iff ``self`` is inside ``other``."""
        if self.real_dim == 0:
            return 0.0
        return op_norm(self.frame - other.projector @ self.frame)

    def is_contained_in(self, other, tol=DEFAULT_TOL):
        return self.excess_over(other) <= tol

    def contains_vector(self, v, tol=DEFAULT_TOL):
        r = realify(v)[:, 0]
        return np.linalg.norm(r - self.projector @ r) <= tol * max(1.0, np.linalg.norm(r))

    def image(self, L):
        """Image under a complex-linear map."""
        return RealSubspace(self.n, orth(real_linear(L) @ self.frame))

    def antilinear_image(self, T):
        return RealSubspace(self.n, orth(T.realified() @ self.frame))

    def times_i(self):
        return RealSubspace(self.n, times_i(self.n) @ self.frame)

    def intersect(self, *others, tol=DEFAULT_TOL):
        spaces = (self,) + others
        eye = np.eye(2 * self.n)
        stacked = np.vstack([eye - s.projector for s in spaces])
        ns = nullspace(stacked, tol=tol)
        return RealSubspace(self.n, ns.basis.real)

    def complement(self):
        """Symplectic complement ``{x : Im<x, h> = 0 for all h}``, i.e. ``(iH)^perp``."""
        ih = times_i(self.n) @ self.frame
        if ih.shape[1] == 0:
            return RealSubspace.full(self.n)
        ns = nullspace(ih.T)
        return RealSubspace(self.n, ns.basis.real)

    def complex_span_rank(self):
        """Real dimension of ``H + iH``."""
        if self.real_dim == 0:
            return 0
        return numerical_rank(np.hstack([self.frame, times_i(self.n) @ self.frame]))

    def is_cyclic(self):
        return self.complex_span_rank() == 2 * self.n

    def is_separating(self):
        return self.complex_span_rank() == 2 * self.real_dim

    def is_standard(self):
        return self.real_dim == self.n and self.is_separating()

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, real_dim={self.real_dim})"


class StandardSubspace(RealSubspace):
    """Standard subspace with its Tomita operator and modular data.

    ``S`` fixes ``H`` pointwise; ``S = J Delta^{1/2}``.
    """

    def __init__(self, n, frame, tol=DEFAULT_TOL):
        super().__init__(n, frame)
        if self.real_dim != n:
            raise NotStandardError(f"real dimension {self.real_dim} != {n}")
        B = self.basis
        cb = np.conj(B)
        if np.linalg.cond(cb) > 1 / tol:
            raise NotStandardError("H ∩ iH ≠ {0}")
        self.tomita = Antilinear(B @ np.linalg.inv(cb))
        self.J, self.delta = polar_antilinear(self.tomita, tol=tol)

    def complement(self):
        return StandardSubspace(self.n, super().complement().frame)

    def modular_flow(self, t):
        return modular_flow(self, t)


def make_standard(vectors, tol=DEFAULT_TOL):
    """Standard subspace spanned over R by ``vectors`` (a list of n-vectors).

    The Tomita matrix is ``B conj(B)^{-1}`` with ``B`` the basis columns.
    """
    V = np.asarray(vectors, dtype=complex)
    if V.ndim != 2:
        raise NotStandardError("expected a list of vectors")
    k, n = V.shape
    B = V.T
    R = realify(B)
    if numerical_rank(R, tol) < k:
        raise NotStandardError("vectors are not real-linearly independent")
    if k != n:
        raise NotStandardError(f"need exactly {n} vectors, got {k}")
    if numerical_rank(np.hstack([R, times_i(n) @ R]), tol) < 2 * n:
        raise NotStandardError("H ∩ iH ≠ {0}")
    return StandardSubspace(n, orth(R, tol), tol=tol)


def as_standard(H, tol=DEFAULT_TOL):
    if isinstance(H, StandardSubspace):
        return H
    if not H.is_standard():
        if H.real_dim != H.n:
            raise NotStandardError(f"real dimension {H.real_dim} != {H.n}")
        raise NotStandardError("H ∩ iH ≠ {0}")
    return StandardSubspace(H.n, H.frame, tol=tol)


def subspace_from_involution(S, tol=DEFAULT_TOL):
    """``ker(1 - S)`` for an antilinear involution ``S``."""
    if not S.is_involution(tol):
        from .errors import NotInvolutionError

        raise NotInvolutionError("S o S differs from the identity")
    n = S.dim
    ns = nullspace(np.eye(2 * n) - S.realified(), tol=tol)
    if ns.dim != n:
        raise NotStandardError(f"fixed space of S has real dimension {ns.dim} != {n}")
    return StandardSubspace(n, ns.basis.real, tol=tol)


def symplectic_complement(H):
    return H.complement()


def extends(H, K, tol=DEFAULT_TOL):
    """Whether ``S_H`` extends ``S_K`` on the domain ``K + iK``.

    ``S_K`` is built from its definition ``k1 + i k2 -> k1 - i k2`` on a real
    basis of ``K`` (which must be separating).
    """
    if not K.is_separating():
        raise NotStandardError("K ∩ iK ≠ {0}")
    B = K.basis
    if B.shape[1] == 0:
        return True
    # S_K(B c) = B conj(c) for complex coefficients c; test on c = e_j and i e_j.
    ok = True
    for col in range(B.shape[1]):
        k = B[:, col]
        for c in (1.0, 1j):
            lhs = H.tomita(c * k)
            rhs = np.conj(c) * k
            ok &= np.linalg.norm(lhs - rhs) <= tol * max(1.0, op_norm(H.tomita.matrix)) * max(1.0, np.linalg.norm(k))
    return bool(ok)


def transport(U, H, tol=DEFAULT_TOL):
    """``K = U H`` with the transported modular data checked.

    ``Delta_K = U Delta_H U*`` and the matrix of ``J_K`` equals
    ``U @ J_H.matrix @ U.T``.
    """
    U = np.asarray(U, dtype=complex)
    if not is_unitary(U, tol):
        raise NotUnitaryError("transport needs a unitary")
    K = StandardSubspace(H.n, orth(real_linear(U) @ H.frame), tol=tol)
    rd, rj = transport_residuals(U, H, K)
    scale = max(1.0, op_norm(H.delta))
    if rd > 1e3 * tol * scale or rj > 1e3 * tol * scale:
        raise ArithmeticError(f"transport identities violated: {rd:.3g}, {rj:.3g}")
    return K


def transport_residuals(U, H, K):
    rd = op_norm(K.delta - U @ H.delta @ dagger(U))
    rj = op_norm(K.J.matrix - U @ H.J.matrix @ U.T)
    return rd, rj


def modular_flow(H, t):
    """``Delta_H^{it}``."""
    return hermitian_function(H.delta, "power-it", t=t)


@dataclass
class TakesakiVerdict:
    invariant: bool          # Delta_H^{it} K = K at every sampled t
    cyclic: bool             # K + iK = C^n
    standard_in_span: bool   # K ∩ iK = {0}, i.e. standard inside its own span
    equal: bool              # K = H
    max_invariance_defect: float
    t_samples: list = field(default_factory=list)

    @property
    def hypotheses_hold(self):
        return self.invariant and self.cyclic

    @property
    def consistent(self):
        """False only if K is invariant and cyclic yet differs from H."""
        return not self.hypotheses_hold or self.equal


def takesaki_test(K, H, t_samples=(0.3, 1.0, -2.1), tol=DEFAULT_TOL):
    if not K.is_contained_in(H, tol=1e3 * tol):
        raise ValueError("K is not contained in H")
    defect = 0.0
    for t in t_samples:
        img = K.image(modular_flow(H, t))
        defect = max(defect, img.distance(K))
    invariant = defect <= 1e3 * tol
    return TakesakiVerdict(
        invariant=invariant,
        cyclic=K.is_cyclic(),
        standard_in_span=K.is_separating(),
        equal=K.equals(H, tol=1e3 * tol),
        max_invariance_defect=defect,
        t_samples=list(t_samples),
    )


# -- random generators ---------------------------------------------------------

def random_modular_pair(n, rng, spread=2.0):
    """Random ``(J, Delta)`` with ``J Delta J = Delta^{-1}``.

    A model pair (a swap-conjugation on coordinate pairs with eigenvalues
    ``lam, 1/lam``, plain conjugation on a leftover coordinate) is conjugated
    by a Haar unitary.
    """
    A0 = np.zeros((n, n))
    d = np.ones(n)
    for k in range(n // 2):
        i, j = 2 * k, 2 * k + 1
        A0[i, j] = A0[j, i] = 1.0
        lam = np.exp(rng.uniform(-spread, spread))
        d[i], d[j] = lam, 1 / lam
    if n % 2:
        A0[n - 1, n - 1] = 1.0
    U = haar_unitary(n, rng)
    J = Antilinear(U @ A0 @ U.T)
    delta = U @ np.diag(d) @ dagger(U)
    return J, (delta + dagger(delta)) / 2


def tomita_from_pair(J, delta):
    """``S = J Delta^{1/2}`` as an antilinear operator."""
    return J.after(hermitian_function(delta, "sqrt"))


def random_standard(n, rng, spread=2.0):
    J, delta = random_modular_pair(n, rng, spread)
    return subspace_from_involution(tomita_from_pair(J, delta))
