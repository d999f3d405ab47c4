"""SU(2) and SL(2,C) representation data for massive spin representations.

Everything is written in the weight basis: ``S_z`` diagonal with ``m``
descending from ``s`` to ``-s`` and real nonnegative ladder entries.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .errors import ModnetError
from .linalg import hermitian_function
from .lorentz import check_sl2, check_su2, covering_map, tilde


def spin_label(s):
    """Parse ``0``, ``0.5``, ``"3/2"`` and the like into a half-integer Fraction."""
    try:
        f = Fraction(s)
    except (TypeError, ValueError):
        raise ValueError(f"{s!r} is not a spin label") from None
    if f < 0 or (2 * f).denominator != 1:
        raise ValueError(f"{s!r} is not a nonnegative half-integer")
    return f


def weights(s):
    s = spin_label(s)
    return [s - k for k in range(int(2 * s) + 1)]


def spin_matrices(s):
    """``(S_x, S_y, S_z)`` with ``[S_x, S_y] = i S_z`` and Casimir ``s(s+1)``."""
    s = spin_label(s)
    ms = weights(s)
    d = len(ms)
    Sz = np.diag([float(m) for m in ms]).astype(complex)
    Sp = np.zeros((d, d), dtype=complex)
    for k in range(1, d):
        m = ms[k]
        Sp[k - 1, k] = np.sqrt(float(s * (s + 1) - m * (m + 1)))
    Sm = Sp.T.copy()
    return (Sp + Sm) / 2, (Sp - Sm) / 2j, Sz


def sl2_power(s, A):
    """Symmetric power ``Sym^{2s}`` of ``A`` in the normalized weight basis.

    A homomorphism on all of SL(2,C) with ``sl2_power(1/2, A) = A``; unitary
    exactly on SU(2).  Basis vector ``m`` is ``x^(s+m) y^(s-m)`` scaled by
    ``1 / sqrt((s+m)! (s-m)!)``, and ``A`` substitutes ``x -> a x + c y``,
    ``y -> b x + d y``.
    """
    s = spin_label(s)
    A = np.asarray(A, dtype=complex)
    a, b, c, d = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
    two_s = int(2 * s)
    dim = two_s + 1
    norm = [1 / np.sqrt(float(factorial(j) * factorial(two_s - j))) for j in range(dim)]
    D = np.zeros((dim, dim), dtype=complex)
    # index by the x-power j = s + m; weight order is j descending
    for col in range(dim):
        j1 = two_s - col
        j2 = two_s - j1
        for k in range(j1 + 1):
            for l in range(j2 + 1):
                coeff = comb(j1, k) * comb(j2, l) * a ** k * c ** (j1 - k) * b ** l * d ** (j2 - l)
                row = two_s - (k + l)
                D[row, col] += coeff * norm[j1] / norm[k + l]
    return D


def wigner_D(s, A, tol=1e-9):
    """Spin-``s`` matrix of an SU(2) element."""
    return sl2_power(s, check_su2(A, tol))


def clebsch_multiplicities(s1, s2):
    """``{j: 1}`` for ``j = |s1 - s2|, ..., s1 + s2``."""
    s1, s2 = spin_label(s1), spin_label(s2)
    out = {}
    j = abs(s1 - s2)
    while j <= s1 + s2:
        out[j] = 1
        j += 1
    return out


@dataclass(frozen=True)
class SpinRecord:
    mass: float
    spin: Fraction
    multiplicity: int

    def to_dict(self):
        s = self.spin
        return {"mass": self.mass, "spin": int(s) if s.denominator == 1 else str(s), "multiplicity": self.multiplicity}


@dataclass
class SpinDecomposition:
    records: list

    def multiplicity(self, spin, mass=None):
        spin = spin_label(spin)
        return sum(r.multiplicity for r in self.records if r.spin == spin and (mass is None or r.mass == mass))

    def as_dict(self):
        return {r.spin: r.multiplicity for r in self.records}

    def dimension(self):
        return sum(r.multiplicity * int(2 * r.spin + 1) for r in self.records)

    def to_table(self):
        return [r.to_dict() for r in self.records]


def decompose_counterexample(n, s, cutoff, mass=1.0):
    """Truncated content of ``(sum_{i >= n/2} D^i) (x) D^s``.

    ``i`` runs over ``n/2, n/2 + 1, ...`` up to ``cutoff`` inclusive (integer
    steps, following the SU(2) content of the principal series).
    """
    if int(n) != n or n < 0:
        raise ValueError("n must be a nonnegative integer")
    s = spin_label(s)
    start = Fraction(int(n), 2)
    cutoff = Fraction(cutoff)
    if cutoff < start:
        raise ValueError("cutoff must be at least n/2")
    counts = Counter()
    i = start
    while i <= cutoff:
        counts.update(clebsch_multiplicities(i, s))
        i += 1
    return SpinDecomposition([SpinRecord(float(mass), j, counts[j]) for j in sorted(counts)])


def decomposition_dimension(n, s, cutoff):
    """``sum_i (2i + 1)(2s + 1)`` over the truncated range, for bookkeeping."""
    s = spin_label(s)
    i, total = Fraction(int(n), 2), 0
    while i <= Fraction(cutoff):
        total += int(2 * i + 1) * int(2 * s + 1)
        i += 1
    return total


def boost_matrix(p, mass=None, tol=1e-9):
    """``A_p = sqrt(p~ / m)``: positive, det 1, sends ``(m, 0, 0, 0)`` to ``p``."""
    m = getattr(p, "mass", None) if mass is None else mass
    p = np.asarray(getattr(p, "p", p), dtype=float)
    if m is None:
        m = float(np.sqrt(max(p[0] ** 2 - p[1:] @ p[1:], 0.0)))
    if m <= tol:
        raise ModnetError("A_p needs m > 0")
    return hermitian_function(tilde(p) / m, "sqrt")


def wigner_rotation(p, A, mass=None):
    """``A_p^{-1} A A_{Lambda(A)^{-1} p}``, an element of SU(2)."""
    p = np.asarray(getattr(p, "p", p), dtype=float)
    A = check_sl2(A)
    q = np.linalg.solve(covering_map(A), p)
    return np.linalg.solve(boost_matrix(p, mass), A @ boost_matrix(q, mass))


def transformed_cocycle(i, p, A, mass=None):
    """``V(A_p^{-1}) V(A) V(A_q)`` for ``V = Sym^{2i}``; equals ``V`` of the Wigner rotation."""
    p = np.asarray(getattr(p, "p", p), dtype=float)
    q = np.linalg.solve(covering_map(A), p)
    Ap = boost_matrix(p, mass)
    Aq = boost_matrix(q, mass)
    return sl2_power(i, np.linalg.inv(Ap)) @ sl2_power(i, A) @ sl2_power(i, Aq)
