"""Commutants, the modularity condition and MASA checks.

The commutant ``M' = {X : [X, G] = [X, G*] = 0}`` is found in two stages.  A
random Hermitian element of the generated algebra splits C^n into its
eigenspaces; every commutant element preserves them, so only block-diagonal
unknowns remain.  Eigenvalues are clustered loosely, which can only enlarge
the candidate space.  The exact constraints are then solved by an SVD
nullspace whose singular-value gap is reported alongside the answer.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotUnitaryError
from .linalg import DEFAULT_TOL, GAP_MIN, dagger, is_unitary, nullspace, op_norm, spectral_decomposition

SPLIT_TOL = 1e-7


@dataclass
class Commutant:
    basis: list                # Frobenius-orthonormal matrices spanning M'
    singular_values: np.ndarray
    gap: float
    gap_min: float = GAP_MIN

    @property
    def dim(self):
        return len(self.basis)

    @property
    def clear(self):
        return self.gap >= self.gap_min


def _seed_blocks(generators, rng):
    n = generators[0].shape[0]
    H = np.zeros((n, n), dtype=complex)
    for G in generators:
        a, b = rng.standard_normal(2)
        H += a * (G + dagger(G)) / 2 + b * (G - dagger(G)) / 2j
    w, V = np.linalg.eigh((H + dagger(H)) / 2)
    scale = max(1.0, float(np.abs(w).max()))
    blocks, start = [], 0
    for k in range(1, n + 1):
        if k == n or w[k] - w[k - 1] > SPLIT_TOL * scale:
            blocks.append(np.arange(start, k))
            start = k
    return V, blocks


def commutant(generators, tol=DEFAULT_TOL, gap_min=GAP_MIN, seed=0):
    gens = [np.asarray(G, dtype=complex) for G in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    rng = np.random.default_rng(seed)
    V, blocks = _seed_blocks(gens, rng)
    # unknowns: entries (a, c) inside a diagonal block, in the eigenbasis of the seed
    rows_idx = np.concatenate([np.repeat(b, len(b)) for b in blocks])
    cols_idx = np.concatenate([np.tile(b, len(b)) for b in blocks])
    u = len(rows_idx)
    # fold each block of equations into a triangular factor with the same singular values
    R = np.zeros((0, u), dtype=complex)
    for G in gens:
        for X in (G, dagger(G)):
            Gt = dagger(V) @ X @ V
            # [E_ac, Gt] = e_a Gt[c, :] - Gt[:, a] e_c^T, flattened row-major
            M = np.zeros((n, n, u), dtype=complex)
            k = np.arange(u)
            M[rows_idx, :, k] += Gt[cols_idx, :]
            M[:, cols_idx, k] -= Gt[:, rows_idx]
            R = np.linalg.qr(np.vstack([R, M.reshape(n * n, u)]), mode="r")
    floor = tol * max(op_norm(G) for G in gens)
    ns = nullspace(R, tol=tol, gap_min=gap_min, floor=floor)
    basis = []
    for c in ns.vectors():
        E = np.zeros((n, n), dtype=complex)
        E[rows_idx, cols_idx] = c
        basis.append(V @ E @ dagger(V))
    return Commutant(basis, ns.singular_values, ns.gap, gap_min)


def _check_unitary(mats, what):
    for X in mats:
        if not is_unitary(X, 1e-8):
            raise NotUnitaryError(f"{what} must be unitary")


@dataclass
class MCResult:
    verdict: object            # True / False / None (inconclusive gap)
    commutant_dim: int
    residual: float            # max ||[r, X]|| over unit-norm X in M'
    certificate: object = None # element of M' not commuting with r
    gap: float = np.inf
    singular_values: list = field(default_factory=list)

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "commutant_dim": self.commutant_dim,
            "residual": self.residual,
            "gap": self.gap if np.isfinite(self.gap) else None,
        }


def violation(comm, r):
    """Largest ``||[r, X]||`` over ``X in M'`` with unit Frobenius norm and the maximizer."""
    if comm.dim == 0:
        return 0.0, None
    cols = np.stack([(r @ X - X @ r).ravel() for X in comm.basis], axis=1)
    _, s, vh = np.linalg.svd(cols, full_matrices=False)
    c = np.conj(vh[0])
    return float(s[0]), sum(ck * X for ck, X in zip(c, comm.basis))


def _projection_certificate(X, r, tol):
    """Prefer an eigenprojection of ``X`` (still in M') as the witness."""
    for part in ((X + dagger(X)) / 2, (X - dagger(X)) / 2j):
        if op_norm(part) <= tol:
            continue
        for _, P in spectral_decomposition(part, tol=1e-6 * op_norm(part)):
            if op_norm(r @ P - P @ r) > 1e3 * tol:
                return P
    return X


def mc_check(generators, r, tol=DEFAULT_TOL, gap_min=GAP_MIN, seed=0):
    """Whether ``r`` lies in the bicommutant of the generators."""
    gens = [np.asarray(G, dtype=complex) for G in generators]
    r = np.asarray(r, dtype=complex)
    _check_unitary(gens, "generators")
    _check_unitary([r], "r")
    comm = commutant(gens, tol=tol, gap_min=gap_min, seed=seed)
    res, X = violation(comm, r)
    scale = 1e3 * tol
    if not comm.clear:
        verdict = None
    else:
        verdict = res <= scale
    cert = None
    if verdict is False:
        cert = _projection_certificate(X, r, tol)
    return MCResult(verdict, comm.dim, res, cert, comm.gap, list(comm.singular_values))


def bicommutant_contains(generators, tol=DEFAULT_TOL, seed=0):
    """Sanity check: ``(M')'`` contains every generator.  Returns the largest defect."""
    comm = commutant(generators, tol=tol, seed=seed)
    if comm.dim == 0:
        return 0.0
    double = commutant(comm.basis, tol=tol, seed=seed + 1)
    worst = 0.0
    for G in generators:
        G = np.asarray(G, dtype=complex)
        coeffs = [np.vdot(B, G) for B in double.basis]
        approx = sum((c * B for c, B in zip(coeffs, double.basis)), np.zeros_like(G))
        worst = max(worst, op_norm(G - approx))
    return worst


# -- orbit-model front ends -------------------------------------------------------

TRANSLATION_DIRECTIONS = (
    np.array([0.0, 1.0, 0.0, 0.0]),
    np.array([0.0, 0.0, 1.0, 0.0]),
    np.array([1.0, 0.0, 0.0, 1.0]),
    np.array([-1.0, 0.0, 0.0, 1.0]),
)


def translation_samples(seed=0, count=2, scale=0.7):
    """Deterministic translation vectors along the ``G_{W_3}`` directions."""
    rng = np.random.default_rng(seed)
    return [rng.uniform(0.2, scale) * d for d in TRANSLATION_DIRECTIONS for _ in range(count)]


def stabilizer_unitaries(model, seed=0, reflection="reflection"):
    """Unitaries of the registered ``G_{W_3}`` elements plus sampled translations."""
    gens = [model.translation(a) for a in translation_samples(seed)]
    for name, el in model.elements.items():
        if name != reflection:
            gens.append(el.unitary().astype(complex))
    return gens


def model_mc(model, tol=DEFAULT_TOL, seed=0, reflection="reflection"):
    if reflection not in model.elements:
        raise ValueError("model has no registered reflection r_1(pi)")
    return mc_check(stabilizer_unitaries(model, seed, reflection), model.unitary(reflection), tol=tol, seed=seed)


@dataclass
class MasaResult:
    verdict: bool
    separating: bool
    commutant_dim: int
    off_diagonal: float
    message: str = ""


def masa_check(model, translations=None, tol=DEFAULT_TOL, seed=0):
    """Whether the sampled translation phases generate a maximal abelian algebra."""
    vecs = translation_samples(seed) if translations is None else translations
    phases = np.stack([model.translation_phases(a) for a in vecs], axis=1)
    n = model.dim
    sep = True
    message = ""
    for i in range(n):
        for j in range(i + 1, n):
            same_phase = np.allclose(np.exp(1j * phases[i]), np.exp(1j * phases[j]), atol=1e-9)
            same_point = np.allclose(model.samples[i], model.samples[j], atol=1e-12)
            if same_phase and not same_point:
                sep = False
                message = "phases not separating"
    comm = commutant([model.translation(a) for a in vecs], tol=tol, seed=seed)
    off = 0.0
    for X in comm.basis:
        off = max(off, op_norm(X - np.diag(np.diag(X))))
    verdict = bool(comm.dim == n and off <= 1e3 * tol)
    if not verdict and not message:
        message = "commutant is not diagonal"
    return MasaResult(verdict, sep, comm.dim, off, message)


@dataclass
class Block:
    """One summand of a direct sum: generator list (common order), reflection, mass label."""

    generators: list
    r: np.ndarray
    mass: float


def model_block(model, seed=0):
    if len(model.masses) != 1:
        raise ValueError("a block carries a single mass")
    return Block(stabilizer_unitaries(model, seed), model.unitary("reflection").astype(complex), model.masses[0])


def block_diag(mats):
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=complex)
    k = 0
    for m in mats:
        d = m.shape[0]
        out[k:k + d, k:k + d] = m
        k += d
    return out


@dataclass
class DirectSumResult:
    verdict: object
    block_verdicts: list
    disjoint: bool
    intertwiner_norm: float
    total: MCResult
    message: str = ""


def direct_sum_mc(blocks, tol=DEFAULT_TOL, seed=0):
    masses = [b.mass for b in blocks]
    if len(set(masses)) != len(masses):
        raise ValueError("block masses must be pairwise distinct")
    counts = {len(b.generators) for b in blocks}
    if len(counts) != 1:
        raise ValueError("blocks must list the same generators")
    per = [mc_check(b.generators, b.r, tol=tol, seed=seed) for b in blocks]
    gens = [block_diag([b.generators[k] for b in blocks]) for k in range(counts.pop())]
    r = block_diag([b.r for b in blocks])
    total = mc_check(gens, r, tol=tol, seed=seed)
    comm = commutant(gens, tol=tol, seed=seed)
    sizes = np.cumsum([0] + [b.r.shape[0] for b in blocks])
    worst = 0.0
    for X in comm.basis:
        Y = X.copy()
        for i in range(len(blocks)):
            Y[sizes[i]:sizes[i + 1], sizes[i]:sizes[i + 1]] = 0
        worst = max(worst, op_norm(Y))
    disjoint = worst <= 1e3 * tol
    verdicts = [p.verdict for p in per]
    if None in verdicts or total.verdict is None:
        verdict = None
    else:
        verdict = all(verdicts) and disjoint and total.verdict
    message = "" if disjoint else "accidental block equivalence: intertwiner between blocks"
    return DirectSumResult(verdict, verdicts, disjoint, worst, total, message)
