"""Spectral diagnostics behind the split property.

Two standard subspaces of the same finite-dimensional space cannot form a
proper inclusion (both have real dimension n), so the split data is taken
as given spectra: either produced by models or supplied by the user.  The
per-mass spectrum generators here are model plumbing, not physical values.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotPositiveError
from .linalg import DEFAULT_TOL


@dataclass
class ModularSpectrum:
    eigenvalues: np.ndarray
    provenance: str = "user-supplied"

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float).ravel()
        if np.any(ev <= 0):
            raise NotPositiveError("modular spectra must be positive")
        self.eigenvalues = np.sort(ev)

    def paired(self, tol=1e-9):
        """Whether the multiset is closed under ``lam -> 1/lam``."""
        a = np.sort(self.eigenvalues)
        b = np.sort(1 / self.eigenvalues)
        return bool(np.allclose(np.log(a), np.log(b), atol=tol, rtol=0))

    def union(self, other):
        return ModularSpectrum(np.concatenate([self.eigenvalues, other.eigenvalues]), "composed")

    @classmethod
    def of(cls, delta):
        return cls(np.linalg.eigvalsh(np.asarray(delta)), "model-generated")


def trace_below_one(spec):
    """``Tr Delta|_[0,1]``: the sum of eigenvalues ``<= 1``."""
    ev = spec.eigenvalues if isinstance(spec, ModularSpectrum) else ModularSpectrum(spec).eigenvalues
    return float(ev[ev <= 1].sum())


def factor_check(F, tol=DEFAULT_TOL):
    """``F ∩ F' = {0}``."""
    if F.real_dim == 0:
        return True
    return F.intersect(F.complement(), tol=tol).real_dim == 0


def geometric_generator(q, levels=4, multiplicity=1):
    """Spectrum ``{q^k, q^-k : k = 1..levels}`` repeated ``multiplicity`` times."""
    if q <= 0:
        raise NotPositiveError("q must be positive")
    ks = np.arange(1, int(levels) + 1)
    ev = np.concatenate([float(q) ** ks, float(q) ** (-ks)])
    return ModularSpectrum(np.tile(ev, multiplicity), "model-generated")


GENERATORS = {"geometric": geometric_generator}


def make_generator(spec):
    spec = dict(spec)
    kind = spec.pop("type", "geometric")
    if kind not in GENERATORS:
        raise ValueError(f"unknown spectrum generator {kind!r}")
    return GENERATORS[kind](**spec)


@dataclass
class MassPoint:
    mass: float
    weight: float
    generator: dict
    multiplicity: int = 1


@dataclass
class GrowthReport:
    spectrum: ModularSpectrum
    total: float
    per_mass: list
    table: list = field(default_factory=list)   # (number of mass points, trace)
    verdict: str = ""
    multiplicity_flags: list = field(default_factory=list)

    def to_dict(self):
        return {
            "total": self.total,
            "per_mass": self.per_mass,
            "table": [[n, t] for n, t in self.table],
            "verdict": self.verdict,
            "paired": self.spectrum.paired(),
            "multiplicity_flags": self.multiplicity_flags,
        }


def compose_masses(points, max_multiplicity=8, atom_bound=2, floor=1e-12):
    """Concatenate per-mass spectra and tabulate the running trace.

    The verdict is ``continuum-like divergence`` when there are more than
    ``atom_bound`` mass points, each contributing more than ``floor`` (so the
    total is at least ``N * c``), and ``atomic-like`` otherwise.  Refinement
    families are classified by :func:`classify_growth`.
    """
    points = [p if isinstance(p, MassPoint) else MassPoint(**p) for p in points]
    masses = [p.mass for p in points]
    if len(set(masses)) != len(masses):
        raise ValueError("duplicate masses in the surrogate")
    if any(p.weight <= 0 for p in points):
        raise ValueError("weights must be positive")
    spectra, per, table, flags = [], [], [], []
    running = 0.0
    for k, p in enumerate(points, start=1):
        gen = dict(p.generator)
        gen["multiplicity"] = gen.get("multiplicity", 1) * p.multiplicity
        s = make_generator(gen)
        tau = trace_below_one(s)
        spectra.append(s)
        per.append({"mass": p.mass, "trace": tau, "multiplicity": gen["multiplicity"]})
        if gen["multiplicity"] > max_multiplicity:
            flags.append({"mass": p.mass, "multiplicity": gen["multiplicity"], "bound": max_multiplicity})
        running += tau
        table.append((k, running))
    total_spec = spectra[0]
    for s in spectra[1:]:
        total_spec = total_spec.union(s)
    contrib = [q["trace"] for q in per]
    c = min(contrib) if contrib else 0.0
    if len(points) > atom_bound and c > floor:
        verdict = "continuum-like divergence"
    else:
        verdict = "atomic-like"
    return GrowthReport(total_spec, float(total_spec.eigenvalues[total_spec.eigenvalues <= 1].sum()),
                        per, table, verdict, flags)


def continuum_surrogate(N, q=2.0, levels=3, m_min=1.0, m_max=2.0):
    """``N`` equally weighted mass points in ``[m_min, m_max]``."""
    ms = np.linspace(m_min, m_max, N) if N > 1 else np.array([m_min])
    return [MassPoint(float(m), 1.0 / N, {"type": "geometric", "q": q, "levels": levels}) for m in ms]


def atomic_surrogate(refinement, atoms=(1.0, 2.0), q=2.0, levels=3):
    """A fixed atom set; ``refinement`` splits nothing, since atoms carry all the weight."""
    del refinement  # refining the mass grid adds only zero-weight points, which are not kept
    return [MassPoint(m, 1.0 / len(atoms), {"type": "geometric", "q": q, "levels": levels}) for m in atoms]


def growth_table(kind, Ns, **kw):
    """``(N, total trace)`` for a family of surrogates."""
    out = []
    for N in Ns:
        pts = continuum_surrogate(N, **kw) if kind == "continuum" else atomic_surrogate(N, **kw)
        out.append((N, compose_masses(pts).total))
    return out


def classify_growth(table, rtol=1e-12):
    """``atomic-like`` when the trace is constant over the table, ``continuum-like`` when it
    never decreases along the refinement and stays above ``N * c`` with ``c > 0``.

    ``c = min(t / N)`` is the best linear lower bound the table supports.
    """
    order = np.argsort([n for n, _ in table])
    Ns = np.array([table[k][0] for k in order], dtype=float)
    ts = np.array([table[k][1] for k in order])
    if np.ptp(ts) <= rtol * max(1.0, ts.max()):
        return "atomic-like", 0.0
    c = float(np.min(ts / Ns))
    if c > 0 and np.all(np.diff(ts) >= -rtol * max(1.0, ts.max())):
        return "continuum-like divergence", c
    return "inconclusive", c
