"""Mass-shell geometry and finite sampled scalar representations.

An :class:`OrbitModel` is a finite set of mass-shell momenta closed under a
few registered elements of the ``W_3`` stabilizer (rotations about ``x3``,
boosts along ``x3``) and the reflection ``r_1(pi)``.  Rotations and the
reflection act by exact permutations.  Boosts act on a cyclic rapidity
lattice ``t_j = (j - (N - 1) / 2) * step``: the step ``j -> j + 1`` is the
geometric boost except at the wrap ``N - 1 -> 0``.  Translations act
diagonally by ``exp(i a.p)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ClosureError, ExcludedOrbitError
from .lorentz import CENTER, METRIC, boost, boost_lorentz, covering_map, rotation, rotation_sl2

SHELL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MassShellPoint:
    mass: float
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        object.__setattr__(self, "p", p)
        if self.mass < 0:
            raise ValueError("mass must be nonnegative")
        if p[0] < 0 or (self.mass > 0 and p[0] <= 0):
            raise ValueError("energy must be positive")
        sq = p @ METRIC @ p
        if abs(sq - self.mass ** 2) > SHELL_TOL * max(1.0, p[0] ** 2):
            raise ValueError(f"p^2 = {sq:.12g} differs from m^2 = {self.mass ** 2:.12g}")

    @classmethod
    def from_spatial(cls, mass, spatial):
        k = np.asarray(spatial, dtype=float)
        return cls(mass, np.concatenate([[np.sqrt(mass ** 2 + k @ k)], k]))


def _check_orbit(pt):
    p = pt.p
    if pt.mass == 0 and p[1] ** 2 + p[2] ** 2 <= SHELL_TOL * max(1.0, p[0] ** 2):
        raise ExcludedOrbitError("excluded null orbit (p0, 0, 0, ±p0)")


def orbit_coordinates(pt):
    """``(r, theta, t)`` with ``r = p1^2 + p2^2`` (the orbit label as written,
    a squared planar radius), ``theta`` the planar angle in ``[0, 2 pi)`` and
    ``t`` the rapidity in the ``(p0, p3)`` plane."""
    _check_orbit(pt)
    p0, p1, p2, p3 = pt.p
    r = p1 ** 2 + p2 ** 2
    theta = float(np.arctan2(p2, p1) % (2 * np.pi)) if r > 0 else 0.0
    t = float(np.arctanh(p3 / p0))
    return r, theta, t


def from_orbit_coordinates(mass, r, theta, t):
    rho = np.sqrt(r)
    e = np.sqrt(mass ** 2 + r)
    return np.array([e * np.cosh(t), rho * np.cos(theta), rho * np.sin(theta), e * np.sinh(t)])


def reflect_decompose(pt):
    """``(t_p, theta_p)`` with ``Lambda_3(t_p) R_3(theta_p) p = R_1(pi) p``.

    ``R_3(theta) = Lambda(r_3(theta))`` turns ``(p1, p2)`` clockwise by theta,
    so ``theta_p = 2 atan2(p2, p1)`` sends the planar angle ``a`` to ``-a``.
    The boost ``t_p = -2 artanh(p3 / p0)`` flips ``p3`` at fixed ``p0``.
    At ``p1 = p2 = 0`` the angle is free and ``0`` is returned.
    """
    _check_orbit(pt)
    p0, p1, p2, p3 = pt.p
    if p1 == 0 and p2 == 0:
        theta = 0.0
    else:
        theta = float(np.angle(np.exp(2j * np.arctan2(p2, p1))))
    t = float(-2 * np.arctanh(p3 / p0))
    return t, theta


def reflect_residual(pt, t, theta):
    lhs = boost_lorentz(3, t) @ rotation(3, theta)[1] @ pt.p
    rhs = rotation(1, np.pi)[1] @ pt.p
    return float(np.linalg.norm(lhs - rhs))


# -- orbit models -----------------------------------------------------------------

@dataclass
class Element:
    """A registered group element and its sample permutation.

    ``perm[j]`` is the index of the image of sample ``j``; ``wrapped[j]`` marks
    boost steps that jump across the rapidity lattice seam.
    """

    name: str
    kind: str
    A: np.ndarray
    perm: np.ndarray
    wrapped: np.ndarray

    def unitary(self):
        n = len(self.perm)
        U = np.zeros((n, n))
        U[self.perm, np.arange(n)] = 1.0
        return U


@dataclass
class OrbitModel:
    masses: list
    multiplicities: list
    rapidity_step: float
    samples: np.ndarray            # (n, 4) momenta
    labels: np.ndarray             # (n, 5): mass index, copy, orbit index, angle key, rapidity index
    orbit_sizes: dict              # orbit index -> rapidity lattice size N
    elements: dict = field(default_factory=dict)

    @property
    def dim(self):
        return len(self.samples)

    def unitary(self, name):
        return self.elements[name].unitary()

    def translation(self, a):
        """``U(a)`` = diag ``exp(i a.p)`` with the Minkowski product."""
        phases = self.samples @ METRIC @ np.asarray(a, dtype=float)
        return np.diag(np.exp(1j * phases))

    def translation_phases(self, a):
        return self.samples @ METRIC @ np.asarray(a, dtype=float)

    def element_names(self):
        return list(self.elements)

    def permutation_residual(self, name):
        """Max ``|Lambda(g) p_j - p_perm[j]|`` over non-wrapped samples."""
        el = self.elements[name]
        L = covering_map(el.A)
        images = self.samples @ L.T
        ok = ~el.wrapped
        if not ok.any():
            return 0.0
        return float(np.abs(images[ok] - self.samples[el.perm[ok]]).max())

    def boost_element(self):
        for el in self.elements.values():
            if el.kind == "boost":
                return el
        return None

    def boost_generator(self):
        """Hermitian ``K`` with ``exp(i K step) = U(boost)`` exactly.

        Built cycle by cycle from the discrete Fourier basis; the log branch
        is centred so the spectrum is symmetric when the cycle length is odd.
        """
        n = self.dim
        K = np.zeros((n, n), dtype=complex)
        el = self.boost_element()
        if el is None:
            return K
        seen = np.zeros(n, dtype=bool)
        for start in range(n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = el.perm[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = el.perm[j]
            L = len(cyc)
            ks = np.arange(L) - (L - 1) // 2
            idx = np.arange(L)
            # P v_k = w^k v_k with v_k = sum_i w^{-ik} e_{c_i} / sqrt(L)
            F = np.exp(-2j * np.pi * np.outer(idx, ks) / L) / np.sqrt(L)
            kappa = 2 * np.pi * ks / (L * self.rapidity_step)
            block = F @ np.diag(kappa) @ np.conj(F).T
            K[np.ix_(cyc, cyc)] += block
        return K

    def interior(self, name, steps):
        """Samples whose ``steps``-fold image under ``name`` never wraps."""
        el = self.elements[name]
        ok = np.ones(self.dim, dtype=bool)
        idx = np.arange(self.dim)
        step = 1 if steps >= 0 else -1
        inv = np.empty_like(el.perm)
        inv[el.perm] = np.arange(self.dim)
        for _ in range(abs(steps)):
            if step > 0:
                ok &= ~el.wrapped[idx]
                idx = el.perm[idx]
            else:
                idx = inv[idx]
                ok &= ~el.wrapped[idx]
        return ok

    def orbit_labels(self):
        """Label per sample of its (mass, copy, orbit) G_3-orbit."""
        return [tuple(row[:3]) for row in self.labels.astype(int)]


_KINDS = ("boost", "rotation", "reflection", "center")


def _normalize_element(spec, default_step):
    if isinstance(spec, str):
        spec = {"type": spec}
    kind = spec.get("type")
    if kind not in _KINDS:
        raise ValueError(f"unknown element type {kind!r}")
    axis = spec.get("axis", 3 if kind != "reflection" else 1)
    if kind in ("boost", "rotation") and axis != 3:
        raise ValueError("orbit models carry boosts and rotations about x3 only")
    if kind == "reflection" and axis != 1:
        raise ValueError("the registered reflection is r_1(pi)")
    out = {"type": kind, "name": spec.get("name", kind)}
    if kind == "boost":
        out["step"] = float(spec.get("step", default_step))
    if kind == "rotation":
        if "angle" not in spec:
            raise ValueError("rotation element needs an angle")
        out["angle"] = float(spec["angle"])
    return out


def _angle_key(theta):
    return round(float(theta % (2 * np.pi)), 9) % round(2 * np.pi, 9)


def build_orbit_model(masses, multiplicities=None, orbits=({"r": 1.0, "rapidity_N": 8},),
                      elements=(), rapidity_step=0.5, budget=4096):
    """Close base points ``(theta = 0, rapidity index 0)`` of each orbit under
    the registered elements.

    ``orbits`` is a list of dicts with ``r`` (orbit label ``p1^2 + p2^2``) and
    ``rapidity_N``; the same orbits are laid on every mass shell.
    ``elements`` entries are ``{"type": "boost" | "rotation" | "reflection" |
    "center", ...}``; a boost's ``step`` must equal ``rapidity_step``.
    """
    masses = [float(m) for m in masses]
    if multiplicities is None:
        multiplicities = [1] * len(masses)
    if len(multiplicities) != len(masses):
        raise ValueError("masses and multiplicities differ in length")
    els = [_normalize_element(e, rapidity_step) for e in elements]
    names = [e["name"] for e in els]
    if len(set(names)) != len(names):
        raise ValueError("duplicate element names")
    for e in els:
        if e["type"] == "boost" and abs(e["step"] - rapidity_step) > 1e-12:
            raise ValueError("boost step must equal the rapidity lattice step")

    samples, labels, sizes = [], [], {}
    states = {}  # (mass idx, orbit idx, angle key, j) -> base index
    base_rows = []
    for mi, m in enumerate(masses):
        for oi, orb in enumerate(orbits):
            r = float(orb["r"])
            N = int(orb.get("rapidity_N", 1))
            sizes[oi] = N
            if m == 0 and r <= 0:
                raise ExcludedOrbitError("excluded null orbit (p0, 0, 0, ±p0)")

            def point(theta, j, m=m, r=r, N=N):
                return from_orbit_coordinates(m, r, theta, (j - (N - 1) / 2) * rapidity_step)

            queue = [(0.0, 0)]
            local = {}
            while queue:
                theta, j = queue.pop()
                key = (_angle_key(theta), j)
                if key in local:
                    continue
                local[key] = (theta % (2 * np.pi), j)
                if len(states) + len(local) > budget:
                    raise ClosureError(f"orbit closure exceeds the sample budget {budget}")
                for e in els:
                    queue.append(_state_image(e, theta, j, N, point)[:2])
            for key, (theta, j) in sorted(local.items()):
                states[(mi, oi) + key] = len(base_rows)
                base_rows.append((mi, oi, theta, j, point(theta, j)))

    n0 = len(base_rows)
    perms = {e["name"]: np.empty(n0, dtype=int) for e in els}
    wraps = {e["name"]: np.zeros(n0, dtype=bool) for e in els}
    for idx, (mi, oi, theta, j, _) in enumerate(base_rows):
        N = sizes[oi]
        m = masses[mi]
        r = float(orbits[oi]["r"])

        def point(theta, j, m=m, r=r, N=N):
            return from_orbit_coordinates(m, r, theta, (j - (N - 1) / 2) * rapidity_step)

        for e in els:
            th2, j2, wrapped = _state_image(e, theta, j, N, point)
            perms[e["name"]][idx] = states[(mi, oi, _angle_key(th2), j2)]
            wraps[e["name"]][idx] = wrapped

    # replicate for multiplicities
    n_total = sum(multiplicities[mi] for (mi, *_rest) in base_rows)
    order = []
    for mi in range(len(masses)):
        for c in range(multiplicities[mi]):
            for idx, row in enumerate(base_rows):
                if row[0] == mi:
                    order.append((idx, c))
    pos = {key: k for k, key in enumerate(order)}
    for idx, c in order:
        mi, oi, theta, j, p = base_rows[idx]
        samples.append(p)
        labels.append((mi, c, oi, theta, j))
    model = OrbitModel(masses, list(multiplicities), rapidity_step, np.array(samples).reshape(-1, 4),
                       np.array(labels, dtype=float).reshape(-1, 5), sizes)
    for e in els:
        full = np.empty(n_total, dtype=int)
        wr = np.zeros(n_total, dtype=bool)
        for k, (idx, c) in enumerate(order):
            full[k] = pos[(perms[e["name"]][idx], c)]
            wr[k] = wraps[e["name"]][idx]
        model.elements[e["name"]] = Element(e["name"], e["type"], _element_sl2(e), full, wr)
    return model


def _element_sl2(e):
    if e["type"] == "boost":
        return boost(3, e["step"])[0]
    if e["type"] == "rotation":
        return rotation_sl2(3, e["angle"])
    if e["type"] == "reflection":
        return rotation_sl2(1, np.pi)
    return CENTER.copy()


def _state_image(e, theta, j, N, point):
    """Lattice image ``(theta', j', wrapped)`` of a sample, checked against the
    geometric action where the lattice is faithful."""
    kind = e["type"]
    if kind == "center":
        return theta, j, False
    if kind == "boost":
        return theta, (j + 1) % N, j == N - 1
    if kind == "rotation":
        # Lambda(r_3(angle)) turns the plane clockwise
        th2 = (theta - e["angle"]) % (2 * np.pi)
        img = rotation(3, e["angle"])[1] @ point(theta, j)
        if np.abs(img - point(th2, j)).max() > 1e-9 * max(1.0, abs(img[0])):
            raise ArithmeticError("rotation lattice mismatch")
        return th2, j, False
    # reflection r_1(pi): (p1, p2, p3) -> (p1, -p2, -p3)
    th2 = (-theta) % (2 * np.pi)
    j2 = N - 1 - j
    img = rotation(1, np.pi)[1] @ point(theta, j)
    if np.abs(img - point(th2, j2)).max() > 1e-9 * max(1.0, abs(img[0])):
        raise ArithmeticError("reflection lattice mismatch")
    return th2, j2, False


def model_from_spec(spec):
    """Build from the JSON model-spec dict."""
    allowed = {"masses", "multiplicities", "orbits", "elements", "rapidity_step", "budget"}
    unknown = set(spec) - allowed
    if unknown:
        raise ValueError(f"unknown model keys: {sorted(unknown)}")
    orbits = []
    for o in spec.get("orbits", [{"r": 1.0, "rapidity_N": 8}]):
        o = dict(o)
        angle_n = o.pop("angle_N", None)
        orbits.append(o)
        if angle_n is not None:
            o["angle_N"] = int(angle_n)
    elements = []
    for e in spec.get("elements", []):
        if isinstance(e, str):
            e = {"type": e}
        e = dict(e)
        if e.get("type") == "rotation" and "angle" not in e:
            counts = {o["angle_N"] for o in orbits if "angle_N" in o}
            if len(counts) != 1:
                raise ValueError("rotation without angle needs one common angle_N")
            e["angle"] = 2 * np.pi / counts.pop()
        elements.append(e)
    return build_orbit_model(
        spec["masses"],
        spec.get("multiplicities"),
        [{k: v for k, v in o.items() if k != "angle_N"} for o in orbits],
        elements,
        rapidity_step=float(spec.get("rapidity_step", 0.5)),
        budget=int(spec.get("budget", 4096)),
    )


def standard_model(masses=(1.0,), multiplicities=None, r=1.0, rapidity_N=8, angle_N=8,
                   rapidity_step=0.5, radii=None):
    """Orbit model registering ``lambda_3(step)``, ``r_3(2 pi / angle_N)``,
    ``r_1(pi)`` and ``r(2 pi)``."""
    radii = [r] if radii is None else list(radii)
    return build_orbit_model(
        masses,
        multiplicities,
        [{"r": rr, "rapidity_N": rapidity_N} for rr in radii],
        [
            {"type": "boost", "step": rapidity_step},
            {"type": "rotation", "angle": 2 * np.pi / angle_N},
            {"type": "reflection"},
            {"type": "center"},
        ],
        rapidity_step=rapidity_step,
    )


# -- identities on models ------------------------------------------------------------

V_PLUS = np.array([1.0, 0.0, 0.0, 1.0])
V_MINUS = np.array([-1.0, 0.0, 0.0, 1.0])
X1 = np.array([0.0, 1.0, 0.0, 0.0])
X2 = np.array([0.0, 0.0, 1.0, 0.0])


def borchers_residuals(model, steps=(1, 2, -1), t_values=(0.3, 1.0), boost_name="boost"):
    """Adjoint action of lattice boosts on translations.

    For ``k`` lattice steps (boost parameter ``k * step``) checks, on samples
    whose ``k``-step orbit never wraps,

    * ``U(b) U(a) U(b)^* = U(Lambda(b) a)`` for ``a`` along x1, x2, v+, v-;
    * ``U(b) U_pm(t) U(b)^* = U_pm(e^{pm k step} t)`` (``U_pm(t) = U(t v_pm)``).

    Returns ``(max residual, number of interior samples)``.
    """
    el = model.elements[boost_name]
    P = el.unitary()
    worst = 0.0
    count = model.dim
    for k in steps:
        Pk = np.linalg.matrix_power(P, k) if k >= 0 else np.linalg.matrix_power(P.T, -k)
        Lk = boost_lorentz(3, k * model.rapidity_step)
        mask = model.interior(boost_name, -k)
        count = min(count, int(mask.sum()))
        for t in t_values:
            for a in (X1, X2, V_PLUS, V_MINUS):
                lhs = np.diag(Pk @ model.translation(t * a) @ Pk.T)
                rhs = np.diag(model.translation(Lk @ (t * a)))
                worst = max(worst, float(np.abs(lhs - rhs)[mask].max(initial=0.0)))
            for v, sign in ((V_PLUS, 1.0), (V_MINUS, -1.0)):
                lhs = np.diag(Pk @ model.translation(t * v) @ Pk.T)
                rhs = np.diag(model.translation(np.exp(sign * k * model.rapidity_step) * t * v))
                worst = max(worst, float(np.abs(lhs - rhs)[mask].max(initial=0.0)))
    return worst, count


def orbit_average(model, f, element_names=None, iterations=5000, tol=1e-13):
    """Average a function on samples over the registered permutations.

    Iterates the lazy averaging operator ``(f + sum_g (f o g + f o g^-1)) / (1 + 2|S|)``
    to its fixed point.
    """
    names = element_names or [n for n, e in model.elements.items() if e.kind != "center"]
    perms = [model.elements[n].perm for n in names]
    invs = []
    for p in perms:
        inv = np.empty_like(p)
        inv[p] = np.arange(len(p))
        invs.append(inv)
    g = np.asarray(f, dtype=complex).copy()
    for _ in range(iterations):
        acc = g.copy()
        for p, q in zip(perms, invs):
            acc = acc + g[p] + g[q]
        new = acc / (1 + 2 * len(perms))
        if np.abs(new - g).max() <= tol:
            return new
        g = new
    return g
