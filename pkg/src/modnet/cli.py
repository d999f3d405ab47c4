"""Command line: ``modnet <group> <command> [options]``.

Exit codes: 0 every check passed, 1 a mathematical check failed, 2 the input
or the invocation was malformed.  Reports go to stdout (or ``--out``) as JSON
with sorted keys unless ``--format`` asks for ``csv`` or ``pretty``.
"""

import argparse
import csv
import io as _io
import os
import sys

import numpy as np

from . import __version__
from .errors import ExcludedOrbitError, ModnetError, NotStandardError
from .io import FormatError, dumps, load_json, matrix_from_json, matrix_to_json, subspace_from_json
from .io import spectrum_from_json, subspace_to_json, surrogate_from_json, to_plain
from .linalg import Antilinear, DEFAULT_TOL, hermitian_function, op_norm
from .lorentz import boost, check_sl2, covering_map, is_lorentz, rotation
from .modularity import model_mc
from .momentum import MassShellPoint, model_from_spec, reflect_decompose, reflect_residual
from .net import all_pass, bgl_construct, default_model, fermionic_representation
from .net import phase_comparison, scalar_representation, tensor_demonstrator, verify_axioms, WEDGES
from .spin import decompose_counterexample, decomposition_dimension
from .split import ModularSpectrum, classify_growth, compose_masses, trace_below_one
from .subspace import RealSubspace, make_standard, symplectic_complement

DEFAULT_SEED = 20240101


def _report(command, passed, result, args, message=None):
    out = {"command": command, "pass": bool(passed), "result": result,
           "tol": args.tol, "seed": args.seed, "version": __version__}
    if message:
        out["message"] = message
    return out


# -- subspace ------------------------------------------------------------------------

def _load_subspace(path):
    return subspace_from_json(load_json(path))


def cmd_subspace_check(args):
    n, vecs = _load_subspace(args.input)
    H = RealSubspace.span(n, vecs, tol=args.tol)
    res = {"dim": n, "real_dim": H.real_dim, "cyclic": H.is_cyclic(), "separating": H.is_separating()}
    try:
        make_standard(vecs, tol=args.tol)
    except NotStandardError as exc:
        res["standard"] = False
        res["reason"] = exc.reason
        return _report("subspace check", False, res, args, exc.reason)
    res["standard"] = True
    return _report("subspace check", True, res, args)


def cmd_subspace_modular(args):
    n, vecs = _load_subspace(args.input)
    H = make_standard(vecs, tol=args.tol)
    S, J, delta = H.tomita, H.J, H.delta
    eye = np.eye(n)
    resid = {
        "S_squared": op_norm(S.square() - eye),
        "J_delta_J": op_norm(J.conjugate(delta) - np.linalg.inv(delta)),
        "S_fixes_basis": max(float(np.linalg.norm(S(v) - v)) for v in vecs),
        "S_polar": op_norm(S.matrix - J.after(_sqrt(delta)).matrix),
    }
    res = {
        "eigenvalues": np.linalg.eigvalsh(delta).tolist(),
        "det_delta": float(np.linalg.det(delta).real),
        "J": matrix_to_json(J), "S": matrix_to_json(S), "delta": matrix_to_json(delta),
        "residuals": resid,
    }
    ok = max(resid.values()) <= args.tol * max(1.0, op_norm(delta))
    return _report("subspace modular", ok, res, args)


def _sqrt(delta):
    return hermitian_function(delta, "sqrt")


def cmd_subspace_complement(args):
    n, vecs = _load_subspace(args.input)
    H = RealSubspace.span(n, vecs, tol=args.tol)
    Hc = symplectic_complement(H)
    res = {"complement": subspace_to_json(Hc), "real_dim": Hc.real_dim,
           "double_complement_distance": Hc.complement().distance(H)}
    ok = res["double_complement_distance"] <= args.tol and Hc.real_dim == 2 * n - H.real_dim
    if H.is_standard():
        Hs = make_standard(vecs, tol=args.tol)
        res["adjoint_residual"] = op_norm(Hs.complement().tomita.matrix - Hs.tomita.adjoint().matrix)
        res["JH_distance"] = Hs.antilinear_image(Hs.J).distance(Hc)
        ok = ok and res["adjoint_residual"] <= 1e3 * args.tol and res["JH_distance"] <= 1e3 * args.tol
    return _report("subspace complement", ok, res, args)


# -- geometry --------------------------------------------------------------------------

def cmd_lorentz_cover(args):
    if args.input:
        A = matrix_from_json(load_json(args.input))
        if isinstance(A, Antilinear) or A.shape != (2, 2):
            raise FormatError("lorentz cover needs a linear 2x2 matrix")
        A = check_sl2(A)
    elif args.boost:
        A = boost(int(args.boost[0]), float(args.boost[1]))[0]
    elif args.rotation:
        A = rotation(int(args.rotation[0]), float(args.rotation[1]))[0]
    else:
        raise FormatError("give --input, --boost AXIS T or --rotation AXIS THETA")
    L = covering_map(A)
    res = {"A": matrix_to_json(A), "lorentz": L.tolist(), "proper_orthochronous": is_lorentz(L, 1e3 * args.tol)}
    return _report("lorentz cover", res["proper_orthochronous"], res, args)


def _floats(text, count):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise FormatError(f"expected {count} comma-separated numbers, got {text!r}") from None
    if len(vals) != count:
        raise FormatError(f"expected {count} comma-separated numbers, got {text!r}")
    return vals


def cmd_orbit_reflect(args):
    pt = MassShellPoint.from_spatial(args.mass, _floats(args.p, 3))
    try:
        t, theta = reflect_decompose(pt)
    except ExcludedOrbitError:
        raise ExcludedOrbitError("excluded null orbit (p0, 0, 0, ±p0): these orbits have null measure") from None
    r = reflect_residual(pt, t, theta)
    res = {"p": pt.p.tolist(), "t_p": t, "theta_p": theta, "residual": r}
    return _report("orbit reflect", r <= args.tol, res, args)


def cmd_mc(args):
    model = model_from_spec(load_json(args.model))
    out = model_mc(model, tol=args.tol, seed=args.seed)
    res = out.to_dict()
    res["dim"] = model.dim
    if out.certificate is not None:
        if args.certificate:
            with open(args.certificate, "w") as fh:
                fh.write(dumps(matrix_to_json(out.certificate)) + "\n")
            res["certificate_file"] = args.certificate
        else:
            res["certificate"] = matrix_to_json(out.certificate)
    msg = None if out.verdict is not None else "inconclusive: no clear singular-value gap"
    return _report("mc", out.verdict is True, res, args, msg)


# -- spin, nets, split -------------------------------------------------------------------

def cmd_spin_decompose(args):
    dec = decompose_counterexample(args.n, args.s, args.cutoff, mass=args.mass)
    expected = decomposition_dimension(args.n, args.s, args.cutoff)
    res = {"table": dec.to_table(), "dimension": dec.dimension(), "expected_dimension": expected}
    return _report("spin decompose", dec.dimension() == expected, res, args)


def _phase(ph):
    try:
        lam = complex(ph[0], ph[1]) if isinstance(ph, list) else complex(ph)
    except (TypeError, ValueError, IndexError):
        raise FormatError(f"'phase' must be a number or [re, im], got {ph!r}") from None
    if abs(abs(lam) - 1) > 1e-12:
        raise FormatError("'phase' must have modulus one")
    return lam


def net_from_spec(spec, base_dir="."):
    allowed = {"model", "fermionic", "J", "K", "phase", "wedges"}
    if not isinstance(spec, dict) or set(spec) - allowed:
        raise FormatError(f"net spec keys must be among {sorted(allowed)}")
    m = spec.get("model")
    if m is None:
        model = default_model()
    else:
        if isinstance(m, str):
            m = load_json(os.path.join(base_dir, m))
        model = model_from_spec(m)
    fermionic = bool(spec.get("fermionic", False))
    rep = fermionic_representation(model) if fermionic else scalar_representation(model)
    J = matrix_from_json(spec["J"]) if "J" in spec else rep.geometric_J()
    if not isinstance(J, Antilinear):
        raise FormatError("'J' must be an antilinear matrix record")
    K = matrix_from_json(spec["K"]) if "K" in spec else rep.boost_generator()
    if J.dim != rep.dim or K.shape[0] != rep.dim:
        raise FormatError(f"J and K must act on dimension {rep.dim}")
    if "phase" in spec:
        J = Antilinear(_phase(spec["phase"]) * J.matrix)
    net = bgl_construct(J, K, rep, fermionic, check=False)
    wedges = spec.get("wedges", list(WEDGES))
    bad = set(wedges) - set(WEDGES)
    if bad:
        raise FormatError(f"unregistered wedges {sorted(bad)}; the family is {list(WEDGES)}")
    return net


_CHECK_ALIASES = {"bw": "bw", "duality": "duality", "borchers": "borchers", "locality": "locality",
                  "isotony": "isotony", "covariance": "covariance", "positivity": "positivity",
                  "rs": "rs", "twist": "twist", "gamma": "gamma", "modular_inverse": "modular_inverse",
                  "zmap": "zmap_commutant", "zmap_commutant": "zmap_commutant", "fermi": "fermi"}


def cmd_net_verify(args):
    spec = load_json(args.spec) if args.spec else {}
    net = net_from_spec(spec, os.path.dirname(os.path.abspath(args.spec)) if args.spec else ".")
    checks = None
    if args.checks:
        try:
            checks = [_CHECK_ALIASES[c.strip()] for c in args.checks.split(",") if c.strip()]
        except KeyError as exc:
            raise FormatError(f"unknown check {exc.args[0]!r}") from None
    report = verify_axioms(net, checks, tol=args.tol)
    res = {"dim": net.dim, "checks": report}
    if "phase" in spec:
        base = net_from_spec({k: v for k, v in spec.items() if k != "phase"},
                             os.path.dirname(os.path.abspath(args.spec)))
        res["phase_comparison"] = phase_comparison(base, [_phase(spec["phase"])], tol=args.tol)[0]
    return _report("net verify", all_pass(report), res, args)


def cmd_net_demo(args):
    rep = tensor_demonstrator(omega=args.omega, t=args.t, tol=args.tol)
    res = rep.to_dict()
    # the demonstration succeeds when B-W holds for U_I and fails for U_V (omega != 0)
    ok = rep.bw_residual_I <= 1e3 * args.tol and rep.delta_residual <= 1e3 * args.tol
    return _report("net demo-counterexample", ok, res, args, res["verdict"])


def cmd_split_trace(args):
    spec = ModularSpectrum(spectrum_from_json(load_json(args.spectrum)))
    res = {"trace_below_one": trace_below_one(spec), "paired": spec.paired(), "size": len(spec.eigenvalues)}
    return _report("split trace", True, res, args)


def cmd_split_growth(args):
    pts = surrogate_from_json(load_json(args.surrogate))
    rep = compose_masses(pts, max_multiplicity=args.max_multiplicity)
    res = rep.to_dict()
    res["table_verdict"] = classify_growth(rep.table)[0]
    return _report("split growth", not rep.multiplicity_flags, res, args)


def cmd_suite(args):
    """Quick randomized property suite (seeded)."""
    from .subspace import random_standard, subspace_from_involution

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.count):
        n = int(rng.integers(1, 9))
        H = random_standard(n, rng)
        worst = max(worst, subspace_from_involution(H.tomita).distance(H))
    res = {"trials": args.count, "max_round_trip_distance": worst}
    return _report("suite", worst <= 1e-9, res, args)


# -- plumbing ----------------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance (default %(default)g)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed (default %(default)d)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="modnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="group", required=True)

    sub = top.add_parser("subspace", help="standard subspaces").add_subparsers(dest="command", required=True)
    for name, fn in (("check", cmd_subspace_check), ("modular", cmd_subspace_modular),
                     ("complement", cmd_subspace_complement)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--input", required=True)
        p.set_defaults(func=fn)

    lor = top.add_parser("lorentz", help="covering map").add_subparsers(dest="command", required=True)
    p = lor.add_parser("cover", parents=[common])
    p.add_argument("--input")
    p.add_argument("--boost", nargs=2, metavar=("AXIS", "T"))
    p.add_argument("--rotation", nargs=2, metavar=("AXIS", "THETA"))
    p.set_defaults(func=cmd_lorentz_cover)

    orb = top.add_parser("orbit", help="mass-shell orbits").add_subparsers(dest="command", required=True)
    p = orb.add_parser("reflect", parents=[common])
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--p", required=True, help='spatial momentum "p1,p2,p3"')
    p.set_defaults(func=cmd_orbit_reflect)

    p = top.add_parser("mc", parents=[common], help="modularity condition on an orbit model")
    p.add_argument("--model", required=True)
    p.add_argument("--certificate", help="write a failing certificate matrix here")
    p.set_defaults(func=cmd_mc)

    sp = top.add_parser("spin", help="spin content").add_subparsers(dest="command", required=True)
    p = sp.add_parser("decompose", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--cutoff", required=True)
    p.add_argument("--mass", type=float, default=1.0)
    p.set_defaults(func=cmd_spin_decompose)

    nt = top.add_parser("net", help="nets of standard subspaces").add_subparsers(dest="command", required=True)
    p = nt.add_parser("verify", parents=[common])
    p.add_argument("--spec")
    p.add_argument("--checks", help="comma list, e.g. bw,duality,borchers,locality")
    p.set_defaults(func=cmd_net_verify)
    p = nt.add_parser("demo-counterexample", parents=[common])
    p.add_argument("--omega", type=float, default=0.5)
    p.add_argument("--t", type=float, default=1.0)
    p.set_defaults(func=cmd_net_demo)

    spl = top.add_parser("split", help="split diagnostics").add_subparsers(dest="command", required=True)
    p = spl.add_parser("trace", parents=[common])
    p.add_argument("--spectrum", required=True)
    p.set_defaults(func=cmd_split_trace)
    p = spl.add_parser("growth", parents=[common])
    p.add_argument("--surrogate", required=True)
    p.add_argument("--max-multiplicity", type=int, default=8)
    p.set_defaults(func=cmd_split_growth)

    p = top.add_parser("suite", parents=[common], help="seeded randomized property suite")
    p.add_argument("--count", type=int, default=50)
    p.set_defaults(func=cmd_suite)
    return parser


def _table_rows(report):
    res = report["result"]
    if "table" in res and res["table"] and isinstance(res["table"][0], dict):
        return list(res["table"][0]), [[row[k] for k in row] for row in res["table"]]
    if "table" in res:
        return ["N", "trace"], res["table"]
    if "checks" in res:
        return ["axiom", "pass", "residual"], [[c["axiom"], c["pass"], c["residual"]] for c in res["checks"]]
    return None, None


def render(report, fmt):
    if fmt == "json":
        return dumps(report)
    plain = to_plain(report)
    if fmt == "csv":
        head, rows = _table_rows(plain)
        if head is None:
            raise FormatError("csv output is available for tabular reports only")
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(head)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    lines = [f"{plain['command']}: {'PASS' if plain['pass'] else 'FAIL'}"]
    if plain.get("message"):
        lines.append(f"  {plain['message']}")
    head, rows = _table_rows(plain)
    if head is not None:
        lines.append("  " + "  ".join(str(h) for h in head))
        lines += ["  " + "  ".join(str(x) for x in row) for row in rows]
    else:
        for k in sorted(plain["result"]):
            v = plain["result"][k]
            if not isinstance(v, (dict, list)) or (isinstance(v, list) and len(v) <= 8):
                lines.append(f"  {k}: {v}")
    return "\n".join(lines)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ModnetError as exc:
        report = _report(f"{args.group} {getattr(args, 'command', '')}".strip(), False, {}, args, str(exc))
        _emit(render(report, "json" if args.format == "csv" else args.format), args.out)
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        text = render(report, args.format)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(text, args.out)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
