"""Command-line entry point: ``metasymp <subcommand> ...``.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import harness
from . import indices as ix
from . import symplectic as sp
from .errors import (DimensionError, DomainError, FixedPointError, MetasympError, NumericalFailure,
                     SymmetryError, UnknownSuite)
from .tolerances import DEFAULTS
from .weyl import basis

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fmt(x):
    if isinstance(x, (complex, np.complexfloating)):
        return f"{x.real:.12g}{x.imag:+.12g}i"
    if isinstance(x, (float, np.floating)):
        return f"{x:.12g}"
    if isinstance(x, np.ndarray):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


def _json_value(x):
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return {"re": x.real.tolist(), "im": x.imag.tolist()}
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return x


def _emit(args, result):
    """Print ``result`` (ordered dict of labelled values) as text or JSON."""
    if args.json:
        print(json.dumps(_json_value(result)))
        return
    for key, val in result.items():
        if isinstance(val, np.ndarray) and val.ndim == 2:
            print(f"{key}:")
            for row in val:
                print("  " + _fmt(row))
        elif isinstance(val, dict):
            print(f"{key}:")
            for k, v in val.items():
                print(f"  {k}: {_fmt(v)}")
        else:
            print(f"{key}: {_fmt(val)}")


def parse_n_range(text):
    """``"1..4"`` -> ``[1, 2, 3, 4]``; ``"1,3"`` -> ``[1, 3]``; ``"2"`` -> ``[2]``."""
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split(".."))
            out = list(range(lo, hi + 1))
        else:
            out = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --n value {text!r}; expected e.g. 1..4 or 1,2") from None
    if not out or min(out) < 1:
        raise UsageError(f"bad --n value {text!r}")
    return out


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("METASYMP_SEED")
    if env is None:
        return 1
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"METASYMP_SEED={env!r} is not an integer") from None


def _load(path):
    """Raw JSON object from ``path``."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    if not isinstance(obj, dict):
        raise UsageError(f"{path} must hold a JSON object")
    return obj


def _as_matrix_or_generator(obj):
    if not ({"P", "L", "Q"} <= obj.keys() or "rows" in obj):
        raise UsageError("input must hold either 'rows' or 'P', 'L', 'Q'")
    obj = {k: v for k, v in obj.items() if k != "nu"}
    return sp.load_json_object(obj)


# subcommands

def cmd_verify(args):
    seed = _seed(args)
    overrides = {}
    if args.basis is not None:
        overrides["basis"] = args.basis
    if args.grid_n is not None:
        overrides["grid_n"] = args.grid_n
    if args.grid_xmax is not None:
        overrides["grid_xmax"] = args.grid_xmax
    names = list(harness.SUITES) if args.suite == "all" else [args.suite]
    configs = []
    for name in names:
        suite = harness.SUITES.get(name)
        if suite is None:
            raise UnknownSuite(f"unknown suite {name!r}; registered: {', '.join(harness.SUITES)}")
        tols = {}
        if args.tol is not None:
            tols = {k: args.tol for k in suite.tolerances}
        configs.append(harness.SuiteConfig(
            name, n_range=parse_n_range(args.n) if args.n else None, trials=args.trials,
            seed=seed, tolerances=tols, overrides=overrides))
    reports = []
    for cfg in configs:
        rep = harness.run_suite(cfg)
        reports.append(rep)
        a = rep.aggregate
        status = "PASS" if rep.passed else "FAIL"
        print(f"{status} {rep.suite_name}: {a['passes']}/{a['trials']} max_residual={a['max_residual']:.12g} "
              f"rejections={a['rejections']} seconds={a['seconds']:.3g}", file=sys.stderr)
    payload = [r.to_dict() for r in reports]
    if args.out:
        with open(args.out, "w") as fh:
            if args.out.endswith(".csv"):
                fh.write(harness.reports_to_csv(reports))
            else:
                json.dump(payload, fh, indent=1)
    else:
        print(json.dumps(payload))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _index_of_generator(W, m_override):
    if m_override is not None:
        W = W.with_m(m_override)
    S = sp.matrix_from_generator(W)
    Wxx = sp.hessian_Wxx(W)
    inert = ix.inertia(Wxx)
    nu = ix.nu_from_generator(W)
    det = sp.det_S_minus_I(W)
    return {
        "m_choices": list(ix.maslov_choices(W.L)),
        "m": W.m,
        "inert_Wxx": inert.negatives,
        "nu": nu,
        "det_S_minus_I": float(det),
        "sign_det": int(np.sign(det)),
        "arg_det_relation_ok": bool(ix.check_arg_det_relation(S, nu)),
    }


def cmd_index(args):
    obj = _as_matrix_or_generator(_load(args.file))
    if isinstance(obj, sp.FreeGenerator):
        if not sp.det_clears(np.asarray(sp.matrix_from_generator(obj)) - np.eye(2 * obj.n)):
            raise FixedPointError("det(S - I) = 0: S has eigenvalue 1, no index nu is defined")
        result = _index_of_generator(obj, args.m)
        _emit(args, result)
        return EXIT_OK if result["arg_det_relation_ok"] else EXIT_FAIL
    S = np.asarray(obj)
    n = obj.n
    if not sp.det_clears(S - np.eye(2 * n)):
        raise FixedPointError("det(S - I) = 0: S has eigenvalue 1, no index nu is defined")
    if obj.is_free():
        result = _index_of_generator(sp.generator_from_free(S), args.m)
        _emit(args, result)
        return EXIT_OK if result["arg_det_relation_ok"] else EXIT_FAIL
    W1, W2 = sp.split_into_free_pair(S)
    if args.m is not None:
        W1 = W1.with_m(args.m)
    nu1, nu2 = ix.nu_from_generator(W1), ix.nu_from_generator(W2)
    M1 = sp.cayley_M(sp.matrix_from_generator(W1))
    M2 = sp.cayley_M(sp.matrix_from_generator(W2))
    nu = ix.compose_nu(nu1, nu2, M1, M2, n)
    det = float(np.linalg.det(S - np.eye(2 * n)))
    result = {
        "split": {"W1": sp.generator_to_json(W1), "W2": sp.generator_to_json(W2)},
        "nu1": nu1, "nu2": nu2, "nu": nu,
        "det_S_minus_I": det, "sign_det": int(np.sign(det)),
        "arg_det_relation_ok": bool(ix.check_arg_det_relation(S, nu)),
    }
    _emit(args, result)
    return EXIT_OK if result["arg_det_relation_ok"] else EXIT_FAIL


def cmd_factor(args):
    obj = _as_matrix_or_generator(_load(args.file))
    tol = DEFAULTS["split_product"] if args.tol is None else args.tol
    if isinstance(obj, sp.FreeGenerator):
        S = np.asarray(sp.matrix_from_generator(obj))
        factors = [np.asarray(f) for f in sp.free_factorization(obj)]
        prod = np.linalg.multi_dot(factors)
        res = float(np.max(np.abs(prod - S)))
        result = {"factors": [f.tolist() for f in factors], "product_residual": res}
    else:
        S = np.asarray(obj)
        W1, W2 = sp.split_into_free_pair(S)
        S1 = np.asarray(sp.matrix_from_generator(W1))
        S2 = np.asarray(sp.matrix_from_generator(W2))
        I = np.eye(S.shape[0])
        res = float(np.max(np.abs(S1 @ S2 - S)) / max(1.0, np.max(np.abs(S))))
        result = {
            "W1": sp.generator_to_json(W1), "W2": sp.generator_to_json(W2),
            "det_S1_minus_I": float(np.linalg.det(S1 - I)),
            "det_S2_minus_I": float(np.linalg.det(S2 - I)),
            "product_residual": res,
        }
    _emit(args, result)
    return EXIT_OK if res <= tol else EXIT_FAIL


def cmd_cayley(args):
    obj = _load(args.file)
    if "rows" not in obj:
        raise UsageError("input must hold 'rows'")
    A = np.asarray(obj["rows"], dtype=float)
    if args.inverse:
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2:
            raise DimensionError("M must be square of even size")
        if np.max(np.abs(A - A.T)) > DEFAULTS["cayley_symmetry"] * max(1.0, np.max(np.abs(A))):
            raise SymmetryError("M is not symmetric")
        S = np.asarray(sp.inverse_cayley(A))
        back = sp.cayley_M(S)
        res = float(np.max(np.abs(back - A)) / max(1.0, np.max(np.abs(A))))
        result = {"S": S, "roundtrip_residual": res}
    else:
        S = np.asarray(sp.SymplecticMatrix(A))
        M = sp.cayley_M(S)
        back = np.asarray(sp.inverse_cayley(M))
        res = float(np.max(np.abs(back - S)) / max(1.0, np.max(np.abs(S))))
        result = {"M": M, "symmetry_residual": float(np.max(np.abs(M - M.T))), "roundtrip_residual": res}
    _emit(args, result)
    tol = DEFAULTS["cayley_roundtrip"] if args.tol is None else args.tol
    return EXIT_OK if res <= tol else EXIT_FAIL


def cmd_trace_check(args):
    theta = args.theta
    nu = 3 if args.nu is None else args.nu
    Nb = 128 if args.basis is None else args.basis
    N = 2048 if args.grid_n is None else args.grid_n
    D = sp.MWDescriptor(basis.rotation(theta), nu)
    tr = basis.trace_mw(D, Nb, x_max=args.grid_xmax, N=N)
    exact = 1j ** nu / np.sqrt(abs(D.detSmI))
    err = abs(tr - exact)
    tol = DEFAULTS["trace"] if args.tol is None else args.tol
    _emit(args, {"theta": theta, "nu": nu, "N_basis": Nb, "trace": tr, "exact": exact, "error": err})
    return EXIT_OK if err <= tol else EXIT_FAIL


def _descriptor(obj):
    if "rows" not in obj or obj.get("nu") is None:
        raise UsageError("descriptor file must hold 'rows' and 'nu'")
    return sp.load_json_object(obj)


def cmd_compose(args):
    D1 = _descriptor(_load(args.first))
    D2 = _descriptor(_load(args.second))
    nu = ix.compose_nu(D1.nu, D2.nu, D1.M, D2.M, D1.n)
    result = {"nu": nu}
    ok = True
    if D1.n == 1:
        Nb = 64 if args.basis is None else args.basis
        N = 2048 if args.grid_n is None else args.grid_n
        found, res = basis.composition_oracle(D1, D2, Nb, x_max=args.grid_xmax, N=N)
        tol = DEFAULTS["compose"] if args.tol is None else args.tol
        ok = found == nu and res <= tol
        result.update({"nu_oracle": found, "oracle_residual": res})
    _emit(args, result)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="metasymp", description="Metaplectic operators in Weyl form: checks and tools.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp_, *flags):
        if "seed" in flags:
            sp_.add_argument("--seed", type=int, default=None, help="seed (fallback: METASYMP_SEED, then 1)")
        if "tol" in flags:
            sp_.add_argument("--tol", type=float, default=None, help="override the pass tolerance")
        if "grid" in flags:
            sp_.add_argument("--basis", type=int, default=None, help="number of oscillator basis functions")
            sp_.add_argument("--grid-n", type=int, default=None, help="grid points (power of two)")
            sp_.add_argument("--grid-xmax", type=float, default=None, help="grid half-width")
        sp_.add_argument("--json", action="store_true", help="JSON output")

    v = sub.add_parser("verify", help="run a verification suite or 'all'")
    v.add_argument("suite")
    v.add_argument("--n", default=None, help="half-dimensions, e.g. 1..4")
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--out", default=None, help="report path (.json or .csv); default JSON on stdout")
    common(v, "seed", "tol", "grid")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("index", help="Maslov-type indices of a matrix or generator file")
    i.add_argument("file")
    i.add_argument("--m", type=int, default=None, help="Maslov index of the (first) generator")
    common(i)
    i.set_defaults(func=cmd_index)

    f = sub.add_parser("factor", help="split into free factors / factor a free generator")
    f.add_argument("file")
    common(f, "tol")
    f.set_defaults(func=cmd_factor)

    c = sub.add_parser("cayley", help="Cayley-type symmetric matrix of S, or S from M with --inverse")
    c.add_argument("file")
    c.add_argument("--inverse", action="store_true")
    common(c, "tol")
    c.set_defaults(func=cmd_cayley)

    t = sub.add_parser("trace-check", help="trace of R_nu(rotation(theta)) vs the closed form")
    t.add_argument("--theta", type=float, required=True)
    t.add_argument("--nu", type=int, default=None, help="index (default 3)")
    common(t, "tol", "grid")
    t.set_defaults(func=cmd_trace_check)

    k = sub.add_parser("compose", help="index of a product of two descriptors")
    k.add_argument("first")
    k.add_argument("second")
    common(k, "tol", "grid")
    k.set_defaults(func=cmd_compose)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, UnknownSuite, ValueError) as exc:
        if isinstance(exc, DomainError):
            print(f"domain error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        msg = exc.args[0] if isinstance(exc, UnknownSuite) and exc.args else exc
        print(f"usage error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except (MetasympError, NumericalFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN if not isinstance(exc, NumericalFailure) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
