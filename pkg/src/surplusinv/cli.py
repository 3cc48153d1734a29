"""Command-line front end.

Exit codes: 0 value or pass, 1 law counterexample, 2 unknown name, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import acceptance as acc
from . import decomposition as dec
from . import duality as du
from . import extension as ext
from . import functionals as fn
from .orlicz import OrliczError, OrliczFunction, luxemburg_norm
from .reports import jsonable
from .workspace import InputError, UnknownName, Workspace, load

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_REF, EXIT_INPUT = 0, 1, 2, 3

LAWS = ("si", "si-pos", "s-additive", "equivalences", "band-stability", "convexity")


def _emit(payload: dict, table: bool, out) -> None:
    payload = jsonable(payload)
    if table:
        for key in sorted(payload):
            val = payload[key]
            out.write(f"{key}\t{json.dumps(val, sort_keys=True) if isinstance(val, (dict, list)) else val}\n")
    else:
        out.write(json.dumps(payload, sort_keys=True) + "\n")


def _workspace(args) -> Workspace:
    if not args.workspace:
        raise InputError("this command needs --workspace")
    return load(args.workspace)


def _seed(args, ws: Workspace | None) -> int:
    if args.seed is not None:
        return args.seed
    return ws.seed if ws is not None else 0


def cmd_eval(args):
    ws = _workspace(args)
    rho = ws.functional(args.functional)
    return EXIT_OK, {"value": rho(ws.position(args.position))}


def cmd_accept(args):
    ws = _workspace(args)
    A = ws.acceptance_set(args.set)
    return EXIT_OK, {"accepted": A.contains(ws.position(args.position))}


def cmd_check(args):
    ws = _workspace(args)
    seed = _seed(args, ws)
    trials = args.trials
    if args.law in ("si-pos", "s-additive"):
        rho = ws.functional(args.target)
        if args.law == "si-pos":
            rep = fn.check_si_subject_pos(rho, trials, seed)
        else:
            rep = fn.check_s_additive(rho, trials, seed)
    else:
        A = ws.acceptance_set(args.target)
        if args.law == "si":
            rep = acc.check_surplus_invariant(A, trials, seed)
        elif args.law == "equivalences":
            grid = np.linspace(-5, 5, 21) if args.grid else None
            rep = acc.check_equivalences(A, trials, seed, grid=grid)
        elif args.law == "band-stability":
            rep = acc.check_band_stability(A, trials, seed)
        else:
            rep = acc.check_convexity_via_D(A, trials, seed)
    return (EXIT_OK if rep.passed else EXIT_COUNTEREXAMPLE), rep.to_json()


def cmd_decompose(args):
    ws = _workspace(args)
    A = ws.acceptance_set(args.set)
    d = dec.decompose(A, args.tmax)
    out = d.to_json()
    code = EXIT_OK
    if args.verify:
        rep = dec.verify_reconstruction(A, d, args.trials, _seed(args, ws))
        out["reconstruction"] = rep.to_json()
        code = EXIT_OK if rep.passed else EXIT_COUNTEREXAMPLE
    return code, out


def _vector(text: str) -> np.ndarray:
    try:
        val = json.loads(text)
        return np.asarray(val, dtype=float)
    except (json.JSONDecodeError, TypeError, ValueError):
        raise InputError(f"expected a JSON number list, got {text!r}") from None


def cmd_polar(args):
    ws = _workspace(args)
    C = ws.solid_set(args.set)
    prior = ws.space.prior(args.prior)
    if args.z is not None:
        return EXIT_OK, {"member": du.polar_membership(C, _vector(args.z), prior)}
    if args.x is not None:
        rep = du.bipolar_check(C, _vector(args.x), prior)
        return (EXIT_OK if rep.passed else EXIT_COUNTEREXAMPLE), rep.to_json()
    try:
        cert = du.support_functional(C, ws.space.n, _seed(args, ws))
    except du.NotRadiallyBounded as e:
        return EXIT_COUNTEREXAMPLE, {"error": "not radially bounded", "detail": str(e)}
    Z = du.polar_positive_witness(C, prior, _seed(args, ws))
    return EXIT_OK, {**cert.to_json(), "polar_witness": Z}


def cmd_dual(args):
    ws = _workspace(args)
    rho = ws.functional(args.functional)
    if args.conjugate is not None:
        return EXIT_OK, {"conjugate": du.conjugate_rho(rho, _vector(args.conjugate), seed=_seed(args, ws))}
    if args.position is None:
        raise InputError("dual needs a position or --conjugate")
    res = du.biconjugate(rho, ws.position(args.position), args.domain, seed=_seed(args, ws))
    return EXIT_OK, res.to_json()


def cmd_extend(args):
    ws = load(args.workspace) if args.workspace else None
    if ws is not None:
        x = ws.sequence(args.sequence)
    else:
        try:
            x = ext.SeqPosition.from_json(json.loads(args.sequence))
        except json.JSONDecodeError:
            raise UnknownName(f"unknown sequence {args.sequence!r}") from None
    rho = ext.SeqFunctional(args.functional, args.w, args.q)
    tol = args.tol if args.tol is not None else 1e-9
    if args.alpha is not None:
        return EXIT_OK, {"value": ext.extend_s_additive(rho, x, args.alpha, tol)}
    return EXIT_OK, ext.extend(rho, x, tol).to_json()


def cmd_norm(args):
    ws = _workspace(args)
    phi = OrliczFunction.from_spec(args.orlicz)
    return EXIT_OK, {"value": luxemburg_norm(ws.position(args.position), phi, ws.space.prior(args.prior))}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workspace", "-w", help="workspace JSON file")
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--tol", type=float, default=None)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="table", action="store_false", help="JSON output (default)")
    fmt.add_argument("--table", dest="table", action="store_true", help="tab-separated key/value output")
    common.set_defaults(table=False)

    p = argparse.ArgumentParser(prog="surplusinv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate a risk functional")
    s.add_argument("functional")
    s.add_argument("position")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("accept", parents=[common], help="acceptance-set membership")
    s.add_argument("set")
    s.add_argument("position")
    s.set_defaults(run=cmd_accept)

    s = sub.add_parser("check", parents=[common], help="randomized law check")
    s.add_argument("law", choices=LAWS)
    s.add_argument("target")
    s.add_argument("--grid", action="store_true", help="exhaustive 21-point grid (equivalences)")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("decompose", parents=[common], help="E1/E2/E3 decomposition")
    s.add_argument("set")
    s.add_argument("--tmax", type=float, default=dec.T_MAX)
    s.add_argument("--verify", action="store_true", help="also verify the reconstruction")
    s.set_defaults(run=cmd_decompose)

    s = sub.add_parser("polar", parents=[common], help="polar, bipolar and supporting functional")
    s.add_argument("set")
    s.add_argument("--z", help="polar membership of this density")
    s.add_argument("--x", help="bipolar check at this position")
    s.add_argument("--prior", default=0)
    s.set_defaults(run=cmd_polar)

    s = sub.add_parser("dual", parents=[common], help="conjugate and biconjugate")
    s.add_argument("functional")
    s.add_argument("position", nargs="?")
    s.add_argument("--domain", choices=("negative", "negative_with_S"), default="negative_with_S")
    s.add_argument("--conjugate", help="evaluate the conjugate at this density")
    s.set_defaults(run=cmd_dual)

    s = sub.add_parser("extend", parents=[common], help="extension to unbounded sequences")
    s.add_argument("sequence", help="sequence name or JSON")
    s.add_argument("--functional", choices=("weighted_shortfall", "sup_shortfall"), default="weighted_shortfall")
    s.add_argument("--w", type=float, default=1.0)
    s.add_argument("--q", type=float, default=0.5)
    s.add_argument("--alpha", type=float, help="capital extension of {rho <= alpha}")
    s.set_defaults(run=cmd_extend)

    s = sub.add_parser("norm", parents=[common], help="Luxemburg norm")
    s.add_argument("position")
    s.add_argument("--orlicz", required=True, help="e.g. power:2 or linfty")
    s.add_argument("--prior", default=0)
    s.set_defaults(run=cmd_norm)
    return p


def _prior_arg(args):
    if hasattr(args, "prior") and isinstance(args.prior, str) and args.prior.isdigit():
        args.prior = int(args.prior)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    _prior_arg(args)
    if args.trials <= 0:
        _emit({"error": "--trials must be positive"}, args.table, out)
        return EXIT_INPUT
    if args.tol is not None and not args.tol > 0:
        _emit({"error": "--tol must be positive"}, args.table, out)
        return EXIT_INPUT
    try:
        code, payload = args.run(args)
    except UnknownName as e:
        _emit({"error": str(e.args[0] if e.args else e)}, args.table, out)
        return EXIT_REF
    except KeyError as e:
        _emit({"error": f"unknown name {e.args[0]!r}"}, args.table, out)
        return EXIT_REF
    except (InputError, OrliczError, ValueError) as e:
        _emit({"error": str(e)}, args.table, out)
        return EXIT_INPUT
    _emit(payload, args.table, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
