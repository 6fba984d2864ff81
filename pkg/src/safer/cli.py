"""Command-line entry point.

Exit codes: 0 when the queried relation holds (safer, passes, valid),
1 when it does not, 2 on any input or validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .applications import (
    CoordinationGame,
    HedgingInstance,
    game_safety,
    hedge_check,
    quadratic_problem,
    security_crossing,
    security_safer,
)
from .applications.securities import make_security, security_from_dict
from .core import (
    Belief,
    SaferError,
    Tolerance,
    classify_states,
    parse_problem,
    serialize_problem,
)
from .crossing import (
    default_beliefs,
    induced_cdf,
    robust_single_cross,
    single_cross_test,
)
from .geometry import (
    polygon_rows,
    preference_region,
    region_included,
    region_rows,
    to_csv,
    transformed_region,
)
from .oracle import (
    CertificateError,
    ViolationCertificate,
    construct_violation,
    evaluate,
    falsify_safety,
    verify_certificate,
)
from .relation import is_safer, order_report, slope_report
from .transforms import parse_transform

SCHEMA = 1
DEFAULT_SEED = 42

QUADRATIC_ACTIONS = [round(0.05 + 0.09 * k, 2) for k in range(11)]
QUADRATIC_STATES = [round(0.013 + 0.1 * k, 3) for k in range(10)] + [1.0]


class CommandError(Exception):
    pass


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, report: dict, csv_text: str | None = None) -> None:
    if args.format == "csv":
        if csv_text is None:
            raise CommandError(f"{args.command} has no CSV output")
        text = csv_text
    else:
        command = " ".join(filter(None, (args.command, getattr(args, "app", None))))
        doc = {"schema": SCHEMA, "command": command, "seed": args.seed, **report}
        text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if args.out:
        _write_atomic(Path(args.out), text)
    else:
        sys.stdout.write(text)


def _tol(args) -> Tolerance:
    return Tolerance(args.tol_abs, args.tol_rel)


def _load_problem(path: str):
    try:
        return parse_problem(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc.strerror}") from exc


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise CommandError(f"malformed JSON in {path}: {exc}") from exc


def _pair(args):
    p = _load_problem(args.problem)
    return p, classify_states(p, args.a, args.b, _tol(args))


def _grid(c, args) -> np.ndarray:
    return default_beliefs(c, args.grid, args.seed)


def cmd_compare(args) -> int:
    p, c = _pair(args)
    tol = _tol(args)
    verdict = is_safer(c, tol)
    if not verdict.safer:
        try:
            cert = construct_violation(c, tol)
        except CertificateError:
            cert = falsify_safety(c, beliefs=_grid(c, args), seed=args.seed, tol=tol)
        if cert is not None:
            verdict = verdict.with_certificate(cert)
    crossing = robust_single_cross(c, _grid(c, args), tol)
    report = {"problem": args.problem, "verdict": verdict.to_dict(),
              "single_crossing": crossing.to_dict()}
    if c.n_states == 2:
        report["slopes"] = slope_report(c).to_dict()
    _emit(args, report)
    return 0 if verdict.safer else 1


def cmd_order(args) -> int:
    r = order_report(_load_problem(args.problem), tol=_tol(args))
    _emit(args, {"problem": args.problem, "order": r.to_dict()})
    return 0


def cmd_regions(args) -> int:
    p, c = _pair(args)
    if c.n_states > 3:
        raise CommandError("region export limited to ≤ 3 states")
    tol = _tol(args)
    phi = parse_transform(args.transform)
    r = preference_region(c)
    r_hat = transformed_region(c, phi, tol)
    inc = region_included(r, r_hat, tol)
    rows = region_rows(r, inc)
    if c.n_states == 3 and args.out and args.format == "csv":
        stem = Path(args.out)
        for tag, region in (("original", r), ("transformed", r_hat)):
            _write_atomic(stem.with_name(f"{stem.stem}.{tag}_polygon.csv"),
                          to_csv(polygon_rows(region)))
    report = {"problem": args.problem, "transform": phi.describe(), "inclusion": inc.to_dict(),
              "original": [[str(v) for v in row] for row in region_rows(r)],
              "transformed": [[str(v) for v in row] for row in region_rows(r_hat)]}
    if c.n_states == 3:
        report["polygons"] = {"original": r.polygon(), "transformed": r_hat.polygon()}
    _emit(args, report, to_csv(rows))
    return 0 if inc.included else 1


def _parse_belief(text: str, n: int) -> Belief:
    try:
        weights = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise CommandError(f"bad belief {text!r}") from exc
    if len(weights) != n:
        raise CommandError(f"belief needs {n} weights")
    return Belief(weights)


def cmd_crossing(args) -> int:
    p, c = _pair(args)
    tol = _tol(args)
    if args.belief:
        x = _parse_belief(args.belief, p.n_states)
        fa, fb = induced_cdf(p, args.a, x), induced_cdf(p, args.b, x)
        v = single_cross_test(fa, fb, tol)
        csv_text = "# " + args.a + "\n" + fa.to_csv() + "# " + args.b + "\n" + fb.to_csv()
        _emit(args, {"problem": args.problem, "belief": list(x.weights),
                     "verdict": v.to_dict()}, csv_text)
        return 0 if v.passed else 1
    r = robust_single_cross(c, _grid(c, args), tol)
    _emit(args, {"problem": args.problem, "single_crossing": r.to_dict()})
    return 0 if r.passed else 1


def cmd_falsify(args) -> int:
    p, c = _pair(args)
    cert = falsify_safety(c, args.transforms, _grid(c, args), args.seed, tol=_tol(args))
    _emit(args, {"problem": args.problem, "transforms": args.transforms,
                 "certificate": None if cert is None else cert.to_dict()})
    return 0 if cert is None else 1


def _find_certificate(doc):
    if isinstance(doc, dict):
        if doc.get("kind") == "certificate":
            return doc
        for v in doc.values():
            found = _find_certificate(v)
            if found is not None:
                return found
    return None


def cmd_verify(args) -> int:
    p = _load_problem(args.problem)
    cert = _find_certificate(_load_json(args.certificate))
    if cert is None:
        raise CommandError("no certificate found in the report")
    alpha, beta = p.row(cert["action_a"]), p.row(cert["action_b"])
    belief = Belief(tuple(float(w) for w in cert["belief"]))
    phi = parse_transform(cert["transform"])
    exps = evaluate(alpha.tolist(), beta.tolist(), belief, phi)
    vc = ViolationCertificate(belief, phi, exps, cert["action_a"], cert["action_b"])
    ok = verify_certificate(vc, alpha.tolist(), beta.tolist(), _tol(args))
    _emit(args, {"problem": args.problem, "valid": ok, "recomputed": vc.to_dict()})
    return 0 if ok else 1


def _security(token: str):
    if "=" in token:
        kind, _, param = token.partition("=")
        try:
            return make_security(kind, float(param))
        except ValueError as exc:
            raise CommandError(f"bad security parameter in {token!r}") from exc
    return security_from_dict(_load_json(token))


def cmd_securities(args) -> int:
    sa, sb = _security(args.sa), _security(args.sb)
    forward = security_safer(sa, sb)
    backward = security_safer(sb, sa)
    winner = sa.name if forward.safer and not backward.safer else (
        sb.name if backward.safer and not forward.safer else None)
    report = {"a": sa.to_dict(), "b": sb.to_dict(), "verdict": forward.to_dict(),
              "reverse": backward.to_dict(), "safer": winner,
              "crossing": security_crossing(sa, sb).to_dict()}
    _emit(args, report)
    return 0 if forward.safer else 1


def cmd_hedge(args) -> int:
    r = hedge_check(HedgingInstance.from_dict(_load_json(args.file)), _tol(args))
    _emit(args, {"file": args.file, "hedge": r.to_dict()})
    return 0 if r.hedges_better else 1


def cmd_game(args) -> int:
    if len(args.payoffs) == 1:
        g = CoordinationGame.from_dict(_load_json(args.payoffs[0]))
    elif len(args.payoffs) == 4:
        try:
            g = CoordinationGame(*(float(v) for v in args.payoffs))
        except ValueError as exc:
            raise CommandError("payoffs must be numbers: alpha1 beta1 alpha2 beta2") from exc
    else:
        raise CommandError("give a game file or four payoffs: alpha1 beta1 alpha2 beta2")
    r = game_safety(g)
    _emit(args, {"game": {"alpha1": g.alpha1, "beta1": g.beta1, "alpha2": g.alpha2,
                          "beta2": g.beta2}, "safety": r.to_dict()})
    return 0 if r.aa_safe else 1


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise CommandError(f"bad number list {text!r}") from exc


def cmd_quadratic(args) -> int:
    states = _floats(args.states) if args.states else QUADRATIC_STATES
    actions = _floats(args.actions) if args.actions else QUADRATIC_ACTIONS
    p = quadratic_problem(args.variant, states, actions)
    if args.problem_out:
        _write_atomic(Path(args.problem_out), serialize_problem(p) + "\n")
    r = order_report(p, tol=_tol(args))
    ranked = sorted([a, b] for (a, b), v in r.pair_matrix.items() if a != b and v.safer)
    _emit(args, {"variant": args.variant, "states": states, "actions": actions,
                 "ranked_pairs": ranked, "order": r.to_dict()})
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-abs", type=float, default=1e-9)
    common.add_argument("--tol-rel", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--grid", type=int, default=None,
                        help="belief grid resolution (points, subdivisions or samples)")
    common.add_argument("--transform", default="power:t=2",
                        help="identity | power:t=<t> | pwl:breaks=..;slopes=..;intercept=..")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="safer", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def pair_cmd(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("problem")
        sp.add_argument("a")
        sp.add_argument("b")
        sp.set_defaults(func=func)
        return sp

    pair_cmd("compare", cmd_compare, "decide whether a is safer than b")
    pair_cmd("regions", cmd_regions, "preference regions before and after a transform")
    pair_cmd("crossing", cmd_crossing, "single-crossing of induced payoff distributions").add_argument(
        "--belief", help="comma-separated weights; omit to scan the default grid")
    pair_cmd("falsify", cmd_falsify, "random search for a counterexample").add_argument(
        "--transforms", type=int, default=2000)

    sp = sub.add_parser("order", parents=[common], help="pairwise relation over all actions")
    sp.add_argument("problem")
    sp.set_defaults(func=cmd_order)

    sp = sub.add_parser("verify", parents=[common], help="re-check a certificate against a problem")
    sp.add_argument("problem")
    sp.add_argument("certificate", help="a report or certificate JSON file")
    sp.set_defaults(func=cmd_verify)

    apps = sub.add_parser("apps", help="applications").add_subparsers(dest="app", required=True)
    sp = apps.add_parser("securities", parents=[common], help="compare two securities")
    sp.add_argument("sa", help="kind=param (equity, debt, call) or a JSON file")
    sp.add_argument("sb")
    sp.set_defaults(func=cmd_securities)
    sp = apps.add_parser("hedge", parents=[common], help="sufficient hedging conditions")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_hedge)
    sp = apps.add_parser("game", parents=[common], help="safety of (a,a) in a coordination game")
    sp.add_argument("payoffs", nargs="+", help="alpha1 beta1 alpha2 beta2, or a JSON file")
    sp.set_defaults(func=cmd_game)
    sp = apps.add_parser("quadratic", parents=[common], help="quadratic-loss problems")
    sp.add_argument("variant", choices=("plain", "tweaked"))
    sp.add_argument("--states", help="comma-separated state grid")
    sp.add_argument("--actions", help="comma-separated action grid")
    sp.add_argument("--problem-out", help="also write the generated problem file")
    sp.set_defaults(func=cmd_quadratic)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.grid is not None and args.grid <= 0:
        parser.error("--grid must be positive")
    try:
        return args.func(args)
    except (SaferError, CommandError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
