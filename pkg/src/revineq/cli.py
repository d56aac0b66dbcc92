"""Command-line frontend.

Subcommands: classify, eval, check, jensen, derive, search, sweep.  Data
output (JSON, CSV) goes to stdout or ``--output``; diagnostics go to stderr
and never mix into the data stream.  Exit codes: 0 success, 1 malformed
input, 2 precondition violation, 3 arithmetic impossibility (division by
zero, no finite constant, no admissible ray).

Runs are reproducible: identical arguments (including ``--seed``) produce
byte-identical output.  Exact rationals serialize as ``p/q`` strings; the
default float precision is 50 digits, overridable with ``--precision`` or
the ``REVINEQ_PRECISION`` environment variable.

Sequence specs accepted by ``--sequence`` / ``--a`` / weight flags:

    ones[:L]  harmonic[:L]  step:K[:L]  power:E[:L]  random:SEED[:DIST[:L]]
    file:PATH  or inline JSON {"mode": ..., "values": [...]}

Lengths may be omitted where the command implies one (a form's upper index).
"""
from __future__ import annotations

import argparse
import json
import sys

from .certificates import (
    CERT_IDS,
    derive_constant,
    transform_geometric_constant,
    validate_certificate,
)
from .errors import (
    ArithmeticImpossibleError,
    InputFormatError,
    PreconditionError,
    ToolkitError,
)
from .forms import EQUIV, FORM_IDS, check_equiv, check_holds, eval_form, make_named_form, verify_jensen
from .numeric import as_fraction, format_number, set_precision
from .search import (
    exact_best_constant_p1,
    grid_bruteforce,
    search_best_constant,
    sweep,
)
from .sequences import (
    PowerWeight,
    Sequence,
    dyadic_bracket,
    geometric_constant,
    harmonic_sequence,
    is_quasi_lacunary_monotone,
    ones,
    power_sequence,
    random_decreasing,
    step_sequence,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_PRECONDITION = 2
EXIT_ARITHMETIC = 3


class _CliParser(argparse.ArgumentParser):
    """argparse that reports usage problems as malformed input (exit 1)."""

    def error(self, message):
        raise InputFormatError(message)


def resolve_sequence(spec: str, default_length: int | None = None, seed: int = 0) -> Sequence:
    """Materialize a sequence spec; lengths fall back to ``default_length``."""

    def need_length(explicit: str | None) -> int:
        if explicit is not None:
            return int(explicit)
        if default_length is None:
            raise InputFormatError(f"spec {spec!r} needs an explicit length here")
        return default_length

    if spec.startswith("{") or spec.startswith("["):
        return Sequence.from_json(spec)
    if spec.startswith("file:"):
        with open(spec[5:], "r", encoding="utf-8") as fh:
            return Sequence.from_json(fh.read())
    parts = spec.split(":")
    kind = parts[0]
    try:
        if kind in ("ones", "unit"):
            return ones(need_length(parts[1] if len(parts) > 1 else None))
        if kind == "harmonic":
            return harmonic_sequence(need_length(parts[1] if len(parts) > 1 else None))
        if kind == "step":
            if len(parts) < 2:
                raise InputFormatError("step spec is step:K[:L]")
            k = int(parts[1])
            return step_sequence(k, need_length(parts[2] if len(parts) > 2 else None))
        if kind == "power":
            if len(parts) < 2:
                raise InputFormatError("power spec is power:E[:L]")
            return power_sequence(as_fraction(parts[1]), need_length(parts[2] if len(parts) > 2 else None))
        if kind == "random":
            if len(parts) < 2:
                raise InputFormatError("random spec is random:SEED[:DIST[:L]]")
            dist = parts[2] if len(parts) > 2 and parts[2] else "uniform"
            return random_decreasing(
                need_length(parts[3] if len(parts) > 3 else None), int(parts[1]), dist
            )
    except ValueError as exc:
        raise InputFormatError(f"bad sequence spec {spec!r}: {exc}") from exc
    raise InputFormatError(f"unknown sequence spec {spec!r}")


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, output: str | None) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", output)


def _build_form(args, weight_length: int):
    """Assemble a form from CLI flags; T2 ids get explicit weights."""
    form_id = args.form
    explicit = form_id.startswith("T2")
    outer = inner = None
    alpha = lam_exp = None
    if explicit:
        outer_spec = args.lambda_weight or args.weights or "unit"
        inner_spec = args.gamma_weight or args.weights or "unit"
        outer = resolve_sequence(outer_spec, weight_length, args.seed)
        inner = resolve_sequence(inner_spec, weight_length, args.seed)
    else:
        if args.alpha is None:
            raise InputFormatError(f"form {form_id} needs --alpha")
        alpha = as_fraction(args.alpha)
        if args.lambda_exp is not None:
            lam_exp = as_fraction(args.lambda_exp)
    return make_named_form(
        form_id,
        p=as_fraction(args.p),
        n=args.n,
        m=args.m,
        alpha=alpha,
        lambda_exp=lam_exp,
        outer_weight=outer,
        inner_weight=inner,
    )


def _weight_length_for(n: int, m: int) -> int:
    return 2 ** (dyadic_bracket(n, m).M + 2)


def _add_form_flags(sub):
    sub.add_argument("--form", required=True, choices=FORM_IDS)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--p", required=True)
    sub.add_argument("--alpha", default=None)
    sub.add_argument("--lambda-exp", dest="lambda_exp", default=None)
    sub.add_argument("--weights", default=None, help="shorthand weight spec for both weights (e.g. unit)")
    sub.add_argument("--lambda-weight", dest="lambda_weight", default=None)
    sub.add_argument("--gamma-weight", dest="gamma_weight", default=None)


def _cmd_classify(args) -> int:
    length_hint = 2 ** (args.numax + 1)
    s = resolve_sequence(args.sequence, length_hint, args.seed)
    profile = is_quasi_lacunary_monotone(s, args.numax)
    payload = profile.to_json()
    if args.geo_mmax:
        payload["Kgeo"] = format_number(geometric_constant(s, args.geo_mmax))
    _emit_json(payload, args.output)
    return EXIT_OK


def _cmd_eval(args) -> int:
    form = _build_form(args, _weight_length_for(args.n, args.m))
    a = resolve_sequence(args.a, form.m, args.seed)
    result = eval_form(form, a)
    _emit_json(result.to_json(), args.output)
    return EXIT_OK


def _cmd_check(args) -> int:
    form = _build_form(args, _weight_length_for(args.n, args.m))
    a = resolve_sequence(args.a, form.m, args.seed)
    if form.direction == EQUIV:
        if args.c_lower is None or args.c_upper is None:
            raise InputFormatError("two-sided forms need --c-lower and --c-upper")
        holds = check_equiv(form, a, as_fraction(args.c_lower), as_fraction(args.c_upper))
    else:
        if args.constant is None:
            raise InputFormatError("--constant is required for one-sided forms")
        holds = check_holds(form, a, as_fraction(args.constant))
    payload = {"holds": holds, "eval": eval_form(form, a).to_json()}
    _emit_json(payload, args.output)
    return EXIT_OK


def _cmd_jensen(args) -> int:
    s = resolve_sequence(args.sequence, None, args.seed)
    holds, lhs, rhs = verify_jensen(s, as_fraction(args.alpha), as_fraction(args.beta))
    _emit_json(
        {"holds": holds, "lhs": format_number(lhs), "rhs": format_number(rhs)},
        args.output,
    )
    return EXIT_OK


def _cmd_derive(args) -> int:
    if args.form not in CERT_IDS:
        raise InputFormatError(f"derive supports {CERT_IDS}, got {args.form!r}")
    # Enforce the window precondition up front so a bad (n, m) names its multiple.
    multiple = 16 if args.form in ("T2_1", "T2_2") else 4
    if args.m < multiple * args.n:
        raise PreconditionError(
            f"precondition violated for {args.form}: requires m >= {multiple}n "
            f"(got n={args.n}, m={args.m})"
        )
    bracket = dyadic_bracket(args.n, args.m)
    wlen = 2 ** (bracket.M + 2)
    lam = resolve_sequence(args.lambda_weight or args.weights or "unit", wlen, args.seed)
    gam = resolve_sequence(args.gamma_weight or args.weights or "unit", wlen, args.seed)
    numax = bracket.M + 1
    lam_profile = is_quasi_lacunary_monotone(lam, numax)
    gam_profile = is_quasi_lacunary_monotone(gam, numax)
    kgeo = None
    if args.form in ("T2_2", "T2_4"):
        kgeo = transform_geometric_constant(lam, bracket.M)
    cert = derive_constant(
        args.form,
        lam_profile,
        gam_profile,
        p=as_fraction(args.p),
        kgeo=kgeo,
        max_window_ratio=args.max_ratio,
    )
    if cert.max_window_ratio is not None and args.m > cert.max_window_ratio * args.n:
        raise PreconditionError(
            f"window ({args.n}, {args.m}) exceeds the certificate's m/n cap "
            f"{cert.max_window_ratio}; raise --max-ratio"
        )
    payload = cert.to_json()
    if args.validate:
        report = validate_certificate(
            cert,
            args.validate,
            args.seed,
            windows=((args.n, args.m),),
            weights_factory=lambda window, rng: (lam, gam),
        )
        payload["validation"] = report.to_json()
    _emit_json(payload, args.output)
    return EXIT_OK


def _cmd_search(args) -> int:
    form = _build_form(args, _weight_length_for(args.n, args.m))
    if args.method == "exact":
        cstar, kstar = exact_best_constant_p1(form)
        payload = {
            "best_ratio": format_number(cstar),
            "kstar": kstar,
            "method": "step_exact_p1",
        }
    elif args.method == "grid":
        payload = grid_bruteforce(form, grid_levels=args.grid_levels).to_json()
    else:
        payload = search_best_constant(
            form, budget=args.budget, restarts=args.restarts, seed=args.seed
        ).to_json()
    _emit_json(payload, args.output)
    return EXIT_OK


def _sweep_weight(spec: str | None):
    if spec is None:
        return None
    if spec in ("unit", "ones"):
        return PowerWeight(as_fraction(0))
    if spec.startswith("power:"):
        return PowerWeight(as_fraction(spec.split(":")[1]))
    return resolve_sequence(spec, None)


def _cmd_sweep(args) -> int:
    n_values = [int(tok) for tok in args.n_values.split(",") if tok]
    result = sweep(
        args.family,
        n_values,
        args.m_multiplier,
        p=as_fraction(args.p),
        alpha=None if args.alpha is None else as_fraction(args.alpha),
        lambda_exp=None if args.lambda_exp is None else as_fraction(args.lambda_exp),
        outer_weight=_sweep_weight(args.lambda_weight or args.weights),
        inner_weight=_sweep_weight(args.gamma_weight or args.weights),
        a_spec=args.a,
        method=args.method,
        seed=args.seed,
        budget=args.budget,
        restarts=args.restarts,
        grid_levels=args.grid_levels,
    )
    csv_text = result.to_csv()
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(result.to_json(), fh, indent=2)
            fh.write("\n")
    if args.plot:
        from .plotting import render_sweep_figure

        title = f"{args.family}, p={args.p}, m={args.m_multiplier}n"
        render_sweep_figure(result, args.plot, title=title)
    _emit(csv_text, args.output)
    return EXIT_OK


def _add_common_flags(sub) -> None:
    # SUPPRESS keeps a subcommand-level flag from clobbering one given before
    # the subcommand name (both positions are accepted).
    sub.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                     help="decimal digits for float mode (>= 50)")
    sub.add_argument("--output", default=argparse.SUPPRESS,
                     help="write data output to this file instead of stdout")
    sub.add_argument("--seed", type=int, default=argparse.SUPPRESS)


def build_parser() -> _CliParser:
    parser = _CliParser(prog="revineq", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--precision", type=int, default=None, help="decimal digits for float mode (>= 50)")
    parser.add_argument("--output", default=None, help="write data output to this file instead of stdout")
    parser.add_argument("--seed", type=int, default=0)
    subs = parser.add_subparsers(dest="command", required=True)

    p_classify = subs.add_parser("classify", help="monotonicity direction and dyadic ratio constants")
    p_classify.add_argument("--sequence", required=True)
    p_classify.add_argument("--numax", type=int, required=True)
    p_classify.add_argument("--geo-mmax", dest="geo_mmax", type=int, default=None)
    _add_common_flags(p_classify)
    p_classify.set_defaults(fn=_cmd_classify)

    p_eval = subs.add_parser("eval", help="evaluate both sides of a named form")
    _add_form_flags(p_eval)
    p_eval.add_argument("--a", required=True)
    _add_common_flags(p_eval)
    p_eval.set_defaults(fn=_cmd_eval)

    p_check = subs.add_parser("check", help="check a form against a supplied constant")
    _add_form_flags(p_check)
    p_check.add_argument("--a", required=True)
    p_check.add_argument("--constant", default=None)
    p_check.add_argument("--c-lower", dest="c_lower", default=None)
    p_check.add_argument("--c-upper", dest="c_upper", default=None)
    _add_common_flags(p_check)
    p_check.set_defaults(fn=_cmd_check)

    p_jensen = subs.add_parser("jensen", help="verify the power-sum norm comparison")
    p_jensen.add_argument("--sequence", required=True)
    p_jensen.add_argument("--alpha", required=True)
    p_jensen.add_argument("--beta", required=True)
    _add_common_flags(p_jensen)
    p_jensen.set_defaults(fn=_cmd_jensen)

    p_derive = subs.add_parser("derive", help="derive an explicit admissible constant certificate")
    p_derive.add_argument("--form", required=True)
    p_derive.add_argument("--n", type=int, required=True)
    p_derive.add_argument("--m", type=int, required=True)
    p_derive.add_argument("--p", required=True)
    p_derive.add_argument("--weights", default=None)
    p_derive.add_argument("--lambda-weight", dest="lambda_weight", default=None)
    p_derive.add_argument("--gamma-weight", dest="gamma_weight", default=None)
    p_derive.add_argument("--max-ratio", dest="max_ratio", type=int, default=4096)
    p_derive.add_argument("--validate", type=int, default=0, help="also run this many validation trials")
    _add_common_flags(p_derive)
    p_derive.set_defaults(fn=_cmd_derive)

    p_search = subs.add_parser("search", help="estimate the sharp constant of a form")
    _add_form_flags(p_search)
    p_search.add_argument("--method", choices=("exact", "grid", "descent"), default="exact")
    p_search.add_argument("--grid-levels", dest="grid_levels", type=int, default=3)
    p_search.add_argument("--budget", type=int, default=40)
    p_search.add_argument("--restarts", type=int, default=4)
    _add_common_flags(p_search)
    p_search.set_defaults(fn=_cmd_search)

    p_sweep = subs.add_parser("sweep", help="constant estimates across windows m = c*n")
    p_sweep.add_argument("--family", required=True, choices=FORM_IDS)
    p_sweep.add_argument("--n-values", dest="n_values", required=True, help="comma-separated")
    p_sweep.add_argument("--m-multiplier", dest="m_multiplier", type=int, default=1)
    p_sweep.add_argument("--p", required=True)
    p_sweep.add_argument("--alpha", default=None)
    p_sweep.add_argument("--lambda-exp", dest="lambda_exp", default=None)
    p_sweep.add_argument("--a", default=None, help="fixed sequence spec instead of extremal search")
    p_sweep.add_argument("--weights", default=None, help="weight spec for explicit-weight families (unit, power:E)")
    p_sweep.add_argument("--lambda-weight", dest="lambda_weight", default=None)
    p_sweep.add_argument("--gamma-weight", dest="gamma_weight", default=None)
    p_sweep.add_argument("--method", choices=("auto", "exact", "grid", "descent"), default="auto")
    p_sweep.add_argument("--grid-levels", dest="grid_levels", type=int, default=3)
    p_sweep.add_argument("--budget", type=int, default=40)
    p_sweep.add_argument("--restarts", type=int, default=4)
    p_sweep.add_argument("--json-out", dest="json_out", default=None)
    p_sweep.add_argument("--plot", default=None, help="render a figure of the sweep to this file")
    _add_common_flags(p_sweep)
    p_sweep.set_defaults(fn=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.precision is not None:
            set_precision(args.precision)
        else:
            set_precision()
        return args.fn(args)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (json.JSONDecodeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ArithmeticImpossibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARITHMETIC
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
