"""Command line front end.

Exit status: 0 on success, 1 on domain errors (including malformed input),
2 on refusals (size guards, precompactness, non-Cauchy companions).  Errors
are written to stderr as a JSON object.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import corpus, kappa, modulus, regularity, selection
from .errors import DomainError, RefusalError
from .functions import FunctionSequence, Grid, SampledFunction
from .io import dumps, load_function, load_json
from .metric import MetricSpace, validate_space


def _parse_eps(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"bad eps list {text!r}") from None


def _g(args):
    return load_function(args.g, args.g_name) if args.g else None


def cmd_validate(args):
    data = load_json(args.space)
    space = MetricSpace.from_dict(data.get("space", data))
    violations = validate_space(space)
    return {"valid": not violations, "violations": [{"axiom": a, "at": list(ix)} for a, ix in violations]}


def cmd_nu(args):
    f = load_function(args.f, args.f_name)
    prof = modulus.nu_profile(f, _g(args), args.n_max, args.mode)
    return prof.to_csv() if args.format == "csv" else prof.to_dict()


def cmd_var(args):
    f = load_function(args.f, args.f_name)
    g = _g(args)
    out = {"jordan": modulus.jordan_variation(f), "oscillation": modulus.oscillation(f)}
    if g is not None:
        out["joint"] = modulus.joint_variation(f, g, args.mode)
        out["joint_oscillation"] = modulus.joint_oscillation(f, g, args.mode)
        out["uniform_distance"] = modulus.uniform_distance(f, g)
    return out


def cmd_evar(args):
    f = load_function(args.f, args.f_name)
    results = regularity.evar_profile(f, _parse_eps(args.eps))
    if args.format == "csv":
        return regularity.evar_csv(results)
    return {"results": [r.to_dict() for r in results]}


def cmd_kvar(args):
    f = load_function(args.f, args.f_name)
    g = _g(args)
    text = args.kappa
    spec_data = json.loads(text) if text.lstrip().startswith("{") else load_json(text)
    spec = kappa.KappaSpec.from_dict(spec_data)
    res = kappa.kappa_variation(f, g, spec, args.mode)
    out = {"kappa": spec.to_dict(), **res.to_dict()}
    if args.bound_n_max:
        out["bound"] = kappa.kappa_nu_bound_check(f, g, spec, args.bound_n_max, args.mode)
    return out


def cmd_classify(args):
    f = load_function(args.f, args.f_name)
    rep = regularity.regularity_profile(f, _g(args), args.n_max, args.mode, args.theta)
    return rep.to_csv() if args.format == "csv" else rep.to_dict()


def cmd_select(args):
    exp = load_json(args.experiment)
    try:
        space = MetricSpace.from_dict(exp["space"])
        grid = Grid.from_list(exp["grid"])
        seqs = exp["sequences"]
        seq_f = FunctionSequence.from_values(grid, space, seqs["f"])
    except KeyError as exc:
        raise DomainError(f"experiment is missing key {exc}") from None
    seq_g = FunctionSequence.from_values(grid, space, seqs["g"]) if seqs.get("g") else None
    n_max = int(exp.get("n_max", min(len(grid) - 1, 10)))
    J0 = int(exp.get("J0", len(seq_f) // 2))
    delta = float(exp.get("delta", 1e-3))
    mode = exp.get("mode")
    result = selection.extract_subsequence(seq_f, seq_g, delta, mode, J0=J0, n_max=n_max)
    mu = selection.estimate_mu(seq_f, seq_g, n_max, J0, mode)
    g_lim = None
    if seq_g is not None:
        g_lim = SampledFunction(grid, space, exp["g_limit"]) if "g_limit" in exp else seq_g[len(seq_g) - 1]
    post = selection.verify_postcondition(result, g_lim, mu, mode, seq_g)
    return {"extraction": result.to_dict(), "mu": mu.to_dict(), "postcondition": post}


def cmd_corpus(args):
    params = {}
    for item in args.param or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"--param expects key=value, got {item!r}")
        params[key] = value
    return corpus.ExampleDescriptor(args.example, params).build()


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with status 1 (status 2 is reserved for refusals)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(dumps({"error": "usage", "message": message}) + "\n")
        sys.exit(1)


def build_parser():
    p = _Parser(prog="modvar", description="Joint moduli of variation on sampled functions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def funcs(sp, with_g=True):
        sp.add_argument("--f", required=True, help="function-family JSON file ('-' for stdin)")
        sp.add_argument("--f-name", help="function name within the family (default: first)")
        if with_g:
            sp.add_argument("--g", help="family file for g (default: constant g)")
            sp.add_argument("--g-name")
            sp.add_argument("--mode", help="increment mode: sup, semigroup or norm")

    def output(sp, default):
        sp.add_argument("--format", choices=["json", "csv"], default=default)

    sp = sub.add_parser("validate", help="check metric axioms of a space")
    sp.add_argument("--space", required=True)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("nu", help="joint modulus of variation profile")
    funcs(sp)
    sp.add_argument("--n-max", type=int)
    output(sp, "csv")
    sp.set_defaults(func=cmd_nu)

    sp = sub.add_parser("var", help="Jordan and joint variation")
    funcs(sp)
    sp.set_defaults(func=cmd_var)

    sp = sub.add_parser("evar", help="epsilon-variation for a list of eps")
    funcs(sp, with_g=False)
    sp.add_argument("--eps", required=True, help="comma separated increasing list")
    output(sp, "csv")
    sp.set_defaults(func=cmd_evar)

    sp = sub.add_parser("kvar", help="joint kappa-variation")
    funcs(sp)
    sp.add_argument("--kappa", required=True, help="KappaSpec JSON text or file")
    sp.add_argument("--bound-n-max", type=int, default=0)
    sp.set_defaults(func=cmd_kvar)

    sp = sub.add_parser("classify", help="regularity class evidence for f ~ g")
    funcs(sp)
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--theta", type=float, default=regularity.DEFAULT_THETA)
    output(sp, "json")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("select", help="run subsequence extraction on an experiment descriptor")
    sp.add_argument("--experiment", required=True)
    sp.set_defaults(func=cmd_select)

    sp = sub.add_parser("corpus", help="generate worked examples")
    csub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    gen = csub.add_parser("gen")
    gen.add_argument("example", choices=corpus.EXAMPLE_IDS)
    gen.add_argument("--param", "--params", dest="param", action="extend", nargs="+", metavar="KEY=VALUE")
    gen.set_defaults(func=cmd_corpus)

    for sp in [*sub.choices.values(), gen]:
        if sp is not sub.choices["corpus"]:
            sp.add_argument("--out", help="write output here instead of stdout")
    return p


def run(argv=None):
    """Parse ``argv``, dispatch, and return ``(exit_status, text)``."""
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except RefusalError as exc:
        return 2, dumps({"error": "refusal", "message": str(exc), "details": exc.details})
    except (DomainError, OSError) as exc:
        return 1, dumps({"error": "domain", "message": str(exc)})
    text = result if isinstance(result, str) else dumps(result) + "\n"
    return 0, text


def main(argv=None):
    args_list = sys.argv[1:] if argv is None else list(argv)
    status, text = run(args_list)
    out_path = build_parser().parse_args(args_list).out
    if status:
        sys.stderr.write(text + "\n")
    elif out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
