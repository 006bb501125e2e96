"""Command-line front end.

Every command reads instance files, calls one library operation and prints a
single JSON report::

    {"command", "input_digest", "parameters", "result", "seed", "version"}

Keys are sorted and rationals are ``"p/q"`` strings, so equal inputs give
byte-identical reports.  Exit status: 0 on success, 1 when the operation
rejects its input (domain, capacity, infeasible, not-found, hypothesis or
precondition errors), 2 for unreadable or malformed input and bad flags.
"""

from __future__ import annotations

import argparse
import dataclasses
import enum
import hashlib
import math
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import __version__, core, formats, generators, helly, lp, nets, selftest, widths
from .errors import CapacityError, FuzzyVCError, InstanceError

# Exhaustive commands refuse instances beyond these sizes.
BUDGET_CAPS = {
    "small": {"ground": 12, "sets": 64},
    "medium": {"ground": 20, "sets": 512},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return formats.parse_rational(text) if "/" in text else Fraction(int(text))
    except (InstanceError, ValueError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from None


def _index_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {text!r}") from None


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an unsigned integer, got {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


# ---------------------------------------------------------------------------
# JSON conversion


def jsonable(value):
    if isinstance(value, Fraction):
        return formats.format_rational(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return jsonable(float(value))
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (frozenset, set)):
        return sorted(jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    try:
        return formats.to_obj(value)
    except TypeError:
        pass
    if dataclasses.is_dataclass(value):
        return {f.name: jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def write_atomic(path: str, data: bytes) -> None:
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".fuzzyvc-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# input handling


class Inputs:
    def __init__(self):
        self.canonical = []

    def load(self, path, kind, flag="--in"):
        if path is None:
            raise UsageError(f"{flag} is required")
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise InstanceError(f"cannot read {path}: {exc.strerror}") from exc
        inst = formats.parse_instance(data)
        kinds = (kind,) if isinstance(kind, str) else kind
        if inst.kind not in kinds:
            raise InstanceError(f"{flag} expects {' or '.join(kinds)}, got {inst.kind}", "type")
        self.canonical.append(formats.dump_instance(inst.value))
        return inst.value

    def digest(self):
        if not self.canonical:
            return None
        return hashlib.sha256(b"".join(self.canonical)).hexdigest()


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for {args.command}")


def _check_budget(args, ground, sets):
    caps = BUDGET_CAPS[args.budget]
    if ground > caps["ground"] or sets > caps["sets"]:
        raise CapacityError(f"{args.command} under budget {args.budget} handles at most "
                            f"{caps['ground']} points and {caps['sets']} sets")


def _measure_for(args, inputs, size):
    if args.measure is None:
        return widths.DiscreteMeasure.uniform(size) if size else None
    mu = inputs.load(args.measure, "measure", "--measure")
    if len(mu) != size:
        raise InstanceError(f"measure has {len(mu)} weights, expected {size}", "weights")
    return mu


# ---------------------------------------------------------------------------
# commands; each returns (parameters, result)


def cmd_vc(args, inputs):
    F = inputs.load(args.in_, "fuzzy_system")
    _check_budget(args, F.ground_size, len(F))
    return {}, core.vc_dimension(F)


def cmd_shatter(args, inputs):
    F = inputs.load(args.in_, "fuzzy_system")
    _check_budget(args, F.ground_size, len(F))
    ns = [args.n] if args.n is not None else range(F.ground_size + 1)
    return {"n": args.n}, {str(n): core.shatter_function(F, n) for n in ns}


def cmd_dual(args, inputs):
    F = inputs.load(args.in_, "fuzzy_system")
    _check_budget(args, len(F), F.ground_size)
    D = core.dual_system(F)
    return {}, {"system": D, "vc": core.vc_dimension(D)}


def cmd_slice(args, inputs):
    Q = inputs.load(args.in_, "function_class")
    _require(args, "r", "s")
    return {"r": args.r, "s": args.s}, core.slice_system(Q, args.r, args.s)


def cmd_fat(args, inputs):
    Q = inputs.load(args.in_, "function_class")
    _require(args, "eps")
    _check_budget(args, Q.point_count, len(Q))
    return {"eps": args.eps}, core.fat_shattering(Q, args.eps)


def cmd_vceps(args, inputs):
    Q = inputs.load(args.in_, "function_class")
    _require(args, "eps")
    _check_budget(args, Q.point_count, len(Q))
    return {"eps": args.eps}, core.vc_eps(Q, args.eps)


def cmd_disamb(args, inputs):
    F = inputs.load(args.in_, "fuzzy_system")
    mode = args.mode or "greedy"
    if mode == "minimal":
        _check_budget(args, F.ground_size, len(F))
    crisp = core.strong_disambiguation(F, mode)
    return {"mode": mode}, {"system": crisp, "size": len(crisp)}


def cmd_width(args, inputs):
    Q = inputs.load(args.in_, "function_class")
    mode = args.mode or "exact"
    params = {"mode": mode, "dist": args.dist, "n": args.n}
    if mode == "monte_carlo":
        params["samples"] = args.samples
    if args.n is None:
        est = widths.mean_width(Q.rows, args.dist, mode, args.samples, args.seed)
    else:
        mu = inputs.load(args.measure, "measure", "--measure") if args.measure else None
        params["measure"] = mu is not None
        est = widths.width_profile(Q, args.n, args.dist, mu, mode, args.samples, args.seed)
    return params, est


def cmd_approx(args, inputs):
    Q = inputs.load(args.in_, "function_class")
    mu = _measure_for(args, inputs, Q.point_count)
    _require(args, "eps")
    mode = args.mode or "exhaustive_min"
    xbar = widths.find_eps_approximation(Q, mu, args.eps, mode, args.size_cap, args.seed)
    return ({"eps": args.eps, "mode": mode, "size_cap": args.size_cap},
            {"sample": xbar, "size": len(xbar), "error": widths.approximation_error(xbar, Q, mu)})


def cmd_cover(args, inputs):
    Q = inputs.load(args.in_, "function_class")
    _require(args, "eps")
    xbar = args.points if args.points is not None else list(range(Q.point_count))
    method = args.method
    return ({"eps": args.eps, "points": xbar, "method": method, "step": args.step},
            widths.covering_number(Q, xbar, args.eps, method, args.step))


def cmd_bounds(args, inputs):
    kind = args.kind or "sauer"
    params = {"kind": kind}
    if kind == "sauer":
        _require(args, "d", "n")
        params.update(d=args.d, n=args.n)
        result = {"sum_of_powers": core.sauer_bound(args.d, args.n),
                  "binomial": core.binomial_sauer_bound(args.d, args.n)}
    elif kind == "covering":
        _require(args, "d", "n", "eps")
        params.update(d=args.d, n=args.n, eps=args.eps)
        result = widths.covering_bound(args.d, args.n, args.eps)
    elif kind == "deviation":
        _require(args, "n", "eps", "ncov")
        params.update(n=args.n, eps=args.eps, ncov=args.ncov)
        result = widths.deviation_bound(args.n, args.eps, args.ncov)
    elif kind == "approximation-size":
        _require(args, "d", "eps", "delta", "C")
        params.update(d=args.d, eps=args.eps, delta=args.delta, C=args.C)
        result = widths.approximation_size(args.eps, args.delta, args.d, args.C)
    elif kind == "net-size":
        _require(args, "d", "eps")
        C = args.C if args.C is not None else nets.DEFAULT_NET_CONSTANT
        params.update(d=args.d, eps=args.eps, C=C)
        result = nets.net_size(args.d, args.eps, C)
    else:
        raise UsageError(f"unknown bound {kind!r}; choose sauer, covering, deviation, "
                         "approximation-size or net-size")
    return params, result


def cmd_net(args, inputs):
    inst = inputs.load(args.in_, ("fuzzy_system", "function_class"))
    _require(args, "eps")
    if isinstance(inst, core.FunctionClass):
        _require(args, "r", "s")
        mu = _measure_for(args, inputs, inst.point_count)
        mode = args.mode or "exhaustive_min"
        cert = nets.net_from_approximation(inst, mu, args.r, args.s, args.eps, mode,
                                           args.size_cap, args.seed)
        return {"eps": args.eps, "r": args.r, "s": args.s, "mode": mode}, cert
    mu = _measure_for(args, inputs, inst.ground_size)
    mode = args.mode or "greedy"
    C = args.C if args.C is not None else nets.DEFAULT_NET_CONSTANT
    cert = nets.find_eps_net(inst, mu, args.eps, mode, C, args.seed)
    return {"eps": args.eps, "mode": mode, "C": C}, cert


def cmd_transversal(args, inputs):
    inst = inputs.load(args.in_, ("fuzzy_system", "set_system"))
    _check_budget(args, inst.ground_size, len(inst))
    if isinstance(inst, core.SetSystem):
        T = lp.minimum_transversal(inst)
        return {"method": "exact"}, {"transversal": T, "size": len(T)}
    mode = args.mode or "greedy"
    T, cert = nets.transversal_via_net(inst, mode, seed=args.seed)
    return {"method": "net", "mode": mode}, {"transversal": T, "size": len(T), "certificate": cert}


def cmd_fractional(args, inputs):
    inst = inputs.load(args.in_, ("fuzzy_system", "set_system"))
    systems = {"system": inst}
    if isinstance(inst, core.FuzzySetSystem):
        inner, outer = core.inner_outer(inst)
        systems = {"inner": inner, "outer": outer}
    result = {}
    for name, S in systems.items():
        tau, t_weights = lp.fractional_transversal(S)
        nu, p_weights = lp.fractional_packing(S)
        result[name] = {"tau_star": tau, "transversal_weights": t_weights,
                        "nu_star": nu, "packing_weights": p_weights}
    return {}, result


def cmd_helly(args, inputs):
    R = inputs.load(args.in_, ("fuzzy_relation", "fuzzy_system"))
    if isinstance(R, core.FuzzySetSystem):
        R = core.FuzzyRelation.from_system(R)
    _require(args, "k", "alpha")
    _check_budget(args, R.x_size, R.y_size)
    cert = helly.fractional_helly_witness(R, args.k, args.alpha, args.m_max)
    return {"k": args.k, "alpha": args.alpha, "m_max": args.m_max}, cert


def cmd_pq(args, inputs):
    Q = inputs.load(args.in_, "function_class")
    _require(args, "r", "t", "s", "p", "q")
    _check_budget(args, Q.point_count, len(Q))
    T, cert = helly.pq_pipeline(Q, args.r, args.t, args.s, args.p, args.q)
    return ({"r": args.r, "t": args.t, "s": args.s, "p": args.p, "q": args.q},
            {"transversal": T, "size": len(T), "certificate": cert})


_GEN_FLAGS = {
    "crisp_intervals": ("n", "k"),
    "fuzzy_margin_intervals": ("n", "k", "w"),
    "distance_functions": ("n", "k", "w"),
    "random_fuzzy": ("n", "k", "p_plus", "p_minus"),
    "random_function_matrix": ("n", "k", "grid"),
}


def cmd_gen(args, inputs):
    kind = args.kind
    if kind not in _GEN_FLAGS:
        raise UsageError(f"--kind must be one of {', '.join(generators.KINDS)}")
    params = {}
    for name in _GEN_FLAGS[kind]:
        v = getattr(args, name)
        if v is not None:
            if name == "w" and kind == "fuzzy_margin_intervals":
                if v.denominator != 1:
                    raise UsageError("--w must be an integer for fuzzy_margin_intervals")
                v = int(v)
            params[name] = v
    value = generators.generate(kind, args.seed, **params)
    return {"kind": kind, **params}, value


def cmd_selftest(args, inputs):
    return {"budget": args.budget}, selftest.run_selftest(args.seed, args.budget)


COMMANDS = {
    "vc": (cmd_vc, "VC dimension of a fuzzy system"),
    "shatter": (cmd_shatter, "shatter function values"),
    "dual": (cmd_dual, "dual fuzzy system and its VC dimension"),
    "slice": (cmd_slice, "fuzzy slice Q_{r,s} of a function class"),
    "fat": (cmd_fat, "fat-shattering dimension"),
    "vceps": (cmd_vceps, "eps-VC dimension"),
    "disamb": (cmd_disamb, "strong disambiguation"),
    "width": (cmd_width, "Rademacher or Gaussian width"),
    "approx": (cmd_approx, "search for an eps-approximation"),
    "cover": (cmd_cover, "covering or packing number"),
    "bounds": (cmd_bounds, "closed-form bound calculators"),
    "net": (cmd_net, "eps-net construction"),
    "transversal": (cmd_transversal, "transversal via a net, or exact minimum"),
    "fractional": (cmd_fractional, "fractional transversal and packing numbers"),
    "helly": (cmd_helly, "fractional Helly certificate"),
    "pq": (cmd_pq, "(p,q) transversal pipeline"),
    "gen": (cmd_gen, "seeded instance generator"),
    "selftest": (cmd_selftest, "seeded property suites"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("common")
    g.add_argument("--in", dest="in_", metavar="FILE")
    g.add_argument("--out", metavar="FILE")
    g.add_argument("--seed", type=_u64, default=0)
    g.add_argument("--budget", choices=sorted(BUDGET_CAPS), default="medium")
    g.add_argument("--mode")
    g.add_argument("--measure", metavar="FILE")
    for name in ("eps", "r", "s", "t", "alpha", "delta", "w", "p-plus", "p-minus", "step"):
        g.add_argument(f"--{name}", type=_rational, metavar="P/Q")
    for name in ("p", "q", "k", "n", "d", "ncov", "grid"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--points", type=_index_list, metavar="I,J,...")
    g.add_argument("--kind")
    g.add_argument("--method", choices=("internal", "grid", "packing"), default="internal")
    g.add_argument("--dist", choices=("rademacher", "gaussian"), default="rademacher")
    g.add_argument("--samples", type=int, default=100_000)
    g.add_argument("--size-cap", type=int, default=64)
    g.add_argument("--m-max", type=int, default=helly.DEFAULT_M_MAX)
    g.add_argument("--C", type=float)

    parser = _Parser(prog="fuzzyvc", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"fuzzyvc {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def run(argv=None) -> tuple:
    """Parse ``argv`` and execute; return ``(exit_code, report_bytes_or_None, message)``."""
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    inputs = Inputs()
    try:
        params, result = handler(args, inputs)
    except (InstanceError, UsageError) as exc:
        return 2, None, f"fuzzyvc {args.command}: invalid input: {exc}"
    except FuzzyVCError as exc:
        return 1, None, f"fuzzyvc {args.command}: {type(exc).__name__}: {exc}"
    report = {
        "command": args.command,
        "input_digest": inputs.digest(),
        "parameters": jsonable(params),
        "result": jsonable(result),
        "seed": args.seed,
        "version": __version__,
    }
    data = formats.canonical_json(report)
    if args.out:
        payload = formats.dump_instance(result) if args.command == "gen" else data
        write_atomic(args.out, payload)
    return 0, data, ""


def main(argv=None) -> int:
    code, data, message = run(argv)
    if data is not None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if message:
        print(message, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
