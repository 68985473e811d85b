"""``subsig`` command line.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 capability error.
Results go to stdout as JSON, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from .errors import (
    AssumptionViolated,
    CapacityError,
    ComponentError,
    DecompositionError,
    EnumerationRequired,
    FormulaSyntaxError,
    NormalizationUndefined,
    RouteDisagreement,
)
from .modules import (
    factorization_check,
    module_attribution,
    module_signature,
    subsignature_via_module,
)
from .montecarlo import (
    RNG_ALGORITHM,
    estimate_bp,
    estimate_module_attribution,
    estimate_subsignature,
)
from .signature import (
    barlow_proschan,
    failure_attribution,
    normalized_subsignature,
    probability_signature,
    subsignature_direct,
)
from .specfile import SpecError, format_set, format_set_key, load_spec
from .structure import members, signed_domination, validate_semicoherent

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2, 3

_FLOAT_TAG = "@@f17:"
_FLOAT_RE = re.compile('"' + _FLOAT_TAG + r'([^"]*)"')


class UsageError(Exception):
    pass


class CapabilityError(Exception):
    pass


class _Float17:
    __slots__ = ("value",)

    def __init__(self, value: float):
        self.value = float(value)


def _encode(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, _Float17):
        return _FLOAT_TAG + format(obj.value, ".17g")
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def dumps(obj) -> str:
    """JSON text; Fractions become "num/den", MC floats carry 17 significant digits."""
    text = json.dumps(_encode(obj), indent=2)
    return _FLOAT_RE.sub(lambda m: m.group(1), text)


def parse_set(text: str, n: int) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")] if text.strip() else []
    if not parts:
        raise UsageError("--set needs at least one component, e.g. --set 1,3")
    try:
        labels = sorted({int(p) for p in parts})
    except ValueError:
        raise UsageError(f"--set {text!r} is not a comma-separated list of integers") from None
    if labels[0] < 1 or labels[-1] > n:
        raise UsageError(f"--set {text!r} names components outside 1..{n}")
    return tuple(labels)


def _load(args):
    try:
        spec = load_spec(args.spec)
    except OSError as exc:
        raise UsageError(f"cannot read {args.spec}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"{args.spec} is not valid JSON: {exc}") from None
    report = validate_semicoherent(spec.phi)
    if not report.ok:
        raise SpecError("structure is not semicoherent: " + "; ".join(report.messages()))
    for i, dec in enumerate(spec.modules):
        if not dec.validated:
            raise SpecError(f"module {i} {list(dec.module)} does not decompose the structure")
    return spec


def _module(spec, index: int):
    if not spec.modules:
        raise UsageError("the spec declares no modules")
    if not 0 <= index < len(spec.modules):
        raise UsageError(f"--module {index} outside 0..{len(spec.modules) - 1}")
    return spec.modules[index]


def cmd_validate(args):
    spec = _load(args)
    return {
        "valid": True,
        "n": spec.n,
        "lifetime": spec.lifetime["kind"],
        "minimal_path_sets": [list(p) for p in spec.phi.path_sets()],
        "modules": [list(dec.module) for dec in spec.modules],
    }


def cmd_signature(args):
    spec = _load(args)
    sig = probability_signature(spec.phi, spec.exact)
    return {"signature": list(sig.values), "route_agreement": True}


def cmd_subsig(args):
    spec = _load(args)
    module = parse_set(args.set, spec.n)
    if args.normalized:
        return {"values": list(normalized_subsignature(spec.phi, spec.exact, module)), "normalized": True}
    return {"values": list(subsignature_direct(spec.phi, spec.exact, module).values)}


def cmd_bp(args):
    spec = _load(args)
    return {"values": list(barlow_proschan(spec.phi, spec.exact).values)}


def cmd_domination(args):
    spec = _load(args)
    d = signed_domination(spec.phi)
    return {format_set_key(members(a)): int(c) for a, c in d.items()}


def cmd_module(args):
    spec = _load(args)
    dec = _module(spec, args.module)
    dist = spec.exact
    report = factorization_check(dist, dec)
    factorization: dict = {"holds": report.holds}
    if report.holds:
        factorization["factors"] = list(report.factors)
        via = list(subsignature_via_module(dist, dec).values)
    else:
        j, a, j2, a2, b, r1, r2 = report.witness
        factorization["witness"] = {
            "j": j, "A": format_set(a), "j2": j2, "A2": format_set(a2), "B": format_set(b),
            "ratio": r1, "ratio2": r2,
        }
        via = None
    return {
        "module": list(dec.module),
        "attribution": module_attribution(dist, dec),
        "module_signature": list(module_signature(dec.chi, dist, dec.module).values),
        "factorization": factorization,
        "via_module": via,
    }


def _exact_or_none(fn):
    try:
        return fn()
    except (EnumerationRequired, CapacityError):
        return None


def _estimate_json(est, exact):
    lo = est.estimate - 4 * est.std_error
    hi = est.estimate + 4 * est.std_error
    return {
        "estimate": _Float17(est.estimate),
        "std_error": _Float17(est.std_error),
        "ci_4se": [_Float17(lo), _Float17(hi)],
        "count": est.count,
        "exact": exact,
        "within_4se": None if exact is None else est.within(exact),
    }


def cmd_mc(args):
    spec = _load(args)
    model = spec.continuous_model()
    if model is None:
        raise CapabilityError(
            f"lifetime kind {spec.lifetime['kind']!r} has no continuous model to sample"
        )
    exact_dist = _exact_or_none(model.exact)
    threads = args.threads
    if args.target == "subsig":
        if args.set is None:
            raise UsageError("--target subsig needs --set")
        module = parse_set(args.set, spec.n)
        ests = estimate_subsignature(spec.phi, module, model, args.samples, args.seed, threads)
        exact = None if exact_dist is None else subsignature_direct(spec.phi, exact_dist, module).values
        extra = {"set": list(module)}
    elif args.target == "bp":
        ests = estimate_bp(spec.phi, model, args.samples, args.seed, threads)
        exact = None if exact_dist is None else barlow_proschan(spec.phi, exact_dist).values
        extra = {}
    else:
        dec = _module(spec, args.module)
        ests = (estimate_module_attribution(dec, model, args.samples, args.seed, threads),)
        exact = None if exact_dist is None else (failure_attribution(spec.phi, exact_dist, dec.mask),)
        extra = {"module": list(dec.module)}
    if exact is None:
        exact = [None] * len(ests)
    return {
        "target": args.target,
        **extra,
        "samples": args.samples,
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
        "estimates": [_estimate_json(e, x) for e, x in zip(ests, exact)],
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subsig", description="Exact subsignatures of semicoherent systems.")
    parser.add_argument(
        "--threads", type=int, default=os.cpu_count() or 1,
        help="worker threads for simulation (results do not depend on it)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", help="system specification JSON file")
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, "check a spec file")
    add("signature", cmd_signature, "system signature")
    p = add("subsig", cmd_subsig, "M-signature for a component set")
    p.add_argument("--set", required=True, help="comma-separated components, e.g. 1,3")
    p.add_argument("--normalized", action="store_true", help="divide by Pr(T_C = T_M)")
    add("bp", cmd_bp, "Barlow-Proschan importance")
    add("domination", cmd_domination, "signed domination coefficients")
    p = add("module", cmd_module, "module attribution and factorization")
    p.add_argument("--module", type=int, default=0, help="index into the spec's modules (0-based)")
    p = add("mc", cmd_mc, "Monte Carlo estimates against exact values")
    p.add_argument("--target", choices=("subsig", "bp", "module"), default="subsig")
    p.add_argument("--set", help="components for --target subsig")
    p.add_argument("--module", type=int, default=0, help="module index for --target module")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.threads < 1:
        print("subsig: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "samples", 1) < 1:
        print("subsig: --samples must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = args.func(args)
    except UsageError as exc:
        print(f"subsig: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapabilityError, CapacityError, EnumerationRequired) as exc:
        print(f"subsig: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (
        SpecError, FormulaSyntaxError, ComponentError, DecompositionError,
        NormalizationUndefined, AssumptionViolated, RouteDisagreement,
    ) as exc:
        print(f"subsig: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(dumps(result) + "\n")
    return EXIT_OK
