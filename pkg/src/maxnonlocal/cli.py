"""Command-line front end.

Exit status is 0 on success, 1 when a verification fails and 2 on bad input.
JSON goes to stdout with sorted keys so that runs with a fixed seed are
byte-for-byte identical.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import catalog, cert, qis, reproduce
from .bellop import BellOperator, find_contradiction, local_bound, search_bell_operators
from .graph import FAMILIES, family
from .graph import generators as graph_generators
from .mns import solve
from .pauli import PauliString, apply_to_state
from .statevec import (
    chsh_fidelity_demo,
    dump_state,
    expectation,
    load_state,
    stabilizer_state,
)
from .stabilizer import CODE_NAMES, GeneratorSet, builtin_code


class InputError(Exception):
    pass


def _emit(obj, out: Path | None = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def load_bellop(ref: str) -> tuple[BellOperator, str | None]:
    """A builtin operator name or a Bell-operator JSON file; returns the builtin name if any."""
    if ref in catalog.OPERATORS:
        return catalog.operator(ref), ref
    return catalog.load_operator(_load_json(ref)), None


def load_state_ref(ref: str, b: BellOperator | None, builtin: str | None) -> np.ndarray:
    """``builtin`` (the operator's all-+1 state), ``zero`` or a state-dump JSON file."""
    if ref == "builtin":
        if b is None:
            raise InputError("'builtin' state needs an operator")
        return catalog.reference_state(builtin) if builtin else stabilizer_state(b.gs)
    if ref == "zero":
        if b is None:
            raise InputError("'zero' state needs an operator")
        v = np.zeros(1 << b.n, dtype=complex)
        v[0] = 1
        return v
    data = _load_json(ref)
    rows = data["amplitudes"] if isinstance(data, dict) else data
    n = data.get("n") if isinstance(data, dict) else None
    return load_state(rows, n)


def _generators_from_args(args) -> GeneratorSet:
    given = [a for a in ("family", "code", "generators") if getattr(args, a)]
    if len(given) != 1:
        raise InputError("give exactly one of --family, --code, --generators")
    if args.family:
        if args.n is None:
            raise InputError("--family needs --n")
        return graph_generators(family(args.family, args.n))
    if args.code:
        return builtin_code(args.code).generators
    return GeneratorSet(args.generators.split(","))


def _parse_complex_pair(text: str) -> tuple[complex, complex]:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError("--secret takes two comma-separated complex numbers")
    try:
        return tuple(complex(p.strip().replace(" ", "")) for p in parts)
    except ValueError:
        raise InputError(f"cannot parse secret {text!r}") from None


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"cannot parse noise grid {text!r}") from None


def _complex_list(v: np.ndarray) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in v]


# commands -------------------------------------------------------------------


def cmd_graph_gen(args) -> int:
    g = family(args.kind, args.n)
    _emit(g.to_dict(), args.out)
    return 0


def cmd_bell_build(args) -> int:
    b, _ = load_bellop(args.bellop)
    _emit(b.to_dict(), args.out)
    return 0


def cmd_bell_bound(args) -> int:
    b, _ = load_bellop(args.bellop)
    report = local_bound(b, use_z_plus_tip=args.z_plus_tip)
    data = report.to_dict()
    contra = find_contradiction(b)
    data["contradiction_terms"] = None if contra is None else [i + 1 for i in contra]
    _emit(data, args.out)
    return 0


def cmd_bell_search(args) -> int:
    gs = _generators_from_args(args)
    results = search_bell_operators(gs, args.max_m, args.min_degree)
    total = len(results)
    if args.limit is not None:
        results = results[: args.limit]
    _emit(
        {
            "count": total,
            "results": [
                {
                    "m": r.m,
                    "q": r.q,
                    "local_bound": r.local_bound,
                    "degree": "inf" if math.isinf(r.degree) else r.degree,
                    "terms": r.operator.term_text(),
                }
                for r in results
            ],
        },
        args.out,
    )
    return 0


def cmd_mns_solve(args) -> int:
    b, _ = load_bellop(args.bellop)
    _emit(solve(b).to_dict(), args.out)
    return 0


def cmd_sim_state(args) -> int:
    b, name = load_bellop(args.bellop)
    v = load_state_ref(args.state, b, name)
    if args.apply:
        v = apply_to_state(PauliString.from_str(args.apply), v)
    _emit({"n": b.n, "amplitudes": dump_state(v)}, args.out)
    return 0


def cmd_sim_expect(args) -> int:
    b, name = load_bellop(args.bellop)
    v = load_state_ref(args.state, b, name)
    if args.apply:
        v = apply_to_state(PauliString.from_str(args.apply), v)
    terms = [expectation(p, v) for p in b.pauli_terms]
    _emit({"terms": b.term_text(), "term_values": terms, "value": float(sum(terms)), "m": b.m}, args.out)
    return 0


def cmd_sim_chsh(args) -> int:
    demo = chsh_fidelity_demo(args.theta, args.phi)
    _emit(
        {
            "value": demo.value,
            "squared_overlap": demo.squared_overlap,
            "overlap": demo.overlap,
            "trace_distance": demo.trace_distance,
        },
        args.out,
    )
    return 0


def cmd_qis_run(args) -> int:
    secret = _parse_complex_pair(args.secret) if args.secret else qis.random_secret(np.random.default_rng(args.seed))
    forced = None
    if args.force_outcomes:
        if len(args.force_outcomes) != 4 or set(args.force_outcomes) - {"0", "1"}:
            raise InputError("--force-outcomes takes four bits, e.g. 0110")
        forced = [int(c) for c in args.force_outcomes]
    tr = qis.run_protocol(secret, outcomes=forced, seed=args.seed)
    _emit(tr.to_dict(), args.out)
    return 0 if abs(tr.recovered_fidelity - 1) < 1e-10 else 1


def cmd_qis_attack(args) -> int:
    if (args.eta is None) == (args.sweep is None):
        raise InputError("give exactly one of --eta, --sweep")
    if args.eta is not None:
        etas = [args.eta]
    else:
        if args.sweep < 2:
            raise InputError("--sweep needs at least 2 points")
        etas = list(np.linspace(0, qis.ETA_MAX, args.sweep))
    _emit([qis.attack(float(e)).to_dict() for e in etas], args.out)
    return 0


def cmd_cert_run(args) -> int:
    b, name = load_bellop(args.bellop)
    v = load_state_ref(args.state, b, name)
    if args.trials:
        acc, mean = cert.acceptance_frequency(b, v, args.shots, args.delta, args.trials, args.seed)
        _emit(
            {"trials": args.trials, "acceptance": acc, "mean_estimate": mean, "threshold": b.m - args.delta},
            args.out,
        )
        return 0
    _emit(cert.certify(b, v, args.shots, args.delta, args.seed).to_dict(), args.out)
    return 0


def cmd_cert_sweep(args) -> int:
    b, name = load_bellop(args.bellop)
    v = load_state_ref(args.state, b, name)
    curve = cert.soundness_sweep(
        b, _parse_grid(args.noise_grid), args.shots, args.trials, state=v, delta=args.delta, seed=args.seed
    )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "acceptance", "mean_estimate", "exact_value"])
    for pt in curve:
        w.writerow([repr(pt.p), repr(pt.acceptance), repr(pt.mean_estimate), repr(pt.exact_value)])
    if args.out is None:
        sys.stdout.write(buf.getvalue())
    else:
        args.out.write_text(buf.getvalue())
    return 0


def cmd_reproduce(args) -> int:
    overrides = {}
    for item in args.override or []:
        name, sep, path = item.partition("=")
        if not sep:
            raise InputError("--override takes NAME=FILE")
        overrides[name] = _load_json(path)
    rows = reproduce.reproduce(args.only, overrides)
    if args.format == "json":
        _emit([r.to_dict() for r in rows], args.out)
    else:
        text = reproduce.format_table(rows) + "\n"
        if args.out is None:
            sys.stdout.write(text)
        else:
            args.out.write_text(text)
    failed = [r for r in rows if not r.passed]
    for r in failed:
        print(f"failed: {r.group} / {r.name}", file=sys.stderr)
    return 1 if failed else 0


# parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="maxnonlocal", description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, help="write output to a file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def leaf(parent, name, func, help_text):
        sp = parent.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        return sp

    g = sub.add_parser("graph", help="graph files").add_subparsers(dest="action", required=True)
    sp = leaf(g, "gen", cmd_graph_gen, "emit a graph of a standard family")
    sp.add_argument("kind", choices=FAMILIES)
    sp.add_argument("n", type=int)

    bell = sub.add_parser("bell", help="Bell operators").add_subparsers(dest="action", required=True)
    sp = leaf(bell, "build", cmd_bell_build, "expand an operator into signed terms")
    sp.add_argument("--bellop", required=True, help="builtin name or JSON file")
    sp = leaf(bell, "bound", cmd_bell_bound, "exact local bound")
    sp.add_argument("--bellop", required=True)
    sp.add_argument("--z-plus-tip", action="store_true", help="fix every Z variable to +1 (heuristic)")
    sp = leaf(bell, "search", cmd_bell_search, "enumerate operators over a stabilizer group")
    sp.add_argument("--family", choices=FAMILIES)
    sp.add_argument("--n", type=int)
    sp.add_argument("--code", choices=CODE_NAMES)
    sp.add_argument("--generators", help="comma-separated Pauli strings")
    sp.add_argument("--max-m", type=int, required=True)
    sp.add_argument("--min-degree", type=float, default=1.0)
    sp.add_argument("--limit", type=int)

    mns = sub.add_parser("mns", help="maximally nonlocal subspaces").add_subparsers(dest="action", required=True)
    sp = leaf(mns, "solve", cmd_mns_solve, "solve the Bell conditions")
    sp.add_argument("--bellop", required=True)

    sim = sub.add_parser("sim", help="state-vector oracle").add_subparsers(dest="action", required=True)
    for name, func, text in (
        ("state", cmd_sim_state, "dump a state"),
        ("expect", cmd_sim_expect, "Bell value of a state"),
    ):
        sp = leaf(sim, name, func, text)
        sp.add_argument("--bellop", required=True)
        sp.add_argument("--state", default="builtin", help="builtin, zero or a state-dump file")
        sp.add_argument("--apply", help="Pauli string applied to the state first")
    sp = leaf(sim, "chsh", cmd_sim_chsh, "CHSH value and closeness to the singlet")
    sp.add_argument("--theta", type=float, default=math.pi / 2)
    sp.add_argument("--phi", type=float, default=0.0)

    q = sub.add_parser("qis", help="information splitting").add_subparsers(dest="action", required=True)
    sp = leaf(q, "run", cmd_qis_run, "one protocol run")
    sp.add_argument("--secret", help="mu,nu as complex numbers, e.g. 0.6,0.8j")
    sp.add_argument("--force-outcomes", help="four bits: alice, bob, bob, charlie")
    sp.add_argument("--seed", type=int, default=0)
    sp = leaf(q, "attack", cmd_qis_attack, "Bell value under a tapping attack")
    sp.add_argument("--eta", type=float)
    sp.add_argument("--sweep", type=int, help="number of evenly spaced angles in [0, pi/2]")

    c = sub.add_parser("cert", help="finite-sample certification").add_subparsers(dest="action", required=True)
    sp = leaf(c, "run", cmd_cert_run, "certify one state")
    sp.add_argument("--bellop", required=True)
    sp.add_argument("--state", default="builtin")
    sp.add_argument("--shots", type=int, default=10_000)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--trials", type=int, help="report an acceptance frequency over seeded trials")
    sp.add_argument("--seed", type=int, default=0)
    sp = leaf(c, "sweep", cmd_cert_sweep, "acceptance frequency against depolarizing noise (CSV)")
    sp.add_argument("--bellop", required=True)
    sp.add_argument("--state", default="builtin")
    sp.add_argument("--noise-grid", default="0,0.01,0.02,0.05,0.1,0.2,0.5,1")
    sp.add_argument("--shots", type=int, default=10_000)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("reproduce", help="pinned-number suite")
    sp.set_defaults(func=cmd_reproduce)
    sp.add_argument("--only", nargs="+", choices=reproduce.GROUPS)
    sp.add_argument("--override", action="append", help="NAME=FILE: replace a named operator")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
