"""Command-line front end.

Exit codes: 0 holds / dominates / success, 1 fails / not dominating,
2 inconclusive (a sufficient criterion did not fire), 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import paths
from .criteria import (
    CRITERIA,
    FAIL,
    FAILS,
    HOLDS,
    MOMENT_VIOLATION,
    PASS,
    decide_exact,
    run_criterion,
)
from .exactpoly import ParseError, rational_parse
from .order import DOMINATES, EQUAL, Configuration, compare, extremal_classify, is_singleton
from .spline import InequalityProblem
from .testgen import InstanceSpec, sample_problem

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3

# criteria that decide the question exactly whenever they apply
EXACT_CRITERIA = {"k3", "endpoint"}


class InputError(ValueError):
    pass


def _rational(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InputError(f"expected a rational string, got {text!r}")
    try:
        return rational_parse(str(text))
    except ParseError as e:
        raise InputError(str(e)) from e


def _read_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: malformed JSON ({e})") from e
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from e


def problem_from_json(doc: dict) -> InequalityProblem:
    try:
        k = doc["k"]
        nodes = [(_rational(n["a"]), _rational(n["w"])) for n in doc["nodes"]]
    except (KeyError, TypeError) as e:
        raise InputError(f"problem file needs k and nodes with a, w: {e}") from e
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise InputError(f"k must be a positive integer, got {k!r}")
    domain = doc.get("domain")
    if domain is not None:
        if len(domain) != 2:
            raise InputError("domain is [lo, hi]")
        domain = [_rational(d) for d in domain]
    try:
        return InequalityProblem.from_pairs(nodes, k, domain)
    except ValueError as e:
        raise InputError(str(e)) from e


def problem_to_json(problem: InequalityProblem) -> dict:
    return {
        "k": problem.k,
        "nodes": [{"a": str(a), "w": str(w)} for a, w in problem.nodes],
        "domain": [str(problem.domain.lo), str(problem.domain.hi)],
    }


def load_problem(path) -> InequalityProblem:
    return problem_from_json(_read_json(path))


def load_config(path) -> Configuration:
    doc = _read_json(path)
    if not isinstance(doc, dict) or not isinstance(doc.get("values"), list):
        raise InputError(f'{path}: configuration files look like {{"values": ["7", "3", "2"]}}')
    return Configuration(tuple(_rational(v) for v in doc["values"]))


def _plain(value):
    """JSON-safe copy with every rational as a string."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class VerdictDocument:
    verdict: Optional[str] = None
    certificate: Optional[str] = None
    witness: Optional[str] = None
    moment_index: Optional[int] = None
    moment_value: Optional[str] = None
    criteria: list = field(default_factory=list)
    timing_ms: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "certificate": self.certificate,
            "witness": self.witness,
            "moment_index": self.moment_index,
            "moment_value": self.moment_value,
            "criteria": self.criteria,
            "timing": {"milliseconds": self.timing_ms},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, doc: dict) -> "VerdictDocument":
        return cls(
            verdict=doc.get("verdict"),
            certificate=doc.get("certificate"),
            witness=doc.get("witness"),
            moment_index=doc.get("moment_index"),
            moment_value=doc.get("moment_value"),
            criteria=list(doc.get("criteria", [])),
            timing_ms=doc.get("timing", {}).get("milliseconds", 0.0),
        )


def check_problem(problem: InequalityProblem, which: str = "all") -> tuple:
    """Run the exact decision and/or criteria; return ``(document, exit code)``."""
    start = time.perf_counter()
    doc = VerdictDocument()
    names = CRITERIA if which == "all" else () if which == "exact" else (which,)
    code = EXIT_INCONCLUSIVE
    if which in ("all", "exact"):
        v = decide_exact(problem)
        doc.verdict, doc.certificate = v.status, v.certificate
        doc.witness = None if v.witness is None else str(v.witness)
        doc.moment_index = v.moment_index
        doc.moment_value = None if v.moment_value is None else str(v.moment_value)
        code = {HOLDS: EXIT_OK, FAILS: EXIT_FAIL, MOMENT_VIOLATION: EXIT_INPUT}[v.status]
    for name in names:
        out = run_criterion(name, problem)
        doc.criteria.append({"criterion": out.criterion, "status": out.status, "detail": _plain(out.detail)})
        if which not in ("all", "exact"):
            if out.status == PASS:
                code = EXIT_OK
            elif out.status == FAIL and name in EXACT_CRITERIA:
                code = EXIT_FAIL
            elif out.status == MOMENT_VIOLATION:
                code = EXIT_INPUT
    doc.timing_ms = (time.perf_counter() - start) * 1000
    return doc, code


def _describe(doc: VerdictDocument) -> str:
    lines = []
    if doc.verdict is not None:
        line = f"verdict: {doc.verdict}"
        if doc.verdict == HOLDS:
            line += f" ({doc.certificate})"
        elif doc.verdict == FAILS:
            line += f" (witness x = {doc.witness})"
        else:
            line += f" (moment {doc.moment_index} = {doc.moment_value})"
        lines.append(line)
    for c in doc.criteria:
        detail = ", ".join(f"{k}={v}" for k, v in c["detail"].items() if k != "coefficients")
        lines.append(f"{c['criterion']}: {c['status']}" + (f" [{detail}]" if detail else ""))
    return "\n".join(lines)


def _check_file(path, which: str) -> tuple:
    try:
        return check_problem(load_problem(path), which)
    except InputError as e:
        return e, EXIT_INPUT


def cmd_check(args) -> int:
    target = Path(args.path)
    files = sorted(target.glob("*.json")) if target.is_dir() else [target]
    if not files:
        raise InputError(f"{target}: no .json problem files")
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda p: _check_file(p, args.criteria), files))
    batch = target.is_dir()
    codes = []
    for path, (doc, code) in zip(files, results):
        codes.append(code)
        if isinstance(doc, InputError):
            print(f"error: {doc}", file=sys.stderr)
            continue
        if args.json:
            text = doc.dumps()
            print(json.dumps({"file": str(path), **doc.to_json()}, sort_keys=True) if batch else text)
        else:
            print((f"== {path}\n" if batch else "") + _describe(doc))
    return max(codes)


def cmd_order(args) -> int:
    x, y = load_config(args.x), load_config(args.y)
    if x.n != y.n:
        raise InputError(f"configurations have lengths {x.n} and {y.n}")
    rel = compare(x, y, args.k)
    print(rel)
    return EXIT_OK if rel in (DOMINATES, EQUAL) else EXIT_FAIL


def cmd_extremal(args) -> int:
    x = load_config(args.path)
    pat = extremal_classify(x, args.k)
    print(f"role: {pat.role}")
    print("blocks: " + ",".join(str(b) for b in pat.block_lengths))
    if pat.witness_indices is not None:
        print("indices: " + ",".join(str(i) for i in pat.witness_indices))
    if args.singleton:
        try:
            print(f"singleton: {str(is_singleton(x, args.k)).lower()}")
        except ValueError as e:
            raise InputError(str(e)) from e
    return EXIT_OK


def cmd_path(args) -> int:
    a, b = load_config(args.a), load_config(args.b)
    fa = [float(v) for v in a.values]
    fb = [float(v) for v in b.values]
    if a.n != b.n:
        raise InputError(f"configurations have lengths {a.n} and {b.n}")
    try:
        if args.k == 3:
            res = paths.increasing_path_k3(fa, fb, steps=args.steps, tol=args.tol)
        elif a.n == args.k + 1:
            res = paths.increasing_path_nk1(fa, fb, args.k, steps=args.steps, tol=args.tol)
        else:
            raise InputError(f"paths are built for k = 3 or n = k + 1 only (got k = {args.k}, n = {a.n})")
    except paths.NotDominant as e:
        print(f"no path: {e}", file=sys.stderr)
        return EXIT_FAIL
    except paths.PathError as e:
        raise InputError(str(e)) from e
    if args.csv == "-":
        sys.stdout.write(res.to_csv())
    elif args.csv:
        Path(args.csv).write_text(res.to_csv())
    info = sys.stderr if args.csv == "-" else sys.stdout
    print(f"samples: {len(res.samples)}", file=info)
    print(f"conservation_error: {res.conservation_error:.3e}", file=info)
    print(f"monotonicity_margin: {res.monotonicity_margin:.3e}", file=info)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.n <= args.k:
        raise InputError("gen needs n > k")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for seed in range(args.seed, args.seed + args.count):
        problem = sample_problem(InstanceSpec(args.n, args.k, seed=seed))
        name = out / f"problem_n{args.n}_k{args.k}_seed{seed}.json"
        name.write_text(json.dumps(problem_to_json(problem), indent=2) + "\n")
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kconvex", description="Decide sum w_i f(a_i) >= 0 for all f with f^(k) >= 0.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide a problem file (or every .json in a directory)")
    p.add_argument("path")
    p.add_argument("--criteria", default="all", choices=("all", "exact") + CRITERIA)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("order", help="compare two configurations")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("extremal", help="maximal/minimal block pattern of a configuration")
    p.add_argument("path")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--singleton", action="store_true")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("path", help="increasing path from b up to a")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--steps", type=int, default=paths.DEFAULT_STEPS)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--csv", help="write samples as CSV to this file ('-' for stdout)")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("gen", help="write random zero-moment problem files")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
