"""Command-line front end.

Reads a square matrix from a JSON file ({"n": int, "rows": [[...], ...],
"kind": optional}) or a plain CSV of rows, runs one analysis subcommand, and
writes a single self-contained JSON report to stdout.  A one-line human
summary goes to stderr when it is a terminal.

Exit codes: 0 positive verdict / success, 1 negative verdict,
2 undetermined, 64 usage error, 65 input format error.
"""

import argparse
import dataclasses
import json
import os
import sys
import time

import numpy as np

from . import __version__, classify, embed, numkit, structure
from .errors import EmbedlabError
from .numkit import ToleranceConfig

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_UNDETERMINED = 2
EXIT_USAGE = 64
EXIT_FORMAT = 65

TOL_ENV_VAR = "EMBEDLAB_TOL"


class _UsageError(Exception):
    pass


class _FormatError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="embedlab", description=__doc__, add_help=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="matrix file (.json or .csv)")
        p.add_argument("--tol", type=float, default=None, help="entrywise tolerance override")
        return p

    add("classify", "matrix class membership flags")
    add("structure", "block triangular form and necessary conditions")
    add("expm", "matrix exponential")
    p = add("logm", "real branch logarithm")
    p.add_argument("--branch", default=None, help="comma-separated branch offsets")
    p = add("root", "primary nth root")
    p.add_argument("--n", type=int, required=True, help="root order")
    p = add("embed", "embeddability verdict")
    p.add_argument("--bound", choices=["israel", "paper"], default="israel")
    p.add_argument("--allow-perturb", action="store_true")
    p = add("infdiv", "strong infinite divisibility verdict")
    p.add_argument("--roots", default="2,3,5", help="comma-separated root orders to demonstrate")
    p.add_argument("--allow-perturb", action="store_true")
    return parser


def _load_matrix(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _FormatError(f"cannot read {path}: {exc}") from exc
    stripped = text.lstrip()
    try:
        if path.endswith(".json") or stripped.startswith("{"):
            doc = json.loads(text)
            rows = doc["rows"]
            n = int(doc.get("n", len(rows)))
            M = np.array(rows, dtype=float)
            if M.shape != (n, n):
                raise _FormatError(f"declared n={n} but rows have shape {M.shape}")
        else:
            rows = [
                [float(cell) for cell in line.split(",")]
                for line in text.splitlines()
                if line.strip()
            ]
            M = np.array(rows, dtype=float)
        return numkit.as_square_matrix(M)
    except _FormatError:
        raise
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise _FormatError(f"bad matrix file {path}: {exc}") from exc


def _tolerances(args) -> ToleranceConfig:
    entry_tol = ToleranceConfig().entry_tol
    env = os.environ.get(TOL_ENV_VAR)
    if env is not None:
        try:
            entry_tol = float(env)
        except ValueError as exc:
            raise _UsageError(f"{TOL_ENV_VAR} must be a float, got {env!r}") from exc
    if getattr(args, "tol", None) is not None:
        entry_tol = args.tol
    return ToleranceConfig(entry_tol=entry_tol)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"real": obj.real.tolist(), "imag": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if obj is None or isinstance(obj, (str, int, float)):
        return obj
    return repr(obj)


def _parse_int_list(text, expected_name):
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"bad {expected_name}: {text!r}") from exc


def _run_command(args, M, cfg):
    """Returns (payload dict, exit code)."""
    if args.command == "classify":
        report = classify.classify_matrix(M, cfg)
        return {"class_report": report}, EXIT_POSITIVE

    if args.command == "structure":
        decomp = structure.frobenius_form(M, cfg)
        conditions = structure.necessary_conditions(M, cfg)
        code = EXIT_POSITIVE if conditions.passed else EXIT_NEGATIVE
        return {"decomposition": decomp, "necessary_conditions": conditions}, code

    if args.command == "expm":
        return {"matrix": numkit.expm(M)}, EXIT_POSITIVE

    if args.command == "logm":
        eigen = numkit.eig(M, cfg)
        offsets = (
            _parse_int_list(args.branch, "--branch") if args.branch else [0] * eigen.n
        )
        if len(offsets) != eigen.n:
            raise _UsageError(f"--branch needs {eigen.n} offsets")
        candidate = numkit.logm_branch(eigen, offsets, cfg)
        real = numkit.as_real(candidate, cfg)
        if real is None:
            payload = {
                "error": "ComplexCandidate",
                "detail": "branch logarithm has a nonreal residue",
                "branch": offsets,
            }
            return payload, EXIT_NEGATIVE
        return {"matrix": real, "branch": offsets}, EXIT_POSITIVE

    if args.command == "root":
        return {"matrix": numkit.primary_root(M, args.n, cfg)}, EXIT_POSITIVE

    if args.command == "embed":
        mode = "israel_two_sided" if args.bound == "israel" else "paper_one_sided"
        report = embed.check_embeddable(
            M, cfg, bound_mode=mode, allow_perturb=args.allow_perturb
        )
        code = {
            embed.EMBEDDABLE: EXIT_POSITIVE,
            embed.NOT_EMBEDDABLE: EXIT_NEGATIVE,
            embed.UNDETERMINED: EXIT_UNDETERMINED,
        }[report.verdict]
        return {"embeddability": report}, code

    if args.command == "infdiv":
        orders = tuple(_parse_int_list(args.roots, "--roots"))
        report = embed.check_strong_inf_divisible(
            M, cfg, allow_perturb=args.allow_perturb, root_orders=orders
        )
        code = {
            embed.STRONGLY_INF_DIVISIBLE: EXIT_POSITIVE,
            embed.NOT_STRONGLY_INF_DIVISIBLE: EXIT_NEGATIVE,
            embed.UNDETERMINED: EXIT_UNDETERMINED,
        }[report.verdict]
        return {"divisibility": report}, code

    raise _UsageError(f"unknown command {args.command!r}")


def _summary_line(payload, code):
    for key in ("embeddability", "divisibility"):
        if key in payload:
            return f"verdict: {payload[key]['verdict']}"
    if "necessary_conditions" in payload:
        passed = payload["necessary_conditions"]["passed"]
        return f"necessary conditions: {'pass' if passed else 'fail'}"
    if "error" in payload:
        return f"error: {payload['error']}"
    return f"done (exit {code})"


def run_cli(argv) -> int:
    started = time.perf_counter()
    try:
        args = _build_parser().parse_args(argv)
        cfg = _tolerances(args)
        M = _load_matrix(args.file)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_FORMAT

    try:
        payload, code = _run_command(args, M, cfg)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EmbedlabError as exc:
        # numerical trouble is reported, not raised: verdict Undetermined
        payload = {
            "verdict": embed.UNDETERMINED,
            "error": type(exc).__name__,
            "detail": str(exc),
        }
        code = EXIT_UNDETERMINED

    report = {
        "command": list(argv),
        "tolerances": _jsonable(cfg),
        "input": {"n": int(M.shape[0]), "rows": M.tolist()},
        "result": _jsonable(payload),
        "version": __version__,
        "duration_s": time.perf_counter() - started,
    }
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    if sys.stderr.isatty():
        print(_summary_line(report["result"], code), file=sys.stderr)
    return code


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
