"""Batch command-line front end: constants, certify, sieve, sweep.

Machine-readable output first: single-document commands print one JSON
object, streaming commands print JSONL, and a human table sits behind
--table. Diagnostics and progress go to stderr only, so stdout pipes clean.

Exit codes: 0 pass, 1 mathematical violation found, 2 usage error,
3 environment/IO error (130 when interrupted; the checkpoint is written
first).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from .congruences import (
    WHICH_OMEGA,
    WHICH_XI,
    iter_decomposition,
    iter_dwork_S,
    iter_j_congruence,
    iter_lemma11,
    iter_lemma12,
    iter_optimality_witnesses,
    iter_theorem_congruence,
    iter_wolstenholme,
    iter_Y,
    vp3_probe,
)
from .constants import (
    DegenerateCase,
    omega,
    t_conjectured,
    theta,
    u_conjectured,
    xi,
)
from .series import (
    KIND_QLN,
    KIND_QN,
    KIND_QTILDE,
    canonical_q,
    integrality_check,
    ps_pow,
)
from .sieve import (
    BACKEND_MODULAR,
    BACKENDS,
    TARGET_H,
    TARGETS,
    CheckpointError,
    SieveCheckpoint,
    sieve_positive_valuation,
)

FORMAT_VERSION = 1
ORDER_ENV = "MIRRORINT_ORDER"

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INTERRUPT = 130

_SWEEP_CHECKS = (
    "theorem-congruence",
    "dworkS",
    "yms",
    "decomposition",
    "lemma11",
    "lemma12",
    "j-mod-p",
    "witness",
    "wolstenholme",
    "vp3-probe",
)


def _default_order() -> int:
    raw = os.environ.get(ORDER_ENV, "25")
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{ORDER_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{ORDER_ENV} must be positive")
    return value


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _outcome(command: str, params: dict, status: str, payload: dict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "command": command,
        "params": params,
        "status": status,
        "payload": payload,
    }


def _print_outcome(doc: dict, table: bool) -> None:
    if not table:
        print(_dump(doc))
        return
    print(f"command : {doc['command']}")
    print(f"status  : {doc['status']}")
    for key in sorted(doc["params"]):
        print(f"  {key:<10} {doc['params'][key]}")
    for key in sorted(doc["payload"]):
        print(f"  {key:<10} {doc['payload'][key]}")


def _csv_ints(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mirrorint",
        description="exact verification of harmonic-valuation and "
        "mirror-map integrality statements",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_const = sub.add_parser("constants", help="theta / xi / omega / t / u values")
    p_const.add_argument(
        "--which", required=True, choices=("theta", "xi", "omega", "t", "u")
    )
    p_const.add_argument("--N", type=int, required=True)
    p_const.add_argument("--k", type=int, default=1)
    p_const.add_argument("--table", action="store_true")
    p_const.set_defaults(func=_cmd_constants)

    p_cert = sub.add_parser(
        "certify", help="integrality certificate for a root of a canonical map"
    )
    p_cert.add_argument(
        "--map", required=True, choices=(KIND_QN, KIND_QLN, KIND_QTILDE)
    )
    p_cert.add_argument("--N", type=int, required=True)
    p_cert.add_argument("--k", type=int, default=1)
    p_cert.add_argument("--L", type=int, default=None)
    p_cert.add_argument("--order", type=int, default=None)
    p_cert.add_argument(
        "--root",
        default="auto",
        help="'auto' for the prescribed root, or an explicit positive integer",
    )
    p_cert.add_argument(
        "--root-scale",
        type=int,
        default=1,
        help="extra integer factor applied to the root (use to probe maximality)",
    )
    p_cert.add_argument("--table", action="store_true")
    p_cert.set_defaults(func=_cmd_certify)

    p_sieve = sub.add_parser(
        "sieve", help="stream N with positive valuation of H_N or H_N - 1"
    )
    p_sieve.add_argument("--p", type=int, required=True)
    p_sieve.add_argument("--max", type=int, required=True)
    p_sieve.add_argument("--target", choices=TARGETS, default=TARGET_H)
    p_sieve.add_argument("--backend", choices=BACKENDS, default=BACKEND_MODULAR)
    p_sieve.add_argument("--out", default="-", help="JSONL destination ('-' = stdout)")
    p_sieve.add_argument(
        "--checkpoint",
        default=None,
        help="checkpoint path; loaded when present, written on exit/interrupt",
    )
    p_sieve.add_argument("--progress", action="store_true")
    p_sieve.set_defaults(func=_cmd_sieve)

    p_sweep = sub.add_parser("sweep", help="grid-run a congruence check, JSONL out")
    p_sweep.add_argument("--check", required=True, choices=_SWEEP_CHECKS)
    p_sweep.add_argument("--p", type=_csv_ints, default=None, help="primes, csv")
    p_sweep.add_argument("--pmax", type=int, default=None)
    p_sweep.add_argument("--pmin", type=int, default=5)
    p_sweep.add_argument("--N", type=int, default=None, help="single N (vp3-probe)")
    p_sweep.add_argument("--Nmax", type=int, default=None)
    p_sweep.add_argument("--kmax", type=int, default=2)
    p_sweep.add_argument("--Kmax", type=int, default=8)
    p_sweep.add_argument("--K", type=int, default=None, help="single K (decomposition)")
    p_sweep.add_argument("--smax", type=int, default=2)
    p_sweep.add_argument("--mmax", type=int, default=9)
    p_sweep.add_argument("--jmax", type=int, default=6)
    p_sweep.add_argument("--Jmax", type=int, default=500)
    p_sweep.add_argument("--summax", type=int, default=25, help="bound on a + K*p")
    p_sweep.add_argument("--which", default=None)
    p_sweep.add_argument("--out", default="-")
    p_sweep.set_defaults(func=_cmd_sweep)

    return parser


def _cmd_constants(args) -> int:
    params = {"which": args.which, "N": args.N, "k": args.k}
    try:
        if args.which == "theta":
            payload = {"value": str(theta(args.N))}
        elif args.which == "xi":
            b = xi(args.N)
            payload = {"value": str(b.product), "breakdown": b.to_json()}
        elif args.which == "omega":
            b = omega(args.N)
            payload = {"value": str(b.product), "breakdown": b.to_json()}
        elif args.which == "t":
            value, integral = t_conjectured(args.N, args.k)
            payload = {"value": str(value), "integral": integral}
        else:
            value, integral = u_conjectured(args.N)
            payload = {"value": str(value), "integral": integral}
    except DegenerateCase as exc:
        _print_outcome(
            _outcome("constants", params, "degenerate", {"reason": str(exc)}),
            args.table,
        )
        return EXIT_PASS
    _print_outcome(_outcome("constants", params, "pass", payload), args.table)
    return EXIT_PASS


def _auto_root(map_kind: str, N: int, k: int, L: int | None) -> Fraction:
    fact_k = Fraction(math.factorial(N)) ** k
    if map_kind == KIND_QLN:
        if L is None:
            raise ValueError("qLN requires --L")
        if L == N:
            return xi(N).product * fact_k
        if L > N:
            raise ValueError("no prescribed root for L > N; pass --root explicitly")
        return fact_k / theta(L)
    if map_kind == KIND_QN:
        return omega(N).product * fact_k * k * N
    return omega(N).product * fact_k


def _cmd_certify(args) -> int:
    order = args.order if args.order is not None else _default_order()
    if order < 1:
        raise ValueError("--order must be positive")
    if args.root_scale < 1:
        raise ValueError("--root-scale must be a positive integer")
    params = {
        "map": args.map,
        "N": args.N,
        "k": args.k,
        "L": args.L,
        "order": order,
        "root": args.root,
        "root_scale": args.root_scale,
    }
    series = canonical_q(args.map, args.N, args.k, L=args.L, order=order)
    if series.is_constant_one():
        payload = {"reason": "the map reduces to z: every root is trivially integral"}
        _print_outcome(_outcome("certify", params, "degenerate", payload), args.table)
        return EXIT_PASS

    if args.root == "auto":
        base = _auto_root(args.map, args.N, args.k, args.L)
        if base.denominator != 1 or base <= 0:
            payload = {
                "reason": "prescribed root is not a positive integer",
                "root": str(base),
            }
            _print_outcome(
                _outcome("certify", params, "violation", payload), args.table
            )
            return EXIT_VIOLATION
        root = int(base)
    else:
        try:
            root = int(args.root)
        except ValueError as exc:
            raise ValueError("--root must be 'auto' or an integer") from exc
        if root < 1:
            raise ValueError("--root must be positive")
    root *= args.root_scale

    powered = ps_pow(series, Fraction(1, root))
    witness = integrality_check(powered)
    if witness is None:
        payload = {"root": str(root), "certified_to_order": order}
        _print_outcome(_outcome("certify", params, "pass", payload), args.table)
        return EXIT_PASS
    payload = {
        "root": str(root),
        "witness_index": witness,
        "witness_coefficient": str(powered[witness]),
    }
    _print_outcome(_outcome("certify", params, "violation", payload), args.table)
    return EXIT_VIOLATION


def _cmd_sieve(args) -> int:
    checkpoint = None
    if args.checkpoint and os.path.exists(args.checkpoint):
        with open(args.checkpoint, "r", encoding="utf-8") as fh:
            checkpoint = SieveCheckpoint.load(fh.read())
    run = sieve_positive_valuation(
        args.p, args.max, target=args.target, backend=args.backend, checkpoint=checkpoint
    )

    def write_checkpoint() -> None:
        if args.checkpoint:
            with open(args.checkpoint, "w", encoding="utf-8") as fh:
                fh.write(run.checkpoint().dump() + "\n")

    out = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8")
    conjecture_hits = 0
    emitted = 0
    try:
        for record in run:
            out.write(record.to_line() + "\n")
            emitted += 1
            if record.v_at_least:
                conjecture_hits += 1
                print(
                    f"CONJECTURE-LEVEL HIT: v_{args.p}(H_{record.N}"
                    f"{' - 1' if record.target != TARGET_H else ''}) >= {record.v}",
                    file=sys.stderr,
                )
            if args.progress and emitted % 50 == 0:
                print(f"... {emitted} records, N={record.N}", file=sys.stderr)
        out.flush()
    except KeyboardInterrupt:
        out.flush()
        write_checkpoint()
        print(f"interrupted at N={run.last_N}; checkpoint saved", file=sys.stderr)
        return EXIT_INTERRUPT
    finally:
        if out is not sys.stdout:
            out.close()
    write_checkpoint()
    print(
        f"sieve complete: p={args.p} target={args.target} N<={args.max}, "
        f"{emitted} records",
        file=sys.stderr,
    )
    return EXIT_VIOLATION if conjecture_hits else EXIT_PASS


def _sweep_rows(args):
    check = args.check
    if check == "theorem-congruence":
        which = args.which or WHICH_XI
        if which not in (WHICH_XI, WHICH_OMEGA):
            raise ValueError("--which must be Xi or Omega")
        return iter_theorem_congruence(
            args.p or [2, 3, 5, 7], args.Nmax or 8, args.kmax, args.summax, which
        )
    if check == "dworkS":
        return iter_dwork_S(
            args.p or [2, 3, 5], args.Nmax or 5, args.kmax, args.Kmax, args.smax
        )
    if check == "yms":
        return iter_Y(
            args.p or [2, 3, 5], args.Nmax or 5, args.kmax, args.Kmax, args.smax
        )
    if check == "decomposition":
        K_values = [args.K] if args.K is not None else list(range(args.Kmax + 1))
        return iter_decomposition(
            args.p or [2, 3, 5], args.Nmax or 5, args.kmax, K_values
        )
    if check == "lemma11":
        which = args.which or WHICH_XI
        return iter_lemma11(
            args.p or [2, 3, 5], args.Nmax or 5, args.kmax, args.mmax, args.smax, which
        )
    if check == "lemma12":
        return iter_lemma12(
            args.p or [2, 3, 5], args.Nmax or 5, args.kmax, args.jmax, args.Kmax
        )
    if check == "j-mod-p":
        return iter_j_congruence(args.pmax or 13, args.Jmax)
    if check == "witness":
        shifted = (args.which or "t") == "u"
        return iter_optimality_witnesses(args.Nmax or 7, args.pmax or 31, shifted)
    if check == "wolstenholme":
        if args.pmax is None:
            raise ValueError("wolstenholme sweep requires --pmax")
        return iter_wolstenholme(args.pmin, args.pmax)
    if check == "vp3-probe":
        if not args.p or args.N is None:
            raise ValueError("vp3-probe requires --p and --N")
        probe = vp3_probe(args.p[0], args.N)
        row = {
            "check": "vp3-probe",
            "params": {"p": probe.p, "N": probe.N},
            "holds": probe.outside,
            "margin": probe.margin,
        }
        return iter([row])
    raise ValueError(f"unknown check {check!r}")


def _cmd_sweep(args) -> int:
    rows = _sweep_rows(args)
    out = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8")
    failures = 0
    total = 0
    try:
        for row in rows:
            out.write(_dump(row) + "\n")
            total += 1
            if not row["holds"]:
                failures += 1
    finally:
        out.flush()
        if out is not sys.stdout:
            out.close()
    print(f"sweep {args.check}: {total} tuples, {failures} failures", file=sys.stderr)
    return EXIT_VIOLATION if failures else EXIT_PASS


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except CheckpointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
