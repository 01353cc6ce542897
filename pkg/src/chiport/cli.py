"""``chiport`` command line: protocol runs, sweeps and entanglement reports.

Output goes to stdout unless ``--output`` names a file. JSON floats are
written with 17 significant digits so they round-trip exactly; identical
arguments always produce identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections import Counter
from typing import Sequence

import numpy as np

from . import __version__, bases, entanglement, protocols
from .bases import BasisError, BasisParams
from .qstate import InvariantViolation, StateVector, partial_trace

STATES = {
    "chi": bases.chi00_state,
    "ghz4": lambda: bases.reference_state("GHZ4"),
    "w4": lambda: bases.reference_state("W4"),
    "bellpair": lambda: bases.reference_state("BellPairProduct"),
}

CSV_HEADERS = {
    "teleport": ["trial", "seed", "protocol", "outcome", "probability", "classical_bits", "corrections", "fidelity"],
    "densecode": ["scheme", "message", "decoded", "probability", "classical_bits", "particles_sent", "decoding"],
    "entropy-sweep": ["difference", "entropy", "closed_form"],
    "ent-report": ["section", "lost", "left", "right", "entropy", "negativity"],
    "capacity": ["state", "rank", "orthogonal", "perfect_decoding"],
}

# top-level keys of every protocol transcript
TRANSCRIPT_SCHEMA = {
    "type": "object",
    "required": ["protocol", "seed", "channel", "outcomes", "classical_bits", "corrections", "fidelity"],
    "properties": {
        "protocol": {"type": "string"},
        "seed": {"type": "integer"},
        "channel": {"type": "string"},
        "outcomes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["basis", "index", "probability"],
                "properties": {
                    "basis": {"type": "string"},
                    "index": {"type": "integer"},
                    "probability": {"type": "number", "minimum": 0, "maximum": 1},
                },
            },
        },
        "classical_bits": {"type": "integer", "minimum": 0},
        "corrections": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["target", "pauli"],
                "properties": {"target": {"type": "string"}, "pauli": {"type": "integer", "minimum": 0, "maximum": 3}},
            },
        },
        "fidelity": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
    },
}


class CLIError(Exception):
    """Bad argument combination, reported with exit status 2."""


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite float {x} cannot be written as JSON")
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 0, step: int = 2) -> str:
    """JSON text with fixed 17-significant-digit floats."""
    pad, inner = " " * indent, " " * (indent + step)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + step)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + dumps(v, indent + step) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _params(args) -> BasisParams:
    given = [args.theta1, args.theta2, args.phi1, args.phi2]
    if args.chi or all(g is None for g in given):
        if args.chi and any(g is not None for g in given):
            raise CLIError("--chi cannot be combined with explicit angles")
        return bases.CHI_POINT
    if any(g is None for g in given):
        raise CLIError("--theta1, --theta2, --phi1 and --phi2 must be given together")
    try:
        return BasisParams(*given)
    except BasisError as exc:
        raise CLIError(str(exc)) from None


def _family_state(seed: int) -> StateVector:
    rng = protocols.generator(seed)
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    z /= np.linalg.norm(z)
    amps = z[0] * bases.bell_state(0).amplitudes + z[1] * bases.bell_state(1).amplitudes
    return StateVector(amps, ("A1", "A2"))


def _check_fidelity(transcript):
    if transcript.fidelity < protocols.SUCCESS_FIDELITY:
        raise InvariantViolation(
            f"{transcript.protocol} trial seed {transcript.seed}: fidelity {transcript.fidelity!r}"
        )


def _run_teleport(args) -> dict:
    records, extra = [], []
    for t in range(args.trials):
        seed = args.seed + t
        if args.command == "teleport1":
            tr = protocols.teleport_standard(protocols.random_state(("A1",), seed), seed=seed)
        elif args.command == "teleport2":
            p = _params(args)
            tr = protocols.teleport_two_qubit(protocols.random_state(("A1", "A2"), seed), p, seed=seed)
        elif args.command == "teleport-coop":
            tr = protocols.teleport_cooperative_ghz_style(protocols.random_state(("A1",), seed), seed=seed)
        else:
            psi = protocols.random_state(("A1", "A2"), seed) if args.general else _family_state(seed)
            tr, report = protocols.teleport_partial_channel(psi, seed=seed)
            extra.append(report.to_dict())
        if args.command != "teleport2-partial" or not args.general:
            _check_fidelity(tr)
        records.append(tr)
    histogram = Counter(",".join(map(str, tr.outcome_key)) for tr in records)
    out = {
        "subcommand": args.command,
        "seed": args.seed,
        "trials": args.trials,
        "summary": {
            "min_fidelity": min(tr.fidelity for tr in records),
            "histogram": dict(sorted(histogram.items(), key=lambda kv: tuple(map(int, kv[0].split(","))))),
        },
        "transcripts": [tr.to_dict() for tr in records],
    }
    if extra:
        for d, rep in zip(out["transcripts"], extra):
            d["feasibility"] = rep
    rows = [
        [t, tr.seed, tr.protocol, ",".join(map(str, tr.outcome_key)), tr.outcome_probability,
         tr.classical_bits, ";".join(f"{lab}:{p}" for lab, p in tr.corrections), tr.fidelity]
        for t, tr in enumerate(records)
    ]
    return {"json": out, "csv": ("teleport", rows)}


def _run_densecode(args) -> dict:
    scheme = {"d0": protocols.dense_code_D0, "s0": protocols.dense_code_S0,
              "restricted": protocols.dense_code_restricted}[args.scheme]
    size = 8 if args.scheme == "restricted" else 16
    messages = range(size) if args.message is None else [args.message]
    if args.message is not None and not 0 <= args.message < size:
        raise CLIError(f"--message must lie in 0..{size - 1} for scheme {args.scheme}")
    results = [scheme(m, seed=args.seed) for m in messages]
    bad = [r.message for r in results if not r.success]
    if bad:
        raise InvariantViolation(f"dense coding {args.scheme} failed on messages {bad}")
    out = {"subcommand": "densecode", "seed": args.seed, "scheme": args.scheme,
           "results": [r.to_dict() for r in results]}
    rows = [[r.scheme, r.message, r.decoded, r.probability, r.classical_bits, r.particles_sent, r.decoding]
            for r in results]
    return {"json": out, "csv": ("densecode", rows)}


def entropy_sweep(points: int) -> list[tuple[float, float, float]]:
    """(difference, spectral entropy, closed form) on an interior grid of (0, pi/2)."""
    out = []
    for k in range(1, points + 1):
        d = k * (math.pi / 2) / (points + 1)
        state = bases.chi_bar_state(BasisParams.from_differences(d))
        rho = state.density()
        s = entanglement.von_neumann_entropy(partial_trace(rho, ("A3", "B2")))
        out.append((d, s, entanglement.chi_bar_pair_entropy(d)))
    return out


def _run_sweep(args) -> dict:
    rows = entropy_sweep(args.points)
    out = {"subcommand": "entropy-sweep", "seed": args.seed, "points": args.points,
           "curve": [{"difference": d, "entropy": s, "closed_form": c} for d, s, c in rows]}
    return {"json": out, "csv": ("entropy-sweep", [list(r) for r in rows])}


def _run_ent_report(args) -> dict:
    state = STATES[args.state]()
    pairwise = entanglement.pairwise_entanglement_report(state)
    cuts = entanglement.bipartition_report(state)
    losses = entanglement.loss_report(state)
    out = {
        "subcommand": "ent-report", "seed": args.seed, "state": args.state,
        "pairwise": [r.as_row() for r in pairwise],
        "bipartitions": [r.as_row() for r in cuts],
        "loss": [
            {
                "lost": e.lost,
                "remainder_entropy": e.remainder_entropy,
                "single_qubit_entropies": e.single_qubit_entropies,
                "splits": [r.as_row() for r in e.splits],
                "second_loss": {k: r.as_row() for k, r in e.second_loss.items()},
            }
            for e in losses
        ],
    }
    rows = [["pairwise", ""] + list(r.as_row().values()) for r in pairwise]
    rows += [["bipartition", ""] + list(r.as_row().values()) for r in cuts]
    for e in losses:
        rows += [["loss", e.lost] + list(r.as_row().values()) for r in e.splits]
        rows += [["second_loss", e.lost + k] + list(r.as_row().values()) for k, r in e.second_loss.items()]
    return {"json": out, "csv": ("ent-report", rows)}


def _run_capacity(args) -> dict:
    names = list(STATES) if args.state is None else [args.state]
    reports = {n: protocols.dense_code_capacity_check(STATES[n]()) for n in names}
    out = {"subcommand": "capacity", "seed": args.seed,
           "reports": {n: r.to_dict() for n, r in reports.items()}}
    rows = [[n, r.rank, r.orthogonal, r.perfect_decoding] for n, r in reports.items()]
    return {"json": out, "csv": ("capacity", rows)}


def _run_tables(args) -> dict:
    return {"json": {"subcommand": "tables", "seed": args.seed, "tables": protocols.derived_tables()}, "csv": None}


def _csv_text(kind: str, rows, seed: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    # teleport rows carry their per-trial seed already
    echo = kind != "teleport"
    w.writerow((["seed"] if echo else []) + CSV_HEADERS[kind])
    for row in rows:
        row = ([seed] if echo else []) + list(row)
        w.writerow([_fmt_float(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chiport", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base seed; trial t uses seed + t")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default="-", help="output file, '-' for stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    def positive(x):
        n = int(x)
        if n < 1:
            raise argparse.ArgumentTypeError("must be a positive integer")
        return n

    for name, help_ in [("teleport1", "one-qubit teleportation over a Bell pair"),
                        ("teleport2", "two-qubit teleportation over chi_bar"),
                        ("teleport2-partial", "two-qubit teleportation A3B2 -> A4B1"),
                        ("teleport-coop", "cooperative one-qubit teleportation A1 -> B3")]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--trials", type=positive, default=1)
        if name == "teleport2":
            for angle in ("theta1", "theta2", "phi1", "phi2"):
                p.add_argument(f"--{angle}", type=float, help="radians, in (0, pi/2)")
            p.add_argument("--chi", action="store_true", help="use the maximal chi00 point (default)")
        if name == "teleport2-partial":
            p.add_argument("--general", action="store_true",
                           help="draw arbitrary inputs instead of a|Psi0> + b|Psi1>")

    p = sub.add_parser("densecode", parents=[common], help="dense coding schemes")
    p.add_argument("--scheme", choices=("d0", "s0", "restricted"), default="d0")
    p.add_argument("--message", type=int, help="single message; default runs all")

    p = sub.add_parser("entropy-sweep", parents=[common], help="entropy of rho_{A3B2} versus angle difference")
    p.add_argument("--points", type=positive, default=9)

    p = sub.add_parser("ent-report", parents=[common], help="pairwise, bipartition and particle-loss report")
    p.add_argument("--state", choices=tuple(STATES), default="chi")

    p = sub.add_parser("capacity", parents=[common], help="rank of the 16 dense-coding encodings")
    p.add_argument("--state", choices=tuple(STATES))

    sub.add_parser("tables", parents=[common], help="derived correction tables")
    return ap


HANDLERS = {
    "teleport1": _run_teleport,
    "teleport2": _run_teleport,
    "teleport2-partial": _run_teleport,
    "teleport-coop": _run_teleport,
    "densecode": _run_densecode,
    "entropy-sweep": _run_sweep,
    "ent-report": _run_ent_report,
    "capacity": _run_capacity,
    "tables": _run_tables,
}


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = HANDLERS[args.command](args)
    except CLIError as exc:
        parser.print_usage(sys.stderr)
        print(f"chiport: error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"chiport: invariant violated: {exc}", file=sys.stderr)
        return 1
    if args.format == "csv":
        if result["csv"] is None:
            parser.print_usage(sys.stderr)
            print(f"chiport: error: {args.command} has no CSV form", file=sys.stderr)
            return 2
        text = _csv_text(*result["csv"], args.seed)
    else:
        text = dumps(result["json"]) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


def main():
    sys.exit(run_cli())
