"""Command line entry point: ``qubit-remainder {run,montecarlo,sweep,roulette,energy}``.

Records go to stdout (or ``--output``) as JSONL or CSV. The first line is a
header carrying the package version, command, seed and parsed flags; in CSV
it is a ``#`` comment. Diagnostics go to stderr.

Exit codes: 0 success, 1 invalid parameters or input, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from . import rng as rngmod
from .automaton import ProblemSpec, answer_from_outcome, trace_single_qubit
from .bitfile import BitFile
from .correction import run_ghz, run_tmr
from .energy import PLANCK_SI, ledger_report, quantum_speedup_factor, rotator_time_factor
from .errors import InvalidArgumentError
from .montecarlo import (
    CONDITIONINGS,
    REMAINDER_0,
    SCHEMES,
    SWEEP_AXES,
    UNCONDITIONED,
    TrialConfig,
    config_for_axis,
    estimate_error_rate,
    single_qubit_error_prob,
    sweep,
)
from .noise import NoiseModel, margin_flag, workability_margin
from .quantum_core import MeasurementOutcome, measure_x
from .roulette import PLAYER_SCHEMES, GameSpec, win_rate

OUTPUT_DIR_ENV = "QUBIT_REMAINDER_OUTPUT_DIR"
COMMANDS = ("run", "montecarlo", "sweep", "roulette", "energy")


class UsageError(InvalidArgumentError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401 - argparse hook
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    parameters: dict
    input_path: str | None = None
    output_path: str | None = None
    format: str = "jsonl"
    records: list = field(default_factory=list)


def _int(text: str) -> int:
    """Integer flag; scientific notation allowed when it is integral (``1e4``)."""
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not value.is_integer():
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        return int(value)


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")


def _noise_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("noise (Hilbert-angle radians)")
    g.add_argument("--phi0", type=_float, default=0.0, help="per-gate angle spread")
    g.add_argument("--bias", type=_float, default=0.0, help="per-gate systematic offset")
    g.add_argument("--p-flip", type=_float, default=0.0, help="per-qubit flip probability per pulse (GHZ)")


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    out = p.add_mutually_exclusive_group()
    out.add_argument("--output", help="output file (default: stdout)")
    out.add_argument("--output-dir", help=f"write <command>.<format> here (env: {OUTPUT_DIR_ENV})")


def _mc_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", choices=SCHEMES, default="single-qubit")
    p.add_argument("--n", type=_int, default=2, help="half-modulus")
    p.add_argument("--N", type=_int, help="string length (default: n1, or 1000)")
    p.add_argument("--n1", type=_int, help="Hamming weight of conditioned strings")
    p.add_argument("--nq", type=_int, default=3, help="GHZ register size (odd)")
    p.add_argument("--trials", type=_int, default=10000)
    p.add_argument("--conditioning", choices=CONDITIONINGS, default=REMAINDER_0)
    p.add_argument("--p-one", type=_float, default=0.5, help="P('1') for unconditioned strings")
    p.add_argument("--seed", type=_int, required=True)
    p.add_argument("--workers", type=_int, default=1)
    _noise_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qubit-remainder", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="process one bitstring file")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--seed", type=_int, required=True)
    p.add_argument("--scheme", choices=SCHEMES, default="single-qubit")
    p.add_argument("--nq", type=_int, default=3)
    _noise_flags(p)
    _output_flags(p)

    p = sub.add_parser("montecarlo", help="estimate the wrong-answer rate")
    _mc_flags(p)
    _output_flags(p)

    p = sub.add_parser("sweep", help="estimate along one parameter axis")
    _mc_flags(p)
    p.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p.add_argument("--values", required=True, help="comma-separated values")
    _output_flags(p)

    p = sub.add_parser("roulette", help="play a batch of roulette games")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--N", type=_int, required=True)
    p.add_argument("--p-one", type=_float, default=0.5)
    p.add_argument("--scheme", choices=PLAYER_SCHEMES, default="single-qubit")
    p.add_argument("--nq", type=_int, default=3)
    p.add_argument("--games", type=_int, default=10000)
    p.add_argument("--seed", type=_int, required=True)
    p.add_argument("--tau", type=_float, default=1.0, help="per-character time for the ledger")
    p.add_argument("--S", type=_float, default=0.5, help="rotator spin for the ledger")
    _noise_flags(p)
    _output_flags(p)

    p = sub.add_parser("energy", help="time/energy comparison table")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--N", type=_int, required=True)
    p.add_argument("--tau", type=_float, required=True)
    p.add_argument("--S", type=_float, default=0.5)
    units = p.add_mutually_exclusive_group()
    units.add_argument("--h", type=_float, default=None, help="Planck constant in ledger units (default 1)")
    units.add_argument("--si", action="store_true", help="use the SI value of h")
    p.add_argument("--measurement-cost", type=_float, default=0.0)
    _output_flags(p)
    return parser


def parse_args(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(list(argv))
    params = {k: v for k, v in vars(args).items() if k not in ("command", "format", "output", "output_dir", "input")}
    output = args.output
    if output is None:
        out_dir = args.output_dir or os.environ.get(OUTPUT_DIR_ENV)
        if out_dir:
            output = str(Path(out_dir) / f"{args.command}.{args.format}")
    if getattr(args, "conditioning", None) == UNCONDITIONED and args.n1 is not None:
        raise UsageError("--n1 cannot be combined with --conditioning unconditioned")
    return RunConfig(args.command, params, getattr(args, "input", None), output, args.format)


# --------------------------------------------------------------------------
# commands


def _noise(p: dict) -> NoiseModel:
    return NoiseModel(phi0=p["phi0"], bias=p["bias"], p_flip=p["p_flip"])


def _cmd_run(cfg: RunConfig) -> list[dict]:
    p = cfg.parameters
    source = BitFile(cfg.input_path)
    N = source.length()
    spec = ProblemSpec(p["n"], N)
    noise = _noise(p)
    scheme = p["scheme"]
    seed = p["seed"]
    record: dict = {"record": "run", "scheme": scheme, "n": spec.n, "N": N}
    if scheme == "single-qubit":
        r = rngmod.substream(seed, 0, rngmod.QUBIT)
        trace = trace_single_qubit(source, spec, noise, r)
        x = measure_x(trace.state, r).x
        n1 = trace.hamming_weight
        answer = answer_from_outcome(MeasurementOutcome(x), spec).value
        record["theta"] = trace.state.theta
    elif scheme == "tmr":
        rngs = [rngmod.substream(seed, 0, rngmod.QUBIT + b) for b in range(3)]
        res = run_tmr(source, spec, noise, rngs)
        x = res.majority
        answer = res.answer.value
        record["outcomes"] = "".join(str(m.x) for m in res.outcomes)
        n1 = None
    else:
        res = run_ghz(source, spec, p["nq"], noise, rngmod.substream(seed, 0, rngmod.QUBIT))
        x = 1 - res.majority_bit
        answer = res.answer.value
        record["decoded_bits"] = "".join(map(str, res.decoded_bits))
        n1 = None
    if n1 is None:
        n1 = sum(int(c.sum()) for c in source)
    remainder = n1 % spec.modulus
    record.update(
        hamming_weight=n1,
        remainder_true=remainder,
        outcome_x=x,
        answer=answer,
        critical=spec.is_critical(remainder),
        won_if_roulette=remainder != answer,
    )
    return [record]


def _trial_config(p: dict) -> TrialConfig:
    N = p["N"]
    if N is None:
        N = p["n1"] if p["n1"] is not None else 1000
    return TrialConfig(
        spec=ProblemSpec(p["n"], N),
        noise=_noise(p),
        scheme=p["scheme"],
        trials=p["trials"],
        master_seed=p["seed"],
        conditioning=p["conditioning"],
        n1=p["n1"],
        n_q=p["nq"],
        p_one=p["p_one"],
    )


def _stats_record(tc: TrialConfig, stats) -> dict:
    n1 = tc.hamming_weight if tc.conditioning != UNCONDITIONED else None
    rec = {
        "record": "stats",
        "scheme": tc.scheme,
        "conditioning": tc.conditioning,
        "n": tc.spec.n,
        "N": tc.spec.N,
        "n1": n1,
        "n_q": tc.n_q if tc.scheme == "ghz" else None,
        "phi0": tc.noise.phi0,
        "bias": tc.noise.bias,
        "p_flip": tc.noise.p_flip,
    }
    rec.update(stats.as_dict())
    rec["per_qubit_predicted"] = single_qubit_error_prob(tc.noise, n1) if n1 is not None else None
    rec["workability_margin"] = workability_margin(tc.spec.N, tc.noise.phi0)
    rec["workability"] = margin_flag(rec["workability_margin"])
    return rec


def _cmd_montecarlo(cfg: RunConfig) -> list[dict]:
    tc = _trial_config(cfg.parameters)
    return [_stats_record(tc, estimate_error_rate(tc, workers=cfg.parameters["workers"]))]


def _cmd_sweep(cfg: RunConfig) -> list[dict]:
    p = cfg.parameters
    tc = _trial_config(p)
    values = [_float(v) for v in p["values"].split(",") if v.strip()]
    rows = []
    for pt in sweep(tc, p["axis"], values, workers=p["workers"]):
        if pt.stats is None:
            rows.append({"record": "sweep-error", "axis": pt.axis, "value": pt.value, "error": pt.error})
            continue
        rec = {"record": "sweep", "axis": pt.axis, "value": pt.value}
        rec.update(_stats_record(config_for_axis(tc, pt.axis, pt.value), pt.stats))
        rec["record"] = "sweep"
        rows.append(rec)
    return rows


def _ledger_records(n: int, N: int, tau: float, h: float, S: float, cost: float = 0.0) -> list[dict]:
    rows = []
    for row in ledger_report(n, N, tau, h=h, S=S, measurement_cost=cost):
        rec = {"record": "ledger", "n": n, "N": N, "h": h, "S": S}
        rec.update(row.as_dict())
        rows.append(rec)
    rows.append(
        {
            "record": "ledger-summary",
            "n": n,
            "N": N,
            "h": h,
            "S": S,
            "speedup_factor": quantum_speedup_factor(n),
            "rotator_time_factor": rotator_time_factor(S),
        }
    )
    return rows


def _cmd_roulette(cfg: RunConfig) -> list[dict]:
    p = cfg.parameters
    spec = GameSpec(p["n"], p["N"], p["p_one"], p["seed"])
    stats = win_rate(spec, _noise(p), p["scheme"], p["games"], n_q=p["nq"])
    rec = {"record": "roulette", "scheme": p["scheme"], "n": spec.n, "N": spec.N, "p_one": spec.p_one}
    rec.update(stats.as_dict())
    return [rec] + _ledger_records(spec.n, spec.N, p["tau"], 1.0, p["S"])


def _cmd_energy(cfg: RunConfig) -> list[dict]:
    p = cfg.parameters
    h = PLANCK_SI if p["si"] else (1.0 if p["h"] is None else p["h"])
    return _ledger_records(p["n"], p["N"], p["tau"], h, p["S"], p["measurement_cost"])


_COMMANDS = {
    "run": _cmd_run,
    "montecarlo": _cmd_montecarlo,
    "sweep": _cmd_sweep,
    "roulette": _cmd_roulette,
    "energy": _cmd_energy,
}


# --------------------------------------------------------------------------
# output


def _header(cfg: RunConfig) -> dict:
    return {
        "record": "header",
        "version": __version__,
        "command": cfg.command,
        "seed": cfg.parameters.get("seed"),
        "rng": rngmod.GENERATOR,
        "input": cfg.input_path,
        "config": cfg.parameters,
    }


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render(cfg: RunConfig, records: list[dict]) -> str:
    header = _header(cfg)
    if cfg.format == "jsonl":
        lines = [json.dumps(header, sort_keys=True)]
        lines += [json.dumps(r) for r in records]
        return "\n".join(lines) + "\n"
    columns: list[str] = []
    for r in records:
        columns += [k for k in r if k not in columns]
    buf = io.StringIO()
    buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        writer.writerow([format_value(r.get(c)) for c in columns])
    return buf.getvalue()


def execute(cfg: RunConfig) -> int:
    try:
        records = _COMMANDS[cfg.command](cfg)
        text = render(cfg, records)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidArgumentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cfg.records = records
    try:
        if cfg.output_path:
            Path(cfg.output_path).parent.mkdir(parents=True, exist_ok=True)
            Path(cfg.output_path).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
