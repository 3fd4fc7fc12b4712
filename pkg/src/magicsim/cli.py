"""Command-line front end: verification suite, threshold/curve data, Monte
Carlo runs, cascade planning, injection demos, and circuit-file execution.

Every subcommand echoes its configuration into the report and derives all
randomness from --seed, so reruns with the same flags are byte-identical.
CSV uses a header row and dot decimals; JSON reports carry a schema_version.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import _accel, codes, distill, inject, magic
from .statevec import StateVector
from .tableau import MeasureOp, StabilizerTableau, parse_circuit

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    seed: int
    trials: int | None = None
    family: str | None = None
    epsilon: float | None = None
    bloch: tuple[float, float, float] | None = None
    out: str | None = None
    format: str = "json"
    extra: dict | None = None

    def as_dict(self) -> dict:
        d = asdict(self)
        d["backend"] = _accel.backend_name()
        return d


def _emit(text: str, out_path: str | None):
    if out_path and out_path != "-":
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise SystemExit(f"cannot write {out_path}: {exc}")
    else:
        sys.stdout.write(text)


def _json_report(config: RunConfig, payload: dict) -> str:
    report = {"schema_version": SCHEMA_VERSION, "config": config.as_dict()}
    report.update(payload)
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _resolve_epsilon(args) -> float:
    if args.epsilon is not None:
        if not 0.0 <= args.epsilon <= 0.5:
            raise SystemExit("--epsilon must be in [0, 1/2]")
        return args.epsilon
    if args.bloch is not None:
        state = magic.Qubit1State.from_vector(args.bloch)
        return magic.epsilon_of(state, args.family)
    raise SystemExit("provide --epsilon or --bloch")


def _parse_bloch(text: str) -> tuple[float, float, float]:
    try:
        rx, ry, rz = (float(v) for v in text.split(","))
    except ValueError:
        raise SystemExit("--bloch expects rx,ry,rz")
    return rx, ry, rz


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    rows: list[tuple[str, bool, str]] = []

    duality = codes.verify_weight_duality()
    for name, ok in duality.as_dict().items():
        rows.append((f"weight/duality: {name}", ok, ""))

    table = codes.five_qubit_projection_table()
    by_weight: dict[int, float] = {}
    zeros_ok = True
    for e in table:
        by_weight[e.weight] = by_weight.get(e.weight, 0.0) + e.norm_sq
        if e.weight in (1, 4) and e.norm_sq > 1e-18:
            zeros_ok = False
    pi_ok = (zeros_ok
             and abs(by_weight[0] - 1 / 6) < 1e-9 and abs(by_weight[5] - 1 / 6) < 1e-9
             and abs(by_weight[2] - 5 / 6) < 1e-9 and abs(by_weight[3] - 5 / 6) < 1e-9)
    rows.append(("five-qubit projection table", pi_ok,
                 "weight sums " + ", ".join(f"{w}:{s:.9f}" for w, s in sorted(by_weight.items()))))

    overlap = codes.codespace_overlap()
    app_ok = (overlap.group_all_positive and overlap.group_order == 16
              and abs(overlap.group_sum - 1 / 6) < 1e-9
              and abs(overlap.overlap_all_zeros - 1 / 6) < 1e-9
              and abs(overlap.overlap_all_ones - 1 / 6) < 1e-9)
    rows.append(("group-sum overlap = 1/6", app_ok,
                 f"group sum {overlap.group_sum:.12f}, "
                 f"statevector {overlap.overlap_all_zeros:.12f}"))

    equiv = codes.verify_code_equivalence(probes=20, syndrome_samples=3, rng=rng)
    rows.append(("involution code = stabilizer code", equiv.all_pass(),
                 f"max residual {max(equiv.max_residual_trivial, equiv.max_residual_rotated):.2e}"))

    autom = codes.verify_transversal_automorphism(probes=5, rng=rng)
    rows.append(("transversal non-Clifford automorphism", autom.all_pass(),
                 f"residual {autom.code_preservation_residual:.2e}"))

    l1, l2 = codes.reed_muller_spaces()
    mw_ok = True
    for space in (l1, l2):
        if not np.array_equal(codes.macwilliams(space),
                              space.dual().weight_distribution()):
            mw_ok = False
    rows.append(("MacWilliams transform vs direct duals", mw_ok, ""))

    width = max(len(r[0]) for r in rows)
    failed = [r[0] for r in rows if not r[1]]
    for name, ok, detail in rows:
        line = f"{name:<{width}}  {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  ({detail})"
        print(line)
    if failed:
        print(f"FAILED: {', '.join(failed)}")
        return 1
    print("all identities verified")
    return 0


CURVE_COLUMNS = ["epsilon", "eps_out_analytic", "p_s_analytic",
                 "eps_out_mc", "p_s_mc", "eps_out_mc_stderr", "p_s_mc_stderr"]


def cmd_curve(args) -> int:
    try:
        lo, hi, num = args.grid.split(":")
        grid = np.linspace(float(lo), float(hi), int(num))
    except ValueError:
        raise SystemExit("--grid expects lo:hi:num")
    if grid.min() < 0 or grid.max() > 0.5:
        raise SystemExit("grid must lie within [0, 1/2]")
    rows = []
    for k, eps in enumerate(grid):
        ana = distill.round_analytic(args.family, float(eps))
        row = [float(eps), ana.eps_out, ana.p_s, None, None, None, None]
        if args.trials > 0:
            mc = distill.round_montecarlo(args.family, float(eps), args.trials,
                                          seed=args.seed * 1000003 + k)
            row[3:] = [mc.eps_out, mc.p_s, mc.eps_out_stderr, mc.p_s_stderr]
        rows.append(row)
    if args.format == "json":
        config = RunConfig("curve", args.seed, trials=args.trials,
                           family=args.family, out=args.out, format="json",
                           extra={"grid": args.grid})
        payload = {"columns": CURVE_COLUMNS,
                   "rows": [[v if v is not None else None for v in r] for r in rows]}
        _emit(_json_report(config, payload), args.out)
        return 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURVE_COLUMNS)
    for row in rows:
        writer.writerow(["" if v is None else repr(v) for v in row])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_threshold(args) -> int:
    config = RunConfig("threshold", args.seed, family=args.family,
                       out=args.out)
    thr = distill.threshold(args.family)
    payload = {
        "threshold": thr,
        "threshold_polarization": 1.0 - 2.0 * thr,
        "closed_form": distill.T_THRESHOLD_EXACT if args.family == "T" else None,
    }
    _emit(_json_report(config, payload), args.out)
    return 0


def cmd_montecarlo(args) -> int:
    eps = _resolve_epsilon(args)
    config = RunConfig("montecarlo", args.seed, trials=args.trials,
                       family=args.family, epsilon=eps, bloch=args.bloch,
                       out=args.out)
    ana = distill.round_analytic(args.family, eps)
    mc = distill.round_montecarlo(args.family, eps, args.trials, args.seed)
    sigma_eps = (abs(mc.eps_out - ana.eps_out) / mc.eps_out_stderr
                 if mc.available and mc.eps_out_stderr else None)
    sigma_ps = (abs(mc.p_s - ana.p_s) / mc.p_s_stderr
                if mc.p_s_stderr else None)
    payload = {
        "analytic": {"eps_out": ana.eps_out, "p_s": ana.p_s},
        "montecarlo": {
            "available": mc.available,
            "eps_out": mc.eps_out if mc.available else None,
            "p_s": mc.p_s,
            "eps_out_stderr": mc.eps_out_stderr,
            "p_s_stderr": mc.p_s_stderr,
            "eps_out_wilson": list(mc.eps_out_wilson) if mc.eps_out_wilson else None,
            "trials": mc.trials,
            "successes": mc.successes,
        },
        "deviation_sigmas": {"eps_out": sigma_eps, "p_s": sigma_ps},
    }
    _emit(_json_report(config, payload), args.out)
    return 0


def cmd_cascade(args) -> int:
    eps = _resolve_epsilon(args)
    config = RunConfig("cascade", args.seed, family=args.family, epsilon=eps,
                       bloch=args.bloch, out=args.out,
                       extra={"levels": args.levels})
    result = distill.cascade(args.family, eps, args.levels)
    _emit(_json_report(config, {"cascade": result.as_dict()}), args.out)
    return 0


def cmd_inject_demo(args) -> int:
    config = RunConfig("inject-demo", args.seed, trials=args.trials, out=args.out,
                       extra={"theta": args.theta, "budget": args.budget})
    rng = np.random.default_rng((args.seed, 1))
    horizon = max(args.budget, 1000)
    times = inject.sample_hitting_times(args.trials, horizon, rng)
    success_rate = float((times <= args.budget).mean())
    hist: dict[int, int] = {}
    for t in times[times <= args.budget]:
        hist[int(t)] = hist.get(int(t), 0) + 1
    hist_pairs = sorted(hist.items())[:64]
    tail = inject.fit_tail_exponent(times, n_lo=10, n_hi=min(1000, horizon))
    # a few full-circuit walks, oracle-checked against the target gate
    oracle_rng = np.random.default_rng((args.seed, 2))
    checks = 0
    for _ in range(5):
        start = StateVector(1, np.array([1.0, 1.0]) / math.sqrt(2))
        ok, rounds, final = inject.random_walk_inject(
            start.copy(), args.theta, args.budget, oracle_rng)
        if ok:
            target = start.copy().apply_unitary(
                np.diag([1.0, np.exp(1j * args.theta)]), (0,))
            if final.equiv(target):
                checks += 1
        else:
            checks += 1  # aborts carry no oracle claim
    payload = {
        "success_rate": success_rate,
        "rounds_histogram": hist_pairs,
        "censored": int((times > args.budget).sum()),
        "tail_exponent": tail,
        "oracle_checks_passed": checks,
    }
    _emit(_json_report(config, payload), args.out)
    return 0


def cmd_resources(args) -> int:
    config = RunConfig("resources", args.seed, family=args.family, out=args.out,
                       extra={"gates": args.gates, "eps_raw": args.eps_raw,
                              "alpha": args.alpha})
    est = inject.resource_estimate(args.gates, args.family, args.eps_raw,
                                   alpha=args.alpha, seed=args.seed)
    _emit(_json_report(config, {"estimate": est.as_dict()}), args.out)
    return 0


def cmd_run(args) -> int:
    if args.circuit == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.circuit, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SystemExit(f"cannot read {args.circuit}: {exc}")
    n, ops = parse_circuit(text, n=args.qubits)
    config = RunConfig("run", args.seed, out=args.out,
                       extra={"circuit": args.circuit, "qubits": n})
    rng = np.random.default_rng(args.seed)
    tab = StabilizerTableau(n)
    records = []
    for op in ops:
        if isinstance(op, MeasureOp):
            outcome, prob = tab.measure_pauli(op.pauli, rng)
            records.append({"pauli": str(op.pauli), "outcome": outcome,
                            "probability": prob})
        else:
            tab.apply_gate(op)
    payload = {
        "qubits": n,
        "measurements": records,
        "stabilizers": [str(s) for s in tab.stabilizers()],
    }
    _emit(_json_report(config, payload), args.out)
    return 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _add_common(sub, family: bool = True, trials: int | None = None,
                default_format: str = "json", formats: tuple[str, ...] = ("json",)):
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--format", choices=formats, default=default_format)
    if family:
        sub.add_argument("--family", choices=("T", "H"), required=True)
    if trials is not None:
        sub.add_argument("--trials", type=int, default=trials)


def _add_state_flags(sub):
    sub.add_argument("--epsilon", type=float, default=None)
    sub.add_argument("--bloch", type=_parse_bloch, default=None,
                     help="rx,ry,rz polarization instead of --epsilon")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magicsim",
        description="magic-state distillation and gate-injection simulator")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("verify", help="run the code-identity suite")
    _add_common(sub, family=False)
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("curve", help="error map and success probability vs epsilon (CSV)")
    _add_common(sub, trials=500, default_format="csv", formats=("csv", "json"))
    sub.add_argument("--grid", default="0.0:0.5:26", help="lo:hi:num grid spec")
    sub.set_defaults(func=cmd_curve)

    sub = subs.add_parser("threshold", help="fixed point of the round map (JSON)")
    _add_common(sub)
    sub.set_defaults(func=cmd_threshold)

    sub = subs.add_parser("montecarlo", help="one round, analytic vs Monte Carlo (JSON)")
    _add_common(sub, trials=10000)
    _add_state_flags(sub)
    sub.set_defaults(func=cmd_montecarlo)

    sub = subs.add_parser("cascade", help="iterate the round map (JSON)")
    _add_common(sub)
    _add_state_flags(sub)
    sub.add_argument("--levels", type=int, default=4)
    sub.set_defaults(func=cmd_cascade)

    sub = subs.add_parser("inject-demo", help="random-walk injection statistics (JSON)")
    _add_common(sub, family=False, trials=20000)
    sub.add_argument("--theta", type=float, required=True)
    sub.add_argument("--budget", type=int, default=1000)
    sub.set_defaults(func=cmd_inject_demo)

    sub = subs.add_parser("resources", help="raw-ancilla budget for L gates (JSON)")
    _add_common(sub)
    sub.add_argument("--gates", type=int, required=True)
    sub.add_argument("--eps-raw", type=float, required=True, dest="eps_raw")
    sub.add_argument("--alpha", type=float, default=None,
                     help="walk decay constant; measured when omitted")
    sub.set_defaults(func=cmd_resources)

    sub = subs.add_parser("run", help="execute a circuit file on the tableau")
    _add_common(sub, family=False)
    sub.add_argument("--circuit", required=True, help="path or - for stdin")
    sub.add_argument("--qubits", type=int, default=None)
    sub.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
