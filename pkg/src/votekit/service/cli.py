"""Operator command line: serve, data generation, training, simulation,
audit verification and batch enrollment."""

from __future__ import annotations

import argparse
import base64
import csv
import sys

from ..errors import VotekitError
from ..forest import ForestParams, SplitSpec, save_model
from .. import turnout, violence
from ..biometrics import BiometricCapture, CaptureKind
from .config import ServiceConfig
from .simulate import run_simulation
from .state import AppState


def _cmd_serve(args) -> int:
    import uvicorn

    from .http import create_app

    if args.config:
        config = ServiceConfig.from_file(args.config)
    else:
        config = ServiceConfig()
    if args.data_dir:
        config.data_dir = args.data_dir
    state = AppState(config)
    app = create_app(state)
    uvicorn.run(app, host=args.host or config.listen_host, port=args.port or config.listen_port)
    return 0


def _cmd_generate_data(args) -> int:
    if args.kind == "turnout":
        samples = turnout.generate_training_data(args.n, seed=args.seed)
        turnout.write_samples_csv(samples, args.out)
    else:
        history = violence.generate_history(args.n, seed=args.seed, separable=args.separable)
        violence.write_history_csv(history, args.out)
    print(f"wrote {args.n} {args.kind} rows to {args.out}")
    return 0


def _metrics_line(name: str, metrics: dict) -> str:
    if "r2" in metrics:
        return f"{name}: mae {metrics['mae']:.3f}  rmse {metrics['rmse']:.3f}  r2 {metrics['r2']:.4f}"
    per_class = "  ".join(
        f"[{label}] p {m['precision']:.3f} r {m['recall']:.3f}"
        for label, m in metrics["per_class"].items()
    )
    return f"{name}: accuracy {metrics['accuracy']:.4f}  {per_class}"


def _cmd_train(args) -> int:
    spec = SplitSpec(
        0.7, 0.15, 0.15, stratified=(args.kind == "violence"), seed=args.seed
    )
    params = ForestParams(seed=args.seed)
    if args.kind == "turnout":
        samples = turnout.read_samples_csv(args.infile)
        result = turnout.train_turnout_model(samples, spec, params)
    else:
        history = violence.read_history_csv(args.infile)
        result = violence.train_violence_model(history, spec, params)
    print(f"trained {args.kind} model {result.model_id} on {args.infile}")
    print(_metrics_line("test   ", result.test_metrics))
    print(_metrics_line("holdout", result.holdout_metrics))
    if args.out_model:
        save_model(result.model, args.out_model)
        print(f"model written to {args.out_model}")
    return 0


def _cmd_simulate(args) -> int:
    report = run_simulation(
        voters=args.voters, areas=args.areas, seed=args.seed, data_dir=args.data_dir
    )
    return 0 if report.chain_valid else 1


def _cmd_verify_audit(args) -> int:
    from pathlib import Path

    if not Path(args.data_dir).is_dir():
        print(f"error: no data directory at {args.data_dir}", file=sys.stderr)
        return 1
    state = AppState(ServiceConfig(data_dir=args.data_dir))
    try:
        result = state.verify_audit()
    finally:
        state.close()
    if result["valid"]:
        print(f"chain valid ({result['entries']} entries)")
        return 0
    print(f"chain INVALID at index {result['first_bad_index']} ({result['entries']} entries)")
    return 1


def _cmd_enroll_batch(args) -> int:
    expected = ["nic", "full_name", "area_code", "fingerprint_b64", "face_b64"]
    state = AppState(ServiceConfig(data_dir=args.data_dir))
    enrolled = 0
    try:
        with open(args.csv, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != expected:
                print(f"expected CSV header {','.join(expected)}", file=sys.stderr)
                return 1
            for row in reader:
                state.registry.enroll(
                    nic=row["nic"],
                    full_name=row["full_name"],
                    area_code=row["area_code"],
                    fp_capture=BiometricCapture(
                        kind=CaptureKind.FINGERPRINT,
                        payload=base64.b64decode(row["fingerprint_b64"]),
                    ),
                    face_capture=BiometricCapture(
                        kind=CaptureKind.FACE, payload=base64.b64decode(row["face_b64"])
                    ),
                    officer=args.officer,
                )
                enrolled += 1
    finally:
        state.close()
    print(f"enrolled {enrolled} voters into {args.data_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="votekit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", help="path to a ServiceConfig JSON file")
    p.add_argument("--data-dir", help="override the journal directory")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("generate-data", help="write a synthetic training CSV")
    p.add_argument("--kind", choices=["turnout", "violence"], required=True)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--separable", action="store_true",
                   help="violence only: deterministic label rule instead of logistic")
    p.set_defaults(func=_cmd_generate_data)

    p = sub.add_parser("train", help="train a prediction model from a CSV")
    p.add_argument("--kind", choices=["turnout", "violence"], required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-model")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("simulate-election", help="run a deterministic election day")
    p.add_argument("--voters", type=int, default=1000)
    p.add_argument("--areas", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--data-dir", help="keep the journal here instead of a temp dir")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify-audit", help="verify the audit chain in a data dir")
    p.add_argument("--data-dir", required=True)
    p.set_defaults(func=_cmd_verify_audit)

    p = sub.add_parser("enroll-batch", help="enroll voters from a CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--data-dir", required=True)
    p.add_argument("--officer", default="batch-import")
    p.set_defaults(func=_cmd_enroll_batch)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VotekitError as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
