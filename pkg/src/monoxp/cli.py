"""Command-line front end.

Subcommands: explain, enumerate, verify, probe, bench. Results go to stdout
as JSON Lines (one object per line, each with "schema": 1); structured error
objects go to stderr. Exit codes: 0 success, 1 usage or input error,
2 semantic (no contrastive explanation exists), 3 oracle failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence, TextIO

from .classifiers import ClassifierOracle, CountingOracle, OracleError, probe_monotonicity
from .domain import Explanation, Point, verify_axp, verify_cxp
from .enumeration import InternalConsistencyError, enumerate_explanations
from .explainer import NoCxpExists, find_axp, find_cxp
from .satcore import to_dimacs
from .specfile import SpecError, build_oracle, load_spec

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SEMANTIC = 2
EXIT_ORACLE = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; this tool reserves 2 for semantic errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _record(record_type: str, **fields) -> dict:
    out = {"schema": SCHEMA_VERSION, "type": record_type}
    out.update(fields)
    return out


def _emit(stream: TextIO, record: dict) -> None:
    stream.write(json.dumps(record) + "\n")
    stream.flush()


def _emit_error(kind: str, message: str) -> None:
    _emit(sys.stderr, _record("error", error=kind, message=message))


def _parse_values(text: str) -> list:
    values = []
    for part in text.split(","):
        part = part.strip()
        try:
            x = float(part)
        except ValueError:
            raise ValueError(f"not a number: {part!r}") from None
        values.append(int(x) if x.is_integer() else x)
    return values


def _parse_instance(text: str, oracle: ClassifierOracle) -> Point:
    point = Point(tuple(_parse_values(text)))
    oracle.space.validate_point(point)
    return point


def _parse_features(text: str, oracle: ClassifierOracle) -> frozenset[int]:
    if text.strip() == "":
        return frozenset()
    try:
        indices = [int(part) for part in text.split(",")]
    except ValueError:
        raise ValueError(f"feature list must be comma-separated integers: {text!r}") from None
    return oracle.space.validate_features(indices)


def _parse_order(text: Optional[str], oracle: ClassifierOracle) -> Optional[tuple[int, ...]]:
    if text is None:
        return None
    try:
        order = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"order must be comma-separated integers: {text!r}") from None
    if sorted(order) != list(oracle.space.features):
        raise ValueError(f"order must be a permutation of 1..{oracle.space.arity}")
    return order


def _feature_names(oracle: ClassifierOracle, features) -> list[str]:
    return [oracle.space.name(i) for i in sorted(features)]


def _open_output(path: Optional[str]):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _close_oracle(oracle: ClassifierOracle) -> None:
    close = getattr(oracle, "close", None)
    if callable(close):
        close()


def cmd_explain(args) -> int:
    oracle = build_oracle(load_spec(args.spec))
    try:
        v = _parse_instance(args.instance, oracle)
        order = _parse_order(args.order, oracle)
        counting = CountingOracle(oracle)
        start = time.perf_counter()
        prediction = counting.classify(v)
        if args.kind == "axp":
            expl = find_axp(v, counting, order=order)
        else:
            expl = find_cxp(v, counting, order=order)
        total = time.perf_counter() - start
        stream, owned = _open_output(args.output)
        try:
            _emit(
                stream,
                _record(
                    "explanation",
                    instance=list(v.values),
                    prediction=prediction,
                    kind=expl.kind.value,
                    features=expl.sorted_features(),
                    feature_names=_feature_names(oracle, expl.features),
                    oracle_calls=counting.call_count,
                    sat_calls=0,
                    time_total=total,
                    time_classifier=counting.classify_seconds,
                ),
            )
        finally:
            if owned:
                stream.close()
        return EXIT_OK
    finally:
        _close_oracle(oracle)


def cmd_enumerate(args) -> int:
    oracle = build_oracle(load_spec(args.spec))
    try:
        v = _parse_instance(args.instance, oracle)
        order = _parse_order(args.order, oracle)
        counting = CountingOracle(oracle)
        prediction = counting.classify(v)
        stream, owned = _open_output(args.output)
        try:
            index = 0

            def on_explanation(expl: Explanation) -> None:
                nonlocal index
                index += 1
                _emit(
                    stream,
                    _record(
                        "explanation",
                        index=index,
                        instance=list(v.values),
                        prediction=prediction,
                        kind=expl.kind.value,
                        features=expl.sorted_features(),
                        feature_names=_feature_names(oracle, expl.features),
                    ),
                )

            report = enumerate_explanations(
                v,
                counting,
                limit=args.limit,
                budget=args.budget,
                order=order,
                callback=on_explanation,
            )
            _emit(
                stream,
                _record(
                    "summary",
                    instance=list(v.values),
                    prediction=prediction,
                    axp_count=len(report.axps),
                    cxp_count=len(report.cxps),
                    sat_calls=report.sat_calls,
                    oracle_calls=counting.call_count,
                    complete=report.complete,
                    time_total=report.elapsed,
                    time_classifier=counting.classify_seconds,
                ),
            )
        finally:
            if owned:
                stream.close()
        if args.dump_cnf and report.formula is not None:
            with open(args.dump_cnf, "w", encoding="utf-8") as handle:
                handle.write(to_dimacs(report.formula))
        return EXIT_OK
    finally:
        _close_oracle(oracle)


def cmd_verify(args) -> int:
    oracle = build_oracle(load_spec(args.spec))
    try:
        v = _parse_instance(args.instance, oracle)
        features = _parse_features(args.features, oracle)
        counting = CountingOracle(oracle)
        check = verify_axp if args.kind == "axp" else verify_cxp
        start = time.perf_counter()
        prediction = counting.classify(v)
        holds = check(features, v, counting)
        minimal = holds and all(not check(features - {i}, v, counting) for i in sorted(features))
        total = time.perf_counter() - start
        stream, owned = _open_output(args.output)
        try:
            _emit(
                stream,
                _record(
                    "verification",
                    instance=list(v.values),
                    prediction=prediction,
                    kind=args.kind,
                    features=sorted(features),
                    feature_names=_feature_names(oracle, features),
                    sufficient=holds,
                    minimal=minimal,
                    oracle_calls=counting.call_count,
                    sat_calls=0,
                    time_total=total,
                    time_classifier=counting.classify_seconds,
                ),
            )
        finally:
            if owned:
                stream.close()
        return EXIT_OK
    finally:
        _close_oracle(oracle)


def cmd_probe(args) -> int:
    oracle = build_oracle(load_spec(args.spec))
    try:
        seed = args.seed
        if seed is None:
            seed = int(os.environ.get("MONOXP_SEED", "0"))
        violations = probe_monotonicity(oracle, args.trials, rng_seed=seed)
        stream, owned = _open_output(args.output)
        try:
            _emit(
                stream,
                _record(
                    "probe",
                    trials=args.trials,
                    seed=seed,
                    violation_count=len(violations),
                    violations=[
                        {
                            "lower": list(violation.lower.values),
                            "upper": list(violation.upper.values),
                            "lower_label": violation.lower_label,
                            "upper_label": violation.upper_label,
                        }
                        for violation in violations
                    ],
                ),
            )
        finally:
            if owned:
                stream.close()
        return EXIT_OK
    finally:
        _close_oracle(oracle)


def _read_instance_rows(path: str) -> list[tuple[int, list]]:
    """CSV rows as (line_number, raw cells); a non-numeric first row is a header."""
    rows: list[tuple[int, list]] = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        first = True
        for cells in reader:
            if not cells or all(c.strip() == "" for c in cells):
                continue
            if first:
                first = False
                try:
                    [float(c) for c in cells]
                except ValueError:
                    continue  # header row
            rows.append((reader.line_num, cells))
    return rows


def _bench_one(spec: dict, local: threading.local, built: list, line: int, cells: list) -> dict:
    oracle = getattr(local, "oracle", None)
    if oracle is None:
        oracle = build_oracle(spec)
        local.oracle = oracle
        built.append(oracle)  # list.append is atomic; workers never share oracles
    try:
        values = [float(c) for c in cells]
    except ValueError as exc:
        return _record("row-error", line=line, message=str(exc))
    point = Point(tuple(int(x) if float(x).is_integer() else x for x in values))
    try:
        counting = CountingOracle(oracle)
        start = time.perf_counter()
        prediction = counting.classify(point)
        report = enumerate_explanations(point, counting)
        total = time.perf_counter() - start
    except (ValueError, NoCxpExists) as exc:
        return _record("row-error", line=line, message=str(exc))
    return _record(
        "instance",
        line=line,
        instance=list(point.values),
        prediction=prediction,
        axps=[e.sorted_features() for e in report.axps],
        cxps=[e.sorted_features() for e in report.cxps],
        axp_count=len(report.axps),
        cxp_count=len(report.cxps),
        sat_calls=report.sat_calls,
        oracle_calls=counting.call_count,
        complete=report.complete,
        time_total=total,
        time_classifier=counting.classify_seconds,
    )


def aggregate_bench_records(records: Sequence[dict]) -> dict:
    """Fold per-instance bench records into the aggregate record."""
    done = [r for r in records if r["type"] == "instance"]
    errors = sum(1 for r in records if r["type"] == "row-error")
    count = len(done)
    axp_total = sum(r["axp_count"] for r in done)
    cxp_total = sum(r["cxp_count"] for r in done)
    axp_size_total = sum(len(features) for r in done for features in r["axps"])
    cxp_size_total = sum(len(features) for r in done for features in r["cxps"])
    time_total = sum(r["time_total"] for r in done)
    time_classifier = sum(r["time_classifier"] for r in done)
    return _record(
        "aggregate",
        instances=count,
        errors=errors,
        axp_count_avg=axp_total / count if count else 0.0,
        cxp_count_avg=cxp_total / count if count else 0.0,
        axp_size_avg=axp_size_total / axp_total if axp_total else 0.0,
        cxp_size_avg=cxp_size_total / cxp_total if cxp_total else 0.0,
        oracle_calls_avg=sum(r["oracle_calls"] for r in done) / count if count else 0.0,
        sat_calls_avg=sum(r["sat_calls"] for r in done) / count if count else 0.0,
        time_total_sum=time_total,
        time_classifier_sum=time_classifier,
        classifier_time_pct=100.0 * time_classifier / time_total if time_total else 0.0,
    )


def cmd_bench(args) -> int:
    spec = load_spec(args.spec)
    probe = build_oracle(spec)  # fail fast on a bad description
    _close_oracle(probe)
    rows = _read_instance_rows(args.instances)
    local = threading.local()
    built: list[ClassifierOracle] = []
    try:
        if args.parallel and args.parallel > 1:
            with ThreadPoolExecutor(max_workers=args.parallel) as pool:
                records = list(pool.map(lambda row: _bench_one(spec, local, built, *row), rows))
        else:
            records = [_bench_one(spec, local, built, line, cells) for line, cells in rows]
    finally:
        for oracle in built:
            _close_oracle(oracle)
    stream, owned = _open_output(args.output)
    try:
        for record in records:
            if record["type"] == "row-error":
                _emit_error("malformed-row", f"line {record['line']}: {record['message']}")
            else:
                _emit(stream, record)
        _emit(stream, aggregate_bench_records(records))
    finally:
        if owned:
            stream.close()
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="monoxp", description="Formal explanations for black-box monotonic classifiers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--spec", required=True, help="classifier description (JSON)")
        p.add_argument("--output", default=None, help="output path for JSON Lines (default stdout)")

    p = sub.add_parser("explain", help="compute one explanation")
    common(p)
    p.add_argument("--instance", required=True, help="comma-separated feature values")
    p.add_argument("--kind", choices=("axp", "cxp"), required=True)
    p.add_argument("--order", default=None, help="feature scan order, e.g. 1,2,3,4")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("enumerate", help="enumerate all explanations")
    common(p)
    p.add_argument("--instance", required=True)
    p.add_argument("--order", default=None)
    p.add_argument("--limit", type=int, default=None, help="stop after this many explanations")
    p.add_argument("--budget", type=float, default=None, help="wall-clock budget in seconds")
    p.add_argument("--dump-cnf", default=None, help="write the final blocking formula as DIMACS")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="check a feature set against an instance")
    common(p)
    p.add_argument("--instance", required=True)
    p.add_argument("--features", required=True, help="comma-separated 1-based feature indices")
    p.add_argument("--kind", choices=("axp", "cxp"), required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("probe", help="sample for monotonicity violations")
    common(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: MONOXP_SEED or 0)")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("bench", help="explain a batch of instances and aggregate")
    common(p)
    p.add_argument("--instances", required=True, help="CSV file, one instance per row")
    p.add_argument("--parallel", type=int, default=None, help="worker count (each gets its own oracle)")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NoCxpExists as exc:
        _emit_error("no-cxp-exists", str(exc))
        return EXIT_SEMANTIC
    except (OracleError, InternalConsistencyError) as exc:
        _emit_error("oracle-failure", str(exc))
        return EXIT_ORACLE
    except (SpecError, ValueError) as exc:
        _emit_error("invalid-input", str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
