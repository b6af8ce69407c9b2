"""Loading classifier descriptions from JSON files.

A description names a classifier kind, its feature domains, its ordered
classes, and kind-specific parameters. All files carry "schema": 1.
"""

from __future__ import annotations

import json
from typing import Any

from .classifiers import (
    AppendixCnfClassifier,
    ClassifierOracle,
    ExternalProcessOracle,
    GradeClassifier,
    LinearThresholdClassifier,
    MonotoneDnfClassifier,
)
from .domain import ClassOrder, FeatureDomain, FeatureSpace

SCHEMA_VERSION = 1

KINDS = ("grade", "linear", "monotone-dnf", "appendix-cnf", "external")


class SpecError(ValueError):
    """A classifier description failed validation at load time."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SpecError(message)


def _parse_space(entries: Any) -> FeatureSpace:
    _require(isinstance(entries, list) and entries, "'features' must be a nonempty list")
    domains = []
    names = []
    for idx, entry in enumerate(entries, start=1):
        _require(isinstance(entry, dict), f"feature {idx} must be an object")
        kind = entry.get("kind", "real")
        _require("lower" in entry and "upper" in entry, f"feature {idx} needs 'lower' and 'upper' bounds")
        try:
            domains.append(FeatureDomain(kind, entry["lower"], entry["upper"]))
        except ValueError as exc:
            raise SpecError(f"feature {idx}: {exc}") from exc
        names.append(str(entry.get("name", f"f{idx}")))
    return FeatureSpace(tuple(domains), tuple(names))


def _parse_classes(labels: Any) -> ClassOrder:
    _require(isinstance(labels, list) and labels, "'classes' must be a nonempty list")
    try:
        return ClassOrder(tuple(str(l) for l in labels))
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def build_oracle(spec: dict) -> ClassifierOracle:
    """Construct a classifier oracle from a parsed description."""
    _require(isinstance(spec, dict), "classifier description must be a JSON object")
    _require(spec.get("schema") == SCHEMA_VERSION, f"missing or unsupported 'schema' (expected {SCHEMA_VERSION})")
    kind = spec.get("kind")
    _require(kind in KINDS, f"'kind' must be one of {', '.join(KINDS)}")

    if kind == "grade":
        oracle = GradeClassifier()
        if "features" in spec:
            space = _parse_space(spec["features"])
            _require(
                space.arity == 4 and all(d.lower == 0 and d.upper == 10 for d in space.domains),
                "the grade classifier has four features bounded [0, 10]",
            )
        if "classes" in spec:
            _require(
                tuple(spec["classes"]) == oracle.classes.labels,
                "the grade classifier's classes are F, E, D, C, B, A",
            )
        return oracle

    if kind == "linear":
        space = _parse_space(spec.get("features"))
        classes = _parse_classes(spec.get("classes"))
        _require(isinstance(spec.get("weights"), list), "'weights' must be a list")
        _require(isinstance(spec.get("thresholds"), list), "'thresholds' must be a list")
        try:
            return LinearThresholdClassifier(space, spec["weights"], spec["thresholds"], classes)
        except ValueError as exc:
            raise SpecError(str(exc)) from exc

    if kind == "monotone-dnf":
        space = _parse_space(spec.get("features"))
        _require(all(d.kind == "boolean" for d in space.domains), "monotone-dnf features must be boolean")
        labels = spec.get("classes", ["0", "1"])
        _require(isinstance(labels, list) and len(labels) == 2, "monotone-dnf takes exactly two classes")
        _require(isinstance(spec.get("terms"), list), "'terms' must be a list of feature-index lists")
        try:
            clf = MonotoneDnfClassifier(space.arity, spec["terms"], tuple(str(l) for l in labels))
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
        clf.space = FeatureSpace(space.domains, space.feature_names)
        return clf

    if kind == "appendix-cnf":
        variables = spec.get("variables")
        _require(isinstance(variables, int) and variables >= 1, "'variables' must be a positive integer")
        _require(isinstance(spec.get("clauses"), list), "'clauses' must be a list of literal lists")
        labels = spec.get("classes", ["0", "1"])
        _require(isinstance(labels, list) and len(labels) == 2, "appendix-cnf takes exactly two classes")
        try:
            clf = AppendixCnfClassifier(variables, spec["clauses"], tuple(str(l) for l in labels))
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
        if "features" in spec:
            space = _parse_space(spec["features"])
            _require(
                space.arity == clf.space.arity and all(d.kind == "boolean" for d in space.domains),
                f"appendix-cnf over {variables} variables needs {2 * variables} boolean features",
            )
            clf.space = space
        return clf

    # external
    space = _parse_space(spec.get("features"))
    classes = _parse_classes(spec.get("classes"))
    command = spec.get("command")
    _require(
        isinstance(command, str) or (isinstance(command, list) and all(isinstance(c, str) for c in command)),
        "'command' must be a string or a list of strings",
    )
    try:
        return ExternalProcessOracle(command, space, classes)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def load_oracle(path: str) -> ClassifierOracle:
    """Read a JSON classifier description and build its oracle."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            spec = json.load(handle)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from exc
    return build_oracle(spec)


def load_spec(path: str) -> dict:
    """Read and minimally validate a JSON classifier description."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            spec = json.load(handle)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from exc
    _require(isinstance(spec, dict), "classifier description must be a JSON object")
    return spec
