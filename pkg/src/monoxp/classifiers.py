"""Classifier oracles: built-in monotone models, an external-process client,
a counting/caching wrapper, and a randomized monotonicity prober.

An oracle is a black box: the only interaction is classify(point) -> label.
Monotonicity is assumed by the explanation algorithms, never enforced here;
`probe_monotonicity` offers a sampling-based sanity check. Oracles are meant
to be used from one thread at a time.
"""

from __future__ import annotations

import abc
import shlex
import subprocess
import time
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional, Sequence

from .domain import ClassOrder, FeatureDomain, FeatureSpace, Number, Point


class OracleError(RuntimeError):
    """Hard failure while talking to a classifier oracle."""


class ClassifierOracle(abc.ABC):
    """Deterministic labelling function over a feature space with ordered classes."""

    space: FeatureSpace
    classes: ClassOrder

    @property
    def arity(self) -> int:
        return self.space.arity

    @abc.abstractmethod
    def classify(self, point: Point) -> str:
        """Label for a point; identical points must yield identical labels."""

    def rank_of(self, point: Point) -> int:
        return self.classes.rank(self.classify(point))


class GradeClassifier(ClassifierOracle):
    """Student grade model over (quiz, exam, homework, project), each in [0, 10].

    The score is max(0.3*quiz + 0.6*exam + 0.1*homework, project) and maps
    to grades F..A through fixed thresholds (2, 4, 5, 7, 9).
    """

    _LADDER = ((9.0, "A"), (7.0, "B"), (5.0, "C"), (4.0, "D"), (2.0, "E"))

    def __init__(self) -> None:
        self.space = FeatureSpace(
            tuple(FeatureDomain("real", 0, 10) for _ in range(4)),
            ("quiz", "exam", "homework", "project"),
        )
        self.classes = ClassOrder(("F", "E", "D", "C", "B", "A"))

    def classify(self, point: Point) -> str:
        self.space.validate_point(point)
        quiz, exam, homework, project = point.values
        score = max(0.3 * quiz + 0.6 * exam + 0.1 * homework, project)
        for threshold, grade in self._LADDER:
            if score >= threshold:
                return grade
        return "F"


class LinearThresholdClassifier(ClassifierOracle):
    """Weighted sum with nonnegative weights, bucketed by increasing thresholds.

    With M classes there are M-1 thresholds; the label rank is the number of
    thresholds the score reaches. Nonnegative weights make it monotone. With
    a single class (no thresholds) this is the constant classifier.
    """

    def __init__(
        self,
        space: FeatureSpace,
        weights: Sequence[Number],
        thresholds: Sequence[Number],
        classes: ClassOrder,
    ) -> None:
        if len(weights) != space.arity:
            raise ValueError(f"{len(weights)} weights for {space.arity} features")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        if len(thresholds) != len(classes.labels) - 1:
            raise ValueError(f"{len(thresholds)} thresholds for {len(classes.labels)} classes")
        if any(a >= b for a, b in zip(thresholds, thresholds[1:])):
            raise ValueError("thresholds must be strictly increasing")
        self.space = space
        self.classes = classes
        self.weights = tuple(weights)
        self.thresholds = tuple(thresholds)

    def classify(self, point: Point) -> str:
        self.space.validate_point(point)
        score = sum(w * x for w, x in zip(self.weights, point.values))
        return self.classes.labels[bisect_right(self.thresholds, score)]


class MonotoneDnfClassifier(ClassifierOracle):
    """Boolean classifier: true iff some term (a set of features) is all ones.

    Positive terms only, hence monotone. An empty term list gives the
    constant-0 classifier.
    """

    def __init__(self, num_features: int, terms: Sequence[Sequence[int]], labels: Sequence[str] = ("0", "1")) -> None:
        if num_features < 1:
            raise ValueError("need at least one feature")
        if len(labels) != 2:
            raise ValueError("a DNF classifier has exactly two classes")
        self.space = FeatureSpace(tuple(FeatureDomain("boolean", 0, 1) for _ in range(num_features)))
        self.classes = ClassOrder(tuple(labels))
        self.terms = tuple(frozenset(t) for t in terms)
        for term in self.terms:
            if any(not (1 <= i <= num_features) for i in term):
                raise ValueError(f"term {sorted(term)} out of feature range 1..{num_features}")

    def classify(self, point: Point) -> str:
        self.space.validate_point(point)
        values = point.values
        hit = any(all(values[i - 1] == 1 for i in term) for term in self.terms)
        return self.classes.labels[1 if hit else 0]


class AppendixCnfClassifier(ClassifierOracle):
    """Monotone boolean classifier built from a CNF over k variables.

    The classifier has N = 2k boolean features. Feature i+k plays the role of
    the negation of feature i: the source CNF is rewritten with every negative
    literal -x_i replaced by x_{i+k}, giving a positive CNF. A point is
    classified 1 iff some pair (i, i+k) is all ones, or the rewritten CNF is
    satisfied. The number of explanations of the all-ones (all-zeros) point
    certifies satisfiability of the source CNF, which is why construction
    rejects CNFs with a literal common to every clause.
    """

    def __init__(self, num_source_vars: int, clauses: Sequence[Sequence[int]], labels: Sequence[str] = ("0", "1")) -> None:
        if num_source_vars < 1:
            raise ValueError("need at least one source variable")
        if not clauses:
            raise ValueError("need at least one clause")
        if len(labels) != 2:
            raise ValueError("this classifier has exactly two classes")
        k = num_source_vars
        cleaned: list[frozenset[int]] = []
        for clause in clauses:
            lits = frozenset(int(l) for l in clause)
            if any(l == 0 or abs(l) > k for l in lits):
                raise ValueError(f"clause {sorted(clause)} has literals outside variables 1..{k}")
            cleaned.append(lits)
        common = frozenset.intersection(*cleaned) if cleaned else frozenset()
        if common:
            lit = min(common, key=abs)
            name = f"-x{-lit}" if lit < 0 else f"x{lit}"
            raise ValueError(f"literal {name} occurs in every clause, so the CNF is trivially satisfiable")
        self.num_source_vars = k
        self.source_clauses = tuple(tuple(sorted(c, key=abs)) for c in cleaned)
        # positive rewrite: -x_i becomes x_{i+k}
        self.positive_clauses = tuple(
            frozenset(l if l > 0 else -l + k for l in clause) for clause in cleaned
        )
        self.space = FeatureSpace(tuple(FeatureDomain("boolean", 0, 1) for _ in range(2 * k)))
        self.classes = ClassOrder(tuple(labels))

    def classify(self, point: Point) -> str:
        self.space.validate_point(point)
        values = point.values
        k = self.num_source_vars
        paired = any(values[i - 1] == 1 and values[i + k - 1] == 1 for i in range(1, k + 1))
        rewritten = all(any(values[j - 1] == 1 for j in clause) for clause in self.positive_clauses)
        return self.classes.labels[1 if (paired or rewritten) else 0]


def _format_coordinate(value: Number) -> str:
    v = float(value)
    return str(int(v)) if v.is_integer() else repr(v)


class ExternalProcessOracle(ClassifierOracle):
    """Client for a classifier running as a child process.

    Line protocol over the child's standard streams, UTF-8:
      request  "v1,v2,...,vN\\n"  (decimal numbers, '.' separator)
      response "LABEL\\n"          (one of the declared class labels)
    One classification per request line; requests are serialized. The feature
    space and class order come from a sidecar description, never from the
    process. Any malformed response, unknown label, or early exit raises
    OracleError.
    """

    def __init__(self, command: str | Sequence[str], space: FeatureSpace, classes: ClassOrder) -> None:
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        if not self.command:
            raise ValueError("empty oracle command line")
        self.space = space
        self.classes = classes
        self._proc: Optional[subprocess.Popen] = None

    def _ensure_started(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            return
        if self._proc is not None:
            raise OracleError(f"oracle process exited with status {self._proc.returncode}")
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise OracleError(f"cannot start oracle process {self.command!r}: {exc}") from exc

    def classify(self, point: Point) -> str:
        self.space.validate_point(point)
        self._ensure_started()
        assert self._proc is not None and self._proc.stdin and self._proc.stdout
        request = ",".join(_format_coordinate(x) for x in point.values)
        try:
            self._proc.stdin.write(request + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise OracleError(f"oracle process rejected request {request!r}: {exc}") from exc
        line = self._proc.stdout.readline()
        if line == "":
            raise OracleError("oracle process closed its output mid-dialogue")
        label = line.rstrip("\r\n")
        if label not in self.classes:
            raise OracleError(f"oracle process returned unknown label {label!r}")
        return label

    def close(self) -> None:
        if self._proc is None:
            return
        proc, self._proc = self._proc, None
        try:
            if proc.stdin:
                proc.stdin.close()
            proc.wait(timeout=5)
        except Exception:
            proc.kill()
            proc.wait()

    def __enter__(self) -> "ExternalProcessOracle":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


class CountingOracle(ClassifierOracle):
    """Wrapper counting inner classify calls; optional exact-point memo cache.

    Cache hits do not count and never change answers (inner oracles are
    deterministic). Also accumulates wall time spent inside the inner oracle.
    Not shareable across threads.
    """

    def __init__(self, inner: ClassifierOracle, cache: bool = False) -> None:
        self.inner = inner
        self.space = inner.space
        self.classes = inner.classes
        self.call_count = 0
        self.classify_seconds = 0.0
        self._cache: Optional[dict[tuple[Number, ...], str]] = {} if cache else None

    def classify(self, point: Point) -> str:
        key = point.values
        if self._cache is not None and key in self._cache:
            return self._cache[key]
        start = time.perf_counter()
        label = self.inner.classify(point)
        self.classify_seconds += time.perf_counter() - start
        self.call_count += 1
        if self._cache is not None:
            self._cache[key] = label
        return label

    def reset(self) -> None:
        self.call_count = 0
        self.classify_seconds = 0.0
        if self._cache is not None:
            self._cache.clear()


@dataclass(frozen=True)
class MonotonicityViolation:
    """A comparable pair whose labels come out in the wrong order."""

    lower: Point
    upper: Point
    lower_label: str
    upper_label: str


def probe_monotonicity(oracle: ClassifierOracle, trials: int, rng_seed: int = 0) -> list[MonotonicityViolation]:
    """Sample comparable point pairs and report label-order violations.

    Builds pairs a <= b by construction and checks rank(a) <= rank(b).
    An empty result is evidence, not a proof, of monotonicity.
    """
    import random

    if trials < 0:
        raise ValueError("trials must be nonnegative")
    rng = random.Random(rng_seed)
    space = oracle.space
    violations: list[MonotonicityViolation] = []
    for _ in range(trials):
        a = Point(tuple(d.sample(rng) for d in space.domains))
        b = Point(tuple(d.sample(rng, lower=x) for d, x in zip(space.domains, a.values)))
        label_a = oracle.classify(a)
        label_b = oracle.classify(b)
        if oracle.classes.rank(label_a) > oracle.classes.rank(label_b):
            violations.append(MonotonicityViolation(a, b, label_a, label_b))
    return violations


def random_monotone_dnf(num_features: int, num_terms: int, rng) -> MonotoneDnfClassifier:
    """Draw a random monotone DNF for tests: uniform-size positive terms,
    keeping the term set an antichain (no term contains another)."""
    terms: list[frozenset[int]] = []
    for _ in range(num_terms):
        size = rng.randint(1, num_features)
        term = frozenset(rng.sample(range(1, num_features + 1), size))
        if any(existing <= term for existing in terms):
            continue
        terms = [t for t in terms if not term <= t]
        terms.append(term)
    return MonotoneDnfClassifier(num_features, terms)
