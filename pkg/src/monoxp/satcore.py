"""Tiny complete SAT layer for the enumeration loop.

Formulas here stay small (one variable per feature, one clause per reported
explanation), so the solver is a deterministic backtracking search with unit
propagation rather than a tuned CDCL engine. Determinism matters: branching
is by ascending variable index with a configurable preferred polarity, and
unconstrained variables are completed with that polarity, so runs are
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional


@dataclass(frozen=True)
class Clause:
    """Disjunction of literals; positive int = variable, negative = negation.

    The empty clause is representable and unsatisfiable."""

    literals: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "literals", tuple(self.literals))
        if any(not isinstance(l, int) or l == 0 for l in self.literals):
            raise ValueError("literals must be nonzero integers")
        variables = [abs(l) for l in self.literals]
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable in clause {self.literals}")

    def __iter__(self):
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)


class CnfFormula:
    """CNF over variables 1..num_vars with an append-only clause list."""

    def __init__(self, num_vars: int) -> None:
        if num_vars < 1:
            raise ValueError("need at least one variable")
        self.num_vars = num_vars
        self._clauses: list[Clause] = []

    @property
    def clauses(self) -> tuple[Clause, ...]:
        return tuple(self._clauses)

    def __len__(self) -> int:
        return len(self._clauses)

    def add_clause(self, clause: Clause | Iterable[int]) -> None:
        if not isinstance(clause, Clause):
            clause = Clause(tuple(clause))
        if any(abs(l) > self.num_vars for l in clause.literals):
            raise ValueError(f"clause {clause.literals} uses a variable beyond {self.num_vars}")
        self._clauses.append(clause)


def solve(formula: CnfFormula, default_polarity: int = 1) -> Optional[tuple[int, ...]]:
    """Complete satisfiability check; a model (0/1 per variable) or None.

    Any returned model satisfies every clause. Unassigned variables in a
    found model are completed with `default_polarity`, which is also the
    value tried first when branching.
    """
    if default_polarity not in (0, 1):
        raise ValueError("default_polarity must be 0 or 1")
    clauses = [c.literals for c in formula.clauses]
    n = formula.num_vars

    def satisfied(lits: tuple[int, ...], assign: dict[int, int]) -> bool:
        return any(
            (lit > 0) == (assign.get(abs(lit)) == 1)
            for lit in lits
            if abs(lit) in assign
        )

    def search(assign: dict[int, int]) -> Optional[tuple[int, ...]]:
        # unit propagation to fixpoint; detects falsified clauses on the way
        while True:
            unit = None
            for lits in clauses:
                sat = False
                unassigned = []
                for lit in lits:
                    value = assign.get(abs(lit))
                    if value is None:
                        unassigned.append(lit)
                    elif (lit > 0) == (value == 1):
                        sat = True
                        break
                if sat:
                    continue
                if not unassigned:
                    return None
                if len(unassigned) == 1:
                    unit = unassigned[0]
                    break
            if unit is None:
                break
            assign[abs(unit)] = 1 if unit > 0 else 0
        if all(satisfied(lits, assign) for lits in clauses):
            return tuple(assign.get(i, default_polarity) for i in range(1, n + 1))
        var = next(i for i in range(1, n + 1) if i not in assign)
        for value in (default_polarity, 1 - default_polarity):
            child = dict(assign)
            child[var] = value
            model = search(child)
            if model is not None:
                return model
        return None

    return search({})


def to_dimacs(formula: CnfFormula) -> str:
    """Standard DIMACS CNF rendering, for debugging dumps."""
    lines = [f"p cnf {formula.num_vars} {len(formula)}"]
    for clause in formula.clauses:
        lines.append(" ".join([*(str(l) for l in clause.literals), "0"]))
    return "\n".join(lines) + "\n"
