"""Quantified boolean formulas in strict forall/exists alternation.

The canonical shape is a prefix over an even number of variables,
alternating universal (odd indices) and existential (even indices), with a
CNF matrix. Evaluation is deliberately brute force: this module is the
trusted truth oracle that the game reductions are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

FORALL = "a"
EXISTS = "e"


class QbfError(ValueError):
    """Raised on malformed QDIMACS input or misuse of the oracle API."""


@dataclass(frozen=True)
class RawQbf:
    """Parsed QDIMACS before normalization: quantifier blocks as given."""

    var_count: int
    blocks: tuple[tuple[str, tuple[int, ...]], ...]
    clauses: tuple[tuple[int, ...], ...]

    def prefix_vars(self) -> list[tuple[str, int]]:
        out = []
        for kind, vs in self.blocks:
            out.extend((kind, v) for v in vs)
        return out


@dataclass(frozen=True)
class Qbf:
    """Normalized formula: prefix is implicitly forall v1, exists v2, ..."""

    var_count: int  # even, >= 2
    clauses: tuple[tuple[int, ...], ...]
    original_names: tuple[int, ...] = field(default=())  # pre-normalization indices, 0 for dummies

    def __post_init__(self) -> None:
        if self.var_count < 2 or self.var_count % 2:
            raise QbfError(f"variable count must be even and >= 2, got {self.var_count}")
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.var_count:
                    raise QbfError(f"literal {lit} out of range 1..{self.var_count}")

    def quantifier(self, var: int) -> str:
        return FORALL if var % 2 == 1 else EXISTS

    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)


def parse_qdimacs(text: str) -> RawQbf:
    """Parse QDIMACS: problem line, a/e quantifier lines, zero-terminated clauses."""
    var_count = None
    clause_count = None
    blocks: list[tuple[str, tuple[int, ...]]] = []
    clauses: list[tuple[int, ...]] = []
    in_clauses = False

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise QbfError(f"line {lineno}: malformed problem line {line!r}")
            try:
                var_count, clause_count = int(parts[2]), int(parts[3])
            except ValueError:
                raise QbfError(f"line {lineno}: non-integer counts in problem line") from None
            continue
        if var_count is None:
            raise QbfError(f"line {lineno}: content before problem line")
        if line[0] in ("a", "e"):
            if in_clauses:
                raise QbfError(f"line {lineno}: quantifier line after clauses")
            parts = line.split()
            if parts[-1] != "0":
                raise QbfError(f"line {lineno}: quantifier line missing terminating 0")
            try:
                vs = tuple(int(p) for p in parts[1:-1])
            except ValueError:
                raise QbfError(f"line {lineno}: non-integer variable") from None
            if any(v <= 0 or v > var_count for v in vs):
                raise QbfError(f"line {lineno}: undeclared variable in quantifier line")
            if not vs:
                raise QbfError(f"line {lineno}: empty quantifier block")
            blocks.append((line[0], vs))
            continue
        # clause line
        in_clauses = True
        parts = line.split()
        if parts[-1] != "0":
            raise QbfError(f"line {lineno}: clause missing terminating 0")
        try:
            lits = tuple(int(p) for p in parts[:-1])
        except ValueError:
            raise QbfError(f"line {lineno}: non-integer literal") from None
        if any(lit == 0 for lit in lits):
            raise QbfError(f"line {lineno}: literal 0 inside clause")
        if any(abs(lit) > var_count for lit in lits):
            raise QbfError(f"line {lineno}: undeclared variable in clause")
        clauses.append(lits)

    if var_count is None:
        raise QbfError("missing problem line")
    declared = set()
    for _, vs in blocks:
        for v in vs:
            if v in declared:
                raise QbfError(f"variable {v} quantified twice")
            declared.add(v)
    used = {abs(lit) for clause in clauses for lit in clause}
    undeclared = used - declared
    if undeclared:
        raise QbfError(f"variables {sorted(undeclared)} used but not quantified")
    if clause_count is not None and clause_count != len(clauses):
        # Tolerated: several generators emit sloppy counts. Structure wins.
        pass
    return RawQbf(var_count=var_count, blocks=tuple(blocks), clauses=tuple(clauses))


def _is_tautological(clause: Sequence[int]) -> bool:
    lits = set(clause)
    return any(-lit in lits for lit in lits)


def normalize(raw: RawQbf, pad_min_vars: int = 0) -> Qbf:
    """Rewrite into strict forall/exists alternation starting with forall.

    Fresh dummy variables (absent from the matrix) are inserted wherever the
    given prefix breaks alternation, and dummy pairs are appended innermost
    until the variable count reaches ``pad_min_vars``. Truth value is
    preserved because dummies never occur in any clause. Tautological clauses
    are dropped. Variables are renumbered 1..2n in prefix order.
    """
    sequence = raw.prefix_vars()
    new_prefix: list[int] = []  # original var index, 0 for a dummy
    expected = FORALL
    for kind, var in sequence:
        if kind != expected:
            new_prefix.append(0)
            expected = EXISTS if expected == FORALL else FORALL
        new_prefix.append(var)
        expected = EXISTS if expected == FORALL else FORALL
    if len(new_prefix) % 2:
        new_prefix.append(0)
    while len(new_prefix) < max(pad_min_vars, 2):
        new_prefix.extend((0, 0))

    renumber = {orig: i + 1 for i, orig in enumerate(new_prefix) if orig != 0}
    clauses = []
    for clause in raw.clauses:
        if _is_tautological(clause):
            continue
        clauses.append(
            tuple(
                sorted(
                    ((1 if lit > 0 else -1) * renumber[abs(lit)] for lit in clause),
                    key=abs,
                )
            )
        )
    return Qbf(
        var_count=len(new_prefix),
        clauses=tuple(clauses),
        original_names=tuple(new_prefix),
    )


def _matrix_value(clauses: Sequence[Sequence[int]], values: dict[int, bool]) -> bool:
    for clause in clauses:
        if not any((lit > 0) == values[abs(lit)] for lit in clause):
            return False
    return True


def evaluate_raw(raw: RawQbf) -> bool:
    """Direct recursive evaluation of the unnormalized formula.

    Unquantified declared variables never occur in the matrix (the parser
    enforces this), so recursing over the prefix alone is exact.
    """
    prefix = raw.prefix_vars()
    values: dict[int, bool] = {}

    def rec(i: int) -> bool:
        if i == len(prefix):
            return _matrix_value(raw.clauses, values)
        kind, var = prefix[i]
        results = []
        for b in (False, True):
            values[var] = b
            results.append(rec(i + 1))
            del values[var]
            if kind == EXISTS and results[-1]:
                return True
            if kind == FORALL and not results[-1]:
                return False
        return all(results) if kind == FORALL else any(results)

    return rec(0)


def _evaluate_from(q: Qbf, assignment: list[bool]) -> bool:
    """Truth of the remaining game after the contiguous prefix `assignment`."""
    if len(assignment) == q.var_count:
        values = {i + 1: b for i, b in enumerate(assignment)}
        return _matrix_value(q.clauses, values)
    var = len(assignment) + 1
    if q.quantifier(var) == FORALL:
        for b in (False, True):
            assignment.append(b)
            ok = _evaluate_from(q, assignment)
            assignment.pop()
            if not ok:
                return False
        return True
    for b in (False, True):
        assignment.append(b)
        ok = _evaluate_from(q, assignment)
        assignment.pop()
        if ok:
            return True
    return False


def evaluate(q: Qbf) -> bool:
    """Truth by exhaustive recursion over the alternating prefix."""
    return _evaluate_from(q, [])


def existential_witness(q: Qbf, partial: Sequence[bool]) -> Optional[bool]:
    """Value for the next existential variable keeping the formula true.

    `partial` must cover v1..v(2i-1), i.e. have odd length. Prefers False on
    ties. Returns None when no value preserves truth.
    """
    if len(partial) % 2 != 1:
        raise QbfError(f"witness query needs an odd-length prefix, got {len(partial)}")
    if len(partial) >= q.var_count:
        raise QbfError("assignment already complete")
    for b in (False, True):
        if _evaluate_from(q, list(partial) + [b]):
            return b
    return None


def universal_refutation(q: Qbf, partial: Sequence[bool]) -> Optional[bool]:
    """Value for the next universal variable keeping the formula false.

    `partial` must have even length. Prefers False on ties. Returns None
    when the formula is true from this prefix onward.
    """
    if len(partial) % 2 != 0:
        raise QbfError(f"refutation query needs an even-length prefix, got {len(partial)}")
    if len(partial) >= q.var_count:
        raise QbfError("assignment already complete")
    for b in (False, True):
        if not _evaluate_from(q, list(partial) + [b]):
            return b
    return None


def qbf_to_json_obj(q: Qbf) -> dict:
    return {
        "var_count": q.var_count,
        "clauses": [list(c) for c in q.clauses],
        "original_names": list(q.original_names),
    }


def qbf_from_clauses(var_count: int, clauses: Sequence[Sequence[int]]) -> Qbf:
    """Build an already-normalized formula directly (test/CLI convenience)."""
    return Qbf(var_count=var_count, clauses=tuple(tuple(c) for c in clauses))
