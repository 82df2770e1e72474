"""3CNF formulas, their mod-2 (odd-parity) views, and DIMACS I/O."""

from __future__ import annotations

import io
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DuplicateVariableError,
    InvalidInputError,
    Not3CNFError,
    OutOfRangeError,
    ParseError,
)


@dataclass(frozen=True, order=True)
class Literal:
    """A possibly negated propositional variable; variables are 1-indexed."""

    var: int
    negated: bool = False

    def __post_init__(self) -> None:
        if self.var < 1:
            raise InvalidInputError(f"variable index must be >= 1, got {self.var}")

    def complement(self) -> Literal:
        return Literal(self.var, not self.negated)

    def value(self, assignment: Sequence[int]) -> int:
        """Truth value of this literal under a 1-indexed 0/1 assignment."""
        return assignment[self.var] ^ int(self.negated)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    @staticmethod
    def from_int(code: int) -> Literal:
        if code == 0:
            raise InvalidInputError("literal code 0 is reserved as a clause terminator")
        return Literal(abs(code), code < 0)

    def __str__(self) -> str:
        return f"-{self.var}" if self.negated else str(self.var)


@dataclass(frozen=True, eq=False)
class Clause3:
    """Three literals over three distinct variables.

    Comparison and hashing use the variable-sorted form, so clauses that
    differ only in literal order are equal.
    """

    lits: tuple[Literal, Literal, Literal]

    def __post_init__(self) -> None:
        if len(self.lits) != 3:
            raise Not3CNFError(f"clause must have exactly 3 literals, got {len(self.lits)}")
        vs = {l.var for l in self.lits}
        if len(vs) != 3:
            raise DuplicateVariableError(f"clause mentions a variable twice: {self}")

    @staticmethod
    def of(*codes: int) -> Clause3:
        """Build a clause from signed integer literal codes, e.g. Clause3.of(1, -2, 3)."""
        return Clause3(tuple(Literal.from_int(c) for c in codes))

    @property
    def variables(self) -> tuple[int, int, int]:
        return tuple(l.var for l in self.lits)

    def canonical(self) -> tuple[Literal, Literal, Literal]:
        return tuple(sorted(self.lits, key=lambda l: l.var))

    def satisfied(self, assignment: Sequence[int]) -> bool:
        return any(l.value(assignment) for l in self.lits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clause3):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __str__(self) -> str:
        return "(" + " ".join(str(l) for l in self.lits) + ")"


@dataclass(frozen=True)
class XorEquation:
    """A mod-2 equation over at most three distinct variables: sum(vars) = rhs."""

    vars: tuple[int, ...]
    rhs: int

    def __post_init__(self) -> None:
        if self.rhs not in (0, 1):
            raise InvalidInputError(f"rhs must be 0 or 1, got {self.rhs}")
        if len(self.vars) > 3:
            raise InvalidInputError(f"equation is wider than 3 variables: {self.vars}")
        if list(self.vars) != sorted(set(self.vars)):
            raise InvalidInputError(f"variables must be sorted and distinct: {self.vars}")
        if self.vars and self.vars[0] < 1:
            raise InvalidInputError(f"variable index must be >= 1, got {self.vars[0]}")

    @property
    def width(self) -> int:
        return len(self.vars)

    def holds(self, assignment: Sequence[int]) -> bool:
        return sum(assignment[v] for v in self.vars) % 2 == self.rhs

    def __str__(self) -> str:
        lhs = "+".join(f"x{v}" for v in self.vars) if self.vars else "0"
        return f"{lhs}={self.rhs}"


@dataclass(frozen=True)
class Formula:
    """A 3CNF formula over variables 1..n; duplicate clauses are allowed."""

    n: int
    clauses: tuple[Clause3, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidInputError(f"n must be nonnegative, got {self.n}")
        for c in self.clauses:
            for l in c.lits:
                if l.var > self.n:
                    raise OutOfRangeError(f"variable {l.var} exceeds declared n={self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied(self, assignment: Sequence[int]) -> bool:
        return all(c.satisfied(assignment) for c in self.clauses)


def to_xor(clause: Clause3) -> XorEquation:
    """The odd-parity view of a clause: x_a + x_b + x_c = 1 xor (#negations mod 2)."""
    rhs = 1
    for l in clause.lits:
        rhs ^= int(l.negated)
    return XorEquation(tuple(sorted(clause.variables)), rhs)


def eval_odd(clause: Clause3, assignment: Sequence[int]) -> bool:
    """True when an odd number of the clause's literals are satisfied."""
    return (clause.lits[0].value(assignment)
            + clause.lits[1].value(assignment)
            + clause.lits[2].value(assignment)) % 2 == 1


def gen_random(n: int, m: int, seed: int) -> Formula:
    """Sample m clauses independently: 3 distinct variables, 3 fair polarity bits."""
    if n < 3:
        raise InvalidInputError(f"need n >= 3 to draw 3 distinct variables, got n={n}")
    if m < 0:
        raise InvalidInputError(f"m must be nonnegative, got {m}")
    rng = random.Random(seed)
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), 3)
        clauses.append(Clause3(tuple(Literal(v, rng.getrandbits(1) == 1) for v in vs)))
    return Formula(n, tuple(clauses))


def render_dimacs(formula: Formula) -> str:
    lines = [f"p cnf {formula.n} {formula.m}"]
    for c in formula.clauses:
        lines.append(" ".join(str(l.to_int()) for l in c.lits) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(source: str | bytes | io.TextIOBase) -> Formula:
    """Parse strict 3CNF DIMACS: a 'p cnf n m' header, then m zero-terminated clauses.

    Comment lines starting with 'c' are skipped.  Every clause must have
    exactly three literals over distinct in-range variables, and the clause
    count must match the header.
    """
    if isinstance(source, bytes):
        text = source.decode("ascii")
    elif hasattr(source, "read"):
        text = source.read()
    else:
        text = source

    tokens: list[str] = []
    header: tuple[int, int] | None = None
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if header is None:
            parts = stripped.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ParseError(f"expected 'p cnf n m' header, got {stripped!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"non-integer header fields: {stripped!r}") from None
            continue
        tokens.extend(stripped.split())

    if header is None:
        raise ParseError("missing 'p cnf n m' header")
    n, m = header
    if n < 0 or m < 0:
        raise ParseError(f"negative header counts: n={n} m={m}")

    clauses: list[Clause3] = []
    current: list[Literal] = []
    for tok in tokens:
        try:
            code = int(tok)
        except ValueError:
            raise ParseError(f"non-integer token {tok!r}") from None
        if code == 0:
            if len(current) != 3:
                raise Not3CNFError(f"clause has {len(current)} literals, expected 3")
            clauses.append(Clause3(tuple(current)))
            current = []
            continue
        if abs(code) > n:
            raise OutOfRangeError(f"variable {abs(code)} exceeds declared n={n}")
        current.append(Literal.from_int(code))
    if current:
        raise ParseError("unterminated clause at end of input")
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses but input has {len(clauses)}")
    return Formula(n, tuple(clauses))
