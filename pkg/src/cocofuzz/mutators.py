"""The ten semantic-preserving mutation operators.

Every operator takes a parsed unit plus a seeded Rng and produces a mutant
that re-parses and keeps the original statements intact: insertions are dead
by construction (unused declarations, never-true branch/loop conditions,
add-then-subtract arithmetic, duplicated call-free assignments) and renames
are applied consistently across a variable's scope.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .ast_core import (
    JAVA_KEYWORDS,
    ParseError,
    SourceUnit,
    StatementNode,
    parse,
    token_count,
)

__all__ = [
    "OperatorId",
    "OPERATORS",
    "MutationOutcome",
    "Rng",
    "NotApplicable",
    "InternalRenderError",
    "applicable",
    "apply",
    "fresh_identifier",
    "noise_fraction",
]

_MASK64 = (1 << 64) - 1


class OperatorId(enum.IntEnum):
    """The ten operators, totally ordered Op1 < ... < Op10."""

    Op1 = 1  # dead store: unused variable declaration
    Op2 = 2  # numeric obfuscation: value + c - c
    Op3 = 3  # numeric obfuscation: value + 0 - 0
    Op4 = 4  # duplicate a call-free assignment
    Op5 = 5  # unreachable if
    Op6 = 6  # unreachable if-else
    Op7 = 7  # unreachable switch
    Op8 = 8  # unreachable for
    Op9 = 9  # unreachable while
    Op10 = 10  # rename a local variable

    def __str__(self) -> str:  # serialized form used everywhere
        return self.name

    @classmethod
    def from_name(cls, name: str) -> "OperatorId":
        try:
            return cls[name]
        except KeyError:
            raise ValueError(f"unknown operator {name!r} (expected Op1..Op10)") from None


OPERATORS: tuple[OperatorId, ...] = tuple(OperatorId)


class NotApplicable(ValueError):
    """The operator's structural precondition does not hold for the unit."""


class InternalRenderError(RuntimeError):
    """A produced mutant failed to re-parse; the mutation is aborted."""


@dataclass(frozen=True)
class MutationOutcome:
    mutant: SourceUnit
    operator: OperatorId
    location: int | str  # insertion/rewrite offset, or renamed variable name
    seed_id: str
    generation: int


class Rng:
    """Deterministic 64-bit generator (splitmix64).

    The same seed yields the same draw sequence on every platform and run;
    child streams derived from distinct keys are independent.
    """

    __slots__ = ("_seed", "_state")

    def __init__(self, seed: int):
        self._seed = seed & _MASK64
        self._state = self._seed

    @staticmethod
    def _mix(z: int) -> int:
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
        return z ^ (z >> 31)

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        return self._mix(self._state)

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randrange() on empty range")
        return self.next_u64() % n

    def randint(self, a: int, b: int) -> int:
        return a + self.randrange(b - a + 1)

    def choice(self, seq: Sequence):
        if not seq:
            raise ValueError("choice() on empty sequence")
        return seq[self.randrange(len(seq))]

    def child(self, key: int) -> "Rng":
        """Independent stream for (this seed, key); used per corpus seed."""
        return Rng(self._mix(self._seed ^ self._mix(key + 0x632BE59BD9B4E019)))

    def clone(self) -> "Rng":
        c = Rng(self._seed)
        c._state = self._state
        return c


def fresh_identifier(rng: Rng, taken: set[str]) -> str:
    """Eight random [a-z] characters not colliding with taken names."""
    while True:
        name = "".join(chr(97 + rng.randrange(26)) for _ in range(8))
        if name not in taken and name not in JAVA_KEYWORDS:
            return name


# ---- numeric obfuscation targets (Op2/Op3) ---------------------------------

# Declared types whose values keep their static type under `x + 0`:
# byte/short/char promote to int, so they are excluded.
_OBFUSCATABLE_TYPES = frozenset({"int", "long", "float", "double"})


def _literal_type(lexeme: str) -> str:
    low = lexeme.lower()
    if low.startswith(("0x", "0b")):
        return "long" if low.endswith("l") else "int"
    if low.endswith("f"):
        return "float"
    if low.endswith("d") or "." in low or "e" in low:
        return "double"
    if low.endswith("l"):
        return "long"
    return "int"


def _numeric_var_types(unit: SourceUnit) -> dict[str, str]:
    types = {
        name: t for name, t in unit.parameter_types.items() if t in _OBFUSCATABLE_TYPES
    }
    for var in unit.local_variables:
        if var.type_name in _OBFUSCATABLE_TYPES:
            types[var.name] = var.type_name
    return types


@dataclass(frozen=True)
class _ObfuscationTarget:
    token_index: int  # the single token forming the statement's value
    value_type: str  # int | long | float | double


def _obfuscation_targets(unit: SourceUnit) -> list[_ObfuscationTarget]:
    """Single-token values of assignment/declaration/return statements."""
    var_types = _numeric_var_types(unit)
    targets: list[_ObfuscationTarget] = []

    def classify(idx: int) -> str | None:
        tok = unit.tokens[idx]
        if tok.kind == "number":
            return _literal_type(tok.lexeme)
        if tok.kind == "ident":
            return var_types.get(tok.lexeme)
        return None

    for stmt in unit.statements:
        lo, hi = stmt.token_range
        if stmt.kind == "declaration":
            for d in stmt.declarators:
                if d.init_range and d.init_range[1] - d.init_range[0] == 1:
                    vtype = classify(d.init_range[0])
                    if vtype:
                        targets.append(_ObfuscationTarget(d.init_range[0], vtype))
        elif stmt.kind == "assignment" and stmt.assign_index is not None:
            rhs = range(stmt.assign_index + 1, hi - 1)
            if len(rhs) == 1:
                vtype = classify(rhs[0])
                if vtype:
                    targets.append(_ObfuscationTarget(rhs[0], vtype))
        elif stmt.kind == "return":
            if hi - lo == 3:  # `return`, value, `;`
                vtype = classify(lo + 1)
                if vtype:
                    targets.append(_ObfuscationTarget(lo + 1, vtype))
    return targets


def _duplication_candidates(unit: SourceUnit) -> list[StatementNode]:
    # Restricted to direct block children: duplicating the lone statement of a
    # braceless `if (c) x = 1;` body would hoist the copy out of the branch.
    return [
        s
        for s in unit.statements
        if s.kind == "assignment" and not s.calls_method and s.in_block
    ]


def applicable(unit: SourceUnit, op: OperatorId) -> bool:
    """Whether the operator's structural precondition holds for the unit."""
    if op in (OperatorId.Op2, OperatorId.Op3):
        return bool(_obfuscation_targets(unit))
    if op is OperatorId.Op4:
        return bool(_duplication_candidates(unit))
    if op is OperatorId.Op10:
        return bool(unit.local_variables)
    return bool(unit.blocks)  # Op1, Op5..Op9: any block (method body counts)


# ---- application ------------------------------------------------------------


def _reparse(text: str) -> SourceUnit:
    try:
        return parse(text)
    except ParseError as exc:
        raise InternalRenderError(f"mutant failed to re-parse: {exc}") from exc


def _pick_insertion_point(unit: SourceUnit, rng: Rng) -> int:
    block = rng.choice(unit.blocks)
    return rng.choice(block.insertion_points)


def _insert(text: str, offset: int, code: str) -> str:
    return f"{text[:offset]} {code}{text[offset:]}"


def _dead_store(rng: Rng, taken: set[str]) -> tuple[str, str]:
    """A fresh `int` declaration used as the body of unreachable constructs."""
    name = fresh_identifier(rng, taken)
    return f"int {name} = {rng.randrange(10)};", name


def _false_pair(rng: Rng) -> tuple[int, int]:
    """Two digits (left, right) with `left < right` guaranteed false."""
    a, b = rng.randrange(10), rng.randrange(10)
    return max(a, b), min(a, b)


_OP1_TYPES = ("int", "long", "double", "String")


def _op1_declaration(rng: Rng, taken: set[str]) -> str:
    name = fresh_identifier(rng, taken)
    decl_type = _OP1_TYPES[rng.randrange(len(_OP1_TYPES))]
    value = rng.randrange(10)
    literal = {
        "int": str(value),
        "long": f"{value}L",
        "double": f"{value}.0",
        "String": f'"{chr(97 + rng.randrange(26))}"',
    }[decl_type]
    return f"{decl_type} {name} = {literal};"


_OP2_CONSTANTS = {
    "int": lambda rng: str(rng.randint(1, 9)),
    "long": lambda rng: f"{rng.randint(1, 9)}L",
    "float": lambda rng: f"0.{rng.randint(1, 9)}f",
    "double": lambda rng: f"0.{rng.randint(1, 9)}",
}


def apply(
    unit: SourceUnit,
    op: OperatorId,
    rng: Rng,
    *,
    seed_id: str = "",
    generation: int = 1,
) -> MutationOutcome:
    """Apply one operator; all random choices are drawn from rng.

    Raises NotApplicable when the precondition fails and InternalRenderError
    if the mutant does not re-parse (never emitted).
    """
    if not applicable(unit, op):
        raise NotApplicable(f"{op} is not applicable to this unit")
    taken = unit.identifiers()
    text = unit.text
    location: int | str

    if op is OperatorId.Op1:
        offset = _pick_insertion_point(unit, rng)
        new_text = _insert(text, offset, _op1_declaration(rng, taken))
        location = offset

    elif op in (OperatorId.Op2, OperatorId.Op3):
        target = rng.choice(_obfuscation_targets(unit))
        tok = unit.tokens[target.token_index]
        if op is OperatorId.Op3:
            suffix = "+0-0"
        else:
            c = _OP2_CONSTANTS[target.value_type](rng)
            suffix = f" + {c} - {c}"
        new_text = text[: tok.end] + suffix + text[tok.end :]
        location = tok.start

    elif op is OperatorId.Op4:
        stmt = rng.choice(_duplication_candidates(unit))
        start, end = stmt.span
        new_text = _insert(text, end, text[start:end])
        location = end

    elif op in (OperatorId.Op5, OperatorId.Op6, OperatorId.Op7, OperatorId.Op8, OperatorId.Op9):
        offset = _pick_insertion_point(unit, rng)
        left, right = _false_pair(rng)
        body, body_name = _dead_store(rng, taken)
        if op is OperatorId.Op5:
            code = f"if ({left} < {right}) {{ {body} }}"
        elif op is OperatorId.Op6:
            code = f"if ({left} < {right}) {{ {body} }} else {{ }}"
        elif op is OperatorId.Op7:
            if left == right:  # the case label must never match the selector
                left += 1
            code = f"switch ({right}) {{ case {left}: {body} break; }}"
        elif op is OperatorId.Op8:
            loop_var = fresh_identifier(rng, taken | {body_name})
            code = (
                f"for (int {loop_var} = {left}; {loop_var} < {right}; "
                f"{loop_var}++) {{ {body} }}"
            )
        else:
            # `while (3 < 1)` is a constant-false condition, which javac
            # rejects as an unreachable statement; Boolean.FALSE is runtime
            # false but opaque to the reachability check.
            code = f"while (Boolean.FALSE) {{ {body} }}"
        new_text = _insert(text, offset, code)
        location = offset

    elif op is OperatorId.Op10:
        var = rng.choice(unit.local_variables)
        new_name = fresh_identifier(rng, taken)
        spans = sorted((var.declared_span, *var.usage_spans), reverse=True)
        new_text = text
        for start, end in spans:
            new_text = new_text[:start] + new_name + new_text[end:]
        location = var.name

    else:  # pragma: no cover - exhaustive enum
        raise NotApplicable(f"unhandled operator {op}")

    return MutationOutcome(
        mutant=_reparse(new_text),
        operator=op,
        location=location,
        seed_id=seed_id,
        generation=generation,
    )


def noise_fraction(original: SourceUnit, mutant: SourceUnit) -> float:
    """Share of the mutant's tokens not inherited from the original.

    preserved = size of the largest common token multiset of the two units.
    """
    from collections import Counter

    mutant_total = token_count(mutant)
    if mutant_total == 0:
        return 0.0
    orig = Counter(t.lexeme for t in original.tokens)
    mut = Counter(t.lexeme for t in mutant.tokens)
    preserved = sum((orig & mut).values())
    return (mutant_total - preserved) / mutant_total
