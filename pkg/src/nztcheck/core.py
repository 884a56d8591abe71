"""Instruction alphabet, instruction sequences and their textual format.

Concrete syntax (one instruction per `;`-separated token)::

    +in:3.get     positive test        #4    forward jump
    -aux:1.set:0  negative test        !     termination
    out.set:1     plain basic instruction

`//` starts a comment running to the end of the line.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .errors import PgaSemanticError, PgaSyntaxError

INPUT = "in"
OUTPUT = "out"
AUX = "aux"


class Op(enum.Enum):
    PLAIN = ""
    POS = "+"
    NEG = "-"
    JUMP = "#"
    HALT = "!"


@dataclass(frozen=True, slots=True)
class Register:
    kind: str
    index: Optional[int] = None

    def __post_init__(self):
        if self.kind == OUTPUT:
            if self.index is not None:
                raise ValueError("the output register carries no index")
        elif self.kind in (INPUT, AUX):
            if not isinstance(self.index, int) or self.index < 1:
                raise ValueError(f"{self.kind} register index must be a positive integer")
        else:
            raise ValueError(f"unknown register kind {self.kind!r}")

    def __str__(self):
        return OUTPUT if self.kind == OUTPUT else f"{self.kind}:{self.index}"


@dataclass(frozen=True, slots=True)
class Basic:
    """A register name plus a command; ``value is None`` means ``get``."""

    register: Register
    value: Optional[int] = None

    def __post_init__(self):
        kind = self.register.kind
        if self.value not in (None, 0, 1):
            raise ValueError("set command takes a bit")
        if kind == INPUT and self.value is not None:
            raise ValueError("input registers admit only get")
        if kind == OUTPUT and self.value is None:
            raise ValueError("the output register admits only set:b")

    @property
    def is_get(self) -> bool:
        return self.value is None

    def __str__(self):
        cmd = "get" if self.value is None else f"set:{self.value}"
        return f"{self.register}.{cmd}"


@dataclass(frozen=True, slots=True)
class Instruction:
    op: Op
    basic: Optional[Basic] = None
    length: int = 0

    def __post_init__(self):
        if self.op in (Op.PLAIN, Op.POS, Op.NEG):
            if self.basic is None:
                raise ValueError(f"{self.op.name} instruction needs a basic instruction")
        elif self.basic is not None:
            raise ValueError("jumps and termination carry no basic instruction")
        if self.op is Op.JUMP:
            if not isinstance(self.length, int) or self.length < 0:
                raise ValueError("jump length must be a natural number")
        elif self.length != 0:
            raise ValueError("only jumps carry a length")

    @property
    def is_read(self) -> bool:
        """Positive or negative test on an input register (plain gets excluded)."""
        return (self.op is Op.POS or self.op is Op.NEG) and self.basic.register.kind == INPUT

    @property
    def input_index(self) -> Optional[int]:
        if self.basic is not None and self.basic.register.kind == INPUT:
            return self.basic.register.index
        return None

    def is_out_set(self, bit: int) -> bool:
        b = self.basic
        return b is not None and b.register.kind == OUTPUT and b.value == bit

    def __str__(self):
        if self.op is Op.JUMP:
            return f"#{self.length}"
        if self.op is Op.HALT:
            return "!"
        return f"{self.op.value}{self.basic}"


# Interned constructors; generators and transforms create many identical values.

@lru_cache(maxsize=None)
def in_get(i: int) -> Basic:
    return Basic(Register(INPUT, i))


@lru_cache(maxsize=None)
def out_set(b: int) -> Basic:
    return Basic(Register(OUTPUT), b)


@lru_cache(maxsize=None)
def aux_get(i: int) -> Basic:
    return Basic(Register(AUX, i))


@lru_cache(maxsize=None)
def aux_set(i: int, b: int) -> Basic:
    return Basic(Register(AUX, i), b)


@lru_cache(maxsize=None)
def plain(basic: Basic) -> Instruction:
    return Instruction(Op.PLAIN, basic)


@lru_cache(maxsize=None)
def pos(basic: Basic) -> Instruction:
    return Instruction(Op.POS, basic)


@lru_cache(maxsize=None)
def neg(basic: Basic) -> Instruction:
    return Instruction(Op.NEG, basic)


@lru_cache(maxsize=None)
def jump(length: int) -> Instruction:
    return Instruction(Op.JUMP, length=length)


HALT = Instruction(Op.HALT)


@dataclass(frozen=True, slots=True)
class InstructionSequence:
    instructions: tuple

    def __post_init__(self):
        if not isinstance(self.instructions, tuple):
            object.__setattr__(self, "instructions", tuple(self.instructions))
        if not self.instructions:
            raise ValueError("an instruction sequence has at least one instruction")

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self) -> Iterator[Instruction]:
        return iter(self.instructions)

    def __getitem__(self, i):
        return self.instructions[i]

    def __add__(self, other: "InstructionSequence") -> "InstructionSequence":
        return InstructionSequence(self.instructions + other.instructions)

    def __str__(self):
        return render(self)

    def iregs(self) -> frozenset:
        return frozenset(u.basic.register.index for u in self.instructions if u.is_read)

    def read_counts(self) -> Counter:
        """Number of read-instruction occurrences per input register."""
        return Counter(u.basic.register.index for u in self.instructions if u.is_read)

    def plain_reads(self) -> Counter:
        return Counter(u.basic.register.index for u in self.instructions
                       if u.op is Op.PLAIN and u.input_index is not None)

    def max_input_index(self) -> int:
        return max((u.input_index or 0 for u in self.instructions), default=0)

    def uses_aux(self) -> bool:
        return any(u.basic is not None and u.basic.register.kind == AUX
                   for u in self.instructions)

    def replace(self, position: int, instruction: Instruction) -> "InstructionSequence":
        """Copy with the instruction at 1-based ``position`` replaced."""
        ins = list(self.instructions)
        ins[position - 1] = instruction
        return InstructionSequence(tuple(ins))


def seq(instructions: Iterable[Instruction]) -> InstructionSequence:
    return InstructionSequence(tuple(instructions))


def render(x: InstructionSequence) -> str:
    return " ; ".join(str(u) for u in x.instructions)


_BASIC_RE = re.compile(r"([a-z]+)(?::(\d+))?\.(get|set:([01]))")
_JUMP_RE = re.compile(r"#(\d+)")


def _strip_comments(text: str) -> str:
    # Comments become spaces so offsets stay valid.
    return re.sub(r"//[^\n]*", lambda m: " " * len(m.group(0)), text)


def _parse_instruction(tok: str, offset: int) -> Instruction:
    if tok == "!":
        return HALT
    m = _JUMP_RE.fullmatch(tok)
    if m:
        return jump(int(m.group(1)))
    op = Op.PLAIN
    body, body_off = tok, offset
    if tok[:1] in "+-":
        op = Op.POS if tok[0] == "+" else Op.NEG
        body = tok[1:].lstrip()
        body_off = offset + len(tok) - len(body)
    m = _BASIC_RE.fullmatch(body)
    if not m:
        raise PgaSyntaxError(f"malformed instruction {tok!r}", offset)
    kind, index, cmd, bit = m.groups()
    if kind not in (INPUT, OUTPUT, AUX):
        raise PgaSyntaxError(f"unknown register name {kind!r}", body_off)
    if kind == OUTPUT:
        if index is not None:
            raise PgaSemanticError("the output register carries no index", body_off)
        if cmd == "get":
            raise PgaSemanticError("the output register admits only set:b", body_off)
        return Instruction(op, out_set(int(bit)))
    if index is None or int(index) < 1:
        raise PgaSyntaxError(f"{kind} register needs a positive index", body_off)
    i = int(index)
    if kind == INPUT:
        if cmd != "get":
            raise PgaSemanticError("input registers admit only get", body_off)
        return Instruction(op, in_get(i))
    return Instruction(op, aux_get(i) if cmd == "get" else aux_set(i, int(bit)))


def parse(text: str) -> InstructionSequence:
    """Parse the concrete syntax; raises PgaSyntaxError/PgaSemanticError with offsets."""
    clean = _strip_comments(text)
    out = []
    start = 0
    for part in clean.split(";"):
        stripped = part.strip()
        lead = len(part) - len(part.lstrip())
        if not stripped:
            raise PgaSyntaxError("empty instruction", start + lead)
        out.append(_parse_instruction(stripped, start + lead))
        start += len(part) + 1
    return InstructionSequence(tuple(out))
