"""Polynomial-time correctness checks for good instruction sequences.

A sequence is good when it is ``Y ; out.set:1 ; !`` with Y made only of test
reads (``+in:i.get``/``-in:i.get``) and jumps ``#l`` with l > 0; very good
when, in addition, no input register is read twice.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .core import HALT, INPUT, InstructionSequence, Op, jump, out_set, plain
from .errors import PreconditionError
from .executor import RegisterState, Terminated, execute
from .generators import min_len
from .transforms import eliminate, fix_register

_SET1 = plain(out_set(1))


@dataclass(frozen=True)
class GoodnessClass:
    is_good: bool
    is_very_good: bool
    multiply_read: dict = field(default_factory=dict)


def classify(x: InstructionSequence) -> GoodnessClass:
    ins = x.instructions
    if len(ins) < 2 or ins[-1] != HALT or ins[-2] != _SET1:
        return GoodnessClass(False, False, {})
    reads = []
    jump_op, pos_op, neg_op = Op.JUMP, Op.POS, Op.NEG
    for u in ins[:-2]:
        op = u.op
        if op is jump_op:
            if u.length == 0:
                return GoodnessClass(False, False, {})
        elif (op is pos_op or op is neg_op) and u.basic.register.kind == INPUT:
            reads.append(u.basic.register.index)
        else:
            return GoodnessClass(False, False, {})
    if len(set(reads)) == len(reads):
        return GoodnessClass(True, True, {})
    multi = {r: c for r, c in x.read_counts().items() if c > 1}
    return GoodnessClass(True, False, multi)


def _always_one(ins, visits: Optional[list] = None) -> bool:
    # member[k]: every run of the suffix of length k ends with output 1.
    length = len(ins)
    member = bytearray(length + 1)
    if length >= 2:
        member[2] = 1
    jump_op = Op.JUMP
    k = 2
    for p in range(length - 3, -1, -1):
        u = ins[p]
        if u.op is jump_op:
            l = u.length
            if l <= k and member[k + 1 - l]:
                member[k + 1] = 1
        elif member[k] and member[k - 1]:
            member[k + 1] = 1
        k += 1
    if visits is not None:
        visits.extend(range(length - 2, 0, -1))
    return bool(member[length])


def always_one(x: InstructionSequence, visits: Optional[list] = None) -> bool:
    """True iff ``x`` ends with output 1 whatever the inputs are.

    ``visits``, when given, receives each 1-based position the recurrence
    consults (every prefix position exactly once).
    """
    g = classify(x)
    if not g.is_very_good:
        raise PreconditionError("always_one needs a very good instruction sequence")
    return _always_one(x.instructions, visits)


def _require_registers(x: InstructionSequence, n: int) -> None:
    regs = x.iregs()
    if regs != frozenset(range(1, n + 1)):
        raise PreconditionError(f"iregs(X) = {sorted(regs)} is not {{1..{n}}}")


@dataclass
class CheckReport:
    result: bool
    m: Optional[int] = None
    R: tuple = ()
    failing_step: Optional[int] = None
    failing_register: Optional[int] = None
    failing_alpha: Optional[dict] = None

    def __bool__(self):
        return self.result

    def as_dict(self) -> dict:
        d = {"result": self.result, "m": self.m, "R": list(self.R),
             "failing_step": self.failing_step}
        if self.failing_register is not None:
            d["failing_register"] = self.failing_register
        if self.failing_alpha is not None:
            d["failing_alpha"] = {str(k): v for k, v in self.failing_alpha.items()}
        return d


def _zero_input_yields_zero(x: InstructionSequence, n: int) -> bool:
    res = execute(x, RegisterState.fresh((0,) * n))
    return isinstance(res, Terminated) and res.output == 0


def _very_good_report(x: InstructionSequence, n: int) -> CheckReport:
    if not _zero_input_yields_zero(x, n):
        return CheckReport(False, failing_step=1)
    for i in range(1, n + 1):
        if not _always_one(fix_register(x, i, 1, strict=False).instructions):
            return CheckReport(False, failing_step=2, failing_register=i)
    return CheckReport(True)


def explain_very_good(x: InstructionSequence, n: int) -> CheckReport:
    if n < 1:
        raise PreconditionError("n must be positive")
    if not classify(x).is_very_good:
        raise PreconditionError("X is not very good")
    _require_registers(x, n)
    return _very_good_report(x, n)


def check_very_good(x: InstructionSequence, n: int) -> bool:
    """Decide tstnz^n for very good ``x`` in O(n * len(x))."""
    return explain_very_good(x, n).result


def _gray_assignments(size: int):
    """(register slot that flipped, new bit) for every nonzero assignment, Gray order."""
    prev = 0
    for g in range(1, 1 << size):
        code = g ^ (g >> 1)
        diff = code ^ prev
        slot = diff.bit_length() - 1
        yield slot, (code >> slot) & 1, code
        prev = code


def explain_good(x: InstructionSequence, n: int) -> CheckReport:
    if n < 1:
        raise PreconditionError("n must be positive")
    g = classify(x)
    if not g.is_good:
        raise PreconditionError("X is not good")
    _require_registers(x, n)
    m = len(x) - min_len(n)
    if m < 1:
        raise PreconditionError(f"len(X) - min_len({n}) = {m}; the good checker needs at least 1")
    multi = tuple(sorted(g.multiply_read))
    report = CheckReport(False, m=m, R=multi)
    if len(multi) >= 6 * m:
        report.failing_step = 1
        return report

    zero = {r: 0 for r in multi}
    rest = n - len(multi)
    base = eliminate(x, zero, strict=False)
    sub = _very_good_report(base, rest)
    if not sub.result:
        report.failing_step = 2
        report.failing_alpha = zero
        report.failing_register = sub.failing_register
        return report

    # Step 3: positions of the eliminated reads are patched in place as the
    # assignment walks the Gray code, one register per step.
    ins = list(base.instructions)
    where = {r: [] for r in multi}
    for p, u in enumerate(x.instructions):
        if u.op is not Op.JUMP and u.basic is not None and u.basic.register.kind == INPUT:
            r = u.basic.register.index
            if r in where:
                where[r].append((p, u.op is Op.POS))
    one, two = jump(1), jump(2)
    for slot, bit, code in _gray_assignments(len(multi)):
        for p, positive in where[multi[slot]]:
            ins[p] = one if positive == (bit == 1) else two
        if not _always_one(ins):
            report.failing_step = 3
            report.failing_alpha = {r: (code >> s) & 1 for s, r in enumerate(multi)}
            return report
    report.result = True
    return report


def check_good(x: InstructionSequence, n: int) -> bool:
    """Decide tstnz^n for good ``x`` with len(x) > min_len(n)."""
    return explain_good(x, n).result
