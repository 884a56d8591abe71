"""Syntactic decision of correctness for length-minimal programs.

A program of length ``min_len(n)`` computes tstnz^n exactly when it follows
the block pattern

    even n:  (-read ; +read ; slot)^(n/2) ; !
    odd n:   (-read ; +read ; slot)^m ; +read ; slot ; (-read ; +read ; slot)^* ; !

reads every in:1..n once, and every slot holds ``out.set:1`` in some form or a
jump whose chain ends on such a slot (the last slot: ``out.set:1`` or
``+out.set:1``), or is obtained from such a program by turning the ``#2`` in
front of the isolated read into a second positive read of some register.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import AUX, OUTPUT, InstructionSequence, Op, jump
from .errors import PreconditionError
from .generators import min_len

# How to read the reachability condition of the single-duplicate extension;
# see _chain_condition.
READINGS = ("ordered", "literal", "proof")
DEFAULT_READING = "ordered"


@dataclass(frozen=True)
class Block:
    kind: str  # "pair" or "isolated"
    reads: tuple  # 1-based positions of the read instructions
    slot: int  # 1-based position of the slot instruction


@dataclass
class PatternReport:
    n: int
    parity: str
    member: bool
    reason: Optional[str] = None
    position: Optional[int] = None
    m: Optional[int] = None
    blocks: list = field(default_factory=list)
    rho: tuple = ()
    duplicate: Optional[tuple] = None  # (register, k, l) when the extension applies

    def __bool__(self):
        return self.member

    def as_dict(self) -> dict:
        return {
            "n": self.n, "parity": self.parity, "member": self.member,
            "reason": self.reason, "position": self.position, "m": self.m,
            "rho": list(self.rho),
            "duplicate": list(self.duplicate) if self.duplicate else None,
        }


def _is_slot(u) -> bool:
    return u.op is Op.JUMP or u.is_out_set(1)


def _reject(report: PatternReport, reason: str, position: Optional[int]) -> PatternReport:
    report.member = False
    report.reason = reason
    report.position = position
    return report


def is_member_pc(x: InstructionSequence, n: int) -> PatternReport:
    """Membership in the family without duplicate reads."""
    parity = "even" if n % 2 == 0 else "odd"
    report = PatternReport(n, parity, False)
    ins = x.instructions
    length = len(ins)
    if n < 1:
        return _reject(report, "n must be positive", None)
    if length != min_len(n):
        return _reject(report, f"length {length} differs from min_len({n}) = {min_len(n)}", None)

    def at(p):
        return ins[p] if p < length else None

    expected = n // 2 if parity == "even" else (n + 1) // 2
    blocks = []
    isolated = None
    p = 0
    while len(blocks) < expected:
        u = ins[p] if p < length else None
        if u is not None and u.op is Op.NEG and u.is_read:
            v, w = at(p + 1), at(p + 2)
            if v is None or not (v.op is Op.POS and v.is_read):
                return _reject(report, "pattern: expected a positive read after a negative read", p + 2)
            if w is None or not _is_slot(w):
                return _reject(report, "pattern: expected a jump or out.set:1 slot", p + 3)
            blocks.append(Block("pair", (p + 1, p + 2), p + 3))
            p += 3
        elif u is not None and u.op is Op.POS and u.is_read and parity == "odd" and isolated is None:
            w = at(p + 1)
            if w is None or not _is_slot(w):
                return _reject(report, "pattern: expected a jump or out.set:1 slot", p + 2)
            isolated = len(blocks)
            blocks.append(Block("isolated", (p + 1,), p + 2))
            p += 2
        else:
            return _reject(report, "pattern: expected the start of a read block", p + 1)
    if p != length - 1 or ins[p].op is not Op.HALT:
        return _reject(report, "pattern: expected the final termination instruction", p + 1)
    report.blocks = blocks
    report.m = isolated

    last = ins[blocks[-1].slot - 1]
    if not (last.op in (Op.PLAIN, Op.POS) and last.is_out_set(1)):
        return _reject(report, "final slot must be out.set:1 or +out.set:1", blocks[-1].slot)

    rho = tuple(ins[q - 1].input_index for b in blocks for q in b.reads)
    report.rho = rho
    seen = set()
    for b in blocks:
        for q in b.reads:
            i = ins[q - 1].input_index
            if i > n or i in seen:
                return _reject(report, f"in:{i} is not a fresh register of in:1..in:{n}", q)
            seen.add(i)

    # leads[q]: a chain of jumps starting at q ends on an out.set:1 form.
    leads = bytearray(length + 1)
    for q in range(length - 1, -1, -1):
        u = ins[q]
        if u.op is Op.JUMP:
            t = q + u.length
            leads[q] = u.length > 0 and t < length and leads[t]
        else:
            leads[q] = u.is_out_set(1)
    for b in blocks:
        if not leads[b.slot - 1]:
            return _reject(report, "jump does not lead to an out.set:1 slot", b.slot)

    report.member = True
    return report


def _chain_reaches(x: InstructionSequence, target: int) -> bytearray:
    """reach[q] (1-based): a chain of zero or more jumps from q ends at ``target``."""
    ins = x.instructions
    length = len(ins)
    reach = bytearray(length + 2)
    reach[target] = 1
    for q in range(target - 1, 0, -1):
        u = ins[q - 1]
        if u.op is Op.JUMP and u.length > 0:
            t = q + u.length
            reach[q] = t <= length and reach[t]
    return reach


def _chain_condition(x: InstructionSequence, k: int, l: int, reading: str) -> bool:
    """Whether the second read at ``l`` is never reached while the register may be 1.

    literal: no chain of zero or more jumps starting at a position <= k+2 ends at l.
    proof:   only for k < l; no jump chain starting before k ends at l, and the
             chain from k+1 (k+2 when k+1 holds a read) does not end at l.
    ordered: the literal condition when k < l; nothing when k > l.
    """
    if reading == "ordered":
        if k > l:
            return True
        reading = "literal"
    reach = _chain_reaches(x, l)
    if reading == "literal":
        return not any(reach[1:min(k + 2, len(x)) + 1])
    if reading == "proof":
        if k > l:
            return True
        ins = x.instructions
        for q in range(1, k):
            if ins[q - 1].op is Op.JUMP and reach[q]:
                return False
        start = k + 2 if k < len(x) and ins[k].is_read else k + 1
        return not (start <= len(x) and reach[start])
    raise ValueError(f"unknown reading {reading!r}")


def is_member_pce(x: InstructionSequence, n: int, reading: str = DEFAULT_READING) -> PatternReport:
    """Membership in the family extended with one doubly-read register."""
    counts = x.read_counts()
    multi = {r: c for r, c in counts.items() if c > 1}
    if not multi:
        return is_member_pc(x, n)
    parity = "even" if n % 2 == 0 else "odd"
    if len(multi) > 1 or any(c > 2 for c in multi.values()):
        return PatternReport(n, parity, False, reason="more than one duplicated read")
    (r,) = multi
    k1, k2 = [q + 1 for q, u in enumerate(x.instructions) if u.is_read and u.input_index == r]
    reasons = []
    for k, l in ((k1, k2), (k2, k1)):
        second = x.instructions[l - 1]
        if second.op is not Op.POS or r > n:
            reasons.append((2, f"read at {l} is not +in:i.get with i <= {n}", l))
            continue
        base = is_member_pc(x.replace(l, jump(2)), n)
        if not base.member:
            reasons.append((1, f"with #2 at {l}: {base.reason}", base.position))
            continue
        if not _chain_condition(x, k, l, reading):
            reasons.append((3, "jump chain reaches duplicate read", l))
            continue
        base.duplicate = (r, k, l)
        return base
    _, reason, position = max(reasons, key=lambda t: t[0])
    return PatternReport(n, parity, False, reason=reason, position=position)


def _skip(op: Op, reply: int) -> int:
    if op is Op.PLAIN:
        return 1
    return 1 if (op is Op.POS) == (reply == 1) else 2


def jumps_for_constant_tests(x: InstructionSequence) -> InstructionSequence:
    """Replace instructions whose control effect is a fixed jump and whose data effect is moot.

    aux:i with no get anywhere: every set is a pure jump.  aux:i never set to
    1: every get replies 0 and every set:0 is a pure jump.  out.set:0 becomes
    the jump it performs; the family only admits a jump there if its chain ends
    on an out.set:1 form, which overwrites the 0 before anything else happens.
    """
    got, set1 = set(), set()
    for u in x.instructions:
        b = u.basic
        if b is not None and b.register.kind == AUX:
            (got if b.value is None else set1 if b.value == 1 else set()).add(b.register.index)
    out = []
    changed = False
    for u in x.instructions:
        b = u.basic
        reply = None
        if b is not None and b.register.kind == AUX:
            i = b.register.index
            if b.value is not None and i not in got:
                reply = b.value
            elif i not in set1:
                reply = 0
        elif b is not None and b.register.kind == OUTPUT and b.value == 0:
            reply = 0
        if reply is None:
            out.append(u)
        else:
            out.append(jump(_skip(u.op, reply)))
            changed = True
    return InstructionSequence(tuple(out)) if changed else x


def check_shortest(x: InstructionSequence, n: int, reading: str = DEFAULT_READING) -> bool:
    """Decide whether a length-minimal ``x`` computes tstnz^n, purely syntactically."""
    if len(x) != min_len(n):
        raise PreconditionError(f"length {len(x)} is not min_len({n}) = {min_len(n)}")
    return is_member_pce(jumps_for_constant_tests(x), n, reading).member


def explain_shortest(x: InstructionSequence, n: int, reading: str = DEFAULT_READING) -> PatternReport:
    """Like check_shortest but returns the full report (on the jump-normalized sequence)."""
    if len(x) != min_len(n):
        raise PreconditionError(f"length {len(x)} is not min_len({n}) = {min_len(n)}")
    return is_member_pce(jumps_for_constant_tests(x), n, reading)
