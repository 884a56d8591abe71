"""Register elimination and the auxiliary-register polarity flip."""

from __future__ import annotations

from typing import Mapping

from .core import AUX, Instruction, InstructionSequence, Op, aux_get, aux_set, in_get, jump
from .errors import PreconditionError


def eliminate(x: InstructionSequence, alpha: Mapping[int, int], strict: bool = True) -> InstructionSequence:
    """Fix the inputs in ``alpha`` and renumber the surviving ones order-preservingly.

    Test reads of a fixed register become ``#1``/``#2`` according to polarity
    and value; plain reads of it become ``#1``.  With ``strict`` the domain of
    ``alpha`` must be a proper subset of iregs(x); the checkers pass
    ``strict=False`` because they also eliminate every read register.
    """
    regs = x.iregs()
    n = len(regs)
    if regs != frozenset(range(1, n + 1)):
        raise PreconditionError(f"iregs(X) = {sorted(regs)} is not of the form {{1..n}}")
    for i, b in alpha.items():
        if i not in regs:
            raise PreconditionError(f"in:{i} is not read in X")
        if b not in (0, 1):
            raise PreconditionError(f"in:{i} must be assigned a bit, got {b!r}")
    if strict and len(alpha) >= n:
        raise PreconditionError("the assignment must fix a proper subset of iregs(X)")

    beta = {}
    for j in sorted(regs.difference(alpha)):
        beta[j] = len(beta) + 1
    one, two = jump(1), jump(2)
    out = []
    for u in x.instructions:
        i = u.input_index
        if i is None:
            out.append(u)
        elif i in alpha:
            if u.op is Op.PLAIN:
                out.append(one)
            else:
                # +in:i.get proceeds on reply 1; -in:i.get on reply 0.
                out.append(one if (u.op is Op.POS) == (alpha[i] == 1) else two)
        elif i in beta:
            out.append(u if beta[i] == i else Instruction(u.op, in_get(beta[i])))
        else:
            # plain get of a register no read instruction mentions: a no-op
            out.append(one)
    return InstructionSequence(tuple(out))


def fix_register(x: InstructionSequence, i: int, b: int, strict: bool = True) -> InstructionSequence:
    return eliminate(x, {i: b}, strict=strict)


_FLIP_OP = {Op.PLAIN: Op.PLAIN, Op.POS: Op.NEG, Op.NEG: Op.POS}


def chi(x: InstructionSequence, i: int) -> InstructionSequence:
    """Complement the role of aux:i: swap test polarity on gets, invert set values."""
    out = []
    for u in x.instructions:
        b = u.basic
        if b is None or b.register.kind != AUX or b.register.index != i:
            out.append(u)
        elif b.value is None:
            out.append(Instruction(_FLIP_OP[u.op], b) if u.op is not Op.PLAIN else u)
        else:
            out.append(Instruction(_FLIP_OP[u.op], aux_set(i, 1 - b.value)))
    return InstructionSequence(tuple(out))


def rename_aux(x: InstructionSequence) -> InstructionSequence:
    """Renumber aux registers 1, 2, ... in order of first appearance."""
    names = {}
    out = []
    for u in x.instructions:
        b = u.basic
        if b is None or b.register.kind != AUX:
            out.append(u)
            continue
        k = names.setdefault(b.register.index, len(names) + 1)
        if k == b.register.index:
            out.append(u)
        else:
            out.append(Instruction(u.op, aux_get(k) if b.value is None else aux_set(k, b.value)))
    return InstructionSequence(tuple(out))
