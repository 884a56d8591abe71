"""Small-step execution and exhaustive correctness checking.

Input vectors are indexed with b1 as the least significant bit: the vector
(b1, ..., bn) has index sum(b_i << (i - 1)).
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .core import AUX, INPUT, InstructionSequence, Op
from .errors import CapExceeded, PreconditionError

DEFAULT_CAP = 24


def default_cap() -> int:
    return int(os.environ.get("NZTCHECK_CAP", DEFAULT_CAP))


@dataclass
class RegisterState:
    inputs: tuple
    output: int = 0
    aux: dict = field(default_factory=dict)

    @classmethod
    def fresh(cls, inputs: Sequence[int]) -> "RegisterState":
        return cls(tuple(inputs))

    def copy(self) -> "RegisterState":
        return RegisterState(self.inputs, self.output, dict(self.aux))


class InactionReason(enum.Enum):
    JUMP_ZERO = "jump-zero"
    JUMP_PAST_END = "jump-past-end"
    FELL_OFF_END = "fell-off-end"


@dataclass(frozen=True)
class Terminated:
    final: RegisterState
    steps: int

    @property
    def output(self) -> int:
        return self.final.output


@dataclass(frozen=True)
class Inaction:
    reason: InactionReason
    at: int  # 1-based position of the instruction that caused it
    steps: int


ExecOutcome = Union[Terminated, Inaction]


def execute(x: InstructionSequence, init: RegisterState, trace: Optional[list] = None) -> ExecOutcome:
    """Run ``x`` from ``init``; ``trace`` collects (position, instruction, reply) triples."""
    ins = x.instructions
    n = len(init.inputs)
    if x.max_input_index() > n:
        raise PreconditionError(
            f"sequence reads in:{x.max_input_index()} but only {n} inputs were given")
    state = init.copy()
    length = len(ins)
    pc = 0
    steps = 0
    while True:
        u = ins[pc]
        steps += 1
        assert steps <= length
        op = u.op
        if op is Op.HALT:
            if trace is not None:
                trace.append((pc + 1, u, None))
            return Terminated(state, steps)
        if op is Op.JUMP:
            if trace is not None:
                trace.append((pc + 1, u, None))
            if u.length == 0:
                return Inaction(InactionReason.JUMP_ZERO, pc + 1, steps)
            if pc + u.length >= length:
                return Inaction(InactionReason.JUMP_PAST_END, pc + 1, steps)
            pc += u.length
            continue
        basic = u.basic
        reg = basic.register
        if basic.value is None:
            if reg.kind == INPUT:
                reply = state.inputs[reg.index - 1]
            else:
                reply = state.aux.get(reg.index, 0)
        else:
            reply = basic.value
            if reg.kind == AUX:
                state.aux[reg.index] = reply
            else:
                state.output = reply
        if trace is not None:
            trace.append((pc + 1, u, reply))
        here = pc
        if op is Op.PLAIN or (op is Op.POS) == (reply == 1):
            pc += 1
        else:
            pc += 2
        if pc >= length:
            return Inaction(InactionReason.FELL_OFF_END, here + 1, steps)


def bits_of(index: int, n: int) -> tuple:
    return tuple((index >> i) & 1 for i in range(n))


def index_of(bits: Sequence[int]) -> int:
    return sum(b << i for i, b in enumerate(bits))


@dataclass(frozen=True)
class TruthFunction:
    arity: int
    table: bytes

    def __post_init__(self):
        if len(self.table) != 1 << self.arity:
            raise ValueError("truth table length must be 2^arity")

    def __call__(self, bits: Sequence[int]) -> int:
        return self.table[index_of(bits)]


def tstnz(n: int) -> TruthFunction:
    """The n-ary non-zeroness test: 1 iff some input bit is 1."""
    if n < 0:
        raise ValueError("arity must be a natural number")
    return TruthFunction(n, bytes([0] + [1] * ((1 << n) - 1)))


def _check_inputs(x: InstructionSequence, n: int, cap: Optional[int]) -> None:
    cap = default_cap() if cap is None else cap
    if n > cap:
        raise CapExceeded(n, cap)
    if x.max_input_index() > n:
        raise PreconditionError(
            f"sequence references in:{x.max_input_index()} beyond the {n} input registers")


def computes(x: InstructionSequence, f: TruthFunction, cap: Optional[int] = None) -> bool:
    """Per-input small-step check that ``x`` computes ``f``."""
    return find_counterexample(x, f, cap) is None


def find_counterexample(x: InstructionSequence, f: TruthFunction, cap: Optional[int] = None):
    _check_inputs(x, f.arity, cap)
    for idx in range(1 << f.arity):
        bits = bits_of(idx, f.arity)
        res = execute(x, RegisterState.fresh(bits))
        if not isinstance(res, Terminated) or res.output != f.table[idx]:
            return bits
    return None


# Sweep: all inputs advance together, position by position.  Control flow is
# forward only, so processing positions in increasing order applies every
# register update to exactly the inputs that execute it, in their own order.
# A "function" is anything the algebra can combine: a 2^n-bit integer for the
# exhaustive backend, a BDD node for the symbolic one.

class BitsetAlgebra:
    def __init__(self, n: int, fixed: Sequence[int] = ()):
        # ``fixed`` pins the top inputs: inputs n+1..n+len(fixed) are constants.
        self.n = n
        self.width = 1 << n
        self.true = (1 << self.width) - 1
        self.false = 0
        self.fixed = tuple(fixed)

    def var(self, i: int):
        if i > self.n:
            return self.true if self.fixed[i - self.n - 1] else 0
        half = 1 << (i - 1)
        mask = ((1 << half) - 1) << half
        w = half << 1
        while w < self.width:
            mask |= mask << w
            w <<= 1
        return mask

    def neg(self, a):
        return a ^ self.true

    def xor(self, a, b):
        return a ^ b

    def is_false(self, a) -> bool:
        return a == 0

    def pick(self, a) -> int:
        """Lowest input index in the set ``a`` (nonempty)."""
        return (a & -a).bit_length() - 1


class BddAlgebra:
    def __init__(self, n: int):
        from dd.autoref import BDD

        self.n = n
        self.bdd = BDD()
        self.names = [f"x{i}" for i in range(1, n + 1)]
        if self.names:
            self.bdd.declare(*self.names)
        self.true = self.bdd.true
        self.false = self.bdd.false

    def var(self, i: int):
        return self.bdd.var(self.names[i - 1])

    def neg(self, a):
        return ~a

    def xor(self, a, b):
        return self.bdd.apply("xor", a, b)

    def is_false(self, a) -> bool:
        return a == self.false

    def pick(self, a) -> tuple:
        model = self.bdd.pick(a, care_vars=set(self.names))
        return tuple(int(model[name]) for name in self.names)


def sweep(x: InstructionSequence, n: int, alg):
    """Return (halted, out): the inputs that terminate, and final output 1 among them."""
    ins = x.instructions
    length = len(ins)
    false = alg.false
    reach = [false] * (length + 2)
    reach[0] = alg.true
    halted = false
    out = false
    aux = {}
    inputs = {}
    for p in range(length):
        a = reach[p]
        if alg.is_false(a):
            continue
        reach[p] = None
        u = ins[p]
        op = u.op
        if op is Op.HALT:
            halted = halted | a
            continue
        if op is Op.JUMP:
            if 0 < u.length and p + u.length < length:
                reach[p + u.length] = reach[p + u.length] | a
            continue
        basic = u.basic
        reg = basic.register
        if basic.value is None:
            if reg.kind == INPUT:
                reply = inputs.get(reg.index)
                if reply is None:
                    reply = inputs[reg.index] = alg.var(reg.index)
            else:
                reply = aux.get(reg.index, false)
            yes = a & reply
            no = a & alg.neg(reply)
        else:
            if basic.value:
                content_set = a
                yes, no = a, false
            else:
                content_set = false
                yes, no = false, a
            if reg.kind == AUX:
                old = aux.get(reg.index, false)
                aux[reg.index] = (old & alg.neg(a)) | content_set
            else:
                out = (out & alg.neg(a)) | content_set
        if op is Op.PLAIN:
            if p + 1 < length:
                reach[p + 1] = reach[p + 1] | a
            continue
        if op is Op.NEG:
            yes, no = no, yes
        if p + 1 < length:
            reach[p + 1] = reach[p + 1] | yes
        if p + 2 < length:
            reach[p + 2] = reach[p + 2] | no
    return halted, out & halted


def _tstnz_fn(alg, n: int):
    if any(getattr(alg, "fixed", ())):
        return alg.true
    acc = alg.false
    for i in range(1, n + 1):
        acc = acc | alg.var(i)
    return acc


def _mismatch(x: InstructionSequence, n: int, alg):
    halted, out = sweep(x, n, alg)
    target = _tstnz_fn(alg, n)
    return alg.neg(halted) | alg.xor(out, target)


def _chunk_counterexample(args):
    x, free, fixed = args
    alg = BitsetAlgebra(free, fixed)
    bad = _mismatch(x, free, alg)
    if alg.is_false(bad):
        return None
    return bits_of(alg.pick(bad), free) + tuple(fixed)


def brute_force_counterexample(x: InstructionSequence, n: int, cap: Optional[int] = None,
                               jobs: int = 1, split_bits: Optional[int] = None):
    """Exhaustive search over all 2^n inputs for one where ``x`` fails tstnz^n.

    With ``jobs > 1`` (or an explicit ``split_bits``) the top input bits are
    fixed per chunk and chunks are checked independently; the reported
    counterexample is always the lowest failing input index.
    """
    _check_inputs(x, n, cap)
    if split_bits is None:
        split_bits = 0 if jobs <= 1 else min(n, max(1, (jobs - 1).bit_length() + 1))
    split_bits = min(split_bits, n)
    free = n - split_bits
    tasks = [(x, free, bits_of(c, split_bits)) for c in range(1 << split_bits)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_chunk_counterexample, tasks))
    else:
        results = map(_chunk_counterexample, tasks)
    for r in results:
        if r is not None:
            return r
    return None


def brute_force_check(x: InstructionSequence, n: int, cap: Optional[int] = None,
                      jobs: int = 1) -> bool:
    """True iff ``x`` computes tstnz^n, by exhaustive evaluation of all inputs."""
    return brute_force_counterexample(x, n, cap, jobs) is None


def symbolic_counterexample(x: InstructionSequence, n: int):
    """Exact check with BDDs instead of enumeration; no input-size cap."""
    if x.max_input_index() > n:
        raise PreconditionError(
            f"sequence references in:{x.max_input_index()} beyond the {n} input registers")
    alg = BddAlgebra(n)
    bad = _mismatch(x, n, alg)
    if alg.is_false(bad):
        return None
    return alg.pick(bad)


def symbolic_check(x: InstructionSequence, n: int) -> bool:
    return symbolic_counterexample(x, n) is None


def outputs_for_all(x: InstructionSequence, n: int):
    """Per-input results as a list: final output bit, or None on inaction."""
    alg = BitsetAlgebra(n)
    halted, out = sweep(x, n, alg)
    return [((out >> i) & 1) if (halted >> i) & 1 else None for i in range(1 << n)]
