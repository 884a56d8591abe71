"""Propositions, their compilation to branching instruction sequences, and the
reduction from unsatisfiability to tstnz correctness."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Optional, Union

from .core import (HALT, OUTPUT, Instruction, InstructionSequence, Op, aux_get, aux_set, in_get,
                   jump, neg, out_set, plain, pos)
from .errors import GuardExceeded, PreconditionError, PropSyntaxError
from .generators import gen_tstnz_prime, min_len


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("variable indices start at 1")

    def __len__(self):
        return 1

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Not:
    arg: "Prop"
    size: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "size", len(self.arg) + 1)

    def __len__(self):
        return self.size

    def __str__(self):
        return f"!{_wrap(self.arg, Not)}"


@dataclass(frozen=True)
class And:
    left: "Prop"
    right: "Prop"
    size: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "size", len(self.left) + len(self.right) + 1)

    def __len__(self):
        return self.size

    def __str__(self):
        return f"{_wrap(self.left, And)} & {_wrap(self.right, And, right=True)}"


@dataclass(frozen=True)
class Or:
    left: "Prop"
    right: "Prop"
    size: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "size", len(self.left) + len(self.right) + 1)

    def __len__(self):
        return self.size

    def __str__(self):
        return f"{_wrap(self.left, Or)} | {_wrap(self.right, Or, right=True)}"


Prop = Union[Var, Not, And, Or]
_RANK = {Or: 1, And: 2, Not: 3, Var: 4}


def _wrap(p, parent, right=False):
    # Binary operators associate to the left, so a right operand of equal rank needs parentheses.
    r, pr = _RANK[type(p)], _RANK[parent]
    if r < pr or (right and r == pr):
        return f"({p})"
    return str(p)


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|([!&|()]))")


def parse_prop(text: str) -> Prop:
    """Parse ``x<k>``, ``!``, ``&``, ``|`` and parentheses; ! binds tighter than &, & than |."""
    tokens = []
    p = 0
    while True:
        while p < len(text) and text[p].isspace():
            p += 1
        if p == len(text):
            break
        m = _TOKEN.match(text, p)
        if not m:
            raise PropSyntaxError(f"unexpected character {text[p]!r}", p)
        start = m.start(1) if m.group(1) else m.start(3)
        if m.group(1):
            k = int(m.group(2))
            if k < 1:
                raise PropSyntaxError("variable indices start at 1", start)
            tokens.append(("var", k, start))
        else:
            tokens.append((m.group(3), None, start))
        p = m.end()
    tokens.append(("end", None, len(text)))
    pos_ = 0

    def peek():
        return tokens[pos_][0]

    def take(kind):
        nonlocal pos_
        tok = tokens[pos_]
        if tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[0])
            raise PropSyntaxError(f"expected {kind!r}, found {found}", tok[2])
        pos_ += 1
        return tok

    def disjunction():
        nonlocal pos_
        node = conjunction()
        while peek() == "|":
            pos_ += 1
            node = Or(node, conjunction())
        return node

    def conjunction():
        nonlocal pos_
        node = negation()
        while peek() == "&":
            pos_ += 1
            node = And(node, negation())
        return node

    def negation():
        nonlocal pos_
        if peek() == "!":
            pos_ += 1
            return Not(negation())
        if peek() == "(":
            pos_ += 1
            node = disjunction()
            take(")")
            return node
        tok = tokens[pos_]
        if tok[0] != "var":
            found = "end of input" if tok[0] == "end" else repr(tok[0])
            raise PropSyntaxError(f"expected a variable, '!' or '(', found {found}", tok[2])
        pos_ += 1
        return Var(tok[1])

    node = disjunction()
    take("end")
    return node


def variables(p: Prop) -> frozenset:
    if isinstance(p, Var):
        return frozenset((p.index,))
    if isinstance(p, Not):
        return variables(p.arg)
    return variables(p.left) | variables(p.right)


def evaluate(p: Prop, value) -> bool:
    """``value`` maps a variable index to a bit (dict, or sequence indexed from 1 via value[i-1])."""
    if isinstance(p, Var):
        v = value[p.index] if isinstance(value, dict) else value[p.index - 1]
        return bool(v)
    if isinstance(p, Not):
        return not evaluate(p.arg, value)
    if isinstance(p, And):
        return evaluate(p.left, value) and evaluate(p.right, value)
    return evaluate(p.left, value) or evaluate(p.right, value)


def count_vars(p: Prop) -> int:
    if isinstance(p, Var):
        return 1
    if isinstance(p, Not):
        return count_vars(p.arg)
    return count_vars(p.left) + count_vars(p.right)


# Compilation works right to left.  Targets are named by their distance from
# the end of the code: the instruction emitted k-th (counting from the end)
# has distance k, the true exit (just past the code) is 0 and the false exit
# (one further) is -1.  Emitting more code in front never changes these.

def compile_phi_star(p: Prop) -> InstructionSequence:
    """Tests and forward jumps only; ends at offset len+1 when ``p`` holds, len+2 otherwise."""
    code = []  # reversed

    def test(i, t, f):
        here = len(code)
        if t == here and f == here - 1:
            code.append(pos(in_get(i)))
        elif f == here and t == here - 1:
            code.append(neg(in_get(i)))
        elif t == here:
            code.append(jump(here + 1 - f))
            code.append(neg(in_get(i)))
        elif f == here:
            code.append(jump(here + 1 - t))
            code.append(pos(in_get(i)))
        else:
            code.append(jump(here + 1 - f))
            code.append(jump(here + 2 - t))
            code.append(pos(in_get(i)))
        return len(code)

    def emit(node, t, f):
        if isinstance(node, Var):
            return test(node.index, t, f)
        if isinstance(node, Not):
            return emit(node.arg, f, t)
        if isinstance(node, And):
            rest = emit(node.right, t, f)
            return emit(node.left, rest, f)
        rest = emit(node.right, t, f)
        return emit(node.left, t, rest)

    emit(p, 0, -1)
    return InstructionSequence(tuple(reversed(code)))


def compile_phi(p: Prop) -> InstructionSequence:
    return compile_phi_star(p) + InstructionSequence((plain(out_set(1)), HALT))


# Worst case of compile_phi_star: three instructions per variable occurrence,
# and a single occurrence always costs one.  With k >= 2 occurrences a
# proposition has at least k - 1 binary connectives, so
# len(phi) <= 3k + 2 < 4 * (2k - 1) <= 4 * len(p); with k = 1, len(phi) = 3 < 4.
COMPILER_CONSTANT = 4


@dataclass(frozen=True)
class ReductionParams:
    q: Fraction
    m: int
    c: int = COMPILER_CONSTANT
    c_prime: int = field(init=False)

    def __post_init__(self):
        q = Fraction(self.q)
        object.__setattr__(self, "q", q)
        if q <= 0:
            raise PreconditionError("q must be positive")
        if self.m <= 3:
            raise PreconditionError("m must exceed 3")
        if (1 / q).denominator == 1:
            raise PreconditionError(f"1/q = {1 / q} is an integer: no c' has (c'-1)q < 1 < c'q")
        c_prime = (1 / q).__floor__() + 1
        assert (c_prime - 1) * q < 1 < c_prime * q
        object.__setattr__(self, "c_prime", c_prime)


def _set_prefix(n_inputs: int) -> InstructionSequence:
    """The shortest tstnz program without its final halt, with out replaced by aux:1."""
    shortest = gen_tstnz_prime(n_inputs).instructions[:-1]
    ins = []
    for u in shortest:
        if u.basic is not None and u.basic.register.kind == OUTPUT:
            u = Instruction(u.op, aux_set(1, u.basic.value))
        ins.append(u)
    return InstructionSequence(tuple(ins))


def _tail() -> InstructionSequence:
    a = aux_get(1)
    return InstructionSequence((
        jump(4), pos(a), plain(out_set(1)), HALT,
        pos(a), pos(out_set(0)), plain(out_set(1)), HALT,
    ))


def psi_inputs(p: Prop, params: ReductionParams) -> int:
    """N, the number of input registers the reduction of ``p`` reads."""
    return params.c * params.c_prime * len(p)


def build_psi(p: Prop, params: ReductionParams) -> InstructionSequence:
    """A program that computes tstnz^N exactly when ``p`` is unsatisfiable."""
    size = len(p)
    n_inputs = psi_inputs(p, params)
    if max(variables(p)) > n_inputs:
        raise PreconditionError(f"x{max(variables(p))} exceeds the {n_inputs} input registers")
    core = compile_phi_star(p)
    phi_len = len(core) + 2
    assert phi_len < params.c * size, "compiler length constant violated"
    assert all(u.op is Op.JUMP or u.is_read for u in core)
    program = _set_prefix(n_inputs) + core + _tail()
    assert len(program) == min_len(n_inputs) + phi_len + 5
    assert len(program) <= min_len(n_inputs) + ceil(params.q * n_inputs) + params.m
    return program


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    witness: Optional[dict] = None


def sat_oracle(p: Prop, limit: int = 20) -> SatResult:
    names = sorted(variables(p))
    if len(names) > limit:
        raise GuardExceeded(f"{len(names)} variables exceed the truth-table limit of {limit}")
    for bits in itertools.product((0, 1), repeat=len(names)):
        value = dict(zip(names, bits))
        if evaluate(p, value):
            return SatResult(True, value)
    return SatResult(False)


def all_props(size: int, n_vars: int):
    """Every proposition of exactly ``size`` over x1..x{n_vars}."""
    if size == 1:
        return [Var(i) for i in range(1, n_vars + 1)]
    out = [Not(a) for a in all_props(size - 1, n_vars)]
    for left in range(1, size - 1):
        ls = all_props(left, n_vars)
        rs = all_props(size - 1 - left, n_vars)
        for a in ls:
            for b in rs:
                out.append(And(a, b))
                out.append(Or(a, b))
    return out


def random_prop(rng, max_size: int, n_vars: int) -> Prop:
    """A random proposition of size <= max_size over x1..x{n_vars}."""
    size = rng.randint(1, max_size)

    def build(k):
        if k == 1:
            return Var(rng.randint(1, n_vars))
        if k == 2 or rng.random() < 0.25:
            return Not(build(k - 1))
        left = rng.randint(1, k - 2)
        return (And if rng.random() < 0.5 else Or)(build(left), build(k - 1 - left))

    return build(size)
