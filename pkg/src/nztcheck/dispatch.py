"""Routing a correctness question to the cheapest applicable procedure, and
the desk-scale exhaustive search for shortest implementations."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .core import (AUX, HALT, INPUT, Instruction, InstructionSequence, Op, aux_get,
                   aux_set, in_get, jump, neg, out_set, plain, pos)
from .errors import GuardExceeded, PreconditionError
from .executor import (RegisterState, Terminated, brute_force_counterexample, execute,
                       symbolic_counterexample)
from .generators import min_len
from .membership import DEFAULT_READING, explain_shortest
from .poly import classify, explain_good
from .transforms import rename_aux

STRATEGIES = ("auto", "brute", "shortest", "good", "symbolic")


@dataclass
class Verdict:
    result: bool
    strategy_used: str
    n: int
    length: int
    min_len: int
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.result

    def as_dict(self) -> dict:
        return {"result": self.result, "strategy_used": self.strategy_used, "n": self.n,
                "len": self.length, "min_len": self.min_len, "certificate": self.certificate}


def _describe_run(x: InstructionSequence, bits) -> dict:
    res = execute(x, RegisterState.fresh(bits))
    if isinstance(res, Terminated):
        return {"counterexample_input": list(bits), "outcome": "terminated", "output": res.output}
    return {"counterexample_input": list(bits), "outcome": "inaction",
            "reason": res.reason.value, "at": res.at}


def _brute(x, n, cap, jobs):
    cx = brute_force_counterexample(x, n, cap, jobs)
    return cx is None, ({} if cx is None else _describe_run(x, cx))


def _symbolic(x, n):
    cx = symbolic_counterexample(x, n)
    return cx is None, ({} if cx is None else _describe_run(x, cx))


def _shortest(x, n, reading):
    rep = explain_shortest(x, n, reading)
    cert = {"member": rep.member, "reading": reading}
    if not rep.member:
        cert.update(reason=rep.reason, position=rep.position)
    elif rep.duplicate:
        cert["duplicate"] = list(rep.duplicate)
    return rep.member, cert


def _good(x, n):
    rep = explain_good(x, n)
    return rep.result, rep.as_dict()


def decide(x: InstructionSequence, n: int, strategy: str = "auto", cap: Optional[int] = None,
           jobs: int = 1, reading: str = DEFAULT_READING) -> Verdict:
    """Decide whether ``x`` computes tstnz^n.

    ``auto`` uses the length lower bound, then the syntactic check at exactly
    the minimal length, then the good-sequence checker, and falls back to
    exhaustive evaluation (subject to the input cap).
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if x.max_input_index() > n:
        raise PreconditionError(f"sequence reads in:{x.max_input_index()} beyond n = {n}")
    length, shortest = len(x), min_len(n)

    if strategy == "auto":
        if length < shortest:
            return Verdict(False, "length-bound", n, length, shortest,
                           {"reason": f"len(X) = {length} < min_len({n}) = {shortest}"})
        if length == shortest:
            strategy = "shortest"
        elif classify(x).is_good and x.iregs() == frozenset(range(1, n + 1)):
            strategy = "good"
        else:
            strategy = "brute"
    if strategy == "brute":
        result, cert = _brute(x, n, cap, jobs)
    elif strategy == "symbolic":
        result, cert = _symbolic(x, n)
    elif strategy == "shortest":
        result, cert = _shortest(x, n, reading)
    else:
        result, cert = _good(x, n)
    return Verdict(result, strategy, n, length, shortest, cert)


# Exhaustive search.  Sequences are built left to right; since control only
# moves forward, the set of inputs reaching each later position, the halted
# inputs and the register contents after a prefix do not depend on what
# follows.  Each prefix is therefore evaluated once, for all 2^n inputs at
# once (bitsets), and shared by every extension.

def canonical_alphabet(n: int, max_len: int) -> list:
    """in:1..n, aux:1..max_len, out.set:0/1 in all three forms, #0..#max_len, !."""
    basics = [in_get(i) for i in range(1, n + 1)] + [out_set(0), out_set(1)]
    for a in range(1, max_len + 1):
        basics += [aux_get(a), aux_set(a, 0), aux_set(a, 1)]
    ins = []
    for b in basics:
        ins += [plain(b), pos(b), neg(b)]
    ins += [jump(l) for l in range(max_len + 1)]
    ins.append(HALT)
    return ins


def _input_masks(n: int) -> dict:
    width = 1 << n
    return {i: sum(1 << idx for idx in range(width) if (idx >> (i - 1)) & 1) for i in range(1, n + 1)}


class _Prefix:
    __slots__ = ("reach", "halted", "out", "aux", "dead", "fresh_aux")

    def __init__(self, reach, halted, out, aux, dead, fresh_aux):
        self.reach = reach
        self.halted = halted
        self.out = out
        self.aux = aux
        self.dead = dead
        self.fresh_aux = fresh_aux


def _step(state: _Prefix, p: int, u: Instruction, length: int, masks: dict, full: int) -> _Prefix:
    reach = list(state.reach)
    a = reach[p]
    halted, out, dead, aux = state.halted, state.out, state.dead, state.aux
    fresh = state.fresh_aux
    op = u.op
    b = u.basic
    if b is not None and b.register.kind == AUX and b.register.index == fresh:
        fresh += 1
    if a:
        if op is Op.HALT:
            halted |= a
        elif op is Op.JUMP:
            t = p + u.length
            if u.length and t < length:
                reach[t] |= a
            else:
                dead |= a
        else:
            reg = b.register
            if b.value is None:
                if reg.kind == INPUT:
                    val = masks[reg.index]
                else:
                    val = dict(aux).get(reg.index, 0)
                yes, no = a & val, a & ~val & full
            else:
                content = a if b.value else 0
                yes, no = (a, 0) if b.value else (0, a)
                if reg.kind == AUX:
                    d = dict(aux)
                    d[reg.index] = (d.get(reg.index, 0) & ~a) | content
                    aux = tuple(sorted(d.items()))
                else:
                    out = (out & ~a) | content
            if op is Op.PLAIN:
                yes, no = a, 0
            elif op is Op.NEG:
                yes, no = no, yes
            for t, part in ((p + 1, yes), (p + 2, no)):
                if part:
                    if t < length:
                        reach[t] |= part
                    else:
                        dead |= part
    return _Prefix(tuple(reach), halted, out, aux, dead, fresh)


def _start(n: int, length: int) -> _Prefix:
    reach = [0] * length
    reach[0] = (1 << (1 << n)) - 1
    return _Prefix(tuple(reach), 0, 0, (), 0, 1)


def enumerate_sequences(n: int, length: int, alphabet: list, aux_canonical: bool = False,
                        prune: bool = False, first: Optional[Instruction] = None) -> Iterator:
    """Yield (sequence, computes_tstnz) for every sequence of ``length`` over ``alphabet``.

    ``aux_canonical`` keeps one sequence per aux-renaming class (aux indices
    appear as 1, 2, ... in first-appearance order).  ``prune`` skips every
    extension of a prefix that already strands or mis-answers some input,
    so only correct sequences are guaranteed to be yielded.
    """
    full = (1 << (1 << n)) - 1
    target = full & ~1
    masks = _input_masks(n)

    def allowed(u, state):
        b = u.basic
        return not (aux_canonical and b is not None and b.register.kind == AUX
                    and b.register.index > state.fresh_aux)

    def failing(state):
        return state.dead or (state.out ^ target) & state.halted

    def walk(p, state, prefix):
        if p == length:
            ok = not state.dead and state.halted == full and (state.out & full) == target
            yield InstructionSequence(tuple(prefix)), ok
            return
        choices = alphabet if p or first is None else [first]
        for u in choices:
            if not allowed(u, state):
                continue
            nxt = _step(state, p, u, length, masks, full)
            prefix.append(u)
            if failing(nxt):
                if not prune:
                    for rest in _completions(p + 1, nxt, length, alphabet, allowed):
                        yield InstructionSequence(tuple(prefix) + rest), False
            else:
                yield from walk(p + 1, nxt, prefix)
            prefix.pop()

    yield from walk(0, _start(n, length), [])


def _completions(p, state, length, alphabet, allowed):
    """All suffixes of a prefix, honoring the aux canonical order."""
    if p == length:
        yield ()
        return
    for u in alphabet:
        if not allowed(u, state):
            continue
        b = u.basic
        nxt = state
        if b is not None and b.register.kind == AUX and b.register.index == state.fresh_aux:
            nxt = _Prefix(state.reach, state.halted, state.out, state.aux, state.dead, state.fresh_aux + 1)
        for rest in _completions(p + 1, nxt, length, alphabet, allowed):
            yield (u,) + rest


@dataclass
class SearchResult:
    n: int
    max_len: int
    min_found: Optional[int]
    witnesses: list
    canonical_witnesses: list
    explored: dict  # length -> number of aux-canonical sequences that survived to the end

    def as_dict(self) -> dict:
        from .core import render
        return {"n": self.n, "max_len": self.max_len, "min_found": self.min_found,
                "witness_count": len(self.witnesses),
                "canonical_witnesses": [render(w) for w in self.canonical_witnesses],
                "explored": {str(k): v for k, v in self.explored.items()}}


def _aux_variants(x: InstructionSequence, max_aux: int) -> list:
    """Every sequence obtained from aux-canonical ``x`` by an injective aux renaming into 1..max_aux."""
    used = sorted({u.basic.register.index for u in x.instructions
                   if u.basic is not None and u.basic.register.kind == AUX})
    if not used:
        return [x]
    out = []
    for image in itertools.permutations(range(1, max_aux + 1), len(used)):
        names = dict(zip(used, image))
        ins = []
        for u in x.instructions:
            b = u.basic
            if b is None or b.register.kind != AUX:
                ins.append(u)
            else:
                k = names[b.register.index]
                ins.append(Instruction(u.op, aux_get(k) if b.value is None else aux_set(k, b.value)))
        out.append(InstructionSequence(tuple(ins)))
    return out


def _search_branch(args):
    n, length, max_len, first = args
    alphabet = canonical_alphabet(n, max_len)
    found, explored = [], 0
    for x, ok in enumerate_sequences(n, length, alphabet, aux_canonical=True, prune=True, first=first):
        explored += 1
        if ok:
            found.append(x)
    return found, explored


def exhaustive_min_search(n: int, max_len: int, jobs: int = 1, n_guard: int = 2,
                          len_guard: int = 6) -> SearchResult:
    """Least length <= max_len of a sequence computing tstnz^n, with all witnesses at it.

    The search explores one sequence per aux-renaming class; the full witness
    list is recovered by applying every injective renaming into aux:1..max_len.
    """
    if n < 1 or max_len < 1:
        raise PreconditionError("n and max_len must be positive")
    if n > n_guard or max_len > len_guard:
        raise GuardExceeded(f"search limited to n <= {n_guard} and max_len <= {len_guard}")
    alphabet = canonical_alphabet(n, max_len)
    explored = {}
    for length in range(1, max_len + 1):
        firsts = [u for u in alphabet if not (u.basic is not None and u.basic.register.kind == AUX
                                              and u.basic.register.index > 1)]
        tasks = [(n, length, max_len, u) for u in firsts]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_search_branch, tasks))
        else:
            parts = [_search_branch(t) for t in tasks]
        found = [w for ws, _ in parts for w in ws]
        explored[length] = sum(e for _, e in parts)
        if found:
            for w in found:
                assert rename_aux(w) == w and rename_aux(rename_aux(w)) == rename_aux(w)
            witnesses = [v for w in found for v in _aux_variants(w, max_len)]
            return SearchResult(n, max_len, length, witnesses, found, explored)
    return SearchResult(n, max_len, None, [], [], explored)
