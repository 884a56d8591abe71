"""Reference non-zeroness test programs and the shortest-length formula."""

from __future__ import annotations

from .core import HALT, InstructionSequence, in_get, neg, out_set, plain, pos


def gen_tstnz(n: int) -> InstructionSequence:
    """``+in:i.get ; out.set:1`` for each i, then ``!``: length 2n + 1."""
    if n < 1:
        raise ValueError("n must be positive")
    set1 = plain(out_set(1))
    ins = []
    for i in range(1, n + 1):
        ins += [pos(in_get(i)), set1]
    ins.append(HALT)
    return InstructionSequence(tuple(ins))


def gen_tstnz_prime(n: int) -> InstructionSequence:
    """Shortest implementation: pairs ``-in:a.get ; +in:b.get ; out.set:1``.

    For odd n a single ``+in:1.get ; out.set:1`` block comes first.
    """
    if n < 1:
        raise ValueError("n must be positive")
    set1 = plain(out_set(1))
    ins = []
    first = 1
    if n % 2:
        ins += [pos(in_get(1)), set1]
        first = 2
    for a in range(first, n + 1, 2):
        ins += [neg(in_get(a)), pos(in_get(a + 1)), set1]
    ins.append(HALT)
    return InstructionSequence(tuple(ins))


def min_len(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return 3 * n // 2 + 1 if n % 2 == 0 else 3 * (n + 1) // 2
