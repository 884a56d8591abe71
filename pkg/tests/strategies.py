"""Hypothesis strategies for instructions and sequences."""

from hypothesis import strategies as st

from nztcheck.core import HALT, InstructionSequence, aux_get, aux_set, in_get, jump, neg, out_set, plain, pos


def basics(max_in=4, max_aux=3):
    return st.one_of(
        st.integers(1, max_in).map(in_get),
        st.integers(0, 1).map(out_set),
        st.integers(1, max_aux).map(aux_get),
        st.tuples(st.integers(1, max_aux), st.integers(0, 1)).map(lambda t: aux_set(*t)),
    )


def instructions(max_in=4, max_aux=3, max_jump=8):
    return st.one_of(
        st.tuples(st.sampled_from((plain, pos, neg)), basics(max_in, max_aux)).map(lambda t: t[0](t[1])),
        st.integers(0, max_jump).map(jump),
        st.just(HALT),
    )


def sequences(max_in=4, max_aux=3, min_size=1, max_size=12):
    return st.lists(instructions(max_in, max_aux, max_size + 1), min_size=min_size,
                    max_size=max_size).map(lambda xs: InstructionSequence(tuple(xs)))


def reads(n):
    return st.tuples(st.sampled_from((pos, neg)), st.integers(1, n)).map(lambda t: t[0](in_get(t[1])))
