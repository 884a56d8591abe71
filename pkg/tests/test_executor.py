import pytest
from hypothesis import given, strategies as st

from nztcheck.core import InstructionSequence, parse
from nztcheck.errors import CapExceeded, PreconditionError
from nztcheck.executor import (BitsetAlgebra, Inaction, InactionReason, RegisterState, Terminated,
                               TruthFunction, brute_force_check, brute_force_counterexample, computes,
                               execute, find_counterexample, outputs_for_all, symbolic_check,
                               symbolic_counterexample, tstnz)
from nztcheck.generators import gen_tstnz, gen_tstnz_prime
from oracles import naive_outputs
from strategies import sequences


def run(x, bits, trace=None):
    return execute(x, RegisterState.fresh(bits), trace)


def test_shortest_two_on_zero_and_first_bit():
    x = gen_tstnz_prime(2)
    r = run(x, (0, 0))
    assert isinstance(r, Terminated) and r.output == 0
    r = run(x, (1, 0))
    assert isinstance(r, Terminated) and r.output == 1


def test_negative_set_skips_halt():
    r = run(parse("-out.set:1 ; !"), (0,))
    assert r == Inaction(InactionReason.FELL_OFF_END, 1, 1)


@pytest.mark.parametrize("text, reason, at", [
    ("#0 ; !", InactionReason.JUMP_ZERO, 1),
    ("#2 ; !", InactionReason.JUMP_PAST_END, 1),
    ("out.set:1", InactionReason.FELL_OFF_END, 1),
    ("+in:1.get ; !", InactionReason.FELL_OFF_END, 1),  # reply 0 skips past the end
])
def test_inaction_reasons(text, reason, at):
    r = run(parse(text), (0,))
    assert isinstance(r, Inaction) and r.reason is reason and r.at == at


def test_set_replies_written_value():
    # +aux:1.set:0 replies 0, so the positive test skips the next instruction.
    r = run(parse("+aux:1.set:0 ; out.set:1 ; !"), ())
    assert isinstance(r, Terminated) and r.output == 0 and r.final.aux == {1: 0}


def test_input_index_out_of_range_is_an_error():
    with pytest.raises(PreconditionError):
        run(parse("+in:3.get ; !"), (0, 1))


def test_trace_records_replies():
    trace = []
    run(gen_tstnz_prime(2), (0, 1), trace)
    assert [(p, str(u), r) for p, u, r in trace] == [
        (1, "-in:1.get", 0), (2, "+in:2.get", 1), (3, "out.set:1", 1), (4, "!", None)]


def test_computes_examples():
    assert computes(gen_tstnz(3), tstnz(3))
    assert not computes(parse("!"), tstnz(1))
    ins = gen_tstnz_prime(4).instructions
    swapped = InstructionSequence(ins[:-2] + (ins[-1], ins[-2]))
    assert not computes(swapped, tstnz(4))


def test_tstnz_tables():
    assert list(tstnz(1).table) == [0, 1]
    assert list(tstnz(2).table) == [0, 1, 1, 1]
    assert tstnz(3)((0, 0, 0)) == 0
    with pytest.raises(ValueError):
        TruthFunction(2, bytes(3))


def test_brute_force_examples():
    assert brute_force_check(gen_tstnz_prime(5), 5)
    no_halt = parse("+in:1.get ; out.set:1")
    assert not brute_force_check(no_halt, 1)
    assert brute_force_check(parse("#1 ; -in:1.get ; +in:2.get ; out.set:1 ; !"), 2)


def test_cap_is_enforced():
    with pytest.raises(CapExceeded):
        brute_force_check(gen_tstnz(3), 3, cap=2)
    with pytest.raises(CapExceeded):
        computes(gen_tstnz(3), tstnz(3), cap=2)


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("NZTCHECK_CAP", "2")
    with pytest.raises(CapExceeded):
        brute_force_check(gen_tstnz(3), 3)


def test_reference_programs_up_to_twelve():
    for n in range(1, 13):
        assert brute_force_check(gen_tstnz(n), n)
        assert brute_force_check(gen_tstnz_prime(n), n)


def test_bitset_input_masks_follow_index_convention():
    alg = BitsetAlgebra(3)
    for i in range(1, 4):
        mask = alg.var(i)
        assert all(((mask >> idx) & 1) == ((idx >> (i - 1)) & 1) for idx in range(8))


@given(sequences(max_in=3, max_aux=2, max_size=10))
def test_sweep_matches_small_step_interpreter(x):
    n = 3
    assert outputs_for_all(x, n) == naive_outputs(x, n)
    expected = next((idx for idx, o in enumerate(naive_outputs(x, n)) if o != (1 if idx else 0)), None)
    cx = brute_force_counterexample(x, n)
    if expected is None:
        assert cx is None
    else:
        assert cx == tuple((expected >> i) & 1 for i in range(n))
    assert (find_counterexample(x, tstnz(n)) is None) == (cx is None)


@given(sequences(max_in=4, max_aux=2, max_size=10), st.integers(0, 4))
def test_split_search_equals_sequential(x, split):
    assert brute_force_counterexample(x, 4, split_bits=split) == brute_force_counterexample(x, 4)


def test_parallel_workers_equal_sequential(rng):
    from oracles import alphabet, random_sequence
    xs = [random_sequence(5, 12, rng, alphabet(5, 12)) for _ in range(20)] + [gen_tstnz(5)]
    for x in xs:
        assert brute_force_counterexample(x, 5, jobs=2) == brute_force_counterexample(x, 5)


@given(sequences(max_in=4, max_aux=2, max_size=10))
def test_symbolic_equals_brute_force(x):
    assert symbolic_check(x, 4) == brute_force_check(x, 4)
    cx = symbolic_counterexample(x, 4)
    if cx is not None:
        r = run(x, cx)
        idx = sum(b << i for i, b in enumerate(cx))
        assert not (isinstance(r, Terminated) and r.output == (1 if idx else 0))


@given(sequences(max_in=3, max_aux=1, max_size=10), st.lists(st.integers(0, 1), min_size=3, max_size=3))
def test_steps_bounded_and_aux_untouched_without_aux(x, bits):
    r = run(x, tuple(bits))
    assert r.steps <= len(x)
    if not x.uses_aux() and isinstance(r, Terminated):
        assert r.final.aux == {}


@given(sequences(max_in=3, max_size=10), st.lists(st.integers(0, 1), min_size=3, max_size=3))
def test_execution_is_deterministic(x, bits):
    assert run(x, tuple(bits)) == run(x, tuple(bits))
