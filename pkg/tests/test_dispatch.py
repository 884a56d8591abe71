import random

import pytest

from nztcheck.core import InstructionSequence, in_get, parse, pos, render
from nztcheck.dispatch import (canonical_alphabet, decide, enumerate_sequences,
                               exhaustive_min_search)
from nztcheck.errors import CapExceeded, GuardExceeded, PreconditionError
from nztcheck.executor import brute_force_check
from nztcheck.generators import gen_tstnz, gen_tstnz_prime, min_len
from nztcheck.membership import is_member_pce
from nztcheck.transforms import rename_aux
from oracles import mutate, naive_correct, random_good, random_sequence


def test_decide_examples():
    v = decide(parse("!"), 3)
    assert not v.result and v.strategy_used == "length-bound" and v.length == 1 and v.min_len == 6
    v = decide(gen_tstnz(4), 4)
    assert v.result and v.strategy_used == "brute" and v.length == 9 and v.min_len == 7
    v = decide(gen_tstnz_prime(5), 5)
    assert v.result and v.strategy_used == "shortest"


def test_auto_routes_good_sequences():
    v = decide(parse("#1 ; -in:1.get ; +in:2.get ; out.set:1 ; !"), 2)
    assert v.result and v.strategy_used == "good"
    v = decide(parse("+in:1.get ; #2 ; -in:1.get ; +in:2.get ; out.set:1 ; !"), 2)
    assert not v.result and v.strategy_used == "good"


def test_certificates():
    v = decide(parse("+in:1.get ; out.set:1 ; !"), 1, strategy="brute")
    assert v.result
    v = decide(parse("-in:1.get ; out.set:1 ; !"), 1, strategy="brute")
    assert not v.result
    c = v.certificate
    assert c["counterexample_input"] in ([0], [1]) and c["outcome"] == "terminated"
    v = decide(parse("+in:1.get ; #0 ; !"), 1, strategy="brute")
    assert v.certificate["outcome"] == "inaction" and "reason" in v.certificate
    v = decide(parse("-in:1.get ; +in:1.get ; out.set:1 ; !"), 2)
    assert not v.result and v.strategy_used == "shortest"
    assert v.certificate["member"] is False and v.certificate["reason"]
    assert set(v.as_dict()) == {"result", "strategy_used", "n", "len", "min_len", "certificate"}


def test_decide_preconditions():
    with pytest.raises(PreconditionError):
        decide(parse("!"), 0)
    with pytest.raises(PreconditionError):
        decide(parse("+in:3.get ; out.set:1 ; !"), 2)
    with pytest.raises(ValueError):
        decide(parse("!"), 1, strategy="oracle")


def test_brute_cap():
    x = gen_tstnz(5)
    with pytest.raises(CapExceeded):
        decide(x, 5, strategy="brute", cap=4)
    assert decide(x, 5, strategy="symbolic").result


def test_strategies_agree(rng):
    for _ in range(300):
        n = rng.randint(1, 6)
        length = min_len(n)
        kind = rng.randrange(3)
        if kind == 0:
            x = mutate(gen_tstnz_prime(n), n, rng)
        elif kind == 1:
            x = random_sequence(n, length, rng)
        else:
            x = gen_tstnz_prime(n)
        if x.max_input_index() > n:
            continue
        truth = naive_correct(x, n)
        assert decide(x, n, "brute").result == truth
        assert decide(x, n, "symbolic").result == truth
        assert decide(x, n, "shortest").result == truth
        assert decide(x, n).result == truth


def test_good_and_brute_agree(rng):
    for _ in range(300):
        n = rng.randint(1, 7)
        x = random_good(n, rng.randint(1, 3), rng, rng.choice(["member", "mutant", "random"]))
        if x.iregs() != frozenset(range(1, n + 1)):
            continue
        assert decide(x, n, "good").result == decide(x, n, "brute").result


def test_search_examples():
    r = exhaustive_min_search(1, 3)
    assert r.min_found == 3
    assert exhaustive_min_search(1, 2).min_found is None


def test_search_n2():
    r = exhaustive_min_search(2, 4)
    assert r.min_found == 4
    for w in r.witnesses:
        assert brute_force_check(w, 2)
        assert is_member_pce(w, 2).member
    for w in r.canonical_witnesses:
        assert rename_aux(w) == w


def test_search_witnesses_n1():
    r = exhaustive_min_search(1, 3)
    texts = sorted(render(w) for w in r.witnesses)
    assert texts == sorted(["+in:1.get ; out.set:1 ; !", "+in:1.get ; +out.set:1 ; !"])
    for w in r.witnesses:
        assert naive_correct(w, 1) and is_member_pce(w, 1).member


def test_search_guards():
    with pytest.raises(GuardExceeded):
        exhaustive_min_search(3, 5)
    with pytest.raises(GuardExceeded):
        exhaustive_min_search(1, 7)
    with pytest.raises(PreconditionError):
        exhaustive_min_search(0, 3)


@pytest.mark.parametrize("n,length", [(1, 1), (1, 2), (1, 3), (2, 2)])
def test_enumeration_matches_brute_force(n, length):
    alphabet = canonical_alphabet(n, length)
    seen = 0
    for x, ok in enumerate_sequences(n, length, alphabet):
        assert ok == naive_correct(x, n)
        seen += 1
    assert seen == len(alphabet) ** length


def test_pruned_enumeration_keeps_every_correct_sequence():
    alphabet = canonical_alphabet(1, 3)
    full = {x for x, ok in enumerate_sequences(1, 3, alphabet) if ok}
    pruned = {x for x, ok in enumerate_sequences(1, 3, alphabet, prune=True) if ok}
    assert full == pruned and len(full) == 2
