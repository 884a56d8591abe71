import pytest

from nztcheck.core import render
from nztcheck.executor import brute_force_check
from nztcheck.generators import gen_tstnz, gen_tstnz_prime, min_len


def test_tstnz_examples():
    assert render(gen_tstnz(1)) == "+in:1.get ; out.set:1 ; !"
    assert render(gen_tstnz(2)) == "+in:1.get ; out.set:1 ; +in:2.get ; out.set:1 ; !"
    assert len(gen_tstnz(3)) == 7


def test_tstnz_prime_examples():
    assert render(gen_tstnz_prime(2)) == "-in:1.get ; +in:2.get ; out.set:1 ; !"
    assert render(gen_tstnz_prime(3)) == "+in:1.get ; out.set:1 ; -in:2.get ; +in:3.get ; out.set:1 ; !"
    assert render(gen_tstnz_prime(1)) == "+in:1.get ; out.set:1 ; !"


def test_min_len_examples():
    assert [min_len(1), min_len(4), min_len(64)] == [3, 7, 97]


@pytest.mark.parametrize("n", range(1, 200))
def test_length_laws(n):
    assert len(gen_tstnz(n)) == 2 * n + 1
    assert len(gen_tstnz_prime(n)) == min_len(n)
    assert min_len(n + 1) == min_len(n) + (2 if n % 2 == 0 else 1)
    assert min_len(n + 2) == min_len(n) + 3
    if n > 1:
        assert min_len(n) < 2 * n + 1


def test_nonpositive_rejected():
    for f in (gen_tstnz, gen_tstnz_prime, min_len):
        with pytest.raises(ValueError):
            f(0)


def test_generators_compute_up_to_fourteen():
    for n in range(1, 15):
        assert brute_force_check(gen_tstnz(n), n)
        assert brute_force_check(gen_tstnz_prime(n), n)
