import pytest
from hypothesis import given

from nztcheck.core import HALT, Instruction, InstructionSequence, Op, in_get, jump, parse, pos, render
from nztcheck.errors import PgaSemanticError, PgaSyntaxError
from nztcheck.generators import gen_tstnz, gen_tstnz_prime
from strategies import sequences


def test_parse_matches_shortest_two():
    assert parse("-in:1.get ; +in:2.get ; out.set:1 ; !") == gen_tstnz_prime(2)


def test_parse_single_halt():
    x = parse("!")
    assert len(x) == 1 and x[0] == HALT


def test_input_registers_cannot_be_set():
    with pytest.raises(PgaSemanticError):
        parse("in:1.set:1 ; !")


@pytest.mark.parametrize("text", ["out.get ; !", "out:1.set:1 ; !", "aux:0.get ; !"])
def test_other_semantic_errors(text):
    with pytest.raises(PgaSyntaxError):
        parse(text)


@pytest.mark.parametrize("text, offset", [
    ("+in:1.get ; ; !", 12),
    ("+in:1.get ; out.set:2", 12),
    ("", 0),
    ("#x", 0),
])
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(PgaSyntaxError) as err:
        parse(text)
    assert err.value.offset == offset
    assert not isinstance(err.value, PgaSemanticError)


def test_comments_and_newlines():
    text = "// header\n+in:1.get ;   // read\n out.set:1\n;\n!"
    assert parse(text) == gen_tstnz(1)


def test_render_examples():
    assert render(InstructionSequence((pos(in_get(1)), HALT))) == "+in:1.get ; !"
    assert render(gen_tstnz(1)) == "+in:1.get ; out.set:1 ; !"
    assert render(InstructionSequence((jump(0),))) == "#0"


def test_iregs_examples():
    assert gen_tstnz_prime(3).iregs() == {1, 2, 3}
    assert parse("#2 ; !").iregs() == frozenset()
    assert parse("+in:5.get ; out.set:1 ; !").iregs() == {5}


def test_plain_reads_are_not_read_instructions():
    x = parse("in:3.get ; +in:1.get ; !")
    assert x.iregs() == {1}
    assert x.plain_reads() == {3: 1}
    assert x.read_counts() == {1: 1}


def test_invalid_instruction_values_unrepresentable():
    with pytest.raises(ValueError):
        Instruction(Op.JUMP, None, -1)
    with pytest.raises(ValueError):
        Instruction(Op.POS, None)
    with pytest.raises(ValueError):
        InstructionSequence(())


@given(sequences())
def test_render_parse_round_trip(x):
    assert parse(render(x)) == x


@given(sequences())
def test_derived_accessors_agree_with_scan(x):
    reads = [u.basic.register.index for u in x.instructions
             if u.op in (Op.POS, Op.NEG) and u.basic.register.kind == "in"]
    assert x.iregs() == set(reads)
    assert sum(x.read_counts().values()) == len(reads)
    assert all(i <= x.max_input_index() for i in x.iregs())
