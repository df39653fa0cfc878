"""Register machine: parsing, execution, step accounting, budgets."""

import pytest

from conjlab.machine import (
    Program,
    ProgramError,
    StepLimitExceeded,
    parse_program,
)
from conjlab.sepfunc import StepCounter

COPY = """\
# y <- x
loop: djz x done
inc y
djz z loop   # z stays zero: unconditional jump
done: halt
"""

CONST1 = "inc y\nhalt\n"


def steps_of(prog: Program, n: int) -> int:
    c = StepCounter()
    prog.run(n, c)
    return c.count


def test_const_program():
    prog = parse_program(CONST1)
    assert prog.run(0) == 1
    assert prog.run(9) == 1
    assert steps_of(prog, 9) == 2


@pytest.mark.parametrize("n", [0, 1, 2, 7])
def test_copy_program(n):
    prog = parse_program(COPY)
    assert prog.run(n) == n
    assert steps_of(prog, n) == 3 * n + 2


def test_fall_off_end():
    prog = parse_program("inc y\ninc y")
    assert prog.run(5) == 2
    assert steps_of(prog, 5) == 2


def test_trailing_label_is_end_of_program():
    prog = parse_program("loop: djz x end\ninc y\ndjz z loop\nend:")
    assert prog.run(3) == 3
    assert prog.labels["end"] == 3


def test_djz_semantics():
    prog = parse_program("djz x skip\ninc y\nskip: halt")
    assert prog.run(0) == 0
    assert prog.run(2) == 1


def test_step_budget():
    prog = parse_program(COPY)
    total = steps_of(prog, 4)
    c = StepCounter()
    assert prog.run(4, c, step_budget=total + 1) == 4
    with pytest.raises(StepLimitExceeded):
        prog.run(4, StepCounter(), step_budget=total)
    # the abort really is mid-run and the partial count is retained
    c = StepCounter()
    with pytest.raises(StepLimitExceeded):
        prog.run(4, c, step_budget=5)
    assert c.count == 5


def test_negative_input_rejected():
    with pytest.raises(ValueError):
        parse_program(CONST1).run(-1)


def test_parse_errors():
    with pytest.raises(ProgramError) as err:
        parse_program("inc y\nbogus q r s\n")
    assert err.value.line == 2
    with pytest.raises(ProgramError) as err:
        parse_program("a: inc y\na: halt")
    assert err.value.line == 2
    with pytest.raises(ProgramError) as err:
        parse_program("djz x nowhere")
    assert err.value.line == 1
    with pytest.raises(ProgramError):
        parse_program("inc")
    with pytest.raises(ProgramError):
        parse_program("djz x")
    with pytest.raises(ProgramError):
        parse_program("1bad: halt")


def test_stacked_labels_and_comments():
    prog = parse_program("one: two: inc y # bump\n# comment only\ndjz y fin\nfin: halt")
    assert prog.labels == {"one": 0, "two": 0, "fin": 2}
    assert prog.run(7) == 0
    assert steps_of(prog, 7) == 3
