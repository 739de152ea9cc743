# Run tests: pytest -q
from pathlib import Path
import sys

import numpy as np
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))
from group_core.context import GroupCtx  # noqa: E402
from group_core.errors import LiteralParseError  # noqa: E402
from group_core.literals import format_set_literal, parse_set_literal  # noqa: E402
from group_core.sets import SetF2  # noqa: E402


def test_parse_element_list():
    a = parse_set_literal("n=3; {0,1, 2,0x4}")
    assert a.ctx.rank == 3
    assert set(a) == {0, 1, 2, 4}


def test_parse_mask_form_and_empty_set():
    assert set(parse_set_literal("n=3; mask=0x17")) == {0, 1, 2, 4}
    assert not parse_set_literal("n=2; {}")
    assert parse_set_literal("n=0; {0}").is_full()


def test_leading_zero_decimal_is_accepted():
    assert set(parse_set_literal("n=4; {01,10}")) == {1, 10}


def test_format_then_parse_is_identity():
    rng = np.random.default_rng(1)
    for n in (0, 1, 3, 6):
        a = SetF2(GroupCtx(n), rng.random(1 << n) < 0.5)
        assert parse_set_literal(format_set_literal(a)) == a
        assert parse_set_literal(format_set_literal(a, compact=True)) == a


def test_format_examples():
    a = SetF2.from_elements(GroupCtx(3), [4, 0, 2])
    assert format_set_literal(a) == "n=3; {0,2,4}"
    assert format_set_literal(a, compact=True) == "n=3; mask=0x15"


@pytest.mark.parametrize(
    "text, offset",
    [
        ("{1,2}", 0),
        ("  x", 2),
        ("n=2; 1,2", 5),
        ("n=2; {1,,2}", 8),
        ("n=2; {1,4}", 8),
        ("n=2; {1 2}", 8),
        ("n=2; {1} junk", 9),
        ("n=2; mask=0x1ff", 10),
    ],
)
def test_parse_errors_name_the_offset(text, offset):
    with pytest.raises(LiteralParseError) as info:
        parse_set_literal(text)
    assert info.value.offset == offset


def test_rank_above_cap_is_a_parse_error():
    with pytest.raises(LiteralParseError) as info:
        parse_set_literal("n=99; {0}")
    assert info.value.offset == 2
