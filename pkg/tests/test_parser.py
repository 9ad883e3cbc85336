import random
from fractions import Fraction

import pytest

from bpcobar import AlgebraConfig, CobarElement
from bpcobar.parser import ExprSyntaxError, format_cobar, parse, parse_gamma

CFG = AlgebraConfig()


def test_tensor_example():
    e = parse("h1 (x) h1", CFG)
    assert e.s_values() == {2}
    assert format_cobar(e) == "h1 (x) h1"


def test_alpha2_example():
    e = parse("2*v1*h1 - 3*h1^2", CFG)
    assert e == parse("2 v1 h1 - 3 h1^2", CFG)
    assert format_cobar(e) == "2 v1 h1 - 3 h1^2"


def test_syntax_error_offset():
    with pytest.raises(ExprSyntaxError) as err:
        parse("h1^^2", CFG)
    assert err.value.offset == 3


def test_round_trip_idempotent():
    assert format_cobar(parse("h1(x)h1", CFG)) == "h1 (x) h1"
    assert format_cobar(CobarElement.zero(CFG)) == "0"
    assert parse("0", CFG).is_zero()


def test_unknown_generator():
    with pytest.raises(ExprSyntaxError):
        parse("v4", CFG)
    with pytest.raises(ExprSyntaxError):
        parse("h9 (x) h1", CFG)


def test_non_p_local_scalar():
    with pytest.raises(ExprSyntaxError):
        parse("1/3 h1", CFG)


def test_exponent_overflow():
    with pytest.raises(ExprSyntaxError):
        parse("h1^40", CFG)  # degree 160 > 72


def test_module_generators():
    e = parse("v1^2 i[9]", CFG)
    assert e.s_values() == {0}
    assert format_cobar(e) == "v1^2 i[9]"
    e2 = parse("h1^3 (x) v1 i", CFG)
    assert format_cobar(e2) == "(v1 h1^3 - 3 h1^4) (x) i"
    with pytest.raises(ExprSyntaxError):
        parse("h1 i[9]", CFG)  # h-factors cannot act on a module generator


def test_factored_form_round_trip():
    text = "-3 * (2 v1 h1 - 3 h1^2) (x) i[9]"
    e = parse(text, CFG)
    assert format_cobar(e) == text


def test_parse_gamma():
    g = parse_gamma("2 v1 h1 - 3 h1^2", CFG)
    assert str(g) == "2 v1 h1 - 3 h1^2"
    with pytest.raises(ExprSyntaxError):
        parse_gamma("h1 (x) h1", CFG)
    with pytest.raises(ExprSyntaxError):
        parse_gamma("h1 i[9]", CFG)


def _random_canonical(rng):
    def rand_mono(maxdeg):
        while True:
            v = (rng.randint(0, 2), rng.randint(0, 1), 0)
            h = (rng.randint(0, 3), rng.randint(0, 1), 0)
            if CFG.mono_degree((v, h)) <= maxdeg:
                return (v, h)

    s = rng.randint(0, 2)
    words = {}
    for _ in range(rng.randint(1, 4)):
        slots = tuple(rand_mono(64 // max(1, s)) for _ in range(s))
        gen = rng.choice([None, "i", "i[9]", "x[14]"])
        tv = (rng.randint(0, 2), 0, 0) if (gen and s == 0) else (0, 0, 0)
        if s == 0 and gen is None:
            slots, tv = (), (0, 0, 0)
        words[(slots, tv, gen)] = Fraction(rng.choice([1, -1, 2, -3, 5]), rng.choice([1, 2, 4]))
    return CobarElement(CFG, words).canonical()


def test_round_trip_500_random_elements():
    rng = random.Random(20240810)
    printed = {}
    checked = 0
    while checked < 500:
        e = _random_canonical(rng)
        if not e.terms:
            continue
        checked += 1
        text = format_cobar(e)
        assert parse(text, CFG) == e, text
        key = tuple(sorted(e.canonical_terms().items(), key=repr))
        if text in printed:
            assert printed[text] == key, f"printing is not injective at {text!r}"
        printed[text] = key
