from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bpcobar import AlgebraConfig, GammaElement
from bpcobar.plocal import PLocalityViolation

CFG = AlgebraConfig()


def g(coeff=1, v=None, h=None):
    return GammaElement.monomial(CFG, coeff, v=v, h=h)


def test_config_validation():
    with pytest.raises(ValueError):
        AlgebraConfig(4, 3, 72)
    with pytest.raises(ValueError):
        AlgebraConfig(3, 3, 50)  # below 2(p^K - 1)
    assert AlgebraConfig(3, 1, 4).gen_degree(1) == 4


def test_degrees():
    assert g(v={1: 1}).degree() == 4
    assert g(h={2: 1}).degree() == 16
    assert g(v={1: 2}, h={1: 3}).degree() == 20


def test_binomial_expansion():
    x = g(v={1: 1}) - 3 * g(h={1: 1})
    sq = x * x
    assert sq == g(v={1: 2}) - 6 * g(v={1: 1}, h={1: 1}) + 9 * g(h={1: 2})


def test_products():
    assert g(h={1: 1}) * g(h={2: 1}) == g(h={1: 1, 2: 1})
    one = GammaElement.one(CFG)
    x = g(2, v={1: 1}, h={1: 1})
    assert one * x == x


def test_p_locality_guard():
    with pytest.raises(PLocalityViolation):
        GammaElement(CFG, {((0, 0, 0), (1, 0, 0)): Fraction(1, 3)})


def test_mixed_degree_flagged():
    x = g(v={1: 1}) + g(h={1: 2})
    assert not x.is_homogeneous()
    with pytest.raises(ValueError):
        x.degree()
    assert x.degrees() == {4, 8}


def test_truncation_is_an_ideal():
    small = AlgebraConfig(3, 1, 8)
    big = AlgebraConfig(3, 1, 40)

    def at(cfg, spec):
        out = GammaElement.zero(cfg)
        for coeff, v, h in spec:
            out = out + GammaElement.monomial(cfg, coeff, v=v, h=h)
        return out

    spec_a = [(1, {1: 1}, {}), (2, {}, {1: 2})]
    spec_b = [(1, {}, {1: 1}), (-1, {1: 1}, {})]
    prod_small = at(small, spec_a) * at(small, spec_b)
    prod_big = at(big, spec_a) * at(big, spec_b)
    truncated = {m: c for m, c in prod_big.terms.items() if big.mono_degree(m) <= 8}
    assert prod_small.terms == truncated
    assert prod_small.truncated


def test_canonical_print_example():
    x = g(Fraction(-3, 4), v={1: 2}, h={1: 1, 2: 1})
    assert str(x) == "-3/4 v1^2 h1 h2"


small_elems = st.lists(
    st.tuples(
        st.integers(min_value=-9, max_value=9).filter(lambda c: c != 0),
        st.integers(min_value=0, max_value=2),
        st.integers(min_value=0, max_value=2),
        st.integers(min_value=0, max_value=1),
    ),
    min_size=0,
    max_size=3,
).map(
    lambda spec: sum(
        (GammaElement.monomial(CFG, c, v={1: a}, h={1: b, 2: d}) for c, a, b, d in spec),
        GammaElement.zero(CFG),
    )
)


@settings(max_examples=60, deadline=None)
@given(small_elems, small_elems, small_elems)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
