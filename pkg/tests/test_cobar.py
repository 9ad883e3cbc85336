import random
from fractions import Fraction

import pytest

from bpcobar import AlgebraConfig, CobarElement, GammaElement
from bpcobar.cobar import (
    DivisibilityError,
    NormalizationDiverged,
    admissible,
    alpha,
    desuspend_normalize,
    differential,
    excess,
    push_left,
    raw_excess,
    word_excess,
)
from bpcobar.comodule import alpha2, formal_sphere, sphere, y7_even
from bpcobar.parser import parse
from bpcobar.plocal import nu

CFG = AlgebraConfig()
Z = CFG.zero_exp()


def brute_force_excess(e: CobarElement) -> int:
    """Independent oracle: scan n and test every slot of every word directly."""
    words = e.terms
    for n in range(-30, 40):
        ok = True
        for (slots, tv, gen) in words:
            suffix = CFG.mono_degree((tv, Z))
            for j in range(len(slots) - 1, -1, -1):
                if not admissible(slots[j][1], suffix + 2 * n + 1):
                    ok = False
                    break
                suffix += CFG.mono_degree(slots[j])
            if not ok:
                break
        if ok:
            return n
    raise AssertionError("no admissible n found")


def test_push_left_examples():
    e = parse("h1 (x) v1 i", CFG)
    assert push_left(e, 1) == parse("(v1 h1 - 3 h1^2) (x) i", CFG)
    e2 = parse("h1 (x) i", CFG)
    assert push_left(e2, 1) == e2
    e3 = parse("3 h1^2 (x) v1 i", CFG)
    assert push_left(e3, 1) == parse("(3 v1 h1^2 - 9 h1^3) (x) i", CFG)


def test_admissible_examples():
    assert admissible((1,), 3)
    assert not admissible((2,), 3)
    assert admissible((0, 1), 2)


def test_excess_examples():
    e = parse("h1^3 (x) h1", CFG)
    assert excess(e) == 1
    assert excess(parse("h1 (x) h1", CFG)) == 1
    # cross-check the raw representative against the brute-force oracle
    for text in ["h1^3 (x) h1", "h1 (x) h1", "h1^2 (x) v1 h1 (x) v1 i", "v1 h1^4"]:
        e = parse(text, CFG)
        assert raw_excess(e) == brute_force_excess(e)


def test_excess_closed_formula_slice():
    # a small slice here; the full enumeration runs in the acceptance suite
    p = 3
    for a, b, c, d, e in [(0, 3, 0, 1, 0), (1, 1, 0, 1, 0), (1, 3, 1, 1, 1), (2, 6, 0, 2, 0), (3, 5, 2, 3, 2)]:
        w = (((Z, (b, 0, 0)), ((c, 0, 0), (d, 0, 0))), (e, 0, 0), "i")
        elem = CobarElement(CFG, {w: Fraction(3) ** a})
        want = max(b - (p - 1) * (c + d), d) - min(a, abs(b - (p - 1) * c - p * d)) - (p - 1) * e
        assert excess(elem) == want, (a, b, c, d, e)


def test_desuspend_examples():
    e = parse("3 h1^4", CFG)
    out = desuspend_normalize(e)
    assert out == parse("v1 h1^3 (x) i - h1^3 (x) v1 i", CFG)
    assert raw_excess(out) == 3
    fixed = parse("h1 (x) i", CFG)
    assert desuspend_normalize(fixed) == fixed
    e3 = parse("3 h1^2 (x) h1", CFG)
    assert excess(e3) <= raw_excess(parse("3 h1^2 (x) h1 (x) i", CFG))


def test_desuspend_preserves_value_and_excess(cfg):
    rng = random.Random(99)
    for _ in range(40):
        words = {}
        for _ in range(rng.randint(1, 3)):
            s = rng.randint(1, 2)
            slots = tuple(
                ((rng.randint(0, 2), 0, 0), (rng.randint(0, 3), rng.randint(0, 1), 0)) for _ in range(s)
            )
            words[(slots, (rng.randint(0, 1), 0, 0), "i")] = Fraction(rng.choice([1, 3, 9, -3, 6, -1]))
        e = CobarElement(cfg, words)
        out = desuspend_normalize(e)
        assert out == e  # value-preserving (canonical forms agree)
        assert raw_excess(out) <= raw_excess(e)


def test_normalization_step_bound():
    e = parse("9 h1^4 (x) h1^2", CFG)
    with pytest.raises(NormalizationDiverged):
        desuspend_normalize(e, max_steps=0)


def test_differential_sphere(cfg):
    S9 = sphere(cfg, 9)
    iota = CobarElement.module_element(cfg, "i[9]")
    assert differential(iota, S9).is_zero()
    d = differential(parse("v1^2 i[9]", cfg), S9)
    assert d == CobarElement.from_gamma(alpha2(cfg), gen="i[9]").scale(-3)
    assert str(d) == "-3 * (2 v1 h1 - 3 h1^2) (x) i[9]"


def test_differential_requires_homogeneous(cfg):
    S9 = sphere(cfg, 9)
    mixed = parse("v1 i[9] + v1^2 i[9]", cfg)
    with pytest.raises(ValueError):
        differential(mixed, S9)


def test_reduced_and_unreduced_agree(cfg):
    Y = y7_even(cfg)
    rng = random.Random(3)
    for _ in range(15):
        g = rng.choice(list(Y.gens))
        s = rng.randint(0, 2)
        slots = tuple(((0, 0, 0), (rng.randint(1, 2), 0, 0)) for _ in range(s))
        e = CobarElement(cfg, {(slots, (rng.randint(0, 1), 0, 0), g): Fraction(rng.choice([1, 2, -1]))})
        assert differential(e, Y, reduced=True, check_degree=False) == differential(
            e, Y, reduced=False, check_degree=False
        )


def test_d_squared_zero_sample(cfg):
    # the full 200-element run is acceptance criterion 2
    S9 = sphere(cfg, 9)
    Y = y7_even(cfg)
    rng = random.Random(17)
    for M in (S9, Y):
        gens = list(M.gens)
        for _ in range(25):
            g = rng.choice(gens)
            s = rng.randint(0, 2)
            slots = tuple(
                ((rng.randint(0, 1), 0, 0), (rng.randint(0, 2), rng.randint(0, 1), 0)) for _ in range(s)
            )
            e = CobarElement(cfg, {(slots, (0, 0, 0), g): Fraction(rng.choice([1, -2, 3]))})
            assert differential(differential(e, M, check_degree=False), M, check_degree=False).is_zero()


def test_alpha_values(cfg):
    a1 = alpha(cfg, 1, 1)
    assert a1 == CobarElement.from_gamma(GammaElement.monomial(cfg, -1, h={1: 1}), gen="i")
    a2 = alpha(cfg, 2, 1)
    assert a2 == CobarElement.from_gamma(alpha2(cfg), gen="i").scale(-1)
    with pytest.raises(DivisibilityError):
        alpha(cfg, 2, 2)  # nu(2)+1 = 1 < 2
    with pytest.raises(ValueError):
        alpha(cfg, 0, 1)


def test_alpha_leading_slice(cfg1):
    for m, e in [(3, 1), (3, 2), (9, 3), (12, 2), (27, 4)]:
        a = alpha(cfg1, m, e)
        corr = a + CobarElement.from_gamma(
            GammaElement.monomial(cfg1, 1, v={1: m - e}, h={1: e}), gen="i"
        )
        assert corr.is_zero() or excess(corr) < e


def test_leibniz_identity(cfg):
    # d(h^t iota) = d(h^t) iota + h^t d(iota) on the sphere; d(iota) = 0
    from bpcobar.structure import psi_bar_slot

    S = formal_sphere(cfg)
    for t in range(1, 9):
        lhs = differential(
            CobarElement.from_gamma(GammaElement.monomial(cfg, 1, h={1: t}), gen="i"), S, check_degree=False
        )
        rhs = CobarElement(
            cfg,
            {
                ((m1, m2), Z, "i"): -c
                for (m1, m2), c in psi_bar_slot(cfg, (Z, (t, 0, 0))).items()
            },
        )
        assert lhs == rhs


YANG3_GRID = [(l, n) for l in range(0, 7) for n in range(1, 6)]
YANG3_BLOCKED = {(5, 1), (6, 1)}  # tie-frozen residues; see the acceptance notes


@pytest.mark.parametrize("l,n", [case for case in YANG3_GRID if case not in YANG3_BLOCKED])
def test_yang3_instances(cfg, l, n):
    S = formal_sphere(cfg)
    e = CobarElement.from_gamma(GammaElement.monomial(cfg, 1, v={1: l}, h={1: n + 1}), gen="i")
    d = differential(e, S, check_degree=False)
    corr = CobarElement(
        cfg,
        {((((l, 0, 0), (1, 0, 0)), (Z, (n, 0, 0))), Z, "i"): Fraction(l + n + 1)},
    )
    tot = d + corr
    assert tot.is_zero() or excess(tot) < n


@pytest.mark.parametrize("l,n", sorted(YANG3_BLOCKED))
@pytest.mark.xfail(
    strict=True,
    reason="the residual word is tie-frozen by the same rule that makes the excess "
    "closed formula exact on its certified family; holds only modulo coboundaries",
)
def test_yang3_blocked_instances(cfg, l, n):
    S = formal_sphere(cfg)
    e = CobarElement.from_gamma(GammaElement.monomial(cfg, 1, v={1: l}, h={1: n + 1}), gen="i")
    d = differential(e, S, check_degree=False)
    corr = CobarElement(
        cfg,
        {((((l, 0, 0), (1, 0, 0)), (Z, (n, 0, 0))), Z, "i"): Fraction(l + n + 1)},
    )
    tot = d + corr
    assert tot.is_zero() or excess(tot) < n


@pytest.mark.xfail(
    strict=True,
    reason="cochain-level desuspension to the 1-sphere is obstructed mod 3; the "
    "relation holds in homology modulo coboundaries (see the decisions notes)",
)
def test_yang1(cfg):
    from bpcobar.structure import right_unit

    g = GammaElement.h_gen(cfg, 1) ** 3 * right_unit(GammaElement.v_gen(cfg, 1)) - GammaElement.monomial(
        cfg, 1, v={1: 3}, h={1: 1}
    )
    assert excess(CobarElement.from_gamma(g, gen="i")) <= 0


def test_coassociativity_checks(cfg):
    assert sphere(cfg, 9).check_coassociativity()
    Y = y7_even(cfg)
    assert Y.check_coassociativity()
    from bpcobar.solver import derive_T_chain

    tv = derive_T_chain(cfg).evaluate({})
    tv["T1"] = tv["T1"] + GammaElement.monomial(cfg, 1, h={1: 4})
    assert not y7_even(cfg, t_values=tv).check_coassociativity()
