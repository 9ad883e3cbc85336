import pytest

from bpcobar.groups import (
    AbelianGroupStructure,
    BUNDLE_FACTOR_STRUCTURES,
    b37_vs_s7,
    bk_exponent,
    e7_exponent_witness,
    e7_groups,
    sphere_e2_order,
)
from bpcobar.plocal import nu


def test_even_j_is_zero():
    for j in range(2, 40, 2):
        v2j, v2jm1 = e7_groups(j, 2)
        assert v2j.factors == () and v2jm1.factors == ()
        assert str(v2j) == "0"


def test_spot_values():
    # nu(3 - 9 - 2*3^5) = nu(-492) = 1, so min(10, 1+4) = 5
    assert nu(492, 3) == 1
    v2j, v2jm1 = e7_groups(3, 2)
    assert v2j.factors == (5, 1) and v2jm1.factors == (5, 1)
    # j = 43 = 7 mod 9: nu(0) caps at 8
    v2j, v2jm1 = e7_groups(43, 8)
    assert v2j.factors == (8, 1)


def test_branches():
    # j = 5 mod 9 uses delta
    v2j, _ = e7_groups(5, 2)
    assert v2j.factors == (2 + 4, 2) or v2j.factors[1] == 2  # Z/9 summand present
    assert v2j.factors[-1] == 2
    # delta sensitivity exactly in the 5,8 branch
    a, _ = e7_groups(17 + 2 * 2 * 3**13, 2)
    b, _ = e7_groups(17 + 2 * 2 * 3**13, 5)
    assert a.factors != b.factors
    with pytest.raises(ValueError):
        e7_groups(5, 3)


def test_asymmetric_case():
    # only odd j = 2 mod 9 has different groups in the two dimensions
    for j in range(1, 200, 2):
        v2j, v2jm1 = e7_groups(j, 2)
        if j % 9 == 2:
            assert v2j.factors != v2jm1.factors
        else:
            assert v2j.factors == v2jm1.factors


def test_ambiguous_branch():
    j = 11 + 2 * 3**10  # nu(j-11) = 10
    v2j, v2jm1 = e7_groups(j, 2)
    assert v2j.factors == (12, 3)
    assert v2j.ambiguous_alternatives == (11, 4)
    assert "or" in str(v2j)
    assert v2jm1.factors == (13, 2)
    # below the fork the group is pinned
    v2j_low, _ = e7_groups(29, 2)  # nu(18) = 2
    assert v2j_low.factors == (5, 3)
    assert not v2j_low.ambiguous


def test_floor_invariant_large_factor():
    for j in range(1, 400, 2):
        if j % 9 in (1, 7):
            v2j, _ = e7_groups(j, 2)
            big = max(v2j.factors)
            assert big == min(8, int(nu(j - 43, 3)) + 5 if j != 43 else 8)
            assert big >= 5


def test_witness():
    for delta in (2, 5, 8):
        w = e7_exponent_witness(delta)
        assert w["exponent"] == 19
        assert max(w["group"].factors) == 19
    # at j = 17 the valuation term is 13, giving exponent 17
    v2j, _ = e7_groups(17, 2)
    assert max(v2j.factors) == 17
    with pytest.raises(ValueError):
        e7_exponent_witness(1)


def test_sphere_orders():
    assert sphere_e2_order(1, 5) == 1
    assert sphere_e2_order(7, 9) == 3
    assert sphere_e2_order(4, 81) == 4
    assert sphere_e2_order(4, 0) == 4  # nu(0) = inf caps at n
    with pytest.raises(ValueError):
        sphere_e2_order(0, 5)


def test_sphere_order_monotone():
    for n in range(1, 8):
        for m in (1, 3, 9, 27):
            assert sphere_e2_order(n, m) <= sphere_e2_order(n + 1, m)
            assert sphere_e2_order(n, m) <= sphere_e2_order(n, m * 3)


def test_bundle_exponents():
    assert bk_exponent(5, 1, 5) == 5  # j = n: min(5, 2 + nu(0)) caps at n
    # j - n = 6 = 0 mod p(p-1): first branch: min(9, 2 + nu(6)) = 3
    assert bk_exponent(9, 2, 15) == 3
    # j - n = 2: second branch: min(9 + 4, 2 + nu(2 - 4)) = 2
    assert bk_exponent(9, 2, 11) == 2
    # j - n odd: zero branch
    assert bk_exponent(9, 1, 10) == 0
    with pytest.raises(ValueError):
        bk_exponent(1, 1, 5)
    with pytest.raises(ValueError):
        bk_exponent(5, 3, 5)


def test_b37():
    assert b37_vs_s7(3)["s7_exponent"] == 3  # nu(0) caps
    assert b37_vs_s7(5)["s7_exponent"] == 1
    out = b37_vs_s7(21)
    assert out["exceptional"] and out["b37_exponent"] == 4 and out["s7_exponent"] == 3
    assert "surjection" in out["map"]
    assert not b37_vs_s7(7)["exceptional"]
    with pytest.raises(ValueError):
        b37_vs_s7(4)


def test_group_structure_type():
    g = AbelianGroupStructure.of(1, 5)
    assert g.factors == (5, 1)
    assert g.order_exponent() == 6
    assert str(g) == "Z/3^5 (+) Z/3"


def test_static_factor_table():
    assert "B(11,15) p=3" in BUNDLE_FACTOR_STRUCTURES
