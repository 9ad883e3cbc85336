import pytest

from bpcobar import GammaElement
from bpcobar.comodule import COMODULE_HEADER, Comodule, builtin_comodule, formal_sphere, sphere, y7_even


def test_sphere(cfg):
    S = sphere(cfg, 9)
    assert S.gens == {"i[9]": 9}
    assert S.coaction_rows("i[9]") == [(GammaElement.one(cfg), "i[9]")]
    assert S.reduced_coaction_rows("i[9]") == []
    with pytest.raises(KeyError):
        S.coaction_rows("i[7]")


def test_counit_row_required(cfg):
    with pytest.raises(ValueError):
        Comodule(cfg, "bad", {"a": 4}, {"a": []})


def test_rows_must_be_homogeneous(cfg):
    one = GammaElement.one(cfg)
    h1 = GammaElement.h_gen(cfg, 1)
    with pytest.raises(ValueError):
        Comodule(
            cfg,
            "bad",
            {"a": 10, "b": 4},
            {"a": [(one, "a"), (h1, "b")], "b": [(one, "b")]},  # 4 + 4 != 10
        )


def test_text_round_trip(cfg):
    M = y7_even(cfg)
    text = M.to_text()
    assert text.startswith(COMODULE_HEADER)
    M2 = Comodule.from_text(text, cfg)
    assert M2.gens == M.gens
    for g in M.gens:
        assert M2.coaction[g] == M.coaction[g]
    assert M2.check_coassociativity()


def test_header_required(cfg):
    with pytest.raises(ValueError):
        Comodule.from_text("gen a 4\ncoaction a: 1 * a\n", cfg)


def test_builtin_resolution(cfg):
    assert builtin_comodule("sphere:9", cfg).name == "sphere:9"
    assert builtin_comodule("sphere", cfg).gens == {"i": None}
    assert builtin_comodule("y7-even", cfg).name == "y7-even"
    with pytest.raises(ValueError):
        builtin_comodule("torus", cfg)


def test_formal_sphere_is_primitive(cfg):
    S = formal_sphere(cfg)
    assert S.reduced_coaction_rows("i") == []
