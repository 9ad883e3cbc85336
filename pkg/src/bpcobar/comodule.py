"""Finitely generated free BP*-comodules with explicit coaction tables.

A comodule is a list of (generator, degree) pairs plus a coaction table
sending each generator to a finite sum of (Gamma element, generator) pairs.
Built-ins: sphere(n), the formal sphere, and the even-degree comodule with
generators in degrees 10..34 whose coaction coefficients are produced by
the coassociativity solver.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgebraConfig, GammaElement

COMODULE_HEADER = "# bpcobar comodule grammar-v1"


class Comodule:
    def __init__(self, cfg: AlgebraConfig, name: str, gens: dict[str, int], coaction):
        self.cfg = cfg
        self.name = name
        self.gens = dict(gens)
        # merge rows by target so each generator has one Gamma coefficient per target
        table: dict[str, dict[str, GammaElement]] = {}
        for gen, rows in coaction.items():
            merged: dict[str, GammaElement] = {}
            for gamma, tgt in rows:
                merged[tgt] = merged.get(tgt, GammaElement.zero(cfg)) + gamma
            table[gen] = {t: g for t, g in merged.items() if not g.is_zero()}
        self.coaction = table
        self.validate()

    # -- access --------------------------------------------------------------

    def coaction_rows(self, gen: str) -> list[tuple[GammaElement, str]]:
        if gen not in self.gens:
            raise KeyError(f"unknown generator {gen!r} in comodule {self.name!r}")
        return [(g, t) for t, g in sorted(self.coaction.get(gen, {}).items())]

    def reduced_coaction_rows(self, gen: str) -> list[tuple[GammaElement, str]]:
        rows = []
        for gamma, tgt in self.coaction_rows(gen):
            if tgt == gen:
                gamma = gamma - GammaElement.one(self.cfg)
            if not gamma.is_zero():
                rows.append((gamma, tgt))
        return rows

    # -- invariants ------------------------------------------------------------

    def validate(self):
        one = GammaElement.one(self.cfg)
        for gen, deg in self.gens.items():
            rows = self.coaction.get(gen, {})
            unit_part = rows.get(gen, GammaElement.zero(self.cfg)).coefficient()
            if unit_part != 1:
                raise ValueError(f"coaction of {gen} must contain the term 1 (x) {gen}")
            if deg is None:
                continue
            for tgt, gamma in rows.items():
                tdeg = self.gens[tgt]
                if tdeg is None:
                    continue
                for d in gamma.degrees():
                    if d + tdeg != deg:
                        raise ValueError(
                            f"coaction row of {gen} is not degree-homogeneous: "
                            f"|{gamma}| + {tdeg} != {deg}"
                        )

    def check_coassociativity(self) -> bool:
        from .cobar import check_coassociativity

        return check_coassociativity(self)

    # -- text format -------------------------------------------------------------

    def to_text(self) -> str:
        lines = [COMODULE_HEADER, f"# comodule {self.name}"]
        for gen, deg in self.gens.items():
            lines.append(f"gen {gen} {deg}")
        for gen in self.gens:
            for gamma, tgt in self.coaction_rows(gen):
                lines.append(f"coaction {gen}: {gamma} * {tgt}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, cfg: AlgebraConfig, name: str = "file") -> "Comodule":
        from .parser import parse_gamma

        gens: dict[str, int] = {}
        coaction: dict[str, list] = {}
        saw_header = False
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "grammar-v1" in line:
                    saw_header = True
                continue
            if line.startswith("gen "):
                _, gen, deg = line.split()
                gens[gen] = int(deg)
                coaction.setdefault(gen, [])
            elif line.startswith("coaction "):
                head, expr = line[len("coaction ") :].split(":", 1)
                gen = head.strip()
                if "*" not in expr:
                    raise ValueError(f"line {lineno}: coaction rows are written '<gamma> * <generator>'")
                gamma_text, tgt = expr.rsplit("*", 1)
                coaction.setdefault(gen, []).append((parse_gamma(gamma_text.strip(), cfg), tgt.strip()))
            else:
                raise ValueError(f"line {lineno}: unrecognized comodule line {line!r}")
        if not saw_header:
            raise ValueError("comodule file is missing the grammar-v1 header")
        return cls(cfg, name, gens, coaction)


# ---------------------------------------------------------------------------
# built-ins
# ---------------------------------------------------------------------------


def sphere(cfg: AlgebraConfig, n: int) -> Comodule:
    """BP* of the n-sphere: one primitive generator i[n]."""
    gen = f"i[{n}]"
    return Comodule(cfg, f"sphere:{n}", {gen: n}, {gen: [(GammaElement.one(cfg), gen)]})


def formal_sphere(cfg: AlgebraConfig) -> Comodule:
    """A sphere with symbolic dimension; used for excess and the alpha family."""
    return Comodule(cfg, "sphere", {"i": None}, {"i": [(GammaElement.one(cfg), "i")]})


def alpha1(cfg: AlgebraConfig) -> GammaElement:
    return GammaElement.monomial(cfg, -1, h={1: 1})


def alpha2(cfg: AlgebraConfig) -> GammaElement:
    return GammaElement.monomial(cfg, 2, v={1: 1}, h={1: 1}) + GammaElement.monomial(cfg, -3, h={1: 2})


Y7_GENS = {"x[10]": 10, "x[14]": 14, "x[18]": 18, "x[22]": 22, "x[26]": 26, "x[34]": 34}


def y7_even(cfg: AlgebraConfig | None = None, params: dict | None = None, t_values: dict | None = None) -> Comodule:
    """The even-degree comodule with generators in degrees 10..34.

    The coaction coefficients T_1..T_6 are produced by the coassociativity
    solver; free parameters may be supplied through ``params`` (post-congruence
    integers, default 0).
    """
    cfg = cfg or AlgebraConfig()
    if cfg.p != 3 or cfg.K < 2:
        raise ValueError("the even comodule is defined at p=3 and needs K >= 2")
    if t_values is None:
        from .solver import derive_T_chain

        chain = derive_T_chain(cfg)
        t_values = chain.evaluate(params or {})
    one = GammaElement.one(cfg)
    a1 = alpha1(cfg)
    a2 = alpha2(cfg)
    coaction = {
        "x[10]": [(one, "x[10]")],
        "x[14]": [(one, "x[14]"), (a1, "x[10]")],
        "x[18]": [(one, "x[18]"), (a1, "x[14]"), (t_values["T6"], "x[10]")],
        "x[22]": [(one, "x[22]")],
        "x[26]": [
            (one, "x[26]"),
            (a2, "x[18]"),
            (t_values["T4"], "x[14]"),
            (t_values["T5"], "x[10]"),
        ],
        "x[34]": [
            (one, "x[34]"),
            (a2, "x[26]"),
            (t_values["T1"], "x[18]"),
            (t_values["T2"], "x[14]"),
            (t_values["T3"], "x[10]"),
        ],
    }
    return Comodule(cfg, "y7-even", Y7_GENS, coaction)


def builtin_comodule(spec: str, cfg: AlgebraConfig) -> Comodule:
    """Resolve a module spec string: 'sphere:<n>', 'sphere', or 'y7-even'."""
    spec = spec.strip()
    if spec == "y7-even":
        return y7_even(cfg)
    if spec == "sphere":
        return formal_sphere(cfg)
    if spec.startswith("sphere:"):
        return sphere(cfg, int(spec.split(":", 1)[1]))
    raise ValueError(f"unknown module spec {spec!r} (use sphere:<n> or y7-even)")
