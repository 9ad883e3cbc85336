"""Solve psi_bar(T) = P for T in a prescribed monomial span over Z_(p).

The rational solution set of the linear system is computed first; the affine
set is then reparameterized so that the particular solution and the kernel
basis are p-local entrywise, recording any congruence forced on a free
parameter along the way (a parameter whose raw kernel vector carries p in a
denominator can only enter through a fixed residue class).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraConfig, GammaElement, Mono, mono_sort_key
from .cobar import CobarElement, FORMAL_GEN, desuspend_normalize, raw_excess, word_excess
from .comodule import alpha1, alpha2
from .plocal import PLocalScalar, nu
from .structure import eta_power, psi_bar_slot


class NoSolution(ValueError):
    """The system is inconsistent or admits no p-local point."""


class DegreeMismatch(ValueError):
    pass


@dataclass
class SolveRequest:
    target: CobarElement
    basis: list[GammaElement]
    p: int = 3


@dataclass
class AffineSolution:
    basis: list[GammaElement]
    particular: list[PLocalScalar]
    homogeneous_basis: list[list[PLocalScalar]]
    congruence_constraints: list[tuple[int, int, int]]  # (parameter index, residue, modulus)
    raw_particular: list[Fraction] = field(default_factory=list)
    raw_kernel: list[list[Fraction]] = field(default_factory=list)

    def particular_element(self) -> GammaElement:
        return combine(self.basis, [c.as_fraction() for c in self.particular])

    def homogeneous_elements(self) -> list[GammaElement]:
        return [combine(self.basis, [c.as_fraction() for c in vec]) for vec in self.homogeneous_basis]


def combine(basis: list[GammaElement], coeffs) -> GammaElement:
    out = GammaElement.zero(basis[0].cfg)
    for b, c in zip(basis, coeffs):
        out = out + b.scale(c)
    return out


# ---------------------------------------------------------------------------
# rational linear algebra
# ---------------------------------------------------------------------------


def _rref(matrix: list[list[Fraction]]):
    """Row-reduce in place; returns the list of pivot column indices."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if matrix[i][c] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        inv = 1 / matrix[r][c]
        matrix[r] = [x * inv for x in matrix[r]]
        for i in range(rows):
            if i != r and matrix[i][c] != 0:
                f = matrix[i][c]
                matrix[i] = [x - f * y for x, y in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def _solve_linear(columns: list[dict], targets: list[dict]):
    """Solve sum_j x_j col_j = t for several right-hand sides at once.

    Returns (particulars, kernel) with frees set to zero, or raises NoSolution
    for any inconsistent target.  Coordinates are dict keys; columns/targets
    are sparse {key: Fraction}.
    """
    keys = sorted({k for col in columns for k in col} | {k for t in targets for k in t}, key=repr)
    n = len(columns)
    matrix = []
    for key in keys:
        row = [col.get(key, Fraction(0)) for col in columns]
        row.extend(t.get(key, Fraction(0)) for t in targets)
        matrix.append([Fraction(x) for x in row])
    if not matrix:
        matrix = [[Fraction(0)] * (n + len(targets))]
    pivots_all = _rref(matrix)
    pivots = [c for c in pivots_all if c < n]
    if any(c >= n for c in pivots_all):
        bad = min(c for c in pivots_all if c >= n) - n
        raise NoSolution(f"inconsistent linear system (target {bad})")
    free = [c for c in range(n) if c not in pivots]
    particulars = []
    for t_idx in range(len(targets)):
        x = [Fraction(0)] * n
        for r, c in enumerate(pivots):
            x[c] = matrix[r][n + t_idx]
        particulars.append(x)
    kernel = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -matrix[r][fc]
        kernel.append(vec)
    return particulars, kernel


# ---------------------------------------------------------------------------
# p-localization of the affine solution set
# ---------------------------------------------------------------------------


def _den_exp(q: Fraction, p: int) -> int:
    d = q.denominator
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    return e


def _is_p_local_vec(vec, p) -> bool:
    return all(_den_exp(q, p) == 0 for q in vec)


def _p_localize(p: int, particular: list[Fraction], kernel: list[list[Fraction]]):
    """Find the p-local points of particular + Z_(p)-span(kernel).

    Returns (particular', kernel', congruences) where congruences are
    (param index, residue, modulus) against the raw parameterization.
    Raises NoSolution when no p-local point exists.
    """
    kappa = max(
        [_den_exp(q, p) for q in particular]
        + [_den_exp(q, p) for vec in kernel for q in vec]
        + [0]
    )
    if kappa == 0:
        return list(particular), [list(v) for v in kernel], []
    mod = p**kappa
    r = len(kernel)
    if mod**r > 200000:
        raise NoSolution(f"p-localization search space too large (p^{kappa} with {r} parameters)")
    solutions = []
    for lam in itertools.product(range(mod), repeat=r):
        combo = [
            particular[i] + sum(lam[j] * kernel[j][i] for j in range(r))
            for i in range(len(particular))
        ]
        if _is_p_local_vec(combo, p):
            solutions.append(lam)
    if not solutions:
        raise NoSolution("no p-local solution in the affine set")
    # per-parameter congruence structure
    congruences = []
    residues = []
    moduli = []
    for j in range(r):
        values = sorted({lam[j] for lam in solutions})
        m = mod
        while m > 1:
            step = mod // m  # candidate modulus p^t has step count mod/m... walk down
            m //= p
        # find the smallest modulus p^t whose residue class matches the value set
        found = None
        for t in range(kappa + 1):
            m = p**t
            r0 = values[0] % m
            expected = sorted(x for x in range(mod) if x % m == r0)
            if values == expected:
                found = (r0, m)
                break
        if found is None:
            raise NoSolution("congruence constraints are not diagonal per parameter")
        r0, m = found
        if r0 > m // 2:
            r0 -= m  # balanced residue, so -1 prints as -1 rather than p-1
        residues.append(r0)
        moduli.append(m)
        if m > 1:
            congruences.append((j, r0, m))
    if len(solutions) != (mod**r) // max(1, _prod(moduli)):
        raise NoSolution("congruence constraints are not independent per parameter")
    particular2 = [
        particular[i] + sum(residues[j] * kernel[j][i] for j in range(r))
        for i in range(len(particular))
    ]
    kernel2 = [[moduli[j] * q for q in kernel[j]] for j in range(r)]
    if not _is_p_local_vec(particular2, p) or not all(_is_p_local_vec(v, p) for v in kernel2):
        raise NoSolution("p-localization failed to produce p-local vectors")
    return particular2, kernel2, congruences


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


# ---------------------------------------------------------------------------
# psi_bar coordinates
# ---------------------------------------------------------------------------


def psi_bar_coords(g: GammaElement) -> dict:
    """Canonical two-slot coordinates of the reduced coproduct of g."""
    cfg = g.cfg
    out: dict = {}
    for mono, coeff in g.terms.items():
        for (m1, m2), c in psi_bar_slot(cfg, mono).items():
            key = (m1, m2)
            out[key] = out.get(key, Fraction(0)) + coeff * c
    return {k: c for k, c in out.items() if c != 0}


def _two_slot_coords(e: CobarElement) -> dict:
    out: dict = {}
    for (slots, tv, gen), c in e.canonical_terms().items():
        if len(slots) != 2 or gen is not None or any(tv):
            raise ValueError("expected a pure two-slot Gamma tensor")
        out[(slots[0], slots[1])] = out.get((slots[0], slots[1]), Fraction(0)) + c
    return out


def _check_reduced_target(cfg, coords: dict):
    zero = cfg.zero_exp()
    eps1: dict = {}
    eps2: dict = {}
    for (m1, m2), c in coords.items():
        v1, h1 = m1
        if not any(h1):
            key = mono_sort_key(m2)  # contraction epsilon (x) 1, value v1^A * m2
            eps1[(v1, m2)] = eps1.get((v1, m2), Fraction(0)) + c
        v2, h2 = m2
        if not any(h2):
            eps2[(m1, v2)] = eps2.get((m1, v2), Fraction(0)) + c
    # the contractions must vanish identically for a reduced-coproduct image;
    # a nonzero eps means an x (x) 1 or 1 (x) x component survives
    if any(c != 0 for c in _contract_right(cfg, eps2).values()) or any(
        c != 0 for c in _contract_left(cfg, eps1).values()
    ):
        raise ValueError("target has a counit component (not a reduced-coproduct image)")


def _contract_left(cfg, eps1: dict) -> dict:
    # eps (x) 1 contraction: v^A acts on the remaining slot from the left
    out: dict = {}
    zero = cfg.zero_exp()
    for (v1, m2), c in eps1.items():
        key = ((v1[i] + m2[0][i] for i in range(cfg.K)),)
        k = (tuple(a + b for a, b in zip(v1, m2[0])), m2[1])
        out[k] = out.get(k, Fraction(0)) + c
    return out


def _contract_right(cfg, eps2: dict) -> dict:
    # 1 (x) eps contraction: v^B returns through the right unit
    out: dict = {}
    for (m1, v2), c in eps2.items():
        if any(v2):
            eta = eta_power(cfg, v2)
            for m, cm in eta.terms.items():
                k = (tuple(a + b for a, b in zip(m1[0], m[0])), tuple(a + b for a, b in zip(m1[1], m[1])))
                out[k] = out.get(k, Fraction(0)) + c * cm
        else:
            out[m1] = out.get(m1, Fraction(0)) + c
    return out


# ---------------------------------------------------------------------------
# the public solver
# ---------------------------------------------------------------------------


def solve(req: SolveRequest) -> AffineSolution:
    basis = req.basis
    if not basis:
        raise ValueError("empty basis")
    cfg = basis[0].cfg
    degs = {b.degree() for b in basis}
    target_coords = _two_slot_coords(req.target)
    tdeg = {cfg.mono_degree(m1) + cfg.mono_degree(m2) for (m1, m2) in target_coords}
    if len(degs) != 1 or (tdeg and tdeg != degs):
        raise DegreeMismatch(f"basis degrees {sorted(degs)} vs target degrees {sorted(tdeg)}")
    _check_reduced_target(cfg, target_coords)
    columns = [psi_bar_coords(b) for b in basis]
    particulars, kernel = _solve_linear(columns, [target_coords])
    particular2, kernel2, congruences = _p_localize(cfg.p, particulars[0], kernel)
    p = cfg.p
    return AffineSolution(
        basis=basis,
        particular=[PLocalScalar(q, p) for q in particular2],
        homogeneous_basis=[[PLocalScalar(q, p) for q in vec] for vec in kernel2],
        congruence_constraints=congruences,
        raw_particular=particulars[0],
        raw_kernel=kernel,
    )


def leading_term(T: GammaElement):
    """Normalize T as a one-slot element over a formal generator and return
    (sub-sum of maximal excess, that excess)."""
    cfg = T.cfg
    if T.is_zero():
        return GammaElement.zero(cfg), None
    e = desuspend_normalize(CobarElement.from_gamma(T, gen=FORMAL_GEN))
    top = raw_excess(e)
    out = GammaElement.zero(cfg)
    for (slots, tv, gen), c in e.terms.items():
        if word_excess(cfg, (slots, tv, gen)) != top:
            continue
        piece = GammaElement(cfg, {slots[0]: c})
        if any(tv):
            piece = piece * eta_power(cfg, tv)
        out = out + piece
    return out, top


def enumerate_basis(cfg: AlgebraConfig, degree: int) -> list[GammaElement]:
    """All Gamma monomials of the given degree with a nontrivial h-part."""
    gens = []
    for i in range(1, cfg.K + 1):
        gens.append(("v", i, cfg.gen_degree(i)))
        gens.append(("h", i, cfg.gen_degree(i)))
    monos = []

    def rec(idx, remaining, v, h):
        if remaining == 0:
            if any(h):
                monos.append((tuple(v), tuple(h)))
            return
        if idx == len(gens):
            return
        kind, i, d = gens[idx]
        max_e = remaining // d
        for e in range(max_e + 1):
            if kind == "v":
                v2 = list(v)
                v2[i - 1] += e
                rec(idx + 1, remaining - e * d, v2, h)
            else:
                h2 = list(h)
                h2[i - 1] += e
                rec(idx + 1, remaining - e * d, v, h2)

    rec(0, degree, list(cfg.zero_exp()), list(cfg.zero_exp()))
    monos.sort(key=mono_sort_key)
    return [GammaElement(cfg, {m: Fraction(1)}) for m in monos]


# ---------------------------------------------------------------------------
# the T-chain
# ---------------------------------------------------------------------------


@dataclass
class TSolution:
    name: str
    basis: list[GammaElement]
    particular: GammaElement
    kernel: list[tuple[str, GammaElement]]  # post-congruence free parameters
    responses: list[tuple[str, GammaElement]]  # columns for earlier parameters
    congruences: list[tuple[str, int, int]]
    leading: GammaElement | None = None
    leading_excess: int | None = None
    raw_particular: list[Fraction] = field(default_factory=list)
    raw_kernel: list[list[Fraction]] = field(default_factory=list)

    def family(self) -> dict:
        out = {None: self.particular}
        for name, vec in self.kernel:
            out[name] = vec
        for name, vec in self.responses:
            out[name] = out.get(name, GammaElement.zero(self.particular.cfg)) + vec
        return out

    def evaluate(self, params: dict) -> GammaElement:
        out = self.particular
        for name, vec in self.kernel + self.responses:
            lam = params.get(name, 0)
            if lam:
                out = out + vec.scale(lam)
        return out


@dataclass
class TChain:
    cfg: AlgebraConfig
    solutions: dict[str, TSolution]

    def param_names(self) -> list[str]:
        return [name for sol in self.solutions.values() for name, _ in sol.kernel]

    def congruences(self) -> list[tuple[str, int, int]]:
        return [c for sol in self.solutions.values() for c in sol.congruences]

    def evaluate(self, params: dict | None = None) -> dict[str, GammaElement]:
        params = params or {}
        unknown = set(params) - set(self.param_names())
        if unknown:
            raise ValueError(f"unknown parameters {sorted(unknown)}")
        return {name: sol.evaluate(params) for name, sol in self.solutions.items()}


def _tensor2(a: GammaElement, b: GammaElement) -> CobarElement:
    return CobarElement.tensor(a, b)


def _solve_family(cfg, name, basis, base_target: CobarElement, param_targets: dict[str, CobarElement]):
    columns = [psi_bar_coords(b) for b in basis]
    names = sorted(param_targets)
    targets = [_two_slot_coords(base_target)] + [_two_slot_coords(param_targets[n]) for n in names]
    particulars, kernel = _solve_linear(columns, targets)
    base_part, kernel2, congruences = _p_localize(cfg.p, particulars[0], kernel)
    kernel_named = [
        (f"{name}.c{j + 1}", combine(basis, vec)) for j, vec in enumerate(kernel2)
    ]
    responses = []
    for ext_name, raw in zip(names, particulars[1:]):
        fixed = _fix_response(cfg.p, raw, kernel)
        responses.append((ext_name, combine(basis, fixed)))
    sol = TSolution(
        name=name,
        basis=basis,
        particular=combine(basis, base_part),
        kernel=kernel_named,
        responses=responses,
        congruences=[(f"{name}.c{j + 1}", r, m) for j, r, m in congruences],
        raw_particular=particulars[0],
        raw_kernel=kernel,
    )
    sol.leading, sol.leading_excess = leading_term(sol.particular)
    return sol


def _fix_response(p, raw: list[Fraction], kernel: list[list[Fraction]]):
    """Make a response vector p-local by adding kernel corrections (any
    residues are allowed: they only reparameterize the family)."""
    if _is_p_local_vec(raw, p):
        return list(raw)
    fixed, _, _ = _p_localize(p, raw, kernel)
    return fixed


def _mono_basis(cfg, spec: list[tuple[dict, dict]]) -> list[GammaElement]:
    return [GammaElement.monomial(cfg, 1, v=v, h=h) for v, h in spec]


def derive_T_chain(cfg: AlgebraConfig | None = None, check_leading: bool = True) -> TChain:
    """Solve the six coaction-coefficient equations in dependency order,
    threading the free parameters of earlier solutions into later targets."""
    cfg = cfg or AlgebraConfig()
    if cfg.p != 3 or cfg.K < 2:
        raise ValueError("the T-chain is defined at p = 3 and needs K >= 2")
    a1 = alpha1(cfg)
    a2 = alpha2(cfg)

    b12 = _mono_basis(cfg, [({}, {1: 3}), ({1: 1}, {1: 2}), ({1: 2}, {1: 1})])
    b16 = _mono_basis(
        cfg,
        [({}, {1: 4}), ({1: 1}, {1: 3}), ({1: 2}, {1: 2}), ({}, {2: 1}), ({1: 3}, {1: 1})],
    )
    b20 = _mono_basis(
        cfg,
        [
            ({}, {1: 5}),
            ({1: 1}, {1: 4}),
            ({1: 2}, {1: 3}),
            ({1: 3}, {1: 2}),
            ({1: 4}, {1: 1}),
            ({1: 1}, {2: 1}),
            ({}, {1: 1, 2: 1}),
            ({2: 1}, {1: 1}),
        ],
    )
    b24 = _mono_basis(
        cfg,
        [
            ({}, {1: 6}),
            ({1: 1}, {1: 5}),
            ({1: 2}, {1: 4}),
            ({1: 3}, {1: 3}),
            ({1: 4}, {1: 2}),
            ({1: 5}, {1: 1}),
            ({1: 2}, {2: 1}),
            ({1: 1}, {1: 1, 2: 1}),
            ({}, {1: 2, 2: 1}),
            ({2: 1}, {1: 2}),
            ({2: 1, 1: 1}, {1: 1}),
        ],
    )

    sols: dict[str, TSolution] = {}
    sols["T6"] = _solve_family(cfg, "T6", _mono_basis(cfg, [({}, {1: 2})]), _tensor2(a1, a1), {})
    sols["T4"] = _solve_family(cfg, "T4", b12, _tensor2(a2, a1), {})

    t4 = sols["T4"].family()
    base5 = _tensor2(a2, sols["T6"].particular) + _tensor2(t4[None], a1)
    params5 = {n: _tensor2(vec, a1) for n, vec in t4.items() if n is not None}
    sols["T5"] = _solve_family(cfg, "T5", b16, base5, params5)

    sols["T1"] = _solve_family(cfg, "T1", b16, _tensor2(a2, a2), {})

    t1 = sols["T1"].family()
    base2 = _tensor2(a2, t4[None]) + _tensor2(t1[None], a1)
    params2: dict[str, CobarElement] = {}
    for n, vec in t4.items():
        if n is not None:
            params2[n] = _tensor2(a2, vec)
    for n, vec in t1.items():
        if n is not None:
            params2[n] = params2.get(n, CobarElement.zero(cfg)) + _tensor2(vec, a1)
    sols["T2"] = _solve_family(cfg, "T2", b20, base2, params2)

    t5 = sols["T5"].family()
    t2 = sols["T2"].family()
    t6 = sols["T6"].particular
    base3 = _tensor2(a2, t5[None]) + _tensor2(t1[None], t6) + _tensor2(t2[None], a1)
    params3: dict[str, CobarElement] = {}
    for n, vec in t5.items():
        if n is not None:
            params3[n] = params3.get(n, CobarElement.zero(cfg)) + _tensor2(a2, vec)
    for n, vec in t1.items():
        if n is not None:
            params3[n] = params3.get(n, CobarElement.zero(cfg)) + _tensor2(vec, t6)
    for n, vec in t2.items():
        if n is not None:
            params3[n] = params3.get(n, CobarElement.zero(cfg)) + _tensor2(vec, a1)
    sols["T3"] = _solve_family(cfg, "T3", b24, base3, params3)

    chain = TChain(cfg, sols)
    if check_leading:
        _assert_leading(cfg, chain)
    return chain


_EXPECTED_LEADING = {
    "T1": ("1/2 v1^2 h1^2", 2),
    "T2": ("-5 v1 h1^4", 4),
    "T3": ("1/4 v1 h1^5", 5),
    "T4": ("h1^3", 3),
    "T5": ("1/4 v1 h1^3", 3),
    "T6": ("1/2 h1^2", 2),
}


def _assert_leading(cfg, chain: TChain):
    from .parser import parse_gamma

    for name, (text, exc) in _EXPECTED_LEADING.items():
        sol = chain.solutions[name]
        expect = parse_gamma(text, cfg)
        if sol.leading != expect or sol.leading_excess != exc:
            raise AssertionError(
                f"{name}: leading term {sol.leading} (excess {sol.leading_excess}), "
                f"expected {expect} (excess {exc})"
            )
