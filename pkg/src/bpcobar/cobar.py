"""The unstable cobar complex over BP*.

Elements are formal sums of tensor words gamma_1 (x) ... (x) gamma_s (x) m
with each slot a Gamma-monomial v^A h^I and a target v^B g in a comodule.
The bimodule relation lets v-powers migrate across tensor signs (push-left
multiplies the slot to the left by the right unit); desuspension trades a
factor of p and an h_1 for such a migration, lowering excess.

Words are stored in distributed form: v-exponents may sit on any slot and
on the target.  Equality, printing and zero tests go through the fully
left-pushed canonical form.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .algebra import AlgebraConfig, GammaElement, Mono, mono_mul
from .plocal import nu, require_p_local

# word key: (slots, target_v, gen); slots is a tuple of (v-exps, h-exps);
# gen is a generator name or None for a pure Gamma tensor.
Word = tuple[tuple[Mono, ...], tuple[int, ...], object]

FORMAL_GEN = "i"  # formal odd sphere generator; degree left symbolic

NEG_INF = -math.inf


class NormalizationDiverged(RuntimeError):
    """desuspend_normalize exceeded its step bound."""


class DivisibilityError(ArithmeticError):
    """Requested division of a cobar element by p^e that is not exact."""


class CobarElement:
    __slots__ = ("cfg", "terms", "truncated")

    def __init__(self, cfg: AlgebraConfig, terms=None, truncated: bool = False):
        self.cfg = cfg
        clean: dict[Word, Fraction] = {}
        for word, coeff in (terms or {}).items():
            q = require_p_local(Fraction(coeff), cfg.p)
            if q == 0:
                continue
            slots, tv, gen = word
            if not slots and gen is None and not any(tv):
                # a bare scalar lives in Gamma^($)0 = Gamma^($)1 via the unit slot
                word = ((( cfg.zero_exp(), cfg.zero_exp()),), tv, gen)
                slots = word[0]
            gamma_degree = sum(cfg.mono_degree(m) for m in slots) + cfg.mono_degree((tv, cfg.zero_exp()))
            if gamma_degree > cfg.degree_cap:
                raise ValueError(
                    f"tensor word of internal degree {gamma_degree} exceeds cap {cfg.degree_cap}"
                )
            clean[word] = clean.get(word, Fraction(0)) + q
        self.terms = {w: c for w, c in clean.items() if c != 0}
        self.truncated = truncated

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, cfg: AlgebraConfig) -> "CobarElement":
        return cls(cfg)

    @classmethod
    def module_element(cls, cfg: AlgebraConfig, gen: str, coeff=1, tv=None) -> "CobarElement":
        return cls(cfg, {((), tuple(tv or cfg.zero_exp()), gen): Fraction(coeff)})

    @classmethod
    def from_gamma(cls, g: GammaElement, gen=None, tv=None) -> "CobarElement":
        """One-slot element gamma (x) (v^tv gen)."""
        cfg = g.cfg
        tv = tuple(tv or cfg.zero_exp())
        return cls(
            cfg,
            {((m,), tv, gen): c for m, c in g.terms.items()},
            g.truncated,
        )

    @classmethod
    def tensor(cls, *gammas: GammaElement, gen=None, tv=None) -> "CobarElement":
        """Pure tensor product of Gamma elements (left coefficients stay put)."""
        cfg = gammas[0].cfg
        tv = tuple(tv or cfg.zero_exp())
        words = {((), tv, gen): Fraction(1)}
        for g in gammas:
            nxt: dict[Word, Fraction] = {}
            for (slots, t, gn), c in words.items():
                for m, cm in g.terms.items():
                    key = (slots + (m,), t, gn)
                    nxt[key] = nxt.get(key, Fraction(0)) + c * cm
            words = nxt
        return cls(cfg, words)

    # -- abelian group operations -------------------------------------------

    def _check_cfg(self, other: "CobarElement"):
        if self.cfg != other.cfg:
            raise ValueError("mixed algebra configurations")

    def __add__(self, other: "CobarElement"):
        self._check_cfg(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, Fraction(0)) + c
        return CobarElement(self.cfg, terms, self.truncated or other.truncated)

    def __neg__(self):
        return CobarElement(self.cfg, {w: -c for w, c in self.terms.items()}, self.truncated)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff) -> "CobarElement":
        q = Fraction(coeff) if not hasattr(coeff, "as_fraction") else coeff.as_fraction()
        return CobarElement(self.cfg, {w: c * q for w, c in self.terms.items()}, self.truncated)

    def __mul__(self, other):
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CobarElement):
            return NotImplemented
        return self.cfg == other.cfg and self.canonical_terms() == other.canonical_terms()

    def is_zero(self) -> bool:
        return not self.canonical_terms()

    def __bool__(self):
        return not self.is_zero()

    # -- structure ----------------------------------------------------------

    def s_values(self) -> set[int]:
        return {len(slots) for slots, _, _ in self.terms}

    def word_degree(self, word: Word, gens: dict[str, int] | None = None):
        slots, tv, gen = word
        d = sum(self.cfg.mono_degree(m) for m in slots)
        d += self.cfg.mono_degree((tv, self.cfg.zero_exp()))
        if gen is not None:
            if gens is None or gen not in gens:
                return None
            d += gens[gen]
        return d

    def degree(self, gens: dict[str, int] | None = None):
        degs = {self.word_degree(w, gens) for w in self.terms}
        if None in degs:
            return None
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"element has mixed degrees {sorted(degs)}")
        return degs.pop()

    def is_homogeneous(self, gens: dict[str, int] | None = None) -> bool:
        try:
            self.degree(gens)
        except ValueError:
            return False
        return True

    # -- canonical (fully left-pushed) form ----------------------------------

    def canonical_terms(self) -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {}
        for word, coeff in self.terms.items():
            for w2, c2 in _left_push_word(self.cfg, word, coeff, include_target=True).items():
                out[w2] = out.get(w2, Fraction(0)) + c2
        return {w: c for w, c in out.items() if c != 0}

    def canonical(self) -> "CobarElement":
        return CobarElement(self.cfg, self.canonical_terms(), self.truncated)

    def __str__(self):
        from .parser import format_cobar

        return format_cobar(self)

    def __repr__(self):
        return f"CobarElement({self})"


# ---------------------------------------------------------------------------
# push-left normalization
# ---------------------------------------------------------------------------


def _eta_power(cfg: AlgebraConfig, vexps: tuple[int, ...]) -> GammaElement:
    from .structure import eta_power

    return eta_power(cfg, vexps)


def _left_push_word(cfg, word: Word, coeff: Fraction, include_target: bool) -> dict[Word, Fraction]:
    """Push v-exponents leftward: slots 2..s become pure h-monomials and,
    when include_target is set, the target loses its v-part into slot s."""
    slots, tv, gen = word
    zero = cfg.zero_exp()
    pending = {(slots, tv): coeff}
    if include_target and slots and any(tv):
        eta = _eta_power(cfg, tv)
        pending = {}
        for m, c in eta.terms.items():
            key = (slots[:-1] + (mono_mul(slots[-1], m),), zero)
            pending[key] = pending.get(key, Fraction(0)) + coeff * c
    # migrate slot v-parts from right to left; slot 1 keeps its v's
    for j in range(len(slots) - 1, 0, -1):
        nxt: dict = {}
        for (sl, t), c in pending.items():
            vj, hj = sl[j]
            if not any(vj):
                nxt[(sl, t)] = nxt.get((sl, t), Fraction(0)) + c
                continue
            eta = _eta_power(cfg, vj)
            for m, cm in eta.terms.items():
                sl2 = sl[: j - 1] + (mono_mul(sl[j - 1], m), (zero, hj)) + sl[j + 1 :]
                key = (sl2, t)
                nxt[key] = nxt.get(key, Fraction(0)) + c * cm
        pending = nxt
    return {(sl, t, gen): c for (sl, t), c in pending.items() if c != 0}


def push_left(e: CobarElement, k: int) -> CobarElement:
    """Rewrite gamma (x) (v^A rest) as (gamma . eta(v^A)) (x) rest across the
    boundary after slot k (1-based; k = s moves the target v-part into slot s).
    Value-preserving."""
    cfg = e.cfg
    zero = cfg.zero_exp()
    out: dict[Word, Fraction] = {}
    for (slots, tv, gen), coeff in e.terms.items():
        s = len(slots)
        if not 1 <= k <= s:
            raise ValueError(f"slot boundary {k} out of range for s={s}")
        if k == s:
            src = tv
            if not any(src):
                out[(slots, tv, gen)] = out.get((slots, tv, gen), Fraction(0)) + coeff
                continue
            eta = _eta_power(cfg, src)
            for m, cm in eta.terms.items():
                key = (slots[:-1] + (mono_mul(slots[-1], m),), zero, gen)
                out[key] = out.get(key, Fraction(0)) + coeff * cm
        else:
            vj, hj = slots[k]  # slot k+1, 0-based index k
            if not any(vj):
                out[(slots, tv, gen)] = out.get((slots, tv, gen), Fraction(0)) + coeff
                continue
            eta = _eta_power(cfg, vj)
            for m, cm in eta.terms.items():
                sl2 = slots[: k - 1] + (mono_mul(slots[k - 1], m), (zero, hj)) + slots[k + 1 :]
                key = (sl2, tv, gen)
                out[key] = out.get(key, Fraction(0)) + coeff * cm
    return CobarElement(cfg, out, e.truncated)


# ---------------------------------------------------------------------------
# the unstable condition and excess
# ---------------------------------------------------------------------------


def admissible(I, target_degree: int) -> bool:
    """Unstable condition: twice the unweighted exponent sum of I is at most
    the degree of the module element it acts on."""
    return 2 * sum(I) <= target_degree


def word_excess(cfg: AlgebraConfig, word: Word):
    """Smallest n such that every slot of this word satisfies the unstable
    condition over iota_{2n+1}; -inf for a bare module element."""
    slots, tv, _ = word
    if not slots:
        return NEG_INF
    suffix = cfg.mono_degree((tv, cfg.zero_exp()))
    best = NEG_INF
    for j in range(len(slots) - 1, -1, -1):
        v, h = slots[j]
        contribution = sum(h) - suffix // 2
        if contribution > best:
            best = contribution
        suffix += cfg.mono_degree(slots[j])
    return best


def raw_excess(e: CobarElement):
    if not e.terms:
        return NEG_INF
    return max(word_excess(e.cfg, w) for w in e.terms)


def _attach_formal(e: CobarElement) -> CobarElement:
    terms = {}
    for (slots, tv, gen), c in e.terms.items():
        terms[(slots, tv, gen if gen is not None else FORMAL_GEN)] = c
    return CobarElement(e.cfg, terms, e.truncated)


# ---------------------------------------------------------------------------
# desuspension: p h1 X = v1 X - X eta(v1)
# ---------------------------------------------------------------------------


def _movable_slot(cfg, word: Word):
    """Index of the unique slot realizing the word's excess, if it carries an
    h1; otherwise None.  Ties are left alone: spending p there cannot lower
    the maximum."""
    slots, tv, _ = word
    suffix = cfg.mono_degree((tv, cfg.zero_exp()))
    contribs = [0] * len(slots)
    for j in range(len(slots) - 1, -1, -1):
        contribs[j] = sum(slots[j][1]) - suffix // 2
        suffix += cfg.mono_degree(slots[j])
    top = max(contribs)
    argmax = [j for j, c in enumerate(contribs) if c == top]
    if len(argmax) != 1:
        return None
    j = argmax[0]
    if slots[j][1][0] < 1:
        return None
    return j


def _apply_move(cfg, word: Word, coeff: Fraction, j: int):
    """p h1 X = v1 X - X eta(v1) applied inside slot j; the eta factor is
    absorbed as a v1 on the next slot or on the target."""
    slots, tv, gen = word
    base = coeff / cfg.p
    v, h = slots[j]
    h2 = (h[0] - 1,) + h[1:]
    bump_v = (v[0] + 1,) + v[1:]
    w1 = (slots[:j] + ((bump_v, h2),) + slots[j + 1 :], tv, gen)
    if j + 1 < len(slots):
        nv, nh = slots[j + 1]
        nxt = ((nv[0] + 1,) + nv[1:], nh)
        w2 = (slots[:j] + ((v, h2), nxt) + slots[j + 2 :], tv, gen)
    else:
        w2 = (slots[:j] + ((v, h2),), (tv[0] + 1,) + tv[1:], gen)
    return [(w1, base), (w2, -base)]


def _merge(pool: dict, extra) -> None:
    for w, c in extra:
        pool[w] = pool.get(w, Fraction(0)) + c
        if pool[w] == 0:
            del pool[w]


def _word_sort_key(word: Word):
    slots, tv, gen = word
    return (len(slots), slots, tv, gen or "")


def _greedy(cfg, pool: dict, steps: int, max_steps: int):
    """Apply strictly-lowering p-spends to maximal-excess words until none
    applies."""
    p = cfg.p
    while True:
        if not pool:
            return pool, steps
        exc = {w: word_excess(cfg, w) for w in pool}
        top = max(exc.values())
        candidates = [
            w
            for w in pool
            if exc[w] == top and nu(pool[w], p) >= 1 and w[0] and _movable_slot(cfg, w) is not None
        ]
        if not candidates:
            return pool, steps
        if steps >= max_steps:
            raise NormalizationDiverged(f"step bound {max_steps} exceeded")
        w = min(candidates, key=_word_sort_key)
        coeff = pool.pop(w)
        _merge(pool, _apply_move(cfg, w, coeff, _movable_slot(cfg, w)))
        steps += 1


def _slot_canonical_pool(cfg, pool: dict) -> dict:
    out: dict = {}
    for word, coeff in pool.items():
        for w2, c2 in _left_push_word(cfg, word, coeff, include_target=False).items():
            out[w2] = out.get(w2, Fraction(0)) + c2
    return {w: c for w, c in out.items() if c != 0}


def _pool_excess(cfg, pool: dict):
    if not pool:
        return NEG_INF
    return max(word_excess(cfg, w) for w in pool)


def desuspend_normalize(e: CobarElement, max_steps: int = 5000) -> CobarElement:
    """Greedy excess-lowering rewriting to a fixed point.

    Alternates strict p-spends with a collection pass in slot-canonical
    coordinates; the collection pass is kept only when it enables a strictly
    lower maximum, so the result's excess never exceeds the input's.
    """
    cfg = e.cfg
    e = _attach_formal(e)
    pool = dict(e.terms)
    steps = 0
    pool, steps = _greedy(cfg, pool, steps, max_steps)
    best, best_exc = pool, _pool_excess(cfg, pool)
    while True:
        canon = _slot_canonical_pool(cfg, best)
        if canon == best:
            break
        try:
            canon, steps = _greedy(cfg, canon, steps, max_steps)
        except NormalizationDiverged:
            break
        exc = _pool_excess(cfg, canon)
        if exc < best_exc:
            best, best_exc = canon, exc
        else:
            break
    return CobarElement(cfg, best, e.truncated)


def excess(e: CobarElement, max_steps: int = 5000):
    """Excess of the normalized representative (an upper bound for the true
    desuspension in general; exact on the certified monomial family)."""
    if not e.terms:
        return NEG_INF
    return raw_excess(desuspend_normalize(e, max_steps))


# ---------------------------------------------------------------------------
# the reduced cobar differential
# ---------------------------------------------------------------------------


def differential(e: CobarElement, M, reduced: bool = True, check_degree: bool = True) -> CobarElement:
    """Cobar differential: insert the coproduct at each slot with sign (-1)^j
    and the coaction at the target with sign (-1)^(s+1).

    In reduced mode the counit insertions are cancelled symbolically; the
    unreduced mode keeps every degenerate word (the two agree as values).
    """
    from .structure import psi_bar_slot, psi_slot, eta_power

    cfg = e.cfg
    if check_degree:
        degs = set()
        for w in e.terms:
            d = e.word_degree(w, M.gens)
            if d is not None:
                degs.add(d)
        if len(degs) > 1:
            raise ValueError(f"differential requires a degree-homogeneous element, got degrees {sorted(degs)}")

    zero = cfg.zero_exp()
    out: dict[Word, Fraction] = {}

    def add(word: Word, coeff: Fraction):
        out[word] = out.get(word, Fraction(0)) + coeff

    for (slots, tv, gen), coeff in e.terms.items():
        s = len(slots)
        if not reduced:
            # leading face: 1 (x) x
            add((((zero, zero),) + slots, tv, gen), coeff)
        for j, mono in enumerate(slots):
            sign = -1 if (j + 1) % 2 else 1
            table = psi_bar_slot(cfg, mono) if reduced else psi_slot(cfg, mono)
            for (m1, m2), c in table.items():
                add((slots[:j] + (m1, m2) + slots[j + 1 :], tv, gen), sign * coeff * c)
        sign = -1 if (s + 1) % 2 else 1
        if gen is None:
            raise ValueError("differential needs a module target on every word")
        rows = M.coaction_rows(gen)
        if reduced:
            # target piece: (v^B - eta(v^B)) (x) g  +  v^B psi_bar(g)
            if any(tv):
                diff = GammaElement.monomial(cfg, 1, v={i + 1: a for i, a in enumerate(tv) if a}) - eta_power(cfg, tv)
                for m, cm in diff.terms.items():
                    add((slots + (m,), zero, gen), sign * coeff * cm)
            for gamma, tgt in rows:
                for m, cm in gamma.terms.items():
                    if tgt == gen and m == (zero, zero):
                        cm = cm - 1  # rows are merged per target, so this removes 1 (x) g
                        if cm == 0:
                            continue
                    add((slots + (mono_mul((tv, zero), m),), zero, tgt), sign * coeff * cm)
        else:
            for gamma, tgt in rows:
                for m, cm in gamma.terms.items():
                    add((slots + (mono_mul((tv, zero), m),), zero, tgt), sign * coeff * cm)
    return CobarElement(cfg, out, e.truncated)


# ---------------------------------------------------------------------------
# the alpha family: generators of the 1-line over spheres
# ---------------------------------------------------------------------------


def alpha(cfg: AlgebraConfig, m: int, e: int) -> CobarElement:
    """alpha_{m/e}: the exact division d(v1^m iota) / p^e, normalized so that
    alpha(1, 1) = -h1."""
    if m < 1:
        raise ValueError("alpha requires m >= 1")
    if e < 0:
        raise ValueError("alpha requires e >= 0")
    if m * cfg.gen_degree(1) > cfg.degree_cap:
        raise ValueError("v1^m exceeds the degree cap; raise degree_cap")
    vm = (m,) + (0,) * (cfg.K - 1)
    from .structure import eta_power

    diff = eta_power(cfg, vm) - GammaElement.monomial(cfg, 1, v={1: m})
    pe = Fraction(cfg.p) ** e
    terms: dict[Word, Fraction] = {}
    for mono, c in diff.terms.items():
        if nu(c, cfg.p) < e:
            raise DivisibilityError(f"p^{e} does not divide d(v1^{m})")
        terms[((mono,), cfg.zero_exp(), FORMAL_GEN)] = c / pe
    return CobarElement(cfg, terms)


# ---------------------------------------------------------------------------
# comodule coassociativity
# ---------------------------------------------------------------------------


def check_coassociativity(M) -> bool:
    """(psi (x) 1) psi_M = (1 (x) psi_M) psi_M, exactly, on every generator."""
    from .structure import psi_slot

    cfg = M.cfg
    zero = cfg.zero_exp()
    for gen in M.gens:
        lhs: dict[Word, Fraction] = {}
        rhs: dict[Word, Fraction] = {}
        for gamma, tgt in M.coaction_rows(gen):
            for mono, cm in gamma.terms.items():
                for (m1, m2), c in psi_slot(cfg, mono).items():
                    w = ((m1, m2), zero, tgt)
                    lhs[w] = lhs.get(w, Fraction(0)) + cm * c
            for gamma2, tgt2 in M.coaction_rows(tgt):
                for mono, cm in gamma.terms.items():
                    for mono2, cm2 in gamma2.terms.items():
                        w = ((mono, mono2), zero, tgt2)
                        rhs[w] = rhs.get(w, Fraction(0)) + cm * cm2
        if CobarElement(cfg, lhs) != CobarElement(cfg, rhs):
            return False
    return True
