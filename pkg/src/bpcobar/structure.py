"""Structure maps of the BP Hopf algebroid.

Everything is assembled from the p-typical formal group law: the Hurewicz
coefficients m_n (rational polynomials in the v's), the right unit on the
v-generators, the coproduct, and the conjugation between the h-generators
and Quillen's t-generators.  The convention h_i = c(t_i) is pinned by the
test vectors asserted at table-build time; intermediate arithmetic with
p-power denominators is confined to this module.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra import AlgebraConfig, GammaElement, Mono, mono_mul
from .cobar import CobarElement
from .plocal import PLocalityViolation, nu

# sparse polynomials: {(v-exps, t-exps): Fraction}; two-slot tensors over the
# rationalization: {((v,t) mono, (v,t) mono): Fraction}


def _padd(a, b, scale=Fraction(1)):
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, Fraction(0)) + c * scale
        if out[k] == 0:
            del out[k]
    return out


def _kadd(k1, k2):
    if k1 and isinstance(k1[0], tuple):
        return tuple(_kadd(x, y) for x, y in zip(k1, k2))
    return tuple(x + y for x, y in zip(k1, k2))


def _pmul(a, b):
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = _kadd(ka, kb)
            out[k] = out.get(k, Fraction(0)) + ca * cb
    return {k: c for k, c in out.items() if c != 0}


def _ppow(a, n):
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else _pmul(result, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return result if result is not None else None


def _pscale(a, q):
    q = Fraction(q)
    return {k: c * q for k, c in a.items() if c * q != 0}


class StructureTables:
    """Right unit, coproduct and conjugation data for one algebra config."""

    def __init__(self, cfg: AlgebraConfig, flip_sign: bool = False):
        self.cfg = cfg
        self.flip_sign = flip_sign
        p, K = cfg.p, cfg.K
        zero = cfg.zero_exp()

        def vmono(i, e=1):
            v = list(zero)
            v[i - 1] = e
            return (tuple(v), zero)

        def tmono(i, e=1):
            t = list(zero)
            t[i - 1] = e
            return (zero, tuple(t))

        one = {(zero, zero): Fraction(1)}

        # Hurewicz coefficients: p m_n = sum_{i<n} m_i v_{n-i}^{p^i}, m_0 = 1
        m = [dict(one)]
        for n in range(1, K + 1):
            acc = {}
            for i in range(n):
                acc = _padd(acc, _pmul(m[i], _ppow({vmono(n - i): Fraction(1)}, p**i)))
            m.append(_pscale(acc, Fraction(1, p)))
        self.m = m

        # right unit on m and on v: eta(m_n) = sum m_i t_{n-i}^{p^i}
        eta_m = [dict(one)]
        for n in range(1, K + 1):
            acc = {}
            for i in range(n + 1):
                tpart = _ppow({tmono(n - i): Fraction(1)}, p**i) if n - i > 0 else dict(one)
                acc = _padd(acc, _pmul(m[i], tpart))
            eta_m.append(acc)

        eta_v_t = [None]  # eta(v_n) as a polynomial in v and t
        for n in range(1, K + 1):
            acc = _pscale(eta_m[n], p)
            for i in range(1, n):
                acc = _padd(acc, _pmul(eta_m[i], _ppow(eta_v_t[n - i], p**i)), Fraction(-1))
            eta_v_t.append(acc)

        # conjugates of the t-generators: sum m_i t_j^{p^i} c_k^{p^(i+j)} = m_n
        c_t = [dict(one)]
        for n in range(1, K + 1):
            acc = dict(m[n])
            for i in range(n + 1):
                for j in range(n + 1 - i):
                    k = n - i - j
                    if k == n:
                        continue  # the c(t_n) term itself
                    piece = dict(m[i])
                    if j:
                        piece = _pmul(piece, _ppow({tmono(j): Fraction(1)}, p**i))
                    if k:
                        piece = _pmul(piece, _ppow(c_t[k], p ** (i + j)))
                    acc = _padd(acc, piece, Fraction(-1))
            c_t.append(acc)

        sign = Fraction(-1 if flip_sign else 1)
        # h_n in t-coordinates and the inverse substitution
        self.h_in_t = [None] + [_pscale(c_t[n], sign) for n in range(1, K + 1)]
        t_in_h = [None]
        for n in range(1, K + 1):
            # c(t_n) = -t_n + g_n  =>  t_n = g_n - sign * h_n
            g_n = _padd(c_t[n], {tmono(n): Fraction(1)})
            expr = self._subst_t(g_n, t_in_h)  # g_n only involves t_1..t_{n-1}
            expr = _padd(expr, {tmono(n): Fraction(1)}, Fraction(-sign))
            t_in_h.append(expr)
        self.t_in_h = t_in_h  # h-exponents ride in the t-slot of the key

        # right unit on v in h-coordinates, as honest Gamma elements
        self.eta_v = [None]
        for n in range(1, K + 1):
            poly = self._subst_t(eta_v_t[n], t_in_h)
            try:
                g = GammaElement(cfg, {(kv, kt): c for (kv, kt), c in poly.items()})
            except PLocalityViolation as err:
                raise AssertionError(f"right unit of v_{n} failed to be p-local: {err}") from err
            self.eta_v.append(g)

        # coproduct on t, then on h
        psi_t = [{((zero, zero), (zero, zero)): Fraction(1)}]
        for n in range(1, K + 1):
            acc = {}
            for a in range(n + 1):
                for i in range(n + 1 - a):
                    j = n - a - i
                    left = dict(m[a])
                    if i:
                        left = _pmul(left, _ppow({tmono(i): Fraction(1)}, p**a))
                    right = _ppow({tmono(j): Fraction(1)}, p ** (a + i)) if j else dict(one)
                    acc = _padd(acc, {(kl, kr): cl * cr for kl, cl in left.items() for kr, cr in right.items()})
            for a in range(1, n + 1):
                acc = _padd(acc, _two_slot_scale(_two_slot_pow(psi_t[n - a], p**a), m[a]), Fraction(-1))
            psi_t.append(acc)

        self.psi_h = [None]
        for n in range(1, K + 1):
            two = {}
            for (kv, kt), coeff in self.h_in_t[n].items():
                piece = {((kv, zero), (zero, zero)): Fraction(coeff)}
                for i, e in enumerate(kt):
                    for _ in range(e):
                        piece = _pmul(piece, psi_t[i + 1])
                two = _padd(two, piece)
            self.psi_h.append(self._two_slot_to_h(two))

        if not flip_sign:
            self._assert_pinned_values()

    # -- helpers -----------------------------------------------------------------

    def _subst_t(self, poly, t_in_h):
        """Substitute t_i -> t_in_h[i] in a (v, t)-polynomial; the result's
        t-slot holds h-exponents."""
        zero = self.cfg.zero_exp()
        out = {}
        for (kv, kt), coeff in poly.items():
            piece = {(kv, zero): Fraction(coeff)}
            for i, e in enumerate(kt):
                for _ in range(e):
                    piece = _pmul(piece, t_in_h[i + 1])
            out = _padd(out, piece)
        return out

    def _eta_power_local(self, vexps) -> GammaElement:
        piece = GammaElement.one(self.cfg)
        for i, e in enumerate(vexps):
            if e:
                piece = piece * (self.eta_v[i + 1] ** e)
        return piece

    def _two_slot_to_h(self, two):
        """Convert both slots of a (v,t)(x)(v,t) tensor to h-coordinates and
        push any v-part of the right slot across to the left slot."""
        cfg = self.cfg
        zero = cfg.zero_exp()
        out: dict[tuple[Mono, Mono], Fraction] = {}
        for (kl, kr), coeff in two.items():
            left = self._subst_t({kl: Fraction(1)}, self.t_in_h)
            right = self._subst_t({kr: Fraction(1)}, self.t_in_h)
            for ml, cl in left.items():
                for mr, cr in right.items():
                    c = coeff * cl * cr
                    vr, hr = mr
                    if any(vr):
                        eta = self._eta_power_local(vr)
                        for me, ce in eta.terms.items():
                            key = (mono_mul(ml, me), (zero, hr))
                            out[key] = out.get(key, Fraction(0)) + c * ce
                    else:
                        key = (ml, mr)
                        out[key] = out.get(key, Fraction(0)) + c
        return {k: c for k, c in out.items() if c != 0}

    def _assert_pinned_values(self):
        cfg = self.cfg
        p = cfg.p
        v1 = GammaElement.v_gen(cfg, 1)
        h1 = GammaElement.h_gen(cfg, 1)
        assert self.eta_v[1] == v1 - p * h1, f"eta(v1) = {self.eta_v[1]}"
        zero = cfg.zero_exp()
        e1 = tuple(1 if i == 0 else 0 for i in range(cfg.K))
        expect_psi_h1 = {
            (((zero, e1)), (zero, zero)): Fraction(1),
            ((zero, zero), (zero, e1)): Fraction(1),
        }
        assert self.psi_h[1] == expect_psi_h1, "psi(h1) is not primitive"
        if p == 3 and cfg.K >= 2:
            expect = (
                GammaElement.v_gen(cfg, 2)
                + GammaElement.monomial(cfg, 4, v={1: 3}, h={1: 1})
                + GammaElement.monomial(cfg, -18, v={1: 2}, h={1: 2})
                + GammaElement.monomial(cfg, 35, v={1: 1}, h={1: 3})
                + GammaElement.monomial(cfg, -24, h={1: 4})
                + GammaElement.monomial(cfg, -3, h={2: 1})
            )
            assert self.eta_v[2] == expect, f"eta(v2) = {self.eta_v[2]}"
            e2 = tuple(1 if i == 1 else 0 for i in range(cfg.K))
            u = (zero, zero)

            def h(k):
                return (zero, (k,) + zero[1:])

            def vh(a, k):
                return ((a,) + zero[1:], (k,) + zero[1:])

            expect_psi_h2 = {
                ((zero, e2), u): Fraction(1),
                (u, (zero, e2)): Fraction(1),
                (h(3), h(1)): Fraction(4),
                (h(2), h(2)): Fraction(6),
                (h(1), h(3)): Fraction(3),
                (vh(1, 1), h(2)): Fraction(-1),
                (vh(1, 2), h(1)): Fraction(-1),
            }
            assert self.psi_h[2] == expect_psi_h2, "psi(h2) does not match the pinned table"


def _two_slot_pow(two, n):
    result = None
    base = two
    while n:
        if n & 1:
            result = base if result is None else _pmul(result, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return result


def _two_slot_scale(two, poly):
    """Multiply a (v,t)(x)(v,t) tensor by a v-polynomial acting on the left slot."""
    out = {}
    for (kl, kr), c in two.items():
        for kp, cp in poly.items():
            key = (_kadd(kl, kp), kr)
            out[key] = out.get(key, Fraction(0)) + c * cp
    return {k: c for k, c in out.items() if c != 0}


@lru_cache(maxsize=None)
def tables(cfg: AlgebraConfig, flip_sign: bool = False) -> StructureTables:
    return StructureTables(cfg, flip_sign)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def hazewinkel_m(cfg: AlgebraConfig, n: int) -> dict[tuple[int, ...], Fraction]:
    """m_n as a rational polynomial in the v's: {v-exponents: coefficient}."""
    if not 0 <= n <= cfg.K:
        raise ValueError(f"n out of range 0..{cfg.K}")
    return {kv: c for (kv, _), c in tables(cfg).m[n].items()}


def format_m_poly(poly: dict[tuple[int, ...], Fraction]) -> str:
    """Render a rational v-polynomial (may carry p-power denominators)."""
    if not poly:
        return "0"
    items = sorted(poly.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0])))
    pieces = []
    for kv, c in items:
        mono = " ".join(f"v{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(kv) if e)
        a = abs(c)
        cs = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        body = mono if (a == 1 and mono) else (f"{cs} {mono}".strip() if mono else cs)
        pieces.append(("- " if c < 0 else "+ ") + body)
    head = pieces[0]
    out = ("-" + head[2:]) if head.startswith("- ") else head[2:]
    if len(pieces) > 1:
        out += " " + " ".join(pieces[1:])
    return out


def right_unit(b: GammaElement, flip_sign: bool = False) -> GammaElement:
    """Multiplicative extension of the right unit; b must be h-free."""
    if not b.h_free():
        raise ValueError("right_unit applies to BP* polynomials (no h-generators)")
    cfg = b.cfg
    t = tables(cfg, flip_sign)
    out = GammaElement.zero(cfg)
    for (kv, _), coeff in b.terms.items():
        piece = GammaElement.one(cfg)
        for i, e in enumerate(kv):
            for _ in range(e):
                piece = piece * t.eta_v[i + 1]
        out = out + piece.scale(coeff)
    return out


@lru_cache(maxsize=None)
def _eta_power_cached(cfg: AlgebraConfig, vexps: tuple[int, ...]) -> GammaElement:
    t = tables(cfg)
    piece = GammaElement.one(cfg)
    for i, e in enumerate(vexps):
        if e:
            piece = piece * (t.eta_v[i + 1] ** e)
    return piece


def eta_power(cfg: AlgebraConfig, vexps) -> GammaElement:
    return _eta_power_cached(cfg, tuple(vexps))


@lru_cache(maxsize=None)
def psi_slot(cfg: AlgebraConfig, mono: Mono) -> dict[tuple[Mono, Mono], Fraction]:
    """Full coproduct of a Gamma monomial as a canonical two-slot table."""
    t = tables(cfg)
    zero = cfg.zero_exp()
    kv, kh = mono
    two = {((kv, zero), (zero, zero)): Fraction(1)}
    for i, e in enumerate(kh):
        for _ in range(e):
            two = _pmul(two, t.psi_h[i + 1])
    return two


@lru_cache(maxsize=None)
def psi_bar_slot(cfg: AlgebraConfig, mono: Mono) -> dict[tuple[Mono, Mono], Fraction]:
    """Reduced coproduct table: psi(x) - x (x) 1 - 1 (x) x, with the right
    copy of x pushed to canonical form."""
    zero = cfg.zero_exp()
    out = dict(psi_slot(cfg, mono))
    kv, kh = mono

    def sub(key, q):
        out[key] = out.get(key, Fraction(0)) - q
        if out[key] == 0:
            del out[key]

    sub((mono, (zero, zero)), Fraction(1))
    # 1 (x) v^A h^I = eta(v^A) (x) h^I in canonical coordinates
    eta = eta_power(cfg, kv)
    for m, c in eta.terms.items():
        sub((m, (zero, kh)), c)
    return out


def coproduct(g: GammaElement) -> CobarElement:
    """psi(g) as a two-slot element (left BP coefficients stay on the left)."""
    cfg = g.cfg
    out: dict = {}
    zero = cfg.zero_exp()
    for mono, coeff in g.terms.items():
        for (m1, m2), c in psi_slot(cfg, mono).items():
            key = ((m1, m2), zero, None)
            out[key] = out.get(key, Fraction(0)) + coeff * c
    return CobarElement(cfg, out, g.truncated)


def reduced_coproduct(g: GammaElement) -> CobarElement:
    """psi(g) - g (x) 1 - 1 (x) g; requires a zero counit component."""
    if not g.counit().is_zero():
        raise ValueError("reduced coproduct requires a zero counit component")
    cfg = g.cfg
    out: dict = {}
    zero = cfg.zero_exp()
    for mono, coeff in g.terms.items():
        for (m1, m2), c in psi_bar_slot(cfg, mono).items():
            key = ((m1, m2), zero, None)
            out[key] = out.get(key, Fraction(0)) + coeff * c
    return CobarElement(cfg, out, g.truncated)


def counit(g: GammaElement) -> GammaElement:
    return g.counit()


def t_to_h(cfg: AlgebraConfig, n: int, flip_sign: bool = False) -> GammaElement:
    """t_n expressed in the h-generators."""
    t = tables(cfg, flip_sign)
    poly = t.t_in_h[n]
    return GammaElement(cfg, {(kv, kt): c for (kv, kt), c in poly.items()})


def h_to_t(cfg: AlgebraConfig, n: int, flip_sign: bool = False) -> dict:
    """h_n expressed in the t-generators (raw polynomial data)."""
    return dict(tables(cfg, flip_sign).h_in_t[n])
