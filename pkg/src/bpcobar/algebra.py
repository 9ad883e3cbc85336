"""Sparse graded-commutative polynomial arithmetic for BP* and Gamma.

BP* = Z_(p)[v_1..v_K] and Gamma = BP*[h_1..h_K], with |v_i| = |h_i| =
2(p^i - 1), truncated by internal degree.  Elements are stored in
left-canonical form: a finite map from (v-exponents, h-exponents) to a
p-local coefficient.  All generators sit in even degree, so products carry
no signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .plocal import PLocalScalar, require_p_local

Mono = tuple[tuple[int, ...], tuple[int, ...]]  # (v-exponents, h-exponents)

_SMALL_PRIMES = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}


@dataclass(frozen=True)
class AlgebraConfig:
    p: int = 3
    K: int = 3
    degree_cap: int = 72

    def __post_init__(self):
        if self.p not in _SMALL_PRIMES:
            raise ValueError(f"p must be a small odd prime, got {self.p}")
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.degree_cap < 2 * (self.p**self.K - 1):
            raise ValueError(
                f"degree_cap {self.degree_cap} < 2(p^K - 1) = {2 * (self.p ** self.K - 1)}"
            )

    def gen_degree(self, i: int) -> int:
        """Internal degree of v_i and h_i (1-based)."""
        if not 1 <= i <= self.K:
            raise ValueError(f"generator index {i} out of range 1..{self.K}")
        return 2 * (self.p**i - 1)

    def zero_exp(self) -> tuple[int, ...]:
        return (0,) * self.K

    def mono_degree(self, mono: Mono) -> int:
        v, h = mono
        return sum(
            (v[i] + h[i]) * 2 * (self.p ** (i + 1) - 1) for i in range(self.K)
        )


def mono_mul(a: Mono, b: Mono) -> Mono:
    (av, ah), (bv, bh) = a, b
    return (
        tuple(x + y for x, y in zip(av, bv)),
        tuple(x + y for x, y in zip(ah, bh)),
    )


def mono_sort_key(mono: Mono):
    # graded, then lexicographic with higher v-exponents first
    v, h = mono
    return (sum(v) + sum(h), tuple(-x for x in v), tuple(-x for x in h))


def _mono_sort_key_deg(cfg: AlgebraConfig, mono: Mono):
    return (cfg.mono_degree(mono),) + mono_sort_key(mono)[1:]


class GammaElement:
    """Element of Gamma = BP*[h_1..h_K] in left-canonical form."""

    __slots__ = ("cfg", "terms", "truncated")

    def __init__(self, cfg: AlgebraConfig, terms=None, truncated: bool = False):
        self.cfg = cfg
        clean: dict[Mono, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            q = require_p_local(Fraction(coeff), cfg.p)
            if q == 0:
                continue
            if cfg.mono_degree(mono) > cfg.degree_cap:
                raise ValueError(
                    f"monomial of degree {cfg.mono_degree(mono)} exceeds cap {cfg.degree_cap}"
                )
            clean[mono] = clean.get(mono, Fraction(0)) + q
        self.terms = {m: c for m, c in clean.items() if c != 0}
        self.truncated = truncated

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, cfg: AlgebraConfig) -> "GammaElement":
        return cls(cfg)

    @classmethod
    def one(cls, cfg: AlgebraConfig) -> "GammaElement":
        return cls(cfg, {(cfg.zero_exp(), cfg.zero_exp()): Fraction(1)})

    @classmethod
    def monomial(cls, cfg: AlgebraConfig, coeff=1, v=None, h=None) -> "GammaElement":
        vv = list(cfg.zero_exp())
        hh = list(cfg.zero_exp())
        for i, e in (v or {}).items():
            vv[i - 1] += e
        for i, e in (h or {}).items():
            hh[i - 1] += e
        return cls(cfg, {(tuple(vv), tuple(hh)): Fraction(coeff)})

    @classmethod
    def v_gen(cls, cfg: AlgebraConfig, i: int = 1) -> "GammaElement":
        return cls.monomial(cfg, 1, v={i: 1})

    @classmethod
    def h_gen(cls, cfg: AlgebraConfig, i: int = 1) -> "GammaElement":
        return cls.monomial(cfg, 1, h={i: 1})

    # -- ring structure ----------------------------------------------------

    def _check_cfg(self, other: "GammaElement"):
        if self.cfg != other.cfg:
            raise ValueError("mixed algebra configurations")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GammaElement(self.cfg, {(self.cfg.zero_exp(), self.cfg.zero_exp()): Fraction(other)})
        self._check_cfg(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return GammaElement(self.cfg, terms, self.truncated or other.truncated)

    __radd__ = __add__

    def __neg__(self):
        return GammaElement(self.cfg, {m: -c for m, c in self.terms.items()}, self.truncated)

    def __sub__(self, other):
        return self + (-other if isinstance(other, GammaElement) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, coeff) -> "GammaElement":
        if isinstance(coeff, PLocalScalar):
            coeff = coeff.as_fraction()
        q = Fraction(coeff)
        return GammaElement(self.cfg, {m: c * q for m, c in self.terms.items()}, self.truncated)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PLocalScalar)):
            return self.scale(other)
        self._check_cfg(other)
        cap = self.cfg.degree_cap
        out: dict[Mono, Fraction] = {}
        dropped = False
        for ma, ca in self.terms.items():
            da = self.cfg.mono_degree(ma)
            for mb, cb in other.terms.items():
                if da + self.cfg.mono_degree(mb) > cap:
                    dropped = True
                    continue
                m = mono_mul(ma, mb)
                out[m] = out.get(m, Fraction(0)) + ca * cb
        return GammaElement(self.cfg, out, self.truncated or other.truncated or dropped)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in Gamma")
        result = GammaElement.one(self.cfg)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, GammaElement):
            return self.cfg == other.cfg and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == GammaElement(self.cfg, {(self.cfg.zero_exp(), self.cfg.zero_exp()): Fraction(other)})
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- degrees -----------------------------------------------------------

    def degrees(self) -> set[int]:
        return {self.cfg.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self):
        """Common degree of a homogeneous element (None for zero)."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"element has mixed degrees {sorted(degs)}")
        return degs.pop()

    # -- structure helpers ---------------------------------------------------

    def counit(self) -> "GammaElement":
        """Set all h-generators to zero (the counit applied within Gamma)."""
        zero_h = self.cfg.zero_exp()
        return GammaElement(
            self.cfg,
            {(v, zero_h): c for (v, h), c in self.terms.items() if h == zero_h},
            self.truncated,
        )

    def h_free(self) -> bool:
        zero_h = self.cfg.zero_exp()
        return all(h == zero_h for (_, h) in self.terms)

    def coefficient(self, v: dict[int, int] | None = None, h: dict[int, int] | None = None) -> PLocalScalar:
        vv = list(self.cfg.zero_exp())
        hh = list(self.cfg.zero_exp())
        for i, e in (v or {}).items():
            vv[i - 1] = e
        for i, e in (h or {}).items():
            hh[i - 1] = e
        return PLocalScalar(self.terms.get((tuple(vv), tuple(hh)), Fraction(0)), self.cfg.p)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _mono_sort_key_deg(self.cfg, kv[0]))

    # -- printing ------------------------------------------------------------

    def __str__(self):
        return format_gamma(self)

    def __repr__(self):
        return f"GammaElement({format_gamma(self)})"


def format_mono(mono: Mono) -> str:
    v, h = mono
    parts = []
    for i, e in enumerate(v):
        if e == 1:
            parts.append(f"v{i + 1}")
        elif e > 1:
            parts.append(f"v{i + 1}^{e}")
    for i, e in enumerate(h):
        if e == 1:
            parts.append(f"h{i + 1}")
        elif e > 1:
            parts.append(f"h{i + 1}^{e}")
    return " ".join(parts)


def format_coeff_mono(coeff: Fraction, mono_str: str) -> str:
    """Render one term, with coefficient 1 suppressed next to a monomial."""
    c = str(PLocalScalar(abs(coeff), 3)) if coeff.denominator != 1 else str(abs(coeff.numerator))
    if mono_str:
        body = mono_str if abs(coeff) == 1 else f"{c} {mono_str}"
    else:
        body = c
    return body


def format_gamma(e: GammaElement) -> str:
    if not e.terms:
        return "0"
    pieces = []
    for mono, coeff in e.sorted_terms():
        body = format_coeff_mono(coeff, format_mono(mono))
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


@lru_cache(maxsize=None)
def default_config() -> AlgebraConfig:
    return AlgebraConfig()
