"""Expression grammar (grammar-v1) for BP/Gamma/cobar terms.

    expr   := term (('+' | '-') term)*
    term   := [scalar ['*']] part ('(x)' part)*
    part   := '(' gamma-sum ')' | factor* [modgen]
    factor := ('v' | 'h') index ['^' exponent]
    modgen := 'i' '[' int ']' | 'x' '[' int ']' | 'i'
    scalar := int ['/' int]

Whitespace-insensitive; '(x)' is the tensor separator; a module generator
may only close the final part, with pure v-factors in front of it.
Printing is canonical and parse(print(e)) == e.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd

from .algebra import AlgebraConfig, GammaElement, Mono, format_mono, mono_sort_key
from .cobar import CobarElement, Word
from .plocal import require_p_local

GRAMMAR_VERSION = "grammar-v1"


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<tensor>\(x\))
  | (?P<modgen>[ix]\[\d+\]|i\b)
  | (?P<gen>[vh]\d+)
  | (?P<int>\d+)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _parse_terms(text: str, cfg: AlgebraConfig):
    """Parse into a list of (coeff, [slot elements], target_v, gen).

    Each slot element is either a Mono or a list of (Mono, Fraction) for a
    parenthesized gamma-sum.
    """
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def err(msg, pos=None):
        raise ExprSyntaxError(msg, peek()[2] if pos is None else pos)

    def scalar(first: int) -> Fraction:
        q = Fraction(first)
        if peek()[0] == "op" and peek()[1] == "/":
            take()
            kind, val, pos = take()
            if kind != "int":
                err("expected denominator after '/'", pos)
            q = Fraction(first, int(val))
        try:
            require_p_local(q, cfg.p)
        except Exception:
            err(f"scalar {q} is not p-local at p={cfg.p}")
        return q

    def factor_block(allow_modgen: bool):
        v = list(cfg.zero_exp())
        h = list(cfg.zero_exp())
        saw = False
        gen = None
        while True:
            kind, val, pos = peek()
            if kind == "gen":
                take()
                idx = int(val[1:])
                if not 1 <= idx <= cfg.K:
                    err(f"unknown generator {val} (K={cfg.K})", pos)
                exp = 1
                if peek()[0] == "op" and peek()[1] == "^":
                    take()
                    k2, v2, p2 = take()
                    if k2 != "int":
                        err("expected integer exponent after '^'", p2)
                    exp = int(v2)
                    if exp < 1:
                        err("exponents must be >= 1 when written", p2)
                if val[0] == "v":
                    v[idx - 1] += exp
                else:
                    h[idx - 1] += exp
                mono = (tuple(v), tuple(h))
                if cfg.mono_degree(mono) > cfg.degree_cap:
                    err(f"monomial degree {cfg.mono_degree(mono)} exceeds degree cap {cfg.degree_cap}", pos)
                saw = True
                # optional explicit product between factors: v1*h1
                if peek()[0] == "op" and peek()[1] == "*" and tokens[i + 1][0] in ("gen", "modgen"):
                    take()
            elif kind == "modgen" and allow_modgen:
                take()
                if any(h):
                    err("h-generators cannot act on a module generator", pos)
                gen = val
                saw = True
                break
            else:
                break
        return (tuple(v), tuple(h)), gen, saw

    def gamma_sum_inside_parens():
        """Sum of coefficient * monomial inside '(...)'; no tensors, no modgens."""
        out = []
        sign = 1
        first = True
        while True:
            kind, val, pos = peek()
            if kind == "op" and val in "+-":
                take()
                sign = 1 if val == "+" else -1
            elif not first:
                break
            coeff = Fraction(sign)
            kind, val, pos = peek()
            if kind == "int":
                take()
                coeff *= scalar(int(val))
                if peek()[0] == "op" and peek()[1] == "*":
                    take()
            mono, gen, saw = factor_block(allow_modgen=False)
            if not saw and coeff in (1, -1) and kind != "int":
                err("expected a term")
            out.append((mono, coeff))
            sign = 1
            first = False
            if peek()[0] == "op" and peek()[1] == ")":
                break
            if peek()[0] == "end":
                break
        return out

    terms = []
    sign = 1
    first = True
    while peek()[0] != "end":
        kind, val, pos = peek()
        if kind == "op" and val in "+-":
            take()
            sign = 1 if val == "+" else -1
        elif not first:
            err("expected '+' or '-' between terms")
        coeff = Fraction(sign)
        saw_scalar = False
        if peek()[0] == "int":
            coeff *= scalar(int(take()[1]))
            saw_scalar = True
            if peek()[0] == "op" and peek()[1] == "*":
                take()
        slots = []
        gen = None
        tv = cfg.zero_exp()
        saw_part = False
        unit = (cfg.zero_exp(), cfg.zero_exp())
        if saw_scalar and peek()[0] == "tensor":
            slots.append(unit)  # a bare scalar before (x) marks a unit slot
            saw_part = True
            take()
            kind2, val2, _ = peek()
            if kind2 == "end" or (kind2 == "op" and val2 in "+-"):
                err("expected a slot after '(x)'")
        while True:
            kind, val, pos = peek()
            if kind == "op" and val == "(":
                take()
                poly = gamma_sum_inside_parens()
                if peek()[1] != ")":
                    err("expected ')'")
                take()
                slots.append(poly)
                saw_part = True
            elif kind == "int" and (saw_part or saw_scalar):
                if val != "1":
                    err("only the unit '1' may stand alone in a tensor slot", pos)
                take()
                slots.append(unit)
                saw_part = True
            else:
                mono, g, saw = factor_block(allow_modgen=True)
                if g is not None:
                    tv = mono[0]
                    gen = g
                    saw_part = True
                    break
                if saw:
                    slots.append(mono)
                    saw_part = True
                elif not saw_part and not saw_scalar:
                    err("expected a term")
                else:
                    break
            if peek()[0] == "tensor":
                take()
                kind2, val2, _ = peek()
                if kind2 == "end" or (kind2 == "op" and val2 in "+-"):
                    err("expected a slot after '(x)'")
                continue
            break
        terms.append((coeff, slots, tv, gen))
        sign = 1
        first = False
    return terms


def parse(text: str, cfg: AlgebraConfig | None = None) -> CobarElement:
    """Parse an expression into a cobar element."""
    cfg = cfg or AlgebraConfig()
    words: dict[Word, Fraction] = {}
    for coeff, slots, tv, gen in _parse_terms(text, cfg):
        expanded = [((), coeff)]
        for slot in slots:
            options = slot if isinstance(slot, list) else [(slot, Fraction(1))]
            expanded = [
                (prefix + (mono,), c * cm) for prefix, c in expanded for mono, cm in options
            ]
        for slot_tuple, c in expanded:
            key = (slot_tuple, tv, gen)
            words[key] = words.get(key, Fraction(0)) + c
    return CobarElement(cfg, words)


def parse_gamma(text: str, cfg: AlgebraConfig | None = None) -> GammaElement:
    """Parse an expression that must be a plain Gamma element (s <= 1, no target)."""
    cfg = cfg or AlgebraConfig()
    e = parse(text, cfg)
    terms = {}
    for (slots, tv, gen), c in e.canonical_terms().items():
        if gen is not None or len(slots) > 1:
            raise ExprSyntaxError("expected a Gamma element without tensors or module generators", 0)
        mono = slots[0] if slots else (cfg.zero_exp(), cfg.zero_exp())
        if any(tv):
            raise ExprSyntaxError("expected a Gamma element without module v-powers", 0)
        terms[mono] = terms.get(mono, Fraction(0)) + c
    return GammaElement(cfg, terms)


# ---------------------------------------------------------------------------
# canonical printing
# ---------------------------------------------------------------------------


def _format_fraction(q: Fraction) -> str:
    a = abs(q)
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def _content(coeffs) -> Fraction:
    num = 0
    den = 1
    for c in coeffs:
        num = gcd(num, abs(c.numerator))
        den = den * abs(c.denominator) // gcd(den, abs(c.denominator))
    return Fraction(num, den)


def _format_poly(items) -> str:
    """Flat gamma-style sum from [(mono, coeff)] in a fixed order."""
    pieces = []
    for mono, coeff in items:
        mono_str = format_mono(mono)
        mag = _format_fraction(coeff)
        body = mono_str if (abs(coeff) == 1 and mono_str) else (f"{mag} {mono_str}".strip() if mono_str else mag)
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


def _format_target(tv, gen) -> str:
    vmono = format_mono((tv, tuple(0 for _ in tv)))
    if gen is None:
        return vmono
    return f"{vmono} {gen}".strip()


def format_cobar(e: CobarElement) -> str:
    canon = e.canonical_terms()
    if not canon:
        return "0"
    # group by everything to the right of slot 1
    groups: dict = {}
    for (slots, tv, gen), coeff in canon.items():
        if slots:
            head, tail = slots[0], slots[1:]
        else:
            head, tail = None, ()
        key = (len(slots), tail, tv, gen or "")
        groups.setdefault(key, []).append((head, coeff))
    rendered = []
    for key in sorted(groups, key=lambda k: (k[0], k[1], k[2], k[3])):
        s, tail, tv, gen_key = key
        gen = gen_key or None
        items = sorted(groups[key], key=lambda mc: mono_sort_key(mc[0]) if mc[0] else ())
        tail_str = " (x) ".join(format_mono(m) or "1" for m in tail)
        target_str = _format_target(tv, gen)
        suffix = ""
        if tail_str:
            suffix += f" (x) {tail_str}"
        if target_str:
            suffix += f" (x) {target_str}" if s > 0 else f" {target_str}"
        if s == 0:
            # bare module element: coefficient and target only
            for _, coeff in items:
                body = _format_fraction(coeff)
                text = f"{body} {target_str}".strip() if abs(coeff) != 1 or not target_str else target_str
                rendered.append((coeff > 0, text))
            continue
        if len(items) == 1:
            mono, coeff = items[0]
            mono_str = format_mono(mono) or ("1" if not suffix else "1")
            mag = _format_fraction(coeff)
            body = mono_str if abs(coeff) == 1 else f"{mag} {mono_str}"
            rendered.append((coeff > 0, body + suffix))
        else:
            if not suffix:
                # a plain Gamma sum prints flat
                text = _format_poly(items)
                neg = text.startswith("-")
                rendered.append((not neg, text if not neg else text[1:]))
            else:
                content = _content([c for _, c in items])
                lead_positive = items[0][1] > 0
                inner = _format_poly([(m, c / content) for m, c in items]) if lead_positive else _format_poly(
                    [(m, -c / content) for m, c in items]
                )
                mag = _format_fraction(content)
                prefix = f"{mag} * " if content != 1 else ""
                rendered.append((lead_positive, f"{prefix}({inner})" + suffix))
    out = ""
    for positive, text in rendered:
        if not out:
            out = text if positive else f"-{text}"
        else:
            out += f" + {text}" if positive else f" - {text}"
    return out
