"""Closed-form evaluation of the 3-primary periodic homotopy group structures.

Groups are finite abelian 3-groups recorded as multisets of cyclic-factor
exponents (Z/3^e per entry), because the splitting type is the content.
The undetermined constant delta is a mandatory input restricted to
{2, 5, 8}; one documented case returns two alternative splittings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .plocal import INF, nu

DELTA_CHOICES = (2, 5, 8)
DELTA_NOTE = (
    "delta is an undetermined constant in {2, 5, 8}; results in the j = 5, 8 mod 9 "
    "branch depend on its value"
)


@dataclass(frozen=True)
class AbelianGroupStructure:
    """Multiset of cyclic-factor exponents, sorted descending; () is the zero group."""

    factors: tuple[int, ...]
    ambiguous_alternatives: tuple[int, ...] | None = None
    parameters: dict = field(default_factory=dict, compare=False)

    @classmethod
    def of(cls, *exponents: int, alternatives=None, **parameters) -> "AbelianGroupStructure":
        factors = tuple(sorted((e for e in exponents if e > 0), reverse=True))
        alt = tuple(sorted(alternatives, reverse=True)) if alternatives else None
        return cls(factors, alt, parameters)

    @property
    def ambiguous(self) -> bool:
        return self.ambiguous_alternatives is not None

    def order_exponent(self) -> int:
        return sum(self.factors)

    def __str__(self):
        if not self.factors:
            return "0"
        body = " (+) ".join(f"Z/3^{e}" if e > 1 else "Z/3" for e in self.factors)
        if self.ambiguous_alternatives:
            alt = " (+) ".join(f"Z/3^{e}" if e > 1 else "Z/3" for e in self.ambiguous_alternatives)
            return f"{body} or {alt}"
        return body


def _cap(e, bound: int) -> int:
    return bound if e == INF or e >= bound else int(e)


def e7_groups(j: int, delta: int) -> tuple[AbelianGroupStructure, AbelianGroupStructure]:
    """The groups in dimensions 2j and 2j-1, as (v_2j, v_2jm1)."""
    if delta not in DELTA_CHOICES:
        raise ValueError(f"delta must be one of {DELTA_CHOICES}")
    zero = AbelianGroupStructure.of()
    if j % 2 == 0:
        return zero, zero
    if j % 3 == 0:
        e = _cap(nu(j - 9 - 2 * 3**5, 3) + 4, 10)
        g = AbelianGroupStructure.of(1, e)
        return g, g
    r = j % 9
    if r in (1, 7):
        e = _cap(nu(j - 43, 3) + 5, 8)
        g = AbelianGroupStructure.of(1, e)
        return g, g
    if r == 4:
        e = _cap(nu(j - 13 - 4 * 3**8, 3) + 5, 14)
        g = AbelianGroupStructure.of(1, e)
        return g, g
    if r in (5, 8):
        e = _cap(nu(j - 17 - 2 * delta * 3**13, 3) + 4, 19)
        g = AbelianGroupStructure.of(2, e, delta=delta)
        return g, g
    # r == 2: the one asymmetric case
    v = nu(j - 11, 3)
    v2jm1 = AbelianGroupStructure.of(2, _cap(v + 4, 13))
    if v < 10:
        v2j = AbelianGroupStructure.of(3, int(v) + 3)
    else:
        v2j = AbelianGroupStructure.of(3, 12, alternatives=(4, 11))
    return v2j, v2jm1


def e7_exponent_witness(delta: int) -> dict:
    """A concrete odd j whose group contains a Z/3^19 factor, witnessing
    that the 3-exponent is at least 19."""
    if delta not in DELTA_CHOICES:
        raise ValueError(f"delta must be one of {DELTA_CHOICES}")
    j = 17 + 2 * delta * 3**13
    v2j, _ = e7_groups(j, delta)
    return {
        "j": j,
        "residue_class": f"j = 17 + 2*{delta}*3^13 mod 2*3^15",
        "group": v2j,
        "exponent": max(v2j.factors),
        "delta": delta,
    }


def sphere_e2_order(n: int, m: int, p: int = 3) -> int:
    """Common cyclic exponent of the 1- and 2-line over S^(2n+1) in stem qm."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _cap(nu(m, p) + 1, n)


def bk_exponent(n: int, k: int, j: int, p: int = 3) -> int:
    """Cyclic exponent for the sphere bundle with attaching map alpha_k."""
    if n <= 1:
        raise ValueError("n must be > 1")
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    if (j - n) % (p * (p - 1)) == 0:
        return _cap(2 + nu(j - n, p), n)
    if (j - n) % (p - 1) == 0:
        return _cap(2 + nu(j - n - k * (p - 1), p), n + k * (p - 1))
    return 0


def b37_vs_s7(j: int) -> dict:
    """Cyclic exponent for the 7-sphere side in dimension 2j-1, and the
    exceptional comparison with the rank-2 bundle over it."""
    if j % 2 == 0:
        raise ValueError("j must be odd")
    exponent = _cap(1 + nu(j - 3, 3), 3)
    exceptional = j % 27 == 21
    out = {
        "j": j,
        "s7_exponent": exponent,
        "exceptional": exceptional,
        "map": "isomorphism",
    }
    if exceptional:
        out["b37_exponent"] = 4
        out["map"] = "surjection Z/3^4 -> Z/3^3"
    else:
        out["b37_exponent"] = exponent
    return out


# Known structure results for bundle factors of the exceptional groups at
# other primes; recorded as static data (cyclic unless noted).
BUNDLE_FACTOR_STRUCTURES = {
    "B(11,15) p=3": "v_(2j-1) cyclic",
    "E6/F4 p=3": "v_(2j-1) cyclic",
    "B(2n+1,2n+q+1) factors, 5<=p<=29": "v_(2j-1) cyclic",
    "B(11,23,35) p=7": "v_(2j-1) cyclic",
    "B(23,35,47,59) p=7": "v_(2j-1) cyclic",
    "B(3,11,19,27,35) p=5": "v_(2j-1) = Z/p (+) Z/p^(e-1)",
    "B(3,15,27) p=7": "v_(2j-1) = Z/p (+) Z/p^(e-1)",
    "B(3,15,27,39) p=7": "v_(2j-1) = Z/p (+) Z/p^(e-1)",
}
