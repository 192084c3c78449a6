"""Closed-form limiting length expectations (exact rationals only).

Coxeter types are written as strings: ``A3``, ``B3`` (``C3`` is an alias),
``D4``, ``E6``-``E8``, ``F4``, ``G2``, ``H3``, ``H4``, ``I2(5)``; products
join irreducible types with ``x``, e.g. ``A1xB3``.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from .errors import InvalidSpec
from .groups import GroupSpec
from .polynomial import IntPolynomial
from .walk import LimitValue

_FAMILY_RULES = {
    "A": "2, 3, ..., n+1",
    "B": "2, 4, 6, ..., 2n",
    "D": "n; 2, 4, 6, ..., 2n-2",
    "I2": "2, m",
}
_TYPE_RE = re.compile(r"^(?:(I2)\((\d+)\)|(I2)_(\d+)|([A-H])(\d+))$")


@lru_cache(maxsize=None)
def degree_table() -> dict:
    """Load the shipped degree table and check it against known group orders."""
    text = resources.files("cayleywalk").joinpath("data/coxeter_degrees.json").read_text()
    table = json.loads(text)
    for fam, rule in _FAMILY_RULES.items():
        if table["families"][fam]["rule"] != rule:
            raise RuntimeError(f"degree table rule for {fam} does not match the code")
    for name, degs in table["exceptional"].items():
        if math.prod(degs) != table["orders"][name]:
            raise RuntimeError(f"degree table row {name} does not multiply to |W|")
    return table


def parse_coxeter_type(text: str) -> tuple[tuple[str, int], ...]:
    """``"A1xI2(5)"`` -> ``(("A", 1), ("I2", 5))``."""
    parts = [p.strip() for p in re.split(r"[x×*]", text.strip()) if p.strip()]
    if not parts:
        raise InvalidSpec(f"empty Coxeter type {text!r}")
    table = degree_table()
    out = []
    for part in parts:
        match = _TYPE_RE.match(part.upper())
        if not match:
            raise InvalidSpec(f"cannot parse Coxeter type {part!r}")
        if match.group(1) or match.group(3):
            fam, param = "I2", int(match.group(2) or match.group(4))
        else:
            fam, param = match.group(5), int(match.group(6))
        if fam == "C":
            fam = "B"
        if fam in table["families"]:
            if param < table["families"][fam]["min_rank"]:
                raise InvalidSpec(f"{part}: parameter below minimum for type {fam}")
        elif f"{fam}{param}" not in table["exceptional"]:
            raise InvalidSpec(f"unknown Coxeter type {part!r}")
        out.append((fam, param))
    return tuple(out)


def _irreducible_degrees(fam: str, param: int) -> list[int]:
    n = param
    if fam == "A":
        return list(range(2, n + 2))
    if fam == "B":
        return list(range(2, 2 * n + 1, 2))
    if fam == "D":
        return [n] + list(range(2, 2 * n - 1, 2))
    if fam == "I2":
        return [2, param]
    return list(degree_table()["exceptional"][f"{fam}{param}"])


def degrees_of(coxeter_type: str) -> list[int]:
    """Degree row of an irreducible type; multiset union for products."""
    out: list[int] = []
    for fam, param in parse_coxeter_type(coxeter_type):
        out.extend(_irreducible_degrees(fam, param))
    return out


def coxeter_group_spec(coxeter_type: str) -> GroupSpec:
    """Enumerable :class:`GroupSpec` for a type (E, F, H are not enumerable)."""
    specs = []
    for fam, param in parse_coxeter_type(coxeter_type):
        if fam == "A":
            specs.append(GroupSpec.coxeter_a(param))
        elif fam == "B":
            specs.append(GroupSpec.coxeter_b(param))
        elif fam == "D":
            specs.append(GroupSpec.coxeter_d(param))
        elif fam == "I2":
            specs.append(GroupSpec.coxeter_i2(param))
        elif (fam, param) == ("G", 2):
            specs.append(GroupSpec.coxeter_i2(6))
        else:
            raise InvalidSpec(f"type {fam}{param} has no enumerable model")
    return specs[0] if len(specs) == 1 else GroupSpec.coxeter_product(specs)


def group_order(degrees: Sequence[int]) -> int:
    return math.prod(degrees)


def reflection_number(degrees: Sequence[int]) -> int:
    return sum(d - 1 for d in degrees)


def poincare_polynomial(degrees: Iterable[int]) -> IntPolynomial:
    """prod_i (1 + t + ... + t^(d_i - 1)); a degree of 1 contributes 1."""
    poly = IntPolynomial.one()
    for d in degrees:
        if d < 1:
            raise InvalidSpec(f"degrees must be positive, got {d}")
        poly = poly * IntPolynomial([1] * d)
    return poly


def length_sums(degrees: Sequence[int]) -> tuple[int, int]:
    """(sum of l(w), sum of (-1)^l(w) l(w)) over W, read off P'(1) and P'(-1)."""
    deriv = poincare_polynomial(degrees).derivative()
    return deriv(1), -deriv(-1)


def cyclic_limit(m: int) -> LimitValue:
    if m < 2:
        raise InvalidSpec(f"cyclic_limit needs m >= 2, got {m}")
    q = Fraction(m, 4)
    if m % 2:
        return LimitValue.single(q - Fraction(1, 4 * m))
    if m % 4 == 2:
        return LimitValue.parity_split(q - Fraction(1, m), q + Fraction(1, m))
    return LimitValue.parity_split(q, q)


def product_limit(avg_lengths: Iterable) -> Fraction:
    return sum((Fraction(a) for a in avg_lengths), Fraction(0))


def cyclic_average_length(n: int) -> Fraction:
    """Mean of l over Z_n with generator a."""
    return Fraction(n, 4) - (Fraction(1, 4 * n) if n % 2 else 0)


def cyclic_product_limit(moduli: Sequence[int]) -> Fraction:
    moduli = list(moduli)
    if len(moduli) <= 1:
        raise InvalidSpec("cyclic_product_limit needs at least two moduli")
    if any(n <= 1 for n in moduli):
        raise InvalidSpec(f"all moduli must exceed 1, got {moduli}")
    return sum((Fraction(n, 4) for n in moduli), Fraction(0)) - sum(
        (Fraction(1, 4 * n) for n in moduli if n % 2), Fraction(0)
    )


def parity_limits_from_degrees(degrees: Sequence[int]) -> LimitValue:
    """Even/odd-step limits of E[l] from the Poincare polynomial alone."""
    total, signed = length_sums(degrees)
    size = group_order(degrees)
    return LimitValue.parity_split(Fraction(total + signed, size), Fraction(total - signed, size))


def coxeter_limit(coxeter_type: str) -> LimitValue:
    """Limit of E[l(X_n)] for the walk on a finite Coxeter group.

    A1 and I2(m) with m odd (A2 included) have distinct even/odd limits;
    every other type has both limits equal to Ref W / 2.
    """
    parts = parse_coxeter_type(coxeter_type)
    degrees = degrees_of(coxeter_type)
    if len(parts) == 1:
        fam, param = parts[0]
        if (fam, param) == ("A", 1):
            return LimitValue.parity_split(0, 1)
        m = 3 if (fam, param) == ("A", 2) else param if fam == "I2" else None
        if m is not None and m % 2:
            half = Fraction(m, 2)
            return LimitValue.parity_split(half - Fraction(1, 2 * m), half + Fraction(1, 2 * m))
    if sum(1 for d in degrees if d % 2 == 0) < 2:
        # fewer than two even degrees leaves P'(-1) nonzero
        return parity_limits_from_degrees(degrees)
    half_ref = Fraction(reflection_number(degrees), 2)
    return LimitValue.parity_split(half_ref, half_ref)
