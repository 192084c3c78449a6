"""Finite group families with canonical, hashable element encodings.

Every family exposes the same small surface (:class:`ConcreteGroup`):
``identity``, ``multiply``, ``inverse``, ``generators`` and ``order``.
Elements are plain tuples so that equality and hashing are structural.

Encodings
---------
* ``cyclic`` / ``cyclic_product``: tuple of residues.
* ``dihedral`` / ``coxeter_i2``: ``(k, f)`` standing for ``r**k * s**f``.
* ``coxeter_a`` (rank n): one-line permutation of ``1..n+1``.
* ``coxeter_b`` / ``coxeter_d`` (rank n): one-line signed permutation of
  ``1..n``; type D keeps an even number of negative entries.
* ``coxeter_product``: tuple of factor elements.

Products of permutations compose as functions, ``(a*b)(i) = a(b(i))``, so
right multiplication by a simple reflection permutes positions of the
one-line array.  Generator order is fixed per family (documented on each
class); for products the left factor's generators come first.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Sequence

from .errors import CapExceeded, InvalidSpec

DEFAULT_CAP = 10**7

Element = Hashable
Letter = tuple[int, int]
Word = tuple[Letter, ...]

FAMILIES = (
    "cyclic",
    "cyclic_product",
    "dihedral",
    "coxeter_a",
    "coxeter_b",
    "coxeter_d",
    "coxeter_i2",
    "coxeter_product",
)
IRREDUCIBLE_COXETER = ("coxeter_a", "coxeter_b", "coxeter_d", "coxeter_i2")

_REQUIRED_KEYS = {
    "cyclic": ("m",),
    "cyclic_product": ("moduli",),
    "dihedral": ("m",),
    "coxeter_a": ("rank",),
    "coxeter_b": ("rank",),
    "coxeter_d": ("rank",),
    "coxeter_i2": ("m",),
    "coxeter_product": ("factors",),
}


@dataclass(frozen=True)
class GroupSpec:
    """Family name plus the parameters that family needs."""

    family: str
    m: int | None = None
    rank: int | None = None
    moduli: tuple[int, ...] | None = None
    factors: tuple["GroupSpec", ...] | None = None

    def __post_init__(self) -> None:
        self.validate()

    # -- convenience constructors -------------------------------------
    @classmethod
    def cyclic(cls, m: int) -> "GroupSpec":
        return cls("cyclic", m=m)

    @classmethod
    def cyclic_product(cls, moduli: Iterable[int]) -> "GroupSpec":
        return cls("cyclic_product", moduli=tuple(moduli))

    @classmethod
    def dihedral(cls, m: int) -> "GroupSpec":
        return cls("dihedral", m=m)

    @classmethod
    def coxeter_a(cls, rank: int) -> "GroupSpec":
        return cls("coxeter_a", rank=rank)

    @classmethod
    def coxeter_b(cls, rank: int) -> "GroupSpec":
        return cls("coxeter_b", rank=rank)

    @classmethod
    def coxeter_d(cls, rank: int) -> "GroupSpec":
        return cls("coxeter_d", rank=rank)

    @classmethod
    def coxeter_i2(cls, m: int) -> "GroupSpec":
        return cls("coxeter_i2", m=m)

    @classmethod
    def coxeter_product(cls, factors: Iterable["GroupSpec"]) -> "GroupSpec":
        return cls("coxeter_product", factors=tuple(factors))

    # -- validation -----------------------------------------------------
    def validate(self) -> None:
        fam = self.family
        if fam not in FAMILIES:
            raise InvalidSpec(f"unknown family {fam!r}")
        present = {
            k for k in ("m", "rank", "moduli", "factors") if getattr(self, k) is not None
        }
        required = set(_REQUIRED_KEYS[fam])
        if present != required:
            raise InvalidSpec(
                f"family {fam!r} takes exactly {sorted(required)}, got {sorted(present)}"
            )
        if fam == "cyclic":
            _check_int(self.m, 1, "m")
        elif fam == "cyclic_product":
            if not self.moduli:
                raise InvalidSpec("cyclic_product needs at least one modulus")
            for q in self.moduli:
                _check_int(q, 2, "modulus")
        elif fam == "dihedral":
            _check_int(self.m, 2, "m")
        elif fam == "coxeter_a":
            _check_int(self.rank, 1, "rank")
        elif fam == "coxeter_b":
            _check_int(self.rank, 2, "rank")
        elif fam == "coxeter_d":
            _check_int(self.rank, 4, "rank")
        elif fam == "coxeter_i2":
            _check_int(self.m, 3, "m")
        elif fam == "coxeter_product":
            if not self.factors:
                raise InvalidSpec("coxeter_product needs at least one factor")
            for f in self.factors:
                if not isinstance(f, GroupSpec) or f.family not in IRREDUCIBLE_COXETER:
                    raise InvalidSpec(f"coxeter_product factor must be irreducible Coxeter, got {f!r}")

    def predicted_order(self) -> int:
        fam = self.family
        if fam == "cyclic":
            return self.m
        if fam == "cyclic_product":
            return math.prod(self.moduli)
        if fam in ("dihedral", "coxeter_i2"):
            return 2 * self.m
        if fam == "coxeter_a":
            return math.factorial(self.rank + 1)
        if fam == "coxeter_b":
            return 2**self.rank * math.factorial(self.rank)
        if fam == "coxeter_d":
            return 2 ** (self.rank - 1) * math.factorial(self.rank)
        return math.prod(f.predicted_order() for f in self.factors)

    @property
    def label(self) -> str:
        fam = self.family
        if fam == "cyclic":
            return f"Z{self.m}"
        if fam == "cyclic_product":
            return "x".join(f"Z{q}" for q in self.moduli)
        if fam == "dihedral":
            return f"Dih{self.m}"
        if fam == "coxeter_a":
            return f"A{self.rank}"
        if fam == "coxeter_b":
            return f"B{self.rank}"
        if fam == "coxeter_d":
            return f"D{self.rank}"
        if fam == "coxeter_i2":
            return f"I2({self.m})"
        return "x".join(f.label for f in self.factors)

    # -- JSON -----------------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"family": self.family}
        if self.m is not None:
            out["m"] = self.m
        if self.rank is not None:
            out["rank"] = self.rank
        if self.moduli is not None:
            out["moduli"] = list(self.moduli)
        if self.factors is not None:
            out["factors"] = [f.to_dict() for f in self.factors]
        return out

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "GroupSpec":
        if not isinstance(doc, dict) or "family" not in doc:
            raise InvalidSpec("group spec must be an object with a 'family' key")
        fam = doc["family"]
        if fam not in FAMILIES:
            raise InvalidSpec(f"unknown family {fam!r}")
        allowed = {"family", *_REQUIRED_KEYS[fam]}
        unknown = set(doc) - allowed
        if unknown:
            raise InvalidSpec(f"unknown keys for {fam!r}: {sorted(unknown)}")
        missing = allowed - set(doc)
        if missing:
            raise InvalidSpec(f"missing keys for {fam!r}: {sorted(missing)}")
        kwargs: dict[str, Any] = {}
        if "m" in doc:
            kwargs["m"] = doc["m"]
        if "rank" in doc:
            kwargs["rank"] = doc["rank"]
        if "moduli" in doc:
            if not isinstance(doc["moduli"], list):
                raise InvalidSpec("'moduli' must be a list")
            kwargs["moduli"] = tuple(doc["moduli"])
        if "factors" in doc:
            if not isinstance(doc["factors"], list):
                raise InvalidSpec("'factors' must be a list")
            kwargs["factors"] = tuple(cls.from_dict(f) for f in doc["factors"])
        return cls(fam, **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "GroupSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"group spec is not valid JSON: {exc}") from None
        return cls.from_dict(doc)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_int(value: Any, lo: int, name: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidSpec(f"{name} must be an integer, got {value!r}")
    if value < lo:
        raise InvalidSpec(f"{name} must be >= {lo}, got {value}")


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple[Word, ...]
    generator_names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        for rel in self.relators:
            if not rel:
                raise InvalidSpec("relators must be non-empty words")
            for gen, sign in rel:
                if not 0 <= gen < self.generator_count or sign not in (1, -1):
                    raise InvalidSpec(f"bad letter {(gen, sign)} in relator")

    def format_relator(self, rel: Word) -> str:
        return format_word(rel, self.generator_names)


def has_odd_relator(p: Presentation) -> bool:
    return any(len(rel) % 2 == 1 for rel in p.relators)


def format_word(word: Sequence[Letter], names: Sequence[str] = ()) -> str:
    if not word:
        return "1"
    parts = []
    for gen, sign in word:
        name = names[gen] if gen < len(names) else f"g{gen + 1}"
        parts.append(name if sign == 1 else f"{name}^-1")
    return " ".join(parts)


class ConcreteGroup:
    """Base class: a finite group with fixed generator order.

    Subclasses implement ``identity``, ``multiply``, ``inverse`` and
    ``_generators``; ``apply`` may be overridden with a faster right action.
    ``reflection_generators`` lists the generator indices whose letters are
    written with sign +1 in presentations.
    """

    spec: GroupSpec
    generator_names: tuple[str, ...]
    reflection_generators: frozenset[int] = frozenset()

    def __init__(self, spec: GroupSpec) -> None:
        self.spec = spec
        self._gens = tuple(self._generators())
        self._gen_inv = tuple(self.inverse(g) for g in self._gens)
        self._involutive = tuple(g == gi for g, gi in zip(self._gens, self._gen_inv))

    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inverse(self, a: Element) -> Element:
        raise NotImplementedError

    def _generators(self) -> list[Element]:
        raise NotImplementedError

    def generators(self) -> list[Element]:
        return list(self._gens)

    def order(self) -> int:
        return self.spec.predicted_order()

    @property
    def name(self) -> str:
        return self.spec.label

    def is_involution(self, gen: int) -> bool:
        return self._involutive[gen]

    def letters(self) -> list[Letter]:
        """Distinct step letters: ``(i, +1)`` always, ``(i, -1)`` unless s_i is an involution."""
        out: list[Letter] = []
        for i, inv in enumerate(self._involutive):
            out.append((i, 1))
            if not inv:
                out.append((i, -1))
        return out

    def apply(self, g: Element, letter: Letter) -> Element:
        gen, sign = letter
        return self.multiply(g, self._gens[gen] if sign == 1 else self._gen_inv[gen])

    def evaluate(self, word: Iterable[Letter]) -> Element:
        g = self.identity()
        for letter in word:
            g = self.apply(g, letter)
        return g

    def normalize_word(self, word: Iterable[Letter]) -> Word:
        refl = self.reflection_generators
        return tuple((g, 1) if g in refl else (g, s) for g, s in word)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} order={self.order()}>"


class AbelianGroup(ConcreteGroup):
    """Z_{n1} x ... x Z_{nk}; generator i is the unit vector e_i."""

    def __init__(self, spec: GroupSpec) -> None:
        self.moduli = (spec.m,) if spec.family == "cyclic" else tuple(spec.moduli)
        if len(self.moduli) == 1:
            self.generator_names = ("a",)
        elif len(self.moduli) <= 26:
            self.generator_names = tuple(chr(ord("a") + i) for i in range(len(self.moduli)))
        else:
            self.generator_names = tuple(f"a{i + 1}" for i in range(len(self.moduli)))
        super().__init__(spec)

    def identity(self):
        return (0,) * len(self.moduli)

    def multiply(self, a, b):
        return tuple((x + y) % q for x, y, q in zip(a, b, self.moduli))

    def inverse(self, a):
        return tuple((-x) % q for x, q in zip(a, self.moduli))

    def _generators(self):
        k = len(self.moduli)
        return [tuple(1 % self.moduli[j] if j == i else 0 for j in range(k)) for i in range(k)]

    def apply(self, g, letter):
        gen, sign = letter
        out = list(g)
        out[gen] = (out[gen] + sign) % self.moduli[gen]
        return tuple(out)

    def presentation(self) -> Presentation:
        rels: list[Word] = [((i, 1),) * q for i, q in enumerate(self.moduli)]
        k = len(self.moduli)
        for i in range(k):
            for j in range(i + 1, k):
                rels.append(((i, 1), (j, 1), (i, -1), (j, -1)))
        return Presentation(k, tuple(rels), self.generator_names)


class DihedralGroup(ConcreteGroup):
    """Symmetries of a regular m-gon; element ``(k, f)`` is ``r**k s**f``.

    ``dihedral``: generators ``a = r`` (rotation) and ``b = s``.
    ``coxeter_i2``: generators ``s1 = s`` and ``s2 = r s`` (two reflections).
    """

    def __init__(self, spec: GroupSpec) -> None:
        self.m = spec.m
        self.coxeter = spec.family == "coxeter_i2"
        if self.coxeter:
            self.generator_names = ("s1", "s2")
            self.reflection_generators = frozenset({0, 1})
        else:
            self.generator_names = ("a", "b")
            self.reflection_generators = frozenset({1})
        super().__init__(spec)

    def identity(self):
        return (0, 0)

    def multiply(self, a, b):
        k1, f1 = a
        k2, f2 = b
        return ((k1 - k2 if f1 else k1 + k2) % self.m, f1 ^ f2)

    def inverse(self, a):
        k, f = a
        return (k, 1) if f else ((-k) % self.m, 0)

    def _generators(self):
        if self.coxeter:
            return [(0, 1), (1 % self.m, 1)]
        return [(1 % self.m, 0), (0, 1)]

    def presentation(self) -> Presentation:
        if self.coxeter:
            return coxeter_presentation(_coxeter_matrix_i2(self.m), self.generator_names)
        a, b = (0, 1), (1, 1)
        rels = ((a,) * self.m, (b, b), (a, b, a, b))
        return Presentation(2, rels, self.generator_names)


class SymmetricGroup(ConcreteGroup):
    """Coxeter type A_{n-1}: S_n with s_i = (i, i+1), i = 1..n-1."""

    def __init__(self, spec: GroupSpec) -> None:
        self.n = spec.rank + 1
        self.generator_names = tuple(f"s{i}" for i in range(1, self.n))
        self.reflection_generators = frozenset(range(self.n - 1))
        super().__init__(spec)

    def identity(self):
        return tuple(range(1, self.n + 1))

    def multiply(self, a, b):
        return tuple(a[x - 1] for x in b)

    def inverse(self, a):
        out = [0] * self.n
        for i, x in enumerate(a, start=1):
            out[x - 1] = i
        return tuple(out)

    def _generators(self):
        gens = []
        for i in range(self.n - 1):
            p = list(range(1, self.n + 1))
            p[i], p[i + 1] = p[i + 1], p[i]
            gens.append(tuple(p))
        return gens

    def apply(self, g, letter):
        i = letter[0]
        out = list(g)
        out[i], out[i + 1] = out[i + 1], out[i]
        return tuple(out)

    def presentation(self) -> Presentation:
        return coxeter_presentation(_coxeter_matrix_a(self.n - 1), self.generator_names)


class SignedPermutationGroup(ConcreteGroup):
    """Coxeter types B_n and D_n acting on one-line signed permutations.

    s_1..s_{n-1} swap adjacent positions.  In type B, s_n negates the last
    entry; in type D, s_n swaps the last two entries and negates both.
    """

    def __init__(self, spec: GroupSpec) -> None:
        self.n = spec.rank
        self.type_d = spec.family == "coxeter_d"
        self.generator_names = tuple(f"s{i}" for i in range(1, self.n + 1))
        self.reflection_generators = frozenset(range(self.n))
        super().__init__(spec)

    def identity(self):
        return tuple(range(1, self.n + 1))

    def multiply(self, a, b):
        return tuple(a[x - 1] if x > 0 else -a[-x - 1] for x in b)

    def inverse(self, a):
        out = [0] * self.n
        for i, x in enumerate(a, start=1):
            out[abs(x) - 1] = i if x > 0 else -i
        return tuple(out)

    def _generators(self):
        n = self.n
        gens = []
        for i in range(n - 1):
            p = list(range(1, n + 1))
            p[i], p[i + 1] = p[i + 1], p[i]
            gens.append(tuple(p))
        p = list(range(1, n + 1))
        if self.type_d:
            p[n - 2], p[n - 1] = -p[n - 1], -p[n - 2]
        else:
            p[n - 1] = -p[n - 1]
        gens.append(tuple(p))
        return gens

    def apply(self, g, letter):
        i = letter[0]
        n = self.n
        out = list(g)
        if i < n - 1:
            out[i], out[i + 1] = out[i + 1], out[i]
        elif self.type_d:
            out[n - 2], out[n - 1] = -out[n - 1], -out[n - 2]
        else:
            out[n - 1] = -out[n - 1]
        return tuple(out)

    def presentation(self) -> Presentation:
        mat = _coxeter_matrix_d(self.n) if self.type_d else _coxeter_matrix_b(self.n)
        return coxeter_presentation(mat, self.generator_names)


class ProductGroup(ConcreteGroup):
    """Direct product; elements are tuples of factor elements."""

    def __init__(self, spec: GroupSpec, factors: Sequence[ConcreteGroup]) -> None:
        self.factors = tuple(factors)
        self._offsets = []
        names: list[str] = []
        refl: set[int] = set()
        off = 0
        for idx, f in enumerate(self.factors):
            self._offsets.append(off)
            names.extend(f"{nm}_{idx + 1}" for nm in f.generator_names)
            refl.update(off + r for r in f.reflection_generators)
            off += len(f.generator_names)
        self._owner = [
            (idx, j) for idx, f in enumerate(self.factors) for j in range(len(f.generator_names))
        ]
        self.generator_names = tuple(names)
        self.reflection_generators = frozenset(refl)
        super().__init__(spec)

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def multiply(self, a, b):
        return tuple(f.multiply(x, y) for f, x, y in zip(self.factors, a, b))

    def inverse(self, a):
        return tuple(f.inverse(x) for f, x in zip(self.factors, a))

    def _generators(self):
        gens = []
        for idx, f in enumerate(self.factors):
            for g in f.generators():
                elt = list(self.identity())
                elt[idx] = g
                gens.append(tuple(elt))
        return gens

    def apply(self, g, letter):
        idx, j = self._owner[letter[0]]
        out = list(g)
        out[idx] = self.factors[idx].apply(g[idx], (j, letter[1]))
        return tuple(out)

    def order(self) -> int:
        return math.prod(f.order() for f in self.factors)

    def presentation(self) -> Presentation:
        rels: list[Word] = []
        for f, off in zip(self.factors, self._offsets):
            for rel in f.presentation().relators:
                rels.append(tuple((g + off, s) for g, s in rel))
        total = len(self.generator_names)
        for i in range(total):
            for j in range(i + 1, total):
                if self._owner[i][0] != self._owner[j][0]:
                    rels.append(self.normalize_word(((i, 1), (j, 1), (i, -1), (j, -1))))
        return Presentation(total, tuple(rels), self.generator_names)


# -- Coxeter matrices ------------------------------------------------------

def _coxeter_matrix_a(rank: int) -> list[list[int]]:
    return [[1 if i == j else 3 if abs(i - j) == 1 else 2 for j in range(rank)] for i in range(rank)]


def _coxeter_matrix_b(rank: int) -> list[list[int]]:
    mat = _coxeter_matrix_a(rank)
    mat[rank - 2][rank - 1] = mat[rank - 1][rank - 2] = 4
    return mat


def _coxeter_matrix_d(rank: int) -> list[list[int]]:
    mat = _coxeter_matrix_a(rank)
    # last node hangs off s_{n-2} instead of s_{n-1}
    mat[rank - 2][rank - 1] = mat[rank - 1][rank - 2] = 2
    mat[rank - 3][rank - 1] = mat[rank - 1][rank - 3] = 3
    return mat


def _coxeter_matrix_i2(m: int) -> list[list[int]]:
    return [[1, m], [m, 1]]


def coxeter_matrix(group: ConcreteGroup) -> list[list[int]]:
    """Coxeter matrix m(i, j) of a Coxeter-family group in its generator order."""
    spec = group.spec
    fam = spec.family
    if fam == "coxeter_a":
        return _coxeter_matrix_a(spec.rank)
    if fam == "coxeter_b":
        return _coxeter_matrix_b(spec.rank)
    if fam == "coxeter_d":
        return _coxeter_matrix_d(spec.rank)
    if fam == "coxeter_i2":
        return _coxeter_matrix_i2(spec.m)
    if fam == "coxeter_product":
        blocks = [coxeter_matrix(f) for f in group.factors]
        size = sum(len(b) for b in blocks)
        mat = [[2] * size for _ in range(size)]
        off = 0
        for b in blocks:
            for i, row in enumerate(b):
                for j, v in enumerate(row):
                    mat[off + i][off + j] = v
            off += len(b)
        return mat
    raise InvalidSpec(f"{spec.label} is not a Coxeter group")


def coxeter_presentation(mat: Sequence[Sequence[int]], names: Sequence[str]) -> Presentation:
    rank = len(mat)
    rels: list[Word] = [((i, 1), (i, 1)) for i in range(rank)]
    for i in range(rank):
        for j in range(i + 1, rank):
            rels.append(((i, 1), (j, 1)) * mat[i][j])
    return Presentation(rank, tuple(rels), tuple(names))


def build_group(spec: GroupSpec, cap: int = DEFAULT_CAP) -> ConcreteGroup:
    spec.validate()
    size = spec.predicted_order()
    if size > cap:
        raise CapExceeded(f"{spec.label} has order {size} > cap {cap}")
    fam = spec.family
    if fam in ("cyclic", "cyclic_product"):
        return AbelianGroup(spec)
    if fam in ("dihedral", "coxeter_i2"):
        return DihedralGroup(spec)
    if fam == "coxeter_a":
        return SymmetricGroup(spec)
    if fam in ("coxeter_b", "coxeter_d"):
        return SignedPermutationGroup(spec)
    return ProductGroup(spec, [build_group(f, cap) for f in spec.factors])


def presentation_of(spec: GroupSpec) -> Presentation:
    # The presentation does not depend on the enumeration cap.
    return build_group(spec, cap=math.inf).presentation()


def is_coxeter(spec: GroupSpec) -> bool:
    return spec.family in IRREDUCIBLE_COXETER or spec.family == "coxeter_product"
