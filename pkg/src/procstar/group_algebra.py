"""Discrete groups with exact element arithmetic and their group algebras.

Supported groups: Z^d (integer vectors), the discrete Heisenberg group
(integer triples under the unitriangular product), the free group on two
generators (reduced words), and any explicit finite group.  Elements of
the group algebra are finitely supported complex coefficient maps with
convolution and involution; Haar measure on a discrete group is counting
measure, so all pushforward integrals later on are finite sums.
"""

from __future__ import annotations

import math
from typing import Any, Iterable

from .errors import UnsupportedFamilyError
from .finite_group import FiniteGroup, build_finite_group

# Heisenberg triples (n, m, l) multiply as
#   (n, m, l) * (n', m', l') = (n + n', m + m', l + l' + n*m'),
# the product of the matrices [[1, n, l], [0, 1, m], [0, 0, 1]].
# With generators g = (1,0,0), h = (0,1,0), z = (0,0,1) the defining
# relations are g h = z h g with z central, and every element factors as
# (n, m, l) = z^l h^m g^n.
HEISENBERG_G = (1, 0, 0)
HEISENBERG_H = (0, 1, 0)
HEISENBERG_Z = (0, 0, 1)


class DiscreteGroup:
    """Base class: exact group arithmetic on hashable canonical elements."""

    family: str

    def identity(self):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def check_element(self, x):
        """Validate and canonicalize an element; raises ValueError."""
        raise NotImplementedError

    def named_generators(self) -> dict[str, Any]:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def element_literal(self, x):
        """JSON-ready literal for an element."""
        raise NotImplementedError

    def parse_element(self, literal):
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, DiscreteGroup):
            return NotImplemented
        return self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        return hash(repr(self.descriptor()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor()})"


class ZPower(DiscreteGroup):
    """Z^d with elements as integer tuples of length d."""

    family = "z_power"

    def __init__(self, d: int):
        if d < 1:
            raise ValueError(f"z_power rank must be positive, got {d}")
        self.rank = int(d)

    def identity(self):
        return (0,) * self.rank

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def check_element(self, x):
        t = tuple(int(v) for v in x) if isinstance(x, Iterable) else (int(x),)
        if len(t) != self.rank:
            raise ValueError(f"expected a length-{self.rank} integer vector, got {x!r}")
        return t

    def named_generators(self):
        gens = {}
        for i in range(self.rank):
            e = [0] * self.rank
            e[i] = 1
            gens[f"e{i + 1}"] = tuple(e)
        return gens

    def descriptor(self):
        return {"family": "z_power", "params": [self.rank]}

    def element_literal(self, x):
        return list(x)

    def parse_element(self, literal):
        if isinstance(literal, int):
            literal = [literal]
        return self.check_element(literal)


class Heisenberg(DiscreteGroup):
    """Discrete Heisenberg group on integer triples (n, m, l)."""

    family = "heisenberg"

    def identity(self):
        return (0, 0, 0)

    def mul(self, x, y):
        return (x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1])

    def inv(self, x):
        n, m, l = x
        return (-n, -m, -l + n * m)

    def check_element(self, x):
        t = tuple(int(v) for v in x)
        if len(t) != 3:
            raise ValueError(f"expected an integer triple, got {x!r}")
        return t

    def named_generators(self):
        return {"g": HEISENBERG_G, "h": HEISENBERG_H, "z": HEISENBERG_Z}

    def matrix(self, x) -> list[list[int]]:
        n, m, l = x
        return [[1, n, l], [0, 1, m], [0, 0, 1]]

    def descriptor(self):
        return {"family": "heisenberg", "params": []}

    def element_literal(self, x):
        return list(x)

    def parse_element(self, literal):
        return self.check_element(literal)


def reduce_word(letters: Iterable[int]) -> tuple[int, ...]:
    """Free reduction: drop adjacent inverse pairs until none remain."""
    out: list[int] = []
    for s in letters:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


class FreeGroup2(DiscreteGroup):
    """Free group on g1, g2; elements are reduced words of signed indices."""

    family = "free"

    def identity(self):
        return ()

    def mul(self, x, y):
        return reduce_word(x + y)

    def inv(self, x):
        return tuple(-s for s in reversed(x))

    def check_element(self, x):
        t = tuple(int(s) for s in x)
        for s in t:
            if s not in (1, -1, 2, -2):
                raise ValueError(f"free-group letter out of range: {s}")
        if reduce_word(t) != t:
            raise ValueError(f"word {x!r} is not reduced")
        return t

    def named_generators(self):
        return {"g1": (1,), "g2": (2,)}

    def descriptor(self):
        return {"family": "free", "params": [2]}

    def element_literal(self, x):
        return " ".join(f"g{s}" if s > 0 else f"-g{-s}" for s in x)

    def parse_element(self, literal):
        if not isinstance(literal, str):
            raise ValueError(f"free-group element literal must be a string, got {literal!r}")
        letters = []
        for tok in literal.split():
            neg = tok.startswith("-")
            name = tok[1:] if neg else tok
            if name not in ("g1", "g2"):
                raise ValueError(f"unknown generator token {tok!r}")
            s = int(name[1])
            letters.append(-s if neg else s)
        word = tuple(letters)
        if reduce_word(word) != word:
            raise ValueError(f"word {literal!r} is not reduced")
        return word


class FiniteDiscrete(DiscreteGroup):
    """An explicit finite group viewed as a discrete group, elements by index."""

    family = "finite"

    def __init__(self, F: FiniteGroup):
        self.finite_group = F

    def identity(self):
        return self.finite_group.identity

    def mul(self, x, y):
        return int(self.finite_group.mul[x, y])

    def inv(self, x):
        return int(self.finite_group.inv[x])

    def check_element(self, x):
        i = int(x)
        if not 0 <= i < self.finite_group.order:
            raise ValueError(f"element index {x} out of range for {self.finite_group.label}")
        return i

    def named_generators(self):
        return {
            f"x{i + 1}": int(g)
            for i, g in enumerate(self.finite_group.generator_indices)
        }

    def descriptor(self):
        return self.finite_group.descriptor()

    def element_literal(self, x):
        return int(x)

    def parse_element(self, literal):
        return self.check_element(literal)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteDiscrete):
            return NotImplemented
        return self.finite_group == other.finite_group

    def __hash__(self) -> int:
        return hash(("finite", self.finite_group))


def discrete_group_from_descriptor(desc: dict) -> DiscreteGroup:
    family = desc.get("family")
    params = desc.get("params", [])
    if family == "z_power":
        return ZPower(params[0])
    if family == "heisenberg":
        return Heisenberg()
    if family == "free":
        if list(params) not in ([2], []):
            raise UnsupportedFamilyError("only the free group of rank 2 is supported")
        return FreeGroup2()
    # anything else is a finite-group family
    return FiniteDiscrete(build_finite_group(family, params))


class GroupAlgebraElement:
    """Finitely supported complex function on a group; immutable.

    Zero coefficients are never stored.  Convolution follows
    (a * b)(x) = sum_g a(g) b(g^{-1} x) and the involution is
    a*(g) = conj(a(g^{-1})).
    """

    __slots__ = ("group", "terms")

    def __init__(self, group: DiscreteGroup, terms: dict):
        cleaned = {}
        for g, c in terms.items():
            c = complex(c)
            if c != 0:
                cleaned[group.check_element(g)] = c
        self.group = group
        self.terms = cleaned

    @classmethod
    def delta(cls, group: DiscreteGroup, g, coeff: complex = 1.0) -> "GroupAlgebraElement":
        return cls(group, {g: coeff})

    @classmethod
    def zero(cls, group: DiscreteGroup) -> "GroupAlgebraElement":
        return cls(group, {})

    @property
    def support(self):
        return set(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, g) -> complex:
        return self.terms.get(self.group.check_element(g), 0j)

    def _require_same_group(self, other: "GroupAlgebraElement") -> None:
        if self.group != other.group:
            raise ValueError("elements live over different groups")

    def convolve(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._require_same_group(other)
        out: dict = {}
        mul = self.group.mul
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                k = mul(g, h)
                c = out.get(k, 0j) + a * b
                if c == 0:
                    out.pop(k, None)
                else:
                    out[k] = c
        return GroupAlgebraElement(self.group, out)

    def involution(self) -> "GroupAlgebraElement":
        inv = self.group.inv
        return GroupAlgebraElement(
            self.group, {inv(g): c.conjugate() for g, c in self.terms.items()}
        )

    def l1_norm(self) -> float:
        return float(sum(abs(c) for c in self.terms.values()))

    def l2_norm(self) -> float:
        return math.sqrt(sum((c * c.conjugate()).real for c in self.terms.values()))

    def scaled(self, t: complex) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.group, {g: t * c for g, c in self.terms.items()})

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._require_same_group(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            s = out.get(g, 0j) + c
            if s == 0:
                out.pop(g, None)
            else:
                out[g] = s
        return GroupAlgebraElement(self.group, out)

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + other.scaled(-1.0)

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return self.convolve(other)
        return self.scaled(other)

    def __rmul__(self, scalar):
        return self.scaled(scalar)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.group == other.group and self.terms == other.terms

    def __hash__(self):
        raise TypeError("GroupAlgebraElement is not hashable")

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = [f"({c:.6g})*d[{g}]" for g, c in sorted(self.terms.items(), key=lambda kv: repr(kv[0]))]
        return " + ".join(bits)

    def to_jsonable(self) -> dict:
        lit = self.group.element_literal
        items = sorted(self.terms.items(), key=lambda kv: repr(kv[0]))
        return {
            "group": self.group.descriptor(),
            "terms": [
                {"g": lit(g), "c": [c.real, c.imag]} for g, c in items
            ],
        }


def element_from_jsonable(doc: dict, group: DiscreteGroup | None = None) -> GroupAlgebraElement:
    """Parse {"group": descriptor, "terms": [{"g": literal, "c": [re, im]}]}."""
    if group is None:
        group = discrete_group_from_descriptor(doc["group"])
    terms: dict = {}
    for entry in doc.get("terms", []):
        g = group.parse_element(entry["g"])
        re, im = entry["c"]
        c = complex(float(re), float(im))
        if g in terms:
            terms[g] += c
        else:
            terms[g] = c
    return GroupAlgebraElement(group, terms)
