"""Finite quotients of the supported discrete groups.

Each group family exposes a canonical cofinal chain of quotients
(congruence quotients mod m for Z^d and the Heisenberg group) or a fixed
finite catalog of explicit homomorphisms (the free group).  Quotients
carry an exact apply map, a lift (a preferred preimage per target
element), refinement, and certified connecting surjections.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .config import Caps, DEFAULT_CAPS
from .errors import CapExceededError, QuotientNotFoundError, UnsupportedFamilyError
from .finite_group import FiniteGroup, build_finite_group, validate_group
from .group_algebra import (
    DiscreteGroup,
    FiniteDiscrete,
    FreeGroup2,
    Heisenberg,
    ZPower,
)


class FiniteQuotient:
    """Surjection of a discrete group onto an explicit finite group."""

    group: DiscreteGroup
    target: FiniteGroup

    def apply(self, g) -> int:
        """Image of a group element as a target index."""
        raise NotImplementedError

    def lift(self, x: int):
        """A preferred preimage of target index x."""
        raise NotImplementedError

    def kernel_params(self):
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def generator_images(self) -> dict[str, int]:
        return {
            name: self.apply(g) for name, g in self.group.named_generators().items()
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteQuotient):
            return NotImplemented
        return self.descriptor() == other.descriptor() and self.group == other.group

    def __hash__(self) -> int:
        return hash(repr(self.descriptor()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor()})"


class ZModQuotient(FiniteQuotient):
    """Z^d -> prod_i Z/m_i by componentwise reduction."""

    def __init__(self, group: ZPower, moduli: Sequence[int], caps: Caps = DEFAULT_CAPS):
        moduli = tuple(int(m) for m in moduli)
        if len(moduli) != group.rank or any(m < 1 for m in moduli):
            raise ValueError(f"need {group.rank} positive moduli, got {moduli}")
        self.group = group
        self.moduli = moduli
        if group.rank == 1:
            self.target = build_finite_group("cyclic", [moduli[0]], caps)
        else:
            self.target = build_finite_group("direct_product", list(moduli), caps)
        self._strides = []
        s = self.target.order
        for m in moduli:
            s //= m
            self._strides.append(s)

    def apply(self, g) -> int:
        g = self.group.check_element(g)
        out = 0
        for v, m, s in zip(g, self.moduli, self._strides):
            out += (v % m) * s
        return out

    def lift(self, x: int):
        rest = int(x)
        coords = []
        for m, s in zip(self.moduli, self._strides):
            coords.append(rest // s)
            rest %= s
        return tuple(coords)

    def kernel_params(self):
        return self.moduli

    def descriptor(self) -> dict:
        return {
            "group": self.group.descriptor(),
            "kind": "mod",
            "params": list(self.moduli),
        }


class HeisenbergModQuotient(FiniteQuotient):
    """Heisenberg group -> unitriangular matrices over Z/n (entrywise reduction)."""

    def __init__(self, group: Heisenberg, n: int, caps: Caps = DEFAULT_CAPS):
        n = int(n)
        if n < 1:
            raise ValueError(f"modulus must be positive, got {n}")
        self.group = group
        self.modulus = n
        self.target = build_finite_group("heisenberg_mod", [n], caps)

    def apply(self, g) -> int:
        a, b, c = self.group.check_element(g)
        n = self.modulus
        return ((a % n) * n + (b % n)) * n + (c % n)

    def lift(self, x: int):
        n = self.modulus
        a, rest = divmod(int(x), n * n)
        b, c = divmod(rest, n)
        return (a, b, c)

    def kernel_params(self):
        return self.modulus

    def descriptor(self) -> dict:
        return {
            "group": self.group.descriptor(),
            "kind": "mod",
            "params": [self.modulus],
        }


class ExplicitQuotient(FiniteQuotient):
    """Quotient given by generator images or an arbitrary apply map.

    Covers the free-group catalog, quotients of finite groups by a normal
    subgroup, and quotients onto enumerated matrix-group images.  Lifts
    are supplied explicitly (one group element per target index).
    """

    def __init__(
        self,
        group: DiscreteGroup,
        target: FiniteGroup,
        apply_fn,
        lifts: Sequence,
        descriptor: dict,
        kernel: object = None,
    ):
        self.group = group
        self.target = target
        self._apply = apply_fn
        self._lifts = list(lifts)
        self._descriptor = descriptor
        self._kernel = kernel

    def apply(self, g) -> int:
        return self._apply(self.group.check_element(g))

    def lift(self, x: int):
        return self._lifts[int(x)]

    def kernel_params(self):
        return self._kernel

    def descriptor(self) -> dict:
        return self._descriptor


def _word_image(target: FiniteGroup, images: Sequence[int], word) -> int:
    x = target.identity
    for s in word:
        m = images[abs(s) - 1]
        if s < 0:
            m = int(target.inv[m])
        x = int(target.mul[x, m])
    return x


def _target_words(target: FiniteGroup, images: Sequence[int]) -> list[tuple[int, ...]]:
    """Breadth-first words over the images reaching every target element.

    Raises ValueError when the images do not generate the target.
    """
    n = target.order
    words: list = [None] * n
    words[target.identity] = ()
    frontier = [target.identity]
    gens = []
    for i, m in enumerate(images):
        gens.append((i + 1, int(m)))
        gens.append((-(i + 1), int(target.inv[m])))
    while frontier:
        nxt = []
        for x in frontier:
            for s, m in gens:
                y = int(target.mul[x, m])
                if words[y] is None:
                    words[y] = words[x] + (s,)
                    nxt.append(y)
        frontier = nxt
    if any(w is None for w in words):
        raise ValueError("generator images do not generate the target group")
    return words


# ---------------------------------------------------------------------------
# free-group catalog

def _perm_index(n: int, perm: tuple[int, ...]) -> int:
    import itertools

    return list(itertools.permutations(range(n))).index(perm)


def _build_f2_catalog() -> list[dict]:
    entries = [
        # cyclic targets: images are residues
        {"name": "C2[1,0]", "family": "cyclic", "params": [2], "images": (1, 0)},
        {"name": "C2[0,1]", "family": "cyclic", "params": [2], "images": (0, 1)},
        {"name": "C2[1,1]", "family": "cyclic", "params": [2], "images": (1, 1)},
        {"name": "C3[1,1]", "family": "cyclic", "params": [3], "images": (1, 1)},
        {"name": "C3[1,2]", "family": "cyclic", "params": [3], "images": (1, 2)},
        {"name": "C4[1,1]", "family": "cyclic", "params": [4], "images": (1, 1)},
        {"name": "C4[1,3]", "family": "cyclic", "params": [4], "images": (1, 3)},
        {"name": "C6[1,1]", "family": "cyclic", "params": [6], "images": (1, 1)},
        # S3 with a transposition and a 3-cycle
        {"name": "S3[t,c]", "family": "symmetric", "params": [3],
         "perms": ((1, 0, 2), (1, 2, 0))},
        {"name": "S3[c,t]", "family": "symmetric", "params": [3],
         "perms": ((1, 2, 0), (1, 0, 2))},
        # dihedral: rotation index 1, reflection index n
        {"name": "D4[r,s]", "family": "dihedral", "params": [4], "dihedral": ("r", "s")},
        {"name": "D6[r,s]", "family": "dihedral", "params": [6], "dihedral": ("r", "s")},
        {"name": "S4[t,c]", "family": "symmetric", "params": [4],
         "perms": ((1, 0, 2, 3), (1, 2, 3, 0))},
        {"name": "S5[t,c]", "family": "symmetric", "params": [5],
         "perms": ((1, 0, 2, 3, 4), (1, 2, 3, 4, 0))},
    ]
    catalog = []
    for raw in entries:
        target = build_finite_group(raw["family"], raw["params"])
        if "images" in raw:
            images = tuple(int(i) % target.order for i in raw["images"])
        elif "perms" in raw:
            images = tuple(_perm_index(raw["params"][0], p) for p in raw["perms"])
        else:
            n = raw["params"][0]
            images = (1 % target.order, n % target.order)
        catalog.append({"name": raw["name"], "target": target, "images": images})
    catalog.sort(key=lambda e: e["target"].order)
    return catalog


_F2_CATALOG: list[dict] | None = None


def f2_catalog() -> list[dict]:
    """Shipped homomorphisms F2 -> small finite groups, ordered by target size."""
    global _F2_CATALOG
    if _F2_CATALOG is None:
        _F2_CATALOG = _build_f2_catalog()
    return _F2_CATALOG


def catalog_quotient(group: FreeGroup2, index: int) -> ExplicitQuotient:
    cat = f2_catalog()
    if not 0 <= index < len(cat):
        raise ValueError(f"catalog index {index} out of range (0..{len(cat) - 1})")
    entry = cat[index]
    target, images = entry["target"], entry["images"]
    lifts = _target_words(target, images)
    return ExplicitQuotient(
        group=group,
        target=target,
        apply_fn=lambda w: _word_image(target, images, w),
        lifts=lifts,
        descriptor={"group": group.descriptor(), "kind": "catalog", "params": [index]},
        kernel={"target": target.descriptor(), "images": list(images)},
    )


# ---------------------------------------------------------------------------
# quotients of finite groups

def finite_kernel_quotient(
    group: FiniteDiscrete,
    normal: Iterable[int],
    caps: Caps = DEFAULT_CAPS,
) -> ExplicitQuotient:
    """Quotient of an explicit finite group by a normal subgroup."""
    F = group.finite_group
    N = sorted({group.check_element(x) for x in normal})
    Nset = set(N)
    if F.identity not in Nset:
        raise ValueError("normal subgroup must contain the identity")
    for a in N:
        if int(F.inv[a]) not in Nset:
            raise ValueError("subgroup is not closed under inverses")
        for b in N:
            if int(F.mul[a, b]) not in Nset:
                raise ValueError("subset is not closed under multiplication")
    for g in range(F.order):
        for a in N:
            if int(F.mul[F.mul[g, a], F.inv[g]]) not in Nset:
                raise ValueError("subgroup is not normal")
    # enumerate cosets by smallest member
    coset_of = [-1] * F.order
    reps: list[int] = []
    for g in range(F.order):
        if coset_of[g] >= 0:
            continue
        members = sorted(int(F.mul[g, a]) for a in N)
        idx = len(reps)
        reps.append(members[0])
        for m in members:
            coset_of[m] = idx
    k = len(reps)
    mul = np.zeros((k, k), dtype=np.int32)
    for i, r in enumerate(reps):
        for j, s in enumerate(reps):
            mul[i, j] = coset_of[int(F.mul[r, s])]
    inv = np.array([coset_of[int(F.inv[r])] for r in reps], dtype=np.int32)
    target = FiniteGroup(
        label=f"{F.label}/N{len(N)}",
        family="quotient",
        params=(F.order, len(N)),
        mul=mul,
        inv=inv,
        identity=coset_of[F.identity],
        names=tuple(F.element_name(r) for r in reps),
        generator_indices=tuple(coset_of[g] for g in F.generator_indices),
    )
    validate_group(target)
    coset_arr = list(coset_of)
    return ExplicitQuotient(
        group=group,
        target=target,
        apply_fn=lambda g: coset_arr[g],
        lifts=reps,
        descriptor={"group": group.descriptor(), "kind": "subgroup", "params": N},
        kernel=tuple(N),
    )


def identity_quotient(group: FiniteDiscrete) -> ExplicitQuotient:
    """The tautological quotient of a finite group by the trivial subgroup."""
    F = group.finite_group
    return ExplicitQuotient(
        group=group,
        target=F,
        apply_fn=lambda g: g,
        lifts=list(range(F.order)),
        descriptor={"group": group.descriptor(), "kind": "identity", "params": []},
        kernel=(F.identity,),
    )


# ---------------------------------------------------------------------------
# generic machinery

def mod_quotient(group: DiscreteGroup, params, caps: Caps = DEFAULT_CAPS) -> FiniteQuotient:
    """Canonical congruence quotient: moduli vector for Z^d, modulus for Heisenberg."""
    if isinstance(group, ZPower):
        if isinstance(params, int):
            params = [params] * group.rank
        return ZModQuotient(group, params, caps)
    if isinstance(group, Heisenberg):
        if not isinstance(params, int):
            (params,) = params
        return HeisenbergModQuotient(group, params, caps)
    raise UnsupportedFamilyError(
        f"mod quotients exist only for z_power and heisenberg, not {group.family}"
    )


def quotient_from_descriptor(desc: dict, caps: Caps = DEFAULT_CAPS) -> FiniteQuotient:
    from .group_algebra import discrete_group_from_descriptor

    group = discrete_group_from_descriptor(desc["group"])
    kind = desc.get("kind")
    params = desc.get("params", [])
    if kind == "mod":
        return mod_quotient(group, params, caps)
    if kind == "catalog":
        if not isinstance(group, FreeGroup2):
            raise ValueError("catalog quotients exist only for the free group")
        return catalog_quotient(group, params[0] if isinstance(params, list) else params)
    if kind == "identity":
        if not isinstance(group, FiniteDiscrete):
            raise ValueError("identity quotients exist only for finite groups")
        return identity_quotient(group)
    if kind == "subgroup":
        if not isinstance(group, FiniteDiscrete):
            raise ValueError("subgroup quotients exist only for finite groups")
        return finite_kernel_quotient(group, params, caps)
    raise ValueError(f"unknown quotient kind {kind!r}")


def connecting_map(fine: FiniteQuotient, coarse: FiniteQuotient) -> np.ndarray:
    """Index map target(fine) -> target(coarse) commuting with both quotients.

    Built by pushing each lift through the coarse quotient and certified by
    an exhaustive homomorphism and surjectivity check; raises ValueError
    when fine does not refine coarse.
    """
    if fine.group != coarse.group:
        raise ValueError("quotients of different groups are incomparable")
    nf = fine.target.order
    conn = np.array([coarse.apply(fine.lift(x)) for x in range(nf)], dtype=np.int64)
    if len(np.unique(conn)) != coarse.target.order:
        raise ValueError("connecting map is not surjective; not a refinement")
    lhs = conn[fine.target.mul]
    rhs = coarse.target.mul[conn[:, None], conn[None, :]]
    if not np.array_equal(lhs, rhs):
        raise ValueError("connecting map is not a homomorphism; not a refinement")
    # compatibility with the quotient maps on generators
    for name, g in fine.group.named_generators().items():
        if conn[fine.apply(g)] != coarse.apply(g):
            raise ValueError(f"connecting map does not commute on generator {name}")
    return conn


def refines(fine: FiniteQuotient, coarse: FiniteQuotient) -> bool:
    try:
        connecting_map(fine, coarse)
    except ValueError:
        return False
    return True


def refine(q1: FiniteQuotient, q2: FiniteQuotient, caps: Caps = DEFAULT_CAPS) -> FiniteQuotient:
    """Common refinement: a quotient admitting connecting maps onto q1 and q2."""
    if q1.group != q2.group:
        raise ValueError("cannot refine quotients of different groups")
    if isinstance(q1, ZModQuotient) and isinstance(q2, ZModQuotient):
        moduli = tuple(math.lcm(a, b) for a, b in zip(q1.moduli, q2.moduli))
        return ZModQuotient(q1.group, moduli, caps)
    if isinstance(q1, HeisenbergModQuotient) and isinstance(q2, HeisenbergModQuotient):
        return HeisenbergModQuotient(q1.group, math.lcm(q1.modulus, q2.modulus), caps)
    if isinstance(q1.group, FreeGroup2):
        return _refine_f2(q1, q2, caps)
    if isinstance(q1.group, FiniteDiscrete):
        k1 = {x for x in range(q1.group.finite_group.order)
              if q1.apply(x) == q1.apply(q1.group.identity())}
        k2 = {x for x in range(q2.group.finite_group.order)
              if q2.apply(x) == q2.apply(q2.group.identity())}
        return finite_kernel_quotient(q1.group, k1 & k2, caps)
    raise UnsupportedFamilyError(f"cannot refine quotients of {q1.group.family}")


def _refine_f2(q1: FiniteQuotient, q2: FiniteQuotient, caps: Caps) -> ExplicitQuotient:
    """Image of the pair map F2 -> T1 x T2, enumerated as an explicit group."""
    group = q1.group
    g1, g2 = group.named_generators()["g1"], group.named_generators()["g2"]
    gens = [(q1.apply(g1), q2.apply(g1)), (q1.apply(g2), q2.apply(g2))]
    t1, t2 = q1.target, q2.target
    e = (t1.identity, t2.identity)
    index = {e: 0}
    elems = [e]
    words: list[tuple[int, ...]] = [()]
    gen_steps = []
    for i, (a, b) in enumerate(gens):
        gen_steps.append((i + 1, (a, b)))
        gen_steps.append((-(i + 1), (int(t1.inv[a]), int(t2.inv[b]))))
    frontier = [0]
    while frontier:
        nxt = []
        for xi in frontier:
            x = elems[xi]
            for s, (a, b) in gen_steps:
                y = (int(t1.mul[x[0], a]), int(t2.mul[x[1], b]))
                if y not in index:
                    if len(elems) >= caps.group_order:
                        raise CapExceededError(
                            f"refined free-group quotient exceeds cap {caps.group_order}"
                        )
                    index[y] = len(elems)
                    elems.append(y)
                    words.append(words[xi] + (s,))
                    nxt.append(index[y])
        frontier = nxt
    k = len(elems)
    mul = np.zeros((k, k), dtype=np.int32)
    inv = np.zeros(k, dtype=np.int32)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            mul[i, j] = index[(int(t1.mul[x[0], y[0]]), int(t2.mul[x[1], y[1]]))]
        inv[i] = index[(int(t1.inv[x[0]]), int(t2.inv[x[1]]))]
    target = FiniteGroup(
        label=f"im(F2 -> {t1.label}x{t2.label})",
        family="f2_pair_image",
        params=(q1.descriptor()["params"][0], q2.descriptor()["params"][0]),
        mul=mul,
        inv=inv,
        identity=0,
        names=tuple(f"({t1.element_name(a)},{t2.element_name(b)})" for a, b in elems),
        generator_indices=tuple(index[g] for g in gens),
    )
    validate_group(target)
    images = tuple(index[g] for g in gens)
    return ExplicitQuotient(
        group=group,
        target=target,
        apply_fn=lambda w: _word_image(target, images, w),
        lifts=[tuple(w) for w in words],
        descriptor={
            "group": group.descriptor(),
            "kind": "pair",
            "params": [q1.descriptor(), q2.descriptor()],
        },
        kernel={"pair": [q1.descriptor(), q2.descriptor()]},
    )


def min_injective_quotient(
    group: DiscreteGroup,
    S: Iterable,
    caps: Caps = DEFAULT_CAPS,
) -> FiniteQuotient:
    """Smallest canonical quotient whose map is injective on the finite set S.

    Z^d and Heisenberg walk the congruence chain mod 1, 2, 3, ...; the free
    group walks the shipped catalog.  Raises QuotientNotFoundError when no
    quotient within the caps separates S.
    """
    S = [group.check_element(s) for s in S]
    if not S:
        raise ValueError("S must be nonempty")
    if isinstance(group, (ZPower, Heisenberg)):
        rank = group.rank if isinstance(group, ZPower) else 3
        m = 1
        while True:
            order = m**rank
            if order > caps.group_order:
                raise QuotientNotFoundError(
                    f"no congruence quotient of order <= {caps.group_order} "
                    f"is injective on the given set"
                )
            q = mod_quotient(group, m, caps)
            images = [q.apply(s) for s in S]
            if len(set(images)) == len(set(S)):
                return q
            m += 1
    if isinstance(group, FreeGroup2):
        for i in range(len(f2_catalog())):
            q = catalog_quotient(group, i)
            images = [q.apply(s) for s in S]
            if len(set(images)) == len(set(S)):
                return q
        raise QuotientNotFoundError(
            "no catalog quotient separates the given free-group elements"
        )
    if isinstance(group, FiniteDiscrete):
        return identity_quotient(group)
    raise UnsupportedFamilyError(f"no quotient chain for family {group.family!r}")
