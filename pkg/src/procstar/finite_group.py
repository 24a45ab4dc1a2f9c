"""Exact finite groups and numerical splitting of their group algebras.

Groups are stored by an explicit multiplication table on element indices
0..order-1.  The supported families keep all quotient arithmetic exact;
the irreducible blocks of the left regular representation are extracted
numerically and certified post hoc against algebraic invariants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import Caps, Tolerances, DEFAULT_CAPS, DEFAULT_TOLERANCES
from .errors import CapExceededError, DecompositionFailedError, UnsupportedFamilyError

SUPPORTED_FAMILIES = (
    "cyclic",
    "elementary_abelian_2",
    "dihedral",
    "symmetric",
    "heisenberg_mod",
    "direct_product",
)

_ASSOC_EXHAUSTIVE_MAX = 200
_ASSOC_SAMPLES = 20000


@dataclass(eq=False)
class FiniteGroup:
    """Finite group on indices 0..order-1 with explicit tables.

    Instances are treated as immutable after construction; the cached
    conjugacy-class partition is the only lazily filled attribute.
    """

    label: str
    family: str
    params: tuple[int, ...]
    mul: np.ndarray          # (order, order) int32, mul[x, y] = index of x*y
    inv: np.ndarray          # (order,) int32
    identity: int
    names: tuple[str, ...] | None = None
    generator_indices: tuple[int, ...] = ()
    _classes: list[np.ndarray] | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    def elements(self) -> range:
        return range(self.order)

    def element_name(self, x: int) -> str:
        if self.names is not None:
            return self.names[x]
        return str(x)

    def descriptor(self) -> dict:
        return {"family": self.family, "params": list(self.params)}

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (
            self.family == other.family
            and self.params == other.params
            and self.label == other.label
            and self.order == other.order
            and np.array_equal(self.mul, other.mul)
        )

    def __hash__(self) -> int:
        return hash((self.family, self.params, self.label, self.order))

    def conjugacy_classes(self) -> list[np.ndarray]:
        """Partition of element indices into conjugacy classes."""
        if self._classes is None:
            n = self.order
            all_h = np.arange(n)
            seen = np.zeros(n, dtype=bool)
            classes = []
            for g in range(n):
                if seen[g]:
                    continue
                # conjugates h g h^{-1} over all h
                orbit = np.unique(self.mul[self.mul[all_h, g], self.inv[all_h]])
                seen[orbit] = True
                classes.append(orbit)
            self._classes = classes
        return self._classes


def validate_group(F: FiniteGroup, rng: np.random.Generator | None = None) -> None:
    """Check the group axioms on the tables; raises ValueError on failure.

    Associativity is exhaustive up to order 200 and sampled above.
    """
    n = F.order
    mul, inv = F.mul, F.inv
    if mul.shape != (n, n) or inv.shape != (n,):
        raise ValueError(f"{F.label}: malformed tables")
    if mul.min() < 0 or mul.max() >= n:
        raise ValueError(f"{F.label}: multiplication table out of range")
    e = F.identity
    idx = np.arange(n)
    if not (np.array_equal(mul[e, :], idx) and np.array_equal(mul[:, e], idx)):
        raise ValueError(f"{F.label}: identity laws fail")
    if not np.all(mul[idx, inv] == e) or not np.all(mul[inv, idx] == e):
        raise ValueError(f"{F.label}: inverse laws fail")
    if n <= _ASSOC_EXHAUSTIVE_MAX:
        left = mul[mul, :]            # (x, y, z) -> (x*y)*z
        right = mul[:, mul]           # (x, y, z) -> x*(y*z)
        ok = np.array_equal(left, right)
    else:
        rng = rng or np.random.default_rng(0)
        x, y, z = rng.integers(0, n, size=(3, _ASSOC_SAMPLES))
        ok = np.all(mul[mul[x, y], z] == mul[x, mul[y, z]])
    if not ok:
        raise ValueError(f"{F.label}: associativity fails")


# ---------------------------------------------------------------------------
# family constructors


def _cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    mul = (idx[:, None] + idx[None, :]) % n
    inv = (-idx) % n
    return FiniteGroup(
        label=f"C{n}",
        family="cyclic",
        params=(n,),
        mul=mul.astype(np.int32),
        inv=inv.astype(np.int32),
        identity=0,
        generator_indices=(1 % n,),
    )


def _direct_product_of_cyclics(moduli: tuple[int, ...]) -> FiniteGroup:
    # mixed-radix encoding, most significant factor first
    order = int(np.prod(moduli))
    idx = np.arange(order)
    digits = []
    rest = idx.copy()
    for m in reversed(moduli):
        digits.append(rest % m)
        rest //= m
    digits = list(reversed(digits))  # digits[i] has modulus moduli[i]
    mul = np.zeros((order, order), dtype=np.int64)
    for d, m in zip(digits, moduli):
        mul = mul * m + (d[:, None] + d[None, :]) % m
    inv = np.zeros(order, dtype=np.int64)
    for d, m in zip(digits, moduli):
        inv = inv * m + (-d) % m
    gens = []
    stride = order
    for m in moduli:
        stride //= m
        gens.append(stride if m > 1 else 0)
    return FiniteGroup(
        label="x".join(f"C{m}" for m in moduli),
        family="direct_product",
        params=tuple(moduli),
        mul=mul.astype(np.int32),
        inv=inv.astype(np.int32),
        identity=0,
        generator_indices=tuple(gens),
    )


def _elementary_abelian_2(k: int) -> FiniteGroup:
    order = 1 << k
    idx = np.arange(order)
    mul = idx[:, None] ^ idx[None, :]
    return FiniteGroup(
        label=f"(C2)^{k}",
        family="elementary_abelian_2",
        params=(k,),
        mul=mul.astype(np.int32),
        inv=idx.astype(np.int32),
        identity=0,
        generator_indices=tuple(1 << i for i in range(k)),
    )


def _dihedral(n: int) -> FiniteGroup:
    # elements r^a s^b with index a + n*b; s r s = r^{-1}
    order = 2 * n
    a = np.arange(order) % n
    b = np.arange(order) // n
    a1, b1 = a[:, None], b[:, None]
    a2, b2 = a[None, :], b[None, :]
    prod_a = np.where(b1 == 1, (a1 - a2) % n, (a1 + a2) % n)
    prod_b = (b1 + b2) % 2
    mul = prod_a + n * prod_b
    inv_a = np.where(b == 1, a, (-a) % n)
    inv = inv_a + n * b
    return FiniteGroup(
        label=f"D{n}",
        family="dihedral",
        params=(n,),
        mul=mul.astype(np.int32),
        inv=inv.astype(np.int32),
        identity=0,
        names=tuple(f"r{ai}s{bi}" if bi else f"r{ai}" for ai, bi in zip(a, b)),
        generator_indices=(1 % n, n),
    )


def _symmetric(n: int) -> FiniteGroup:
    if n > 6:
        raise UnsupportedFamilyError(f"symmetric({n}): only n <= 6 supported")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    order = len(perms)
    mul = np.zeros((order, order), dtype=np.int32)
    inv = np.zeros(order, dtype=np.int32)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            mul[i, j] = index[tuple(p[q[t]] for t in range(n))]  # apply q, then p
        pi = [0] * n
        for t in range(n):
            pi[p[t]] = t
        inv[i] = index[tuple(pi)]
    gens: tuple[int, ...]
    if n >= 2:
        transposition = tuple([1, 0] + list(range(2, n)))
        ncycle = tuple(list(range(1, n)) + [0])
        gens = (index[transposition], index[ncycle])
    else:
        gens = ()
    return FiniteGroup(
        label=f"S{n}",
        family="symmetric",
        params=(n,),
        mul=mul,
        inv=inv,
        identity=index[tuple(range(n))],
        names=tuple(str(p) for p in perms),
        generator_indices=gens,
    )


def _heisenberg_mod(n: int) -> FiniteGroup:
    """Unitriangular 3x3 matrices over Z/n; triple (a, b, c) at index (a*n + b)*n + c.

    Product law (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b') mod n, matching
    the integer matrix product with a in the (1,2) slot, b in (2,3), c in (1,3).
    """
    order = n**3
    idx = np.arange(order)
    a, rest = idx // (n * n), idx % (n * n)
    b, c = rest // n, rest % n
    a1, b1, c1 = a[:, None], b[:, None], c[:, None]
    a2, b2, c2 = a[None, :], b[None, :], c[None, :]
    mul = ((a1 + a2) % n) * n * n + ((b1 + b2) % n) * n + (c1 + c2 + a1 * b2) % n
    inv = ((-a) % n) * n * n + ((-b) % n) * n + (-c + a * b) % n
    names = tuple(f"({ai},{bi},{ci})" for ai, bi, ci in zip(a, b, c))
    gens = (n * n % order, n % order, 1 % order)  # g=(1,0,0), h=(0,1,0), z=(0,0,1)
    return FiniteGroup(
        label=f"H(Z/{n})",
        family="heisenberg_mod",
        params=(n,),
        mul=mul.astype(np.int32),
        inv=inv.astype(np.int32),
        identity=0,
        names=names,
        generator_indices=gens,
    )


def build_finite_group(
    family: str,
    params: "list[int] | tuple[int, ...]",
    caps: Caps = DEFAULT_CAPS,
) -> FiniteGroup:
    """Construct a supported finite group and validate its axioms."""
    params = tuple(int(p) for p in params)
    if family not in SUPPORTED_FAMILIES:
        raise UnsupportedFamilyError(f"unsupported finite group family {family!r}")
    if family == "direct_product":
        if not params or any(p < 1 for p in params):
            raise ValueError("direct_product needs a list of positive cyclic moduli")
        order = int(np.prod(params))
    else:
        if len(params) != 1 or params[0] < 1:
            raise ValueError(f"{family} takes a single positive integer parameter")
        (p,) = params
        order = {
            "cyclic": p,
            "elementary_abelian_2": 1 << p,
            "dihedral": 2 * p,
            "symmetric": int(np.prod(range(1, p + 1))) if p > 0 else 1,
            "heisenberg_mod": p**3,
        }[family]
    if order > caps.group_order:
        raise CapExceededError(
            f"{family}{params}: order {order} exceeds cap {caps.group_order}"
        )
    builder = {
        "cyclic": lambda: _cyclic(params[0]),
        "elementary_abelian_2": lambda: _elementary_abelian_2(params[0]),
        "dihedral": lambda: _dihedral(params[0]),
        "symmetric": lambda: _symmetric(params[0]),
        "heisenberg_mod": lambda: _heisenberg_mod(params[0]),
        "direct_product": lambda: _direct_product_of_cyclics(params),
    }[family]
    F = builder()
    validate_group(F)
    return F


def group_from_descriptor(desc: dict, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    try:
        return build_finite_group(desc["family"], desc["params"], caps)
    except KeyError as exc:
        raise ValueError(f"group descriptor missing key {exc}") from exc


# ---------------------------------------------------------------------------
# representations


class RegularRepresentation:
    """Left translation on l^2(F); matrix(g) is the permutation h -> g*h."""

    def __init__(self, F: FiniteGroup):
        self.group = F
        self.dim = F.order

    def permutation(self, g: int) -> np.ndarray:
        """Row g of the multiplication table: index of g*h for each h."""
        return self.group.mul[g]

    def matrix(self, g: int) -> np.ndarray:
        n = self.dim
        out = np.zeros((n, n), dtype=np.complex128)
        out[self.group.mul[g], np.arange(n)] = 1.0
        return out


def regular_representation(F: FiniteGroup) -> RegularRepresentation:
    return RegularRepresentation(F)


@dataclass
class Irrep:
    """Unitary matrix representation given elementwise; dim-by-dim blocks."""

    dim: int
    matrices: np.ndarray  # (order, dim, dim) complex

    @property
    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)

    def unitarity_defect(self) -> float:
        prods = np.einsum("gij,gkj->gik", self.matrices, self.matrices.conj())
        eye = np.eye(self.dim)
        return float(np.max(np.abs(prods - eye)))

    def homomorphism_defect(self, F: FiniteGroup, max_exhaustive: int = 512,
                            rng: np.random.Generator | None = None) -> float:
        n = F.order
        if n <= max_exhaustive:
            xs = np.repeat(np.arange(n), n)
            ys = np.tile(np.arange(n), n)
        else:
            rng = rng or np.random.default_rng(0)
            xs, ys = rng.integers(0, n, size=(2, 20000))
        lhs = self.matrices[F.mul[xs, ys]]
        rhs = np.einsum("pij,pjk->pik", self.matrices[xs], self.matrices[ys])
        return float(np.max(np.abs(lhs - rhs)))

    def commutant_scalar_defect(self, seed: int = 0) -> float:
        """Distance of the group-average twirl of a random matrix from scalars.

        Zero (to tolerance) certifies irreducibility: the commutant is then
        trivial, so any commuting matrix is scalar.
        """
        rng = np.random.default_rng(seed)
        d = self.dim
        x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        twirl = np.einsum("gij,jk,glk->il", self.matrices, x, self.matrices.conj())
        twirl /= self.matrices.shape[0]
        scalar = np.trace(twirl) / d
        return float(np.max(np.abs(twirl - scalar * np.eye(d))))


@dataclass
class IrrepDecomposition:
    """Distinct irreducible blocks of the regular representation.

    In the regular representation every irreducible occurs with
    multiplicity equal to its dimension, so multiplicities mirrors dims.
    """

    group: FiniteGroup
    blocks: list[Irrep]
    multiplicities: list[int]

    @property
    def dims(self) -> list[int]:
        return [b.dim for b in self.blocks]

    def character_table(self) -> np.ndarray:
        return np.array([b.character for b in self.blocks])

    def to_jsonable(self) -> dict:
        return {
            "group": self.group.descriptor(),
            "dims": self.dims,
            "multiplicities": list(self.multiplicities),
            "characters": [
                [[float(c.real), float(c.imag)] for c in b.character]
                for b in self.blocks
            ],
        }


class _SplitRetry(Exception):
    """Internal: a split landed in the ambiguity band; retry with a new seed."""


def _class_sum_parts(F: FiniteGroup, cls: np.ndarray):
    """Hermitian and skew parts of the class-sum operator in the regular rep."""
    n = F.order
    A = np.zeros((n, n), dtype=np.float64)
    cols = np.arange(n)
    for g in cls:
        A[F.mul[g], cols] += 1.0
    herm = (A + A.T) / 2.0
    skew = (A - A.T) / 2.0  # multiply by -i to get the Hermitian i-part
    return herm, skew


def _split_indices(values: np.ndarray, tol: Tolerances) -> list[np.ndarray]:
    """Cluster sorted eigenvalues; gaps in the ambiguity band abort the attempt."""
    if len(values) == 1:
        return [np.array([0])]
    gaps = np.diff(values)
    ambiguous = (gaps > tol.spec) & (gaps < 10 * tol.spec)
    if np.any(ambiguous):
        raise _SplitRetry
    cuts = np.nonzero(gaps >= tol.spec)[0]
    bounds = [0, *(cuts + 1), len(values)]
    return [np.arange(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]


def _isotypic_subspaces(F: FiniteGroup, tol: Tolerances) -> list[np.ndarray]:
    """Simultaneous eigenspaces of all central class-sum operators."""
    n = F.order
    subspaces = [np.eye(n, dtype=np.complex128)]
    for cls in F.conjugacy_classes():
        if len(cls) == 1 and cls[0] == F.identity:
            continue
        herm, skew = _class_sum_parts(F, cls)
        for part in (herm, -1j * skew):
            if all(q.shape[1] == 1 for q in subspaces):
                return subspaces
            refined = []
            for q in subspaces:
                if q.shape[1] == 1:
                    refined.append(q)
                    continue
                b = q.conj().T @ part @ q
                w, v = np.linalg.eigh((b + b.conj().T) / 2.0)
                for piece in _split_indices(w, tol):
                    refined.append(q @ v[:, piece])
            subspaces = refined
    return subspaces


def _right_translation_hermitian(F: FiniteGroup, rng: np.random.Generator) -> np.ndarray:
    """Random self-adjoint element of the commutant of left translation."""
    n = F.order
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    Y = np.zeros((n, n), dtype=np.complex128)
    cols = np.arange(n)
    for g in range(n):
        Y[F.mul[cols, F.inv[g]], cols] += w[g]
    return (Y + Y.conj().T) / 2.0


def _block_matrices(F: FiniteGroup, basis: np.ndarray) -> np.ndarray:
    """Compress left translation to an invariant subspace with orthonormal basis."""
    n, d = basis.shape
    out = np.empty((n, d, d), dtype=np.complex128)
    bh = basis.conj().T
    for g in range(n):
        out[g] = bh @ basis[F.mul[F.inv[g]], :]
    return out


def _decompose_once(F: FiniteGroup, seed: int, tol: Tolerances) -> IrrepDecomposition:
    n = F.order
    rng = np.random.default_rng(seed)
    Y = _right_translation_hermitian(F, rng)
    blocks: list[Irrep] = []
    multiplicities: list[int] = []
    for q in _isotypic_subspaces(F, tol):
        D = q.shape[1]
        if D == 1:
            blocks.append(Irrep(1, _block_matrices(F, q)))
            multiplicities.append(1)
            continue
        b = q.conj().T @ Y @ q
        w, v = np.linalg.eigh((b + b.conj().T) / 2.0)
        clusters = _split_indices(w, tol)
        sizes = {len(c) for c in clusters}
        if len(sizes) != 1:
            raise _SplitRetry
        d = sizes.pop()
        if d * len(clusters) != D or d != len(clusters):
            # regular representation: multiplicity must equal the dimension
            raise _SplitRetry
        basis = q @ v[:, clusters[0]]
        blocks.append(Irrep(d, _block_matrices(F, basis)))
        multiplicities.append(len(clusters))

    if sum(d * d for d in (b.dim for b in blocks)) != n:
        raise _SplitRetry
    # certify each block and pairwise inequivalence
    chars = []
    for b in blocks:
        if b.unitarity_defect() > tol.alg:
            raise _SplitRetry
        if b.homomorphism_defect(F) > tol.alg:
            raise _SplitRetry
        if b.commutant_scalar_defect(seed) > tol.alg:
            raise _SplitRetry
        chars.append(b.character)
    gram = np.array(chars) @ np.array(chars).conj().T / n
    if np.max(np.abs(gram - np.eye(len(blocks)))) > tol.alg:
        raise _SplitRetry

    order = sorted(
        range(len(blocks)),
        key=lambda i: (
            blocks[i].dim,
            tuple((round(c.real, 8), round(c.imag, 8)) for c in blocks[i].character),
        ),
    )
    return IrrepDecomposition(
        group=F,
        blocks=[blocks[i] for i in order],
        multiplicities=[multiplicities[i] for i in order],
    )


def decompose_regular(
    F: FiniteGroup,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
) -> IrrepDecomposition:
    """Split the regular representation into its distinct irreducible blocks.

    Isotypic components come from simultaneous eigenspaces of the central
    class-sum operators; each is then split by a seeded-random self-adjoint
    element of the commutant.  The output is certified (unitarity,
    homomorphism, trivial commutant, dimension count) and the attempt is
    retried with a fresh seed when an eigenvalue split is ambiguous.
    """
    if F.order > caps.group_order:
        raise CapExceededError(
            f"{F.label}: order {F.order} exceeds cap {caps.group_order}"
        )
    for attempt in range(caps.decompose_retries):
        try:
            return _decompose_once(F, seed + attempt, tol)
        except _SplitRetry:
            continue
    raise DecompositionFailedError(
        f"{F.label}: irreducible splitting failed after {caps.decompose_retries} seeds"
    )
