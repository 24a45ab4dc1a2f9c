"""Constructive separation machinery for the supported discrete groups.

The central algorithm extracts, from a nonzero group algebra element b and
a finitely supported unit vector xi, a finite quotient that is injective
on supp(b)*supp(xi) together with the pushforward of xi; orthonormality of
the coset basis vectors then pins the seminorm of b from below by the
l^2 norm of b*xi.  The Heisenberg representation family, closure of
matrix groups generated by unitaries, factorization of finite-range
representations through quotients, and the explicit free pair in U(3)
round out the toolbox.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import Caps, Tolerances, DEFAULT_CAPS, DEFAULT_TOLERANCES
from .errors import CapExceededError, PrecisionFailureError
from .finite_group import FiniteGroup, IrrepDecomposition, validate_group
from .group_algebra import (
    DiscreteGroup,
    FiniteDiscrete,
    FreeGroup2,
    GroupAlgebraElement,
    Heisenberg,
    ZPower,
)
from .quotients import ExplicitQuotient, FiniteQuotient, min_injective_quotient
from .seminorms import kappa


# ---------------------------------------------------------------------------
# separation witnesses

@dataclass
class SeparationWitness:
    """Finite quotient plus vector certifying a seminorm lower bound."""

    quotient: FiniteQuotient
    vector: dict[int, complex]   # pushforward of xi on target indices
    lower_bound: float
    certified_set: tuple         # product set supp(b)*supp(xi), injectively mapped

    def vector_norm(self) -> float:
        return math.sqrt(sum((c * c.conjugate()).real for c in self.vector.values()))

    def to_jsonable(self) -> dict:
        items = sorted(self.vector.items())
        return {
            "quotient": self.quotient.descriptor(),
            "vector": [{"x": int(x), "c": [c.real, c.imag]} for x, c in items],
            "lower_bound": self.lower_bound,
            "certified_set_size": len(self.certified_set),
        }


def rf_amen_witness(
    G: DiscreteGroup,
    b: GroupAlgebraElement,
    xi: GroupAlgebraElement | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> SeparationWitness:
    """Separation witness for a nonzero element of the group algebra.

    With S = supp(b) and T = supp(xi), the quotient is the smallest
    canonical one injective on the difference set of S*T (including T), so
    the coset vectors indexed by S*T stay orthonormal and the pushed xi
    stays a unit vector.  The certified bound is then exactly the l^2 norm
    of the convolution b*xi.  xi defaults to the point mass at the
    identity and is normalized to unit l^2 norm otherwise.
    """
    if b.is_zero():
        raise ValueError("witness requires a nonzero element")
    if xi is None:
        xi = GroupAlgebraElement.delta(G, G.identity())
    if xi.is_zero():
        raise ValueError("xi must be nonzero")
    if b.group != G or xi.group != G:
        raise ValueError("element and vector must live over the given group")
    norm_xi = xi.l2_norm()
    if abs(norm_xi - 1.0) > 1e-12:
        xi = xi.scaled(1.0 / norm_xi)

    S = sorted(b.support)
    T = sorted(xi.support)
    ST = sorted({G.mul(s, t) for s in S for t in T})
    window = sorted(set(ST) | set(T))
    diffs = sorted({G.mul(x, G.inv(y)) for x in window for y in window})
    q = min_injective_quotient(G, diffs, caps)

    # injectivity on the difference set gives injectivity on ST and on T
    images = [q.apply(g) for g in ST]
    if len(set(images)) != len(ST):
        raise PrecisionFailureError("witness quotient failed the injectivity certificate")

    eta: dict[int, complex] = {}
    for t, c in xi.terms.items():
        x = q.apply(t)
        eta[x] = eta.get(x, 0j) + c
    lower = b.convolve(xi).l2_norm()
    return SeparationWitness(
        quotient=q,
        vector=eta,
        lower_bound=lower,
        certified_set=tuple(ST),
    )


# ---------------------------------------------------------------------------
# the Heisenberg representation family

def _roots_of_unity(max_order: int) -> list[Fraction]:
    """Angles p/q in [0, 1), gcd(p, q) = 1, q <= max_order, sorted by (q, p)."""
    out = [Fraction(0, 1)]
    for q in range(2, max_order + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                out.append(Fraction(p, q))
    return out


def _unit(angle: Fraction | float) -> complex:
    return complex(np.exp(2j * np.pi * float(angle)))


def cyclic_shift(n: int) -> np.ndarray:
    """The n-by-n cyclic shift sending basis vector j to j+1 (mod n)."""
    s = np.zeros((n, n), dtype=np.complex128)
    s[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return s


@dataclass
class GeneratorRep:
    """Unitary representation given by one matrix per named generator."""

    group: DiscreteGroup
    dim: int
    generator_matrices: dict[str, np.ndarray]
    params: tuple | None = None  # (n, k, alpha, beta) for the Heisenberg family

    def _power(self, M: np.ndarray, e: int) -> np.ndarray:
        if e >= 0:
            return np.linalg.matrix_power(M, e)
        return np.linalg.matrix_power(M.conj().T, -e)

    def evaluate(self, g) -> np.ndarray:
        """Matrix of a group element."""
        group = self.group
        g = group.check_element(g)
        if isinstance(group, Heisenberg):
            n, m, l = g
            G = self.generator_matrices["g"]
            H = self.generator_matrices["h"]
            Z = self.generator_matrices["z"]
            # normal form (n, m, l) = z^l h^m g^n
            return self._power(Z, l) @ self._power(H, m) @ self._power(G, n)
        if isinstance(group, FreeGroup2):
            out = np.eye(self.dim, dtype=np.complex128)
            mats = {1: self.generator_matrices["g1"], 2: self.generator_matrices["g2"]}
            for s in g:
                M = mats[abs(s)]
                out = out @ (M if s > 0 else M.conj().T)
            return out
        if isinstance(group, ZPower):
            out = np.eye(self.dim, dtype=np.complex128)
            for i, e in enumerate(g):
                out = out @ self._power(self.generator_matrices[f"e{i + 1}"], e)
            return out
        if isinstance(group, FiniteDiscrete):
            return self._finite_evaluate(g)
        raise ValueError(f"cannot evaluate on family {group.family!r}")

    def _finite_evaluate(self, g: int) -> np.ndarray:
        if not hasattr(self, "_finite_words"):
            F = self.group.finite_group
            gens = self.group.named_generators()
            from .quotients import _target_words

            images = [gens[name] for name in sorted(gens)]
            self._finite_gen_order = sorted(gens)
            self._finite_words = _target_words(F, images)
        word = self._finite_words[g]
        out = np.eye(self.dim, dtype=np.complex128)
        for s in word:
            M = self.generator_matrices[self._finite_gen_order[abs(s) - 1]]
            out = out @ (M if s > 0 else M.conj().T)
        return out

    def evaluate_element(self, a: GroupAlgebraElement) -> np.ndarray:
        if a.group != self.group:
            raise ValueError("element lives over a different group")
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for g, c in a.terms.items():
            out += c * self.evaluate(g)
        return out

    def unitarity_defect(self) -> float:
        worst = 0.0
        eye = np.eye(self.dim)
        for M in self.generator_matrices.values():
            worst = max(worst, float(np.max(np.abs(M @ M.conj().T - eye))))
        return worst


def heisenberg_irrep(
    n: int,
    k: int,
    alpha: complex,
    beta: complex,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> GeneratorRep:
    """The n-dimensional Heisenberg representation with parameters (n, k, alpha, beta).

    g acts by alpha times the diagonal of n-th root powers omega^{jk},
    h by beta times the cyclic shift, and the central z by the exact
    scalar omega^k; requires gcd(k, n) = 1 and unimodular alpha, beta.
    """
    n = int(n)
    k = int(k)
    if n < 1:
        raise ValueError(f"dimension parameter must be positive, got {n}")
    if math.gcd(k, n) != 1:
        raise ValueError(f"k = {k} must be relatively prime to n = {n}")
    alpha = complex(alpha)
    beta = complex(beta)
    if abs(abs(alpha) - 1.0) > tol.alg or abs(abs(beta) - 1.0) > tol.alg:
        raise ValueError("alpha and beta must be unimodular")
    omega_k = complex(np.exp(2j * np.pi * k / n))
    diag = np.exp(2j * np.pi * k * np.arange(n) / n)
    G = alpha * np.diag(diag).astype(np.complex128)
    H = beta * cyclic_shift(n)
    Z = omega_k * np.eye(n, dtype=np.complex128)
    return GeneratorRep(
        group=Heisenberg(),
        dim=n,
        generator_matrices={"g": G, "h": H, "z": Z},
        params=(n, k, alpha, beta),
    )


def heisenberg_relation_defect(rep: GeneratorRep) -> float:
    """Max deviation from g h = z h g with z central."""
    G = rep.generator_matrices["g"]
    H = rep.generator_matrices["h"]
    Z = rep.generator_matrices["z"]
    d1 = np.max(np.abs(G @ H - Z @ H @ G))
    d2 = np.max(np.abs(Z @ G - G @ Z))
    d3 = np.max(np.abs(Z @ H - H @ Z))
    return float(max(d1, d2, d3))


# ---------------------------------------------------------------------------
# closure of matrix groups

@dataclass
class ClosureResult:
    """Outcome of closing generator matrices under multiplication."""

    completed: bool
    size: int
    matrices: np.ndarray | None            # (size, dim, dim) when completed
    words: list[tuple[int, ...]] | None    # signed generator-slot words
    generator_names: list[str]
    generator_indices: list[int] | None    # closure index of each generator
    relators: list[tuple[int, ...]]        # discovered words acting as identity
    _index: dict | None = None

    def locate(self, M: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
        """Index of a matrix in the closure; raises KeyError when absent."""
        if not self.completed:
            raise KeyError("closure did not complete")
        key = _matrix_key(M)
        for idx in self._index.get(key, ()):
            if np.max(np.abs(M - self.matrices[idx])) <= 10 * tol.group:
                return idx
        raise KeyError("matrix not found in closure")


def _matrix_key(M: np.ndarray) -> bytes:
    return (np.round(M, 6) + 0.0).tobytes()


def finite_range_check(
    rep: GeneratorRep,
    size_bound: int = 10**5,
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
) -> ClosureResult:
    """Close the generator matrices under multiplication.

    Matrices equal within the group tolerance are identified by hashing on
    rounded entries with re-verification; two distinct products landing in
    the ambiguity band raise PrecisionFailureError.  Returns an incomplete
    result instead of running past size_bound.
    """
    if size_bound > caps.closure_size:
        raise ValueError(f"size_bound exceeds configured cap {caps.closure_size}")
    names = sorted(rep.generator_matrices)
    dim = rep.dim
    steps: list[tuple[int, np.ndarray]] = []
    for i, name in enumerate(names):
        M = rep.generator_matrices[name]
        steps.append((i + 1, M))
        steps.append((-(i + 1), M.conj().T))

    eye = np.eye(dim, dtype=np.complex128)
    matrices = [eye]
    words: list[tuple[int, ...]] = [()]
    index: dict[bytes, list[int]] = {_matrix_key(eye): [0]}
    relators: list[tuple[int, ...]] = []

    def locate(P: np.ndarray) -> int | None:
        best = None
        best_dist = np.inf
        for idx in index.get(_matrix_key(P), ()):
            dist = float(np.max(np.abs(P - matrices[idx])))
            if dist < best_dist:
                best, best_dist = idx, dist
        if best is None:
            return None
        if best_dist <= tol.group:
            return best
        if best_dist <= 10 * tol.group:
            raise PrecisionFailureError(
                f"two products within the ambiguity band ({best_dist:.3e})"
            )
        return None

    frontier = [0]
    while frontier:
        next_frontier = []
        for xi in frontier:
            base_word = words[xi]
            for s, M in steps:
                P = matrices[xi] @ M
                found = locate(P)
                if found is not None:
                    if found == 0 and base_word + (s,):
                        relators.append(base_word + (s,))
                    continue
                if len(matrices) >= size_bound:
                    return ClosureResult(
                        completed=False,
                        size=len(matrices),
                        matrices=None,
                        words=None,
                        generator_names=names,
                        generator_indices=None,
                        relators=[],
                    )
                idx = len(matrices)
                matrices.append(P)
                words.append(base_word + (s,))
                index.setdefault(_matrix_key(P), []).append(idx)
                next_frontier.append(idx)
        frontier = next_frontier

    stack = np.stack(matrices)
    gen_indices = []
    for i, name in enumerate(names):
        found = locate(rep.generator_matrices[name])
        if found is None:
            raise PrecisionFailureError(f"generator {name} drifted out of its bucket")
        gen_indices.append(found)
    return ClosureResult(
        completed=True,
        size=len(matrices),
        matrices=stack,
        words=words,
        generator_names=names,
        generator_indices=gen_indices,
        relators=relators,
        _index=index,
    )


def closure_group(closure: ClosureResult, tol: Tolerances = DEFAULT_TOLERANCES,
                  caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Multiplication table of a completed closure, built from generator
    translation permutations composed along the stored words (exact integers)."""
    if not closure.completed:
        raise ValueError("closure did not complete")
    N = closure.size
    if N > caps.group_order:
        raise CapExceededError(f"closure size {N} exceeds cap {caps.group_order}")
    mats = closure.matrices
    # left translation by each generator step as an index permutation
    step_perm: dict[int, np.ndarray] = {}
    for slot, name in enumerate(closure.generator_names, start=1):
        for sign in (1, -1):
            s = sign * slot
            g = mats[closure.generator_indices[slot - 1]]
            M = g if sign > 0 else g.conj().T
            perm = np.empty(N, dtype=np.int64)
            for j in range(N):
                perm[j] = closure.locate(M @ mats[j], tol)
            step_perm[s] = perm
    mul = np.empty((N, N), dtype=np.int32)
    identity_row = np.arange(N, dtype=np.int64)
    for i, word in enumerate(closure.words):
        row = identity_row
        for s in reversed(word):
            row = step_perm[s][row]
        mul[i] = row
    inv = np.empty(N, dtype=np.int32)
    for i in range(N):
        inv[i] = int(np.nonzero(mul[i] == 0)[0][0])
    F = FiniteGroup(
        label=f"closure[{N}]",
        family="matrix_image",
        params=(N,),
        mul=mul,
        inv=inv,
        identity=0,
        generator_indices=tuple(closure.generator_indices),
    )
    validate_group(F)
    return F


@dataclass
class FactorReport:
    """A finite-range representation rewritten through a finite quotient."""

    quotient: FiniteQuotient
    image_matrices: np.ndarray  # matrix of each target element
    max_defect: float           # evaluate-directly vs kappa-then-evaluate
    samples: int

    def to_jsonable(self) -> dict:
        return {
            "quotient": self.quotient.descriptor(),
            "image_order": int(self.image_matrices.shape[0]),
            "max_defect": self.max_defect,
            "samples": self.samples,
        }


def _random_sample_elements(G: DiscreteGroup, rng: np.random.Generator,
                            count: int) -> list[GroupAlgebraElement]:
    out = []
    for _ in range(count):
        terms: dict = {}
        for _ in range(rng.integers(1, 5)):
            if isinstance(G, Heisenberg):
                g = tuple(int(v) for v in rng.integers(-2, 3, size=3))
            elif isinstance(G, ZPower):
                g = tuple(int(v) for v in rng.integers(-4, 5, size=G.rank))
            elif isinstance(G, FiniteDiscrete):
                g = int(rng.integers(0, G.finite_group.order))
            elif isinstance(G, FreeGroup2):
                from .group_algebra import reduce_word

                g = reduce_word(
                    int(s) for s in rng.choice([1, -1, 2, -2], size=rng.integers(0, 5))
                )
            else:
                raise ValueError(f"unsupported family {G.family!r}")
            c = complex(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
            if c != 0:
                terms[g] = terms.get(g, 0j) + c
        out.append(GroupAlgebraElement(G, terms))
    return out


def factor_through_quotient(
    rep: GeneratorRep,
    closure: ClosureResult | None = None,
    samples: int = 10,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
) -> FactorReport:
    """Factor a finite-range representation through the quotient onto its image.

    Builds the quotient onto the enumerated image group and the tautological
    representation of the image, then verifies on random algebra elements
    that evaluating the representation directly agrees with evaluating the
    image representation on the pushforward.
    """
    if closure is None:
        closure = finite_range_check(rep, tol=tol, caps=caps)
    if not closure.completed:
        raise ValueError("representation has no enumerated finite image")
    target = closure_group(closure, tol, caps)
    lifts = [_word_to_element(rep.group, closure, w) for w in closure.words]
    quotient = ExplicitQuotient(
        group=rep.group,
        target=target,
        apply_fn=lambda g: closure.locate(rep.evaluate(g), tol),
        lifts=lifts,
        descriptor={
            "group": rep.group.descriptor(),
            "kind": "image",
            "params": [int(target.order)],
        },
        kernel={"relators": [list(r) for r in closure.relators[:16]]},
    )
    rng = np.random.default_rng(seed)
    max_defect = 0.0
    for a in _random_sample_elements(rep.group, rng, samples):
        direct = rep.evaluate_element(a)
        pushed = kappa(quotient, a)
        through = np.zeros_like(direct)
        for x, c in pushed.terms.items():
            through += c * closure.matrices[x]
        max_defect = max(max_defect, float(np.max(np.abs(direct - through))))
    return FactorReport(
        quotient=quotient,
        image_matrices=closure.matrices,
        max_defect=max_defect,
        samples=samples,
    )


def _word_to_element(G: DiscreteGroup, closure: ClosureResult, word: tuple[int, ...]):
    gens = G.named_generators()
    by_slot = [gens[name] for name in closure.generator_names]
    x = G.identity()
    for s in word:
        g = by_slot[abs(s) - 1]
        x = G.mul(x, g if s > 0 else G.inv(g))
    return x


# ---------------------------------------------------------------------------
# separation search over the Heisenberg representation family

@dataclass
class SeparationSearchResult:
    found: bool
    params: tuple | None        # (n, k, alpha_angle, beta_angle) as Fractions
    value: float
    rep: GeneratorRep | None
    tuples_tried: int
    threshold: float

    def to_jsonable(self) -> dict:
        doc = {
            "found": self.found,
            "value": self.value,
            "tuples_tried": self.tuples_tried,
            "threshold": self.threshold,
        }
        if self.found:
            n, k, ang_a, ang_b = self.params
            doc["params"] = {
                "n": n,
                "k": k,
                "alpha": [str(ang_a), [_unit(ang_a).real, _unit(ang_a).imag]],
                "beta": [str(ang_b), [_unit(ang_b).real, _unit(ang_b).imag]],
            }
        else:
            doc["note"] = "not separated within the searched ranges"
        return doc


def heisenberg_separation(
    a: GroupAlgebraElement,
    n_max: int = 12,
    root_order_max: int = 24,
    threshold: float | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
) -> SeparationSearchResult:
    """Search the root-of-unity Heisenberg representations for one moving a.

    Scans tuples (n, k, alpha, beta) in lexicographic order, roots of unity
    ordered by (order, numerator), and returns the first representation
    whose evaluation of a has norm above the threshold (default: the norm
    tolerance).  A not-found result reports the ranges and never claims
    that a is annihilated by every finite-range representation.
    """
    if not isinstance(a.group, Heisenberg):
        raise ValueError("separation search expects a Heisenberg element")
    if a.is_zero():
        raise ValueError("separation search requires a nonzero element")
    cut = tol.norm if threshold is None else float(threshold)
    angles = _roots_of_unity(root_order_max)
    units = np.array([_unit(t) for t in angles])
    coords = np.array(sorted(a.support))
    coeffs = np.array([a.terms[tuple(g)] for g in coords])
    tried = 0
    for n in range(1, n_max + 1):
        shift = cyclic_shift(n)
        diag = np.exp(2j * np.pi * np.arange(n) / n)
        for k in range(1, n + 1):
            if math.gcd(k, n) != 1:
                continue
            # E_w = s^m d^n for the normal form z^l h^m g^n, delayed scalars
            base = np.empty((len(coords), n, n), dtype=np.complex128)
            omega_k = np.exp(2j * np.pi * k / n)
            for w, (cn, cm, cl) in enumerate(coords):
                d_pow = np.diag(diag ** ((k * cn) % n))
                s_pow = np.linalg.matrix_power(shift, cm % n) if cm % n else np.eye(n)
                base[w] = omega_k**cl * (s_pow @ d_pow)
            alpha_pow = units[:, None] ** coords[None, :, 0]   # (A, W)
            beta_pow = units[:, None] ** coords[None, :, 1]    # (B, W)
            scal = (
                coeffs[None, None, :]
                * alpha_pow[:, None, :]
                * beta_pow[None, :, :]
            )  # (A, B, W)
            M = np.einsum("abw,wij->abij", scal, base)
            if n == 1:
                norms = np.abs(M[..., 0, 0])
            else:
                norms = np.linalg.norm(M, ord=2, axis=(-2, -1))
            tried += norms.size
            hits = np.argwhere(norms > cut)
            if hits.size:
                ai, bi = min(map(tuple, hits))
                rep = heisenberg_irrep(n, k, _unit(angles[ai]), _unit(angles[bi]), tol)
                return SeparationSearchResult(
                    found=True,
                    params=(n, k, angles[ai], angles[bi]),
                    value=float(norms[ai, bi]),
                    rep=rep,
                    tuples_tried=tried,
                    threshold=cut,
                )
    return SeparationSearchResult(
        found=False, params=None, value=0.0, rep=None,
        tuples_tried=tried, threshold=cut,
    )


# ---------------------------------------------------------------------------
# the explicit free pair in U(3)

_SQ2 = math.sqrt(2.0) / 2.0
_SQ3 = math.sqrt(3.0) / 2.0

U3_U = np.array(
    [[_SQ2, 0.0, -_SQ2],
     [0.0, 1.0, 0.0],
     [_SQ2, 0.0, _SQ2]],
    dtype=np.complex128,
)
U3_V = np.array(
    [[1.0, 0.0, 0.0],
     [0.0, _SQ3, -0.5],
     [0.0, 0.5, _SQ3]],
    dtype=np.complex128,
)


def free_u3_generators() -> tuple[np.ndarray, np.ndarray]:
    """The pair (uv)^2, (uv^2)^2 of 3x3 rotations generating a free group."""
    uv = U3_U @ U3_V
    uv2 = U3_U @ U3_V @ U3_V
    return uv @ uv, uv2 @ uv2


@dataclass
class U3WordsReport:
    max_word_length: int
    words_checked: int
    min_distance: float
    min_word: tuple[int, ...]
    threshold: float
    passed: bool

    def to_jsonable(self) -> dict:
        return {
            "max_word_length": self.max_word_length,
            "words_checked": self.words_checked,
            "min_distance": self.min_distance,
            "min_word": list(self.min_word),
            "threshold": self.threshold,
            "passed": self.passed,
        }


def free_group_u3_check(
    max_word_length: int = 8,
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
) -> U3WordsReport:
    """Evaluate every nontrivial reduced word in the free U(3) pair.

    Reports the minimum operator-norm distance from the identity over all
    reduced words up to the given length; each must stay well clear of the
    identity for the pair to behave freely at this scale.
    """
    if max_word_length > caps.word_length:
        raise ValueError(f"word length exceeds cap {caps.word_length}")
    A, B = free_u3_generators()
    mats = {1: A, -1: A.conj().T, 2: B, -2: B.conj().T}
    eye = np.eye(3)
    threshold = 10 * tol.alg
    best = np.inf
    best_word: tuple[int, ...] = ()
    count = 0

    stack = [((s,), mats[s]) for s in (1, -1, 2, -2)]
    while stack:
        word, M = stack.pop()
        dist = float(np.linalg.norm(M - eye, ord=2))
        count += 1
        if dist < best:
            best, best_word = dist, word
        if len(word) < max_word_length:
            for s in (1, -1, 2, -2):
                if s == -word[-1]:
                    continue
                stack.append((word + (s,), M @ mats[s]))
    return U3WordsReport(
        max_word_length=max_word_length,
        words_checked=count,
        min_distance=best,
        min_word=best_word,
        threshold=threshold,
        passed=bool(best > threshold),
    )


# ---------------------------------------------------------------------------
# exact sign characters for elementary abelian 2-groups

def exact_sign_characters(
    F: FiniteGroup,
    decomposition: IrrepDecomposition,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Snap the one-dimensional blocks of (C2)^k to exact {-1, +1} characters.

    Every block must be one dimensional with values within tolerance of a
    sign; the snapped table is verified to consist of exact, pairwise
    distinct group homomorphisms into {-1, +1} by integer arithmetic.
    """
    rows = []
    for block in decomposition.blocks:
        if block.dim != 1:
            raise ValueError(f"block of dimension {block.dim}; expected all 1")
        values = block.matrices[:, 0, 0]
        snapped = np.where(values.real >= 0.0, 1, -1).astype(np.int64)
        drift = np.max(np.abs(values - snapped))
        if drift > tol.alg:
            raise PrecisionFailureError(
                f"character value off a sign by {drift:.3e}"
            )
        rows.append(snapped)
    table = np.array(rows)
    mul = F.mul
    for row in table:
        if not np.array_equal(row[mul], row[:, None] * row[None, :]):
            raise PrecisionFailureError("snapped values are not a character")
    if len({tuple(r) for r in table}) != len(rows):
        raise PrecisionFailureError("snapped characters are not pairwise distinct")
    return table
