"""Finite-quotient seminorms on group algebra elements.

kappa pushes an element forward along a quotient (coefficients of a coset
are the sum of the coefficients of its preimages); the seminorm of the
pushed element is its operator norm in the left regular representation of
the finite target, computed by dense SVD up to a size cap and by power
iteration above it.  Seminorm values are certified lower bounds for the
universal norm and are capped above by the l1 norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Caps, Tolerances, DEFAULT_CAPS, DEFAULT_TOLERANCES
from .errors import CapExceededError, PrecisionFailureError
from .finite_group import FiniteGroup, IrrepDecomposition, decompose_regular
from .group_algebra import DiscreteGroup, FiniteDiscrete, GroupAlgebraElement
from .quotients import FiniteQuotient, connecting_map


def kappa(q: FiniteQuotient, a: GroupAlgebraElement) -> GroupAlgebraElement:
    """Pushforward along the quotient: kappa(a)(x) = sum over preimages of x."""
    if a.group != q.group:
        raise ValueError("element does not live over the quotient's source group")
    out: dict = {}
    for g, c in a.terms.items():
        x = q.apply(g)
        s = out.get(x, 0j) + c
        if s == 0:
            out.pop(x, None)
        else:
            out[x] = s
    return GroupAlgebraElement(FiniteDiscrete(q.target), out)


def push_along(
    elem: GroupAlgebraElement, conn: np.ndarray, coarse_target: FiniteGroup
) -> GroupAlgebraElement:
    """Push an element over a fine target through a connecting index map."""
    out: dict = {}
    for x, c in elem.terms.items():
        y = int(conn[x])
        s = out.get(y, 0j) + c
        if s == 0:
            out.pop(y, None)
        else:
            out[y] = s
    return GroupAlgebraElement(FiniteDiscrete(coarse_target), out)


def convolution_matrix(F: FiniteGroup, elem: GroupAlgebraElement) -> np.ndarray:
    """Left-convolution operator on l^2(F): M[x, y] = c(x * y^{-1})."""
    coeffs = np.zeros(F.order, dtype=np.complex128)
    for g, c in elem.terms.items():
        coeffs[g] = c
    return coeffs[F.mul[:, F.inv]]


def _conv_matvec(F: FiniteGroup, terms: dict, v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    for g, c in terms.items():
        out += c * v[F.mul[F.inv[g], :]]
    return out


def _power_iteration_norm(
    F: FiniteGroup, elem: GroupAlgebraElement, caps: Caps, seed: int = 0
) -> float:
    """Largest singular value of the convolution operator, matrix-free."""
    if elem.is_zero():
        return 0.0
    star = elem.involution().terms
    terms = elem.terms
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(F.order) + 1j * rng.standard_normal(F.order)
    v /= np.linalg.norm(v)
    prev = 0.0
    for _ in range(caps.power_maxiter):
        w = _conv_matvec(F, star, _conv_matvec(F, terms, v))
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        value = float(np.sqrt(norm_w))
        v = w / norm_w
        if prev > 0 and abs(value - prev) <= caps.power_tol * value:
            return value
        prev = value
    raise PrecisionFailureError(
        f"power iteration did not converge within {caps.power_maxiter} steps"
    )


def finite_algebra_norm(
    F: FiniteGroup,
    elem: GroupAlgebraElement,
    caps: Caps = DEFAULT_CAPS,
    seed: int = 0,
) -> float:
    """Norm of an element of the group algebra of a finite group.

    The regular representation is faithful on a finite group's algebra, so
    this is the honest operator norm there, not just a lower bound.
    """
    if elem.is_zero():
        return 0.0
    if F.order > caps.group_order:
        raise CapExceededError(f"{F.label}: order {F.order} exceeds cap")
    if F.order <= caps.dense_svd:
        M = convolution_matrix(F, elem)
        return float(np.linalg.svd(M, compute_uv=False)[0])
    return _power_iteration_norm(F, elem, caps, seed)


@dataclass(frozen=True)
class SeminormValue:
    quotient: FiniteQuotient
    value: float
    method: str  # "regular" | "irrep_blocks"

    def to_jsonable(self, l1_bound: float | None = None) -> dict:
        doc = {
            "quotient": self.quotient.descriptor(),
            "value": self.value,
            "method": self.method,
        }
        if l1_bound is not None:
            doc["l1_bound"] = l1_bound
        return doc


def seminorm(
    q: FiniteQuotient,
    a: GroupAlgebraElement,
    caps: Caps = DEFAULT_CAPS,
) -> SeminormValue:
    """The quotient seminorm: norm of kappa(a) in the regular representation."""
    pushed = kappa(q, a)
    value = finite_algebra_norm(q.target, pushed, caps)
    return SeminormValue(quotient=q, value=value, method="regular")


def seminorm_via_irreps(
    q: FiniteQuotient,
    a: GroupAlgebraElement,
    decomposition: IrrepDecomposition | None = None,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
) -> SeminormValue:
    """Same seminorm evaluated as the max over irreducible blocks."""
    pushed = kappa(q, a)
    if decomposition is None:
        decomposition = decompose_regular(q.target, seed=seed, tol=tol, caps=caps)
    best = 0.0
    for block in decomposition.blocks:
        M = np.zeros((block.dim, block.dim), dtype=np.complex128)
        for x, c in pushed.terms.items():
            M += c * block.matrices[x]
        if block.dim == 1:
            val = float(abs(M[0, 0]))
        else:
            val = float(np.linalg.svd(M, compute_uv=False)[0])
        best = max(best, val)
    return SeminormValue(quotient=q, value=best, method="irrep_blocks")


@dataclass
class SupSeminormReport:
    """Seminorms along a refinement chain plus the certified running sup."""

    values: list[SeminormValue]
    running_sup: list[float]
    sup: float
    l1_bound: float
    norm_certified: bool  # sup matches the l1 bound within tolerance

    def to_jsonable(self) -> dict:
        return {
            "stages": [v.to_jsonable() for v in self.values],
            "running_sup": list(self.running_sup),
            "sup": self.sup,
            "l1_bound": self.l1_bound,
            "norm_certified": self.norm_certified,
        }


def sup_seminorm(
    G: DiscreteGroup,
    a: GroupAlgebraElement,
    schedule: list[FiniteQuotient],
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
) -> SupSeminormReport:
    """Evaluate the seminorms along a refinement chain.

    The schedule must be a chain (each entry refines its predecessor), so
    the values are nondecreasing up to tolerance; the running sup is a
    certified lower bound for the universal norm of a.  When the sup meets
    the l1 upper bound within tolerance the norm itself is certified.
    """
    if a.group != G:
        raise ValueError("element does not live over the given group")
    if not schedule:
        raise ValueError("schedule must be nonempty")
    for prev, nxt in zip(schedule, schedule[1:]):
        try:
            connecting_map(nxt, prev)
        except ValueError as exc:
            raise ValueError(f"schedule is not a refinement chain: {exc}") from exc
    values = [seminorm(q, a, caps) for q in schedule]
    for prev, nxt in zip(values, values[1:]):
        if nxt.value < prev.value - tol.norm:
            raise PrecisionFailureError(
                "seminorms decreased along a refinement chain beyond tolerance"
            )
    running = np.maximum.accumulate([v.value for v in values]).tolist()
    sup = running[-1] if running else 0.0
    l1 = a.l1_norm()
    return SupSeminormReport(
        values=values,
        running_sup=running,
        sup=sup,
        l1_bound=l1,
        norm_certified=bool(sup >= l1 - tol.norm),
    )
