"""Truncated inverse systems of finite group algebras.

Only finite truncations are ever represented: a finite poset of quotients
with certified connecting surjections.  Consistent families, boundedness,
and fullness are checked at the truncation; the reports say so, because
the full directed system is never enumerable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Caps, Tolerances, DEFAULT_CAPS, DEFAULT_TOLERANCES
from .group_algebra import DiscreteGroup, FiniteDiscrete, GroupAlgebraElement
from .quotients import FiniteQuotient, connecting_map
from .seminorms import finite_algebra_norm, kappa, push_along, seminorm


class SystemTruncation:
    """Finite directed poset of quotients with connecting pushforwards."""

    def __init__(self, nodes: list[FiniteQuotient]):
        if not nodes:
            raise ValueError("a system truncation needs at least one node")
        group = nodes[0].group
        for q in nodes:
            if q.group != group:
                raise ValueError("all nodes must quotient the same group")
        self.group = group
        self.nodes = list(nodes)
        n = len(nodes)
        self.leq = np.zeros((n, n), dtype=bool)  # leq[i, j]: node i below node j
        self.connecting: dict[tuple[int, int], np.ndarray] = {}
        for i in range(n):
            self.leq[i, i] = True
            self.connecting[(i, i)] = np.arange(nodes[i].target.order)
        for j in range(n):
            for i in range(n):
                if i == j:
                    continue
                try:
                    conn = connecting_map(nodes[j], nodes[i])
                except ValueError:
                    continue
                self.leq[i, j] = True
                self.connecting[(i, j)] = conn

    def comparable_pairs(self) -> list[tuple[int, int]]:
        """(low, high) pairs with low < high in the poset order."""
        n = len(self.nodes)
        return [
            (i, j)
            for i in range(n)
            for j in range(n)
            if i != j and self.leq[i, j]
        ]

    def maximum_node(self) -> int | None:
        """Index of a node above every other one, if the truncation has one."""
        for j in range(len(self.nodes)):
            if all(self.leq[i, j] for i in range(len(self.nodes))):
                return j
        return None

    def functoriality_defect(self) -> int:
        """Number of basis disagreements of composed vs direct connecting maps."""
        bad = 0
        n = len(self.nodes)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if i == j or j == k or not (self.leq[i, j] and self.leq[j, k]):
                        continue
                    composed = self.connecting[(i, j)][self.connecting[(j, k)]]
                    bad += int(np.count_nonzero(composed != self.connecting[(i, k)]))
        return bad

    def to_jsonable(self) -> dict:
        return {
            "group": self.group.descriptor(),
            "nodes": [q.descriptor() for q in self.nodes],
            "order": [[bool(x) for x in row] for row in self.leq],
        }


@dataclass
class ConsistentFamily:
    """One element per node, intended to be coherent under the connecting maps."""

    entries: dict[int, GroupAlgebraElement]

    def scaled(self, t: complex) -> "ConsistentFamily":
        return ConsistentFamily({i: e.scaled(t) for i, e in self.entries.items()})

    def to_jsonable(self, sys: SystemTruncation) -> dict:
        return {
            "entries": {
                str(i): self.entries[i].to_jsonable() for i in sorted(self.entries)
            },
            "system": sys.to_jsonable(),
        }


@dataclass
class ConsistencyReport:
    passed: bool
    max_defect: float
    worst_pair: tuple[int, int] | None
    note: str = "checked at this truncation only"

    def to_jsonable(self) -> dict:
        return {
            "passed": self.passed,
            "max_defect": self.max_defect,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
            "note": self.note,
        }


def check_consistent(
    fam: ConsistentFamily,
    sys: SystemTruncation,
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
) -> ConsistencyReport:
    """Max norm defect between pushed-down entries and the stored ones."""
    for i in range(len(sys.nodes)):
        if i not in fam.entries:
            raise ValueError(f"family has no entry at node {i}")
    max_defect = 0.0
    worst = None
    for low, high in sys.comparable_pairs():
        pushed = push_along(
            fam.entries[high], sys.connecting[(low, high)], sys.nodes[low].target
        )
        defect = finite_algebra_norm(
            sys.nodes[low].target, pushed - fam.entries[low], caps
        )
        if defect > max_defect:
            max_defect, worst = defect, (low, high)
    return ConsistencyReport(passed=max_defect <= tol.alg, max_defect=max_defect,
                             worst_pair=worst)


def phi_truncated(a: GroupAlgebraElement, sys: SystemTruncation) -> ConsistentFamily:
    """The canonical consistent family of pushforwards of a group algebra element."""
    if a.group != sys.group:
        raise ValueError("element does not live over the system's group")
    return ConsistentFamily({i: kappa(q, a) for i, q in enumerate(sys.nodes)})


@dataclass
class BoundedFamilyReport:
    sup_norm: float
    bound: float
    is_bounded: bool
    node_norms: list[float]

    def to_jsonable(self) -> dict:
        return {
            "sup_norm": self.sup_norm,
            "bound": self.bound,
            "is_bounded": self.is_bounded,
            "node_norms": list(self.node_norms),
        }


def bounded_check(
    fam: ConsistentFamily,
    sys: SystemTruncation,
    bound: float = 1.0,
    caps: Caps = DEFAULT_CAPS,
) -> BoundedFamilyReport:
    """Sup of the node norms against a configured bound (consistency assumed)."""
    norms = [
        finite_algebra_norm(sys.nodes[i].target, fam.entries[i], caps)
        for i in range(len(sys.nodes))
    ]
    sup = max(norms) if norms else 0.0
    return BoundedFamilyReport(
        sup_norm=sup, bound=bound, is_bounded=sup <= bound, node_norms=norms
    )


@dataclass
class FullnessReport:
    """Outcome of reconstructing a family from its maximum-node entry."""

    passed: bool
    top_node: int
    mismatched_nodes: list[int]
    note: str = "fullness verified at this truncation only"

    def to_jsonable(self) -> dict:
        return {
            "passed": self.passed,
            "top_node": self.top_node,
            "mismatched_nodes": list(self.mismatched_nodes),
            "note": self.note,
        }


def fullness_check(fam: ConsistentFamily, sys: SystemTruncation) -> FullnessReport:
    """On a truncation with a maximum node, every consistent family must be
    the pushforward family of its top entry; verified by exact reconstruction."""
    top = sys.maximum_node()
    if top is None:
        raise ValueError("truncation has no maximum node")
    mismatched = []
    for i in range(len(sys.nodes)):
        if i == top:
            continue
        rebuilt = push_along(
            fam.entries[top], sys.connecting[(i, top)], sys.nodes[i].target
        )
        if rebuilt != fam.entries[i]:
            mismatched.append(i)
    return FullnessReport(passed=not mismatched, top_node=top,
                          mismatched_nodes=mismatched)


@dataclass
class ProbeResult:
    element: GroupAlgebraElement
    zero_input: bool
    separated_at: int | None
    value: float

    def to_jsonable(self) -> dict:
        return {
            "element": self.element.to_jsonable(),
            "zero_input": self.zero_input,
            "separated_at": self.separated_at,
            "value": self.value,
            "note": None if self.separated_at is not None or self.zero_input
            else "unseparated within schedule",
        }


def faithfulness_probe(
    G: DiscreteGroup,
    elements: list[GroupAlgebraElement],
    schedule: list[FiniteQuotient],
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
) -> list[ProbeResult]:
    """Least schedule index separating each element, or a not-separated report."""
    results = []
    for a in elements:
        if a.group != G:
            raise ValueError("probe element lives over a different group")
        if a.is_zero():
            results.append(ProbeResult(a, True, None, 0.0))
            continue
        hit = None
        hit_value = 0.0
        for i, q in enumerate(schedule):
            value = seminorm(q, a, caps).value
            if value > tol.norm:
                hit, hit_value = i, value
                break
        results.append(ProbeResult(a, False, hit, hit_value))
    return results


# ---------------------------------------------------------------------------
# pointwise-convergence demonstration for functions on a finite set

@dataclass
class PointwiseTopologyReport:
    size: int
    coordinate_seminorm_count: int
    fixtures: list[dict]
    domination_checked: int
    passed: bool

    def to_jsonable(self) -> dict:
        return {
            "size": self.size,
            "coordinate_seminorm_count": self.coordinate_seminorm_count,
            "fixtures": self.fixtures,
            "domination_checked": self.domination_checked,
            "passed": self.passed,
        }


def pointwise_topology_demo(size: int, steps: int = 400) -> PointwiseTopologyReport:
    """Demonstrate that convergence in every coordinate seminorm is pointwise
    convergence for functions on a finite set, and that every subset sup
    seminorm is dominated by a max of finitely many coordinate seminorms."""
    if not 1 <= size <= 64:
        raise ValueError("size must be between 1 and 64")
    rng = np.random.default_rng(0)
    ks = np.arange(1, steps + 1)

    def converges_coordinatewise(seq: np.ndarray) -> list[bool]:
        # seq has shape (steps, size); crude tail test per coordinate
        tail = np.abs(seq[steps // 2:, :])
        return [bool(np.all(np.diff(t) <= 1e-12) and t[-1] < 1e-2) for t in tail.T]

    fixtures = []
    ok = True

    # constants 1/k: converge everywhere
    seq = (1.0 / ks)[:, None] * np.ones((1, size))
    conv = converges_coordinatewise(seq)
    fixtures.append({"name": "constants 1/k", "pointwise_limit": True,
                     "converges_in_all_seminorms": all(conv)})
    ok &= all(conv)

    # alternating constants: converge nowhere
    seq = ((-1.0) ** ks)[:, None] * np.ones((1, size))
    conv = converges_coordinatewise(seq)
    fixtures.append({"name": "constants (-1)^k", "pointwise_limit": False,
                     "converges_in_all_seminorms": all(conv)})
    ok &= not any(conv)

    # scaled indicator of one point: converges everywhere
    x0 = size // 2
    seq = np.zeros((steps, size))
    seq[:, x0] = 1.0 / ks
    conv = converges_coordinatewise(seq)
    fixtures.append({"name": "indicator/k at x0", "pointwise_limit": True,
                     "converges_in_all_seminorms": all(conv)})
    ok &= all(conv)

    # oscillation at one point: fails exactly the seminorms covering x0
    seq = np.zeros((steps, size))
    seq[:, x0] = (-1.0) ** ks
    conv = converges_coordinatewise(seq)
    expected = [x != x0 for x in range(size)]
    fixtures.append({"name": "oscillation at x0",
                     "failing_coordinates": [x0],
                     "matches_expected": conv == expected})
    ok &= conv == expected

    # every subset sup-seminorm equals the max of its coordinate seminorms
    checked = 0
    for _ in range(20):
        subset = rng.choice(size, size=rng.integers(1, size + 1), replace=False)
        f = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        p_subset = float(np.max(np.abs(f[subset])))
        p_coords = float(max(np.abs(f[x]) for x in subset))
        ok &= p_subset <= p_coords + 1e-15
        checked += 1

    return PointwiseTopologyReport(
        size=size,
        coordinate_seminorm_count=size,
        fixtures=fixtures,
        domination_checked=checked,
        passed=bool(ok),
    )
