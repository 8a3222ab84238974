"""Revealed-preference axioms over finite observation sets.

An observation is a (price, income, chosen bundle) triple.  Observation i
directly reveals bundle x_i preferred to x_j when x_j was affordable at i's
budget and the bundles differ:

    i -> j   iff   p_i · x_j <= m_i  and  x_i != x_j.

WARP requires the direct relation to be asymmetric; SARP requires its
transitive closure to be asymmetric, which for finite data is the same as the
relation's digraph being acyclic.  Acyclic data can be extended to a total
order on the observed bundles (finite Szpilrajn step), which certifies that
the data are consistent with maximization of some complete preorder.

Equal bundles are the one subtlety: two observations may choose the same
bundle at different budgets, and a revealed cycle may need to pass through
such a duplicate.  SARP is therefore evaluated on the digraph of
bundle-equivalence classes (affordability depends on the bundle value only,
so the class digraph is well defined).  Witness cycles are reported as
observation indices; when a cycle can close at a duplicate row of its starting
bundle the duplicate is used, so the certificate lists pairwise-distinct rows.

Rational inputs (ints/Fractions) make every comparison exact; float inputs
compare bundles with a small absolute tolerance and budgets with plain <=.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Sequence

from ._num import Num, Vec, as_vec, dot, is_exact, parse_number

__all__ = [
    "Observation",
    "Dataset",
    "RevealedRelation",
    "WarpVerdict",
    "SarpVerdict",
    "SarpViolation",
    "direct_revealed",
    "transitive_closure",
    "check_warp",
    "check_sarp",
    "extend_to_total_order",
    "load_observations",
    "gale_table",
]

BUNDLE_EQ_TOL = 1e-9

CSV_HEADER = ("p1", "p2", "p3", "m", "x1", "x2", "x3")


@dataclass(frozen=True)
class Observation:
    """One priced choice: strictly positive prices, positive income, feasible bundle."""

    price: Vec
    income: Num
    bundle: Vec

    def __post_init__(self):
        object.__setattr__(self, "price", as_vec(self.price))
        object.__setattr__(self, "bundle", as_vec(self.bundle))
        if len(self.price) != len(self.bundle) or not self.price:
            raise ValueError("price and bundle must have equal positive length")
        if any(v <= 0 for v in self.price):
            raise ValueError(f"price must be strictly positive, got {self.price}")
        if self.income <= 0:
            raise ValueError(f"income must be positive, got {self.income}")
        if any(v < 0 for v in self.bundle):
            raise ValueError(f"bundle must be nonnegative, got {self.bundle}")
        spent = dot(self.price, self.bundle)
        # relative slack so float demands on the budget line construct cleanly
        if spent > self.income * (1 + 1e-12):
            raise ValueError(
                f"bundle costs {spent} which exceeds income {self.income}"
            )

    @property
    def n_goods(self) -> int:
        return len(self.price)


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of observations over a common good space."""

    observations: tuple[Observation, ...]
    provenance: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "observations", tuple(self.observations))
        if not self.observations:
            raise ValueError("dataset must contain at least one observation")
        n = self.observations[0].n_goods
        if any(o.n_goods != n for o in self.observations):
            raise ValueError("observations disagree on the number of goods")

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self) -> Iterator[Observation]:
        return iter(self.observations)

    def __getitem__(self, i: int) -> Observation:
        return self.observations[i]

    @property
    def exact(self) -> bool:
        return all(
            is_exact(o.price, o.bundle) and isinstance(o.income, (int, Fraction))
            for o in self.observations
        )


def _bundles_equal(a: Vec, b: Vec, exact: bool) -> bool:
    if exact:
        return a == b
    return all(abs(float(x) - float(y)) <= BUNDLE_EQ_TOL for x, y in zip(a, b))


@dataclass(frozen=True)
class RevealedRelation:
    """Digraph of the direct revealed-preference relation.

    ``edges`` holds index pairs (i, j) for "i directly revealed preferred to
    j".  ``classes`` assigns each observation the id of its bundle-equivalence
    class (class ids are the lowest member index).
    """

    n: int
    edges: frozenset[tuple[int, int]]
    classes: tuple[int, ...] = field(default=())

    def successors(self, i: int) -> list[int]:
        return sorted(j for (a, j) in self.edges if a == i)

    def closure_edges(self) -> frozenset[tuple[int, int]]:
        """Edge set of the transitive closure (paths of length >= 1)."""
        adj = {i: [] for i in range(self.n)}
        for i, j in self.edges:
            adj[i].append(j)
        closed = set()
        for start in range(self.n):
            stack = list(adj[start])
            seen = set()
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                closed.add((start, v))
                stack.extend(adj[v])
        return frozenset(closed)


@dataclass(frozen=True)
class WarpVerdict:
    passed: bool
    violation: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class SarpVerdict:
    passed: bool
    cycle: Optional[tuple[int, ...]] = None


class SarpViolation(ValueError):
    """Raised when an operation requires acyclic data but got a cycle."""

    def __init__(self, cycle: tuple[int, ...]):
        self.cycle = cycle
        super().__init__(f"revealed-preference cycle through observations {cycle}")


def _bundle_classes(data: Dataset) -> tuple[int, ...]:
    exact = data.exact
    reps: list[tuple[int, Vec]] = []  # (class id, representative bundle)
    ids = []
    for i, obs in enumerate(data):
        for cid, rep in reps:
            if _bundles_equal(obs.bundle, rep, exact):
                ids.append(cid)
                break
        else:
            reps.append((i, obs.bundle))
            ids.append(i)
    return tuple(ids)


def direct_revealed(data: Dataset) -> RevealedRelation:
    """Compute the direct revealed-preference digraph of a dataset."""
    classes = _bundle_classes(data)
    edges = set()
    for i, oi in enumerate(data):
        for j, oj in enumerate(data):
            if classes[i] == classes[j]:
                continue
            if dot(oi.price, oj.bundle) <= oi.income:
                edges.add((i, j))
    return RevealedRelation(n=len(data), edges=frozenset(edges), classes=classes)


def transitive_closure(rel: RevealedRelation) -> RevealedRelation:
    """Relation whose edges are the transitive closure of ``rel``; idempotent."""
    return RevealedRelation(n=rel.n, edges=rel.closure_edges(), classes=rel.classes)


def check_warp(data: Dataset) -> WarpVerdict:
    """Weak axiom: no mutual direct revelations between distinct bundles.

    Returns the lexicographically first violating pair (i, j), i < j.
    """
    rel = direct_revealed(data)
    for i in range(rel.n):
        for j in range(i + 1, rel.n):
            if (i, j) in rel.edges and (j, i) in rel.edges:
                return WarpVerdict(passed=False, violation=(i, j))
    return WarpVerdict(passed=True)


def _class_graph(rel: RevealedRelation) -> dict[int, list[int]]:
    """Digraph over bundle classes, neighbors sorted by class id."""
    succ: dict[int, set[int]] = {c: set() for c in sorted(set(rel.classes))}
    for i, j in rel.edges:
        succ[rel.classes[i]].add(rel.classes[j])
    return {c: sorted(s) for c, s in succ.items()}


def _find_cycle(rel: RevealedRelation) -> Optional[tuple[int, ...]]:
    """First cycle of the class digraph under depth-first search in index order.

    Exploration starts from each class in id order and visits neighbors in id
    order, so the witness is deterministic.  The returned tuple gives one
    observation index per step: the lowest member of the class that witnesses
    the outgoing edge, plus a closing entry for the start bundle.  The closing
    entry prefers a duplicate row of the start bundle, so the certificate rows
    are pairwise distinct when the data allow it.
    """
    graph = _class_graph(rel)
    done: set[int] = set()
    for root in graph:
        if root in done:
            continue
        # iterative DFS keeping the current path
        path: list[int] = []
        on_path: set[int] = set()
        stack: list[tuple[int, Iterator[int]]] = [(root, iter(graph[root]))]
        path.append(root)
        on_path.add(root)
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt in on_path:
                    k = path.index(nxt)
                    return _cycle_to_indices(rel, graph, tuple(path[k:]))
                if nxt in done:
                    continue
                path.append(nxt)
                on_path.add(nxt)
                stack.append((nxt, iter(graph[nxt])))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on_path.discard(path.pop())
                done.add(node)
    return None


def _cycle_to_indices(
    rel: RevealedRelation, graph: dict[int, list[int]], cycle: tuple[int, ...]
) -> tuple[int, ...]:
    members: dict[int, list[int]] = {}
    for i, c in enumerate(rel.classes):
        members.setdefault(c, []).append(i)

    def witness(cls_from: int, cls_to: int) -> int:
        for i in members[cls_from]:
            if any(rel.classes[j] == cls_to and (i, j) in rel.edges for j in range(rel.n)):
                return i
        raise RuntimeError("class edge without witnessing observation")  # pragma: no cover

    out = [
        witness(cycle[r], cycle[(r + 1) % len(cycle)]) for r in range(len(cycle))
    ]
    # closing entry: a duplicate row of the start bundle if one exists
    start_cls = cycle[0]
    closing = [i for i in members[start_cls] if i != out[0]]
    if closing:
        out.append(closing[0])
    return tuple(out)


def check_sarp(data: Dataset) -> SarpVerdict:
    """Strong axiom: the revealed-preference digraph has no cycle."""
    rel = direct_revealed(data)
    cycle = _find_cycle(rel)
    if cycle is None:
        return SarpVerdict(passed=True)
    return SarpVerdict(passed=False, cycle=cycle)


def extend_to_total_order(data: Dataset) -> tuple[int, ...]:
    """Order observations so every revealed preference points down the list.

    Kahn's algorithm on the bundle-class digraph with lowest-class-id
    tie-breaking; duplicate rows come out adjacent in index order.  Raises
    :class:`SarpViolation` carrying the witness cycle when the data are cyclic.
    """
    rel = direct_revealed(data)
    cycle = _find_cycle(rel)
    if cycle is not None:
        raise SarpViolation(cycle)
    graph = _class_graph(rel)
    indeg = {c: 0 for c in graph}
    for c, succ in graph.items():
        for s in succ:
            indeg[s] += 1
    ready = sorted(c for c, d in indeg.items() if d == 0)
    order: list[int] = []
    members: dict[int, list[int]] = {}
    for i, c in enumerate(rel.classes):
        members.setdefault(c, []).append(i)
    while ready:
        c = ready.pop(0)
        order.extend(members[c])
        for s in graph[c]:
            indeg[s] -= 1
            if indeg[s] == 0:
                ready.append(s)
        ready.sort()
    return tuple(order)


def load_observations(path) -> Dataset:
    """Read a `p1,p2,p3,m,x1,x2,x3` CSV into an exact-arithmetic dataset.

    Number literals may be integers, decimals, scientific notation, or `a/b`
    rationals; all are parsed exactly.  Malformed input raises ValueError
    citing the 1-based file line.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != CSV_HEADER:
            raise ValueError(
                f"{path}: line 1: header must be {','.join(CSV_HEADER)}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 7:
                raise ValueError(f"{path}: line {lineno}: expected 7 fields, got {len(row)}")
            try:
                vals = [parse_number(cell) for cell in row]
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            try:
                rows.append(Observation(price=vals[0:3], income=vals[3], bundle=vals[4:7]))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return Dataset(observations=tuple(rows), provenance=str(path))


def gale_table() -> Dataset:
    """The classic ten-observation table generated by the Gale demand.

    Rows 1..9 cycle through the cone boundary; row 10 repeats row 1.  The
    direct relation chains row i over row i+1 and the closure wraps around,
    which is the finite refutation of rationalizability by revealed
    preference alone.
    """
    F = Fraction
    prices = [
        (9, 16, 12),
        (340, 440, 330),
        (410, 400, 300),
        (16, 12, 9),
        (440, 330, 340),
        (400, 300, 410),
        (12, 9, 16),
        (330, 340, 440),
        (300, 410, 400),
        (9, 16, 12),
    ]
    incomes = [9, 303, 303, 9, 303, 303, 9, 303, 303, 9]
    bundles = [
        (1, 0, 0),
        (F(3, 5), 0, F(3, 10)),
        (F(3, 10), 0, F(3, 5)),
        (0, 0, 1),
        (0, F(3, 10), F(3, 5)),
        (0, F(3, 5), F(3, 10)),
        (0, 1, 0),
        (F(3, 10), F(3, 5), 0),
        (F(3, 5), F(3, 10), 0),
        (1, 0, 0),
    ]
    obs = tuple(
        Observation(price=tuple(F(v) for v in p), income=F(m), bundle=tuple(F(v) for v in x))
        for p, m, x in zip(prices, incomes, bundles)
    )
    return Dataset(observations=obs, provenance="gale1960")
