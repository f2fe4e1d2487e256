"""Dynamic simple-graph substrate with a fixed vertex set and degree cap.

Adjacency is kept twice: as SampleSets (O(1) membership, insert, delete
and uniform neighbor sampling) and as per-vertex bitmasks, which give the
exact common-neighborhood counts used by tests and the verifier via a
single AND + popcount.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeCapExceeded, DuplicateEdge, MissingEdge
from .sampleset import SampleSet

INSERT = True
DELETE = False


@dataclass(frozen=True, slots=True)
class EdgeUpdate:
    u: int
    v: int
    insert: bool

    def key(self):
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)

    def inverse(self) -> "EdgeUpdate":
        return EdgeUpdate(self.u, self.v, not self.insert)

    def __str__(self):
        return f"{'+' if self.insert else '-'} {self.u} {self.v}"


def ins(u: int, v: int) -> EdgeUpdate:
    return EdgeUpdate(u, v, True)


def dele(u: int, v: int) -> EdgeUpdate:
    return EdgeUpdate(u, v, False)


class DynamicGraph:
    """Undirected simple graph on [0, n) with hard degree cap `delta`."""

    def __init__(self, n: int, delta: int, track_masks: bool = True):
        if n <= 0:
            raise ValueError("n must be positive")
        if delta < 0:
            raise ValueError("delta must be non-negative")
        self.n = n
        self.delta = delta
        self.adj: list[SampleSet] = [SampleSet() for _ in range(n)]
        self.masks: list[int] | None = [0] * n if track_masks else None
        self.edge_count = 0

    # ---- queries ----------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self):
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def common_neighbors_exact(self, u: int, v: int) -> int:
        """|N(u) cap N(v)| by exact intersection; the ground-truth oracle."""
        if u == v:
            raise ValueError("u and v must differ")
        if self.masks is not None:
            return (self.masks[u] & self.masks[v]).bit_count()
        a, b = self.adj[u], self.adj[v]
        if len(a) > len(b):
            a, b = b, a
        return sum(1 for w in a if w in b)

    # ---- mutation ----------------------------------------------------------

    def check_legal(self, e: EdgeUpdate) -> None:
        u, v = e.u, e.v
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"bad endpoints ({u},{v})")
        present = v in self.adj[u]
        if e.insert:
            if present:
                raise DuplicateEdge(u, v)
            if len(self.adj[u]) >= self.delta:
                raise DegreeCapExceeded(u, v, u, self.delta)
            if len(self.adj[v]) >= self.delta:
                raise DegreeCapExceeded(u, v, v, self.delta)
        elif not present:
            raise MissingEdge(u, v)

    def is_legal(self, e: EdgeUpdate) -> bool:
        try:
            self.check_legal(e)
        except Exception:
            return False
        return True

    def apply(self, e: EdgeUpdate) -> None:
        self.check_legal(e)
        u, v = e.u, e.v
        if e.insert:
            self.adj[u].add(v)
            self.adj[v].add(u)
            self.edge_count += 1
            if self.masks is not None:
                self.masks[u] |= 1 << v
                self.masks[v] |= 1 << u
        else:
            self.adj[u].discard(v)
            self.adj[v].discard(u)
            self.edge_count -= 1
            if self.masks is not None:
                self.masks[u] &= ~(1 << v)
                self.masks[v] &= ~(1 << u)
