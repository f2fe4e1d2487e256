"""Coloring of the sparse side, kept independent of dense vertices.

A phase starts with a from-scratch pass: half the sparse vertices try a
single random color each (one-shot), the rest are colored greedily in
random order by rejection sampling.  Inside a phase, conflicted sparse
vertices are recolored by the same rejection loop.  Every feasibility
check consults only sparse occupants of L(c) and ignores dense
neighbors; the engine reconciles dense neighbors afterwards.
"""

from __future__ import annotations

from .colors import BLANK


class SparseColoring:
    def __init__(self, graph, decomp, colors, params, rng, metrics):
        self.graph = graph
        self.decomp = decomp
        self.colors = colors
        self.params = params
        self.rng = rng
        self.metrics = metrics
        self.palette = graph.delta + 1
        self.cap = params.loop_cap(graph.n)

    def feasible(self, v: int, c: int) -> bool:
        """True iff no sparse neighbor of v sits in L(c)."""
        contains = self.graph.adj[v]._pos.__contains__
        lst = self.colors.L[c].items
        self.metrics.probes += len(lst)
        self.metrics.work += len(lst) + 1
        for w in lst:
            if contains(w):
                return False
        return True

    def one_shot_coloring(self, vertices) -> list[int]:
        """Each vertex draws one color; keeps it if no neighbor beat it to L(c).

        Processing order is ascending id; only the winner of a sampled
        conflict gets colored.  Returns the colored subset.
        """
        order = sorted(vertices)
        rng = self.rng
        draw = {v: rng.randrange(self.palette) for v in order}
        self.metrics.samples += len(order)
        self.metrics.work += len(order)
        colored = []
        for v in order:
            c = draw[v]
            if self.feasible(v, c):
                self.colors.set_sparse(v, c)
                colored.append(v)
        return colored

    def greedy_coloring(self, vertices) -> None:
        """Color every vertex by rejection sampling, in uniform random order."""
        order = sorted(vertices)
        self.rng.shuffle(order)
        for v in order:
            self._rejection_color(v)

    def _rejection_color(self, v: int) -> int:
        rng = self.rng
        for _ in range(self.cap):
            c = rng.randrange(self.palette)
            self.metrics.samples += 1
            self.metrics.work += 1
            if self.feasible(v, c):
                self.colors.set_sparse(v, c)
                return c
        return self._fallback(v)

    def _fallback(self, v: int) -> int:
        # deterministic scan; a free color exists because the palette
        # exceeds the degree cap
        self.metrics.fallbacks += 1
        used = set()
        of = self.colors.of
        for w in self.graph.adj[v]:
            cw = of[w]
            if cw != BLANK:
                used.add(cw)
        self.metrics.work += self.palette + len(self.graph.adj[v])
        for c in range(self.palette):
            if c not in used:
                self.colors.set_sparse(v, c)
                return c
        raise AssertionError("palette exhausted despite degree cap")

    def color_sparse(self, vertices=None) -> None:
        """Phase-start recoloring of the whole sparse side (all blank)."""
        if vertices is None:
            vertices = self.decomp.sparse_vertices()
        vs = sorted(vertices)
        rng = self.rng
        picked = [v for v in vs if rng.random() < 0.5]
        self.metrics.samples += len(vs)
        colored = set(self.one_shot_coloring(picked))
        self.greedy_coloring([v for v in vs if v not in colored])

    def recolor_sparse(self, v: int) -> int:
        """Drop v's color and rejection-sample a fresh one."""
        self.colors.clear_sparse(v)
        self.metrics.sparse_recolorings += 1
        return self._rejection_color(v)
