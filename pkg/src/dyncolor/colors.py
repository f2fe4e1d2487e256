"""Shared color assignment plus the per-color occupancy lists.

Sparse vertices live in L(c), dense vertices in L_D(c).  Feasibility
checks everywhere iterate an occupancy list and probe adjacency, never
the other way around, so their cost tracks the list length.
"""

from __future__ import annotations

from .sampleset import SampleSet

BLANK = -1


class ColorState:
    def __init__(self, n: int, palette: int):
        self.n = n
        self.palette = palette  # delta + 1
        self.of: list[int] = [BLANK] * n
        self.L: list[SampleSet] = [SampleSet() for _ in range(palette)]
        self.L_D: list[SampleSet] = [SampleSet() for _ in range(palette)]
        self.listeners: list = []  # callables (v, old, new)

    def _fire(self, v: int, old: int, new: int) -> None:
        for fn in self.listeners:
            fn(v, old, new)

    def set_sparse(self, v: int, c: int) -> None:
        old = self.of[v]
        if old != BLANK:
            self.L[old].discard(v)
        self.of[v] = c
        self.L[c].add(v)
        if self.listeners:
            self._fire(v, old, c)

    def clear_sparse(self, v: int) -> int:
        old = self.of[v]
        if old != BLANK:
            self.L[old].discard(v)
            self.of[v] = BLANK
            if self.listeners:
                self._fire(v, old, BLANK)
        return old

    def set_dense(self, v: int, c: int) -> None:
        old = self.of[v]
        if old != BLANK:
            self.L_D[old].discard(v)
        self.of[v] = c
        self.L_D[c].add(v)
        if self.listeners:
            self._fire(v, old, c)

    def clear_dense(self, v: int) -> int:
        old = self.of[v]
        if old != BLANK:
            self.L_D[old].discard(v)
            self.of[v] = BLANK
            if self.listeners:
                self._fire(v, old, BLANK)
        return old

    def blank_all(self) -> None:
        if self.listeners:
            for v in range(self.n):
                old = self.of[v]
                if old != BLANK:
                    self.of[v] = BLANK
                    self._fire(v, old, BLANK)
        else:
            for v in range(self.n):
                self.of[v] = BLANK
        for s in self.L:
            s.clear()
        for s in self.L_D:
            s.clear()

    def used_colors(self) -> set[int]:
        return {c for c in self.of if c != BLANK}
