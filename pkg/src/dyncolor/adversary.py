"""Update-stream generators, legal by construction.

Each adversary mirrors the graph it has produced so far, so every emitted
update is valid for the engine's degree cap.  Adaptive strategies see
only the engine's public coloring view, never its internals or
randomness.
"""

from __future__ import annotations

import random

from .errors import Exhausted
from .graph import DynamicGraph, EdgeUpdate

STRATEGIES = (
    "adaptive-monochrome",
    "oblivious-random",
    "deletion-heavy",
    "clique-churn",
    "scripted",
)


class Adversary:
    """Base: keeps a private mirror of the emitted stream."""

    adaptive = False

    def __init__(self, n: int, delta: int, seed: int = 0):
        self.n = n
        self.delta = delta
        self.mirror = DynamicGraph(n, delta, track_masks=False)
        self.rng = random.Random(seed)
        self.monochrome_hits = 0
        self.emitted = 0

    def next(self, view=None) -> EdgeUpdate:
        upd = self._propose(view)
        self.mirror.apply(upd)
        self.emitted += 1
        return upd

    def _propose(self, view) -> EdgeUpdate:
        raise NotImplementedError

    # helpers ------------------------------------------------------------

    def _random_insert(self, tries: int = 50) -> EdgeUpdate | None:
        g, rng = self.mirror, self.rng
        for _ in range(tries):
            u = rng.randrange(self.n)
            v = rng.randrange(self.n)
            if u == v or g.has_edge(u, v):
                continue
            if g.degree(u) < self.delta and g.degree(v) < self.delta:
                return EdgeUpdate(u, v, True)
        return None

    def _random_delete(self, tries: int = 50) -> EdgeUpdate | None:
        g, rng = self.mirror, self.rng
        if g.edge_count == 0:
            return None
        for _ in range(tries):
            u = rng.randrange(self.n)
            if g.degree(u):
                v = g.adj[u].sample(rng)
                return EdgeUpdate(u, v, False)
        return None


class ObliviousRandom(Adversary):
    def __init__(self, n, delta, seed=0, p_insert=0.7):
        super().__init__(n, delta, seed)
        self.p_insert = p_insert

    def _propose(self, view):
        want_insert = self.rng.random() < self.p_insert
        first = self._random_insert if want_insert else self._random_delete
        second = self._random_delete if want_insert else self._random_insert
        upd = first() or second()
        if upd is None:
            raise Exhausted("no legal update found")
        return upd


class DeletionHeavy(ObliviousRandom):
    def __init__(self, n, delta, seed=0):
        super().__init__(n, delta, seed, p_insert=0.35)


class AdaptiveMonochrome(Adversary):
    """Greedily inserts edges between same-colored, non-adjacent vertices.

    Picks a random vertex, reads its color class from the public view and
    tries to pair it with another occupant; falls back to deleting a
    random edge when no monochromatic insertion is found.
    """

    adaptive = True

    def __init__(self, n, delta, seed=0, tries=24):
        super().__init__(n, delta, seed)
        self.tries = tries

    def _propose(self, view):
        if view is not None:
            g, rng = self.mirror, self.rng
            for _ in range(self.tries):
                u = rng.randrange(self.n)
                if g.degree(u) >= self.delta:
                    continue
                mates = view.occupants(view.color_of(u))
                if len(mates) < 2:
                    continue
                v = mates[rng.randrange(len(mates))]
                if v == u or g.has_edge(u, v) or g.degree(v) >= self.delta:
                    continue
                self.monochrome_hits += 1
                return EdgeUpdate(u, v, True)
        # stuck: only deletions are allowed, never an off-color insertion
        upd = self._random_delete()
        if upd is None:
            raise Exhausted("no monochromatic insertion and nothing to delete")
        return upd


class CliqueChurn(Adversary):
    """Builds a near-clique on a random target set, churns it, erodes it.

    After assembling the densest legal graph on the target (a clique cap
    permitting, minus a matching when the target exceeds delta + 1), it
    alternates deletions and reinsertions inside the target for a while,
    then erodes a fraction of it and picks a fresh target.  Exercises
    dense moves, non-edge and matching churn, and clique collapse.
    """

    def __init__(self, n, delta, seed=0, target_size=None, erode_frac=0.5, churn_steps=None):
        super().__init__(n, delta, seed)
        self.target_size = min(target_size or delta + 1, n)
        self.erode_frac = erode_frac
        self.churn_steps = (
            churn_steps if churn_steps is not None else 4 * self.target_size
        )
        self._target: list[int] = []
        self._missing: list[tuple[int, int]] = []
        self._built: list[tuple[int, int]] = []
        self._stage = "build"
        self._churn_left = 0
        self._erode_left = 0
        self._pick_target()

    def _pick_target(self):
        self._target = self.rng.sample(range(self.n), self.target_size)
        g = self.mirror
        self._missing = [
            (u, v)
            for i, u in enumerate(self._target)
            for v in self._target[i + 1 :]
            if not g.has_edge(u, v)
        ]
        self.rng.shuffle(self._missing)
        self._built = []
        self._stage = "build"
        self._churn_left = self.churn_steps

    def _inside_edges(self):
        g = self.mirror
        return [
            (u, v)
            for i, u in enumerate(self._target)
            for v in self._target[i + 1 :]
            if g.has_edge(u, v)
        ]

    def _propose(self, view):
        g, rng = self.mirror, self.rng
        while True:
            if self._stage == "build":
                while self._missing:
                    u, v = self._missing.pop()
                    if g.has_edge(u, v):
                        continue
                    if g.degree(u) < self.delta and g.degree(v) < self.delta:
                        self._built.append((u, v))
                        return EdgeUpdate(u, v, True)
                self._stage = "churn"
                continue
            if self._stage == "churn":
                if self._churn_left <= 0:
                    self._stage = "erode"
                    self.rng.shuffle(self._built)
                    self._erode_left = max(1, int(len(self._built) * self.erode_frac))
                    continue
                self._churn_left -= 1
                # alternate: knock one inside edge out, or patch one back in
                inside = self._inside_edges()
                holes = [
                    (u, v)
                    for i, u in enumerate(self._target)
                    for v in self._target[i + 1 :]
                    if not g.has_edge(u, v)
                    and g.degree(u) < self.delta
                    and g.degree(v) < self.delta
                ]
                if holes and (not inside or self._churn_left % 2 == 0):
                    return EdgeUpdate(*holes[rng.randrange(len(holes))], True)
                if inside:
                    return EdgeUpdate(*inside[rng.randrange(len(inside))], False)
                continue
            if self._stage == "erode":
                while self._erode_left > 0 and self._built:
                    u, v = self._built.pop()
                    self._erode_left -= 1
                    if g.has_edge(u, v):
                        return EdgeUpdate(u, v, False)
                self._pick_target()
                continue
            break
        upd = self._random_insert() or self._random_delete()
        if upd is None:
            raise Exhausted("no legal update found")
        return upd


class Scripted(Adversary):
    def __init__(self, n, delta, updates, seed=0):
        super().__init__(n, delta, seed)
        self._queue = list(updates)
        self._at = 0

    def _propose(self, view):
        if self._at >= len(self._queue):
            raise Exhausted("script finished")
        upd = self._queue[self._at]
        self._at += 1
        return upd


def make_adversary(kind: str, n: int, delta: int, seed: int = 0, **kw) -> Adversary:
    if kind == "adaptive-monochrome":
        return AdaptiveMonochrome(n, delta, seed, **kw)
    if kind == "oblivious-random":
        return ObliviousRandom(n, delta, seed, **kw)
    if kind == "deletion-heavy":
        return DeletionHeavy(n, delta, seed)
    if kind == "clique-churn":
        return CliqueChurn(n, delta, seed, **kw)
    if kind == "scripted":
        return Scripted(n, delta, kw.pop("updates"), seed)
    raise ValueError(f"unknown strategy {kind!r}")
