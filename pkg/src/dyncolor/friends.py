"""Sampling-based maintenance of close-friend edges and dense vertices.

For scales c_i = i*eps + tau (i in {1,2,3}) the tracker keeps per-vertex
lists N_i(v) of neighbors whose common neighborhood with v is large, and
flags is_dense(v, i) plus the sets V_1, V_2, V_3 of vertices with many
such friends.  Friendship at a stricter scale implies friendship at a
looser one, so N_1(v) <= N_2(v) <= N_3(v) <= N(v).

Recomputation is driven by per-vertex update counters: each vertex fires
a full refresh of its incident estimates after enough direct updates
(touching it) or indirect updates (a neighbor fired a direct refresh).
Indirect credit is propagated only by direct firings, never by indirect
ones, which is what keeps the amortized work bounded.
"""

from __future__ import annotations

import math

from .errors import InvariantViolation


class FriendTracker:
    def __init__(self, graph, params, rng, metrics):
        self.graph = graph
        self.params = params
        self.rng = rng
        self.metrics = metrics
        n = graph.n
        self.n = n
        self.lists = [[set() for _ in range(n)] for _ in range(3)]  # N_1..N_3
        self.dense_flag = [bytearray(n) for _ in range(3)]
        self.vsets = [set(), set(), set()]  # V_1..V_3
        self.direct = [0] * n
        self.indirect = [0] * n
        self.k = params.sample_count(n)
        self.fire_limit = params.fire_limit(graph.delta)
        eps, tau, delta = params.epsilon, params.tau, graph.delta
        # sample-count acceptance thresholds, internal calls use tau/2
        self._maintain_thr = [
            max(0.0, self.k * (1.0 - ((i + 1) * eps - tau / 4.0))) for i in range(3)
        ]
        self._dense_thr = [max(0.0, (1.0 - (i + 1) * eps) * delta) for i in range(3)]

    # ---- scale resolution -------------------------------------------------

    def _scale_index(self, eps: float) -> int:
        base = self.params.epsilon
        for i in range(3):
            if math.isclose(eps, (i + 1) * base, rel_tol=1e-9):
                return i
        raise ValueError(f"eps {eps} is not one of the tracked scales")

    # ---- estimation core ----------------------------------------------------

    def _sample_count(self, u: int, v: int) -> int:
        """Number of k uniform samples from N(u) that also neighbor v."""
        items = self.graph.adj[u].items
        if not items:
            return 0  # isolated endpoint: estimate is zero
        self.metrics.samples += self.k
        self.metrics.work += self.k
        contains = self.graph.adj[v]._pos.__contains__
        return sum(map(contains, self.rng.choices(items, k=self.k)))

    def determine_friend(self, u: int, v: int, eps: float, tau: float) -> bool:
        """Re-estimate one edge at one scale and update that scale's lists.

        Adds the pair iff the empirical estimate of |N(u) cap N(v)| is at
        least (1 - (eps - tau/2)) * delta.  Sampling is from N(u).
        """
        if not self.graph.has_edge(u, v):
            raise ValueError(f"({u},{v}) is not an edge")
        i = self._scale_index(eps)
        cnt = self._sample_count(u, v)
        accept = cnt >= self.k * (1.0 - (eps - tau / 2.0))
        lst = self.lists[i]
        if accept:
            lst[u].add(v)
            lst[v].add(u)
        else:
            lst[u].discard(v)
            lst[v].discard(u)
        return accept

    def _refresh_pair(self, u: int, v: int) -> None:
        # one sample draw serves all three scales; each scale's threshold
        # test sees a valid k-sample estimate
        cnt = self._sample_count(u, v)
        for i in range(3):
            lst = self.lists[i]
            if cnt >= self._maintain_thr[i]:
                lst[u].add(v)
                lst[v].add(u)
            else:
                lst[u].discard(v)
                lst[v].discard(u)

    def _drop_pair(self, u: int, v: int) -> None:
        for i in range(3):
            self.lists[i][u].discard(v)
            self.lists[i][v].discard(u)

    # ---- dense flags --------------------------------------------------------

    def _set_dense(self, v: int, i: int, flag: bool) -> None:
        self.dense_flag[i][v] = 1 if flag else 0
        if flag:
            self.vsets[i].add(v)
        else:
            self.vsets[i].discard(v)

    def determine_dense(self, v: int, eps: float, tau: float) -> None:
        """Re-test every incident edge at one scale, then set the flag."""
        i = self._scale_index(eps)
        for u in list(self.graph.adj[v].items):
            self.determine_friend(u, v, eps, tau)
        self._set_dense(v, i, len(self.lists[i][v]) >= (1.0 - eps) * self.graph.delta)

    def update_vertex(self, v: int) -> None:
        """Full refresh of v: re-estimate all incident edges at all scales."""
        for u in list(self.graph.adj[v].items):
            self._refresh_pair(u, v)
        for i in range(3):
            self._set_dense(v, i, len(self.lists[i][v]) >= self._dense_thr[i])
        self.metrics.tracker_updates += 1

    # ---- per-update maintenance ---------------------------------------------

    def maintain_friends(self, upd) -> list[int]:
        """Process one (already applied) edge update; returns the refresh set U.

        Direct counters of both endpoints advance; the touched pair is
        re-estimated (insertion) or dropped (deletion).  Vertices whose
        direct counter reaches the firing limit are refreshed and spread
        one indirect credit to each neighbor; neighbors reaching the limit
        refresh too but spread nothing further.
        """
        u, v = upd.u, upd.v
        self.direct[u] += 1
        self.direct[v] += 1
        if upd.insert:
            self._refresh_pair(u, v)
        else:
            self._drop_pair(u, v)
        fired: list[int] = []
        for w in (u, v):
            if self.direct[w] >= self.fire_limit:
                self.update_vertex(w)
                self.direct[w] = 0
                fired.append(w)
        result = list(fired)
        if fired:
            spread = set()
            for y in fired:
                spread.update(self.graph.adj[y].items)
            for z in sorted(spread):
                self.indirect[z] += 1
                if self.indirect[z] >= self.fire_limit:
                    self.update_vertex(z)
                    self.indirect[z] = 0
                    if z not in fired:
                        result.append(z)
        return result

    # ---- introspection -------------------------------------------------------

    def friend_list(self, v: int, i: int) -> set[int]:
        return self.lists[i - 1][v]

    def in_vset(self, v: int, i: int) -> bool:
        return bool(self.dense_flag[i - 1][v])

    def check_consistency(self) -> None:
        for i in range(3):
            for v in range(self.n):
                for u in self.lists[i][v]:
                    if not self.graph.has_edge(u, v):
                        raise InvariantViolation(f"stale friend pair ({u},{v})")
                    if v not in self.lists[i][u]:
                        raise InvariantViolation(f"asymmetric friend pair ({u},{v})")
            for v in self.vsets[i]:
                if not self.dense_flag[i][v]:
                    raise InvariantViolation(f"vset/flag mismatch at {v}")
