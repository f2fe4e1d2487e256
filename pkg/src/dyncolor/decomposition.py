"""Fully dynamic sparse-dense decomposition.

Vertices are partitioned into a sparse set and a dense set, the dense set
into almost-cliques.  Four invariants are maintained at update boundaries:

* Density: a dense vertex is in V_3; a sparse vertex is not in V_1.
* Friendship: a clique member keeps many scale-3 friends inside (counting
  members that left since the clique's creation, bounded by sigma).
* Size: every almost-clique has Theta(delta) members.
* Connectedness: scale-3 friend edges span each almost-clique.

Vertices enter the dense side through dense moves (joining a friend's
clique or founding a new one with their scale-1 friends) and leave
through sparse moves; once a clique has lost enough members it is
dissolved wholesale and its still-dense vertices re-enter via fresh
dense moves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import journal as J
from .errors import InvariantViolation


class AlmostClique:
    __slots__ = (
        "id", "members", "sigma", "nonedges", "nonedge_count",
        "nprime", "partner", "large_regime", "book",
    )

    def __init__(self, cid: int):
        self.id = cid
        self.members: set[int] = set()
        self.sigma = 0
        self.nonedges: dict[int, set[int]] = {}  # per member: non-neighbor partners in C
        self.nonedge_count = 0
        self.nprime: dict[int, set[int]] = {}  # per member: scale-3 friends inside C
        self.partner: dict[int, int] = {}  # non-edge matching, both directions
        self.large_regime = False  # phase-start matching regime
        self.book = None  # per-phase color bookkeeping, owned by dense coloring

    def matching_size(self) -> int:
        return len(self.partner) // 2

    def matching_pairs(self) -> list[tuple[int, int]]:
        return sorted({(min(u, v), max(u, v)) for u, v in self.partner.items()})


@dataclass
class ChangeSet:
    moved_to_dense: list[int] = field(default_factory=list)
    moved_to_sparse: list[int] = field(default_factory=list)
    collapsed: list[int] = field(default_factory=list)
    nonedge_delta: int = 0

    def empty(self) -> bool:
        return not (self.moved_to_dense or self.moved_to_sparse or self.collapsed)


class Decomposition:
    def __init__(self, graph, tracker, params, metrics, strict: bool = False):
        self.graph = graph
        self.tracker = tracker
        self.params = params
        self.metrics = metrics
        self.strict = strict
        n = graph.n
        self.clique_of: list[int | None] = [None] * n
        self.n_s: list[set[int]] = [set() for _ in range(n)]
        self.n_d: list[set[int]] = [set() for _ in range(n)]
        self.n_c: list[dict[int, set[int]]] = [{} for _ in range(n)]
        self.cliques: dict[int, AlmostClique] = {}
        self._next_cid = 0
        self.journal: J.PhaseJournal | None = None  # set by the engine during phases
        delta = graph.delta
        self.friend_floor = (1.0 - params.c3) * delta
        self.collapse_limit = params.collapse_limit(delta)

    # ---- membership ---------------------------------------------------------

    def is_dense(self, v: int) -> bool:
        return self.clique_of[v] is not None

    def clique(self, v: int) -> AlmostClique | None:
        cid = self.clique_of[v]
        return None if cid is None else self.cliques[cid]

    def sparse_vertices(self) -> list[int]:
        return [v for v in range(self.graph.n) if self.clique_of[v] is None]

    # ---- journaled structure helpers ---------------------------------------

    def _nbr_add(self, x: int, w: int) -> None:
        cid = self.clique_of[w]
        jn = self.journal
        if cid is None:
            self.n_s[x].add(w)
            if jn is not None:
                jn.note(J.NS_ADD, x, w)
        else:
            self.n_d[x].add(w)
            self.n_c[x].setdefault(cid, set()).add(w)
            if jn is not None:
                jn.note(J.ND_ADD, x, w)
                jn.note(J.NC_ADD, x, cid, w)

    def _nbr_remove(self, x: int, w: int) -> None:
        cid = self.clique_of[w]
        jn = self.journal
        if cid is None:
            self.n_s[x].discard(w)
            if jn is not None:
                jn.note(J.NS_REM, x, w)
        else:
            self.n_d[x].discard(w)
            s = self.n_c[x].get(cid)
            if s is not None:
                s.discard(w)
                if not s:
                    self.n_c[x].pop(cid)
            if jn is not None:
                jn.note(J.ND_REM, x, w)
                jn.note(J.NC_REM, x, cid, w)

    def note_edge(self, upd) -> None:
        """Neighbor-view bookkeeping for one applied update (no non-edge work)."""
        u, v = upd.u, upd.v
        if upd.insert:
            self._nbr_add(u, v)
            self._nbr_add(v, u)
        else:
            self._nbr_remove(u, v)
            self._nbr_remove(v, u)

    # ---- non-edge list primitives -------------------------------------------

    def _nonedge_add_raw(self, c: AlmostClique, u: int, v: int) -> None:
        c.nonedges.setdefault(u, set()).add(v)
        c.nonedges.setdefault(v, set()).add(u)
        c.nonedge_count += 1

    def _nonedge_remove_raw(self, c: AlmostClique, u: int, v: int) -> None:
        s = c.nonedges.get(u)
        if s is None or v not in s:
            return
        s.discard(v)
        c.nonedges[v].discard(u)
        c.nonedge_count -= 1

    def nonedge_add(self, c: AlmostClique, u: int, v: int) -> None:
        self._nonedge_add_raw(c, u, v)
        self.metrics.nonedge_adjustments += 1
        if self.journal is not None:
            self.journal.note(J.NE_ADD, c.id, u, v)

    def nonedge_remove(self, c: AlmostClique, u: int, v: int) -> None:
        self._nonedge_remove_raw(c, u, v)
        self.metrics.nonedge_adjustments += 1
        if self.journal is not None:
            self.journal.note(J.NE_REM, c.id, u, v)

    def match_add(self, c: AlmostClique, u: int, v: int) -> None:
        c.partner[u] = v
        c.partner[v] = u
        if self.journal is not None:
            self.journal.note(J.MT_ADD, c.id, u, v)

    def match_remove(self, c: AlmostClique, u: int, v: int) -> None:
        c.partner.pop(u, None)
        c.partner.pop(v, None)
        if self.journal is not None:
            self.journal.note(J.MT_REM, c.id, u, v)

    # ---- scale-3 friend view inside cliques ----------------------------------

    def _sync_nprime_pair(self, u: int, v: int) -> None:
        cu, cv = self.clique_of[u], self.clique_of[v]
        if cu is None or cu != cv:
            return
        c = self.cliques[cu]
        if v in self.tracker.lists[2][u]:
            c.nprime[u].add(v)
            c.nprime[v].add(u)
        else:
            c.nprime[u].discard(v)
            c.nprime[v].discard(u)

    def _resync_nprime(self, w: int) -> None:
        cid = self.clique_of[w]
        n3w = self.tracker.lists[2][w]
        if cid is not None:
            c = self.cliques[cid]
            c.nprime[w] = {x for x in n3w if self.clique_of[x] == cid}
            for x in self.n_c[w].get(cid, ()):
                if w in self.tracker.lists[2][x]:
                    c.nprime[x].add(w)
                else:
                    c.nprime[x].discard(w)

    # ---- the update driver ----------------------------------------------------

    def update_decomposition(self, upd, matching_hook=None) -> ChangeSet:
        """Process one applied update end to end (friend tracking, moves).

        `matching_hook(clique, upd)` owns non-edge-list and matching surgery
        for same-clique updates; without one a plain non-edge list update is
        performed.  Runs with journaling off (phase-boundary replay or
        standalone use).
        """
        u, v = upd.u, upd.v
        refresh = self.tracker.maintain_friends(upd)
        self.note_edge(upd)
        base_adj = self.metrics.nonedge_adjustments
        cu, cv = self.clique_of[u], self.clique_of[v]
        if cu is not None and cu == cv:
            c = self.cliques[cu]
            if matching_hook is not None:
                matching_hook(c, upd)
            elif upd.insert:
                if c.partner.get(u) == v:
                    self.match_remove(c, u, v)
                self.nonedge_remove(c, u, v)
            else:
                self.nonedge_add(c, u, v)
            self._sync_nprime_pair(u, v)
        for w in refresh:
            self._resync_nprime(w)
        cs = ChangeSet()
        tracker = self.tracker
        if upd.insert:
            for w in refresh:
                if w in tracker.vsets[0] and self.clique_of[w] is None:
                    cs.moved_to_dense += self.dense_move(w)
        else:
            to_collapse: list[int] = []
            marked: set[int] = set()
            for w in refresh:
                cid = self.clique_of[w]
                if cid is None:
                    continue
                c = self.cliques[cid]
                violates = (w not in tracker.vsets[2]) or (
                    len(c.nprime.get(w, ())) <= self.friend_floor
                )
                if not violates:
                    continue
                c.sigma += 1
                if c.sigma >= self.collapse_limit:
                    if cid not in marked:
                        marked.add(cid)
                        to_collapse.append(cid)
                else:
                    self.sparse_move(w)
                    cs.moved_to_sparse.append(w)
            freed: list[int] = []
            for cid in to_collapse:
                members = self.dissolve(self.cliques[cid])
                cs.collapsed.append(cid)
                cs.moved_to_sparse += members
                freed += members
            for w in sorted(freed):
                if w in tracker.vsets[0] and self.clique_of[w] is None:
                    cs.moved_to_dense += self.dense_move(w)
        cs.nonedge_delta = self.metrics.nonedge_adjustments - base_adj
        return cs

    # ---- moves -----------------------------------------------------------------

    def _new_clique(self) -> AlmostClique:
        c = AlmostClique(self._next_cid)
        self._next_cid += 1
        self.cliques[c.id] = c
        return c

    def dense_move(self, v: int) -> list[int]:
        """Move sparse v (now in V_1) to the dense side with its close friends."""
        n1 = self.tracker.lists[0][v]
        homes: dict[int, int] = {}
        for u in n1:
            cid = self.clique_of[u]
            if cid is not None:
                homes[cid] = homes.get(cid, 0) + 1
        if homes:
            if len(homes) > 1:
                # close friends on the dense side must share one clique; a
                # sampling mis-estimate can break that at small scales
                self.metrics.estimator_gap_events += 1
                if self.strict:
                    raise InvariantViolation(
                        f"dense friends of {v} span cliques {sorted(homes)}"
                    )
            target = max(homes.items(), key=lambda kv: (kv[1], -kv[0]))[0]
            c = self.cliques[target]
            movers = [v] + sorted(u for u in n1 if self.clique_of[u] is None)
        else:
            c = self._new_clique()
            movers = [v] + sorted(n1)
        for w in movers:
            self._join(c, w)
        return movers

    def _join(self, c: AlmostClique, w: int) -> None:
        self.clique_of[w] = c.id
        adj_w = self.graph.adj[w]
        for z in adj_w:
            self.n_s[z].discard(w)
            self.n_d[z].add(w)
            self.n_c[z].setdefault(c.id, set()).add(w)
        n3w = self.tracker.lists[2][w]
        nprime_w = set()
        ne = set()
        for m in c.members:
            if m not in adj_w:
                ne.add(m)
            if m in n3w:
                nprime_w.add(m)
                c.nprime[m].add(w)
        c.members.add(w)
        c.nprime[w] = nprime_w
        c.nonedges[w] = ne
        for m in ne:
            c.nonedges[m].add(w)
        c.nonedge_count += len(ne)
        self.metrics.nonedge_adjustments += len(ne)
        self.metrics.vertex_moves += 1
        self.metrics.work += len(c.members) + len(adj_w)

    def sparse_move(self, v: int) -> None:
        """Move dense v back to the sparse side, scrubbing its clique state."""
        cid = self.clique_of[v]
        c = self.cliques[cid]
        p = c.partner.pop(v, None)
        if p is not None:
            c.partner.pop(p, None)
        c.members.discard(v)
        self.clique_of[v] = None
        for z in self.graph.adj[v]:
            self.n_d[z].discard(v)
            self.n_s[z].add(v)
            s = self.n_c[z].get(cid)
            if s is not None:
                s.discard(v)
                if not s:
                    self.n_c[z].pop(cid)
        mine = c.nonedges.pop(v, set())
        for x in mine:
            c.nonedges[x].discard(v)
        c.nonedge_count -= len(mine)
        self.metrics.nonedge_adjustments += len(mine)
        c.nprime.pop(v, None)
        for x in self.tracker.lists[2][v]:
            if self.clique_of[x] == cid:
                c.nprime[x].discard(v)
        self.metrics.vertex_moves += 1
        self.metrics.work += len(mine) + len(self.graph.adj[v])

    def dissolve(self, c: AlmostClique) -> list[int]:
        """Drop a whole clique; every member returns to the sparse side."""
        members = sorted(c.members)
        for w in members:
            self.clique_of[w] = None
            c.partner.pop(w, None)
        for w in members:
            for z in self.graph.adj[w]:
                self.n_d[z].discard(w)
                self.n_s[z].add(w)
                self.n_c[z].pop(c.id, None)
            self.n_c[w].pop(c.id, None)
        self.metrics.nonedge_adjustments += c.nonedge_count
        self.metrics.vertex_moves += len(members)
        self.cliques.pop(c.id)
        return members

    # ---- verification ------------------------------------------------------------

    def check_invariants(self, boundary: bool = True, drift: int = 0) -> list[str]:
        """Exact audit of the four invariants via oracle common-neighbor counts.

        `drift` loosens thresholds by the number of in-phase updates the
        current state may be away from the last full maintenance pass.
        """
        g = self.graph
        delta = g.delta
        c3 = self.params.c3
        eps, tau = self.params.epsilon, self.params.tau
        out: list[str] = []
        friend_thr = (1.0 - c3) * delta - drift
        dense_floor = (1.0 - c3) * delta - drift
        sparse_scale = eps - 0.75 * tau
        sparse_thr = (1.0 - sparse_scale) * delta + drift

        def oracle_friends(v, thr):
            return sum(
                1 for u in g.adj[v] if g.common_neighbors_exact(u, v) >= thr
            )

        for v in range(g.n):
            cid = self.clique_of[v]
            if cid is not None:
                if oracle_friends(v, friend_thr) < dense_floor:
                    out.append(f"Density: dense vertex {v} lacks scale-3 friends")
            else:
                cnt = sum(
                    1 for u in g.adj[v]
                    if g.common_neighbors_exact(u, v) >= sparse_thr
                )
                if cnt >= sparse_thr:
                    out.append(f"Density: sparse vertex {v} looks scale-1 dense")
        for cid, c in sorted(self.cliques.items()):
            size = len(c.members)
            if not ((1.0 - c3) * delta - drift <= size <= (1.0 + 3.0 * c3) * delta + drift):
                out.append(f"Size: clique {cid} has {size} members")
            for v in sorted(c.members):
                friends_in = sum(
                    1 for u in g.adj[v]
                    if self.clique_of[u] == cid
                    and g.common_neighbors_exact(u, v) >= friend_thr
                )
                if friends_in + c.sigma + drift < (1.0 - c3) * delta:
                    out.append(f"Friendship: vertex {v} in clique {cid}")
            if size > 1 and not self._spans(c, friend_thr):
                out.append(f"Connectedness: clique {cid} not spanned by friend edges")
        return out

    def _spans(self, c: AlmostClique, thr: float) -> bool:
        members = sorted(c.members)
        index = {v: i for i, v in enumerate(members)}
        parent = list(range(len(members)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        g = self.graph
        for v in members:
            for u in g.adj[v]:
                if u > v and self.clique_of[u] == c.id:
                    if g.common_neighbors_exact(u, v) >= thr:
                        a, b = find(index[u]), find(index[v])
                        if a != b:
                            parent[a] = b
        root = find(0)
        return all(find(i) == root for i in range(len(members)))

    def check_structures(self) -> list[str]:
        """Exact recomputation of every maintained list against the graph."""
        g = self.graph
        out = []
        for v in range(g.n):
            ns = {u for u in g.adj[v] if self.clique_of[u] is None}
            nd = {u for u in g.adj[v] if self.clique_of[u] is not None}
            if ns != self.n_s[v]:
                out.append(f"n_s mismatch at {v}")
            if nd != self.n_d[v]:
                out.append(f"n_d mismatch at {v}")
            want_nc = {}
            for u in g.adj[v]:
                cid = self.clique_of[u]
                if cid is not None:
                    want_nc.setdefault(cid, set()).add(u)
            if want_nc != self.n_c[v]:
                out.append(f"n_c mismatch at {v}")
            cid = self.clique_of[v]
            if cid is not None and v not in self.cliques[cid].members:
                out.append(f"clique pointer of {v} dangles")
        for cid, c in self.cliques.items():
            for v in c.members:
                if self.clique_of[v] != cid:
                    out.append(f"member {v} of clique {cid} points elsewhere")
            want = {}
            cnt = 0
            for v in c.members:
                miss = {u for u in c.members if u != v and not g.has_edge(u, v)}
                want[v] = miss
                cnt += len(miss)
            if want != {v: c.nonedges.get(v, set()) for v in c.members} or any(
                k not in c.members for k in c.nonedges
            ):
                out.append(f"non-edge lists of clique {cid} inexact")
            if c.nonedge_count != cnt // 2:
                out.append(f"non-edge count of clique {cid} off")
            for u, v in c.partner.items():
                if c.partner.get(v) != u:
                    out.append(f"matching of clique {cid} asymmetric at {u}")
                if g.has_edge(u, v) or u not in c.members or v not in c.members:
                    out.append(f"matched pair ({u},{v}) of clique {cid} invalid")
        return out

    def snapshot(self) -> dict:
        return {
            "sparse": sum(1 for c in self.clique_of if c is None),
            "dense": sum(1 for c in self.clique_of if c is not None),
            "cliques": [
                {
                    "id": cid,
                    "size": len(c.members),
                    "sigma": c.sigma,
                    "nonedges": c.nonedge_count,
                    "matching": c.matching_size(),
                    "large_regime": c.large_regime,
                }
                for cid, c in sorted(self.cliques.items())
            ],
        }
