"""Coloring of almost-cliques.

Step one pairs up non-adjacent members (a matching over the clique's
non-edges) and gives each matched pair one shared color, saving palette.
Step two keeps every remaining member matched to a private color through
short augmenting paths: a direct assignment, a length-3 swap through a
random colored member, or a length-5 rotation through two of them.

Per clique a color book tracks: an[c] (pair-shared colors with the pair),
A (colors unused by any member), usage (color -> members), mp (private
color -> member), big_l (members outside the non-edge matching),
uncolored (blank members of big_l), t_c / heavy (counts of edges to
equally-colored sparse vertices, and the colors where that count is
large).  R, the colors not shared by any pair, is the complement of an.
"""

from __future__ import annotations

from .colors import BLANK
from .errors import EmptyPalette, IterationCapExceeded
from .sampleset import SampleSet


class CliqueBook:
    __slots__ = ("an", "A", "usage", "mp", "big_l", "uncolored", "t_c", "heavy")

    def __init__(self, palette: int, big_l) -> None:
        self.an: dict[int, tuple[int, int]] = {}
        self.A = SampleSet(range(palette))
        self.usage: dict[int, set[int]] = {}
        self.mp: dict[int, int] = {}
        self.big_l = SampleSet(big_l)
        self.uncolored: set[int] = set(big_l)
        self.t_c: dict[int, int] = {}
        self.heavy: set[int] = set()


class DenseColoring:
    def __init__(self, graph, decomp, colors, params, rng, metrics):
        self.graph = graph
        self.decomp = decomp
        self.colors = colors
        self.params = params
        self.rng = rng
        self.metrics = metrics
        delta = graph.delta
        self.palette = delta + 1
        self.cap = params.loop_cap(graph.n)
        self.dispatch_limit = params.dispatch_limit(delta)
        self.heavy_limit = params.heavy_limit(delta)
        self.regime_limit = params.regime_limit(delta)
        self.branch_counts: dict[int, dict[str, int]] = {}  # clique -> branch tally
        self.branch_log: list[tuple[int, str]] | None = None  # set to [] to collect

    # ---- color book primitives ------------------------------------------------

    def build_book(self, clique) -> CliqueBook:
        big_l = sorted(m for m in clique.members if m not in clique.partner)
        clique.book = CliqueBook(self.palette, big_l)
        return clique.book

    def _set_member(self, clique, v: int, c: int) -> None:
        self.colors.set_dense(v, c)
        book = clique.book
        users = book.usage.get(c)
        if users is None:
            book.usage[c] = {v}
            book.A.discard(c)
        else:
            users.add(v)

    def _clear_member(self, clique, v: int) -> int:
        old = self.colors.clear_dense(v)
        if old != BLANK:
            book = clique.book
            users = book.usage.get(old)
            if users is not None:
                users.discard(v)
                if not users:
                    book.usage.pop(old)
                    book.A.add(old)
            if book.mp.get(old) == v:
                book.mp.pop(old)
        return old

    def assign_private(self, clique, v: int, c: int) -> None:
        self._set_member(clique, v, c)
        book = clique.book
        book.mp[c] = v
        book.uncolored.discard(v)
        self.metrics.dense_recolorings += 1

    def release_private(self, clique, v: int) -> int:
        old = self._clear_member(clique, v)
        book = clique.book
        if old != BLANK and book.mp.get(old) == v:
            book.mp.pop(old)
        if v in book.big_l:
            book.uncolored.add(v)
        return old

    def enter_big_l(self, clique, v: int) -> None:
        book = clique.book
        book.big_l.add(v)
        if self.colors.of[v] == BLANK:
            book.uncolored.add(v)

    def leave_big_l(self, clique, v: int) -> None:
        book = clique.book
        book.big_l.discard(v)
        book.uncolored.discard(v)

    # ---- feasibility scans ------------------------------------------------------

    def full_feasible(self, v: int, c: int, exclude=()) -> bool:
        """No neighbor of v, sparse or dense, holds color c (minus `exclude`)."""
        pos = self.graph.adj[v]._pos
        ls = self.colors.L[c].items
        ld = self.colors.L_D[c].items
        self.metrics.probes += len(ls) + len(ld)
        self.metrics.work += len(ls) + len(ld) + 1
        for w in ls:
            if w in pos:
                return False
        for w in ld:
            if w in pos and w not in exclude:
                return False
        return True

    def _pair_external_feasible(self, clique, u: int, v: int, c: int) -> bool:
        """No occupant of L(c) or L_D(c) outside the clique neighbors u or v."""
        posu = self.graph.adj[u]._pos
        posv = self.graph.adj[v]._pos
        ls = self.colors.L[c].items
        ld = self.colors.L_D[c].items
        self.metrics.probes += len(ls) + len(ld)
        self.metrics.work += len(ls) + len(ld) + 1
        for w in ls:
            if w in posu or w in posv:
                return False
        cid = clique.id
        clique_of = self.decomp.clique_of
        for w in ld:
            if clique_of[w] != cid and (w in posu or w in posv):
                return False
        return True

    # ---- non-edge matching ---------------------------------------------------------

    def init_nonedge_matchings(self) -> None:
        """Phase-boundary normalization of every clique's non-edge matching.

        Small matchings are rebuilt from scratch as greedy maximal
        matchings; surviving large ones are greedily extended, which also
        leaves them maximal.  The large/small regime for the coming phase
        is then frozen per clique.
        """
        for cid in sorted(self.decomp.cliques):
            clique = self.decomp.cliques[cid]
            if clique.matching_size() < self.regime_limit:
                clique.partner.clear()
            self._extend_maximal(clique)
            clique.large_regime = clique.matching_size() > self.regime_limit

    def _extend_maximal(self, clique) -> None:
        partner = clique.partner
        for u in sorted(clique.nonedges):
            if u in partner:
                continue
            for v in sorted(clique.nonedges[u]):
                if v not in partner:
                    partner[u] = v
                    partner[v] = u
                    break
        self.metrics.work += clique.nonedge_count + 1

    def maintain_matching(self, clique, upd) -> list[tuple[int, int]]:
        """Keep the matching maximal across one same-clique update.

        An insertion kills the pair (u,v) if matched and tries to rematch
        each endpoint with a free non-neighbor; a deletion matches the new
        non-edge when both sides are free.  Returns the pairs added.
        """
        u, v = upd.u, upd.v
        dec = self.decomp
        added: list[tuple[int, int]] = []
        if upd.insert:
            if clique.partner.get(u) == v:
                dec.match_remove(clique, u, v)
            dec.nonedge_remove(clique, u, v)
            for w in (u, v):
                if w in clique.partner:
                    continue
                cands = clique.nonedges.get(w)
                if not cands:
                    continue
                self.metrics.work += len(cands)
                for x in sorted(cands):
                    if x not in clique.partner:
                        dec.match_add(clique, w, x)
                        added.append((w, x))
                        break
        else:
            dec.nonedge_add(clique, u, v)
            if u not in clique.partner and v not in clique.partner:
                dec.match_add(clique, u, v)
                added.append((u, v))
        return added

    def update_non_edges(self, clique, upd):
        """Same-clique update entry point; returns (left, entered, new_pairs).

        `left` are vertices that stopped being matched endpoints, `entered`
        the endpoints of newly matched pairs.  In the large regime the
        matching is never extended, only trimmed by insertions.
        """
        u, v = upd.u, upd.v
        dec = self.decomp
        left: list[int] = []
        entered: list[int] = []
        pairs: list[tuple[int, int]] = []
        if clique.large_regime:
            if upd.insert:
                if clique.partner.get(u) == v:
                    dec.match_remove(clique, u, v)
                    left = [u, v]
                dec.nonedge_remove(clique, u, v)
            else:
                dec.nonedge_add(clique, u, v)
        else:
            was = {w: (w in clique.partner) for w in (u, v)}
            pairs = self.maintain_matching(clique, upd)
            for w in (u, v):
                if was[w] and w not in clique.partner:
                    left.append(w)
            entered = [x for pair in pairs for x in pair]
        return left, entered, pairs

    # ---- pair recoloring -------------------------------------------------------------

    def recolor_non_edge(self, clique, u: int, v: int) -> int:
        """Give the matched non-adjacent pair (u,v) one fresh shared color.

        Rejection-samples a color that no pair of the clique holds and no
        occupant adjacent to u or v outside the clique holds.  The caller
        must evict any clique member privately holding the result.
        """
        if clique.partner.get(u) != v:
            raise ValueError(f"({u},{v}) is not a matched non-edge")
        book = clique.book
        for w in (u, v):
            old = self.colors.of[w]
            if old != BLANK:
                pair = book.an.get(old)
                if pair is not None and w in pair:
                    book.an.pop(old)
                self._clear_member(clique, w)
        rng = self.rng
        for _ in range(self.cap):
            c = rng.randrange(self.palette)
            self.metrics.samples += 1
            if c in book.an:
                continue
            if self._pair_external_feasible(clique, u, v, c):
                book.an[c] = (u, v)
                self._set_member(clique, u, c)
                self._set_member(clique, v, c)
                self.metrics.dense_recolorings += 2
                return c
        raise IterationCapExceeded("recolor_non_edge", (u, v))

    # ---- edge counters ------------------------------------------------------------------

    def tc_shift(self, clique, c: int, d: int) -> None:
        if c == BLANK or clique.book is None:
            return
        book = clique.book
        t = book.t_c.get(c, 0) + d
        if t:
            book.t_c[c] = t
        else:
            book.t_c.pop(c, None)
        if t > self.heavy_limit:
            book.heavy.add(c)
        else:
            book.heavy.discard(c)

    def update_edge_counts(self, v: int, old: int, new: int) -> None:
        """Shift every clique's counters after sparse v went old -> new."""
        cliques = self.decomp.cliques
        for cid, nbrs in self.decomp.n_c[v].items():
            cnt = len(nbrs)
            if not cnt:
                continue
            clique = cliques[cid]
            self.tc_shift(clique, old, -cnt)
            self.tc_shift(clique, new, cnt)
            self.metrics.work += 2

    def rebuild_edge_counts(self) -> None:
        for clique in self.decomp.cliques.values():
            clique.book.t_c.clear()
            clique.book.heavy.clear()
        of = self.colors.of
        cliques = self.decomp.cliques
        for v in range(self.graph.n):
            if self.decomp.clique_of[v] is not None:
                continue
            c = of[v]
            if c == BLANK:
                continue
            for cid, nbrs in self.decomp.n_c[v].items():
                if nbrs:
                    self.tc_shift(cliques[cid], c, len(nbrs))
                    self.metrics.work += 1

    # ---- private-color matching (step two) ----------------------------------------------

    def match(self, v: int) -> None:
        """Color the blank big-L vertex v via the branch fitting the clique."""
        clique = self.decomp.clique(v)
        if clique.matching_size() >= self.dispatch_limit:
            branch = "random"
            self.metrics.random_match_calls += 1
        elif len(clique.members) > self.graph.delta:
            branch = "large"
            self.metrics.match_large_calls += 1
        else:
            branch = "small"
            self.metrics.match_small_calls += 1
        tally = self.branch_counts.setdefault(clique.id, {})
        tally[branch] = tally.get(branch, 0) + 1
        if self.branch_log is not None:
            self.branch_log.append((clique.id, branch))
        if branch == "random":
            self.random_match(v)
        elif branch == "large":
            self.match_large(v)
        else:
            self.match_small(v)

    def random_match(self, v: int) -> None:
        clique = self.decomp.clique(v)
        book = clique.book
        rng = self.rng
        for _ in range(self.cap):
            c = rng.randrange(self.palette)
            self.metrics.samples += 1
            if c not in book.A:
                continue
            if self.full_feasible(v, c):
                self.assign_private(clique, v, c)
                return
        raise IterationCapExceeded("random_match", v)

    def _lowest_light_unused(self, book) -> int:
        heavy = book.heavy
        best = -1
        for c in book.A.items:
            if c not in heavy and (best < 0 or c < best):
                best = c
        self.metrics.work += len(book.A)
        if best < 0:
            raise EmptyPalette("no unassigned light color left")
        return best

    def match_large(self, v: int) -> None:
        """Direct assignment or a length-3 swap through a random member."""
        clique = self.decomp.clique(v)
        book = clique.book
        rng = self.rng
        for _ in range(self.cap):
            c = self._lowest_light_unused(book)
            if self.full_feasible(v, c):
                self.assign_private(clique, v, c)
                return
            w = book.big_l.sample(rng)
            self.metrics.samples += 1
            if w == v:
                continue
            cw = self.colors.of[w]
            if cw == BLANK:
                continue
            if self.full_feasible(w, c) and self.full_feasible(v, cw, exclude=(w,)):
                self.release_private(clique, w)
                self.assign_private(clique, v, cw)
                self.assign_private(clique, w, c)
                return
        raise IterationCapExceeded("match_large", v)

    def match_small(self, v: int) -> None:
        """Length-5 rotation: v takes c(w), w takes c(u), u takes a fresh color.

        The inner loop hunts for a member u and unused color c' with c'
        feasible for u.  If that member is itself blank it simply takes c'
        (when u is v this is the direct assignment) and the hunt restarts.
        """
        clique = self.decomp.clique(v)
        book = clique.book
        rng = self.rng
        colors = self.colors
        for _ in range(self.cap):
            if not len(book.A) or not len(book.big_l):
                break
            u = book.big_l.sample(rng)
            c_new = book.A.sample(rng)
            self.metrics.samples += 2
            if not self.full_feasible(u, c_new):
                continue
            cu = colors.of[u]
            if cu == BLANK:
                self.assign_private(clique, u, c_new)
                if u == v:
                    return
                continue
            w = book.big_l.sample(rng)
            self.metrics.samples += 1
            if w == u or w == v:
                continue
            cw = colors.of[w]
            if cw == BLANK:
                continue
            if self.full_feasible(w, cu, exclude=(u,)) and self.full_feasible(
                v, cw, exclude=(w,)
            ):
                self.release_private(clique, u)
                self.release_private(clique, w)
                self.assign_private(clique, v, cw)
                self.assign_private(clique, w, cu)
                self.assign_private(clique, u, c_new)
                return
        raise IterationCapExceeded("match_small", v)

    # ---- audits ------------------------------------------------------------------------

    def palette_identity_gap(self, clique) -> int:
        """|A| - (delta + 1 - |C| + |matching| + |blank big-L|); zero when consistent."""
        book = clique.book
        k = self.palette - len(clique.members)
        return len(book.A) - (k + clique.matching_size() + len(book.uncolored))

    def clique_rows(self) -> list[dict]:
        rows = []
        for cid in sorted(self.decomp.cliques):
            c = self.decomp.cliques[cid]
            book = c.book
            tally = self.branch_counts.get(cid, {})
            rows.append(
                {
                    "clique": cid,
                    "size": len(c.members),
                    "k": self.palette - len(c.members),
                    "matching": c.matching_size(),
                    "big_l": len(book.big_l) if book else 0,
                    "available": len(book.A) if book else 0,
                    "heavy": len(book.heavy) if book else 0,
                    "nonedges": c.nonedge_count,
                    "large_regime": c.large_regime,
                    "random_matches": tally.get("random", 0),
                    "large_matches": tally.get("large", 0),
                    "small_matches": tally.get("small", 0),
                }
            )
        return rows
