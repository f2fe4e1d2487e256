import itertools
import random

import pytest

from dyncolor.engine import Engine, EngineConfig
from dyncolor.graph import DynamicGraph, EdgeUpdate, dele, ins
from dyncolor.params import ParamSet


def make_params(eps=0.2, tau=None, seed=0, phase_len=None, k=None, fire=None, **kw):
    return ParamSet(
        epsilon=eps,
        tau=tau,
        seed=seed,
        phase_len_t=phase_len,
        sample_count_k=k,
        fire_threshold=fire,
        **kw,
    )


def make_engine(n, delta, strict=True, mode="full", **param_kw):
    return Engine(n, delta, EngineConfig(params=make_params(**param_kw), mode=mode, strict=strict))


def add_edges(g: DynamicGraph, pairs):
    for u, v in pairs:
        g.apply(ins(u, v))


def clique_edges(vertices):
    return list(itertools.combinations(vertices, 2))


def random_graph(n, delta, m, seed=0, g=None):
    """Random legal graph with m edges (best effort under the cap)."""
    rng = random.Random(seed)
    g = g or DynamicGraph(n, delta)
    tries = 0
    while g.edge_count < m and tries < 50 * m:
        tries += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v or g.has_edge(u, v):
            continue
        if g.degree(u) < delta and g.degree(v) < delta:
            g.apply(ins(u, v))
    return g


def feed_edges(engine, pairs):
    for u, v in pairs:
        engine.process(ins(u, v))


def oracle_fill_tracker(engine):
    """Set friend lists and dense flags exactly from the common-neighbor oracle."""
    tr = engine.tracker
    g = engine.graph
    eps, delta = engine.params.epsilon, g.delta
    for i in range(3):
        thr = (1.0 - (i + 1) * eps) * delta
        for v in range(g.n):
            tr.lists[i][v].clear()
        for u, v in g.edges():
            if g.common_neighbors_exact(u, v) >= thr:
                tr.lists[i][u].add(v)
                tr.lists[i][v].add(u)
        for v in range(g.n):
            tr._set_dense(v, i, len(tr.lists[i][v]) >= thr)


def install_clique(engine, members):
    """Surgically install an almost-clique (exact bookkeeping, no sampling)."""
    dec = engine.decomp
    g = engine.graph
    c = dec._new_clique()
    c.members = set(members)
    for v in members:
        dec.clique_of[v] = c.id
    # recompute every neighbor view from scratch for global consistency
    for x in range(g.n):
        dec.n_s[x] = {u for u in g.adj[x] if dec.clique_of[u] is None}
        dec.n_d[x] = {u for u in g.adj[x] if dec.clique_of[u] is not None}
        nc = {}
        for u in g.adj[x]:
            cid = dec.clique_of[u]
            if cid is not None:
                nc.setdefault(cid, set()).add(u)
        dec.n_c[x] = nc
    cnt = 0
    for v in members:
        miss = {u for u in members if u != v and not g.has_edge(u, v)}
        c.nonedges[v] = miss
        cnt += len(miss)
        c.nprime[v] = {u for u in engine.tracker.lists[2][v] if u in c.members}
    c.nonedge_count = cnt // 2
    return c


def dense_fixture(n, delta, members_lists, holes=(), extra_edges=(), **param_kw):
    """Engine with installed cliques and a full consistent coloring.

    `holes` are in-clique pairs left uninserted (the cliques' non-edges).
    """
    param_kw.setdefault("phase_len", 10**9)  # keep the fixture's phase open
    engine = make_engine(n, delta, **param_kw)
    g = engine.graph
    hole_set = {(min(u, v), max(u, v)) for u, v in holes}
    for members in members_lists:
        for u, v in clique_edges(members):
            if (min(u, v), max(u, v)) in hole_set or g.has_edge(u, v):
                continue
            g.apply(ins(u, v))
    for u, v in extra_edges:
        if not g.has_edge(u, v):
            g.apply(ins(u, v))
    oracle_fill_tracker(engine)
    cliques = [install_clique(engine, m) for m in members_lists]
    engine.rebuild_colors()
    return engine, cliques


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
