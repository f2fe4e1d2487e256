"""Drive an engine from an adversary stream; record and replay traces."""

from __future__ import annotations

from .adversary import make_adversary
from .engine import Engine, EngineConfig
from .errors import Exhausted
from .graph import EdgeUpdate
from .params import ParamSet
from .trace import TraceFile
from .verify import ProperWatch, verify


_HEADER_FIELDS = (
    ("epsilon", float),
    ("tau", float),
    ("nu", float),
    ("delta_matching", float),
    ("phase_len_t", int),
    ("sample_count_k", int),
    ("confidence_c", float),
    ("cap_factor", int),
    ("fire_threshold", float),
    ("dispatch_frac", float),
    ("heavy_frac", float),
    ("regime_frac", float),
    ("floor_frac", float),
    ("seed", int),
)


def params_to_header(params: ParamSet) -> dict[str, str]:
    out = {"profile": params.profile}
    for name, _ in _HEADER_FIELDS:
        val = getattr(params, name)
        out[name] = "none" if val is None else repr(val)
    return out


def params_from_header(hdr: dict[str, str]) -> ParamSet:
    kw = {"profile": hdr.get("profile", "desk")}
    for name, cast in _HEADER_FIELDS:
        raw = hdr.get(name)
        if raw is not None and raw != "none":
            kw[name] = cast(float(raw)) if cast is int else cast(raw)
    return ParamSet(**kw)


def run_stream(
    engine: Engine,
    adversary,
    steps: int,
    watch: bool = False,
    per_update=None,
    audit_every: int = 0,
    record: TraceFile | None = None,
) -> dict:
    """Feed `steps` adversary updates to the engine.

    `watch` attaches the incremental properness oracle; `per_update` is an
    arbitrary callback (engine, update, index); `audit_every` runs the full
    verifier on that stride.  Returns a summary dict.
    """
    view = engine.coloring_view() if adversary.adaptive else None
    watcher = ProperWatch(engine) if watch and engine._baseline is None else None
    audits = 0
    audit_failures: list[str] = []
    deltas: list[tuple[int, int]] | None = None
    if record is not None and record.outputs is None:
        record.outputs = []

    def _capture(v, old, new):
        deltas.append((v, new))

    capturing = False
    if record is not None and engine._baseline is None:
        engine.colors.listeners.append(_capture)
        capturing = True
    done = 0
    exhausted = False
    try:
        for i in range(steps):
            try:
                upd = adversary.next(view)
            except Exhausted:
                exhausted = True
                break
            if capturing:
                deltas = []
            engine.process(upd)
            if watcher is not None:
                watcher.check(upd)
            if record is not None:
                record.updates.append(upd)
                if capturing:
                    record.outputs.append(deltas)
                else:
                    record.outputs.append([])
            if per_update is not None:
                per_update(engine, upd, i)
            if audit_every and (i + 1) % audit_every == 0:
                rep = verify(engine, boundary=(engine._baseline is not None or engine.updates_in_phase == 0))
                audits += 1
                if not rep.passed:
                    audit_failures.append(f"update {i}: {rep.failed_names()}")
            done += 1
    finally:
        if capturing:
            engine.colors.listeners.remove(_capture)
        if watcher is not None:
            engine.colors.listeners.remove(watcher._on_event)
    return {
        "steps": done,
        "exhausted": exhausted,
        "watch_violations": list(watcher.violations) if watcher else None,
        "audits": audits,
        "audit_failures": audit_failures,
        "monochrome_hits": adversary.monochrome_hits,
    }


def build_engine(n: int, delta: int, params: ParamSet, mode: str = "full", strict: bool = False) -> Engine:
    return Engine(n, delta, EngineConfig(params=params, mode=mode, strict=strict))


def record_run(
    n: int,
    delta: int,
    params: ParamSet,
    strategy: str,
    steps: int,
    mode: str = "full",
    adversary_seed: int | None = None,
    branch_log: bool = False,
    **adversary_kw,
) -> tuple[Engine, TraceFile, dict]:
    """Run a fresh engine against an adversary, recording a replayable trace."""
    engine = build_engine(n, delta, params, mode=mode)
    if branch_log and engine._baseline is None:
        engine.dense.branch_log = []
    adversary = make_adversary(
        strategy, n, delta,
        seed=params.seed + 1 if adversary_seed is None else adversary_seed,
        **adversary_kw,
    )
    header = {"n": str(n), "delta": str(delta), "strategy": strategy, "mode": mode}
    header.update(params_to_header(params))
    trace = TraceFile(header=header, outputs=[])
    summary = run_stream(engine, adversary, steps, record=trace)
    return engine, trace, summary


def replay_trace(trace: TraceFile, params: ParamSet | None = None, check: bool = False):
    """Drive a fresh engine through a recorded trace.

    With `check`, recorded per-update color deltas are compared against the
    replayed ones; any divergence is reported (determinism gate).
    """
    hdr = trace.header
    n = int(hdr["n"])
    delta = int(hdr["delta"])
    if params is None:
        params = params_from_header(hdr)
    engine = build_engine(n, delta, params, mode=hdr.get("mode", "full"))
    mismatches: list[int] = []
    deltas: list[tuple[int, int]] = []

    def _capture(v, old, new):
        deltas.append((v, new))

    capturing = check and trace.outputs is not None and engine._baseline is None
    if capturing:
        engine.colors.listeners.append(_capture)
    for i, upd in enumerate(trace.updates):
        if capturing:
            deltas = []
        engine.process(upd)
        if capturing and deltas != trace.outputs[i]:
            mismatches.append(i)
    if capturing:
        engine.colors.listeners.remove(_capture)
    return engine, mismatches
