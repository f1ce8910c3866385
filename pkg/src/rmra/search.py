"""Staged exhaustive aperture sweep for robust sparse arrays.

For a given sensor count the engine sweeps candidate apertures upward
from L = n.  A stage enumerates every placement of the free sensors
into the interior grid slots (endpoints, and optionally short uniform
runs at both ends, are pre-placed), validates each candidate for
two-fold redundancy and single-failure robustness, and the sweep stops
at the first aperture with no valid array: the last non-empty stage
holds the maximum-aperture arrays.

Stages are partitioned into fixed rank intervals of the candidate
stream, so results are deterministic for any worker count and a run can
resume from a checkpoint at the last completed interval.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable

import numpy as np

from .coarray import SensorArray
from .combinatorics import binomial, unrank
from .errors import ConfigError
from .robustness import assess

__all__ = [
    "Fixation",
    "ENDPOINTS_ONLY",
    "STANDARD",
    "SearchConfig",
    "StageResult",
    "SearchOutcome",
    "ProgressUpdate",
    "search_space_size",
    "search_stage",
    "find_optimal",
    "find_near_optimal",
]

DEFAULT_BUDGET = 2_000_000_000

# rank-interval width; fixed so interval boundaries, and therefore
# outcomes, do not depend on the worker count
_CHUNK = 1 << 21

# rows of the per-call valid-array buffer handed to the kernel
_BUFFER_ROWS = 4096


@dataclass(frozen=True, slots=True)
class Fixation:
    """Pre-placed sensors: a uniform prefix 0..p-1 and suffix at the top.

    Both runs include their endpoint, so every fixation pins 0 and L.
    ``Fixation(1, 1)`` fixes the endpoints only; ``Fixation(3, 2)`` is
    the standard choice that also pins 1, 2 and L-1, which any valid
    array must contain anyway to cover the corner lags twice.
    """

    prefix_len: int = 1
    suffix_len: int = 1

    def __post_init__(self):
        if self.prefix_len < 1 or self.suffix_len < 1:
            raise ConfigError("fixation must pin at least both endpoints")

    @property
    def fixed_count(self) -> int:
        return self.prefix_len + self.suffix_len

    def prefix_positions(self) -> tuple[int, ...]:
        return tuple(range(self.prefix_len))

    def suffix_positions(self, L: int) -> tuple[int, ...]:
        return tuple(range(L - self.suffix_len + 1, L + 1))

    def label(self) -> str:
        if (self.prefix_len, self.suffix_len) == (1, 1):
            return "endpoints"
        if (self.prefix_len, self.suffix_len) == (3, 2):
            return "standard"
        return f"custom(first={self.prefix_len},last={self.suffix_len})"


ENDPOINTS_ONLY = Fixation(1, 1)
STANDARD = Fixation(3, 2)


@dataclass(frozen=True, slots=True)
class SearchConfig:
    """Parameters of one search run."""

    n: int
    fixation: Fixation = ENDPOINTS_ONLY
    early_stop: int | None = None
    persist_stages: int = 0
    l_start: int | None = None
    worker_count: int = 1
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.n < 6:
            raise ConfigError("search needs at least 6 sensors")
        if self.fixation.fixed_count >= self.n:
            raise ConfigError("fixation would pin every sensor")
        if self.early_stop is not None and self.early_stop < 1:
            raise ConfigError("early_stop must be at least 1")
        if self.persist_stages < 0:
            raise ConfigError("persist_stages must be non-negative")
        if self.l_start is not None and self.l_start < self.n:
            raise ConfigError("aperture sweep starts at L = n or above")
        if self.worker_count < 1:
            raise ConfigError("worker_count must be at least 1")
        if self.budget < 1:
            raise ConfigError("budget must be positive")


@dataclass(frozen=True, slots=True)
class StageResult:
    """Everything one aperture stage produced."""

    aperture: int
    candidates_evaluated: int
    valid_arrays: tuple[SensorArray, ...]
    elapsed: float
    truncated: bool = False
    infeasible: bool = False

    def to_dict(self) -> dict:
        return {
            "aperture": self.aperture,
            "candidates_evaluated": self.candidates_evaluated,
            "valid_arrays": [list(a.positions) for a in self.valid_arrays],
            "truncated": self.truncated,
            "infeasible": self.infeasible,
        }


@dataclass(frozen=True, slots=True)
class SearchOutcome:
    """Result of a full aperture sweep.

    ``optimality`` is "proven" only when the sweep ran every stage
    exhaustively and terminated on an empty one; anything cut short by
    early stopping or the candidate budget is a "frontier" result.
    """

    n: int
    fixation: Fixation
    stages: tuple[StageResult, ...]
    optimal_aperture: int | None
    optimal_arrays: tuple[SensorArray, ...]
    optimality: str
    budget_exceeded: bool = False

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "fixation": self.fixation.label(),
            "stages": [s.to_dict() for s in self.stages],
            "optimal_aperture": self.optimal_aperture,
            "optimal_arrays": [list(a.positions) for a in self.optimal_arrays],
            "optimality": self.optimality,
            "budget_exceeded": self.budget_exceeded,
        }


@dataclass(frozen=True, slots=True)
class ProgressUpdate:
    """Snapshot handed to a progress callback after each rank interval."""

    aperture: int
    candidates_done: int
    stage_size: int
    valid_count: int
    rate: float


ProgressCallback = Callable[[ProgressUpdate], None]


def _geometry(cfg: SearchConfig, L: int):
    """Fixed positions and free-slot universe of a stage."""
    f = cfg.fixation
    prefix = f.prefix_positions()
    suffix = f.suffix_positions(L)
    lo = f.prefix_len
    hi = L - f.suffix_len
    k = cfg.n - f.fixed_count
    return prefix, suffix, lo, hi, k


def search_space_size(cfg: SearchConfig, L: int) -> int:
    """Exact number of candidates a stage enumerates under the fixation.

    Zero when the stage is infeasible (more free sensors than slots).
    """
    _, _, lo, hi, k = _geometry(cfg, L)
    slots = hi - lo + 1
    if slots < k:
        return 0
    return binomial(slots, k)


@lru_cache(maxsize=32)
def _choose_table(m_max: int, k_max: int):
    from . import _kernel

    return _kernel.make_choose_table(m_max, k_max)


def _run_interval(n, L, prefix, suffix, lo, hi, k, start_rank, count, early_cap):
    """Process ``count`` candidate ranks starting at ``start_rank``.

    Returns (processed, valid position tuples, hit_early_cap).  The
    kernel may overshoot ``count`` when it skips a dead subtree across
    the interval boundary; the overshoot contains no valid arrays and is
    clamped here so interval accounting stays exact.
    """
    from . import _kernel

    choose = _choose_table(hi - lo + 1, max(k, 1))
    cap_rows = min(_BUFFER_ROWS, early_cap) if early_cap else _BUFFER_ROWS
    out = np.empty((cap_rows, n), dtype=np.int64)
    fixed = prefix + suffix
    valids: list[tuple[int, ...]] = []
    processed = 0
    while processed < count:
        pos = np.zeros(n, dtype=np.int64)
        pos[: len(prefix)] = prefix
        pos[len(prefix) + k:] = suffix
        w = np.zeros(L + 1, dtype=np.int64)
        for i, a in enumerate(fixed):
            for b in fixed[i + 1:]:
                w[abs(b - a)] += 1
        deficit = sum(max(0, 2 - int(w[d])) for d in range(1, L))
        start = np.array(unrank(lo, hi, k, start_rank + processed), dtype=np.int64)
        leaves, nval, exhausted = _kernel.stage_kernel(
            lo, hi, k, L, n, len(prefix), pos, w, deficit, start,
            count - processed, cap_rows, out, choose,
        )
        valids.extend(tuple(int(x) for x in out[r]) for r in range(nval))
        processed += leaves
        if early_cap and len(valids) >= early_cap:
            return min(processed, count), valids[:early_cap], True
        if exhausted:
            break
    return min(processed, count), valids, False


def _interval_task(payload):
    """Picklable wrapper so intervals can run in worker processes."""
    idx, args = payload
    return idx, _run_interval(*args)


class SearchCheckpoint:
    """Sidecar JSON file recording per-stage progress of one search.

    Stores, per aperture, the next rank interval boundary to process
    plus everything already found, so an interrupted run restarts where
    it stopped.  The file is bound to the search parameters; resuming
    with a different configuration is refused.
    """

    def __init__(self, path: str | Path, cfg: SearchConfig):
        self.path = Path(path)
        self._key = {
            "n": cfg.n,
            "prefix_len": cfg.fixation.prefix_len,
            "suffix_len": cfg.fixation.suffix_len,
            "early_stop": cfg.early_stop,
            "budget": cfg.budget,
            "l_start": cfg.l_start,
            "persist_stages": cfg.persist_stages,
        }
        if self.path.exists():
            data = json.loads(self.path.read_text())
            if data.get("key") != self._key:
                raise ConfigError(
                    f"checkpoint {self.path} was written by a different search "
                    f"configuration"
                )
            self._stages = data["stages"]
        else:
            self._stages = {}

    def stage(self, L: int) -> dict | None:
        return self._stages.get(str(L))

    def update(self, L: int, **fields) -> None:
        entry = self._stages.setdefault(str(L), {})
        entry.update(fields)
        self._save()

    def _save(self) -> None:
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.write_text(json.dumps({"format": 1, "key": self._key, "stages": self._stages}))
        os.replace(tmp, self.path)


def _stage_from_entry(L: int, entry: dict) -> StageResult:
    return StageResult(
        aperture=L,
        candidates_evaluated=entry["candidates_evaluated"],
        valid_arrays=tuple(SensorArray(tuple(v)) for v in entry["valid"]),
        elapsed=entry["elapsed"],
        truncated=entry["truncated"],
        infeasible=entry.get("infeasible", False),
    )


def search_stage(
    cfg: SearchConfig,
    L: int,
    *,
    progress: ProgressCallback | None = None,
    checkpoint: SearchCheckpoint | None = None,
    _pool: ProcessPoolExecutor | None = None,
) -> StageResult:
    """Enumerate and validate every candidate of one aperture stage.

    Valid arrays come back in lexicographic order regardless of the
    worker count.  With ``early_stop`` set on the config, the stage
    stops after that many valid arrays and is flagged truncated.
    """
    t0 = time.perf_counter()
    prefix, suffix, lo, hi, k = _geometry(cfg, L)
    size = search_space_size(cfg, L)
    if hi - lo + 1 < k:
        result = StageResult(L, 0, (), time.perf_counter() - t0, infeasible=True)
        if checkpoint is not None:
            _checkpoint_finish(checkpoint, L, result, size)
        return result

    resume_rank = 0
    candidates = 0
    valids: list[tuple[int, ...]] = []
    if checkpoint is not None:
        entry = checkpoint.stage(L)
        if entry is not None:
            if entry.get("complete"):
                return _stage_from_entry(L, entry)
            resume_rank = entry["next_rank"]
            candidates = entry["candidates_evaluated"]
            valids = [tuple(v) for v in entry["valid"]]

    intervals = [
        (r, min(r + _CHUNK, size)) for r in range(resume_rank, size, _CHUNK)
    ]
    early_cap = cfg.early_stop or 0
    payloads = [
        (i, (cfg.n, L, prefix, suffix, lo, hi, k, s, e - s, early_cap))
        for i, (s, e) in enumerate(intervals)
    ]

    own_pool = None
    pool = _pool
    if pool is None and cfg.worker_count > 1 and len(payloads) > 1:
        own_pool = ProcessPoolExecutor(max_workers=cfg.worker_count)
        pool = own_pool

    truncated = False
    try:
        if pool is None:
            results = map(_interval_task, payloads)
        else:
            futures = [pool.submit(_interval_task, p) for p in payloads]
            results = (f.result() for f in futures)
        for (idx, (processed, found, hit_cap)), (s, e) in zip(results, intervals):
            candidates += processed
            valids.extend(found)
            if early_cap and len(valids) >= early_cap:
                valids = valids[:early_cap]
                truncated = True
                break
            if checkpoint is not None:
                checkpoint.update(
                    L, next_rank=e, candidates_evaluated=candidates,
                    valid=[list(v) for v in valids], complete=False,
                    truncated=False, size=size,
                )
            if progress is not None:
                progress(ProgressUpdate(
                    aperture=L,
                    candidates_done=candidates,
                    stage_size=size,
                    valid_count=len(valids),
                    rate=candidates / max(time.perf_counter() - t0, 1e-9),
                ))
        if pool is not None:
            for f in futures:
                f.cancel()
    finally:
        if own_pool is not None:
            own_pool.shutdown(cancel_futures=True)

    arrays = tuple(SensorArray(v) for v in valids)
    for arr in arrays:
        if not assess(arr).is_tfrsa:
            raise RuntimeError(
                f"search kernel accepted {arr} but the reference validator "
                f"rejects it; this is a bug"
            )
    result = StageResult(
        aperture=L,
        candidates_evaluated=candidates,
        valid_arrays=arrays,
        elapsed=time.perf_counter() - t0,
        truncated=truncated,
    )
    if checkpoint is not None:
        _checkpoint_finish(checkpoint, L, result, size)
    return result


def _checkpoint_finish(ckpt: SearchCheckpoint, L: int, result: StageResult, size: int):
    ckpt.update(
        L,
        complete=True,
        next_rank=size,
        candidates_evaluated=result.candidates_evaluated,
        valid=[list(a.positions) for a in result.valid_arrays],
        elapsed=result.elapsed,
        truncated=result.truncated,
        infeasible=result.infeasible,
        size=size,
    )


def _sweep(
    cfg: SearchConfig,
    *,
    frontier: bool,
    progress: ProgressCallback | None,
    checkpoint: str | Path | SearchCheckpoint | None,
) -> SearchOutcome:
    ckpt = None
    if checkpoint is not None:
        ckpt = (checkpoint if isinstance(checkpoint, SearchCheckpoint)
                else SearchCheckpoint(checkpoint, cfg))

    pool = None
    if cfg.worker_count > 1:
        pool = ProcessPoolExecutor(max_workers=cfg.worker_count)
    stages: list[StageResult] = []
    budget_exceeded = False
    empty_streak = 0
    L = cfg.l_start if cfg.l_start is not None else cfg.n
    try:
        while True:
            if search_space_size(cfg, L) > cfg.budget:
                budget_exceeded = True
                break
            result = search_stage(cfg, L, progress=progress, checkpoint=ckpt, _pool=pool)
            stages.append(result)
            if result.valid_arrays:
                empty_streak = 0
            else:
                empty_streak += 1
                if empty_streak >= 1 + cfg.persist_stages:
                    break
            L += 1
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)

    best = None
    for st in stages:
        if st.valid_arrays:
            best = st
    return SearchOutcome(
        n=cfg.n,
        fixation=cfg.fixation,
        stages=tuple(stages),
        optimal_aperture=best.aperture if best else None,
        optimal_arrays=best.valid_arrays if best else (),
        optimality="frontier" if (frontier or budget_exceeded) else "proven",
        budget_exceeded=budget_exceeded,
    )


def find_optimal(
    cfg: SearchConfig,
    *,
    progress: ProgressCallback | None = None,
    checkpoint: str | Path | SearchCheckpoint | None = None,
) -> SearchOutcome:
    """Sweep apertures exhaustively until a stage comes up empty.

    The last non-empty stage holds the proven maximum-aperture arrays.
    Early stopping is rejected here: optimality claims need every stage
    enumerated in full.  If a stage would exceed the candidate budget
    the sweep stops early and the partial outcome is only a frontier.
    """
    if cfg.early_stop is not None:
        raise ConfigError("find_optimal requires exhaustive stages; unset early_stop")
    return _sweep(cfg, frontier=False, progress=progress, checkpoint=checkpoint)


def find_near_optimal(
    cfg: SearchConfig,
    *,
    progress: ProgressCallback | None = None,
    checkpoint: str | Path | SearchCheckpoint | None = None,
) -> SearchOutcome:
    """Aperture sweep with shortcuts that trade optimality for reach.

    Meant for sensor counts whose exhaustive spaces are out of reach:
    heavier fixation shrinks the space and ``early_stop`` truncates each
    stage once enough valid arrays have been seen.  Results are always
    frontier quality.
    """
    if cfg.early_stop is None and cfg.fixation in (ENDPOINTS_ONLY, STANDARD):
        raise ConfigError(
            "near-optimal search expects early_stop and/or a custom fixation; "
            "use find_optimal for exhaustive sweeps"
        )
    return _sweep(cfg, frontier=True, progress=progress, checkpoint=checkpoint)
