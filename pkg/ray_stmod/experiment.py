"""Seeded experiments: build random modules step by step and tabulate how
often each generating length appears at each step."""
import json
import time
import warnings
from contextlib import AbstractContextManager
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, NamedTuple, Optional

import numpy as np
import pandas as pd
import ray

from ray_stmod.callbacks import (ExperimentCallback, LengthCountsPrintCallback,
                                 TableHistoryPrintCallback)
from ray_stmod.config import get_config
from ray_stmod.constants import (CAPPED_KEY, DIM_KEY, DURATION_KEY, GEL_KEY,
                                 STEP_KEY, STOPPED_BY_KEY, STOPPED_CAP,
                                 TRIAL_KEY)
from ray_stmod.exceptions import UsageError
from ray_stmod.field import parse_field
from ray_stmod.ghost import generating_length_m, random_module_steps
from ray_stmod.group import parse_group
from ray_stmod.projective import ProjectiveTable, decompose_regular
from ray_stmod.stable import SigmaCache

PRESETS = {
    "c9": {
        "group": "C9",
        "field": "GF3",
        "m": 1,
        "steps": 17,
        "summands": 3,
        "trials": 100,
        "record_from": 2,
    },
    "q8": {
        "group": "Q8",
        "field": "GF2",
        "m": 2,
        "steps": 10,
        "summands": 5,
        "trials": 200,
        "record_from": 4,
        "warn_at": 4,
    },
    "a4": {
        "group": "A4",
        "field": "GF4",
        "m": 2,
        "steps": 10,
        "summands": 5,
        "trials": 20,
        "record_from": 4,
    },
}

RECORD_COLUMNS = [TRIAL_KEY, STEP_KEY, DIM_KEY, GEL_KEY, STOPPED_BY_KEY]


@dataclass(frozen=True)
class ExperimentConfig:
    """Attributes:
        group (str): Group preset, e.g. ``"C9"``.
        field (str): Field, e.g. ``"GF3"``.
        trials (int): Number of independent trials.
        steps (int): Last step n; trial t builds R_0, ..., R_n.
        summands (int): At most this many spheres are added per step.
        m (int): Sphere degree range, used both to build the modules and
            for the generating length.
        seed (int): Master seed; trial seeds are derived from it.
        record_from (int): First step whose length is recorded.
        cap (Optional[int]): Ghost cap per length computation.
        num_workers (int): Ray tasks to fan trials out to; 0 runs
            in-process.
        warn_at (Optional[int]): Warn when a length at least this large
            is observed.
    """
    group: str = "C9"
    field: str = "GF3"
    trials: int = 10
    steps: int = 3
    summands: int = 3
    m: int = 1
    seed: int = 0
    record_from: int = 0
    cap: Optional[int] = None
    num_workers: int = 0
    warn_at: Optional[int] = None

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError(f"trials must be >= 1, got {self.trials}")
        if self.steps < 0:
            raise UsageError(f"steps must be >= 0, got {self.steps}")
        if self.summands < 1:
            raise UsageError(f"summands must be >= 1, got {self.summands}")
        if self.m < 0:
            raise UsageError(f"m must be >= 0, got {self.m}")
        if not 0 <= self.record_from <= self.steps:
            raise UsageError(
                f"record_from must lie in [0, {self.steps}], got "
                f"{self.record_from}")
        if self.num_workers < 0:
            raise UsageError(
                f"num_workers must be >= 0, got {self.num_workers}")

    @classmethod
    def from_preset(cls, name: str, **overrides) -> "ExperimentConfig":
        if name not in PRESETS:
            raise UsageError(
                f"Unknown preset {name!r}, expected one of "
                f"{sorted(PRESETS)}")
        params = dict(PRESETS[name])
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**params)

    @property
    def recorded_steps(self) -> List[int]:
        return list(range(self.record_from, self.steps + 1))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def derive_seed(master: int, trial: int) -> int:
    """Seed of trial ``trial``, independent of how many trials run."""
    seq = np.random.SeedSequence(master, spawn_key=(trial, ))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


class TrialResult(NamedTuple):
    trial: int
    seed: int
    records: List[Dict[str, Any]]
    duration: float


def run_trial(config: ExperimentConfig,
              trial: int,
              cache: Optional[SigmaCache] = None,
              table: Optional[ProjectiveTable] = None) -> TrialResult:
    """Build R_0..R_steps for one trial and record gel_m from
    ``record_from`` on."""
    start = time.perf_counter()
    group = parse_group(config.group)
    field = parse_field(config.field)
    table = table or decompose_regular(group, field)
    cache = cache if cache is not None else SigmaCache(table)
    seed = derive_seed(config.seed, trial)
    records = []
    for step in random_module_steps(group, field, config.steps,
                                    config.summands, config.m, seed, cache,
                                    table):
        t = step.length_bound - 1
        if t < config.record_from:
            continue
        report = generating_length_m(step.module, config.m, config.cap,
                                     cache, table)
        records.append({
            TRIAL_KEY: trial,
            STEP_KEY: t,
            DIM_KEY: step.module.dim,
            GEL_KEY: report.gel_m,
            STOPPED_BY_KEY: report.stopped_by,
        })
    return TrialResult(trial, seed, records, time.perf_counter() - start)


@dataclass
class ExperimentReport:
    """Per-trial records and the length-by-step count table.

    ``counts`` has one row per observed length and one column per
    recorded step; capped computations are counted in ``capped`` only.
    ``timing`` is kept apart so the rest is reproducible from the seed.
    """
    config: Dict[str, Any]
    records: List[Dict[str, Any]]
    counts: pd.DataFrame
    capped: Dict[int, int]
    timing: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_records(cls,
                     config: ExperimentConfig,
                     records: List[Dict[str, Any]],
                     timing: Optional[Dict[str, Any]] = None
                     ) -> "ExperimentReport":
        records = sorted(records, key=lambda r: (r[TRIAL_KEY], r[STEP_KEY]))
        steps = config.recorded_steps
        df = pd.DataFrame(records, columns=RECORD_COLUMNS)
        done = df[df[STOPPED_BY_KEY] != STOPPED_CAP]
        if len(done):
            counts = pd.crosstab(done[GEL_KEY].astype(int), done[STEP_KEY])
        else:
            counts = pd.DataFrame()
        counts = counts.reindex(columns=steps, fill_value=0)
        counts = counts.fillna(0).astype(int).sort_index()
        counts.index.name = "length"
        counts.columns.name = "step"
        capped_rows = df[df[STOPPED_BY_KEY] == STOPPED_CAP]
        capped = {
            step: int((capped_rows[STEP_KEY] == step).sum())
            for step in steps
        }
        return cls(config.to_dict(), records, counts, capped, timing or {})

    @property
    def lengths(self) -> List[int]:
        return [int(i) for i in self.counts.index]

    @property
    def max_length(self) -> Optional[int]:
        return max(self.lengths) if self.lengths else None

    def counts_dict(self) -> Dict[str, Dict[str, int]]:
        return {
            str(step): {
                str(length): int(self.counts.loc[length, step])
                for length in self.counts.index
            }
            for step in self.counts.columns
        }

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        ret = {
            "config": dict(self.config),
            "records": [dict(r) for r in self.records],
            "counts": self.counts_dict(),
            CAPPED_KEY: {str(k): v
                       for k, v in self.capped.items()},
        }
        if include_timing:
            ret["timing"] = dict(self.timing)
        return ret

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(
            self.to_dict(include_timing), sort_keys=True, indent=2)

    def to_frame(self) -> pd.DataFrame:
        """The count table with a final ``capped`` row."""
        frame = self.counts.copy()
        frame.index = [str(i) for i in frame.index]
        frame.loc[CAPPED_KEY] = [self.capped[step] for step in frame.columns]
        frame.index.name = "length"
        return frame

    def to_csv(self) -> str:
        return self.to_frame().to_csv()


class ray_start_shutdown(AbstractContextManager):
    """Context manager that starts Ray if it is not running and shuts it
    down on exit only if it started it.

    Args:
        num_cpus (Optional[int]): Passed to ``ray.init``.
    """

    def __init__(self, num_cpus: Optional[int] = None) -> None:
        self.num_cpus = num_cpus
        self.started_ = False

    def __enter__(self):
        if not ray.is_initialized():
            ray.init(num_cpus=self.num_cpus, include_dashboard=False)
            self.started_ = True
        return self

    def __exit__(self, __exc_type, __exc_value, __traceback) -> None:
        if self.started_:
            ray.shutdown()
            self.started_ = False


class ExperimentRunner:
    """Run the trials of an :class:`ExperimentConfig`.

    Args:
        config (ExperimentConfig): What to run.
        callbacks (Optional[List[ExperimentCallback]]): Called on the
            driver as trials finish.
        verbose (int): If positive, a :class:`TableHistoryPrintCallback`
            is attached unless one is already present; from 2 on, also a
            :class:`LengthCountsPrintCallback`.
    """

    def __init__(self,
                 config: ExperimentConfig,
                 callbacks: Optional[List[ExperimentCallback]] = None,
                 verbose: int = 0) -> None:
        self.config = config
        self.callbacks = list(callbacks or [])
        self.verbose = verbose
        if verbose and not any(
                isinstance(c, TableHistoryPrintCallback)
                for c in self.callbacks):
            self.callbacks.append(TableHistoryPrintCallback())
        if verbose > 1 and not any(
                isinstance(c, LengthCountsPrintCallback)
                for c in self.callbacks):
            self.callbacks.append(LengthCountsPrintCallback())
        self._warned = False

    def _handle(self, result: TrialResult) -> None:
        warn_at = self.config.warn_at
        for record in result.records:
            gel = record[GEL_KEY]
            if (warn_at is not None and gel is not None and gel >= warn_at
                    and not self._warned):
                self._warned = True
                warnings.warn(
                    f"Trial {result.trial} (seed {result.seed}) reached "
                    f"generating length {gel} at step {record[STEP_KEY]} "
                    f"over {self.config.group}/{self.config.field}.")
        for callback in self.callbacks:
            callback.handle_result(
                result.records,
                trial=result.trial,
                **{DURATION_KEY: result.duration})

    def _run_local(self) -> List[TrialResult]:
        group = parse_group(self.config.group)
        field = parse_field(self.config.field)
        table = decompose_regular(group, field)
        cache = SigmaCache(table)
        results = []
        for trial in range(self.config.trials):
            result = run_trial(self.config, trial, cache, table)
            self._handle(result)
            results.append(result)
        return results

    def _run_ray(self) -> List[TrialResult]:
        results = []
        with ray_start_shutdown(num_cpus=self.config.num_workers):
            remote_trial = ray.remote(num_cpus=1)(run_trial)
            pending = [
                remote_trial.remote(self.config, trial)
                for trial in range(self.config.trials)
            ]
            while pending:
                done, pending = ray.wait(pending, num_returns=1)
                result = ray.get(done[0])
                self._handle(result)
                results.append(result)
        return results

    def run(self) -> ExperimentReport:
        for callback in self.callbacks:
            callback.start(self.config.to_dict())
        start = time.perf_counter()
        if self.config.num_workers:
            results = self._run_ray()
        else:
            results = self._run_local()
        records = [r for result in results for r in result.records]
        timing = {
            "total_s": round(time.perf_counter() - start, 4),
            "trial_s": {
                str(r.trial): round(r.duration, 4)
                for r in sorted(results, key=lambda r: r.trial)
            },
        }
        report = ExperimentReport.from_records(self.config, records, timing)
        for callback in self.callbacks:
            callback.finish(report)
        return report


def run_experiment(config: ExperimentConfig,
                   callbacks: Optional[List[ExperimentCallback]] = None,
                   verbose: int = 0) -> ExperimentReport:
    return ExperimentRunner(config, callbacks, verbose).run()


def default_config(**overrides) -> ExperimentConfig:
    """ExperimentConfig with ``seed`` taken from ``STMOD_SEED`` unless
    given."""
    params = {k: v for k, v in overrides.items() if v is not None}
    params.setdefault("seed", get_config().seed)
    return replace(ExperimentConfig(), **params)
