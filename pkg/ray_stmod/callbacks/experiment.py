from collections import defaultdict
from typing import Any, Callable, Dict, List
from tabulate import tabulate
import numpy as np
import sys

from numbers import Number
from ray_stmod.constants import (AGGREGATE_KEY, CAPPED_KEY, DIM_KEY,
                                 DURATION_KEY, GEL_KEY, STEP_KEY,
                                 STOPPED_BY_KEY, STOPPED_CAP, TRIAL_KEY)
from ray_stmod.callbacks.utils import SortedKeysMixin


def max_and_argmax(val):
    return np.max(val), np.argmax(val)


def min_and_argmin(val):
    return np.min(val), np.argmin(val)


DEFAULT_AGGREGATE_FUNC = {
    "mean": np.mean,
    "median": np.median,
    "std": np.std,
    "max": max_and_argmax,
    "min": min_and_argmin
}

AGGREGATED_KEYS = (DIM_KEY, GEL_KEY)


class ExperimentCallback:
    """Hooks called by the experiment runner on the driver.

    ``handle_result`` receives the step records of one finished trial, in
    completion order; ``info`` carries the trial index and its duration.
    """

    def start(self, config: Dict, **info) -> None:
        pass

    def handle_result(self, results: List[Dict], **info) -> None:
        pass

    def finish(self, report, **info) -> None:
        pass


class HistoryLoggingCallback(ExperimentCallback):
    """Keeps every trial's records with aggregates of dim and gel over its
    steps, and a running count of lengths per step.

    ``history[i]`` maps step to record, plus ``"aggregate"``; capped steps
    carry no length and are counted under ``"capped"`` instead.
    """

    def __init__(self,
                 *,
                 aggregate_funcs: Dict[str, Callable[[List[
                     float]], float]] = DEFAULT_AGGREGATE_FUNC) -> None:
        self._aggregate_funcs = aggregate_funcs
        self._history = []
        self._counts: Dict[int, Dict[Any, int]] = defaultdict(
            lambda: defaultdict(int))

    def start(self, config: Dict, **info) -> None:
        self._history = []
        self._counts.clear()

    @property
    def history(self) -> List[Dict]:
        return self._history

    @property
    def length_counts(self) -> Dict[int, Dict[Any, int]]:
        """``length_counts[step][length]``; capped steps under ``"capped"``."""
        return {step: dict(c) for step, c in sorted(self._counts.items())}

    def _get_aggregate_results(self, results: List[Dict]) -> Dict:
        aggregate_results = {}
        if not results:
            return aggregate_results
        aggregate_results[TRIAL_KEY] = results[-1][TRIAL_KEY]
        for key in AGGREGATED_KEYS:
            values = [
                r[key] for r in results if isinstance(r.get(key), Number)
            ]
            if values:
                aggregate_results[key] = {
                    func_key: func(values)
                    for func_key, func in self._aggregate_funcs.items()
                }
        aggregate_results[CAPPED_KEY] = sum(
            r[STOPPED_BY_KEY] == STOPPED_CAP for r in results)
        return aggregate_results

    def handle_result(self, results: List[Dict], **info):
        for r in results:
            length = CAPPED_KEY if r[STOPPED_BY_KEY] == STOPPED_CAP else int(
                r[GEL_KEY])
            self._counts[r[STEP_KEY]][length] += 1
        results_dict = {r[STEP_KEY]: r for r in results}
        aggregate = self._get_aggregate_results(results)
        if DURATION_KEY in info:
            aggregate[DURATION_KEY] = info[DURATION_KEY]
        results_dict[AGGREGATE_KEY] = aggregate
        self._history.append(results_dict)


class AbstractPrintCallback(HistoryLoggingCallback):
    def __init__(self,
                 *,
                 aggregate_funcs: Dict[str, Callable[[List[
                     float]], float]] = DEFAULT_AGGREGATE_FUNC,
                 sink: Callable[[Any], None] = print) -> None:
        self.sink = sink
        super().__init__(aggregate_funcs=aggregate_funcs)

    def _sink(self, text):
        self.sink(text)
        if self.sink is print:
            sys.stdout.flush()


class TableHistoryPrintCallback(SortedKeysMixin, AbstractPrintCallback):
    """One ``tabulate`` row per finished trial, aggregated over its
    recorded steps; the header is printed with the first row."""

    def __init__(
            self,
            *,
            aggregate_funcs: Dict[str, Callable[[List[
                float]], float]] = DEFAULT_AGGREGATE_FUNC,
            aggregate_key_to_print: str = "max",
            sink: Callable[[Any], None] = print,
            tablefmt="simple",
            floatfmt=".4f",
            stralign="right",
    ) -> None:
        self.aggregate_key_to_print = aggregate_key_to_print
        self.tablefmt = tablefmt
        self.floatfmt = floatfmt
        self.stralign = stralign
        super().__init__(aggregate_funcs=aggregate_funcs, sink=sink)
        self.first_iteration_ = True

    def start(self, config: Dict, **info) -> None:
        super().start(config, **info)
        self.first_iteration_ = True

    def handle_result(self, results: List[Dict], **info):
        super().handle_result(results, **info)
        self.display()

    def display(self):
        data = self.handle_aggregate_results(
            self._history[-1][AGGREGATE_KEY])
        tabulated = self.table(data)

        if self.first_iteration_:
            header, lines = tabulated.split("\n", 2)[:2]
            self._sink(header)
            self._sink(lines)
            self.first_iteration_ = False

        self._sink(tabulated.rsplit("\n", 1)[-1])

    def handle_aggregate_results(self, aggregate_results: dict) -> dict:
        ret = {}
        for k, v in aggregate_results.items():
            if isinstance(v, dict):
                v = v[self.aggregate_key_to_print]
                # max and min also return the position
                if isinstance(v, tuple):
                    v = v[0]
            ret[k] = v
        return ret

    def format_row(self, row, key):
        """Format one value of the row: ints as is, floats with
        ``floatfmt``, None as an empty cell."""
        value = row.get(key)
        if value is None:
            return ""
        if not isinstance(value, Number):
            return value
        if float(value).is_integer():
            return str(int(value))
        return ("{:" + self.floatfmt + "}").format(value)

    def table(self, row):
        headers = self._sorted_keys(row.keys())
        formatted = [self.format_row(row, key) for key in headers]
        return tabulate(
            [formatted],
            headers=headers,
            tablefmt=self.tablefmt,
            floatfmt=self.floatfmt,
            stralign=self.stralign,
        )


class LengthCountsPrintCallback(AbstractPrintCallback):
    """Prints the running length-by-step count table once all trials are
    done: one column per step, one row per length, then ``capped``."""

    def __init__(self,
                 *,
                 sink: Callable[[Any], None] = print,
                 tablefmt="simple") -> None:
        self.tablefmt = tablefmt
        super().__init__(sink=sink)

    def table(self) -> str:
        counts = self.length_counts
        steps = list(counts)
        lengths = sorted({
            length
            for c in counts.values() for length in c if length != CAPPED_KEY
        })
        rows = [[length] + [counts[s].get(length, 0) for s in steps]
                for length in lengths]
        rows.append([CAPPED_KEY] +
                    [counts[s].get(CAPPED_KEY, 0) for s in steps])
        return tabulate(
            rows, headers=["length"] + steps, tablefmt=self.tablefmt)

    def finish(self, report, **info) -> None:
        self._sink(self.table())
