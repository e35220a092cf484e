from ray_stmod.callbacks.experiment import (
    ExperimentCallback, HistoryLoggingCallback, LengthCountsPrintCallback,
    TableHistoryPrintCallback)

__all__ = [
    "ExperimentCallback", "HistoryLoggingCallback",
    "LengthCountsPrintCallback", "TableHistoryPrintCallback"
]
