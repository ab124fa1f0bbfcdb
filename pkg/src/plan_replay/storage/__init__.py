from plan_replay.storage.base import METRICS_SCHEMA, StorageBackend
from plan_replay.storage.library import CaseLibrary, LibraryStats
from plan_replay.storage.local import LocalBackend
from plan_replay.storage.metrics import MetricsStorage

__all__ = [
    "METRICS_SCHEMA",
    "StorageBackend",
    "LocalBackend",
    "CaseLibrary",
    "LibraryStats",
    "MetricsStorage",
]
