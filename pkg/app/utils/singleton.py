"""Thread-safe singleton metaclass for shared services and compiled graphs."""

import threading
from abc import ABCMeta
from typing import Any


class SingletonMeta(ABCMeta):
    """
    Metaclass returning one shared instance per class.

    Ensemble members run on worker threads, so construction uses double-checked
    locking. Arguments passed after the first construction are ignored.
    """

    _instances: dict[type, Any] = {}
    _lock = threading.RLock()

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            with cls._lock:
                if cls not in cls._instances:
                    cls._instances[cls] = super().__call__(*args, **kwargs)
        return cls._instances[cls]

    def reset_instance(cls):
        """Drop the shared instance so the next call builds a fresh one."""
        with cls._lock:
            cls._instances.pop(cls, None)
