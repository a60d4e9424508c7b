"""
Shared memo table for decomposition results.

This module provides:
- MemoConfig with size bound and enable switch
- MemoStore: a lock-guarded bounded map from piece keys to parse trees
  (or a recorded failure)
- MemoStoreManager: process-wide singleton owning the store lifecycle
"""

import logging
import threading
from collections import OrderedDict
from typing import Any, Dict, Hashable, Optional, Tuple

logger = logging.getLogger(__name__)

_MISSING = object()


class MemoConfig:
    """Configuration for the shared decomposition memo table."""

    def __init__(self, enabled: bool = True, max_entries: int = 200_000):
        self.enabled = enabled
        self.max_entries = max_entries

    def to_dict(self) -> Dict[str, Any]:
        return {"enabled": self.enabled, "max_entries": self.max_entries}


class MemoStore:
    """Bounded insertion-ordered map; the oldest entries are evicted first."""

    def __init__(self, max_entries: int):
        self._max_entries = max_entries
        self._entries: "OrderedDict[Hashable, Any]" = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def lookup(self, key: Hashable) -> Tuple[bool, Any]:
        """Return ``(found, value)``; a stored ``None`` records a failed decomposition."""
        with self._lock:
            value = self._entries.get(key, _MISSING)
            if value is _MISSING:
                self.misses += 1
                return False, None
            self.hits += 1
            return True, value

    def store(self, key: Hashable, value: Any) -> None:
        with self._lock:
            self._entries[key] = value
            while len(self._entries) > self._max_entries:
                self._entries.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


class MemoStoreManager:
    """Singleton manager for the shared MemoStore instance."""

    _instance: Optional["MemoStoreManager"] = None
    _store: Optional[MemoStore] = None

    def __new__(cls) -> "MemoStoreManager":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not hasattr(self, "_initialized"):
            self._initialized = True
            self._config: Optional[MemoConfig] = None

    def initialize(self, config: Optional[MemoConfig] = None) -> Optional[MemoStore]:
        """
        Create the shared store.

        Returns:
            The store, or None when the configuration disables memoization
        """
        if self._store is not None:
            logger.info("Memo store already initialized")
            return self._store
        self._config = config or MemoConfig()
        if not self._config.enabled:
            logger.info("Memo store disabled by configuration")
            return None
        self._store = MemoStore(self._config.max_entries)
        logger.info(f"Memo store initialized (max_entries={self._config.max_entries})")
        return self._store

    def get_store(self) -> MemoStore:
        """
        Raises:
            RuntimeError: If the store is not initialized
        """
        if self._store is None:
            raise RuntimeError("Memo store not initialized. Call initialize() first.")
        return self._store

    def close(self) -> None:
        if self._store is not None:
            logger.info(f"Memo store closed (hits={self._store.hits}, misses={self._store.misses})")
            self._store.clear()
            self._store = None

    def is_initialized(self) -> bool:
        return self._store is not None

    def reset(self) -> None:
        """Drop cached entries but keep the store."""
        if self._store is not None:
            self._store.clear()

    def get_config(self) -> Optional[MemoConfig]:
        return self._config


memo_manager = MemoStoreManager()
