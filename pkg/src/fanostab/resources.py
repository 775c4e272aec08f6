"""Shipped fact files and chase scripts, and cached, checked replays of them."""
from __future__ import annotations

import os
from importlib import resources as _res
from pathlib import Path

from .chase import ChaseResult, CheckReport, StoreSource, WeylSource, check_trace, parse_script, replay
from .tables import FactStore, ingest_facts

FACTS_ENV = "FANOSTAB_FACTS_DIR"
SCRIPTS_ENV = "FANOSTAB_SCRIPTS_DIR"


def _data_dir(sub: str) -> Path:
    return Path(str(_res.files("fanostab") / "data" / sub))


def facts_dir() -> Path:
    return Path(os.environ.get(FACTS_ENV) or _data_dir("facts"))


def scripts_dir() -> Path:
    return Path(os.environ.get(SCRIPTS_ENV) or _data_dir("scripts"))


def load_store(path: Path) -> FactStore:
    return ingest_facts(path.read_text(), str(path))


class Resources:
    """Fact stores plus lazily replayed scripts.  Every replay that proves
    its goals is also run through the independent trace checker."""

    def __init__(self, scripts: Path | None = None, facts: Path | None = None, stores: list[FactStore] | None = None):
        self.scripts = Path(scripts) if scripts else scripts_dir()
        if stores is None:
            fdir = Path(facts) if facts else facts_dir()
            stores = [load_store(p) for p in sorted(fdir.glob("*.facts"))] if fdir.is_dir() else []
        self.stores = stores
        self._cache: dict[str, tuple[ChaseResult, CheckReport | None]] = {}

    def sources(self) -> list:
        return [WeylSource()] + [StoreSource(s) for s in self.stores]

    def script_path(self, name: str) -> Path:
        return self.scripts / f"{name}.chase"

    def chase(self, name: str) -> tuple[ChaseResult, CheckReport | None]:
        """Replay a shipped script; raises FileNotFoundError if it is absent."""
        if name not in self._cache:
            path = self.script_path(name)
            script = parse_script(path.read_text(), name)
            result = replay(script, self.sources())
            report = check_trace(result.trace, self.sources()) if result.proved else None
            self._cache[name] = (result, report)
        return self._cache[name]
