"""Shared fixtures: kernel warm-up and a per-session cache of preset runs."""

from __future__ import annotations

import time

import pytest
from hypothesis import settings

from sorptran import run_preset
from sorptran.kernels import warm_up

settings.register_profile("solver", deadline=None)
settings.load_profile("solver")


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    warm_up()


class PresetCache:
    """Runs each experiment preset at most once per session.

    get(name) returns (PresetResult, wall_seconds). Artifacts land under
    the session tmp directory so acceptance tests can inspect them.
    """

    def __init__(self, root):
        self.root = root
        self._done: dict[str, tuple] = {}

    def get(self, name: str):
        if name not in self._done:
            start = time.perf_counter()
            result = run_preset(name, out_dir=self.root / name,
                                sequential=True)
            self._done[name] = (result, time.perf_counter() - start)
        return self._done[name]


@pytest.fixture(scope="session")
def presets(tmp_path_factory) -> PresetCache:
    return PresetCache(tmp_path_factory.mktemp("artifacts"))
