from __future__ import annotations

import pytest

from cubic_mw import build_index, default_registry, standard_policy
from cubic_mw.enumeration import NO_EXCLUSIONS

_INDEX_CACHE = {}


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def get_index(registry):
    """Session-cached index builder: (label, hmax, with_policy) -> PointIndex.

    The big enumerations (surface 3 at 25874, surface 4 at 6800) are shared
    across tests through this cache.
    """

    def build(label: str, hmax: int, with_policy: bool = True):
        key = (label, hmax, with_policy)
        if key not in _INDEX_CACHE:
            policy = standard_policy(label) if with_policy else NO_EXCLUSIONS
            _INDEX_CACHE[key] = build_index(registry.get(label), hmax, policy)
        return _INDEX_CACHE[key]

    return build
