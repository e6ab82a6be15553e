from functools import lru_cache

import pytest
from hypothesis import settings

from moufang.chambers import ChamberSystem
from moufang.foundation import bundled, single_edge

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@lru_cache(maxsize=None)
def system(name, max_len=None):
    """Shared chamber systems: a bundled name or "kind:q" for a single edge."""
    if ":" in name:
        kind, q = name.split(":")
        spec = single_edge(kind, int(q))
    else:
        spec = bundled(name)
    return ChamberSystem(spec, max_len=max_len)


@pytest.fixture
def cs_a2_2():
    return system("A2:2")


@pytest.fixture
def cs_a3_2():
    return system("a3_f2")
