"""Shared fixtures for unit tests."""

from __future__ import annotations

import random
from collections.abc import Iterator

import pytest

from padicwave.config import get_settings
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.sampling import make_rng


@pytest.fixture
def q2() -> FieldDescriptor:
    """Q_2 at the default precision."""
    return FieldDescriptor(p=2)


@pytest.fixture
def q3() -> FieldDescriptor:
    """Q_3 at the default precision."""
    return FieldDescriptor(p=3)


@pytest.fixture
def q5() -> FieldDescriptor:
    """Q_5 at the default precision."""
    return FieldDescriptor(p=5)


@pytest.fixture
def unramified9() -> FieldDescriptor:
    """The unramified quadratic extension of Q_3 (q = 9, d = 2)."""
    return FieldDescriptor(p=3, f=2, e=1)


@pytest.fixture
def ramified3() -> FieldDescriptor:
    """Q_3(√3), tamely ramified with e = 2 (q = 3, d = 2)."""
    return FieldDescriptor(p=3, f=1, e=2)


@pytest.fixture
def rng() -> random.Random:
    """A fixed-seed generator."""
    return make_rng(1234)


@pytest.fixture
def fresh_settings() -> Iterator[None]:
    """Clear the cached settings before and after a test that changes the environment."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(params=[(2, 1, 1), (3, 1, 1), (5, 1, 1), (3, 2, 1), (3, 1, 2)], ids=lambda s: f"p{s[0]}f{s[1]}e{s[2]}")
def any_field(request: pytest.FixtureRequest) -> FieldDescriptor:
    """Each supported test field in turn."""
    p, f, e = request.param
    return FieldDescriptor(p=p, f=f, e=e)
