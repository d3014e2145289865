"""Shared fixtures and the hypothesis profile."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from nilclass4.field import make_field

settings.register_profile(
    "nilclass4",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("nilclass4")

SMALL_Q = [(2, 1), (3, 1), (2, 2), (5, 1)]


@pytest.fixture(params=SMALL_Q, ids=lambda pe: f"q{pe[0] ** pe[1]}")
def small_field(request):
    return make_field(*request.param)


@pytest.fixture
def F2():
    return make_field(2)


@pytest.fixture
def F3():
    return make_field(3)


@pytest.fixture
def F4():
    return make_field(2, 2)


@pytest.fixture
def F5():
    return make_field(5)
