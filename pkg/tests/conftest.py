"""Shared helpers: quick access to fixture documents and derived objects."""

from __future__ import annotations

import pytest

from shleibniz import fixtures as shipped
from shleibniz.document import AlgebraDocument


@pytest.fixture(scope="session")
def docs() -> dict[str, AlgebraDocument]:
    return {name: shipped.load_fixture(name) for name in shipped.fixture_names()}


@pytest.fixture(scope="session")
def family_names() -> tuple[str, ...]:
    return shipped.family_fixture_names()
