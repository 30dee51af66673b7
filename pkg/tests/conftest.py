"""Shared fixtures: bundled tables and the canned reconciliation provider."""

from __future__ import annotations

from pathlib import Path

import pytest

from typematch.reconcile import FixtureProvider
from typematch.tabular import Table, load_table

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"
RECONCILIATION_FIXTURE = FIXTURES_DIR / "reconciliation.json"


def read_fixture_table(name: str) -> Table:
    path = FIXTURES_DIR / name
    return load_table(path.read_bytes(), name=path.stem)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def provider() -> FixtureProvider:
    return FixtureProvider(RECONCILIATION_FIXTURE)


# Tables are frozen dataclasses, so sharing them across tests is safe.


@pytest.fixture(scope="session")
def noisy_source() -> Table:
    return read_fixture_table("noisy_source.csv")


@pytest.fixture(scope="session")
def noisy_target() -> Table:
    return read_fixture_table("noisy_target.csv")


@pytest.fixture(scope="session")
def clean_source() -> Table:
    return read_fixture_table("clean_source.csv")


@pytest.fixture(scope="session")
def clean_target() -> Table:
    return read_fixture_table("clean_target.csv")
