from __future__ import annotations

import pytest

import rcbf_swarm as rs
from rcbf_swarm.core import apply_overrides


@pytest.fixture(scope="session")
def table_one():
    return rs.load_scenario("threeVthree")


@pytest.fixture(scope="session")
def baseline_log(table_one):
    cfg = apply_overrides(table_one, ["sim.filter_enabled=false"])
    return rs.run(cfg)


@pytest.fixture(scope="session")
def filtered_log(table_one):
    return rs.run(table_one)
