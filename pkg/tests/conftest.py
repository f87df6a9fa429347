import pytest
from hypothesis import HealthCheck, settings

import maskquorum as mq

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# The oracle-equivalence roster: every construction small enough to
# materialize, keyed by a readable name.
ORACLE_SPECS: dict[str, mq.ConstructionSpec] = {
    "MGrid(2,0)": mq.MGridSpec(2, 0),
    "MGrid(3,0)": mq.MGridSpec(3, 0),
    "MGrid(3,1)": mq.MGridSpec(3, 1),
    "MGrid(4,1)": mq.MGridSpec(4, 1),
    "MGrid(5,2)": mq.MGridSpec(5, 2),
    "Threshold(3,2)": mq.ThresholdSpec(3, 2),
    "Threshold(4,3)": mq.ThresholdSpec(4, 3),
    "Threshold(5,4)": mq.ThresholdSpec(5, 4),
    "Threshold(10,6)": mq.ThresholdSpec(10, 6),
    "RT(3,2,2)": mq.RTSpec(3, 2, 2),
    "RT(3,2,3)": mq.RTSpec(3, 2, 3),
    "RT(4,3,2)": mq.RTSpec(4, 3, 2),
    "FPP(2)": mq.FPPSpec(2),
    "FPP(3)": mq.FPPSpec(3),
    "BoostFPP(2,1)": mq.BoostFPPSpec(2, 1),
    "MPath(4,1)": mq.MPathSpec(4, 1),
    "MPath(5,0)": mq.MPathSpec(5, 0),
    "MPath(5,2)": mq.MPathSpec(5, 2),
}

MATERIALIZE_CAP = 10 ** 4


@pytest.fixture(scope="session")
def handles() -> dict[str, mq.QuorumSystemHandle]:
    return {name: mq.build(spec) for name, spec in ORACLE_SPECS.items()}


@pytest.fixture(scope="session")
def materialized(handles) -> dict[str, mq.ExplicitQuorumSystem]:
    return {name: h.materialize(MATERIALIZE_CAP) for name, h in handles.items()}


@pytest.fixture(scope="session")
def brute_params(materialized) -> dict[str, mq.CombinatorialParams]:
    return {name: mq.combinatorial_params(sys) for name, sys in materialized.items()}


@pytest.fixture(scope="session")
def mpath5_handle(handles) -> mq.QuorumSystemHandle:
    """MPath(5,0) with its 2^25 crash profile cached on first exact query."""
    return handles["MPath(5,0)"]
