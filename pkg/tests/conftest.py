import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for reference_tables

from dnemu.fixtures import grand13_table, task1_table, task3_table
from dnemu.harness import teach_table
from dnemu.network import Network


@pytest.fixture(scope="session")
def task1():
    return task1_table()


@pytest.fixture(scope="session")
def task3():
    return task3_table()


@pytest.fixture(scope="session")
def grand13():
    return grand13_table()


@pytest.fixture()
def taught_task1(task1):
    table, gmap = task1
    net = Network(gmap.z_dim, gmap.x_dim, 18, seed=1)
    report = teach_table(net, table, gmap)
    return net, report


@pytest.fixture()
def taught_grand(grand13):
    table, gmap = grand13
    net = Network(gmap.z_dim, gmap.x_dim, 40, seed=1)
    report = teach_table(net, table, gmap)
    return net, report
