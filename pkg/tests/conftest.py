import pytest

from stackdist.exact import CountTable
from stackdist.matchings import MatchingTable


@pytest.fixture(scope="session")
def match_table():
    return MatchingTable()


@pytest.fixture(scope="session")
def count_table(match_table):
    return CountTable(match_table)
