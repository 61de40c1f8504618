"""Quick randomised property runs (the acceptance suite reruns these at
1000 cases each; here a smaller count keeps the developer loop fast)."""

import pytest

import propcheck


@pytest.mark.parametrize("name,suite", propcheck.ALL_SUITES)
def test_property_suite(name, suite):
    assert suite(150) == 150
