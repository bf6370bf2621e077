import io

import pytest

from ambit import Machine


@pytest.fixture
def machine():
    return Machine(stdout=io.StringIO())


@pytest.fixture
def quiet_machine():
    return Machine(stdout=io.StringIO(), stack_trace=False)
