import pytest

from guesswho.game import SolveTable, solve_dp


@pytest.fixture(scope="session")
def table64() -> SolveTable:
    """One shared exact solve of every state with n + m <= 64."""
    return solve_dp(64)
