import numpy as np
import pytest

from services.analysis.chsh_analyzer import ChshAnalyzer
from services.analysis.guessing_analyzer import GuessingAnalyzer

@pytest.fixture
def rng():
    return np.random.default_rng(20160125)

@pytest.fixture
def ideal_setup():
    return ChshAnalyzer.ideal_setup()

@pytest.fixture
def gap_table():
    return GuessingAnalyzer.sequential_gap_distribution()
