import pytest

from weightpred import WeightKind

from helpers import fig_graph, fig_weighting


@pytest.fixture
def fig1():
    return fig_graph()


@pytest.fixture
def origin_weights():
    return fig_weighting(WeightKind.ORIGIN)


@pytest.fixture
def terminal_weights():
    return fig_weighting(WeightKind.TERMINAL)


@pytest.fixture
def edge_weights():
    return fig_weighting(WeightKind.EDGE)
