import plotly.graph_objects as go

from nmsem.klm import relation_from_operator
from nmsem.consequence import SemanticOperator
from nmsem.qmeasure import measure_from_choice
from nmsem.search import sweep_frame
from nmsem.visualization import plot_measure_heatmap, plot_order, plot_relation_heatmap, plot_sweep_summary


def test_measure_heatmap(partial_order):
    fig = plot_measure_heatmap(measure_from_choice(partial_order))
    assert isinstance(fig, go.Figure)
    assert len(fig.data[0].x) == 8


def test_relation_heatmap(birds):
    _, f = birds
    fig = plot_relation_heatmap(relation_from_operator(SemanticOperator(f)))
    assert len(fig.data[0].y) == 16


def test_order_diagram(m3):
    fig = plot_order(m3, [("w1", "w2"), ("w2", "w3"), ("w1", "w3")], chosen=m3.world_set(["w1"]))
    edges, nodes = fig.data
    # the implied pair is not drawn
    assert len([x for x in edges.x if x is None]) == 2
    assert list(nodes.text) == ["w1", "w2", "w3"]
    assert len(fig.layout.annotations) == 2


def test_sweep_summary(m3):
    fig = plot_sweep_summary(sweep_frame(m3, family="rank"))
    assert len(fig.data) == 3
