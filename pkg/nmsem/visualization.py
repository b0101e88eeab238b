"""Plotly figures for measures, relations, orders and sweep summaries."""

from __future__ import annotations

from typing import Iterable

import networkx as nx
import numpy as np
import pandas as pd
import plotly.express as px
import plotly.graph_objects as go

from nmsem.formula import render
from nmsem.klm import PreferentialRelation
from nmsem.qmeasure import QualMeasure
from nmsem.universe import Universe, WorldSet


def _set_label(u: Universe, mask: int) -> str:
    return "{" + ",".join(WorldSet(u, mask).names()) + "}"


def _boolean_heatmap(matrix: np.ndarray, labels: list[str], title: str, hover: str) -> go.Figure:
    fig = go.Figure(
        data=go.Heatmap(
            z=matrix.astype(int),
            x=labels,
            y=labels,
            colorscale=[[0, "#f0f0f0"], [1, "#d62728"]],
            showscale=False,
            hovertemplate=hover + "<extra></extra>",
        )
    )
    fig.update_layout(
        title=title,
        xaxis=dict(side="top", tickangle=-45),
        yaxis=dict(autorange="reversed"),
        margin=dict(b=20, l=5, r=5, t=80),
    )
    return fig


def plot_measure_heatmap(m: QualMeasure) -> go.Figure:
    """
    Plot a qualitative measure.

    Args:
        m: the measure

    Returns:
        plotly.graph_objects.Figure: cell (row, column) is filled when the
        row set is greater than the column set
    """
    u = m.universe
    labels = [_set_label(u, x) for x in range(u.full_mask + 1)]
    return _boolean_heatmap(np.asarray(m.matrix), labels, "Qualitative measure X > Y", "%{y} > %{x}: %{z}")


def plot_relation_heatmap(rel: PreferentialRelation) -> go.Figure:
    """
    Plot a preferential relation between formula classes.

    Returns:
        plotly.graph_objects.Figure: cell (a, b) is filled when a |~ b
    """
    u = rel.universe
    labels = [render(u.characteristic_formula(x)) for x in range(u.full_mask + 1)]
    return _boolean_heatmap(np.asarray(rel.matrix), labels, "Preferential relation a |~ b", "%{y} |~ %{x}: %{z}")


def plot_order(u: Universe, pairs: Iterable[tuple[str, str]], chosen: WorldSet | None = None, show_labels: bool = True) -> go.Figure:
    """
    Plot the Hasse diagram of a strict partial order on worlds.

    Args:
        u: the universe
        pairs: (better, worse) pairs of the order
        chosen: worlds to highlight, typically f(X)
        show_labels: whether to show world names

    Returns:
        plotly.graph_objects.Figure: the diagram, edges pointing from a
        preferred world to a worse one
    """
    G = nx.DiGraph()
    G.add_nodes_from(u.worlds)
    G.add_edges_from(pairs)
    # only cover edges are drawn
    H = nx.transitive_reduction(G) if nx.is_directed_acyclic_graph(G) else G
    pos = nx.spring_layout(H, seed=42)

    edge_x = []
    edge_y = []
    for source, target in H.edges():
        edge_x += [pos[source][0], pos[target][0], None]
        edge_y += [pos[source][1], pos[target][1], None]
    edge_trace = go.Scatter(
        x=edge_x,
        y=edge_y,
        mode="lines",
        line=dict(width=1, color="#888"),
        hoverinfo="none",
    )

    highlighted = set(chosen.names()) if chosen is not None else set()
    nodes = pd.DataFrame({
        "id": list(H.nodes()),
        "x": [pos[n][0] for n in H.nodes()],
        "y": [pos[n][1] for n in H.nodes()],
    })
    nodes["chosen"] = nodes["id"].isin(highlighted)
    node_trace = go.Scatter(
        x=nodes["x"],
        y=nodes["y"],
        mode="markers+text" if show_labels else "markers",
        text=nodes["id"],
        textposition="top center",
        marker=dict(
            color=np.where(nodes["chosen"], "#ff4d4d", "#4da6ff"),
            size=15,
            line=dict(width=1, color="#ffffff"),
        ),
        hovertemplate="World: %{text}<extra></extra>",
    )

    fig = go.Figure(data=[edge_trace, node_trace])
    # arrowheads from better to worse
    for source, target in H.edges():
        fig.add_annotation(
            x=pos[target][0], y=pos[target][1], ax=pos[source][0], ay=pos[source][1],
            xref="x", yref="y", axref="x", ayref="y",
            showarrow=True, arrowhead=2, arrowsize=1, arrowwidth=1, arrowcolor="#888",
        )
    fig.update_layout(
        title="Preference order (better → worse)",
        showlegend=False,
        hovermode="closest",
        margin=dict(b=20, l=5, r=5, t=40),
        xaxis=dict(showgrid=False, zeroline=False, showticklabels=False),
        yaxis=dict(showgrid=False, zeroline=False, showticklabels=False),
    )
    return fig


def plot_sweep_summary(frame: pd.DataFrame) -> go.Figure:
    """
    Bar chart of how many functions in a sweep exhibit each failure.

    Args:
        frame: output of :func:`nmsem.search.sweep_frame`

    Returns:
        plotly.graph_objects.Figure
    """
    kinds = [c for c in frame.columns if c != "index"]
    counts = pd.DataFrame({
        "failure": kinds,
        "functions": [int(frame[k].sum()) for k in kinds],
    })
    fig = px.bar(counts, x="failure", y="functions", color="failure", title=f"Failures among {len(frame)} functions")
    fig.update_layout(showlegend=False)
    return fig
