"""Deterministic artifact writers for traced divides: SVG picture and CSV
tables of strand polylines and node coordinates."""
from __future__ import annotations

from .tracing import TracedDivide

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def fmt(x: float) -> str:
    """Fixed 12-significant-digit formatting used in every artifact."""
    return f"{float(x):.12g}"


def svg_divide(traced: TracedDivide, size: int = 640) -> str:
    """Standalone SVG of the traced divide: strands per branch, nodes,
    window frame.  Output is byte-stable for identical inputs."""
    W = traced.meta.window
    scale = size / (2 * W)

    def sx(x):
        return fmt((x + W) * scale)

    def sy(y):
        return fmt((W - y) * scale)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white" stroke="black" stroke-width="1"/>',
    ]
    branch_of_edge = traced.divide.branch_of_edge
    for e in sorted(traced.strand_paths):
        path = traced.strand_paths[e]
        color = PALETTE[branch_of_edge[e] % len(PALETTE)]
        pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in path)
        lines.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
    for k, nd in enumerate(traced.nodes):
        lines.append(
            f'<circle cx="{sx(nd.x)}" cy="{sy(nd.y)}" r="3" fill="black"><title>node {k}</title></circle>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def strands_csv(traced: TracedDivide) -> str:
    rows = ["branch,edge,point,x,y"]
    branch_of_edge = traced.divide.branch_of_edge
    for e in sorted(traced.strand_paths):
        for idx, (x, y) in enumerate(traced.strand_paths[e]):
            rows.append(f"{branch_of_edge[e]},{e},{idx},{fmt(x)},{fmt(y)}")
    return "\n".join(rows) + "\n"


def nodes_csv(traced: TracedDivide) -> str:
    rows = ["node,x,y,residual_f,residual_grad,tangent_gap"]
    for k, nd in enumerate(traced.nodes):
        rows.append(
            f"{k},{fmt(nd.x)},{fmt(nd.y)},{fmt(nd.residual_f)},{fmt(nd.residual_grad)},{fmt(nd.tangent_gap)}"
        )
    return "\n".join(rows) + "\n"
