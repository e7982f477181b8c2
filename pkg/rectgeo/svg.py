"""SVG rendering of an unfolded interval with an optional path overlay.

Needs matplotlib (``pip install rectgeo[plot]``); it is imported on first use.
"""

import logging
from typing import Optional

from rectgeo.engine import GeodesicPath
from rectgeo.unfolding import UnfoldedChain

logger = logging.getLogger(__name__)


def _pyplot():
    try:
        import matplotlib

        matplotlib.use("Agg")
        from matplotlib import pyplot as plt
    except ImportError as exc:
        raise ImportError("SVG output needs matplotlib: pip install rectgeo[plot]") from exc
    return plt


def render_svg(
    chain: UnfoldedChain, filename: str, path: Optional[GeodesicPath] = None, labels: bool = True
) -> None:
    """
    Draw the blocks of an unfolded chain, its joints and a geodesic, and save as SVG.

    Args:
        chain: Unfolded interval
        filename: Output file
        path: Query result whose planar polyline is overlaid
        labels: Annotate boundary vertices with their ids
    """
    plt = _pyplot()
    from matplotlib.patches import Polygon as mplPolygon

    fig, ax = plt.subplots(figsize=(6, 6))
    for block in chain.blocks:
        if block.bridge:
            ax.plot(block.loop[:, 0], block.loop[:, 1], color="0.3", linewidth=2)
        else:
            ax.add_patch(mplPolygon(block.loop, closed=True, facecolor="0.9", edgecolor="0.3"))
        for (x, y), reflex in ((block.loop[i], v in block.reflex_vertices)
                               for i, v in enumerate(block.loop_vertices)):
            if reflex:
                ax.plot(x, y, "s", color="tab:orange", markersize=4)
    for x, y in chain.joints:
        ax.plot(x, y, "o", color="tab:red", markersize=5)
    if labels:
        for v, (x, y) in chain.vertex_image.items():
            ax.annotate(str(v), (x, y), fontsize=7, xytext=(3, 3), textcoords="offset points")
    if path is not None and path.planar:
        xs, ys = zip(*path.planar)
        ax.plot(xs, ys, "-", color="tab:blue", linewidth=1.5)
        ax.plot(xs[0], ys[0], "o", color="tab:green")
        ax.plot(xs[-1], ys[-1], "o", color="tab:purple")
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.set_title(f"I({chain.boundary.p}, {chain.boundary.q})")
    fig.savefig(filename, format="svg")
    plt.close(fig)
    logger.debug("render_svg() wrote %s", filename)
