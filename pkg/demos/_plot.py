"""Optional plotting helper shared by the demo scripts."""

from pathlib import Path

OUT = Path(__file__).resolve().parent / "output"

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:  # plots are optional
    plt = None


def save(fig, name):
    OUT.mkdir(exist_ok=True)
    path = OUT / name
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)
    print("wrote", path)


def show_grid(ax, grid, title, curve=None):
    ax.imshow(grid.values.T, origin="lower", extent=(grid.x_min, grid.x_max, grid.y_min, grid.y_max), cmap="magma")
    if curve is not None:
        import numpy as np

        xy = curve.point(np.linspace(0, 2 * np.pi, 400))
        ax.plot(xy[:, 0], xy[:, 1], "c--", lw=0.8)
    ax.set_title(title)
    ax.set_aspect("equal")
