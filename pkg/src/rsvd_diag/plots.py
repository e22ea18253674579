"""SVG figures: measured values as solid lines, bounds dashed, one colour per q."""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "rsvd-diag"
FLOOR = 1e-17
COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple", "tab:brown")


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def emit_svg(series, path, title="", xlabel="j", ylabel="", logy=True):
    """Write a line plot.

    ``series`` is a list of dicts with keys ``x``, ``y``, ``label`` and
    optional ``style`` (``"measured"`` solid, ``"bound"`` dashed,
    ``"exact"`` black) and ``color``.
    """
    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    for s in series:
        y = np.asarray(s["y"], dtype=float)
        if logy:
            y = np.maximum(y, FLOOR)
        style = s.get("style", "measured")
        kw = {"label": s.get("label")}
        if style == "bound":
            kw.update(linestyle="--", color=s.get("color"))
        elif style == "exact":
            kw.update(color="black", linewidth=1.5)
        else:
            kw.update(linestyle="-", color=s.get("color"))
        ax.plot(s["x"], y, **kw)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(fontsize=7)
    ax.grid(True, which="major", alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)


def per_index_series(reports, quantity):
    """Measured/bound series of ``quantity`` for each report (one per q)."""
    out = []
    for i, rep in enumerate(sorted(reports, key=lambda r: r.q)):
        measured, bound = rep.series(quantity)
        x = np.arange(1, measured.size + 1)
        color = COLORS[i % len(COLORS)]
        out.append({"x": x, "y": measured, "label": f"q={rep.q}", "style": "measured", "color": color})
        out.append({"x": x, "y": bound, "label": f"bound q={rep.q}", "style": "bound", "color": color})
    return out


def singular_value_series(reports):
    reports = sorted(reports, key=lambda r: r.q)
    measured, upper = reports[0].series("sigma_upper")
    x = np.arange(1, upper.size + 1)
    out = [{"x": x, "y": upper, "label": "sigma_j (upper)", "style": "exact"}]
    for i, rep in enumerate(reports):
        measured, lower = rep.series("sigma_lower")
        color = COLORS[i % len(COLORS)]
        out.append({"x": x, "y": measured, "label": f"sigma_hat q={rep.q}", "style": "measured", "color": color})
        out.append({"x": x, "y": lower, "label": f"lower q={rep.q}", "style": "bound", "color": color})
    return out


def lowrank_series(reports, norm_spec):
    reports = sorted(reports, key=lambda r: r.q)
    qs = [r.q for r in reports]
    out = []
    for i, qty in enumerate(("lowrank_full", "lowrank_rank_k", "lowrank_truncated")):
        pairs = [r.select(qty, norm_spec)[0] for r in reports]
        color = COLORS[i]
        out.append({"x": qs, "y": [p.measured for p in pairs], "label": qty, "style": "measured", "color": color})
        out.append({"x": qs, "y": [p.bound for p in pairs], "label": f"{qty} bound", "style": "bound", "color": color})
    return out
