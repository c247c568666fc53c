"""Figure rendering for experiment reports.

Each experiment gets one PNG next to its CSV.  Everything goes through
the Agg backend so report runs work headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _rows_where(rows, name):
    return [r for r in rows if r["param_name"] == name]


def _errbar(ax, xs, ys, los, his, **kw):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if all(v is not None for v in los) and all(v is not None for v in his):
        yerr = np.vstack([ys - np.asarray(los, float), np.asarray(his, float) - ys])
        yerr = np.clip(yerr, 0.0, None)
        ax.errorbar(xs, ys, yerr=yerr, marker="o", capsize=3, **kw)
    else:
        ax.plot(xs, ys, marker="o", **kw)


def _plot_tail(ax, rows, param, xlabel):
    pts = _rows_where(rows, param)
    if not pts:
        return
    _errbar(ax, [r["param_value"] for r in pts], [r["estimate"] for r in pts],
            [r["ci_low"] for r in pts], [r["ci_high"] for r in pts], label="empirical")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("probability")
    ax.set_yscale("symlog", linthresh=1e-4)


def _render_tail_square(rows, ax):
    _plot_tail(ax, rows, "epsilon", r"$\varepsilon$")
    ax.set_title("smallest singular value tail, square case")


def _render_tail_rectangular(rows, ax):
    _plot_tail(ax, rows, "c1", r"$c_1$")
    ax.set_title("smallest singular value tail, tall case")


def _render_sign_census(rows, ax):
    names = [r["param_name"] for r in rows]
    vals = [r["estimate"] for r in rows]
    ax.bar(range(len(vals)), vals)
    ax.set_xticks(range(len(vals)))
    ax.set_xticklabels(names, rotation=20)
    ax.set_ylabel("P(singular)")
    ax.set_title("sign matrix singularity")


def _render_edelman(rows, ax):
    _plot_tail(ax, rows, "epsilon", r"$\varepsilon$")
    ref = _rows_where(rows, "limit_law")
    if ref:
        xs = [r["param_value"] for r in ref]
        ys = [r["estimate"] for r in ref]
        ax.plot(xs, ys, linestyle="--", marker="s", label="limit law")
    ax.legend()
    ax.set_title("Gaussian smallest singular value vs limit law")


def _render_levy(rows, ax):
    for method in ("exact", "monte_carlo", "esseen"):
        pts = _rows_where(rows, method)
        if not pts:
            continue
        _errbar(ax, [r["param_value"] for r in pts], [r["estimate"] for r in pts],
                [r["ci_low"] for r in pts], [r["ci_high"] for r in pts], label=method)
    ax.set_xlabel(r"$\varepsilon$")
    ax.set_ylabel("concentration level")
    ax.legend()
    ax.set_title("small ball concentration of weighted sums")


def _render_lcd(rows, ax):
    names = [r["param_name"] for r in rows]
    vals = [r["estimate"] for r in rows]
    ax.bar(range(len(vals)), vals)
    ax.set_xticks(range(len(vals)))
    ax.set_xticklabels(names, rotation=20)
    ax.set_yscale("symlog", linthresh=1e-2)
    ax.set_title("essential least common denominator of kernel vectors")


def _render_khinchin(rows, ax):
    names = [r["param_name"] for r in rows]
    vals = [r["estimate"] for r in rows]
    ax.bar(range(len(vals)), vals)
    ax.set_xticks(range(len(vals)))
    ax.set_xticklabels(names)
    ax.set_ylabel("constant")
    ax.set_title("Khinchin type section constants")


def _render_kashin(rows, ax):
    for name, marker in (("kashin_ratio", "o"), ("diameter", "s"), ("min_l1", "^")):
        pts = _rows_where(rows, name)
        if pts:
            ax.plot([r["param_value"] for r in pts], [r["estimate"] for r in pts],
                    marker=marker, linestyle="", label=name)
    ax.set_xlabel("seed")
    ax.legend()
    ax.set_title("random sections of the octahedron")


def _render_perturb(rows, ax):
    _plot_tail(ax, rows, "threshold", "t")
    ax.set_xscale("log")
    ax.set_title("smallest singular value of D + random rotation")


def _render_net_audit(rows, ax):
    card = _rows_where(rows, "cardinality")
    if card:
        ax.plot([r["param_value"] for r in card], [r["estimate"] for r in card],
                marker="o", linestyle="", label="net size")
        cap = card[0]["threshold"]
        if cap is not None:
            ax.axhline(float(cap), linestyle="--", label="volumetric cap")
    ax.set_xlabel("seed")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("sphere net cardinality audit")


_RENDERERS = {
    "tail_square": _render_tail_square,
    "tail_rectangular": _render_tail_rectangular,
    "sign_census": _render_sign_census,
    "edelman": _render_edelman,
    "levy": _render_levy,
    "lcd": _render_lcd,
    "khinchin": _render_khinchin,
    "kashin": _render_kashin,
    "perturb": _render_perturb,
    "net_audit": _render_net_audit,
}


def render(experiment: str, rows: list[dict], path: str) -> str:
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    renderer = _RENDERERS.get(experiment)
    if renderer is not None and rows:
        renderer(rows, ax)
    else:
        ax.set_title(experiment)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
