"""Matplotlib rendering of singular profiles and functional curves to files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .stepfn import StepFunction

_STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.bbox": "tight",
}


def _step_xy(f: StepFunction, t_max: float | None = None):
    last = f.breakpoints[-1] if f.breakpoints else 1.0
    if t_max is None:
        t_max = last * 1.25 if f.breakpoints else 1.0
    xs = [0.0]
    ys = [f.at(0.0)]
    for b in f.breakpoints:
        xs += [b, b]
        ys += [ys[-1], f.at(b)]
    xs.append(max(t_max, xs[-1]))
    ys.append(ys[-1])
    return xs, ys


def save_step_figure(path, funcs, title: str = "", xlabel: str = "t", ylabel: str = "value"):
    """Draw step functions (pairs of function and label) into one file."""
    funcs = list(funcs)
    t_max = max(
        [f.breakpoints[-1] for f, _ in funcs if f.breakpoints] + [1.0]
    ) * 1.25
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for f, label in funcs:
            xs, ys = _step_xy(f, t_max)
            ax.plot(xs, ys, drawstyle="default", label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if any(label for _, label in funcs):
            ax.legend()
        fig.savefig(path)
        plt.close(fig)


def save_curve_figure(path, series, xlabel: str, ylabel: str, title: str = "", loglog: bool = True):
    """Draw curves given as (xs, ys, label) triples, log-log by default."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for xs, ys, label in series:
            ax.plot(xs, ys, label=label)
        if loglog:
            ax.set_xscale("log")
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if any(label for _, _, label in series):
            ax.legend()
        fig.savefig(path)
        plt.close(fig)


def save_counterexample_figure(path, mu_a, mu_x, us, k_a, k_x):
    """Two panels: separating profiles on the left, coinciding K-curves right."""
    with plt.rc_context(_STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.4, 4.2))
        t_max = max(mu_a.breakpoints[-1], mu_x.breakpoints[-1]) * 1.25
        for f, label in ((mu_x, "profile of X"), (mu_a, "profile of A")):
            xs, ys = _step_xy(f, t_max)
            ax1.plot(xs, ys, label=label)
        ax1.set_xlabel("t")
        ax1.set_ylabel("singular value")
        ax1.set_title("profiles separate")
        ax1.legend()
        ax2.plot(us, k_x, label="K-curve of X")
        ax2.plot(us, k_a, "--", label="K-curve of A")
        ax2.set_xscale("log")
        ax2.set_xlabel("u")
        ax2.set_ylabel("K_u")
        ax2.set_title("K-curves coincide")
        ax2.legend()
        fig.savefig(path)
        plt.close(fig)


def save_transfer_figure(path, mu_a, mu_x, c: int):
    """Profiles of the operands together with the dominating dilated profile."""
    dilated = mu_a.dilate(2.0 * c).scale(2.0 * c)
    save_step_figure(
        path,
        [
            (dilated, f"2C * profile of A at t/(2C), C={c}"),
            (mu_x, "profile of X"),
            (mu_a, "profile of A"),
        ],
        title="transfer domination",
        ylabel="singular value",
    )
