"""Static SVG figures: metric bars and per-DoF traces."""

from pathlib import Path

import matplotlib

matplotlib.use("svg")
import matplotlib.pyplot as plt  # noqa: E402

DOF_LABELS = ("x (m)", "y (m)", "z (m)", "rx (rad)", "ry (rad)", "rz (rad)")


def _save(fig, path):
    # fixed hash salt and no date keep the SVG byte-identical across runs
    with matplotlib.rc_context({"svg.hashsalt": "constrained-lfd", "svg.fonttype": "none"}):
        fig.savefig(Path(path), format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)


def plot_reports(reports, path, trajectories=None):
    """Bar charts of pose length and smoothness, plus optional per-DoF traces.

    Parameters
    ----------
    reports : sequence of TrajectoryReport
        Drawn in the given order (put the optimized trajectory last).
    trajectories : sequence of (label, Trajectory), optional
    """
    labels = [r.label for r in reports]
    nrows = 1 + (2 if trajectories else 0)
    fig = plt.figure(figsize=(11, 3.2 * nrows))
    grid = fig.add_gridspec(nrows, 6)
    ax_len = fig.add_subplot(grid[0, :3])
    ax_sm = fig.add_subplot(grid[0, 3:])
    colors = ["tab:gray"] * (len(labels) - 1) + ["tab:red"]
    x = range(len(labels))
    ax_len.bar(x, [r.pose_length_m for r in reports], color=colors)
    ax_len.set_ylabel("pose length (m)")
    ax_sm.bar(x, [r.smoothness_deg for r in reports], color=colors)
    ax_sm.set_ylabel("smoothness (deg)")
    for ax in (ax_len, ax_sm):
        ax.set_xticks(list(x))
        ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
    if trajectories:
        for d in range(6):
            ax = fig.add_subplot(grid[1 + d // 3, (d % 3) * 2:(d % 3) * 2 + 2])
            for i, (label, traj) in enumerate(trajectories):
                last = i == len(trajectories) - 1
                ax.plot(traj.times - traj.times[0], traj.poses[:, d],
                        color="tab:red" if last else "0.6", lw=1.6 if last else 0.7,
                        label=label if last else None)
            ax.set_title(DOF_LABELS[d], fontsize=8)
            ax.tick_params(labelsize=7)
    fig.tight_layout()
    _save(fig, path)
    return Path(path)


def plot_returns(rows, path):
    """Episode return and epsilon against episode number."""
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ep = [r["episode"] for r in rows]
    ax.plot(ep, [r["return"] for r in rows], lw=1.0, color="tab:blue")
    ax.set_xlabel("episode")
    ax.set_ylabel("discounted return")
    ax2 = ax.twinx()
    ax2.plot(ep, [r["epsilon"] for r in rows], lw=0.8, color="tab:orange")
    ax2.set_ylabel("epsilon")
    fig.tight_layout()
    _save(fig, path)
    return Path(path)
