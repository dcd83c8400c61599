"""Matplotlib figure rendering for the report path.

Figures are written next to the delimited output when the caller passes a
figure directory; all rendering uses the Agg backend so headless runs work.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .cap import cap_angle
from .constants import khavinson_gradient_bound, khavinson_phi
from .geometry import ball_constants


def _save(fig, directory: Path, name: str) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{name}.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def phi_profile_figure(n: int, directory: Path, grid: int = 101) -> Path:
    """Phi_n on [0, 1] with the induced gradient bound on a twin axis."""
    rs = np.linspace(0.0, 1.0, grid)
    phi = [khavinson_phi(n, float(r)) for r in rs]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(rs, phi, lw=1.5, label=f"$\\Phi_{{{n}}}(r)$")
    ax.axhline(2.0 / (n - 1), color="gray", lw=0.8, ls="--", label="value at 0")
    ax2 = ax.twinx()
    rb = rs[:-1]
    ax2.plot(rb, [khavinson_gradient_bound(n, float(r)) for r in rb],
             color="tab:red", lw=1.0, alpha=0.7, label="gradient bound")
    ax.set_xlabel("r")
    ax.set_ylabel(f"$\\Phi_{{{n}}}$")
    ax2.set_ylabel("bound")
    ax.legend(loc="upper left", fontsize=8)
    ax.set_title(f"Khavinson profile, n = {n}")
    return _save(fig, directory, f"phi_n{n}")


def cap_inequality_figure(n: int, directory: Path, grid: int = 401) -> Path:
    """sin^(n-1)(gamma_a) between its two quadratic envelopes."""
    a = np.linspace(-1.0, 1.0, grid)
    s = np.array([math.sin(cap_angle(n, float(v))) ** (n - 1) for v in a])
    q = 1.0 - a * a
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(a, s, lw=1.5, label=r"$\sin^{n-1}\gamma_a$")
    ax.plot(a, q, lw=1.0, ls="--", label=r"$1 - a^2$")
    if n >= 3:
        coeff = (n - 1) / (4.0 * ball_constants(n).sigma_star)
        ax.plot(a, coeff * q, lw=1.0, ls=":", label=r"$\frac{n-1}{4\sigma_*}(1-a^2)$")
    ax.set_xlabel("a")
    ax.legend(fontsize=8)
    ax.set_title(f"Cap-angle envelopes, n = {n}")
    return _save(fig, directory, f"cap_inequality_n{n}")


def counterexample_figure(n: int, certificate: dict, directory: Path) -> Path:
    """Violation ratio of the conjectured bound along the cap-angle scan."""
    from .constants import c_n

    two_omega = 2.0 * ball_constants(n).omega_star
    gammas = np.linspace(0.05, math.pi / 2, 120)
    ratio = [(n / 2.0) * c_n(n, float(g)) / two_omega for g in gammas]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(gammas, ratio, lw=1.5)
    ax.axhline(1.0, color="gray", lw=0.8)
    ax.plot([certificate["gamma"]], [certificate["violation_ratio"]], "ro",
            label=f"certificate (ratio {certificate['violation_ratio']:.3f})")
    ax.set_xlabel(r"$\gamma$")
    ax.set_ylabel("violation ratio")
    ax.legend(fontsize=8)
    ax.set_title(f"Conjectured bound failure, n = {n}")
    return _save(fig, directory, f"counterexample_n{n}")


def margin_figure(report: dict, directory: Path, name: str) -> Path:
    """Bar chart of witness margins for one verification report."""
    witnesses = report.get("witnesses", [])
    margins = [w.get("margin", 0.0) for w in witnesses]
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.bar(range(len(margins)), margins, color="tab:blue")
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("witness")
    ax.set_ylabel("margin")
    status = "passed" if report.get("passed") else "FAILED"
    ax.set_title(f"{report.get('theorem_id', name)}: worst margins ({status})")
    return _save(fig, directory, name)
