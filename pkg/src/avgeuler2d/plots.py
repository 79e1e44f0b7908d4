"""Report figures rendered alongside the delimited output files."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_series(records, path, title=None):
    """Kinetic energy E(t) with the enstrophy Z(t) inset."""
    t = np.array([r.t for r in records])
    E = np.array([r.E for r in records])
    Z = np.array([r.Z for r in records])
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(t, E, "k-", lw=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel("E")
    if title:
        ax.set_title(title)
    inset = ax.inset_axes([0.55, 0.14, 0.4, 0.35])
    inset.plot(t, Z, "k-", lw=0.9)
    inset.set_ylabel("Z", fontsize=8)
    inset.tick_params(labelsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_spectrum(spectra, path, labels=None, guides=((-5 / 3, "k^{-5/3}"), (-3, "k^{-3}"))):
    """Log-log shell spectra, optionally several labelled curves with
    power-law guide lines anchored at the forcing shell."""
    if not isinstance(spectra, (list, tuple)):
        spectra = [spectra]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for i, spec in enumerate(spectra):
        lbl = labels[i] if labels else None
        pos = spec.e > 0
        ax.loglog(spec.k[pos], spec.e[pos], lw=1.1, label=lbl)
    ref = spectra[0]
    pos = ref.e > 0
    if np.any(pos) and guides:
        k0 = 10.0
        e0 = np.interp(k0, ref.k[pos], ref.e[pos])
        kk = np.array([2.0, ref.k[pos].max()])
        for slope, name in guides:
            ax.loglog(kk, e0 * (kk / k0) ** slope, "--", lw=0.7, color="gray")
            ax.annotate(f"${name}$", (kk[-1], e0 * (kk[-1] / k0) ** slope), fontsize=8)
    ax.set_xlabel("k")
    ax.set_ylabel("E(k)")
    if labels:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_resolution_comparison(spectra_by_label, path, offset_decades=1.0):
    """Full- and reduced-resolution spectra, one offset group per label."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for i, (label, specs) in enumerate(spectra_by_label.items()):
        factor = 10.0 ** (-offset_decades * i)
        for style, (subl, spec) in zip(["-", "--", ":"], specs.items()):
            pos = spec.e > 0
            ax.loglog(spec.k[pos], factor * spec.e[pos], style, lw=1.0,
                      label=f"{label} {subl}")
    ax.set_xlabel("k")
    ax.set_ylabel("E(k) (offset per group)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_trajectory(trajectory, path):
    """Blob paths in the plane; one line per blob."""
    times = [t for t, _ in trajectory]
    xs = np.array([p for _, p in trajectory])  # (steps, N, 2)
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    for i in range(xs.shape[1]):
        ax.plot(xs[:, i, 0], xs[:, i, 1], lw=0.8)
        ax.plot(xs[0, i, 0], xs[0, i, 1], "ko", ms=3)
    ax.set_aspect("equal")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_title(f"t = 0 .. {times[-1]:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
