"""Figures for certificates, orbits and batch summaries (written to files, Agg backend)."""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .certificate import ChainWitness, EigenformWitness, InvariantWitness, PeriodicWitness  # noqa: E402
from .oracle import orbit_prefix  # noqa: E402
from .predicate import AbsCmp, AuxRoot, Congruence, PolyCmp  # noqa: E402


def _float_eval(form, v, root) -> float:
    pts = [Fraction(x) for x in v]
    if root is None or form.nvars == len(pts):
        return float(form.evaluate(pts))
    r = root.refine(Fraction(1, 2 ** 60))
    return float(form.evaluate(pts + [(r.lo + r.hi) / 2]))


def _threshold(body, root) -> float | None:
    if isinstance(body, AbsCmp):
        b = body.bound
        if b.nvars and b.degree > 0 and root is not None:
            r = root.refine(Fraction(1, 2 ** 60))
            t = (r.lo + r.hi) / 2
            return float(b.evaluate([Fraction(0)] * (b.nvars - 1) + [t]))
        return float(b.constant_term())
    if isinstance(body, PolyCmp):
        return float(body.rhs)
    return None


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_certificate(inst, cert, path, span: int | None = None) -> Path:
    """The certified quantity along the orbit against the set's threshold.

    Eigenform certificates plot |F(A^n X)| on a log axis, chain certificates
    the top form; anything else falls back to the orbit coordinates.
    """
    w = cert.witness
    n_max = span or max(2 * cert.index + 5, 15)
    orbit = orbit_prefix(inst.A, inst.X, n_max)
    ns = np.arange(n_max + 1)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    case = cert.provenance.get("case", "?")
    if isinstance(w, EigenformWitness) and not isinstance(cert.set, PolyCmp):
        body = cert.set.body if isinstance(cert.set, AuxRoot) else cert.set
        vals = np.array([abs(_float_eval(w.form, v, w.root)) for v in orbit])
        ax.semilogy(ns, np.maximum(vals, 1e-300), "o-", ms=3, label="|F(A^n X)|")
        thr = _threshold(body, w.root)
        if thr:
            ax.axhline(thr, color="C3", ls="--", label=f"set threshold {thr:.4g}")
        ty = abs(_float_eval(w.form, list(inst.Y), w.root))
        if ty:
            ax.axhline(ty, color="C2", ls=":", label=f"|F(Y)| = {ty:.4g}")
        lam = cert.provenance.get("eigenvalue")
        ax.set_title(f"{case}: eigenform, lambda ~ {lam:.5g}" if isinstance(lam, float) else case)
    elif isinstance(w, ChainWitness):
        top = w.forms[-1]
        vals = np.array([float(top.evaluate(list(v))) for v in orbit])
        ax.plot(ns, vals, "o-", ms=3, label="top chain form along the orbit")
        ax.axhline(float(top.evaluate(list(inst.Y))), color="C2", ls=":", label="value at Y")
        thr = _threshold(cert.set, None)
        if thr is not None and not isinstance(cert.set, Congruence):
            ax.axhline(thr, color="C3", ls="--", label=f"threshold {thr:.4g}")
            if isinstance(cert.set, AbsCmp):
                ax.axhline(-thr, color="C3", ls="--")
        ax.set_title(f"{case}: chain of length {len(w.forms)}")
    else:
        arr = np.array([[float(x) for x in v] for v in orbit])
        for i in range(arr.shape[1]):
            ax.plot(ns, arr[:, i], "o-", ms=2, label=f"x{i}")
        ax.set_yscale("symlog")
        ax.set_title(f"{case}: orbit coordinates")
    ax.axvline(cert.index, color="k", lw=0.8, alpha=0.6, label=f"index N = {cert.index}")
    ax.set_xlabel("n")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_orbit_2d(inst, path, steps: int = 60, cert=None) -> Path:
    """First two coordinates of the orbit with the target; draws a quadratic invariant if certified."""
    orbit = orbit_prefix(inst.A, inst.X, steps)
    arr = np.array([[float(x) for x in v[:2]] for v in orbit])
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.plot(arr[:, 0], arr[:, 1], ".", ms=4, label="A^n X")
    ax.plot([float(inst.X[0])], [float(inst.X[1])], "s", color="C1", label="X")
    ax.plot([float(inst.Y[0])], [float(inst.Y[1])], "*", ms=12, color="C3", label="Y")
    w = cert.witness if cert is not None else None
    if isinstance(w, InvariantWitness) and w.form.nvars in (2, 3):
        pts = np.vstack([arr, [[float(inst.Y[0]), float(inst.Y[1])]]])
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        pad = 0.25 * max(hi - lo) + 0.5
        xs = np.linspace(lo[0] - pad, hi[0] + pad, 300)
        ys = np.linspace(lo[1] - pad, hi[1] + pad, 300)
        gx, gy = np.meshgrid(xs, ys)
        extra = [1.0] if w.form.nvars == 3 else []
        coeffs = [(e, float(c)) for e, c in w.form.terms.items()]
        gz = sum(c * gx ** e[0] * gy ** e[1] * (extra[0] ** e[2] if extra else 1) for e, c in coeffs)
        level = float(cert.set.rhs)
        ax.contour(gx, gy, gz, levels=[level], colors="C2", linewidths=1)
        ax.plot([], [], color="C2", label="invariant level set")
    if isinstance(w, PeriodicWitness):
        ax.set_title(f"period {w.period}")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x0")
    ax.set_ylabel("x1")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_case_distribution(rows, path) -> Path:
    """Bar chart of outcomes/cases over a batch."""
    counts = Counter(r.get("case") or r.get("outcome") for r in rows)
    labels = sorted(counts)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(labels) + 2), 3.6))
    ax.bar(range(len(labels)), [counts[k] for k in labels], color="C0")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("instances")
    ax.set_title(f"{len(rows)} instances")
    idx = [r["index"] for r in rows if isinstance(r.get("index"), int)]
    if idx:
        ax.text(0.98, 0.95, f"median index {int(np.median(idx))}, max {max(idx)}",
                transform=ax.transAxes, ha="right", va="top", fontsize=8)
    return _save(fig, path)
