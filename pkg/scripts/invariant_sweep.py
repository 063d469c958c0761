"""Sweep basis skewness and metric conditioning; print worst invariant defects.

Shows how each identity degrades as a basis approaches coplanarity or a
metric approaches singularity, and where the degeneracy guard takes over.
"""
import argparse

import numpy as np

from oblique import gram
from oblique.errors import DegenerateBasis, SingularGram
from oblique.metric import MetricTensor, inverse_metric
from oblique.reciprocal import (
    Basis3,
    completeness_defect,
    components_via_gram,
    contravariant_components,
    duality_defect,
    reciprocal_basis,
)
from oblique.euclid3 import Vec3


def skewed_basis(rng, flatness):
    """Unit-ish vectors whose third member leans into the plane of the first two."""
    a, b = rng.normal(size=3), rng.normal(size=3)
    n = np.cross(a, b)
    c = rng.normal() * a + rng.normal() * b + flatness * n / np.linalg.norm(n)
    return Basis3.from_rows([a.tolist(), b.tolist(), c.tolist()])


def sweep_bases(rng, trials):
    print(f"{'flatness':>10} {'duality':>10} {'complete':>10} {'routes':>10} {'basis rej':>10} {'gram rej':>10}")
    for flatness in 10.0 ** -np.arange(0, 15, 2):
        dual_w = comp_w = route_w = 0.0
        rejected = gram_rejected = 0
        for _ in range(trials):
            try:
                b = skewed_basis(rng, flatness)
            except DegenerateBasis:
                rejected += 1
                continue
            d = reciprocal_basis(b)
            scale = np.max(np.abs(b.rows)) * np.max(np.abs(d.rows))
            dual_w = max(dual_w, np.max(np.abs(duality_defect(b, d))) / scale)
            comp_w = max(comp_w, np.max(np.abs(completeness_defect(b))))
            v = Vec3(*rng.normal(size=3))
            x = np.array(contravariant_components(v, b).values)
            try:
                y = np.array(components_via_gram(v, b).values)
            except SingularGram:
                gram_rejected += 1
                continue
            route_w = max(route_w, np.max(np.abs(x - y)) / np.max(np.abs(x)))
        print(
            f"{flatness:10.0e} {dual_w:10.2e} {comp_w:10.2e} {route_w:10.2e}"
            f" {rejected:>6}/{trials} {gram_rejected:>6}/{trials}"
        )


def sweep_metrics(rng, trials):
    print(f"\n{'cond':>10} " + " ".join(f"{'n=' + str(n):>10}" for n in range(2, 7)))
    for cond in 10.0 ** np.arange(0, 13, 2):
        cells = []
        for n in range(2, 7):
            worst = 0.0
            for _ in range(trials):
                q, _ = np.linalg.qr(rng.normal(size=(n, n)))
                lam = np.exp(rng.uniform(0, np.log(cond), size=n)) if cond > 1 else np.ones(n)
                lam[0], lam[-1] = 1.0, cond
                g = (q * lam) @ q.T
                g = MetricTensor(0.5 * (g + g.T))
                worst = max(worst, np.max(np.abs(g.g @ inverse_metric(g).g - np.eye(n))) / n)
            cells.append(f"{worst:10.2e}")
        print(f"{cond:10.0e} " + " ".join(cells))


def sweep_unit_determinant(rng, trials):
    print(f"\n{'D band':>16} {'|closed - generic| / |A|':>26}")
    bands = [(1e-1, 1.0), (1e-3, 1e-1), (1e-6, 1e-3), (1e-9, 1e-6)]
    worst = {band: 0.0 for band in bands}
    for _ in range(trials):
        e = rng.normal(size=(3, 3))
        e /= np.linalg.norm(e, axis=1)[:, None]
        raw = gram.gram_matrix(e).entries.copy()
        np.fill_diagonal(raw, 1.0)
        g = gram.GramMatrix(raw)
        d = gram.determinant_unit3(g)
        for lo, hi in bands:
            if lo < d <= hi:
                a = gram.invert(g).entries
                err = np.max(np.abs(gram.closed_form_inverse_unit3(g).entries - a)) / np.max(np.abs(a))
                worst[(lo, hi)] = max(worst[(lo, hi)], err)
    for (lo, hi), w in worst.items():
        print(f"{lo:7.0e}..{hi:<7.0e} {w:26.2e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    sweep_bases(rng, args.trials)
    sweep_metrics(rng, args.trials // 4)
    sweep_unit_determinant(rng, args.trials * 50)


if __name__ == "__main__":
    main()
