"""Independent oracles used by the tests.

The hitting-probability oracle builds the literal Markov chain on the
ball of a given radius, absorbing at the target letter and killed at the
boundary, and solves the linear hitting system by iteration.  Killing at
the boundary biases the value downward by at most the probability of
returning from the sphere, which decays geometrically in the radius.
"""

from __future__ import annotations

import numpy as np

from freewalk.groups import FreeProduct, Letter, append_letter
from freewalk.traffic import StepDistribution


def ball_words(product: FreeProduct, radius: int) -> list[tuple[Letter, ...]]:
    words: list[tuple[Letter, ...]] = [()]
    frontier: list[tuple[Letter, ...]] = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            last = w[-1].factor if w else -1
            for u in product.alphabet:
                if u.factor != last:
                    nxt.append(w + (u,))
        words.extend(nxt)
        frontier = nxt
    return words


def hitting_oracle(
    product: FreeProduct,
    mu: StepDistribution,
    target: Letter,
    radius: int,
    tol: float = 1e-13,
) -> float:
    """P(walk started at 1 visits ``target`` before leaving the radius ball)."""
    words = ball_words(product, radius)
    index = {w: i for i, w in enumerate(words)}
    n = len(words)
    tgt = index[(target,)]
    support = [(u, p) for u, p in zip(product.alphabet, mu.probs) if p > 0]
    rows, cols, vals = [], [], []
    for w, i in index.items():
        if i == tgt:
            continue
        for u, p in support:
            j = index.get(append_letter(product, w, u))
            if j is not None:
                rows.append(i)
                cols.append(j)
                vals.append(p)
    rows = np.asarray(rows)
    cols = np.asarray(cols)
    vals = np.asarray(vals)
    q = np.zeros(n)
    q[tgt] = 1.0
    for _ in range(200_000):
        nq = np.bincount(rows, weights=vals * q[cols], minlength=n)
        nq[tgt] = 1.0
        delta = float(np.max(np.abs(nq - q)))
        q = nq
        if delta < tol:
            break
    return float(q[index[()]])
