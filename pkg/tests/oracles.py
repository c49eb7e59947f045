"""Independent reference computations shared by unit and acceptance tests."""

import numpy as np

from constrained_lfd.rl.dqn import loss_and_grads


def monotone_paths(n, m):
    """Every path from (0,0) to (n-1,m-1) with unit steps in i, j or both."""
    def rec(i, j):
        if (i, j) == (n - 1, m - 1):
            yield [(i, j)]
            return
        for di, dj in ((1, 1), (1, 0), (0, 1)):
            a, b = i + di, j + dj
            if a < n and b < m:
                for rest in rec(a, b):
                    yield [(i, j)] + rest
    yield from rec(0, 0)


def brute_force_cost(a, b):
    """Exhaustive minimum over monotone paths of summed |a_i - b_j| (1-D)."""
    best = np.inf
    for path in monotone_paths(len(a), len(b)):
        c = 0.0
        for i, j in path:
            c += abs(a[i] - b[j])
        best = min(best, c)
    return best


def numeric_cost(net, s, a, targets):
    q = net.forward(s)
    err = targets - q[np.arange(len(a)), a]
    return float(err @ err) / (2 * len(a))


def finite_difference_errors(net, s, a, targets, h=1e-5, kink=1e-4):
    """Relative errors of analytic vs central-difference gradients, per parameter.

    Returns ``(errors, skipped)``. Batches where any hidden pre-activation
    sits within ``kink`` of zero are reported as skipped since the rectifier
    is not differentiable there.
    """
    _, _, zs = net.forward_cache(s)
    if any(np.min(np.abs(z)) < kink for z in zs[:-1]):
        return None, True
    _, gw, gb = loss_and_grads(net, s, a, targets)
    analytic = []
    for w, b in zip(gw, gb):
        analytic.extend((w, b))
    errors = []
    for p, g in zip(net.params(), analytic):
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + h
            up = numeric_cost(net, s, a, targets)
            p[idx] = old - h
            down = numeric_cost(net, s, a, targets)
            p[idx] = old
            num = (up - down) / (2 * h)
            scale = max(abs(num), abs(g[idx]), 1e-8)
            errors.append(abs(num - g[idx]) / scale)
    return np.array(errors), False


def chi_square_uniform(counts):
    """Pearson statistic and its z-score against a uniform expectation."""
    counts = np.asarray(counts, dtype=float)
    k = len(counts)
    expected = counts.sum() / k
    stat = float(((counts - expected) ** 2 / expected).sum())
    z = (stat - (k - 1)) / np.sqrt(2 * (k - 1))
    return stat, z
