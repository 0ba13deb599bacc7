"""Brute-force reference computations, deliberately written without the
package's ranking or counting shortcuts."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath


def pairwise_u(a, b):
    """Mann-Whitney U for ``a`` counted pair by pair (ties count one half)."""
    return sum(1.0 if x > y else 0.5 if x == y else 0.0 for x in a for y in b)


def rank_sum_p_bruteforce(a, b):
    """Two-sided permutation p-value: relabel the pooled values every possible way."""
    pooled = list(a) + list(b)
    na = len(a)
    observed = pairwise_u(a, b)
    below = above = total = 0
    for idx in itertools.combinations(range(len(pooled)), na):
        chosen = set(idx)
        xa = [pooled[i] for i in idx]
        xb = [pooled[i] for i in range(len(pooled)) if i not in chosen]
        u = pairwise_u(xa, xb)
        total += 1
        below += u <= observed
        above += u >= observed
    return min(1.0, 2 * min(below, above) / total)


def walsh_w_plus(x):
    """W+ as the number of positive Walsh averages (x_i + x_j) / 2, i <= j."""
    n = len(x)
    return sum(1 for i in range(n) for j in range(i, n) if x[i] + x[j] > 0)


def signed_rank_p_bruteforce(x):
    """Two-sided p over all 2^n sign flips of the data themselves."""
    mags = [abs(v) for v in x if v != 0]
    observed = walsh_w_plus([v for v in x if v != 0])
    below = above = 0
    for signs in itertools.product((1, -1), repeat=len(mags)):
        w = walsh_w_plus([s * m for s, m in zip(signs, mags)])
        below += w <= observed
        above += w >= observed
    return min(1.0, 2 * min(below, above) / 2 ** len(mags))


def binomial_p_exact(k, n, p0):
    """Minimum-likelihood two-sided p in exact rational arithmetic.

    ``p0`` is read as the decimal it was written as, so 0.3 means 3/10.
    """
    p = Fraction(str(p0))
    pmf = [math.comb(n, i) * p**i * (1 - p) ** (n - i) for i in range(n + 1)]
    return float(sum(q for q in pmf if q <= pmf[k]))


def t_quantile(prob, df):
    """Student-t quantile by root-finding on the numerically integrated density."""
    mpmath.mp.dps = 30
    nu = mpmath.mpf(df)
    c = mpmath.gamma((nu + 1) / 2) / (mpmath.sqrt(nu * mpmath.pi) * mpmath.gamma(nu / 2))

    def cdf(t):
        return mpmath.mpf(1) / 2 + mpmath.quad(lambda s: c * (1 + s**2 / nu) ** (-(nu + 1) / 2), [0, t])

    return float(mpmath.findroot(lambda t: cdf(t) - prob, 2.0))


def lower_quantile_bruteforce(values, certainty):
    """Smallest value v with (#values <= v) / n >= certainty, scanning every value."""
    n = len(values)
    candidates = [v for v in values if Fraction(sum(1 for w in values if w <= v), n) >= Fraction(certainty)]
    return min(candidates)
