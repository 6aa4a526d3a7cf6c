#!/usr/bin/env python3
"""Independent reference values frozen into the C++ tests.

Everything here is computed by direct enumeration with exact fractions and
shares no code with the library. Run it to reproduce the constants.
"""
from fractions import Fraction
from itertools import product
from math import asin, pi, sqrt, floor, log


def sgn(x, at_zero=-1):
    return 1 if x > 0 else (-1 if x < 0 else at_zero)


def occupation_counts(n, sgn0=-1):
    """counts[s] = number of the 2^n paths with sum_{k=1..n} sgn(X_{k-1}) = s."""
    counts = {}
    for steps in product((1, -1), repeat=n):
        x, s = 0, 0
        for k in range(n):
            s += sgn(x, sgn0)
            x += steps[k]
        counts[s] = counts.get(s, 0) + 1
    return counts


def arcsine_cdf(x):
    if x <= -1:
        return 0.0
    if x >= 1:
        return 1.0
    return 2 / pi * asin(sqrt((x + 1) / 2))


def law_distance(n):
    counts = occupation_counts(n)
    total = 2 ** n
    below, d = 0, 0.0
    for s in sorted(counts):
        v = s / n
        f = arcsine_cdf(v)
        d = max(d, abs(below / total - f), abs((below + counts[s]) / total - f))
        below += counts[s]
    return d


def expect(func, support):
    """Exact E[func(u)] over u uniform on {-1,+1}^support."""
    total = Fraction(0)
    for u in product((1, -1), repeat=support):
        total += func(u)
    return total / 2 ** support


def umax(u, K):
    return -1 if not K else max(u[k - 1] for k in K)


def window_max_rho(m, k):
    # E[max(u_{k-m}, ..., u_{k-1})], empty window -> -1
    K = list(range(max(1, k - m), k))
    return expect(lambda u: umax(u, K), max(k - 1, 1))


def window_max_theta(m, k, l):
    K = list(range(max(1, k - m), k))
    L = list(range(max(1, l - m), l))
    return expect(lambda u: umax(u, K) * umax(u, L), max(k, l, 2) - 1)


def intersection_d(m, N):
    def M(k):
        return set(range(max(1, k - m), k))
    return [sum(len(M(k) & M(n + 1)) for k in range(1, n + 1)) / n for n in range(1, N + 1)]


def first_match_ratio(lengths):
    out = []
    for n in range(1, len(lengths) + 1):
        first = next(k for k in range(1, n + 1) if lengths[k - 1] == lengths[n - 1])
        out.append(Fraction(first, n))
    return out


if __name__ == "__main__":
    print("occupation counts n=4:", sorted(occupation_counts(4).items()))
    print("occupation counts n=5:", sorted(occupation_counts(5).items()))
    for n in (2, 3, 4, 5, 10, 16, 20):
        print(f"law distance n={n}: {law_distance(n):.17g}")
    print("window-max m=2 rho_k k=1..5:", [str(window_max_rho(2, k)) for k in range(1, 6)])
    print("window-max m=3 rho_k k=1..6:", [str(window_max_rho(3, k)) for k in range(1, 7)])
    print("window-max m=2 theta(4,5), theta(4,7):", window_max_theta(2, 4, 5), window_max_theta(2, 4, 7))
    print("window-max m=3 theta(5,6):", window_max_theta(3, 5, 6))
    print("intersection d window m=2, N=1..8:", intersection_d(2, 8))
    print("prefix(1/2) N(n)/n n=1..8:", [str(x) for x in first_match_ratio([floor(k / 2) for k in range(1, 9)])])
    print("prefix-log N(n)/n at n=20,21,60:",
          [str(first_match_ratio([floor(log(k)) for k in range(1, 61)])[i - 1]) for i in (20, 21, 60)])
    # E[max(u1,u2) max(u2,u3)]: linked sets
    print("E[u[12] u[23]]:", expect(lambda u: umax(u, [1, 2]) * umax(u, [2, 3]), 3))
    print("E[u[12] u[3]]:", expect(lambda u: umax(u, [1, 2]) * umax(u, [3]), 3))
    print("E[u[12] u[13] u[23]]:", expect(lambda u: umax(u, [1, 2]) * umax(u, [1, 3]) * umax(u, [2, 3]), 3))
