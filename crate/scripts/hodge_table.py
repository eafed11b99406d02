#!/usr/bin/env python3
"""Generate the Hodge integral table used by the graph-sum engine.

Pure psi integrals come from the DVV recursion with the string and dilaton
equations. Hodge integrals in genus <= 2 use:

  * lambda_g formula:  <psi^a lambda_g>_{g,n} = binom(2g-3+n; a) * b_g
  * lambda_g lambda_{g-1} formula (Getzler-Pandharipande)
  * Mumford's formula 12 lambda_1 = kappa_1 - psi + delta for lambda_1
  * Mumford's relation c(E) c(E^v) = 1, i.e. lambda_1^2 = 2 lambda_2 in genus 2

Output lines: ``g; psi-exponents; lambda-exponents; n; num/den``.
Psi exponents are sorted in decreasing order ("-" when n = 0); lambda
exponents are (e1, e2) for lambda_1^e1 lambda_2^e2.

Usage: python3 scripts/hodge_table.py > crates/quasimap/data/hodge.txt
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
import sys

MAX_N = {0: 6, 1: 5, 2: 4}


def bernoulli(n):
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(comb(m + 1, k) * b[k] for k in range(m)) / (m + 1))
    return b[n]


def dfact(k):
    """(k)!! with (-1)!! = 1."""
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def stable(g, n):
    return 2 * g - 2 + n > 0


@lru_cache(maxsize=None)
def psi(g, a):
    """<tau_{a_1} ... tau_{a_n}>_g with a sorted in decreasing order."""
    n = len(a)
    if g < 0 or not stable(g, n) or sum(a) != 3 * g - 3 + n or min(a, default=0) < 0:
        return Fraction(0)
    if g == 0 and a == (0, 0, 0):
        return Fraction(1)
    if g == 1 and a == (1,):
        return Fraction(1, 24)
    if 0 in a and stable(g, n - 1):
        rest = list(a)
        rest.remove(0)
        total = Fraction(0)
        for j in range(len(rest)):
            if rest[j] > 0:
                b = rest.copy()
                b[j] -= 1
                total += psi(g, key(b))
        return total
    if 1 in a and stable(g, n - 1):
        rest = list(a)
        rest.remove(1)
        return (2 * g - 2 + n - 1) * psi(g, key(rest))
    # DVV on the largest exponent d = k + 1.
    k = a[0] - 1
    s = list(a[1:])
    total = Fraction(0)
    for j, dj in enumerate(s):
        b = s[:j] + s[j + 1:] + [dj + k]
        total += Fraction(dfact(2 * k + 2 * dj + 1), dfact(2 * dj - 1)) * psi(g, key(b))
    for r in range(k):
        t = k - 1 - r
        w = Fraction(dfact(2 * r + 1) * dfact(2 * t + 1), 2)
        total += w * psi(g - 1, key(s + [r, t]))
        for g1 in range(g + 1):
            for size in range(len(s) + 1):
                for idx in combinations(range(len(s)), size):
                    left = [s[i] for i in idx]
                    right = [s[i] for i in range(len(s)) if i not in idx]
                    total += w * psi(g1, key(left + [r])) * psi(g - g1, key(right + [t]))
    return total / dfact(2 * k + 3)


def key(xs):
    return tuple(sorted(xs, reverse=True))


def multinomial(total, parts):
    out = factorial(total)
    for p in parts:
        out //= factorial(p)
    return out


def lambda_top(g, a):
    """<psi^a lambda_g>_{g,n}."""
    n = len(a)
    if sum(a) != 2 * g - 3 + n:
        return Fraction(0)
    bg = Fraction(2 ** (2 * g - 1) - 1, 2 ** (2 * g - 1) * factorial(2 * g)) * abs(bernoulli(2 * g))
    return multinomial(2 * g - 3 + n, a) * bg


def lambda_top_two(g, a):
    """<psi^a lambda_g lambda_{g-1}>_{g,n}."""
    n = len(a)
    if sum(a) != g - 2 + n:
        return Fraction(0)
    den = 2 ** (2 * g - 1) * factorial(2 * g)
    for x in a:
        den *= dfact(2 * x - 1)
    return Fraction(factorial(2 * g - 3 + n)) * abs(bernoulli(2 * g)) / den


def lambda_one(g, a):
    """<psi^a lambda_1>_{g,n} via 12 lambda_1 = kappa_1 - sum psi_i + delta."""
    n = len(a)
    if sum(a) != 3 * g - 4 + n:
        return Fraction(0)
    kappa = psi(g, key(list(a) + [2]))
    psis = sum(psi(g, key(a[:i] + (a[i] + 1,) + a[i + 1:])) for i in range(n))
    irr = Fraction(1, 2) * psi(g - 1, key(list(a) + [0, 0]))
    red = Fraction(0)
    seen = set()
    marks = range(n)
    for h in range(g + 1):
        for size in range(n + 1):
            for s in combinations(marks, size):
                sc = tuple(i for i in marks if i not in s)
                div = min((h, s), (g - h, sc))
                if div in seen:
                    continue
                seen.add(div)
                if not (stable(h, len(s) + 1) and stable(g - h, len(sc) + 1)):
                    continue
                left = [a[i] for i in s] + [0]
                right = [a[i] for i in sc] + [0]
                red += psi(h, key(left)) * psi(g - h, key(right))
    return (kappa - psis + irr + red) / 12


def hodge(g, a, e1, e2):
    n = len(a)
    if sum(a) + e1 + 2 * e2 != 3 * g - 3 + n:
        return Fraction(0)
    # String and dilaton first: the closed formulas below assume positive exponents.
    if 0 in a and stable(g, n - 1):
        rest = list(a)
        rest.remove(0)
        total = Fraction(0)
        for j in range(len(rest)):
            if rest[j] > 0:
                b = rest.copy()
                b[j] -= 1
                total += hodge(g, key(b), e1, e2)
        return total
    if 1 in a and stable(g, n - 1):
        rest = list(a)
        rest.remove(1)
        return (2 * g - 2 + n - 1) * hodge(g, key(rest), e1, e2)
    if g == 0:
        return psi(0, key(a)) if (e1, e2) == (0, 0) else Fraction(0)
    if g == 1:
        if e2 > 0 or e1 > 1:
            return Fraction(0)
        return lambda_one(1, a) if e1 == 1 else psi(1, key(a))
    if g == 2:
        # lambda_1^2 = 2 lambda_2, lambda_2^2 = 0
        if e1 >= 2:
            return 2 * hodge(2, a, e1 - 2, e2 + 1)
        if e2 >= 2:
            return Fraction(0)
        if (e1, e2) == (0, 0):
            return psi(2, key(a))
        if (e1, e2) == (1, 0):
            return lambda_one(2, a)
        if (e1, e2) == (0, 1):
            return lambda_top(2, a)
        return lambda_top_two(2, a)
    raise ValueError("genus > 2")


def partitions_into(total, n):
    """Non-increasing n-tuples of non-negative integers summing to total."""
    def rec(rem, slots, cap):
        if slots == 0:
            if rem == 0:
                yield ()
            return
        for x in range(min(rem, cap), -1, -1):
            for rest in rec(rem - x, slots - 1, x):
                yield (x,) + rest
    return rec(total, n, total)


def self_check():
    assert psi(2, (4,)) == Fraction(1, 1152)
    assert psi(2, (3, 2)) == Fraction(29, 5760)
    assert psi(2, (2, 2, 2)) == Fraction(7, 240)
    # genus one: Mumford's formula agrees with the lambda_g formula
    for n in range(1, 5):
        for a in partitions_into(n - 1, n):
            assert lambda_one(1, a) == lambda_top(1, a), a
    assert hodge(2, (), 3, 0) == Fraction(1, 2880)
    assert hodge(2, (), 1, 1) == Fraction(1, 5760)
    assert hodge(2, (3,), 1, 0) == Fraction(1, 480)
    # the lambda_g lambda_{g-1} formula is only used with positive exponents
    assert hodge(2, (2, 2, 0, 0), 1, 1) == 4 * hodge(2, (1, 2, 0), 1, 1) / 2
    assert hodge(2, (2, 2, 0, 0), 1, 1) == Fraction(1, 360)
    assert lambda_top_two(2, (2, 1)) == hodge(2, (2, 1), 1, 1)


def main():
    self_check()
    out = sys.stdout
    out.write("# Hodge integrals over Mbar_{g,n}, g <= 2; generated by scripts/hodge_table.py\n")
    out.write("# g; psi-exponents; lambda-exponents; n; value\n")
    lambdas = {0: [(0, 0)], 1: [(0, 0), (1, 0)], 2: [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0)]}
    for g in range(3):
        for n in range(MAX_N[g] + 1):
            if not stable(g, n) and not (g == 1 and n == 0):
                continue
            for e1, e2 in lambdas[g]:
                deg = 3 * g - 3 + n - e1 - 2 * e2
                if deg < 0 or n == 0 and deg != 0:
                    continue
                for a in partitions_into(deg, n):
                    v = hodge(g, a, e1, e2)
                    if v == 0 or not stable(g, n):
                        continue
                    psi_s = ",".join(map(str, a)) if a else "-"
                    out.write(f"{g}; {psi_s}; {e1},{e2}; {n}; {v.numerator}/{v.denominator}\n")


if __name__ == "__main__":
    main()
