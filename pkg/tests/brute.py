"""Slow reference implementations that share no code with the package.

Functions are plain lists of value tuples indexed by mixed-radix rank (last
coordinate fastest), groups are tuples of cyclic orders.
"""

import itertools


def elements(orders):
    return list(itertools.product(*[range(n) for n in orders]))


def add(orders, x, y):
    return tuple((a + b) % n for a, b, n in zip(x, y, orders))


def shift_diff(A, B, values, a):
    """x -> f(x + a) - f(x)."""
    els = elements(A)
    index = {e: i for i, e in enumerate(els)}
    out = []
    for i, x in enumerate(els):
        fx = values[i]
        fxa = values[index[add(A, x, a)]]
        out.append(tuple((u - v) % n for u, v, n in zip(fxa, fx, B)))
    return tuple(out)


def brute_fundeg(A, B, values, cap=12):
    """Least m with every m+1 fold difference zero, or None beyond ``cap``.

    Uses every nonzero shift, not only generators.
    """
    zero = tuple(0 for _ in B)
    shifts = [a for a in elements(A) if any(a)]
    level = {tuple(tuple(v) for v in values)}
    level = {t for t in level if any(v != zero for v in t)}
    m = -1
    while level:
        m += 1
        if m > cap:
            return None
        nxt = set()
        for t in level:
            for a in shifts:
                d = shift_diff(A, B, t, a)
                if any(v != zero for v in d):
                    nxt.add(d)
        level = nxt
    return max(m, 0)


def brute_count(points, fns):
    """Number of points where every callable returns a zero value."""
    def is_zero(v):
        if isinstance(v, (tuple, list)):
            return not any(v)
        return v == 0
    return sum(all(is_zero(f(x)) for f in fns) for x in points)


def s_p(n, p):
    s = 0
    while n:
        s += n % p
        n //= p
    return s
