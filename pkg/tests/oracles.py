"""Slow reference implementations. Nothing here imports the library's
sweeps, so agreement with them is real evidence."""

import math


def legendre_enum(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if any(y * y % p == a for y in range(1, p)) else -1


def residue_count_loop(p, f, laurent=False):
    dom = range(1, p) if laurent else range(p)
    return len({f(x) % p for x in dom})


def inverse_scan(x, p):
    return next(r for r in range(1, p) if r * x % p == 1)


def points_enum(m, n, p):
    """Affine solutions of y^2 = x^3 + mx + n plus the point at infinity."""
    return 1 + sum(1 for x in range(p) for y in range(p) if (y * y - x**3 - m * x - n) % p == 0)


def naive_eta(factors, n_max, shift=1):
    """q^shift * prod_k prod_(s,e) (1 - q^{sk})^e by dense multiplication."""
    body = [0] * (n_max + 1)
    body[0] = 1
    for s, e in factors:
        for _ in range(e):
            k = 1
            while s * k <= n_max:
                step = s * k
                body = [body[i] - (body[i - step] if i >= step else 0) for i in range(n_max + 1)]
                k += 1
    out = [0] * (n_max + 1)
    for i in range(n_max + 1 - shift):
        out[i + shift] = body[i]
    return out


def quaternary_enum(coeffs, n):
    a, b, c, d = coeffs
    r = math.isqrt(n) + 1
    total = 0
    for x in range(-r, r + 1):
        rx = n - a * x * x
        if rx < 0:
            continue
        for y in range(-r, r + 1):
            ry = rx - b * y * y
            if ry < 0:
                continue
            for z in range(-r, r + 1):
                rz = ry - c * z * z
                if rz < 0:
                    continue
                if rz % d == 0:
                    w2 = rz // d
                    w = math.isqrt(w2)
                    if w * w == w2:
                        total += 1 if w == 0 else 2
    return total


def triangular_enum(coeffs, n):
    a, b, c, d = coeffs
    tri = []
    x = 0
    while x * (x + 1) // 2 <= n:
        tri.append(x * (x + 1) // 2)
        x += 1
    total = 0
    for u in tri:
        for v in tri:
            for w in tri:
                rest = n - a * u - b * v - c * w
                if rest < 0 or rest % d:
                    continue
                total += (rest // d) in tri
    return total
