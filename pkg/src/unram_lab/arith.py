"""Small integer helpers: primality, factorization, primitive roots."""

from math import isqrt


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for q in range(3, isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


def prime_factors(n):
    """Distinct prime factors of n, ascending."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def split_prime_power(n, p):
    """Return (e, r) with n = r * p**e and p not dividing r."""
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def primitive_root(q):
    """Smallest generator of (Z/qZ)^x for a prime q."""
    if q == 2:
        return 1
    qs = prime_factors(q - 1)
    g = 2
    while any(pow(g, (q - 1) // f, q) == 1 for f in qs):
        g += 1
    return g
