"""Exact integer and rational primitives.

Everything here works on Python ints and :class:`fractions.Fraction`;
no floating point is used anywhere in the package.
"""

from fractions import Fraction
from math import gcd, isqrt

from sympy import factorint, isprime

from .errors import InputError


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for any integer a and nonzero integer n."""
    if n == 0:
        raise InputError("kronecker_symbol: n must be nonzero")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # powers of two in n
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a|n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def valuation(x, p: int) -> int:
    """Exponent of the prime ``p`` in the nonzero rational ``x``."""
    x = Fraction(x)
    if x == 0:
        raise InputError("valuation of zero is undefined")
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise InputError("valuation of zero is undefined")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def is_square_mod_power(a: int, p: int, k: int) -> bool:
    """Whether the p-adic unit ``a`` is a square modulo ``p**k``.

    Uses the Hensel thresholds: for odd p only the residue mod p matters,
    for p = 2 only the residue mod 8 matters once k >= 3.
    """
    if k < 1:
        raise InputError("is_square_mod_power: k must be >= 1")
    if a % p == 0:
        raise InputError("is_square_mod_power: a must be prime to p")
    if p != 2:
        return kronecker_symbol(a, p) == 1
    if k == 1:
        return True
    if k == 2:
        return a % 4 == 1
    return a % 8 == 1


def is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def rational_sqrt(x):
    """Exact square root of a nonnegative rational, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def factor(n: int) -> dict:
    """Prime factorization of |n| as {p: exponent}."""
    n = abs(n)
    if n <= 1:
        return {}
    return {int(p): int(e) for p, e in factorint(n).items()}


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factor(n).values())


def squarefree_part(n: int):
    """Split n = s * r**2 with s squarefree; return (s, r)."""
    if n == 0:
        raise InputError("squarefree_part of zero")
    s = -1 if n < 0 else 1
    r = 1
    for p, e in factor(n).items():
        s *= p ** (e % 2)
        r *= p ** (e // 2)
    return s, r


def check_prime(p: int) -> None:
    if not isprime(p):
        raise InputError(f"{p} is not prime")


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def hnf(vectors, n: int):
    """Hermite normal form of the integer lattice spanned by ``vectors``.

    Returns ``n`` rows; row ``i`` has a positive pivot in column ``i``,
    zeros in columns greater than ``i``, and entries in columns ``j < i``
    reduced into ``[0, pivot_j)``. The lattice must have full rank.
    """
    pool = [list(v) for v in vectors if any(v)]
    pivots = [None] * n
    for col in reversed(range(n)):
        active = [v for v in pool if v[col] != 0]
        rest = [v for v in pool if v[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda v: abs(v[col]))
            piv = active[0]
            nxt = [piv]
            for v in active[1:]:
                q = v[col] // piv[col]
                w = [vi - q * pi for vi, pi in zip(v, piv)]
                if w[col] != 0:
                    nxt.append(w)
                elif any(w):
                    rest.append(w)
            active = nxt
        if not active:
            raise InputError("lattice is not of full rank")
        piv = active[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        pivots[col] = piv
        pool = rest
    for i in range(n):
        for j in range(i + 1, n):
            row = pivots[j]
            q = row[i] // pivots[i][i]
            if q:
                pivots[j] = [a - q * b for a, b in zip(row, pivots[i])]
    return tuple(tuple(r) for r in pivots)


def hnf_reduce(vec, basis):
    """Canonical representative of ``vec`` modulo the HNF lattice ``basis``."""
    v = list(vec)
    for i in reversed(range(len(basis))):
        q = v[i] // basis[i][i]
        if q:
            v = [a - q * b for a, b in zip(v, basis[i])]
    return tuple(v)


def hnf_contains(vec, basis) -> bool:
    return not any(hnf_reduce(vec, basis))
