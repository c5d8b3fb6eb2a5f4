"""Independent reference computations used by the tests (binary quadratic forms, Pell)."""

from math import gcd, isqrt


def disc_of(d):
    return d if d % 4 == 1 else 4 * d


def class_number_imaginary(D):
    """Number of reduced primitive positive definite forms of discriminant D < 0."""
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if c == a and b < 0:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            h += 1
        a += 1
    return h


def _reduced_indefinite(D):
    s = isqrt(D)
    forms = []
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        N = (D - b * b) // 4  # = -ac > 0
        for a0 in range(1, N + 1):
            if N % a0:
                continue
            for a in (a0, -a0):
                c = -N // a
                A = abs(a)
                if (b + 2 * A) ** 2 <= D:
                    continue
                if 2 * A - b >= 0 and (2 * A - b) ** 2 >= D:
                    continue
                if gcd(gcd(A, b), abs(c)) != 1:
                    continue
                forms.append((a, b, c))
    return forms


def _rho(form, D):
    a, b, c = form
    s = isqrt(D)
    C = abs(c)
    lo = s - 2 * C + 1
    bp = lo + ((-b - lo) % (2 * C))
    return (c, bp, (bp * bp - D) // (4 * c))


def narrow_class_number_real(D):
    forms = set(_reduced_indefinite(D))
    seen, cycles = set(), 0
    for f in forms:
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = _rho(g, D)
    return cycles


def pell_unit(d):
    """Smallest unit > 1 of the maximal order, as (x, y) with unit = x + y*sqrt(d)."""
    from fractions import Fraction

    half = d % 4 == 1
    y = 1
    while True:
        if half:
            for sgn in (-4, 4):
                X2 = d * y * y + sgn
                if X2 > 0 and isqrt(X2) ** 2 == X2 and (isqrt(X2) - y) % 2 == 0:
                    return Fraction(isqrt(X2), 2), Fraction(y, 2)
        else:
            for sgn in (-1, 1):
                X2 = d * y * y + sgn
                if X2 > 0 and isqrt(X2) ** 2 == X2:
                    return Fraction(isqrt(X2)), Fraction(y)
        y += 1
