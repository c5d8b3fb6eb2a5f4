"""Local computations at a place of K: square classes and Hilbert symbols.

Residues modulo P^k are coordinate vectors reduced against the HNF basis
of P^k.  For dyadic P all questions are answered by finite searches whose
precision is fixed by Hensel's lemma.
"""

from functools import lru_cache
from itertools import product

from . import arith
from .arith import hnf_reduce, kronecker_symbol
from .errors import InputError
from .field import (
    FieldElem,
    PrimeIdeal,
    RealPlace,
    _coord_norm,
    _int_coords,
    coord_mul,
    elem_valuation,
    from_coords,
)


@lru_cache(maxsize=None)
def power_basis(P: PrimeIdeal, k: int):
    """HNF basis of P^k."""
    return (P.ideal ** k).basis


def residues(P: PrimeIdeal, k: int):
    """A full residue system of O_K / P^k, as integer coordinate tuples."""
    basis = power_basis(P, k)
    return list(product(*(range(basis[i][i]) for i in range(len(basis)))))


def to_residue(elem: FieldElem, P: PrimeIdeal, k: int):
    """Residue of a P-integral element modulo P^k."""
    Z, D = _int_coords(elem)
    basis = power_basis(P, k)
    if D != 1:
        if D % P.p == 0:
            raise InputError("element is not integral at P")
        # invert D modulo p^k, which is a multiple of P^k
        mod = P.p ** k
        inv = pow(D, -1, mod)
        Z = tuple(z * inv for z in Z)
    return hnf_reduce(Z, basis)


def _mul_mod(d, u, v, basis):
    return hnf_reduce(coord_mul(d, u, v), basis)


@lru_cache(maxsize=None)
def squares_mod(P: PrimeIdeal, k: int) -> frozenset:
    basis = power_basis(P, k)
    return frozenset(_mul_mod(P.d, z, z, basis) for z in residues(P, k))


def unit_rep(y: FieldElem, P: PrimeIdeal):
    """Write y = u * pi^s * (square in K_P) with u integral, v_P(u) = 0, s in {0, 1}.

    Returns (u, s); only global squares and (pi'/p)^2-type factors are
    used, so u lies in the square class of y * pi^-s.
    """
    if not y:
        raise InputError("zero has no square class")
    Z, D = _int_coords(y)
    Y = from_coords(P.d, Z) * D  # = D^2 * y
    m = elem_valuation(Y, P)
    s = m % 2
    if s:
        Y = Y * P.uniformizer
        m += 1
    if m:
        p = P.p
        if P.f == 2 or P.d == 1:
            Y = Y / (p ** m)
        else:
            Y = Y * P.uniformizer.conj() ** m / (p ** m)
    if elem_valuation(Y, P) != 0 or not Y.is_integral():
        raise InputError("unit representative failed")  # pragma: no cover
    return Y, s


def legendre(u: FieldElem, P: PrimeIdeal) -> int:
    """Quadratic residue symbol of a P-unit at an odd prime P."""
    if P.p == 2:
        raise InputError("legendre needs an odd prime")
    p = P.p
    Z, D = _int_coords(u)
    if D % p == 0:
        u, _ = unit_rep(u, P)
        Z, D = _int_coords(u)
    if P.d == 1:
        return kronecker_symbol(Z[0] * D, p)
    if P.f == 2:
        return kronecker_symbol(_coord_norm(P.d, Z) % p, p)
    val = (Z[0] + Z[1] * P.root) * D
    return kronecker_symbol(val % p, p)


def _dyadic_is_square_unit(u: FieldElem, P: PrimeIdeal) -> bool:
    k = 2 * P.e + 1
    return to_residue(u, P, k) in squares_mod(P, k)


def is_local_square(y: FieldElem, P: PrimeIdeal) -> bool:
    u, s = unit_rep(y, P)
    if s:
        return False
    if P.p != 2:
        return legendre(u, P) == 1
    return _dyadic_is_square_unit(u, P)


def dyadic_square_depth(u: FieldElem, P: PrimeIdeal) -> int:
    """max over z of min(v_P(u - z^2), 2e) for a P-unit u."""
    k = 2 * P.e
    basis = power_basis(P, k)
    ur = to_residue(u, P, k)
    best = 0
    for z in residues(P, k):
        diff = tuple(a - b for a, b in zip(ur, _mul_mod(P.d, z, z, basis)))
        diff = hnf_reduce(diff, basis)
        if not any(diff):
            return k
        best = max(best, elem_valuation(from_coords(P.d, diff), P))
    return best


def disc_exponent(delta: FieldElem, P: PrimeIdeal) -> int:
    """Exponent of P in the relative discriminant of K_P(sqrt delta)/K_P.

    Zero means unramified (the square case included).
    """
    u, s = unit_rep(delta, P)
    if P.p != 2:
        return 1 if s else 0
    e = P.e
    if s:
        return 2 * e + 1
    k = dyadic_square_depth(u, P)
    if k >= 2 * e:
        return 0
    return 2 * e + 1 - k


def real_sign(y: FieldElem, v: RealPlace) -> int:
    if y.d == 1:
        return 1 if y.x > 0 else -1
    return y.sign(v.index)


def _tame_symbol(a, b, P):
    alpha = elem_valuation(a, P)
    beta = elem_valuation(b, P)
    c = a ** beta * b ** (-alpha)
    if (alpha * beta) % 2:
        c = -c
    return legendre(c, P)


@lru_cache(maxsize=None)
def _dyadic_solvable(P: PrimeIdeal, k: int, x, y):
    """Primitive solvability of x X^2 + y Y^2 = Z^2 modulo P^k, by cases on the unit coordinate."""
    basis = power_basis(P, k)
    d = P.d
    sq = squares_mod(P, k)
    one = hnf_reduce((1,) + (0,) * (len(basis) - 1), basis)
    ax = {_mul_mod(d, x, s, basis) for s in sq}
    by = {_mul_mod(d, y, s, basis) for s in sq}
    one_minus_by = {hnf_reduce(tuple(o - t for o, t in zip(one, w)), basis) for w in by}
    if ax & one_minus_by:
        return True
    x_plus_by = {hnf_reduce(tuple(a + t for a, t in zip(x, w)), basis) for w in by}
    if x_plus_by & sq:
        return True
    ax_plus_y = {hnf_reduce(tuple(a + t for a, t in zip(w, y)), basis) for w in ax}
    return bool(ax_plus_y & sq)


def _dyadic_symbol(a, b, P):
    ua, sa = unit_rep(a, P)
    ub, sb = unit_rep(b, P)
    pi = P.uniformizer
    an = ua * pi if sa else ua
    bn = ub * pi if sb else ub
    k = 2 * P.e + 3
    x = to_residue(an, P, k)
    y = to_residue(bn, P, k)
    return 1 if _dyadic_solvable(P, k, x, y) else -1


def hilbert_symbol(K, v, a, b) -> int:
    """Hilbert symbol (a, b)_v, +1 iff a x^2 + b y^2 = z^2 is solvable at v."""
    d = K.d if hasattr(K, "d") else K
    a = a if isinstance(a, FieldElem) else FieldElem(d, a)
    b = b if isinstance(b, FieldElem) else FieldElem(d, b)
    if not a or not b:
        raise InputError("Hilbert symbol of zero")
    if isinstance(v, RealPlace):
        return -1 if real_sign(a, v) < 0 and real_sign(b, v) < 0 else 1
    if v == "complex":
        return 1
    if v.p != 2:
        return _tame_symbol(a, b, v)
    return _dyadic_symbol(a, b, v)


def candidate_primes(*elems):
    """Rational primes dividing 2 and the numerators/denominators of the norms."""
    ps = {2}
    for y in elems:
        n = y.norm() if y.d != 1 else y.x
        ps |= set(arith.factor(n.numerator)) | set(arith.factor(n.denominator))
    return sorted(ps)
