"""Brute-force ground truth in M_2(K): maximal orders End(O + a) and embeddings.

An embedding of Omega = O_K + b*theta (theta^2 = t*theta - n) into
End(O + a) = [[O, a^-1], [a, O]] is a matrix X = [[alpha, beta], [gamma, t - alpha]]
with det X = n and b*X inside the order, i.e.

    alpha in b^-1,  beta in b^-1 a^-1,  gamma in b^-1 a.

The search runs over a coordinate box for alpha and beta and solves for
gamma = (alpha (t - alpha) - n) / beta exactly, which covers every witness
whose alpha and beta coordinates lie in the box.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import InputError, ResourceRefusal
from .field import FieldElem, Ideal, PrimeIdeal, elem_valuation, from_coords, unit_ideal
from .local import residues

DEFAULT_BOUND = 30
MAX_CLASS_NUMBER = 16
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class LatticeOrder:
    """End(O_K + a) as the matrix ring [[O_K, a^-1], [a, O_K]]."""

    K: object = field(repr=False)
    a: Ideal
    label: str
    class_index: int

    def contains(self, X) -> bool:
        (al, be), (ga, de) = X
        O = unit_ideal(self.K.d)
        return O.contains(al) and O.contains(de) and self.a.inverse().contains(be) and self.a.contains(ga)


@dataclass(frozen=True)
class EmbeddingWitness:
    """theta -> X with X^2 - t X + n = 0 and b X inside the order."""

    matrix: tuple
    t: FieldElem
    n: FieldElem
    b: Ideal
    order: LatticeOrder = field(repr=False)

    def char_poly_holds(self) -> bool:
        (al, be), (ga, de) = self.matrix
        X2 = ((al * al + be * ga, al * be + be * de), (ga * al + de * ga, ga * be + de * de))
        rows = []
        for i in range(2):
            for j in range(2):
                v = X2[i][j] - self.t * self.matrix[i][j] + (self.n if i == j else 0)
                rows.append(v)
        return not any(rows)

    def in_slots(self) -> bool:
        binv = self.b.inverse()
        a = self.order.a
        (al, be), (ga, de) = self.matrix
        return (
            binv.contains(al)
            and binv.contains(de)
            and (binv * a.inverse()).contains(be)
            and (binv * a).contains(ga)
        )

    def is_valid(self) -> bool:
        return self.char_poly_holds() and self.in_slots()


def enumerate_maximal_orders_M2(K):
    """One End(O + a) per class of Cl(K)/Cl(K)^2, trivial class first.

    The rep of each coset is the lowest-norm class representative.
    """
    G = K.class_group
    if G.order > MAX_CLASS_NUMBER:
        raise ResourceRefusal(f"class number {G.order} exceeds {MAX_CLASS_NUMBER}")
    squares = set(G.squares())
    seen, out = [], []
    for i in range(G.order):
        coset = frozenset(G.mul(i, s) for s in squares)
        if coset in seen:
            continue
        seen.append(coset)
        a = G.reps[i]
        label = "End(O+O)" if i == 0 else f"End(O+a{i})"
        out.append(LatticeOrder(K, a, label, i))
    return out


def _coords_of(elem, n):
    c = elem.coords()
    return [c[i] for i in range(n)]


def _lcm_den(values):
    from math import lcm

    out = 1
    for v in values:
        out = lcm(out, v.denominator)
    return out


def _in_lattice_mask(V, basis):
    """Rows of the integer matrix V (shape (k, n)) lying in the HNF lattice."""
    n = len(basis)
    V = V.copy()
    ok = np.ones(V.shape[0], dtype=bool)
    for i in reversed(range(n)):
        piv = basis[i][i]
        ok &= V[:, i] % piv == 0
        q = V[:, i] // piv
        for j in range(n):
            if basis[i][j]:
                V[:, j] = V[:, j] - q * basis[i][j]
    return ok


def candidate_box(bound: int, deg: int):
    """Coordinate vectors of height <= bound, smallest height first.

    Ties break on the sum of absolute values, then lexicographically with
    positive entries before negative ones; the order is fixed and total.
    """
    rng = range(-bound, bound + 1)
    return sorted(
        product(rng, repeat=deg),
        key=lambda c: (max(map(abs, c)), sum(map(abs, c)), tuple((abs(x), x < 0) for x in c)),
    )


def search_embedding(O: LatticeOrder, t, n, bound: int = DEFAULT_BOUND, b: Ideal = None):
    """First witness in the candidate order of (alpha, beta) coordinates, or None."""
    if bound < 1:
        raise InputError("bound must be >= 1")
    K = O.K
    d = K.d
    t = t if isinstance(t, FieldElem) else FieldElem(d, t)
    n = n if isinstance(n, FieldElem) else FieldElem(d, n)
    b = b if b is not None else unit_ideal(d)
    binv = b.inverse()
    A_slot, B_slot, C_slot = binv, binv * O.a.inverse(), binv * O.a
    deg = K.degree
    a_basis = A_slot.elements()
    u = B_slot.elements()
    box = candidate_box(bound, deg)
    grid = np.array(box, dtype=np.int64)
    # norm of beta = sum q_ij beta_i beta_j
    q = {}
    for i in range(deg):
        for j in range(i, deg):
            if i == j:
                q[i, j] = u[i].norm()
            else:
                q[i, j] = (u[i] * u[j].conj()).trace()
    for ac in box:
        alpha = FieldElem(d, 0)
        for c, e in zip(ac, a_basis):
            alpha = alpha + e * c
        m = alpha * (t - alpha) - n
        if not m:
            return _witness(O, alpha, FieldElem(d, 0), FieldElem(d, 0), t, n, b)
        # gamma = m * conj(beta) / N(beta); coordinates scaled by C_slot.den
        cvec = [_coords_of(m * ui.conj(), deg) for ui in u]
        L = _lcm_den([x for row in cvec for x in row] + list(q.values()))
        Cint = [[int(x * L * C_slot.den) for x in row] for row in cvec]
        Qint = {k: int(v * L) for k, v in q.items()}
        big = bound * max(abs(x) for row in Cint for x in row) * deg
        bigq = bound * bound * sum(abs(v) for v in Qint.values())
        dtype = np.int64 if max(big, bigq) * max(1, C_slot.den) < _INT64_SAFE else object
        G = grid.astype(dtype)
        V = np.zeros((G.shape[0], deg), dtype=dtype)
        for i in range(deg):
            for j in range(deg):
                V[:, j] = V[:, j] + G[:, i] * Cint[i][j]
        Qn = np.zeros(G.shape[0], dtype=dtype)
        for (i, j), v in Qint.items():
            Qn = Qn + G[:, i] * G[:, j] * v
        nz = Qn != 0
        safe = np.where(nz, Qn, 1)
        ok = nz.copy()
        for j in range(deg):
            ok &= V[:, j] % safe == 0
        if not ok.any():
            continue
        W = np.zeros_like(V)
        for j in range(deg):
            W[:, j] = np.where(ok, V[:, j] // safe, 0)
        ok &= _in_lattice_mask(W, C_slot.basis)
        hits = np.nonzero(ok)[0]
        if len(hits):
            bc = grid[hits[0]]
            beta = FieldElem(d, 0)
            for c, e in zip(bc, u):
                beta = beta + e * int(c)
            gamma = m / beta
            return _witness(O, alpha, beta, gamma, t, n, b)
    return None


def _witness(O, alpha, beta, gamma, t, n, b):
    w = EmbeddingWitness(((alpha, beta), (gamma, t - alpha)), t, n, b, O)
    if not w.is_valid():
        raise InputError("search produced an invalid witness")  # pragma: no cover
    return w


def optimal_defect(O: LatticeOrder, w: EmbeddingWitness, P: PrimeIdeal) -> int:
    """v_P of the ideal y with (K[X] cap O)_P = O_P + y_P X."""
    (al, be), (ga, de) = w.matrix
    a = O.a
    terms = []
    if be:
        terms.append(-a.valuation(P) - elem_valuation(be, P))
    if ga:
        terms.append(a.valuation(P) - elem_valuation(ga, P))
    diff = w.t - al * 2
    if diff:
        terms.append(-elem_valuation(diff, P))
    if not terms:
        raise InputError("witness is scalar")
    return max(terms)


def check_optimal_local(O: LatticeOrder, w: EmbeddingWitness, W, P: PrimeIdeal) -> bool:
    """Whether K[X] cap O equals the image of Omega locally at P."""
    if not w.is_valid():
        raise InputError("invalid witness")
    return optimal_defect(O, w, P) == W.b.valuation(P)


def neighbors_containing(w: EmbeddingWitness, P: PrimeIdeal):
    """Labels of the N(P)+1 maximal orders adjacent to M_2(O_P) that contain
    p^k X, where k = v_P(b); requires the witness to live in End(O + O)."""
    if not w.order.a.is_unit():
        raise InputError("neighbor test is set up for End(O + O)")
    k = w.b.valuation(P)
    scale = P.uniformizer ** k if P.f == 1 else FieldElem(P.d, P.p) ** k
    (al, be), (ga, de) = [[x * scale for x in row] for row in w.matrix]
    out = []
    if not be or elem_valuation(be, P) >= 1:
        out.append("inf")
    for c in residues(P, 1):
        ce = from_coords(P.d, c) if P.d != 1 else FieldElem(1, c[0])
        val = be * ce * ce + (al - de) * ce - ga
        if not val or elem_valuation(val, P) >= 1:
            out.append(str(c))
    return out


@dataclass
class OracleRow:
    order: LatticeOrder
    gamma: tuple
    predicted: bool
    witness: EmbeddingWitness = None
    optimal: bool = None

    @property
    def found(self) -> bool:
        return self.witness is not None


@dataclass
class OracleReport:
    verdict: object
    rows: list
    base: LatticeOrder = None
    agreements: list = field(default_factory=list)
    disagreements: list = field(default_factory=list)
    bound_hits: list = field(default_factory=list)
    consistent_absent: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.bound_hits


def _optimal_everywhere(O, w, W, norm_bound=100):
    K = O.K
    Ps = set()
    for P in K.primes(2, norm_bound):
        if P.norm <= norm_bound:
            Ps.add(P)
    for I in (O.a, W.b):
        for P, _ in I.factor():
            Ps.add(P)
    entries = [x for row in w.matrix for x in row] + [w.t - w.matrix[0][0] * 2]
    for x in (x for x in entries if x):
        nrm = x.norm() if K.d != 1 else x.x
        for p in set(_primes(nrm.numerator)) | set(_primes(nrm.denominator)):
            Ps.update(K.primes_above(p))
    return all(check_optimal_local(O, w, W, P) for P in Ps)


def _primes(n):
    from .arith import factor

    return factor(n)


def cross_validate(R, W, bound: int = DEFAULT_BOUND, optimal: bool = False) -> OracleReport:
    """Compare the decider with brute-force search over the maximal orders of M_2(K)."""
    from .selectivity import admits, decide_embedding, decide_optimal

    A = R.algebra
    if not A.is_split or R.local:
        raise InputError("the oracle covers maximal orders of M_2(K) only")
    K = R.K
    verdict = decide_optimal(R, W) if optimal else decide_embedding(R, W)
    orders = enumerate_maximal_orders_M2(K)
    t, n, b = W.presentation()
    found = {}
    for O in orders:
        found[O.label] = search_embedding(O, t, n, bound, b)
    opt = {O.label: _optimal_everywhere(O, found[O.label], W) if found[O.label] is not None else None for O in orders}
    hit = {O.label: found[O.label] is not None and (opt[O.label] or not optimal) for O in orders}
    base = next((O for O in orders if hit[O.label]), None)
    rows = []
    param = verdict.param
    for O in orders:
        w = found[O.label]
        if base is None or param is None:
            gamma, pred = (), verdict.outcome != "none"
        else:
            gamma = param.gamma_of_ideal(O.a / base.a)
            cls = next(c for c in param.classes() if c.gamma == gamma)
            pred = admits(cls, verdict)
        rows.append(OracleRow(O, gamma, pred, w, opt[O.label]))
    report = OracleReport(verdict, rows, base)
    for r in rows:
        if r.predicted and hit[r.order.label]:
            report.agreements.append(r.order.label)
        elif r.predicted:
            report.bound_hits.append(r.order.label)
        elif hit[r.order.label]:
            report.disagreements.append(r.order.label)
        else:
            report.consistent_absent.append(r.order.label)
    return report

