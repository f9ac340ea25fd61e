"""Exact rational simplex over systems T x <= b with free integer-matrix data.

Two-phase primal simplex with Bland's rule on a dense Fraction tableau.
Free variables are split (x = u - v), inequalities get slacks, rows with
negative right-hand side get artificials in phase 1.  Everything is exact;
over TU systems the returned basic solutions are integral, which callers
assert rather than trust.

This deliberately replaces the strongly-polynomial LP framework the theory
assumes: exactness is what keeps the downstream structural guarantees intact at
desk scale.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "unbounded" | "infeasible"
    x: tuple = None  # Fractions, length n
    value: Fraction = None
    ray: tuple = None  # primitive integer improving ray for "unbounded"


def solve_lp(rows, b, c, sense="min"):
    """Optimize c.x over {x : rows*x <= b}, x real and free.

    rows: sequence of integer row tuples (possibly empty), b: ints, c: ints.
    """
    n = len(c)
    k = len(rows)
    if sense == "max":
        res = solve_lp(rows, b, [-v for v in c], "min")
        if res.status == "optimal":
            return LpResult("optimal", res.x, -res.value)
        return res

    # Standard form: columns = u (n) | v (n) | slacks (k), M z = rhs, z >= 0.
    ncols = 2 * n + k
    M = []
    rhs = []
    for i in range(k):
        row = [Fraction(v) for v in rows[i]] + [Fraction(-v) for v in rows[i]]
        row += [Fraction(1 if j == i else 0) for j in range(k)]
        bv = Fraction(b[i])
        if bv < 0:
            row = [-v for v in row]
            bv = -bv
        M.append(row)
        rhs.append(bv)

    basis = [None] * k
    art_cols = []
    for i in range(k):
        if M[i][2 * n + i] == 1:
            basis[i] = 2 * n + i
        else:
            col = ncols + len(art_cols)
            art_cols.append(col)
            basis[i] = col
    total = ncols + len(art_cols)
    for i in range(k):
        M[i] += [Fraction(1 if basis[i] == ncols + j else 0) for j in range(len(art_cols))]

    if art_cols:
        phase1_cost = [Fraction(0)] * ncols + [Fraction(1)] * len(art_cols)
        status = _simplex(M, rhs, basis, phase1_cost, total, allowed=total)
        assert status == "optimal", "phase-1 objective is bounded below by zero"
        if sum(phase1_cost[basis[i]] * rhs[i] for i in range(k)) != 0:
            return LpResult("infeasible")
        _pivot_out_artificials(M, rhs, basis, ncols)

    cost = [Fraction(v) for v in c] + [Fraction(-v) for v in c] + [Fraction(0)] * k
    cost += [Fraction(0)] * len(art_cols)
    status = _simplex(M, rhs, basis, cost, total, allowed=ncols)
    if status == "optimal":
        z = [Fraction(0)] * total
        for i in range(k):
            z[basis[i]] = rhs[i]
        x = tuple(z[j] - z[n + j] for j in range(n))
        value = sum(Fraction(cj) * xj for cj, xj in zip(c, x))
        return LpResult("optimal", x, value)
    # Unbounded: reconstruct the improving ray from the entering column.
    enter = status
    z_dir = [Fraction(0)] * total
    z_dir[enter] = Fraction(1)
    for i in range(k):
        z_dir[basis[i]] = -M[i][enter]
    ray = tuple(z_dir[j] - z_dir[n + j] for j in range(n))
    return LpResult("unbounded", ray=_primitive(ray))


def _simplex(M, rhs, basis, cost, total, allowed):
    """Bland-rule simplex on an explicit tableau.

    Entering columns are restricted to indices < allowed (phase 2 excludes
    artificials this way).  Returns "optimal" or the entering column index on
    unboundedness.
    """
    k = len(M)
    # reduced costs r = cost - cost_B . B^-1 A, maintained by elimination
    red = list(cost)
    obj_rows_done = set()
    for i in range(k):
        cb = cost[basis[i]]
        if cb != 0:
            for j in range(total):
                red[j] -= cb * M[i][j]
            obj_rows_done.add(i)
    while True:
        enter = -1
        for j in range(allowed):
            if red[j] < 0:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = None
        for i in range(k):
            if M[i][enter] > 0:
                ratio = rhs[i] / M[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return enter
        _do_pivot(M, rhs, basis, red, leave, enter, total)


def _do_pivot(M, rhs, basis, red, leave, enter, total):
    piv = M[leave][enter]
    inv = Fraction(1) / piv
    M[leave] = [v * inv for v in M[leave]]
    rhs[leave] *= inv
    prow = M[leave]
    for i in range(len(M)):
        if i != leave and M[i][enter] != 0:
            f = M[i][enter]
            M[i] = [a - f * p for a, p in zip(M[i], prow)]
            rhs[i] -= f * rhs[leave]
    f = red[enter]
    if f != 0:
        for j in range(total):
            red[j] -= f * prow[j]
    basis[leave] = enter


def _pivot_out_artificials(M, rhs, basis, ncols):
    """Swap remaining zero-level artificials for structural columns where
    possible; rows left with no structural pivot are redundant and harmless.
    """
    k = len(M)
    for i in range(k):
        if basis[i] >= ncols:
            for j in range(ncols):
                if M[i][j] != 0:
                    piv = M[i][j]
                    M[i] = [v / piv for v in M[i]]
                    rhs[i] /= piv
                    for ii in range(k):
                        if ii != i and M[ii][j] != 0:
                            f = M[ii][j]
                            M[ii] = [a - f * p for a, p in zip(M[ii], M[i])]
                            rhs[ii] -= f * rhs[i]
                    basis[i] = j
                    break


def _primitive(vec):
    """Scale a rational vector to a primitive integer vector (gcd 1)."""
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def as_integer_vector(x):
    """Convert exact rationals to ints, asserting integrality (TU systems)."""
    out = []
    for v in x:
        assert v.denominator == 1, f"non-integral vertex coordinate {v}"
        out.append(int(v))
    return tuple(out)
