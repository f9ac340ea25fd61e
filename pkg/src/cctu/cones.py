"""Integral decomposition into elementary extremal rays.

Given two points of a TU system, writes their difference as an integral
nonnegative combination of elementary vectors such that dropping any
sub-collection of terms stays feasible (the free-subsum property).  The
procedure is fully constructive: shift to the origin, add
orthant-sign rows so the cone is pointed, flip rows to put the target in the
cone, then peel off one elementary extremal ray per iteration with an exact
min-ratio step length.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import lp
from .errors import CctuError, DimensionError
from .matrices import IntMatrix, TUMatrix


@dataclass(frozen=True)
class ElementaryDecomposition:
    """y - x0 = sum(coeffs[i] * rays[i]) with elementary rays and free subsums."""

    x0: tuple
    y: tuple
    rays: tuple  # n integer vectors
    coeffs: tuple  # n nonnegative integers

    def reconstructs(self):
        n = len(self.x0)
        total = [0] * n
        for lam, ray in zip(self.coeffs, self.rays):
            for i in range(n):
                total[i] += lam * ray[i]
        return tuple(total) == tuple(yv - xv for yv, xv in zip(self.y, self.x0))

    def point_for(self, mu):
        """x0 + sum(mu[i] * rays[i]) for 0 <= mu <= coeffs."""
        x = list(self.x0)
        for m_i, ray in zip(mu, self.rays):
            for i in range(len(x)):
                x[i] += m_i * ray[i]
        return tuple(x)


def _row_rank(rows):
    if not rows:
        return 0
    work = [[Fraction(v) for v in r] for r in rows]
    ncols = len(work[0])
    rank = 0
    for j in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][j] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = Fraction(1) / work[rank][j]
        work[rank] = [v * inv for v in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][j] != 0:
                f = work[i][j]
                work[i] = [a - f * p for a, p in zip(work[i], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def _primitive_int(vec):
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


def _vertex_of_optimal_face(rows, rhs, x):
    """Purify an optimal LP point to a vertex of {rows * x <= rhs}.

    Repeatedly moves along a null direction of the tight rows until a new
    constraint binds; requires the feasible set to be bounded along every
    such direction, which holds for the sliced-cone polytopes used here.
    """
    x = list(x)
    n = len(x)
    while True:
        tight = [r for r, bv in zip(rows, rhs) if sum(Fraction(a) * v for a, v in zip(r, x)) == bv]
        null = _null_direction(tight, n)
        if null is None:
            return tuple(x)
        best_t = None
        direction = null
        for sgn in (1, -1):
            d = [sgn * v for v in null]
            # largest step keeping every constraint satisfied
            t_max = None
            for r, bv in zip(rows, rhs):
                rd = sum(Fraction(a) * v for a, v in zip(r, d))
                if rd > 0:
                    slack = bv - sum(Fraction(a) * v for a, v in zip(r, x))
                    t = slack / rd
                    if t_max is None or t < t_max:
                        t_max = t
            if t_max is not None:
                best_t = t_max
                direction = d
                break
        if best_t is None:
            raise CctuError("optimal face unbounded; cone is not pointed")
        for i in range(n):
            x[i] += best_t * direction[i]


def _null_direction(rows, n):
    """A nonzero rational vector orthogonal to all rows, or None."""
    work = [[Fraction(v) for v in r] for r in rows]
    pivots = {}
    rank = 0
    for j in range(n):
        piv = next((i for i in range(rank, len(work)) if work[i][j] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = Fraction(1) / work[rank][j]
        work[rank] = [v * inv for v in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][j] != 0:
                f = work[i][j]
                work[i] = [a - f * p for a, p in zip(work[i], work[rank])]
        pivots[j] = rank
        rank += 1
    if rank == n:
        return None
    free = next(j for j in range(n) if j not in pivots)
    d = [Fraction(0)] * n
    d[free] = Fraction(1)
    for j, i in pivots.items():
        d[j] = -work[i][free]
    return d


def _extremal_ray(eq_rows, lt_rows, n):
    """An elementary extremal ray of {eq_rows x = 0, lt_rows x <= 0}.

    Maximizes a functional that is strictly positive on the cone minus the
    origin (minus the sum of the strict rows), sliced at value one; the
    optimal vertex, purified and rescaled to gcd one, is the ray.
    """
    sigma = [-sum(r[j] for r in lt_rows) for j in range(n)]
    rows = []
    rhs = []
    for r in eq_rows:
        rows.append(tuple(r))
        rhs.append(0)
        rows.append(tuple(-v for v in r))
        rhs.append(0)
    for r in lt_rows:
        rows.append(tuple(r))
        rhs.append(0)
    rows.append(tuple(sigma))
    rhs.append(1)
    res = lp.solve_lp(rows, rhs, [-v for v in sigma], "min")  # maximize sigma.x
    assert res.status == "optimal", "sliced pointed cone must be a polytope"
    if -res.value != 1:
        return None  # cone is {0}
    vertex = _vertex_of_optimal_face(rows, [Fraction(v) for v in rhs], res.x)
    ray = _primitive_int(vertex)
    assert any(ray), "extremal ray must be nonzero"
    return ray


def decompose_pointed_tu_cone(T, y, max_iter_slack=2):
    """Write y (with Ty <= 0, cone pointed) as an integral nonnegative
    combination of elementary extremal rays of {x : Tx <= 0}.

    Returns (rays, coeffs), padded with zero-coefficient entries to exactly n
    terms.  Raises CctuError when the cone is not pointed or y is outside.
    """
    mat = T.matrix if isinstance(T, TUMatrix) else T
    n = mat.ncols
    if len(y) != n:
        raise DimensionError("point length mismatch")
    if _row_rank(mat.rows) < n:
        raise CctuError("cone is not pointed (matrix lacks full column rank)")
    if any(v > 0 for v in mat.mul_vec(y)):
        raise CctuError("point outside the cone")

    y_cur = list(y)
    rays = []
    coeffs = []
    for _ in range(n + max_iter_slack):
        if not any(y_cur):
            break
        prods = mat.mul_vec(y_cur)
        eq_rows = [r for r, p in zip(mat.rows, prods) if p == 0]
        lt_all = [(r, p) for r, p in zip(mat.rows, prods) if p != 0]
        # strict rows dependent on the tight ones are redundant
        base_rank = _row_rank(eq_rows)
        lt_rows = []
        lt_prods = []
        for r, p in zip((r for r, _ in lt_all), (p for _, p in lt_all)):
            if _row_rank(eq_rows + [r]) > base_rank:
                lt_rows.append(r)
                lt_prods.append(p)
        assert lt_rows, "nonzero point with all constraints tight contradicts pointedness"
        ray = _extremal_ray(eq_rows, lt_rows, n)
        assert ray is not None
        # step length: exact min ratio over rows the ray pushes toward tightness
        lam = None
        for r, p in zip(lt_rows, lt_prods):
            a = -sum(rv * qv for rv, qv in zip(r, ray))
            if a > 0:
                ratio = Fraction(-p, a)
                if lam is None or ratio < lam:
                    lam = ratio
        assert lam is not None, "ray escapes every strict constraint; cone not pointed"
        assert lam.denominator == 1 and lam > 0, f"non-integral step length {lam}"
        lam = int(lam)
        rays.append(tuple(ray))
        coeffs.append(lam)
        for i in range(n):
            y_cur[i] -= lam * ray[i]
    else:
        raise CctuError("ray extraction failed to terminate")

    pad_ray = rays[-1] if rays else (0,) * n
    while len(rays) < n:
        rays.append(pad_ray)
        coeffs.append(0)
    return tuple(rays), tuple(coeffs)


def decompose_solutions(P, x0, y):
    """Rays and integral coefficients for y - x0 over T x <= b.

    Shifts x0 to the origin, adds orthant-sign rows matching y - x0, flips
    rows with positive product so the shifted target lies in a pointed TU
    cone, and delegates to the cone decomposition.
    """
    mat = P.T.matrix
    n = mat.ncols
    if not P.contains(x0) or not P.contains(y):
        raise CctuError("both points must satisfy the system")
    diff = tuple(yv - xv for yv, xv in zip(y, x0))
    sign_rows = tuple(
        tuple((-1 if diff[i] >= 0 else 1) if j == i else 0 for j in range(n)) for i in range(n)
    )
    flipped = []
    for row in mat.rows + sign_rows:
        prod = sum(rv * dv for rv, dv in zip(row, diff))
        flipped.append(row if prod <= 0 else tuple(-v for v in row))
    cone_matrix = IntMatrix(tuple(flipped))
    rays, coeffs = decompose_pointed_tu_cone(cone_matrix, diff)
    return ElementaryDecomposition(tuple(x0), tuple(y), rays, coeffs)
