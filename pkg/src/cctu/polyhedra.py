"""Polyhedra {x : Tx <= b} over TU matrices, the central problem type, and
the proximity-box oracle used to cross-check every structural solver.

The oracle's completeness rests on the proximity bound: a feasible instance
has a solution within l_inf distance m-|R| of any point satisfying the
relaxation, and (for optimization) an optimal solution within that distance
of an optimal relaxation vertex.  So scanning that box decides the instance
exactly at desk scale.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import lp
from .errors import DimensionError, InfeasibleRelaxationError, ScaleError
from .matrices import IntMatrix, TUMatrix

DEFAULT_ENUM_BUDGET = 4_000_000


@dataclass(frozen=True)
class Polyhedron:
    """Inequality system T x <= b with T certified TU."""

    T: TUMatrix
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        if self.T.nrows != len(self.b):
            raise DimensionError("rhs length differs from row count")

    @property
    def nvars(self):
        return self.T.ncols

    def contains(self, x):
        return all(v <= bv for v, bv in zip(self.T.matrix.mul_vec(x), self.b))

    def with_rows(self, rows, rhs):
        mat = IntMatrix(self.T.matrix.rows + tuple(tuple(r) for r in rows))
        return Polyhedron(TUMatrix.trusted(mat), self.b + tuple(rhs))


@dataclass(frozen=True)
class RCctufInstance:
    """Find x with Tx <= b and gamma.x in R (mod m); minimize c.x if c given."""

    P: Polyhedron
    gamma: tuple
    m: int
    R: frozenset
    c: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(int(v) for v in self.gamma))
        object.__setattr__(self, "R", frozenset(int(r) for r in self.R))
        if self.c is not None:
            object.__setattr__(self, "c", tuple(int(v) for v in self.c))
            if len(self.c) != self.P.nvars:
                raise DimensionError("objective length mismatch")
        if len(self.gamma) != self.P.nvars:
            raise DimensionError("gamma length mismatch")
        if not self.R:
            raise ValueError("empty target residue set")
        if not all(0 <= r < self.m for r in self.R):
            raise ValueError("target residues outside {0..m-1}")

    @property
    def nvars(self):
        return self.P.nvars

    def residue(self, x):
        return sum(g * v for g, v in zip(self.gamma, x)) % self.m

    def is_feasible_point(self, x):
        return self.P.contains(x) and self.residue(x) in self.R

    def objective(self, x):
        return sum(cv * xv for cv, xv in zip(self.c, x))

    def without_objective(self):
        return self if self.c is None else RCctufInstance(self.P, self.gamma, self.m, self.R)

    def replaced(self, **kw):
        data = {"P": self.P, "gamma": self.gamma, "m": self.m, "R": self.R, "c": self.c}
        data.update(kw)
        return RCctufInstance(**data)


@dataclass(frozen=True)
class LpOutcome:
    tag: str  # "optimal" | "unbounded" | "infeasible"
    vertex: tuple = None  # integral point
    value: Fraction = None
    ray: tuple = None


def lp_optimize(P, c, sense="min"):
    """Exact optimum of c.x over P; vertices come back integral (TU)."""
    if len(c) != P.nvars:
        raise DimensionError("objective length mismatch")
    res = lp.solve_lp(P.T.matrix.rows, P.b, list(c), sense)
    if res.status == "optimal":
        return LpOutcome("optimal", lp.as_integer_vector(res.x), res.value)
    if res.status == "unbounded":
        return LpOutcome("unbounded", ray=res.ray)
    return LpOutcome("infeasible")


def integral_feasible_point(P):
    """Some integral point of P, or None."""
    out = lp_optimize(P, (0,) * P.nvars, "min")
    return out.vertex if out.tag == "optimal" else None


@dataclass(frozen=True)
class WidthResult:
    finite: bool
    width: int = None
    argmin: tuple = None
    argmax: tuple = None


def width(P, d):
    """Exact integer width of P along d, with minimizing/maximizing points.

    Over a TU system the LP optima are attained at integral points, so the
    integer width equals the LP width whenever both optima are finite.
    """
    lo = lp_optimize(P, d, "min")
    if lo.tag == "infeasible":
        raise InfeasibleRelaxationError("width of an empty polyhedron")
    hi = lp_optimize(P, d, "max")
    if lo.tag == "unbounded" or hi.tag == "unbounded":
        return WidthResult(False)
    w = int(hi.value - lo.value)
    return WidthResult(True, w, lo.vertex, hi.vertex)


@dataclass(frozen=True)
class OracleOutcome:
    status: str  # "feasible" | "infeasible" | "unbounded"
    x: tuple = None
    value: int = None


def oracle_solve(inst, budget=DEFAULT_ENUM_BUDGET):
    """Decide `inst` by scanning the proximity box around a relaxation point.

    Feasibility mode enumerates around any relaxation point; optimization
    mode enumerates around an optimal relaxation vertex and returns the best
    box point, which the proximity bound makes globally optimal.  An
    unbounded relaxation with a feasible instance is reported "unbounded"
    when an objective is present.
    """
    if inst.c is not None:
        out = lp_optimize(inst.P, inst.c, "min")
        if out.tag == "infeasible":
            return OracleOutcome("infeasible")
        if out.tag == "unbounded":
            probe = oracle_solve(inst.without_objective(), budget)
            if probe.status == "feasible":
                return OracleOutcome("unbounded", x=probe.x)
            return OracleOutcome("infeasible")
        x0 = out.vertex
    else:
        x0 = integral_feasible_point(inst.P)
        if x0 is None:
            return OracleOutcome("infeasible")
    if len(inst.R) == inst.m:
        val = inst.objective(x0) if inst.c is not None else None
        return OracleOutcome("feasible", x0, val)
    found, x, value = search_box(inst, x0, inst.m - len(inst.R), budget)
    if not found:
        return OracleOutcome("infeasible")
    return OracleOutcome("feasible", tuple(x), value if inst.c is not None else None)


def search_box(inst, center, radius, budget=DEFAULT_ENUM_BUDGET):
    """Kernel-backed scan of the l_inf ball around `center`.

    Returns (found, point, value); first feasible point in lexicographic
    order without an objective, best objective value with one.
    """
    n = inst.nvars
    if (2 * radius + 1) ** n > budget:
        raise ScaleError(f"box of {(2 * radius + 1) ** n} points exceeds budget {budget}")
    from . import kernels

    lo = [v - radius for v in center]
    hi = [v + radius for v in center]
    rmask = sum(1 << r for r in inst.R)
    found, x, value = kernels.box_search(
        inst.P.T.matrix.flat(),
        inst.P.T.nrows,
        n,
        list(inst.P.b),
        list(inst.gamma),
        inst.m,
        rmask,
        lo,
        hi,
        None if inst.c is None else list(inst.c),
        inst.c is not None,
    )
    return (found, tuple(x) if x is not None else None, value)
