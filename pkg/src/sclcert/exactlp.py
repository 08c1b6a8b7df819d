"""Exact linear programming over arbitrary-precision rationals.

Problems are in equality form: maximize c.x subject to A x = b, x >= 0.
The solver is a two-phase revised simplex with Bland's anti-cycling rule and
exact rational pivoting throughout, so results are exact and deterministic.
A float pass (scipy/HiGHS) can supply a starting basis; the exact engine
re-derives the solution from it and falls back to exact pivoting whenever the
hint is not already optimal, so approximation is never visible in results.

Row representation is sparse; the basis is refactorized with a left-looking
sparse LU before each pivot, which is cheap for the narrow, very sparse bases
that arise here.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from .errors import InternalInvariantViolation, SolveTimeout
from .rationals import ONE, ZERO, Rational, rat

SparseVec = tuple[tuple[int, Rational], ...]


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _normalize_sparse(entries, num_vars: int) -> SparseVec:
    acc: dict[int, Rational] = {}
    items = entries.items() if isinstance(entries, dict) else entries
    for j, v in items:
        j = int(j)
        if not 0 <= j < num_vars:
            raise ValueError(f"variable index {j} out of range 0..{num_vars - 1}")
        v = rat(v)
        if v:
            acc[j] = acc.get(j, ZERO) + v
    return tuple(sorted((j, v) for j, v in acc.items() if v))


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective . x  subject to  rows . x = rhs,  x >= 0."""

    num_vars: int
    rows: tuple[SparseVec, ...]
    rhs: tuple[Rational, ...]
    objective: SparseVec

    @staticmethod
    def make(num_vars: int, rows, rhs, objective) -> "LinearProgram":
        rows = tuple(_normalize_sparse(r, num_vars) for r in rows)
        rhs = tuple(rat(v) for v in rhs)
        if len(rows) != len(rhs):
            raise ValueError("rows and rhs length mismatch")
        return LinearProgram(
            num_vars=num_vars,
            rows=rows,
            rhs=rhs,
            objective=_normalize_sparse(objective, num_vars),
        )

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def columns(self) -> list[list[tuple[int, Rational]]]:
        cols: list[list[tuple[int, Rational]]] = [[] for _ in range(self.num_vars)]
        for i, row in enumerate(self.rows):
            for j, v in row:
                cols[j].append((i, v))
        return cols

    def objective_dense(self) -> list[Rational]:
        c = [ZERO] * self.num_vars
        for j, v in self.objective:
            c[j] = v
        return c


@dataclass(frozen=True)
class LpSolution:
    """Outcome of a solve.

    `assignment` is sparse over structural variables. `basis` has one entry
    per row: a structural variable index, or None when the row's basic column
    is the unit vector there (a degenerate or redundant row); unit slots
    always carry value zero in an optimal solution.
    """

    status: LpStatus
    optimum: Optional[Rational] = None
    assignment: dict[int, Rational] = field(default_factory=dict)
    basis: tuple[Optional[int], ...] = ()
    pivots: int = 0

    def value(self, j: int) -> Rational:
        return self.assignment.get(j, ZERO)


class BasisFactor:
    """Exact sparse LU built one column at a time (left-looking).

    Columns that are linearly dependent on the ones already added are
    rejected, which makes the same code usable for rank-greedy basis
    completion and for factorizing a known basis.
    """

    def __init__(self, num_rows: int):
        self.num_rows = num_rows
        self.pivrows: list[int] = []
        self.prow_index: dict[int, int] = {}
        self.lcols: list[list[tuple[int, Rational]]] = []
        self.ucols: list[list[tuple[int, Rational]]] = []
        self.udiag: list[Rational] = []

    def __len__(self) -> int:
        return len(self.pivrows)

    def try_add_column(self, col: Iterable[tuple[int, Rational]]) -> bool:
        w: dict[int, Rational] = {}
        for i, v in col:
            if v:
                w[i] = w.get(i, ZERO) + v
        ucol: list[tuple[int, Rational]] = []
        for t, r in enumerate(self.pivrows):
            v = w.pop(r, None)
            if not v:
                continue
            ucol.append((t, v))
            for row, mult in self.lcols[t]:
                nv = w.get(row, ZERO) - mult * v
                if nv:
                    w[row] = nv
                elif row in w:
                    del w[row]
        w = {row: v for row, v in w.items() if v}
        if not w:
            return False
        pivot_row = min(w)
        pivot = w.pop(pivot_row)
        t = len(self.pivrows)
        self.pivrows.append(pivot_row)
        self.prow_index[pivot_row] = t
        self.lcols.append([(row, v / pivot) for row, v in sorted(w.items())])
        self.ucols.append(ucol)
        self.udiag.append(pivot)
        return True

    def solve_Bx(self, b: dict[int, Rational]) -> list[Rational]:
        """Solve B x = b; x is indexed by column-insertion order."""
        k = len(self.pivrows)
        bt = {i: v for i, v in b.items() if v}
        y = [ZERO] * k
        for t, r in enumerate(self.pivrows):
            v = bt.pop(r, ZERO)
            y[t] = v
            if v:
                for row, mult in self.lcols[t]:
                    nv = bt.get(row, ZERO) - mult * v
                    if nv:
                        bt[row] = nv
                    elif row in bt:
                        del bt[row]
        if bt:
            raise InternalInvariantViolation("inconsistent system in basis solve")
        x = [ZERO] * k
        for t in range(k - 1, -1, -1):
            xv = y[t] / self.udiag[t]
            x[t] = xv
            if xv:
                for tt, val in self.ucols[t]:
                    y[tt] -= val * xv
        return x

    def solve_yB(self, c: Sequence[Rational]) -> dict[int, Rational]:
        """Solve y B = c (c in column-insertion order); y is keyed by row."""
        k = len(self.pivrows)
        z = [ZERO] * k
        for t in range(k):
            s = c[t]
            for tt, val in self.ucols[t]:
                if z[tt]:
                    s -= val * z[tt]
            z[t] = s / self.udiag[t]
        w = [ZERO] * k
        for t in range(k - 1, -1, -1):
            s = z[t]
            for row, mult in self.lcols[t]:
                ws = w[self.prow_index[row]]
                if ws:
                    s -= mult * ws
            w[t] = s
        return {r: w[t] for t, r in enumerate(self.pivrows) if w[t]}


class _Engine:
    """Two-phase revised simplex with Bland's rule over one LP instance."""

    def __init__(self, lp: LinearProgram, deadline: Optional[float] = None):
        self.lp = lp
        self.m = lp.num_rows
        self.n = lp.num_vars
        self.deadline = deadline
        # Normalize rhs >= 0 by flipping row signs; this only affects the
        # internal copy used for pivoting.
        self.b: list[Rational] = []
        flip = []
        for i, v in enumerate(lp.rhs):
            if v < 0:
                self.b.append(-v)
                flip.append(True)
            else:
                self.b.append(v)
                flip.append(False)
        self.cols: list[list[tuple[int, Rational]]] = [
            [] for _ in range(self.n)
        ]
        for i, row in enumerate(lp.rows):
            for j, v in row:
                self.cols[j].append((i, -v if flip[i] else v))
        self.pivots = 0

    def _check_deadline(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SolveTimeout("lp solve exceeded its deadline")

    def _factor(self, basis: list[Optional[int]]) -> BasisFactor:
        fac = BasisFactor(self.m)
        for i, j in enumerate(basis):
            col = self.cols[j] if j is not None else [(i, ONE)]
            if not fac.try_add_column(col):
                raise InternalInvariantViolation("singular working basis")
        return fac

    def _loop(
        self,
        basis: list[Optional[int]],
        cvec: list[Rational],
        c_unit: Rational,
        pin_units: bool,
    ) -> tuple[str, list[Rational], BasisFactor]:
        """Pivot until optimal or unbounded; returns (status, x_B, factor)."""
        limit = 20 * (self.m + self.n) + 2000
        for _ in range(limit):
            self._check_deadline()
            fac = self._factor(basis)
            x_b = fac.solve_Bx({i: v for i, v in enumerate(self.b) if v})
            basis_set = {j for j in basis if j is not None}
            c_basis = [cvec[j] if j is not None else c_unit for j in basis]
            y = fac.solve_yB(c_basis)
            entering = -1
            for j in range(self.n):
                if j in basis_set:
                    continue
                rc = cvec[j]
                for i, v in self.cols[j]:
                    yi = y.get(i)
                    if yi is not None:
                        rc -= yi * v
                if rc > 0:
                    entering = j
                    break
            if entering < 0:
                return "optimal", x_b, fac
            d = fac.solve_Bx(dict(self.cols[entering]))
            leave_pos = -1
            best_theta = None
            best_key = None
            for pos in range(self.m):
                dp = d[pos]
                if dp > 0:
                    theta = x_b[pos] / dp
                elif pin_units and basis[pos] is None and dp:
                    theta = ZERO
                else:
                    continue
                var_key = basis[pos] if basis[pos] is not None else self.n + pos
                if (
                    best_theta is None
                    or theta < best_theta
                    or (theta == best_theta and var_key < best_key)
                ):
                    best_theta, best_key, leave_pos = theta, var_key, pos
            if leave_pos < 0:
                return "unbounded", x_b, fac
            basis[leave_pos] = entering
            self.pivots += 1
        raise InternalInvariantViolation("simplex failed to terminate")

    def _package(
        self, basis: list[Optional[int]], x_b: list[Rational]
    ) -> LpSolution:
        assignment: dict[int, Rational] = {}
        for pos, j in enumerate(basis):
            if j is None:
                if x_b[pos]:
                    raise InternalInvariantViolation(
                        "unit basis slot carries nonzero value"
                    )
            elif x_b[pos]:
                assignment[j] = x_b[pos]
        cvec = self.lp.objective_dense()
        optimum = ZERO
        for j, v in assignment.items():
            optimum += cvec[j] * v
        return LpSolution(
            status=LpStatus.OPTIMAL,
            optimum=optimum,
            assignment=assignment,
            basis=tuple(basis),
            pivots=self.pivots,
        )

    def solve(self) -> LpSolution:
        basis: list[Optional[int]] = [None] * self.m
        if any(self.b):
            minus_one = -ONE
            status, x_b, _ = self._loop(
                basis, [ZERO] * self.n, minus_one, pin_units=False
            )
            if status != "optimal":
                raise InternalInvariantViolation("phase 1 cannot be unbounded")
            if any(
                x_b[pos] for pos, j in enumerate(basis) if j is None
            ):
                return LpSolution(status=LpStatus.INFEASIBLE, pivots=self.pivots)
        status, x_b, _ = self._loop(
            basis, self.lp.objective_dense(), ZERO, pin_units=True
        )
        if status == "unbounded":
            return LpSolution(status=LpStatus.UNBOUNDED, pivots=self.pivots)
        return self._package(basis, x_b)

    def continue_from(self, candidates: Sequence[int]) -> Optional[LpSolution]:
        """Complete a basis from candidate columns and finish exactly.

        Returns None when the completed basis is not primal feasible (the
        caller then falls back to a cold exact solve).
        """
        fac = BasisFactor(self.m)
        chosen: list[Optional[int]] = []
        seen = set()
        for j in candidates:
            if len(fac) == self.m:
                break
            if j is None or j in seen or not 0 <= j < self.n:
                continue
            seen.add(j)
            if fac.try_add_column(self.cols[j]):
                chosen.append(j)
        covered = set(fac.pivrows)
        for i in range(self.m):
            if len(fac) == self.m:
                break
            if i not in covered:
                if not fac.try_add_column([(i, ONE)]):
                    return None
                chosen.append(None)
        if len(fac) != self.m:
            return None
        # Reorder so basis[pos] is the column pivoting row pos.
        basis: list[Optional[int]] = [None] * self.m
        for t, r in enumerate(fac.pivrows):
            basis[r] = chosen[t]
        try:
            fac2 = self._factor(basis)
            x_b = fac2.solve_Bx({i: v for i, v in enumerate(self.b) if v})
        except InternalInvariantViolation:
            return None
        for pos, j in enumerate(basis):
            if j is None and x_b[pos]:
                return None
            if x_b[pos] < 0:
                return None
        status, x_b, _ = self._loop(
            basis, self.lp.objective_dense(), ZERO, pin_units=True
        )
        if status == "unbounded":
            return LpSolution(status=LpStatus.UNBOUNDED, pivots=self.pivots)
        return self._package(basis, x_b)


def solve_max(lp: LinearProgram, deadline: Optional[float] = None) -> LpSolution:
    """Exact two-phase simplex with Bland's rule; fully deterministic."""
    return _Engine(lp, deadline).solve()


def float_basis_hint(
    lp: LinearProgram, time_limit: Optional[float] = None
) -> Optional[list[int]]:
    """Candidate basic columns from a floating-point pass, best first.

    Uses scipy's HiGHS solver. The ordering puts columns with clearly
    positive primal value first, then columns by increasing |reduced cost|.
    Returns None when the float pass fails for any reason; callers must
    treat the hint as advisory only.
    """
    if lp.num_vars == 0 or lp.num_rows == 0:
        return None
    try:
        import numpy as np
        from scipy.optimize import linprog
        from scipy.sparse import csc_matrix
    except ImportError:  # pragma: no cover - scipy is a hard dep in practice
        return None
    data, indices, indptr = [], [], [0]
    for col in lp.columns():
        for i, v in col:
            indices.append(i)
            data.append(float(v))
        indptr.append(len(indices))
    a_eq = csc_matrix(
        (np.array(data), np.array(indices), np.array(indptr)),
        shape=(lp.num_rows, lp.num_vars),
    )
    b_eq = np.array([float(v) for v in lp.rhs])
    c = np.zeros(lp.num_vars)
    for j, v in lp.objective:
        c[j] = -float(v)
    options = {"presolve": True}
    if time_limit is not None:
        options["time_limit"] = max(time_limit, 0.01)
    try:
        res = linprog(
            c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs",
            options=options,
        )
    except Exception:  # pragma: no cover - defensive
        return None
    if res.status != 0 or res.x is None:
        return None
    x = res.x
    try:
        duals = np.asarray(res.eqlin.marginals)
        rc = np.abs(c - a_eq.T.dot(duals))
    except Exception:  # pragma: no cover - older scipy layouts
        rc = np.zeros(lp.num_vars)
    tol = 1e-9
    order = sorted(
        range(lp.num_vars),
        key=lambda j: (0 if x[j] > tol else 1, -x[j] if x[j] > tol else rc[j], j),
    )
    return order


def solve_max_guided(
    lp: LinearProgram,
    hint_basis: Optional[Sequence[Optional[int]]] = None,
    deadline: Optional[float] = None,
) -> LpSolution:
    """Solve exactly, warm-starting from a hinted or float-derived basis.

    The value of the result is identical to solve_max; only the amount of
    exact pivoting differs. A useless hint falls back to the cold solver.
    """
    if hint_basis is None:
        limit = None
        if deadline is not None:
            limit = max(deadline - time.monotonic(), 0.01)
        hint_basis = float_basis_hint(lp, time_limit=limit)
    if hint_basis is not None:
        engine = _Engine(lp, deadline)
        sol = engine.continue_from(list(hint_basis))
        if sol is not None:
            return sol
    return solve_max(lp, deadline)


def verify_solution(lp: LinearProgram, sol: LpSolution) -> bool:
    """Re-check an optimal solution exactly, without pivoting.

    Checks primal feasibility, the objective value, that the basis
    refactorizes and reproduces the assignment, and dual feasibility
    (all reduced costs <= 0) together with strong duality.
    """
    if sol.status != LpStatus.OPTIMAL or sol.optimum is None:
        return False
    x = sol.assignment
    if any(v < 0 for v in x.values()):
        return False
    if any(not 0 <= j < lp.num_vars for j in x):
        return False
    for row, rhs in zip(lp.rows, lp.rhs):
        total = ZERO
        for j, v in row:
            xj = x.get(j)
            if xj is not None:
                total += v * xj
        if total != rhs:
            return False
    cvec = lp.objective_dense()
    value = ZERO
    for j, v in x.items():
        value += cvec[j] * v
    if value != sol.optimum:
        return False
    if len(sol.basis) != lp.num_rows:
        return False
    structural = [j for j in sol.basis if j is not None]
    if len(set(structural)) != len(structural):
        return False
    if any(not 0 <= j < lp.num_vars for j in structural):
        return False
    cols = lp.columns()
    fac = BasisFactor(lp.num_rows)
    for i, j in enumerate(sol.basis):
        col = cols[j] if j is not None else [(i, ONE)]
        if not fac.try_add_column(col):
            return False
    try:
        x_b = fac.solve_Bx({i: v for i, v in enumerate(lp.rhs) if v})
    except InternalInvariantViolation:
        return False
    for pos, j in enumerate(sol.basis):
        expected = x.get(j, ZERO) if j is not None else ZERO
        if x_b[pos] != expected:
            return False
    c_basis = [cvec[j] if j is not None else ZERO for j in sol.basis]
    y = fac.solve_yB(c_basis)
    for j in range(lp.num_vars):
        rc = cvec[j]
        for i, v in cols[j]:
            yi = y.get(i)
            if yi is not None:
                rc -= yi * v
        if rc > 0:
            return False
    dual_value = ZERO
    for i, v in y.items():
        dual_value += v * lp.rhs[i]
    return dual_value == sol.optimum
