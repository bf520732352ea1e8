"""Exact rational linear programming over box-bounded variables.

Problems have the shape

    rows:   sum_j a_ij * x_j <= b_i
    bounds: 0 <= x_j <= 1      (implicit, every variable)

and are solved exactly.  Internally this is a bounded-variable primal
simplex on an all-integer tableau: instead of Fraction cells, the tableau
holds integers plus one shared positive denominator D, maintaining the
invariant T = D * inv(B) * A.  Each pivot uses the fraction-free update

    T'[i][j] = (T[i][j] * T[p][q] - T[i][q] * T[p][j]) / D

whose divisions are exact (entries are determinants of basis minors).
Integer arithmetic avoids per-operation gcd normalization, which makes this
roughly an order of magnitude faster than a Fraction tableau, with no
rounding anywhere.  Variables never sit at an upper bound: a variable pushed
to its upper is complemented (x := u - x), so nonbasic always means "at
zero".  Entering and leaving choices follow Bland's rule, which rules out
cycling, and make every outcome deterministic.

Upper bounds other than 0, 1 and "none" are not needed by this package;
slack and artificial columns are unbounded above.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence


class LpError(ValueError):
    """Malformed problem or unsupported request (e.g. optimizing infeasible)."""


Row = tuple[tuple[tuple[int, Fraction], ...], Fraction]


@dataclass(frozen=True)
class LpProblem:
    """`num_vars` variables in [0, 1]; each row is ((index, coeff), ...), bound."""

    num_vars: int
    rows: tuple[Row, ...]

    @staticmethod
    def build(
        num_vars: int,
        rows: Iterable[tuple[Mapping[int, Fraction] | Sequence[tuple[int, Fraction]], Fraction]],
    ) -> "LpProblem":
        packed: list[Row] = []
        for terms, bound in rows:
            items = terms.items() if isinstance(terms, Mapping) else terms
            clean = tuple(sorted((i, c) for i, c in items if c != 0))
            for i, _ in clean:
                if not 0 <= i < num_vars:
                    raise LpError(f"row references variable {i}, out of range")
            packed.append((clean, Fraction(bound)))
        return LpProblem(num_vars, tuple(packed))


@dataclass(frozen=True)
class LpOutcome:
    status: str  # "feasible" | "infeasible"
    optimum: Fraction | None = None
    witness: tuple[Fraction, ...] | None = None
    infeasible_hint: tuple[int, ...] | None = None

    @property
    def is_feasible(self) -> bool:
        return self.status == "feasible"


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class _Simplex:
    """One problem instance with optional world-column extensions (for column
    generation callers); solves feasibility once, then any number of
    objectives from the current basis."""

    def __init__(
        self,
        problem: LpProblem,
        active: Sequence[int] | None = None,
        unbounded_vars: bool = False,
        scale_hints: Sequence[int] | None = None,
    ) -> None:
        self.n = problem.num_vars
        self.row_ids = list(range(len(problem.rows))) if active is None else list(active)
        m = len(self.row_ids)
        self.m = m
        var_upper: int | None = None if unbounded_vars else 1
        # upper[j]: None for unbounded above, else an integer bound (0 or 1).
        self.upper: list[int | None] = [var_upper] * self.n + [None] * m
        self.flipped = [False] * (self.n + m)
        self.T: list[list[int]] = [[0] * (self.n + m) for _ in range(m)]
        self.r: list[int] = [0] * m
        self.D = 1
        self.basis: list[int] = []
        self.scales: list[int] = []
        self.artificials: list[int] = []

        for k, ri in enumerate(self.row_ids):
            terms, bound = problem.rows[ri]
            scale = bound.denominator
            for _, c in terms:
                scale = _lcm(scale, c.denominator)
            if scale_hints is not None:
                scale = _lcm(scale, scale_hints[k])
            row = self.T[k]
            for j, c in terms:
                row[j] = int(c * scale)
            row[self.n + k] = 1  # slack keeps coefficient +-1 so B starts at I
            self.r[k] = int(bound * scale)
            self.scales.append(scale)
            self.basis.append(self.n + k)

        # Rows with negative rhs start infeasible: negate them and give each an
        # artificial basic variable, to be minimized away in phase 1.
        art_rows = [k for k in range(m) if self.r[k] < 0]
        for k in art_rows:
            self.T[k] = [-v for v in self.T[k]]
            self.r[k] = -self.r[k]
        for k in art_rows:
            col = len(self.upper)
            for i in range(m):
                self.T[i].append(1 if i == k else 0)
            self.upper.append(None)
            self.flipped.append(False)
            self.artificials.append(col)
            self.basis[k] = col

    # -- primitive operations ----------------------------------------------

    def _flip(self, j: int, cost: list[int]) -> int:
        """Complement nonbasic column j (x_j := u_j - x_j); returns cost offset."""
        u = self.upper[j]
        assert u is not None
        if u:
            for i in range(self.m):
                self.r[i] -= self.T[i][j] * u
        for i in range(self.m):
            self.T[i][j] = -self.T[i][j]
        offset = cost[j] * u
        cost[j] = -cost[j]
        self.flipped[j] = not self.flipped[j]
        return offset

    def _pivot(self, p: int, q: int) -> None:
        T, r, D = self.T, self.r, self.D
        piv = T[p][q]
        row_p = T[p]
        r_p = r[p]
        for i in range(self.m):
            if i == p:
                continue
            row_i = T[i]
            f = row_i[q]
            if f:
                T[i] = [(v * piv - f * w) // D for v, w in zip(row_i, row_p)]
                r[i] = (r[i] * piv - f * r_p) // D
            elif piv != D:
                T[i] = [v * piv // D for v in row_i]
                r[i] = r[i] * piv // D
        self.D = piv
        if self.D < 0:
            self.D = -self.D
            for i in range(self.m):
                self.T[i] = [-v for v in self.T[i]]
                self.r[i] = -self.r[i]

    def _reduced_numerator(self, j: int, cost: list[int]) -> int:
        acc = self.D * cost[j]
        T = self.T
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                acc -= cb * T[i][j]
        return acc

    def _run(self, cost: list[int], banned: frozenset[int]) -> int:
        """Bland-rule minimization of `cost`; returns the accumulated offset."""
        offset = 0
        basic = set(self.basis)
        ncols = len(self.upper)
        while True:
            entering = -1
            for j in range(ncols):
                if j in basic or j in banned or self.upper[j] == 0:
                    continue
                if self._reduced_numerator(j, cost) < 0:
                    entering = j
                    break
            if entering < 0:
                return offset
            q = entering
            # Ratio test: smallest step, ties to the smallest column index.
            best_num: int | None = None
            best_den = 1
            best_row = -1
            best_col = -1
            uq = self.upper[q]
            if uq is not None:
                best_num, best_den, best_col = uq * self.D, self.D, q
            for i in range(self.m):
                coef = self.T[i][q]
                if coef > 0:
                    num, den = self.r[i], coef
                elif coef < 0:
                    ub = self.upper[self.basis[i]]
                    if ub is None:
                        continue
                    num, den = ub * self.D - self.r[i], -coef
                else:
                    continue
                if best_num is None:
                    take = True
                else:
                    lhs = num * best_den
                    rhs = best_num * den
                    take = lhs < rhs or (lhs == rhs and self.basis[i] < best_col)
                if take:
                    best_num, best_den, best_row, best_col = num, den, i, self.basis[i]
            if best_num is None:
                raise LpError("objective is unbounded")
            if best_row < 0:
                offset += self._flip(q, cost)
                continue
            p = best_row
            leaving = self.basis[p]
            leaves_at_upper = self.T[p][q] < 0
            self._pivot(p, q)
            self.basis[p] = q
            basic.discard(leaving)
            basic.add(q)
            if leaves_at_upper:
                offset += self._flip(leaving, cost)

    # -- phases and extraction -----------------------------------------------

    def _objective_numerator(self, cost: list[int], offset: int) -> Fraction:
        acc = 0
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                acc += cb * self.r[i]
        return Fraction(acc, self.D) + offset

    def phase1(self) -> Fraction:
        """Minimize total infeasibility; 0 means a feasible basis was reached."""
        cost = [0] * len(self.upper)
        for j in self.artificials:
            cost[j] = 1
        offset = 0
        if self.artificials:
            offset = self._run(cost, banned=frozenset())
        value = self._objective_numerator(cost, offset)
        self.phase1_cost = cost
        if value == 0:
            for j in self.artificials:
                self.upper[j] = 0  # pin leftover degenerate artificials at zero
        return value

    def minimize(self, objective: Mapping[int, Fraction]) -> Fraction:
        """Phase 2 from the current (feasible) basis."""
        scale = 1
        for c in objective.values():
            scale = _lcm(scale, c.denominator)
        cost = [0] * len(self.upper)
        offset = 0
        for j, c in objective.items():
            cost[j] = int(c * scale)
        for j in range(self.n):
            if self.flipped[j] and cost[j]:
                u = self.upper[j]
                assert u is not None
                offset += cost[j] * u
                cost[j] = -cost[j]
        offset += self._run(cost, banned=frozenset(self.artificials))
        self.phase2_cost = cost
        self.phase2_scale = scale
        return self._objective_numerator(cost, offset) / scale

    def values(self) -> list[Fraction]:
        vals = [Fraction(0)] * len(self.upper)
        for i, b in enumerate(self.basis):
            vals[b] = Fraction(self.r[i], self.D)
        for j, f in enumerate(self.flipped):
            if f:
                u = self.upper[j]
                assert u is not None
                vals[j] = u - vals[j]
        return vals[: self.n]

    def append_column(self, row_coefs: Sequence[Fraction]) -> int:
        """Add a fresh variable (lower 0, unbounded above) mid-solve.

        The new tableau column is D * inv(B) * a, assembled from the slack
        columns, which hold inv(B) row by row; the result is integral as long
        as each scaled coefficient is (callers pass scale_hints to guarantee
        that).  The current basis stays feasible, so optimization can simply
        continue.
        """
        scaled: list[int] = []
        for k, c in enumerate(row_coefs):
            v = c * self.scales[k]
            if v.denominator != 1:
                raise LpError("column coefficient does not fit the row scaling")
            scaled.append(int(v))
        col = len(self.upper)
        base = self.n
        for i in range(self.m):
            row = self.T[i]
            acc = 0
            for k, s in enumerate(scaled):
                if s:
                    acc += s * row[base + k]
            row.append(acc)
        self.upper.append(None)
        self.flipped.append(False)
        return col

    def duals(self, cost: list[int], scale: int = 1) -> list[Fraction]:
        """Row multipliers for the given cost, in original row units.

        Satisfies reduced(c_j) = c_j - sum_k y_k * a_kj for any column in the
        problem's original orientation, which is the identity column
        generation prices with.
        """
        out: list[Fraction] = []
        for k in range(self.m):
            col = self.n + k
            acc = 0
            for i, b in enumerate(self.basis):
                cb = cost[b]
                if cb:
                    acc += cb * self.T[i][col]
            out.append(Fraction(acc * self.scales[k], self.D * scale))
        return out


def _solve_feasibility(
    problem: LpProblem, active: Sequence[int] | None = None
) -> _Simplex | None:
    s = _Simplex(problem, active)
    if s.phase1() != 0:
        return None
    return s


def feasible(problem: LpProblem) -> LpOutcome:
    """Decide feasibility; on failure, include a best-effort greedy row hint."""
    s = _solve_feasibility(problem)
    if s is not None:
        return LpOutcome("feasible", witness=tuple(s.values()))
    return LpOutcome("infeasible", infeasible_hint=tuple(_greedy_hint(problem)))


def optimize(problem: LpProblem, var: int, sense: str) -> LpOutcome:
    """Exact min or max of one variable over the feasible region."""
    if not 0 <= var < problem.num_vars:
        raise LpError(f"variable {var} out of range")
    if sense not in ("min", "max"):
        raise LpError(f"sense must be 'min' or 'max', got {sense!r}")
    s = _solve_feasibility(problem)
    if s is None:
        raise LpError("cannot optimize an infeasible problem")
    value = s.minimize({var: Fraction(1) if sense == "min" else Fraction(-1)})
    optimum = value if sense == "min" else -value
    return LpOutcome("feasible", optimum=optimum, witness=tuple(s.values()))


def _greedy_hint(problem: LpProblem) -> list[int]:
    """Rows whose removal restores feasibility (greedy, not guaranteed minimal)."""
    active = list(range(len(problem.rows)))
    removed: list[int] = []
    while active and _solve_feasibility(problem, active) is None:
        for i in active:
            trial = [j for j in active if j != i]
            if _solve_feasibility(problem, trial) is not None:
                removed.append(i)
                active = trial
                break
        else:
            removed.append(active[0])
            active = active[1:]
    return removed
