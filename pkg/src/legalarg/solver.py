"""Satisfiability and belief entailment over argument graphs.

The engine answers two questions about a graph plus a set of linear atomic
constraints: is there any probability function over possible worlds meeting
all constraints, and what are the exact min and max probabilities of each
argument among such functions.

Because the constraints only mention single-argument probabilities, and any
point of [0,1]^n is realized by the product distribution with those
marginals, both questions reduce to an n-variable linear program (one
variable per argument) instead of one over 2^n world probabilities.  The
`oracle_*` functions solve the exponential world program directly so the
reduction can be cross-checked rather than trusted.

Solving strategy.  A plain simplex per bound is exact but wasteful on large
structured cases, so `entail_all` first runs exact interval propagation to a
fixpoint and then certifies each propagated bound with an explicit feasible
witness:

  * the all-lower point certifies every lower bound at once whenever it
    satisfies all rows (always the case when no row has two or more negative
    coefficients, which covers every scheme-generated constraint);
  * an upper bound is certified by raising the argument to its propagated
    upper and greedily repairing violated rows upward along their unique
    negative-coefficient variable.

Any bound that fails certification falls back to the exact simplex, so
results are exact in all cases; propagation only decides how they are
obtained.  Propagation-detected conflicts are sound proofs of
unsatisfiability (every derived bound is implied by the rows).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .constraints import ConstraintSet
from .graph import ArgGraph
from .lp import LpProblem, _Simplex, _solve_feasibility, optimize
from .lp import feasible as lp_feasible
from .rationals import as_rat

ORACLE_MAX_ARGS = 12
REALIZE_MAX_ARGS = 20
WORLD_CG_MAX_ARGS = 32

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SolverError(ValueError):
    """Constraint set does not fit the graph (unknown argument, bad input)."""


class UnsatisfiableError(ValueError):
    """Entailment was asked for an unsatisfiable constraint set."""

    def __init__(self, message: str, hint: tuple[int, ...] = ()) -> None:
        super().__init__(message)
        self.hint = hint  # constraint indices whose removal restores satisfiability


@dataclass(frozen=True)
class BeliefBounds:
    """Exact [lower, upper] probability interval per argument."""

    intervals: dict[str, tuple[Fraction, Fraction]]

    def lower(self, arg: str) -> Fraction:
        return self.intervals[arg][0]

    def upper(self, arg: str) -> Fraction:
        return self.intervals[arg][1]

    def __getitem__(self, arg: str) -> tuple[Fraction, Fraction]:
        return self.intervals[arg]

    def __iter__(self):
        return iter(self.intervals.items())


@dataclass(frozen=True)
class SatReport:
    satisfiable: bool
    witness: dict[str, Fraction] | None = None
    conflict: tuple[int, ...] = ()  # constraint indices, best-effort


# -- compilation ---------------------------------------------------------------


class _System:
    """Constraint rows over integer variable indices, plus lookup tables."""

    def __init__(self, graph: ArgGraph, cs: ConstraintSet) -> None:
        self.names: tuple[str, ...] = graph.arguments
        self.index = {name: i for i, name in enumerate(self.names)}
        self.n = len(self.names)
        self.rows: list[tuple[list[tuple[int, Fraction]], Fraction]] = []
        self.row_constraint: list[int] = []  # row -> constraint index in cs
        self.trivially_false: int | None = None
        for ci, tagged in enumerate(cs):
            c = tagged.constraint
            terms: list[tuple[int, Fraction]] = []
            for arg, coef in c.terms:
                if arg not in self.index:
                    raise SolverError(f"constraint references unknown argument {arg!r}")
                terms.append((self.index[arg], coef))
            if not terms:
                if c.bound < 0 and self.trivially_false is None:
                    self.trivially_false = ci
                continue
            self.rows.append((terms, c.bound))
            self.row_constraint.append(ci)
        # Row indices per variable, split by the sign of its coefficient:
        # raising a variable (or raising its lower bound) can only affect rows
        # where it appears positively, and symmetrically for upper bounds.
        self.var_rows_pos: list[list[int]] = [[] for _ in range(self.n)]
        self.var_rows_neg: list[list[int]] = [[] for _ in range(self.n)]
        for ri, (terms, _) in enumerate(self.rows):
            for j, a in terms:
                (self.var_rows_pos if a > 0 else self.var_rows_neg)[j].append(ri)

    def problem(self) -> LpProblem:
        return LpProblem.build(self.n, [(dict(t), b) for t, b in self.rows])

    def conflict_hint(self) -> tuple[int, ...]:
        if self.trivially_false is not None:
            return (self.trivially_false,)
        outcome = lp_feasible(self.problem())
        if outcome.is_feasible or outcome.infeasible_hint is None:
            return ()
        return tuple(self.row_constraint[r] for r in outcome.infeasible_hint)


# -- interval propagation --------------------------------------------------------

_TIGHTEN_LIMIT = 64  # per variable and side; beyond this, leave bounds loose


def _propagate(sys: _System) -> tuple[list[Fraction], list[Fraction], bool]:
    """Tighten per-variable bounds to a fixpoint.

    Returns (lo, hi, consistent).  Bounds are always sound: every feasible
    point lies inside them, so consistent=False proves unsatisfiability.
    The tighten limit keeps adversarial amplifying cycles from spinning; an
    early stop merely leaves bounds looser, never wrong.
    """
    n = sys.n
    lo = [_ZERO] * n
    hi = [_ONE] * n
    tightens = [0] * (2 * n)
    pending = deque(range(len(sys.rows)))
    queued = [True] * len(sys.rows)
    while pending:
        ri = pending.popleft()
        queued[ri] = False
        terms, bound = sys.rows[ri]
        # smallest achievable value of the row's left side under current bounds
        low_sum = _ZERO
        for j, a in terms:
            low_sum += a * lo[j] if a > 0 else a * hi[j]
        for j, a in terms:
            if a > 0:
                rest = low_sum - a * lo[j]
                new_hi = (bound - rest) / a
                if new_hi < hi[j]:
                    if new_hi < lo[j]:
                        return lo, hi, False
                    if tightens[2 * j] >= _TIGHTEN_LIMIT:
                        continue
                    tightens[2 * j] += 1
                    hi[j] = new_hi
                    for rk in sys.var_rows_neg[j]:
                        if not queued[rk]:
                            queued[rk] = True
                            pending.append(rk)
            else:
                rest = low_sum - a * hi[j]
                new_lo = (rest - bound) / (-a)
                if new_lo > lo[j]:
                    if new_lo > hi[j]:
                        return lo, hi, False
                    if tightens[2 * j + 1] >= _TIGHTEN_LIMIT:
                        continue
                    tightens[2 * j + 1] += 1
                    lo[j] = new_lo
                    low_sum = rest + a * hi[j]
                    for rk in sys.var_rows_pos[j]:
                        if not queued[rk]:
                            queued[rk] = True
                            pending.append(rk)
    return lo, hi, True


def _point_feasible(sys: _System, point: Sequence[Fraction]) -> bool:
    for terms, bound in sys.rows:
        acc = _ZERO
        for j, a in terms:
            acc += a * point[j]
        if acc > bound:
            return False
    return True


def _witness_upper(
    sys: _System, lo: Sequence[Fraction], hi: Sequence[Fraction], v: int
) -> bool:
    """Try to exhibit a feasible point with x_v at its propagated upper bound.

    Starting from the (already verified) all-lower point, raise x_v to hi[v]
    and repair each violated row by raising its unique negative-coefficient
    variable just enough, never beyond that variable's propagated upper.
    Success proves max(x_v) = hi[v]; failure proves nothing and the caller
    falls back to the simplex.
    """
    overlay: dict[int, Fraction] = {v: hi[v]}
    pending = deque([v])
    budget = 64 + 4 * len(sys.rows)
    while pending:
        u = pending.popleft()
        # Raising u can only break rows where u appears positively; rows with
        # u negative just gained slack, and the row that triggered the raise
        # was repaired to exact equality.
        for ri in sys.var_rows_pos[u]:
            terms, bound = sys.rows[ri]
            acc = _ZERO
            neg: tuple[int, Fraction] | None = None
            neg_count = 0
            for j, a in terms:
                acc += a * (overlay[j] if j in overlay else lo[j])
                if a < 0:
                    neg = (j, a)
                    neg_count += 1
            if acc <= bound:
                continue
            if neg_count != 1 or neg is None:
                return False
            t, a_t = neg
            p_t = overlay[t] if t in overlay else lo[t]
            needed = (acc - a_t * p_t - bound) / (-a_t)
            if needed > hi[t]:
                return False
            if needed > p_t:
                overlay[t] = needed
                pending.append(t)
                budget -= 1
                if budget <= 0:
                    return False
    # Re-verify the rows the cascade could have touched (cheap: the argument
    # above says they already hold; this guards the bookkeeping).
    seen: set[int] = set()
    for u in overlay:
        for ri in sys.var_rows_pos[u]:
            if ri in seen:
                continue
            seen.add(ri)
            terms, bound = sys.rows[ri]
            acc = _ZERO
            for j, a in terms:
                acc += a * (overlay[j] if j in overlay else lo[j])
            if acc > bound:
                return False
    return overlay[v] == hi[v]


# -- public operations ------------------------------------------------------------


def check(graph: ArgGraph, cs: ConstraintSet) -> SatReport:
    """Satisfiability with witness, or a best-effort conflicting-row hint."""
    sys = _System(graph, cs)
    if sys.trivially_false is not None:
        return SatReport(False, conflict=sys.conflict_hint())
    lo, _, consistent = _propagate(sys)
    if not consistent:
        return SatReport(False, conflict=sys.conflict_hint())
    if _point_feasible(sys, lo):
        return SatReport(True, witness={name: lo[i] for i, name in enumerate(sys.names)})
    outcome = lp_feasible(sys.problem())
    if outcome.is_feasible:
        assert outcome.witness is not None
        return SatReport(
            True, witness={name: outcome.witness[i] for i, name in enumerate(sys.names)}
        )
    hint = tuple(sys.row_constraint[r] for r in (outcome.infeasible_hint or ()))
    return SatReport(False, conflict=hint)


def satisfiable(graph: ArgGraph, cs: ConstraintSet) -> bool:
    return check(graph, cs).satisfiable


def _raise_unsat(sys: _System) -> None:
    raise UnsatisfiableError("constraints are unsatisfiable", hint=sys.conflict_hint())


def entail_all(graph: ArgGraph, cs: ConstraintSet) -> BeliefBounds:
    """Exact [min, max] of every argument's probability; 2n optimizations."""
    sys = _System(graph, cs)
    if sys.trivially_false is not None:
        _raise_unsat(sys)
    lo, hi, consistent = _propagate(sys)
    if not consistent:
        _raise_unsat(sys)
    lows: list[Fraction] = list(lo)
    highs: list[Fraction] = list(hi)
    problem: LpProblem | None = None
    certified = _point_feasible(sys, lo)
    if not certified:
        problem = sys.problem()
        if _solve_feasibility(problem) is None:
            _raise_unsat(sys)
        for v in range(sys.n):
            lows[v] = optimize(problem, v, "min").optimum  # type: ignore[assignment]
    for v in range(sys.n):
        if certified and (highs[v] == lows[v] or _witness_upper(sys, lo, hi, v)):
            continue
        if problem is None:
            problem = sys.problem()
        highs[v] = optimize(problem, v, "max").optimum  # type: ignore[assignment]
    return BeliefBounds({name: (lows[i], highs[i]) for i, name in enumerate(sys.names)})


def entail(graph: ArgGraph, cs: ConstraintSet, arg: str) -> tuple[Fraction, Fraction]:
    """Exact probability interval of one argument."""
    sys = _System(graph, cs)
    if arg not in sys.index:
        raise SolverError(f"unknown argument {arg!r}")
    v = sys.index[arg]
    if sys.trivially_false is not None:
        _raise_unsat(sys)
    lo, hi, consistent = _propagate(sys)
    if not consistent:
        _raise_unsat(sys)
    if _point_feasible(sys, lo):
        if hi[v] == lo[v] or _witness_upper(sys, lo, hi, v):
            return lo[v], hi[v]
        return lo[v], optimize(sys.problem(), v, "max").optimum  # type: ignore[return-value]
    problem = sys.problem()
    if _solve_feasibility(problem) is None:
        _raise_unsat(sys)
    return (
        optimize(problem, v, "min").optimum,  # type: ignore[return-value]
        optimize(problem, v, "max").optimum,
    )


# -- possible-world oracle -----------------------------------------------------------


def _world_system(graph: ArgGraph, cs: ConstraintSet) -> tuple[tuple[str, ...], LpProblem]:
    """The explicit LP over all nonempty possible worlds.

    Variables are P(world) for each nonempty subset; the empty world's
    probability is the slack of the total-mass row.  Each marginal
    constraint expands through P(A) = sum of P(world) over worlds with A.
    World index w stands for the subset with bitmask w + 1.
    """
    names = graph.arguments
    n = len(names)
    if n > ORACLE_MAX_ARGS:
        raise SolverError(f"graph too large for the world oracle ({n} > {ORACLE_MAX_ARGS})")
    index = {name: i for i, name in enumerate(names)}
    nw = (1 << n) - 1
    rows: list[tuple[dict[int, Fraction], Fraction]] = []
    # Total mass: the empty world's probability is this row's slack, so only
    # the <= direction is real.
    rows.append(({w: _ONE for w in range(nw)}, _ONE))
    for tagged in cs:
        c = tagged.constraint
        coef = [_ZERO] * n
        for arg, a in c.terms:
            if arg not in index:
                raise SolverError(f"constraint references unknown argument {arg!r}")
            coef[index[arg]] = a
        sums = [_ZERO] * (nw + 1)
        for mask in range(1, nw + 1):
            low = mask & -mask
            sums[mask] = sums[mask ^ low] + coef[low.bit_length() - 1]
        terms = {mask - 1: sums[mask] for mask in range(1, nw + 1) if sums[mask]}
        rows.append((terms, c.bound))
    return names, LpProblem.build(nw, rows)


def _world_objective(names: tuple[str, ...], arg: str) -> dict[int, Fraction]:
    i = names.index(arg)
    bit = 1 << i
    nw = (1 << len(names)) - 1
    return {w: _ONE for w in range(nw) if (w + 1) & bit}


def oracle_satisfiable(graph: ArgGraph, cs: ConstraintSet) -> bool:
    _, problem = _world_system(graph, cs)
    return _Simplex(problem, unbounded_vars=True).phase1() == 0


def oracle_entail(graph: ArgGraph, cs: ConstraintSet, arg: str) -> tuple[Fraction, Fraction]:
    names, problem = _world_system(graph, cs)
    if arg not in names:
        raise SolverError(f"unknown argument {arg!r}")
    s = _Simplex(problem, unbounded_vars=True)
    if s.phase1() != 0:
        raise UnsatisfiableError("constraints are unsatisfiable")
    objective = _world_objective(names, arg)
    lower = s.minimize(objective)
    upper = -s.minimize({w: -c for w, c in objective.items()})
    return lower, upper


def oracle_entail_all(graph: ArgGraph, cs: ConstraintSet) -> BeliefBounds:
    names, problem = _world_system(graph, cs)
    s = _Simplex(problem, unbounded_vars=True)
    if s.phase1() != 0:
        raise UnsatisfiableError("constraints are unsatisfiable")
    intervals: dict[str, tuple[Fraction, Fraction]] = {}
    for arg in names:
        objective = _world_objective(names, arg)
        lower = s.minimize(objective)
        upper = -s.minimize({w: -c for w, c in objective.items()})
        intervals[arg] = (lower, upper)
    return BeliefBounds(intervals)


# -- product-distribution realization ---------------------------------------------------


@dataclass(frozen=True)
class WorldDistribution:
    """Probabilities over possible worlds, keyed by bitmask over `arguments`.

    Zero-probability worlds are omitted; the stored masses sum to exactly 1.
    """

    arguments: tuple[str, ...]
    probs: Mapping[int, Fraction]

    def probability(self, world: Iterable[str]) -> Fraction:
        order = {name: i for i, name in enumerate(self.arguments)}
        mask = 0
        for name in world:
            mask |= 1 << order[name]
        return self.probs.get(mask, _ZERO)

    def marginal(self, arg: str) -> Fraction:
        bit = 1 << self.arguments.index(arg)
        return sum((p for w, p in self.probs.items() if w & bit), _ZERO)

    def total(self) -> Fraction:
        return sum(self.probs.values(), _ZERO)


def realize(
    marginals: Mapping[str, Fraction] | Sequence[tuple[str, Fraction]]
) -> WorldDistribution:
    """Product distribution whose marginals equal the input exactly."""
    items = list(marginals.items()) if isinstance(marginals, Mapping) else list(marginals)
    if len(items) > REALIZE_MAX_ARGS:
        raise SolverError(
            f"too many arguments to expand a world distribution "
            f"({len(items)} > {REALIZE_MAX_ARGS})"
        )
    names = tuple(name for name, _ in items)
    probs: dict[int, Fraction] = {0: _ONE}
    for i, (name, raw) in enumerate(items):
        p = as_rat(raw)
        if not _ZERO <= p <= _ONE:
            raise SolverError(f"marginal for {name} outside [0, 1]: {p}")
        bit = 1 << i
        q = _ONE - p
        nxt: dict[int, Fraction] = {}
        for mask, w in probs.items():
            if q:
                nxt[mask] = w * q
            if p:
                nxt[mask | bit] = w * p
        probs = nxt
    return WorldDistribution(names, probs)


# -- column-generation world solver ----------------------------------------------------
#
# For graphs too large to enumerate 2^n worlds, the world LP is still solvable
# exactly.  A restricted master problem over a pool of world columns
# alternates with a pricing step: a world's entry in a constraint row is the
# sum of its member arguments' coefficients, so a world's reduced cost is a
# constant plus a sum of independent per-argument gains, and the best world
# is found by picking exactly the arguments with favorable gain.  Each round
# adds a column absent from the pool, so the process is finite, and the final
# pricing bound certifies optimality over all 2^n worlds.


class _WorldCg:
    def __init__(self, graph: ArgGraph, cs: ConstraintSet) -> None:
        self.names = graph.arguments
        self.n = len(self.names)
        if self.n > WORLD_CG_MAX_ARGS:
            raise SolverError(
                f"graph too large for the world solver ({self.n} > {WORLD_CG_MAX_ARGS})"
            )
        index = {name: i for i, name in enumerate(self.names)}
        self.con_coefs: list[list[Fraction]] = []
        self.con_bounds: list[Fraction] = []
        for tagged in cs:
            c = tagged.constraint
            coef = [_ZERO] * self.n
            for arg, a in c.terms:
                if arg not in index:
                    raise SolverError(f"constraint references unknown argument {arg!r}")
                coef[index[arg]] = a
            self.con_coefs.append(coef)
            self.con_bounds.append(c.bound)
        self.columns: list[int] = [1 << i for i in range(self.n)]
        self.column_set: set[int] = set(self.columns)
        self.simplex_col: list[int] = []
        self.master = self._build_master()
        self._feasible: bool | None = None

    def _column_row_coefs(self, mask: int) -> list[Fraction]:
        """Coefficients of one world column: the mass row, then one sum of
        member-argument coefficients per constraint row."""
        out = [_ONE]
        for coef in self.con_coefs:
            acc = _ZERO
            m = mask
            while m:
                low = m & -m
                acc += coef[low.bit_length() - 1]
                m ^= low
            out.append(acc)
        return out

    def _build_master(self) -> _Simplex:
        ncols = len(self.columns)
        rows: list[tuple[dict[int, Fraction], Fraction]] = [
            ({j: _ONE for j in range(ncols)}, _ONE),
        ]
        hints = [1]
        for k, bound in enumerate(self.con_bounds):
            terms: dict[int, Fraction] = {}
            for j, mask in enumerate(self.columns):
                a = self._column_row_coefs(mask)[1 + k]
                if a:
                    terms[j] = a
            rows.append((terms, bound))
            # any world column entry is a sum of per-argument coefficients,
            # so this lcm keeps appended columns integral after row scaling
            hint = 1
            for c in self.con_coefs[k]:
                hint = hint * c.denominator // gcd(hint, c.denominator)
            hints.append(hint)
        self.simplex_col = list(range(ncols))
        return _Simplex(
            LpProblem.build(ncols, rows), unbounded_vars=True, scale_hints=hints
        )

    @staticmethod
    def _best_nonempty(weights: list[Fraction]) -> tuple[Fraction, int]:
        """max over nonempty subsets of the sum of member weights."""
        mask = 0
        acc = _ZERO
        best_single = 0
        for i, w in enumerate(weights):
            if w > 0:
                mask |= 1 << i
                acc += w
            if w > weights[best_single]:
                best_single = i
        if mask == 0:
            return weights[best_single], 1 << best_single
        return acc, mask

    def _add(self, mask: int) -> None:
        if mask in self.column_set:
            raise RuntimeError("world pricing repeated a column")
        self.columns.append(mask)
        self.column_set.add(mask)
        self.simplex_col.append(self.master.append_column(self._column_row_coefs(mask)))

    def _ensure_feasible(self) -> None:
        if self._feasible is True:
            return
        if self._feasible is False:
            raise UnsatisfiableError("constraints are unsatisfiable")
        for _ in range(200_000):
            if self.master.phase1() == 0:
                self._feasible = True
                return
            # A world column helps phase 1 iff its reduced cost -y.col(w) is
            # negative, i.e. y.col(w) = (y0 - y1) + sum of member gains > 0.
            y = self.master.duals(self.master.phase1_cost, 1)
            gains = [
                sum((y[1 + k] * coef[i] for k, coef in enumerate(self.con_coefs)), _ZERO)
                for i in range(self.n)
            ]
            best, mask = self._best_nonempty(gains)
            if y[0] + best <= 0:
                self._feasible = False
                raise UnsatisfiableError("constraints are unsatisfiable")
            self._add(mask)
        raise RuntimeError("column generation did not converge")

    def solve(self, arg: str, sense: str) -> Fraction:
        """Exact optimum of P(arg) over the full world LP."""
        self._ensure_feasible()
        obj_bit = self.names.index(arg)
        csign = _ONE if sense == "min" else -_ONE
        for _ in range(200_000):
            # Minimize csign * P(arg) over the pool, then price: rc(w) is a
            # constant plus a sum of per-argument gains, so the best world
            # picks exactly the arguments with favorable gain.  Optimal over
            # all 2^n worlds once min rc(w) >= 0.
            objective = {
                self.simplex_col[j]: csign
                for j, mask in enumerate(self.columns)
                if mask & (1 << obj_bit)
            }
            value = self.master.minimize(objective)
            y = self.master.duals(self.master.phase2_cost, self.master.phase2_scale)
            gains: list[Fraction] = []
            for i in range(self.n):
                g = csign if i == obj_bit else _ZERO
                for k, coef in enumerate(self.con_coefs):
                    if coef[i]:
                        g -= y[1 + k] * coef[i]
                gains.append(g)
            best, mask = self._best_nonempty([-g for g in gains])
            min_rc = -y[0] - best
            if min_rc >= 0:
                return value if sense == "min" else -value
            self._add(mask)
        raise RuntimeError("column generation did not converge")


def world_entail_cg(graph: ArgGraph, cs: ConstraintSet, arg: str) -> tuple[Fraction, Fraction]:
    """World-LP interval via column generation (no 2^n enumeration)."""
    cg = _WorldCg(graph, cs)
    return cg.solve(arg, "min"), cg.solve(arg, "max")


def world_bounds_cg(graph: ArgGraph, cs: ConstraintSet) -> BeliefBounds:
    """World-LP intervals for every argument, sharing one column pool."""
    cg = _WorldCg(graph, cs)
    return BeliefBounds(
        {name: (cg.solve(name, "min"), cg.solve(name, "max")) for name in cg.names}
    )
