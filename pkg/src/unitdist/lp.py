"""Exact rational LP for the min-max weighting problem.

Given independent sets S_1..S_k and orbits O_1..O_p, find orbit weights
w >= 0 with sum_j w_j |O_j| = 1 minimising M = max_i sum_j |S_i & O_j| w_j.

The solver works on the dual

    maximise z  s.t.  sum_i y_i <= 1,   |O_j| z - sum_i n_ij y_i <= 0,   y, z >= 0

which has one row per orbit plus one.  Each new independent set is a new
column, so the previous optimal basis stays feasible and the next solve
warm-starts from it.  (w, M) are read off as the simplex multipliers.  The
method is a revised primal simplex with Bland's rule; the tableau is held
in GMP rationals for speed and results are handed back as Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

from .symmetry import OrbitPartition, singleton_orbits

_ZERO = Fraction(0)
_ONE = Fraction(1)
_QZERO = mpq(0)
_QONE = mpq(1)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass(frozen=True)
class WeightDist:
    """Per-orbit weights, normalised so that sum_j w_j |O_j| = 1."""

    orbit_weights: tuple[Fraction, ...]
    orbits: OrbitPartition

    def __post_init__(self):
        if len(self.orbit_weights) != self.orbits.num_orbits:
            raise ValueError("one weight per orbit required")
        if any(x < 0 for x in self.orbit_weights):
            raise ValueError("weights must be nonnegative")

    @classmethod
    def uniform(cls, orbits: OrbitPartition) -> WeightDist:
        n = len(orbits.orbit_of)
        return cls(tuple(Fraction(1, n) for _ in range(orbits.num_orbits)), orbits)

    def vertex_weights(self) -> list[Fraction]:
        return [self.orbit_weights[o] for o in self.orbits.orbit_of]

    def total(self) -> Fraction:
        return sum((x * s for x, s in zip(self.orbit_weights, self.orbits.sizes)), _ZERO)

    def set_weight(self, s: Iterable[int]) -> Fraction:
        ow, of = self.orbit_weights, self.orbits.orbit_of
        return sum((ow[of[v]] for v in s), _ZERO)


@dataclass
class P1Solution:
    weights: WeightDist
    M: Fraction
    # dual certificate: multipliers on the sets (sum <= 1) proving M is optimal
    set_multipliers: tuple[Fraction, ...] = field(default=())
    pivots: int = 0


class P1Model:
    """Incremental exact solver; add sets, re-solve, read (w, M)."""

    def __init__(self, orbits: OrbitPartition):
        self.orbits = orbits
        p = orbits.num_orbits
        self.m = p + 1
        self.sets: list[tuple[int, ...]] = []
        self.counts: list[tuple[int, ...]] = []
        self._count_index: dict[tuple[int, ...], int] = {}
        # variable ids: 0 = z, 1..m = slacks of rows 0..m-1, then one per count vector
        self._cols: list[dict[int, mpq]] = [
            {j + 1: mpq(orbits.sizes[j]) for j in range(p)}
        ]
        self._cols += [{r: _QONE} for r in range(self.m)]
        self.basis = [1 + r for r in range(self.m)]
        self.binv = [[_QONE if r == c else _QZERO for c in range(self.m)] for r in range(self.m)]
        self.xb = [_QONE] + [_QZERO] * p
        self.pivots = 0

    def counts_of(self, s: Iterable[int]) -> tuple[int, ...]:
        cnt = [0] * self.orbits.num_orbits
        for v in s:
            cnt[self.orbits.orbit_of[v]] += 1
        return tuple(cnt)

    def add_set(self, s: Iterable[int]) -> bool:
        """Register an independent set; False if its orbit counts are already present."""
        s = tuple(sorted(s))
        self.sets.append(s)
        cnt = self.counts_of(s)
        if cnt in self._count_index:
            return False
        self._count_index[cnt] = len(self._cols)
        self.counts.append(cnt)
        col = {0: _QONE}
        for j, c in enumerate(cnt):
            if c:
                col[j + 1] = mpq(-c)
        self._cols.append(col)
        return True

    def _duals(self) -> list[mpq]:
        # only z carries objective weight, so pi is the B^-1 row where z is basic
        for r, b in enumerate(self.basis):
            if b == 0:
                return list(self.binv[r])
        return [_QZERO] * self.m

    def _ftran(self, col: dict[int, mpq]) -> list[mpq]:
        return [sum((row[i] * a for i, a in col.items()), _QZERO) for row in self.binv]

    def solve(self) -> P1Solution:
        p = self.orbits.num_orbits
        if not self.counts:
            return P1Solution(WeightDist.uniform(self.orbits), _ZERO)
        while True:
            pi = self._duals()
            basic = set(self.basis)
            enter = None
            for j, col in enumerate(self._cols):
                if j in basic:
                    continue
                cost = _QONE if j == 0 else _QZERO
                d = cost - sum((pi[i] * a for i, a in col.items()), _QZERO)
                if d > 0:
                    enter = j
                    break
            if enter is None:
                break
            u = self._ftran(self._cols[enter])
            leave_row, best = None, None
            for r in range(self.m):
                if u[r] > 0:
                    ratio = self.xb[r] / u[r]
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[r] < self.basis[leave_row])):
                        leave_row, best = r, ratio
            if leave_row is None:
                raise RuntimeError("dual LP unbounded; orbit data inconsistent")
            self._pivot(leave_row, enter, u)
        pi = [_frac(x) for x in self._duals()]
        M = pi[0]
        w = pi[1:]
        # z is always basic at the optimum (it is the only costed column), so
        # its zero reduced cost is exactly the normalisation sum_j |O_j| w_j = 1
        y = [_ZERO] * len(self.counts)
        for r, b in enumerate(self.basis):
            if b > self.m:
                y[b - self.m - 1] = _frac(self.xb[r])
        sol = P1Solution(WeightDist(tuple(w), self.orbits), M, tuple(y), self.pivots)
        check_p1(sol, self.counts, self.orbits)
        return sol

    def _pivot(self, r: int, enter: int, u: list[mpq]):
        piv = u[r]
        row_r = [x / piv for x in self.binv[r]]
        nz = [c for c, x in enumerate(row_r) if x]
        xr = self.xb[r] / piv
        for i in range(self.m):
            if i == r or u[i] == 0:
                continue
            f = u[i]
            bi = self.binv[i]
            for c in nz:
                bi[c] -= f * row_r[c]
            self.xb[i] -= f * xr
        self.binv[r] = row_r
        self.xb[r] = xr
        self.basis[r] = enter
        self.pivots += 1


def check_p1(sol: P1Solution, counts: Sequence[Sequence[int]], orbits: OrbitPartition) -> None:
    """Exact optimality check: primal feasibility, dual feasibility, equal objectives."""
    w = [mpq(x) for x in sol.weights.orbit_weights]
    M = mpq(sol.M)
    if any(x < 0 for x in w):
        raise AssertionError("negative weight")
    if sum((x * s for x, s in zip(w, orbits.sizes)), _QZERO) != 1:
        raise AssertionError("weights not normalised")
    for cnt in counts:
        if sum((c * x for c, x in zip(cnt, w) if c), _QZERO) > M:
            raise AssertionError("a set is heavier than M")
    y = [mpq(x) for x in sol.set_multipliers]
    if len(y) != len(counts) or any(v < 0 for v in y) or sum(y, _QZERO) > 1:
        raise AssertionError("set multipliers infeasible")
    # every orbit must be covered at rate >= M by the multiplier mix
    cover = [_QZERO] * len(orbits.sizes)
    for yi, cnt in zip(y, counts):
        if yi:
            for j, c in enumerate(cnt):
                if c:
                    cover[j] += yi * c
    for j, size in enumerate(orbits.sizes):
        if cover[j] < M * size:
            raise AssertionError(f"dual certificate fails on orbit {j}")


def solve_p1(sets: Sequence[Iterable[int]], orbits: OrbitPartition) -> P1Solution:
    model = P1Model(orbits)
    for s in sets:
        model.add_set(s)
    return model.solve()


def solve_p1_vertexwise(sets: Sequence[Iterable[int]], n_vertices: int) -> P1Solution:
    return solve_p1(sets, singleton_orbits(n_vertices))
