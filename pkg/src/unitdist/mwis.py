"""Exact maximum-weight independent set by branch and bound.

Bounds come from covering the candidate vertices' weights with valid
inequalities: a clique holds at most one chosen vertex, an induced Moser
spindle at most two.  If clique/spindle k receives a multiplier y_k >= 0 and
every vertex v satisfies sum_{k ∋ v} y_k >= w(v), then any independent set
weighs at most sum_k rhs_k y_k.  Two ways of picking the multipliers:

* ``greedy`` peels cheapest-first covers off the residual weights (exact
  Fractions, no dependencies);
* ``lp`` takes the optimal duals of the LP relaxation from HiGHS, then
  repairs any per-vertex deficit exactly, so the bound stays rigorous.

Float values only prune when they clear a guard band; inside the band the
bound is recomputed in exact arithmetic.

With a symmetry group that fixes the weights, branching is orbital: either
the representative vertex is in the set or its whole orbit (under the
stabiliser of the current fixings) is out.
"""

from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, bits, is_independent, mask_of
from .structures import maximal_cliques, moser_spindles

log = logging.getLogger(__name__)

_ZERO = Fraction(0)
# relative float guard; true rounding error is below 1e-13 at these sizes
_GUARD = 1e-9
_SNAP = 10**6


class InfeasibleForcing(ValueError):
    """forced_in is not independent or intersects forced_out."""


class SearchLimitExceeded(RuntimeError):
    """Search stopped early.  ``upper_bound`` is still a proven bound on the
    optimum: the larger of the incumbent and every unexplored subtree's cover bound."""

    def __init__(self, msg, incumbent=None, weight=None, nodes=0, upper_bound=None):
        super().__init__(msg)
        self.incumbent = incumbent
        self.weight = weight
        self.nodes = nodes
        self.upper_bound = upper_bound


@dataclass(frozen=True)
class MwisResult:
    set: tuple[int, ...]
    weight: Fraction
    nodes: int = 0


class CutFamilies:
    """Clique and spindle families of a graph, computed once and shared."""

    def __init__(self, g: Graph, spindles: bool = True):
        self.cliques = [c for c in maximal_cliques(g) if len(c) >= 2]
        self.spindles = moser_spindles(g) if spindles else []
        self.rows = [(c, 1) for c in self.cliques] + [(s, 2) for s in self.spindles]
        self.row_masks = [mask_of(r) for r, _ in self.rows]
        self.vertex_rows: list[list[int]] = [[] for _ in range(g.n)]
        for k, (r, _) in enumerate(self.rows):
            for v in r:
                self.vertex_rows[v].append(k)


class _LPBound:
    """LP relaxation over clique/spindle rows, warm-started between nodes."""

    def __init__(self, g: Graph, cuts: CutFamilies, wf: np.ndarray):
        import highspy

        self.n = g.n
        self.cuts = cuts
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("presolve", "off")
        inf = highspy.kHighsInf
        lp = highspy.HighsLp()
        lp.num_col_ = g.n
        lp.num_row_ = len(cuts.rows)
        lp.col_cost_ = wf
        lp.col_lower_ = np.zeros(g.n)
        lp.col_upper_ = np.ones(g.n)
        lp.row_lower_ = np.full(len(cuts.rows), -inf)
        lp.row_upper_ = np.array([float(r) for _, r in cuts.rows])
        starts, index = [0], []
        for v in range(g.n):
            index += cuts.vertex_rows[v]
            starts.append(len(index))
        lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
        lp.a_matrix_.start_ = np.array(starts, dtype=np.int32)
        lp.a_matrix_.index_ = np.array(index, dtype=np.int32)
        lp.a_matrix_.value_ = np.ones(len(index))
        lp.sense_ = highspy.ObjSense.kMaximize
        h.passModel(lp)
        self.h = h
        self.upper = np.ones(g.n)
        self.idx = np.arange(g.n, dtype=np.int32)
        self.rhs = np.array([float(r) for _, r in cuts.rows])
        rows_i, cols_i = [], []
        for k, (r, _) in enumerate(cuts.rows):
            rows_i += [k] * len(r)
            cols_i += list(r)
        from scipy.sparse import csr_matrix

        self.A = csr_matrix((np.ones(len(rows_i)), (rows_i, cols_i)),
                            shape=(len(cuts.rows), g.n))

    def solve(self, cand: np.ndarray):
        """LP duals for the subproblem restricted to the boolean mask ``cand``."""
        upper = cand.astype(float)
        changed = np.nonzero(upper != self.upper)[0].astype(np.int32)
        if len(changed):
            self.h.changeColsBounds(len(changed), changed, np.zeros(len(changed)),
                                    upper[changed])
            self.upper = upper
        self.h.run()
        sol = self.h.getSolution()
        y = np.maximum(np.array(sol.row_dual), 0.0)
        x = np.array(sol.col_value)
        return y, x


class _Search:
    def __init__(self, g, w, cuts, bound, group, deadline, node_limit, log_every):
        self.g = g
        self.adj = g.adj
        self.w = w
        self.wf = np.array([float(x) for x in w])
        self.cuts = cuts
        self.bound_mode = bound
        self.group = group
        self.deadline = deadline
        self.node_limit = node_limit
        self.log_every = log_every
        self.nodes = 0
        self.best_w = _ZERO
        self.best_set = 0
        self.lp = _LPBound(g, cuts, self.wf) if bound == "lp" else None
        self.total_abs = float(self.wf.sum()) + 1.0
        self.grain = weight_grain(w)
        self.pending: list[tuple[int, Fraction]] = []

    # -------------------------------------------------------------- bounds
    def greedy_bound(self, cand: int) -> Fraction:
        """Peel covers off residual weights: spindles first, then cliques, then singletons."""
        resid = {v: self.w[v] for v in bits(cand)}
        total = _ZERO
        if self.cuts.spindles:
            for s in self.cuts.spindles:
                if any(v not in resid for v in s):
                    continue
                m = min(resid[v] for v in s)
                if m > 0:
                    total += 2 * m
                    for v in s:
                        resid[v] -= m
        # heaviest residual vertex first, cover it with its heaviest clique
        order = sorted(resid, key=lambda v: (-resid[v], v))
        for v in order:
            if resid[v] <= 0:
                continue
            best, best_gain = None, -1
            for k in self.cuts.vertex_rows[v]:
                if k >= len(self.cuts.cliques):
                    continue
                members = [u for u in self.cuts.rows[k][0] if u in resid and resid[u] > 0]
                gain = len(members)
                if gain > best_gain:
                    best, best_gain = members, gain
            if best is None or best_gain <= 1:
                total += resid[v]
                resid[v] = _ZERO
                continue
            m = min(resid[u] for u in best)
            total += m
            for u in best:
                resid[u] -= m
            if resid[v] > 0:
                # leftover weight of v: try its other cliques on the next visit
                order.append(v)
        return total

    def lp_bound(self, cand: int, current: Fraction):
        """Rigorous LP cover bound; returns (bound is <= incumbent, lp x)."""
        mask = np.zeros(self.g.n, dtype=bool)
        mask[bits(cand)] = True
        y, x = self.lp.solve(mask)
        A = self.lp.A
        # rows that still touch the candidates; their rhs may shrink
        touch = A @ mask.astype(float)
        live = touch > 0
        y = np.where(live, y, 0.0)
        rhs = np.minimum(self.lp.rhs, touch)
        cover = A.T @ y
        deficit = np.where(mask, np.maximum(self.wf - cover, 0.0), 0.0)
        fb = float(rhs @ y + deficit.sum())
        guard = _GUARD * (self.total_abs + float(rhs @ y))
        # a strictly better set must reach best + grain (all set weights are
        # multiples of the weights' gcd)
        target = self.best_w - current + self.grain
        tf = float(target)
        if fb + guard < tf:
            return True, x
        if fb - guard >= tf:
            return False, x
        return self._exact_cover(cand, y, rhs) < target, x

    def _exact_cover(self, cand: int, y: np.ndarray, rhs: np.ndarray) -> Fraction:
        # LP duals are small-denominator rationals; snapping to them removes
        # float noise, and the deficit repair keeps any choice valid
        yq = {}
        for k in np.nonzero(y > 0)[0]:
            q = Fraction(float(y[k])).limit_denominator(_SNAP)
            if q > 0:
                yq[k] = q
        total = sum((yq[k] * Fraction(int(rhs[k])) for k in yq), _ZERO)
        for v in bits(cand):
            cov = sum((yq[k] for k in self.cuts.vertex_rows[v] if k in yq), _ZERO)
            if cov < self.w[v]:
                total += self.w[v] - cov
        return total

    # -------------------------------------------------------------- symmetry
    def stabiliser_orbit(self, v: int, fixed_in: int, fixed_out: int, cand: int) -> int:
        orbit = 1 << v
        for perm in self.group:
            if _map_mask(perm, fixed_in) == fixed_in and _map_mask(perm, fixed_out) == fixed_out:
                u = perm[v]
                if cand >> u & 1:
                    orbit |= 1 << u
        return orbit

    # -------------------------------------------------------------- search
    def consider(self, weight: Fraction, chosen: int):
        if weight > self.best_w:
            self.best_w = weight
            self.best_set = chosen

    def run(self, cand: int, chosen: int, current: Fraction, fixed_out: int):
        self.nodes += 1
        if self.nodes % self.log_every == 0:
            log.info("mwis: %d nodes, incumbent %s", self.nodes, float(self.best_w))
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.stop("time limit", cand, current)
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.stop("node limit", cand, current)
        adj, w = self.adj, self.w
        # isolated candidates join for free; zero-weight ones can be dropped
        free = 0
        for v in bits(cand):
            if w[v] == 0:
                cand &= ~(1 << v)
            elif not adj[v] & cand:
                free |= 1 << v
        if free:
            current += sum((w[v] for v in bits(free)), _ZERO)
            chosen |= free
            cand &= ~free
        if not cand:
            self.consider(current, chosen)
            return
        x = None
        if self.bound_mode == "lp":
            pruned, x = self.lp_bound(cand, current)
            if pruned:
                return
        else:
            if current + self.greedy_bound(cand) < self.best_w + self.grain:
                return
        v = self.pick(cand, x)
        orbit = (self.stabiliser_orbit(v, chosen, fixed_out, cand)
                 if self.group else 1 << v)
        # include v, remembering the exclude branch in case the search is cut short
        self.pending.append((cand & ~orbit, current))
        self.run(cand & ~(1 << v) & ~adj[v], chosen | 1 << v, current + w[v], fixed_out)
        self.pending.pop()
        # exclude v (and, by symmetry, its whole orbit)
        self.run(cand & ~orbit, chosen, current, fixed_out | orbit)

    def proven_bound(self, cand: int) -> Fraction:
        """Exact cover bound on the best weight inside ``cand``."""
        if not cand:
            return _ZERO
        if self.lp is None:
            return self.greedy_bound(cand)
        mask = np.zeros(self.g.n, dtype=bool)
        mask[bits(cand)] = True
        y, _ = self.lp.solve(mask)
        touch = self.lp.A @ mask.astype(float)
        y = np.where(touch > 0, y, 0.0)
        return min(self._exact_cover(cand, y, np.minimum(self.lp.rhs, touch)),
                   self.greedy_bound(cand))

    def stop(self, why: str, cand: int, current: Fraction):
        ub = self.best_w
        for c, cur in self.pending + [(cand, current)]:
            ub = max(ub, cur + self.proven_bound(c))
        raise SearchLimitExceeded(why, self.best_set, self.best_w, self.nodes, ub)

    def pick(self, cand: int, x) -> int:
        # keys only steer the search, floats are fine here
        wf, adj = self.wf, self.adj
        best, best_key = None, None
        for v in bits(cand):
            if x is not None and (x[v] < 1e-6 or x[v] > 1 - 1e-6):
                continue
            key = wf[v] + sum(wf[u] for u in bits(adj[v] & cand))
            if best_key is None or key > best_key:
                best, best_key = v, key
        if best is None:
            # integral LP point: branch on the heaviest weighted-degree vertex anyway
            return self.pick(cand, None)
        return best


def weight_grain(w: Sequence[Fraction]) -> Fraction:
    """Largest g with every weight an integer multiple of g (0 if all weights vanish)."""
    nums = [x for x in w if x]
    if not nums:
        return _ZERO
    lcm = 1
    for x in nums:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    g = 0
    for x in nums:
        g = math.gcd(g, x.numerator * (lcm // x.denominator))
    return Fraction(g, lcm)


def _map_mask(perm, mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << perm[v]
    return out


def greedy_independent(g: Graph, w: Sequence[Fraction], cand: int | None = None) -> int:
    """Greedy by w(v)/(deg+1), then 1-for-1 and 1-for-2 swap improvement."""
    adj = g.adj
    cand = (1 << g.n) - 1 if cand is None else cand
    chosen = 0
    rest = cand
    while rest:
        v = max(bits(rest), key=lambda u: (w[u] / ((adj[u] & rest).bit_count() + 1), -u))
        chosen |= 1 << v
        rest &= ~(1 << v) & ~adj[v]
    return _local_search(g, w, chosen, cand)


def _local_search(g, w, chosen, cand):
    adj = g.adj
    improved = True
    while improved:
        improved = False
        # 1-for-many: insert v, evict its chosen neighbours, refill around them
        for v in bits(cand & ~chosen):
            conflict = adj[v] & chosen
            loss = sum((w[u] for u in bits(conflict)), _ZERO)
            gain = w[v]
            new = (chosen & ~conflict) | 1 << v
            free = cand & ~new
            for u in bits(conflict):
                free_nb = adj[u] & free
                for t in bits(free_nb):
                    if not (adj[t] | 1 << t) & new:
                        new |= 1 << t
                        gain += w[t]
            if gain > loss:
                chosen = new
                improved = True
        # many-for-1: drop x, take a heavy independent subset of its 1-tight neighbours
        for x in bits(chosen):
            rest = chosen & ~(1 << x)
            tight = 0
            for u in bits(adj[x] & cand & ~chosen):
                if not adj[u] & rest:
                    tight |= 1 << u
            if tight.bit_count() < 2:
                continue
            add, gain = 0, _ZERO
            while tight:
                u = max(bits(tight), key=lambda t: (w[t], -t))
                add |= 1 << u
                gain += w[u]
                tight &= ~(1 << u) & ~adj[u]
            if gain > w[x]:
                chosen = rest | add
                improved = True
    return chosen


def iterated_local_search(g: Graph, w: Sequence, start: int | None = None, rounds: int = 200,
                          seed: int = 0, cand: int | None = None) -> int:
    """Perturb-and-repair heuristic for heavy independent sets (no optimality claim).

    Each round forces a few random outside vertices in, evicts their
    neighbours, refills by local search and keeps the result if it is no
    lighter.  Deterministic for a fixed seed.
    """
    rng = random.Random(seed)
    wf = [float(x) for x in w]
    cand = (1 << g.n) - 1 if cand is None else cand
    best = greedy_independent(g, wf, cand) if start is None else start
    best_val = sum(wf[v] for v in bits(best))
    cur, cur_val = best, best_val
    pool = list(bits(cand))
    if not pool:
        return best
    for _ in range(rounds):
        new = cur
        for v in rng.sample(pool, min(len(pool), rng.randint(1, 3))):
            if not new >> v & 1:
                new = (new & ~g.adj[v]) | 1 << v
        rest = cand & ~new
        for u in list(bits(new)):
            rest &= ~g.adj[u]
        while rest:
            v = max(bits(rest), key=lambda u: (wf[u], -u))
            new |= 1 << v
            rest &= ~(1 << v) & ~g.adj[v]
        new = _local_search(g, wf, new, cand)
        val = sum(wf[v] for v in bits(new))
        if val >= cur_val:
            cur, cur_val = new, val
            if val > best_val:
                best, best_val = new, val
    return best


def solve(g: Graph, w: Sequence, forced_in: Iterable[int] = (), forced_out: Iterable[int] = (),
          *, cuts: CutFamilies | None = None, bound: str = "auto", group=None,
          incumbent: Iterable[int] | None = None, time_limit: float | None = None,
          node_limit: int | None = None, log_every: int = 10000) -> MwisResult:
    """Exact maximum-weight independent set containing forced_in and avoiding forced_out.

    ``bound`` is "greedy", "lp" or "auto" (LP for graphs above 60 vertices).
    ``group`` is an optional list of vertex permutations that are graph
    automorphisms preserving ``w``; it enables orbital branching.
    ``incumbent`` is an optional independent set used as the starting
    solution.  Exceeding a limit raises SearchLimitExceeded.
    """
    w = [x if isinstance(x, Fraction) else Fraction(x) for x in w]
    if len(w) != g.n:
        raise ValueError("one weight per vertex required")
    if any(x < 0 for x in w):
        raise ValueError("weights must be nonnegative")
    fin = mask_of(forced_in)
    fout = mask_of(forced_out)
    if fin & fout:
        raise InfeasibleForcing("forced_in and forced_out overlap")
    if not is_independent(g, bits(fin)):
        raise InfeasibleForcing("forced_in is not independent")
    if bound == "auto":
        bound = "lp" if g.n > 60 else "greedy"
    if cuts is None:
        cuts = CutFamilies(g)
    if group:
        group = [tuple(p) for p in group if any(i != x for i, x in enumerate(p))]
        for perm in group:
            if any(w[perm[v]] != w[v] for v in range(g.n)):
                raise ValueError("group does not preserve the weights")
    deadline = None if time_limit is None else time.monotonic() + time_limit
    s = _Search(g, w, cuts, bound, group or [], deadline, node_limit, log_every)

    full = (1 << g.n) - 1
    cand = full & ~fout & ~fin
    for v in bits(fin):
        cand &= ~g.adj[v]
    base = sum((w[v] for v in bits(fin)), _ZERO)
    s.best_set = fin
    s.best_w = base
    if incumbent is not None:
        inc = mask_of(incumbent)
        if is_independent(g, bits(inc)) and not inc & fout and inc & fin == fin:
            s.consider(sum((w[v] for v in bits(inc)), _ZERO), inc)
    start = greedy_independent(g, w, cand) | fin
    s.consider(sum((w[v] for v in bits(start)), _ZERO), start)
    s.run(cand, fin, base, fout)
    result = MwisResult(tuple(bits(s.best_set)), s.best_w, s.nodes)
    assert is_independent(g, result.set)
    return result


def solve_excluding_including(g: Graph, w: Sequence, exclude: int, include: int, **kw) -> MwisResult:
    if exclude == include:
        raise InfeasibleForcing("exclude and include must differ")
    return solve(g, w, forced_in=(include,), forced_out=(exclude,), **kw)
