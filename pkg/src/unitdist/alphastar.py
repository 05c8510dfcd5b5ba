"""Optimal weighted independence ratio by alternating an LP and an exact MWIS.

Each round solves a maximum-weight independent set for the current
weighting (its ratio ``optup`` bounds alpha* from above), adds the set to
the family, and re-solves the min-max weighting LP over the family (its
value ``optlow`` bounds alpha* from below).  The loop stops when the two
agree exactly.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import mwis
from .graph import Graph, UDGraph, bits, is_independent, mask_of
from .lp import P1Model, WeightDist
from .ops import DegeneratePairError, FieldClosureError, spindle_rotation
from .geometry import dist2
from .symmetry import OrbitPartition, from_labels, is_automorphism

log = logging.getLogger(__name__)

_ZERO = Fraction(0)


class CertificateError(ValueError):
    pass


class EverythingDeleted(ValueError):
    pass


class NoValidPair(RuntimeError):
    pass


@dataclass
class Iteration:
    index: int
    optup: Fraction | None      # ratio of an exactly solved MWIS, else None
    optlow: Fraction
    best_up: Fraction
    exact: bool
    seconds: float
    # proven upper bound from a search cut short by solve_cap
    bound: Fraction | None = None


@dataclass
class AlphaStarCertificate:
    graph_hash: str
    orbits: OrbitPartition
    weights: WeightDist
    alpha: Fraction
    witness_sets: list[tuple[int, ...]]
    # LP multipliers on witness_sets proving alpha* >= alpha (sum <= 1)
    multipliers: list[Fraction]
    max_set: tuple[int, ...]
    group: list[tuple[int, ...]] = field(default_factory=list)
    trace: list[Iteration] = field(default_factory=list)

    @property
    def chi_f(self) -> Fraction:
        return 1 / self.alpha

    @property
    def m1_bound(self) -> Fraction:
        return self.alpha

    def to_json(self) -> dict:
        q = _fmt_q
        return {
            "format": "alphastar-certificate",
            "version": 1,
            "graph_hash": self.graph_hash,
            "alpha": q(self.alpha),
            "chi_f": q(self.chi_f),
            "orbits": self.orbits.to_json(),
            "orbit_weights": [q(x) for x in self.weights.orbit_weights],
            "witness_sets": [list(s) for s in self.witness_sets],
            "multipliers": [q(x) for x in self.multipliers],
            "max_set": list(self.max_set),
            "group": [list(p) for p in self.group],
            "trace": [{"iteration": it.index,
                       "optup": None if it.optup is None else q(it.optup),
                       "optlow": q(it.optlow), "best_up": q(it.best_up),
                       "exact": it.exact, "seconds": round(it.seconds, 3),
                       "bound": None if it.bound is None else q(it.bound)}
                      for it in self.trace],
        }

    @classmethod
    def from_json(cls, obj: dict) -> AlphaStarCertificate:
        orbits = from_labels(obj["orbits"]["orbit_of"], method=obj["orbits"].get("method", ""))
        weights = WeightDist(tuple(Fraction(x) for x in obj["orbit_weights"]), orbits)
        trace = [Iteration(t["iteration"], None if t["optup"] is None else Fraction(t["optup"]),
                           Fraction(t["optlow"]), Fraction(t["best_up"]), t["exact"], t["seconds"],
                           None if t.get("bound") is None else Fraction(t["bound"]))
                 for t in obj.get("trace", [])]
        return cls(obj["graph_hash"], orbits, weights, Fraction(obj["alpha"]),
                   [tuple(s) for s in obj["witness_sets"]],
                   [Fraction(x) for x in obj["multipliers"]], tuple(obj["max_set"]),
                   [tuple(p) for p in obj.get("group", [])], trace)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def load(cls, path) -> AlphaStarCertificate:
        return cls.from_json(json.loads(Path(path).read_text()))


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def graph_hash(g: Graph) -> str:
    if isinstance(g, UDGraph):
        return g.content_hash()
    import hashlib

    return hashlib.sha256(repr((g.n, g.edges())).encode()).hexdigest()


def _group_for(g: Graph, orbits: OrbitPartition) -> list[tuple[int, ...]]:
    """Group elements usable for orbital branching: automorphisms fixing every orbit."""
    perms = [p for p in orbits.generators if is_automorphism(g, p)]
    if not perms:
        return []
    # close under composition (the groups here are small)
    ident = tuple(range(g.n))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for b in perms:
                c = tuple(b[a[v]] for v in range(g.n))
                if c not in group:
                    group.add(c)
                    nxt.append(c)
                    if len(group) > 5000:
                        return []
        frontier = nxt
    of = orbits.orbit_of
    if any(of[p[v]] != of[v] for p in group for v in range(g.n)):
        return []
    return sorted(group)


class AlphaStarRun:
    """State of the alternating loop; usable step by step or via ``run``."""

    def __init__(self, g: Graph, orbits: OrbitPartition, *, sets: Iterable[Iterable[int]] = (),
                 pricing: str = "auto", mwis_options: dict | None = None,
                 solve_cap: float | None = None, bound_every: int | None = None):
        if g.n == 0:
            raise ValueError("alpha* is undefined for the empty graph")
        if len(orbits.orbit_of) != g.n:
            raise ValueError("orbit partition does not match the graph")
        self.g = g
        self.orbits = orbits
        self.model = P1Model(orbits)
        self.group = _group_for(g, orbits)
        if pricing == "auto":
            pricing = "heuristic" if g.n > 60 else "exact"
        if pricing not in ("exact", "heuristic"):
            raise ValueError(f"unknown pricing mode {pricing!r}")
        self.pricing = pricing
        self.mwis_options = dict(mwis_options or {})
        # seconds per exact MWIS; a capped search still yields a proven bound
        self.solve_cap = solve_cap
        self.stalled = False
        # every this many heuristic rounds, record the root cover bound
        self.bound_every = bound_every
        self.cuts = mwis.CutFamilies(g)
        for s in sets:
            s = tuple(s)
            if is_independent(g, s):
                self.model.add_set(s)
        sol = self.model.solve()
        self.weights = sol.weights
        self.optlow = sol.M
        self.multipliers = sol.set_multipliers
        self.optup: Fraction | None = None
        self.best_up = Fraction(1)
        self.best_up_weights: WeightDist | None = None
        self.best_up_set: tuple[int, ...] = ()
        self.trace: list[Iteration] = []
        self.done = False
        self.certified_weights: WeightDist | None = None
        self.certified_multipliers: tuple[Fraction, ...] = ()
        self.certified_counts: list = []

    def _heaviest(self, w: WeightDist):
        best, best_w = (), _ZERO
        for s in self.model.sets:
            x = w.set_weight(s)
            if x > best_w:
                best, best_w = s, x
        return best

    def _heuristic_set(self, wv):
        """Greedy plus local search from a few starts; returns a mask.

        The search runs on float weights; only the exact weight of the
        result decides whether it is a useful column."""
        g = self.g
        wf = [float(x) for x in wv]
        full = (1 << g.n) - 1

        def exact(m):
            return sum((wv[u] for u in bits(m)), _ZERO)

        best = mwis.greedy_independent(g, wf)
        best_w = exact(best)
        # restarts seeded by each heavy vertex
        order = sorted(range(g.n), key=lambda v: (-wv[v], v))[:8]
        for v in order:
            cand = full & ~g.adj[v] & ~(1 << v)
            m = mwis.greedy_independent(g, wf, cand) | 1 << v
            m = mwis._local_search(g, wf, m, full)
            x = exact(m)
            if x > best_w:
                best, best_w = m, x
        if best_w <= self.optlow:
            m = mwis.iterated_local_search(g, wv, start=best, rounds=40, seed=len(self.trace))
            x = exact(m)
            if x > best_w:
                best, best_w = m, x
        return best, best_w

    def _root_bound(self, wv) -> Fraction:
        """Proven upper bound on the heaviest independent set (root of the search)."""
        try:
            res = mwis.solve(self.g, wv, cuts=self.cuts, node_limit=0,
                             incumbent=self._heaviest(self.weights))
        except mwis.SearchLimitExceeded as exc:
            return exc.upper_bound
        return res.weight

    def step(self) -> Iteration:
        t0 = time.monotonic()
        w = self.weights
        wv = w.vertex_weights()
        exact = True
        if self.pricing == "heuristic":
            mask, val = self._heuristic_set(wv)
            if val > self.optlow:
                exact = False
                new_set = tuple(bits(mask))
        bound = None
        if not exact and self.bound_every and len(self.trace) % self.bound_every == 0:
            bound = self._root_bound(wv)
            if bound < self.best_up:
                self.best_up = bound
                self.best_up_weights = w
        if exact:
            opts = dict(self.mwis_options)
            if self.solve_cap is not None:
                opts["time_limit"] = min(opts.get("time_limit", self.solve_cap), self.solve_cap)
            try:
                res = mwis.solve(self.g, wv, cuts=self.cuts, group=self.group or None,
                                 incumbent=self._heaviest(w), **opts)
            except mwis.SearchLimitExceeded as exc:
                if self.solve_cap is None or opts["time_limit"] < self.solve_cap:
                    raise
                # w(V) = 1, so the bound on the set weight bounds alpha* directly
                bound = exc.upper_bound
                if bound < self.best_up:
                    self.best_up = bound
                    self.best_up_weights = w
                exact = False
                new_set = tuple(bits(exc.incumbent))
                val = exc.weight
                # no improving column found in time: nothing left to add
                self.stalled = val <= self.optlow
            else:
                new_set = res.set
                val = res.weight
                # w is normalised (w(V) = 1), so the set weight is the ratio itself
                self.optup = val
                if val < self.best_up:
                    self.best_up = val
                    self.best_up_weights = w
                    self.best_up_set = new_set
                if val == self.optlow:
                    self.done = True
                    self.certified_weights = w
                    self.certified_multipliers = self.multipliers
                    self.certified_counts = list(self.model.counts)
                    self.certified_max_set = new_set
        prev_low = self.optlow
        if not self.done and not self.stalled:
            self.model.add_set(new_set)
            sol = self.model.solve()
            self.weights, self.optlow, self.multipliers = sol.weights, sol.M, sol.set_multipliers
        assert self.optlow >= prev_low, "optlow decreased"
        assert self.optlow <= self.best_up, "lower bound above upper bound"
        it = Iteration(len(self.trace), val if exact else None, self.optlow, self.best_up,
                       exact, time.monotonic() - t0, bound)
        self.trace.append(it)
        return it

    def run(self, time_budget: float | None = None,
            callback: Callable[[Iteration], None] | None = None) -> AlphaStarCertificate | None:
        deadline = None if time_budget is None else time.monotonic() + time_budget
        while not self.done:
            if self.stalled:
                return None
            if deadline is not None:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return None
                self.mwis_options["time_limit"] = remaining
            try:
                it = self.step()
            except mwis.SearchLimitExceeded:
                return None
            log.info("iter %d: optup=%s optlow=%.8f best_up=%.8f exact=%s (%.1fs)",
                     it.index, "-" if it.optup is None else f"{float(it.optup):.8f}",
                     float(it.optlow), float(it.best_up), it.exact, it.seconds)
            if callback:
                callback(it)
        return self.certificate()

    def certificate(self) -> AlphaStarCertificate:
        if not self.done:
            raise RuntimeError("loop has not converged")
        # witness sets are representatives of the LP count vectors
        reps = {}
        for s in self.model.sets:
            reps.setdefault(self.model.counts_of(s), s)
        witness = [reps[c] for c in self.certified_counts]
        return AlphaStarCertificate(
            graph_hash=graph_hash(self.g), orbits=self.orbits,
            weights=self.certified_weights, alpha=self.optlow, witness_sets=witness,
            multipliers=list(self.certified_multipliers), max_set=self.certified_max_set,
            group=self.group, trace=list(self.trace))


def alpha_star(g: Graph, orbits: OrbitPartition, **kw) -> AlphaStarCertificate:
    """Exact alpha*(g) with a re-checkable certificate."""
    budget = kw.pop("time_budget", None)
    cert = AlphaStarRun(g, orbits, **kw).run(budget)
    if cert is None:
        raise TimeoutError("alpha* loop did not converge within the time budget")
    return cert


# ---------------------------------------------------------------- verification

def verify_certificate(g: Graph, cert: AlphaStarCertificate, **mwis_kw) -> bool:
    try:
        check_certificate(g, cert, **mwis_kw)
    except CertificateError as exc:
        log.warning("certificate rejected: %s", exc)
        return False
    return True


def check_certificate(g: Graph, cert: AlphaStarCertificate, **mwis_kw) -> None:
    """Raise CertificateError describing the first failed check."""
    if cert.graph_hash != graph_hash(g):
        raise CertificateError("graph hash mismatch")
    orbits = cert.orbits
    if len(orbits.orbit_of) != g.n:
        raise CertificateError("orbit partition size mismatch")
    w = cert.weights
    if any(x < 0 for x in w.orbit_weights):
        raise CertificateError("negative weight")
    if w.total() != 1:
        raise CertificateError(f"weights sum to {w.total()}, not 1")
    for s in cert.witness_sets + [cert.max_set]:
        if not is_independent(g, s):
            raise CertificateError(f"witness set {s} is not independent")
    wv = w.vertex_weights()
    if sum((wv[v] for v in cert.max_set), _ZERO) != cert.alpha:
        raise CertificateError("max_set weight differs from alpha")
    # upper bound: no independent set beats alpha under w; the cut families
    # are rebuilt from g here, nothing is taken from the run
    mwis_kw.setdefault("cuts", mwis.CutFamilies(g))
    res = mwis.solve(g, wv, incumbent=cert.max_set, **mwis_kw)
    if res.weight != cert.alpha:
        raise CertificateError(f"MWIS under the weighting is {res.weight}, not {cert.alpha}")
    # lower bound: the witness sets and their group images form a fractional
    # colouring covering every vertex at rate >= alpha with total mass <= 1
    y = cert.multipliers
    if len(y) != len(cert.witness_sets) or any(x < 0 for x in y) or sum(y, _ZERO) > 1:
        raise CertificateError("multipliers infeasible")
    group = cert.group or [tuple(range(g.n))]
    for p in group:
        if not is_automorphism(g, p):
            raise CertificateError("group element is not an automorphism")
    cover = [_ZERO] * g.n
    share = Fraction(1, len(group))
    for s, yi in zip(cert.witness_sets, y):
        if not yi:
            continue
        for p in group:
            for v in s:
                cover[p[v]] += yi * share
    if any(c < cert.alpha for c in cover):
        raise CertificateError("witness cover does not certify the lower bound")


# ---------------------------------------------------------------- reduction, spindling pair

def carry_sets(old: UDGraph, new: UDGraph, sets: Iterable[Iterable[int]]) -> list[tuple[int, ...]]:
    """Re-index sets of ``old`` into ``new`` by coordinates; keep those that
    survive whole and are still independent (warm start after a transform)."""
    out = []
    seen = set()
    for s in sets:
        pts = [old.vertices[v] for v in s]
        if not all(p in new for p in pts):
            continue
        t = tuple(sorted(new.index(p) for p in pts))
        if t not in seen and is_independent(new, t):
            seen.add(t)
            out.append(t)
    return out


def reduce(g: Graph, cert: AlphaStarCertificate, tau=0):
    """Delete orbits of per-vertex weight below tau (and zero-weight orbits).

    Returns (induced subgraph, eps) with eps = w(deleted) / w(V); then
    (1 - eps) * alpha*(reduced) <= alpha*(g).
    """
    tau = Fraction(tau)
    wv = cert.weights.vertex_weights()
    drop = [v for v in range(g.n) if wv[v] == 0 or wv[v] < tau]
    if len(drop) == g.n:
        raise EverythingDeleted(f"threshold {tau} deletes every vertex")
    eps = sum((wv[v] for v in drop), _ZERO) / sum(wv, _ZERO)
    keep = [v for v in range(g.n) if v not in set(drop)]
    return g.induced_subgraph(keep), eps


def pick_spindling_pair(g: UDGraph, cert: AlphaStarCertificate, full_scan: bool = False,
                        **mwis_kw) -> tuple[int, int]:
    """Choose (u, v): v heaviest (lowest index among ties), u minimising the best
    independent set that contains u and avoids v."""
    wv = cert.weights.vertex_weights()
    top = max(wv)
    v = min(i for i in range(g.n) if wv[i] == top)
    candidates = [u for u in range(g.n) if u != v]
    if not full_scan and cert.group:
        # symmetric weights: vertices in one orbit of the stabiliser of v score equally
        stab = [p for p in cert.group if p[v] == v]
        seen = set()
        reps = []
        for u in candidates:
            if u in seen:
                continue
            reps.append(u)
            seen.update(p[u] for p in stab)
        candidates = reps
    cuts = mwis.CutFamilies(g)
    scored = []
    for u in candidates:
        res = mwis.solve_excluding_including(g, wv, exclude=v, include=u, cuts=cuts, **mwis_kw)
        scored.append((res.weight, u))
    scored.sort()
    for _, u in scored:
        try:
            spindle_rotation(dist2(g.vertices[u], g.vertices[v]))
        except (FieldClosureError, DegeneratePairError):
            continue
        return u, v
    raise NoValidPair("no candidate pair admits a spindling inside the field")


# ---------------------------------------------------------------- reporting

def _decimal(q: Fraction, places: int, rounding) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 200
        d = Decimal(q.numerator) / Decimal(q.denominator)
        return d.quantize(Decimal(1).scaleb(-places), rounding=rounding)


@dataclass
class BoundReport:
    alpha: Fraction
    chi_f: Fraction
    m1_upper: Decimal      # rounded up: still a valid upper bound on m1
    chi_f_lower: Decimal   # rounded down: still a valid lower bound on chi_f

    def lines(self) -> list[str]:
        return [f"alpha* = {_fmt_q(self.alpha)}",
                f"chi_f = {_fmt_q(self.chi_f)}",
                f"m1(R^2) <= {self.m1_upper}",
                f"chi_f(R^2) >= {self.chi_f_lower}"]

    def to_json(self) -> dict:
        return {"alpha": _fmt_q(self.alpha), "chi_f": _fmt_q(self.chi_f),
                "m1_upper": str(self.m1_upper), "chi_f_lower": str(self.chi_f_lower)}


def report_bounds(cert_or_alpha, places: int = 10) -> BoundReport:
    alpha = cert_or_alpha.alpha if isinstance(cert_or_alpha, AlphaStarCertificate) else Fraction(cert_or_alpha)
    chi = 1 / alpha
    return BoundReport(alpha, chi, _decimal(alpha, places, ROUND_CEILING).normalize(),
                       _decimal(chi, places, ROUND_FLOOR).normalize())
