"""Buchberger engine for submodules of graded free modules.

Plain Buchberger with normal selection (lowest S-pair degree first) and two
classical pair filters: the coprime-lead filter, only in rank-one ambients
where it is actually valid, and the chain filter on lcm divisibility.  No
signature-based shortcuts.  Because every element is homogeneous, pairs can
be processed degree by degree; a run truncated after all pairs of degree <= D
has found every basis element of degree <= D, which is what the adaptive
length counting below relies on.

Kernel computations (syzygies, colons, intersections, presentations of
subquotients) all reduce to one primitive: the kernel of a map from a free
module to a presented module, computed with a block order in which target
positions dominate tracking positions.
"""
from __future__ import annotations

import heapq

import numpy as np

from .errors import CrossCheckFailure, InfiniteLength
from .ring import (FreeElement, FreeModule, mono_deg, mono_div, mono_divides,
                   mono_lcm)

NEG_INF = float("-inf")

_DEBUG_VERIFY = False


def set_debug_verification(flag: bool) -> None:
    """When on, every completed basis re-checks that all S-pairs reduce to
    zero, with no pair filters.  Slow; meant for tests and --verify-gb."""
    global _DEBUG_VERIFY
    _DEBUG_VERIFY = bool(flag)


def debug_verification_enabled() -> bool:
    return _DEBUG_VERIFY


class BuchbergerState:
    """Incremental Buchberger run over a fixed ambient.

    assume_reduced_prefix marks the first k inserted generators as an already
    reduced basis: pairs inside the prefix are skipped, which is exactly
    Buchberger's criterion applied to a known basis.
    """

    def __init__(self, ambient: FreeModule, gens, assume_reduced_prefix: int = 0,
                 build_pairs: bool = True):
        self.ambient = ambient
        self.basis = []
        self.by_pos = {}
        self.pairs = []
        self.pending = set()
        self.prefix = assume_reduced_prefix
        self.build_pairs = build_pairs
        count = 0
        for g in gens:
            if not g:
                continue
            if count < assume_reduced_prefix:
                self._append(g.monic())
            else:
                nf = self.normal_form(g)
                if nf:
                    self._append(nf.monic())
            count += 1

    # -- basis bookkeeping

    def _append(self, g: FreeElement) -> None:
        idx = len(self.basis)
        self.basis.append(g)
        (pos, exps), _ = g.lead_term()
        single = len(g.terms) == 1
        self.by_pos.setdefault(pos, []).append((mono_deg(exps), exps, idx))
        if not self.build_pairs:
            return
        rank1 = self.ambient.rank == 1 and self.ambient.elim_rank == 0
        for dj, ej, j in self.by_pos[pos][:-1]:
            gj = self.basis[j]
            if single and len(gj.terms) == 1:
                continue  # S-pair of two terms cancels identically
            if idx < self.prefix and j < self.prefix:
                continue
            if rank1 and all(a == 0 or b == 0 for a, b in zip(exps, ej)):
                continue  # coprime leads, valid for ideals only
            lcm = mono_lcm(exps, ej)
            pair = (j, idx)
            self.pending.add(pair)
            heapq.heappush(self.pairs,
                           (mono_deg(lcm) + self.ambient.twists[pos], j, idx))

    def find_reducer(self, t):
        pos, exps = t
        lst = self.by_pos.get(pos)
        if not lst:
            return None
        d = mono_deg(exps)
        for dg, eg, idx in lst:
            if dg <= d and mono_divides(eg, exps):
                return eg, self.basis[idx]
        return None

    # -- reduction

    def _reduce_dict(self, work: dict) -> dict:
        ambient = self.ambient
        p = ambient.ring.prime
        heap = [(ambient.heap_key(t), t) for t in work]
        heapq.heapify(heap)
        out = {}
        while heap:
            _, t = heapq.heappop(heap)
            c = work.get(t)
            if c is None:
                continue  # cancelled or stale entry
            red = self.find_reducer(t)
            if red is None:
                out[t] = c
                del work[t]
                continue
            lead_exps, g = red
            del work[t]
            shift = mono_div(t[1], lead_exps)
            pos0 = t[0]
            for (pos2, e2), c2 in g.terms.items():
                if pos2 == pos0 and e2 == lead_exps:
                    continue  # the lead cancels against t exactly, g is monic
                nt = (pos2, tuple(x + y for x, y in zip(e2, shift)))
                old = work.get(nt)
                if old is None:
                    v = (-c * c2) % p
                    if v:
                        work[nt] = v
                        heapq.heappush(heap, (ambient.heap_key(nt), nt))
                else:
                    v = (old - c * c2) % p
                    if v:
                        work[nt] = v
                    else:
                        del work[nt]
        return out

    def normal_form(self, v: FreeElement) -> FreeElement:
        if not v:
            return v
        return FreeElement(self.ambient, self._reduce_dict(dict(v.terms)),
                           _checked=True)

    # -- pair processing

    def _chain_skip(self, i: int, j: int) -> bool:
        gi, gj = self.basis[i], self.basis[j]
        (pos, ei), _ = gi.lead_term()
        (_, ej), _ = gj.lead_term()
        lcm = mono_lcm(ei, ej)
        for _, ek, k in self.by_pos[pos]:
            if k == i or k == j:
                continue
            if not mono_divides(ek, lcm):
                continue
            a = (i, k) if i < k else (k, i)
            b = (j, k) if j < k else (k, j)
            if a not in self.pending and b not in self.pending:
                return True
        return False

    def _spoly(self, i: int, j: int) -> FreeElement:
        gi, gj = self.basis[i], self.basis[j]
        (_, ei), _ = gi.lead_term()
        (_, ej), _ = gj.lead_term()
        lcm = mono_lcm(ei, ej)
        return gi.shifted(mono_div(lcm, ei)) - gj.shifted(mono_div(lcm, ej))

    def process(self, until=None) -> None:
        """Run until the pair queue is empty, or only pairs of degree > until
        remain.  Homogeneity makes the truncated state complete through
        degree `until`."""
        while self.pairs:
            d = self.pairs[0][0]
            if until is not None and d > until:
                return
            _, i, j = heapq.heappop(self.pairs)
            self.pending.discard((i, j))
            if self._chain_skip(i, j):
                continue
            s = self._spoly(i, j)
            nf = FreeElement(self.ambient, self._reduce_dict(dict(s.terms)),
                             _checked=True)
            if nf:
                self._append(nf.monic())

    @property
    def complete(self) -> bool:
        return not self.pairs

    def leads_by_position(self) -> dict:
        out = {}
        for pos, lst in self.by_pos.items():
            out[pos] = [e for _, e, _ in lst]
        return out


def _interreduce(ambient: FreeModule, elems):
    """Minimal leads, fully tail-reduced, monic, sorted by lead term."""
    elems = [g for g in elems if g]
    elems.sort(key=lambda g: ambient.term_key(g.lead_term()[0]))
    kept = []
    kept_leads = []
    for g in elems:
        (pos, e), _ = g.lead_term()
        # a divisor lead is <= in the order, so scanning ascending suffices
        if any(kp == pos and mono_divides(ke, e) for kp, ke in kept_leads):
            continue
        kept.append(g.monic())
        kept_leads.append((pos, e))
    reducer = BuchbergerState(ambient, [], build_pairs=False)
    for g in kept:
        reducer._append(g)
    out = []
    for g in kept:
        lt, lc = g.lead_term()
        tail = dict(g.terms)
        del tail[lt]
        red = reducer._reduce_dict(tail)
        red[lt] = lc
        out.append(FreeElement(ambient, red, _checked=True))
    out.sort(key=lambda g: ambient.term_key(g.lead_term()[0]))
    return out


class SubmoduleBasis:
    """A submodule of a graded free module, carrying its reduced basis.

    gb is canonical for the ambient and order: two bases are equal as
    submodules iff their gb tuples match.
    """

    __slots__ = ("ambient", "gens", "gb", "_index", "_cache")

    def __init__(self, ambient: FreeModule, gens, gb):
        self.ambient = ambient
        self.gens = tuple(gens)
        self.gb = tuple(gb)
        self._index = None
        self._cache = {}

    @classmethod
    def zero(cls, ambient: FreeModule) -> "SubmoduleBasis":
        return cls(ambient, (), ())

    def __eq__(self, other):
        return (isinstance(other, SubmoduleBasis)
                and self.ambient == other.ambient
                and len(self.gb) == len(other.gb)
                and all(a.terms == b.terms for a, b in zip(self.gb, other.gb)))

    def __hash__(self):
        return hash((self.ambient, len(self.gb)))

    def _reducer(self) -> BuchbergerState:
        if self._index is None:
            st = BuchbergerState(self.ambient, [], build_pairs=False)
            for g in self.gb:
                st._append(g)
            self._index = st
        return self._index

    def normal_form(self, v: FreeElement) -> FreeElement:
        if not v:
            return v
        return self._reducer().normal_form(v)

    def contains(self, v: FreeElement) -> bool:
        return not self.normal_form(v)

    def contains_all(self, others) -> bool:
        return all(self.contains(g) for g in others)

    def leads_by_position(self) -> dict:
        out = {}
        for g in self.gb:
            (pos, e), _ = g.lead_term()
            out.setdefault(pos, []).append(e)
        return out

    def standard_monomial_count(self, t: int) -> int:
        """Number of monomials of degree t in the quotient ambient/self."""
        leads = self.leads_by_position()
        n = self.ambient.ring.nvars
        total = 0
        for pos, twist in enumerate(self.ambient.twists):
            total += count_standard_monomials(leads.get(pos, ()), n, t - twist)
        return total

    def is_full(self) -> bool:
        """Does the submodule contain every ambient generator?"""
        leads = self.leads_by_position()
        zero = self.ambient.ring.zero_exps()
        return all(zero in leads.get(pos, ()) for pos in range(self.ambient.rank))


def groebner_basis(ambient: FreeModule, gens, *, assume_reduced_prefix: int = 0,
                   keep_gens=None) -> SubmoduleBasis:
    live = [g for g in gens if g]
    state = BuchbergerState(ambient, live, assume_reduced_prefix)
    state.process()
    gb = _interreduce(ambient, state.basis)
    basis = SubmoduleBasis(ambient, keep_gens if keep_gens is not None else live, gb)
    if _DEBUG_VERIFY:
        verify_basis(basis)
    return basis


def normal_form(v: FreeElement, basis: SubmoduleBasis) -> FreeElement:
    return basis.normal_form(v)


def verify_basis(basis: SubmoduleBasis) -> None:
    """Re-check the Buchberger criterion on the finished basis, skipping no
    pairs.  CrossCheckFailure on any nonzero remainder."""
    gb = basis.gb
    for i in range(len(gb)):
        (pi, ei), _ = gb[i].lead_term()
        for j in range(i + 1, len(gb)):
            (pj, ej), _ = gb[j].lead_term()
            if pi != pj:
                continue
            lcm = mono_lcm(ei, ej)
            s = gb[i].shifted(mono_div(lcm, ei)) - gb[j].shifted(mono_div(lcm, ej))
            if basis.normal_form(s):
                raise CrossCheckFailure(
                    f"S-pair ({i},{j}) does not reduce to zero")


# -- kernels ------------------------------------------------------------------

def kernel_of_map(cols, col_twists, target: FreeModule,
                  relations=None) -> SubmoduleBasis:
    """Kernel of the map S^k -> target/relations sending the k-th generator
    to cols[k].

    cols are elements of `target` (zero allowed, with its twist supplied in
    col_twists).  Returns a basis in a plain rank-k ambient with twists
    col_twists; its generators give every tuple (u_1..u_k) with
    sum u_i * cols[i] inside the relation submodule.
    """
    ring = target.ring
    k = len(cols)
    big = FreeModule(ring, tuple(target.twists) + tuple(col_twists),
                     elim_rank=target.rank)
    elems = []
    for idx, col in enumerate(cols):
        terms = {(pos, e): c for (pos, e), c in col.terms.items()}
        terms[(target.rank + idx, ring.zero_exps())] = 1
        elems.append(FreeElement(big, terms))
    rel_gens = ()
    if relations is not None:
        rel_gens = relations.gb if isinstance(relations, SubmoduleBasis) else relations
    for rel in rel_gens:
        if not rel:
            continue
        elems.append(FreeElement(big, dict(rel.terms), _checked=True))
    basis = groebner_basis(big, elems)
    small = FreeModule(ring, tuple(col_twists))
    kernel = []
    for g in basis.gb:
        if any(pos < target.rank for (pos, _) in g.terms):
            continue
        kernel.append(FreeElement(
            small, {(pos - target.rank, e): c for (pos, e), c in g.terms.items()},
            _checked=True))
    # the stripped elements are already a reduced basis in the induced order
    kernel.sort(key=lambda g: small.term_key(g.lead_term()[0]))
    out = SubmoduleBasis(small, kernel, kernel)
    if _DEBUG_VERIFY:
        verify_basis(out)
    return out


def syzygies(basis: SubmoduleBasis) -> SubmoduleBasis:
    """Syzygy module of basis.gens, as a submodule of S^len(gens)."""
    cols = list(basis.gens)
    twists = [g.degree if g else 0 for g in cols]
    return kernel_of_map(cols, twists, basis.ambient, relations=None)


# -- standard monomial counting ----------------------------------------------

_GRID_CACHE = {}


def monomial_grid(n: int, d: int) -> np.ndarray:
    """All exponent vectors of total degree d in n variables, one per row,
    in a fixed order.  Cached; rows are int16."""
    if d < 0:
        return np.zeros((0, max(n, 0)), dtype=np.int16)
    if n == 0:
        return np.zeros((1 if d == 0 else 0, 0), dtype=np.int16)
    key = (n, d)
    got = _GRID_CACHE.get(key)
    if got is not None:
        return got
    if n == 1:
        out = np.array([[d]], dtype=np.int16)
    else:
        blocks = []
        for a in range(d + 1):
            sub = monomial_grid(n - 1, d - a)
            if sub.shape[0] == 0:
                continue
            head = np.full((sub.shape[0], 1), a, dtype=np.int16)
            blocks.append(np.hstack([head, sub]))
        out = np.vstack(blocks) if blocks else np.zeros((0, n), dtype=np.int16)
    _GRID_CACHE[key] = out
    return out


def count_standard_monomials(leads, n: int, d: int) -> int:
    """Monomials of degree d in n variables outside the monomial ideal
    generated by `leads`."""
    if d < 0:
        return 0
    relevant = [e for e in leads if mono_deg(e) <= d]
    for e in relevant:
        if mono_deg(e) == 0:
            return 0
    grid = monomial_grid(n, d)
    if grid.shape[0] == 0:
        return 0
    if not relevant:
        return int(grid.shape[0])
    mask = np.ones(grid.shape[0], dtype=bool)
    for e in relevant:
        mask &= ~(grid >= np.asarray(e, dtype=np.int16)).all(axis=1)
        if not mask.any():
            return 0
    return int(mask.sum())


def _monomial_ring_dimension(supports, n: int):
    """dim S/J for a monomial ideal with the given generator supports."""
    for s in supports:
        if not s:
            return NEG_INF  # a unit generator
    masks = []
    for s in supports:
        m = 0
        for i in s:
            m |= 1 << i
        masks.append(m)
    best = -1
    for u in range(1 << n):
        alive = True
        for m in masks:
            if m & ~u == 0:
                alive = False
                break
        if alive:
            c = bin(u).count("1")
            if c > best:
                best = c
    return best


def quotient_dimension(basis: SubmoduleBasis):
    """Krull dimension of ambient/basis, read off the lead monomial module.
    -inf for the zero quotient."""
    n = basis.ambient.ring.nvars
    if n > 16:
        raise ValueError("dimension combinatorics capped at 16 variables")
    leads = basis.leads_by_position()
    best = NEG_INF
    for pos in range(basis.ambient.rank):
        sup = [frozenset(i for i, a in enumerate(e) if a)
               for e in leads.get(pos, ())]
        d = _monomial_ring_dimension(sup, n)
        if d != NEG_INF and d > best:
            best = d
    return best


def quotient_hilbert_function(basis: SubmoduleBasis, t: int) -> int:
    return basis.standard_monomial_count(t)


def quotient_total_length(basis: SubmoduleBasis) -> int:
    """Length of ambient/basis; InfiniteLength when the dimension is > 0."""
    ambient = basis.ambient
    if ambient.rank == 0:
        return 0
    dim = quotient_dimension(basis)
    if dim == NEG_INF:
        return 0
    if dim > 0:
        raise InfiniteLength(f"quotient has dimension {dim}")
    n = ambient.ring.nvars
    leads = basis.leads_by_position()
    top = None
    for pos, twist in enumerate(ambient.twists):
        lst = leads.get(pos, ())
        if any(mono_deg(e) == 0 for e in lst):
            continue  # this position dies entirely
        # dimension <= 0 guarantees a pure power of every variable
        span = 0
        for i in range(n):
            a = min(e[i] for e in lst
                    if e[i] > 0 and all(x == 0 for k, x in enumerate(e) if k != i))
            span += a - 1
        cand = twist + span
        if top is None or cand > top:
            top = cand
    if top is None:
        return 0
    total = 0
    for t in range(min(ambient.twists), top + 1):
        total += basis.standard_monomial_count(t)
    return total
