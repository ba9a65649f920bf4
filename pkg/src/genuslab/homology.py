"""Free resolutions, dualized-resolution cohomology, depth, and Koszul
homology.

Resolutions are minimal by construction: at every step the syzygy module is
regenerated from a Nakayama-minimal generating set (no generator lies in the
span of the others plus the irrelevant ideal times the module), so no unit
entries ever appear and Auslander-Buchsbaum applies literally.  Composition
of consecutive differentials is checked exactly on every emitted complex; a
dense per-degree exactness verifier is available for small instances.

The local-cohomology duals are realized as cohomology of the dualized
resolution, dropping the canonical-module twist: every consumer here (length,
dimension, annihilator, multiplicities against m-primary ideals) cannot see a
uniform twist.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import oracle
from .errors import CrossCheckFailure, ZeroModule
from .groebner import NEG_INF, SubmoduleBasis, groebner_basis, kernel_of_map
from .modules import (GradedModule, present_subquotient, zero_module)
from .ring import FreeElement, FreeModule, poly_times_element


def apply_columns(cols, v: FreeElement, target: FreeModule) -> FreeElement:
    """Image of v under the map sending generator i to cols[i]."""
    out = target.zero()
    for (pos, e), c in v.terms.items():
        out = out + cols[pos].shifted(e, c)
    return out


class FreeComplex:
    """Chain complex of graded free modules.

    spots[k] is the ambient at homological index k; diffs[k] lists the
    columns of the map spots[k+1] -> spots[k].
    """

    def __init__(self, spots, diffs):
        self.spots = list(spots)
        self.diffs = [list(cols) for cols in diffs]
        if len(self.diffs) != max(len(self.spots) - 1, 0):
            raise ValueError("differential count does not match spots")

    @property
    def length(self) -> int:
        return len(self.spots) - 1

    def betti_numbers(self):
        return tuple(f.rank for f in self.spots)

    def verify_compositions(self) -> None:
        """d∘d = 0, exactly, at every junction."""
        for k in range(len(self.diffs) - 1):
            for v in self.diffs[k + 1]:
                if apply_columns(self.diffs[k], v, self.spots[k]):
                    raise CrossCheckFailure(
                        f"differentials at spots {k + 2}->{k} do not compose to zero")


def minimal_generators(basis: SubmoduleBasis) -> list:
    """A Nakayama-minimal generating set for the submodule, extracted from its
    reduced basis in ascending degree."""
    if not basis.gb:
        return []
    ambient = basis.ambient
    ring = ambient.ring
    variables = [ring.variable(i) for i in range(ring.nvars)]
    mk = [poly_times_element(v, g) for v in variables for g in basis.gb]
    current = groebner_basis(ambient, mk)
    picked = []
    ordered = sorted(basis.gb,
                     key=lambda g: (g.degree, ambient.term_key(g.lead_term()[0])))
    for g in ordered:
        if current.normal_form(g):
            picked.append(g)
            current = groebner_basis(ambient, list(current.gb) + [g],
                                     assume_reduced_prefix=len(current.gb))
    return picked


def minimal_presentation(module: GradedModule) -> GradedModule:
    """An isomorphic module with no unit entries in its relations: every
    relation carrying a degree-zero coefficient is used to delete the
    corresponding generator."""
    ring = module.algebra.ring
    rels = list(module.relations.gb)
    twists = list(module.twists)
    while True:
        hit = None
        for g in rels:
            for (pos, e), c in g.terms.items():
                if sum(e) == 0:
                    hit = (g, pos, c)
                    break
            if hit:
                break
        if hit is None:
            break
        g, t, u = hit
        inv = ring.inv(u)
        survivors = []
        for h in rels:
            if h is g:
                continue
            ct = h.component(t)
            if ct:
                h = h - poly_times_element(ct.scale(inv), g)
            survivors.append(h)
        new_twists = twists[:t] + twists[t + 1:]
        F = FreeModule(ring, tuple(new_twists))
        remapped = []
        for h in survivors:
            if not h:
                continue
            remapped.append(FreeElement(
                F, {(pos - 1 if pos > t else pos, e): c
                    for (pos, e), c in h.terms.items()}, _checked=True))
        rels = remapped
        twists = new_twists
    if tuple(twists) == module.twists:
        return module
    F = FreeModule(ring, tuple(twists))
    basis = groebner_basis(F, rels)
    return GradedModule(module.algebra, tuple(twists), basis,
                        relations_complete=True)


def free_resolution(module: GradedModule, max_len=None) -> FreeComplex:
    """Minimal graded free resolution over the ambient polynomial ring."""
    def build():
        mp = minimal_presentation(module)
        ring = module.algebra.ring
        cap = ring.nvars if max_len is None else max_len
        spots = [mp.ambient]
        diffs = []
        current = mp.relations
        while True:
            cols = minimal_generators(current)
            if not cols:
                break
            if len(diffs) >= cap:
                raise CrossCheckFailure(
                    "resolution exceeds the syzygy-theorem bound")
            nxt = FreeModule(ring, tuple(c.degree for c in cols))
            diffs.append(cols)
            spots.append(nxt)
            current = kernel_of_map(cols, [c.degree for c in cols], spots[-2])
        out = FreeComplex(spots, diffs)
        out.verify_compositions()
        return out
    if "resolution" not in module._cache:
        module._cache["resolution"] = build()
    return module._cache["resolution"]


def betti_numbers(module: GradedModule):
    return free_resolution(module).betti_numbers()


def projective_dimension(module: GradedModule) -> int:
    return free_resolution(module).length


def verify_resolution_exactness(res: FreeComplex, degree_bound: int) -> None:
    """Dense degreewise check that homology vanishes at positive spots up to
    the given degree.  Exponential in degree; for small instances only."""
    for i in range(1, len(res.spots)):
        fi = res.spots[i]
        lo = min(fi.twists) if fi.twists else 0
        for t in range(lo, degree_bound + 1):
            full = len(oracle.degree_terms(fi, t))
            rank_in = oracle.span_dimension(res.spots[i - 1], res.diffs[i - 1], t)
            rank_next = (oracle.span_dimension(fi, res.diffs[i], t)
                         if i < len(res.diffs) else 0)
            if full - rank_in != rank_next:
                raise CrossCheckFailure(
                    f"resolution not exact at spot {i}, degree {t}")


def _transpose(cols, dual_domain: FreeModule):
    """Columns of the dual map.  cols define F -> G by generator images in
    G; the result defines G* -> F*, one column per generator of G, each an
    element of F* (dual_domain)."""
    out = []
    g_rank = cols[0].ambient.rank if cols else 0
    for b in range(g_rank):
        terms = {}
        for s, col in enumerate(cols):
            for e, c in col.component(b).terms.items():
                terms[(s, e)] = c
        out.append(FreeElement(dual_domain, terms))
    return out


def ext_module(module: GradedModule, i: int) -> GradedModule:
    """Cohomology of the dualized minimal resolution at spot i, presented and
    then minimized."""
    key = ("ext", i)
    if key in module._cache:
        return module._cache[key]
    res = free_resolution(module)
    pd = res.length
    if i < 0 or i > pd:
        out = zero_module(module.algebra)
        module._cache[key] = out
        return out
    ring = module.algebra.ring
    fi = res.spots[i]
    fi_star = FreeModule(ring, tuple(-t for t in fi.twists))
    if i < pd:
        fnext_star = FreeModule(ring, tuple(-t for t in res.spots[i + 1].twists))
        tcols = _transpose(res.diffs[i], fnext_star)
        u = kernel_of_map(tcols, list(fi_star.twists), fnext_star)
        top = [FreeElement(fi_star, dict(g.terms), _checked=True) for g in u.gb]
    else:
        top = [fi_star.generator(b) for b in range(fi_star.rank)]
    if i >= 1:
        bcols = _transpose(res.diffs[i - 1], fi_star)
        bottom = groebner_basis(fi_star, bcols)
    else:
        bottom = SubmoduleBasis.zero(fi_star)
    out = minimal_presentation(
        present_subquotient(module.algebra, top, bottom, fi_star))
    module._cache[key] = out
    return out


@dataclass(frozen=True)
class DualSection:
    """One graded dual of local cohomology: index j carries the dual of the
    j-th cohomology, finite-length iff that cohomology is finitely
    generated."""
    index: int
    module: GradedModule
    finite_length: bool


def dual_sections(module: GradedModule) -> list:
    """The duals for j = 0..dim-1, via the dualized resolution.  The j = 0
    entry is cross-checked against the directly computed finite sections."""
    if "duals" in module._cache:
        return module._cache["duals"]
    s = module.dimension()
    n = module.algebra.ring.nvars
    out = []
    top = 0 if s == NEG_INF else max(int(s), 0)
    for j in range(top):
        mj = ext_module(module, n - j)
        dim_j = mj.dimension()
        if dim_j != NEG_INF and dim_j > j:
            raise CrossCheckFailure(
                f"dual section {j} has dimension {dim_j} > {j}")
        out.append(DualSection(j, mj, dim_j <= 0))
    if top >= 1:
        expected = module.h0().total_length()
        got = out[0].module.total_length()
        if expected != got:
            raise CrossCheckFailure(
                f"dual of the zeroth cohomology has length {got}, "
                f"direct sections have length {expected}")
    module._cache["duals"] = out
    return out


def depth(module: GradedModule) -> int:
    """Depth, computed two independent ways and asserted equal: variable
    count minus projective dimension, and the first nonvanishing dual."""
    if module.is_zero():
        raise ZeroModule("depth of the zero module is undefined")
    if "depth" in module._cache:
        return module._cache["depth"]
    n = module.algebra.ring.nvars
    ab = n - projective_dimension(module)
    s = max(int(module.dimension()), 0)
    duals = dual_sections(module)
    from_duals = next((ds.index for ds in duals if not ds.module.is_zero()), s)
    if ab != from_duals:
        raise CrossCheckFailure(
            f"depth disagreement: resolution gives {ab}, duals give {from_duals}")
    module._cache["depth"] = ab
    return ab


# -- Koszul complexes ---------------------------------------------------------

def koszul_complex(seq, module: GradedModule = None) -> FreeComplex:
    """The exterior-algebra complex of the sequence with coefficients in the
    module's ambient: d(e_{i1<..<ik}) = sum_j (-1)^{j+1} a_{ij} e_{..without ij..}."""
    m = module if module is not None else seq.module
    F = m.ambient
    ring = m.algebra.ring
    d = seq.count
    degs = [a.degree for a in seq.gens]
    r = F.rank
    subsets = [list(itertools.combinations(range(d), k)) for k in range(d + 1)]
    index = [{T: i for i, T in enumerate(level)} for level in subsets]
    spots = []
    for k in range(d + 1):
        twists = []
        for T in subsets[k]:
            shift = sum(degs[j] for j in T)
            twists.extend(t + shift for t in F.twists)
        spots.append(FreeModule(ring, tuple(twists)))
    diffs = []
    for k in range(1, d + 1):
        cols = []
        for T in subsets[k]:
            for b in range(r):
                terms = {}
                for jpos, ij in enumerate(T):
                    # deleting distinct entries of T lands in distinct blocks,
                    # so no accumulation across j
                    rest = T[:jpos] + T[jpos + 1:]
                    flat = index[k - 1][rest] * r + b
                    sign = 1 if jpos % 2 == 0 else -1
                    for e, c in seq.gens[ij].terms.items():
                        terms[(flat, e)] = sign * c
                cols.append(FreeElement(spots[k - 1], terms))
        diffs.append(cols)
    out = FreeComplex(spots, diffs)
    out.verify_compositions()
    return out


def koszul_homology_lengths(seq, module: GradedModule = None) -> list:
    """Exact lengths of the homology of the sequence's complex with
    coefficients in the presented module, spots 0..d."""
    m = module if module is not None else seq.module
    cx = koszul_complex(seq, m)
    algebra = m.algebra
    n_gb = m.relations.gb
    r = m.ambient.rank
    d = seq.count

    def blocks(spot: FreeModule):
        nblocks = spot.rank // r if r else 0
        out = []
        for blk in range(nblocks):
            for g in n_gb:
                out.append(FreeElement(
                    spot, {(blk * r + pos, e): c for (pos, e), c in g.terms.items()},
                    _checked=True))
        return out

    lengths = []
    for i in range(d + 1):
        spot = cx.spots[i]
        if i == 0:
            top = [spot.generator(b) for b in range(spot.rank)]
        else:
            u = kernel_of_map(cx.diffs[i - 1],
                              list(spot.twists), cx.spots[i - 1],
                              relations=blocks(cx.spots[i - 1]))
            top = [FreeElement(spot, dict(g.terms), _checked=True) for g in u.gb]
        bottom_gens = list(cx.diffs[i]) if i < d else []
        bottom = groebner_basis(spot, bottom_gens + blocks(spot))
        h = present_subquotient(algebra, top, bottom, spot)
        lengths.append(h.total_length())
    return lengths
