"""Graded algebras, finitely presented graded modules, and the submodule
calculus: colon, intersection, powers, annihilator, sections with finite
support, dimension, length, quotients, sums, idealization.

A module is always a pair (free ambient F over the polynomial ring, relation
submodule N), with the algebra's defining ideal folded into N so that F/N is
genuinely a module over the quotient ring.  All derived data is cached
lazily; every value, once computed, is immutable.
"""
from __future__ import annotations

from .errors import (InfiniteLength, NonStandardGrading, PreconditionViolation,
                     ZeroModule)
from .groebner import (NEG_INF, SubmoduleBasis, groebner_basis, kernel_of_map,
                       quotient_dimension, quotient_hilbert_function,
                       quotient_total_length)
from .ring import (FreeElement, FreeModule, Polynomial, PolyRing,
                   poly_in_position, poly_times_element)


def _as_poly_list(f):
    return [f] if isinstance(f, Polynomial) else list(f)


class GradedAlgebra:
    """Quotient of a standard graded polynomial ring by a homogeneous ideal."""

    def __init__(self, ring: PolyRing, ideal_gens=()):
        self.ring = ring
        self.ideal_gens = tuple(f for f in ideal_gens if f)
        self._cache = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def defining_basis(self) -> SubmoduleBasis:
        def build():
            F = FreeModule(self.ring, (0,))
            return groebner_basis(F, [poly_in_position(F, f, 0)
                                      for f in self.ideal_gens])
        return self._memo("defining", build)

    def dimension(self):
        return self._memo("dim", lambda: quotient_dimension(self.defining_basis()))

    def variables(self):
        return [self.ring.variable(i) for i in range(self.ring.nvars)]

    def cyclic_module(self, twist: int = 0) -> "GradedModule":
        return GradedModule(self, (twist,), [])

    def __repr__(self):
        return (f"GradedAlgebra({','.join(self.ring.variables)} mod "
                f"{len(self.ideal_gens)} relations, p={self.ring.prime})")


class GradedModule:
    """F/N for a graded free ambient F and relation submodule N ⊇ I·F."""

    def __init__(self, algebra: GradedAlgebra, twists, relations,
                 relations_complete: bool = False):
        self.algebra = algebra
        self.twists = tuple(twists)
        self.ambient = FreeModule(algebra.ring, self.twists)
        if isinstance(relations, SubmoduleBasis):
            if relations.ambient.twists != self.twists:
                raise ValueError("relation basis lives in a different ambient")
            if relations_complete:
                self.relations = relations
            else:
                ideal_cols = self._ideal_columns()
                self.relations = groebner_basis(
                    self.ambient, list(relations.gb) + ideal_cols,
                    assume_reduced_prefix=len(relations.gb))
        else:
            elems = [v for v in relations if v]
            for v in elems:
                if v.ambient.twists != self.twists:
                    raise ValueError("relation element in a different ambient")
            self.relations = groebner_basis(self.ambient,
                                            elems + self._ideal_columns())
        self._cache = {}

    def _ideal_columns(self):
        return [poly_in_position(self.ambient, f, pos)
                for f in self.algebra.ideal_gens
                for pos in range(len(self.twists))]

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    # -- size ----------------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.twists)

    def dimension(self):
        """Krull dimension; -inf for the zero module."""
        return self._memo("dim", lambda: quotient_dimension(self.relations))

    def is_zero(self) -> bool:
        return self.relations.is_full()

    def total_length(self) -> int:
        return self._memo("len", lambda: quotient_total_length(self.relations))

    def hilbert_function(self, t: int) -> int:
        return quotient_hilbert_function(self.relations, t)

    def minimal_generator_count(self) -> int:
        def build():
            mF = [poly_in_position(self.ambient, v, pos)
                  for v in self.algebra.variables()
                  for pos in range(self.rank)]
            return quotient_total_length(self.submodule_with(mF))
        return self._memo("mu", build)

    # -- submodules ----------------------------------------------------------

    def submodule_with(self, extra) -> SubmoduleBasis:
        """Basis of N + (extra elements)."""
        extra = [v for v in extra if v]
        if not extra:
            return self.relations
        return groebner_basis(self.ambient, list(self.relations.gb) + extra,
                              assume_reduced_prefix=len(self.relations.gb))

    def ideal_multiples(self, polys) -> list:
        return [poly_in_position(self.ambient, f, pos)
                for f in _as_poly_list(polys) if f
                for pos in range(self.rank)]

    def h0_submodule(self) -> SubmoduleBasis:
        """Preimage in the ambient of the largest finite-length submodule:
        colon by the irrelevant ideal, iterated to a fixed point.  One step
        of the iteration doubles nothing but composes colons, so the chain
        (N : m) ⊆ (N : m²) ⊆ ... is walked directly; it stabilizes because
        the ambient is noetherian."""
        def build():
            mgens = self.algebra.variables()
            u = self.relations
            while True:
                v = submodule_colon(u, mgens)
                if v == u:
                    return u
                u = v
        return self._memo("h0sub", build)

    def h0(self) -> "GradedModule":
        """The finite-length sections, as a module in their own right."""
        def build():
            sub = self.h0_submodule()
            if sub == self.relations:
                return zero_module(self.algebra)
            return present_subquotient(self.algebra, sub.gb,
                                       self.relations, self.ambient)
        return self._memo("h0", build)

    def annihilator(self) -> SubmoduleBasis:
        """{f in S : f·M = 0}, as a rank-1 basis."""
        def build():
            ring = self.algebra.ring
            r = self.rank
            if r == 0:
                F1 = FreeModule(ring, (0,))
                return groebner_basis(F1, [poly_in_position(F1, ring.constant(1), 0)])
            block_twists = []
            for j in range(r):
                block_twists.extend(t - self.twists[j] for t in self.twists)
            target = FreeModule(ring, tuple(block_twists))
            terms = {}
            for j in range(r):
                terms[(j * r + j, ring.zero_exps())] = 1
            col = FreeElement(target, terms)
            rels = []
            for j in range(r):
                for g in self.relations.gb:
                    rels.append(FreeElement(
                        target,
                        {(j * r + pos, e): c for (pos, e), c in g.terms.items()},
                        _checked=True))
            ker = kernel_of_map([col], [0], target, relations=rels)
            F1 = FreeModule(ring, (0,))
            gens = [FreeElement(F1, dict(g.terms), _checked=True) for g in ker.gb]
            return SubmoduleBasis(F1, gens, gens)
        return self._memo("ann", build)

    # -- derived modules ------------------------------------------------------

    def quotient_by_ideal(self, polys) -> "GradedModule":
        """M / (polys)M on the same ambient."""
        basis = self.submodule_with(self.ideal_multiples(polys))
        return GradedModule(self.algebra, self.twists, basis,
                            relations_complete=True)

    def quotient_by_submodule(self, sub: SubmoduleBasis) -> "GradedModule":
        """F/sub for a submodule that contains the relations."""
        return GradedModule(self.algebra, self.twists, sub,
                            relations_complete=True)

    def direct_sum(self, other: "GradedModule") -> "GradedModule":
        if other.algebra is not self.algebra:
            raise ValueError("direct sum needs a common algebra")
        twists = self.twists + other.twists
        F = FreeModule(self.algebra.ring, twists)
        r = self.rank
        elems = [FreeElement(F, dict(g.terms), _checked=True)
                 for g in self.relations.gb]
        elems += [FreeElement(F, {(pos + r, e): c for (pos, e), c in g.terms.items()},
                              _checked=True)
                  for g in other.relations.gb]
        elems.sort(key=lambda g: F.term_key(g.lead_term()[0]))
        basis = SubmoduleBasis(F, elems, elems)
        return GradedModule(self.algebra, twists, basis, relations_complete=True)

    def __repr__(self):
        return f"GradedModule(rank {self.rank}, twists {self.twists})"


def zero_module(algebra: GradedAlgebra) -> GradedModule:
    return GradedModule(algebra, (), [])


def module_from_matrix(algebra: GradedAlgebra, rows, row_twists=None) -> GradedModule:
    """Cokernel of the matrix whose (i, j) entry is rows[i][j]: generators
    indexed by rows, one relation per column."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    twists = tuple(row_twists) if row_twists is not None else (0,) * nrows
    F = FreeModule(algebra.ring, twists)
    relations = []
    for j in range(ncols):
        terms = {}
        for i in range(nrows):
            f = rows[i][j]
            if f is None or not f:
                continue
            for e, c in f.terms.items():
                terms[(i, e)] = c
        relations.append(FreeElement(F, terms))
    return GradedModule(algebra, twists, relations)


def present_subquotient(algebra: GradedAlgebra, gens, bottom: SubmoduleBasis,
                        ambient: FreeModule) -> GradedModule:
    """The module (gens + bottom)/bottom, presented on the given generators.

    Requires the quotient to be killed by the defining ideal, so that f·g
    lies in bottom for every ideal generator f and every g in gens; the
    presentation kernel then picks up the ideal action on its own.  Holds
    whenever bottom contains I·ambient, and also for cohomology of dualized
    resolutions (killed by the annihilator)."""
    gens = [g for g in gens if g]
    degs = [g.degree for g in gens]
    ker = kernel_of_map(gens, degs, ambient, relations=bottom)
    return GradedModule(algebra, degs, ker, relations_complete=True)


# -- submodule operations -----------------------------------------------------

def submodule_colon(n: SubmoduleBasis, f) -> SubmoduleBasis:
    """{v in ambient : g·v in n for every g in f}; f a polynomial or a list."""
    polys = [g for g in _as_poly_list(f) if g]
    ambient = n.ambient
    ring = ambient.ring
    if not polys:
        # colon by the zero ideal is everything
        full = [ambient.generator(i) for i in range(ambient.rank)]
        return groebner_basis(ambient, full)
    r = ambient.rank
    block_twists = []
    for g in polys:
        block_twists.extend(t - g.degree for t in ambient.twists)
    target = FreeModule(ring, tuple(block_twists))
    cols = []
    for i in range(r):
        terms = {}
        for j, g in enumerate(polys):
            for e, c in g.terms.items():
                terms[(j * r + i, e)] = c
        cols.append(FreeElement(target, terms))
    rels = []
    for j in range(len(polys)):
        for g in n.gb:
            rels.append(FreeElement(
                target, {(j * r + pos, e): c for (pos, e), c in g.terms.items()},
                _checked=True))
    ker = kernel_of_map(cols, list(ambient.twists), target, relations=rels)
    out = [FreeElement(ambient, dict(g.terms), _checked=True) for g in ker.gb]
    return SubmoduleBasis(ambient, out, out)


def submodule_intersect(n1: SubmoduleBasis, n2: SubmoduleBasis) -> SubmoduleBasis:
    if n1.ambient != n2.ambient:
        raise ValueError("intersection needs a common ambient")
    ambient = n1.ambient
    ring = ambient.ring
    r = ambient.rank
    target = FreeModule(ring, ambient.twists + ambient.twists)
    cols = []
    for i in range(r):
        cols.append(FreeElement(target, {(i, ring.zero_exps()): 1,
                                         (i + r, ring.zero_exps()): 1}))
    rels = [FreeElement(target, dict(g.terms), _checked=True) for g in n1.gb]
    rels += [FreeElement(target, {(pos + r, e): c for (pos, e), c in g.terms.items()},
                         _checked=True) for g in n2.gb]
    ker = kernel_of_map(cols, list(ambient.twists), target, relations=rels)
    out = [FreeElement(ambient, dict(g.terms), _checked=True) for g in ker.gb]
    return SubmoduleBasis(ambient, out, out)


_POWER_CACHE = {}


def ideal_power(algebra: GradedAlgebra, polys, n: int) -> SubmoduleBasis:
    """Reduced basis of (polys)^n inside the ring (not touching the algebra's
    defining ideal).  Iterative, reducing at every step; cached."""
    polys = tuple(g for g in _as_poly_list(polys) if g)
    ring = algebra.ring
    key = (ring, polys, n)
    got = _POWER_CACHE.get(key)
    if got is not None:
        return got
    F = FreeModule(ring, (0,))
    if n == 0:
        out = groebner_basis(F, [poly_in_position(F, ring.constant(1), 0)])
    elif n == 1:
        out = groebner_basis(F, [poly_in_position(F, g, 0) for g in polys])
    else:
        prev = ideal_power(algebra, polys, n - 1)
        prods = []
        for g in polys:
            for h in prev.gb:
                prods.append(poly_times_element(g, h))
        out = groebner_basis(F, prods)
    _POWER_CACHE[key] = out
    return out


class ParameterSequence:
    """A full system of parameters a_1..a_d for a module, with its prefixes.

    Validated at construction: the count matches the module dimension and the
    quotient M/QM has finite length.
    """

    def __init__(self, module: GradedModule, gens):
        gens = tuple(_as_poly_list(gens))
        d = module.dimension()
        if d == NEG_INF:
            raise ZeroModule("parameter sequences need a nonzero module")
        if len(gens) != max(d, 0):
            raise PreconditionViolation(
                f"module has dimension {d}, got {len(gens)} parameters")
        if any(not g for g in gens):
            raise PreconditionViolation("zero entry in a parameter sequence")
        self.module = module
        self.gens = gens
        self.quotient_basis = module.submodule_with(module.ideal_multiples(gens))
        if quotient_dimension(self.quotient_basis) > 0:
            raise PreconditionViolation(
                "parameters do not cut the module down to finite length")
        self._cache = {}

    @property
    def count(self) -> int:
        return len(self.gens)

    def covolume(self) -> int:
        """ℓ(M/QM)."""
        if "cov" not in self._cache:
            self._cache["cov"] = quotient_total_length(self.quotient_basis)
        return self._cache["cov"]

    def prefix(self, i: int):
        """The first i parameters (Q_0 is the empty sequence)."""
        return self.gens[:i]


# -- linear algebra over the prime field -------------------------------------

def invert_matrix(rows, p: int):
    """Inverse of a square matrix over Z/p; ValueError if singular."""
    n = len(rows)
    aug = [[rows[i][j] % p for j in range(n)] + [1 if j == i else 0 for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % p), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], p - 2, p)
        aug[col] = [(v * inv) % p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(a - c * b) % p for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def complete_to_invertible(rows, n: int, p: int):
    """Extend linearly independent rows to an invertible n x n matrix by
    greedily appending unit vectors."""
    basis = []
    out = []
    def add(row):
        vec = [c % p for c in row]
        for prow in basis:
            lead = next(i for i, c in enumerate(prow) if c)
            c = vec[lead]
            if c:
                vec = [(a - c * b) % p for a, b in zip(vec, prow)]
        lead = next((i for i, c in enumerate(vec) if c), None)
        if lead is None:
            return False
        inv = pow(vec[lead], p - 2, p)
        basis.append([(c * inv) % p for c in vec])
        out.append([c % p for c in row])
        return True
    for row in rows:
        if not add(row):
            raise ValueError("rows are linearly dependent")
    for i in range(n):
        if len(out) == n:
            break
        add([1 if j == i else 0 for j in range(n)])
    if len(out) != n:
        raise ValueError("could not complete the matrix")
    return out


def linear_coefficients(f: Polynomial):
    """Coefficient row of a linear form."""
    if f.degree != 1:
        raise ValueError("not a linear form")
    ring = f.ring
    row = [0] * ring.nvars
    for e, c in f.terms.items():
        row[next(i for i, a in enumerate(e) if a)] = c
    return row


def substitute_linear(f: Polynomial, t_matrix) -> Polynomial:
    """Apply the substitution x_j -> sum_k t_matrix[j][k] x_k."""
    ring = f.ring
    images = [Polynomial(ring, {ring.var_exps(k): c
                                for k, c in enumerate(row) if c % ring.prime})
              for row in t_matrix]
    out = Polynomial(ring, {})
    powers = {}
    for e, c in f.terms.items():
        term = ring.constant(c)
        for j, a in enumerate(e):
            if a == 0:
                continue
            key = (j, a)
            if key not in powers:
                powers[key] = images[j] ** a
            term = term * powers[key]
        out = out + term if out else term
    return out


def substitute_element(v: FreeElement, t_matrix) -> FreeElement:
    ambient = v.ambient
    comps = [substitute_linear(v.component(i), t_matrix) if v.component(i) else None
             for i in range(ambient.rank)]
    terms = {}
    for pos, f in enumerate(comps):
        if f is None or not f:
            continue
        for e, c in f.terms.items():
            terms[(pos, e)] = c
    return FreeElement(ambient, terms)


# -- idealization -------------------------------------------------------------

def idealization(module: GradedModule, var_base: str = "u") -> GradedAlgebra:
    """The square-zero extension of the module's algebra by the module.

    Only realizable inside a standard graded ring when all generators sit in
    one common degree: the new variables then enter in degree 1 and the copy
    of the module inside the extension appears shifted up by one degree.
    """
    algebra = module.algebra
    ring = algebra.ring
    r = module.rank
    if r == 0:
        return GradedAlgebra(ring, algebra.ideal_gens)
    if len(set(module.twists)) != 1:
        raise NonStandardGrading(
            "idealization needs all module generators in one degree")
    taken = set(ring.variables)
    base = var_base
    while any(f"{base}{i}" in taken for i in range(r)):
        base = base + "_"
    names = ring.variables + tuple(f"{base}{i}" for i in range(r))
    big = PolyRing(names, ring.prime)
    n = ring.nvars

    def lift(f: Polynomial) -> Polynomial:
        return Polynomial(big, {e + (0,) * r: c for e, c in f.terms.items()},
                          _checked=True)

    gens = [lift(f) for f in algebra.ideal_gens]
    for g in module.relations.gb:
        terms = {}
        for (pos, e), c in g.terms.items():
            ext = list(e) + [0] * r
            ext[n + pos] = 1
            terms[tuple(ext)] = c
        gens.append(Polynomial(big, terms, _checked=True))
    for i in range(r):
        for j in range(i, r):
            e = [0] * (n + r)
            e[n + i] += 1
            e[n + j] += 1
            gens.append(Polynomial(big, {tuple(e): 1}, _checked=True))
    return GradedAlgebra(big, gens)
