"""Independent checks by dense linear algebra, one degree at a time.

Everything here works directly with coefficient matrices over Z/p and row
reduction; nothing imports the basis engine.  The point is to have a second
opinion whose failure modes are unrelated: membership and graded dimension
answers from this module are compared against the engine in the tests.
Complexity is exponential in the degree, so callers keep instances small.
"""
from __future__ import annotations

from .ring import FreeElement, FreeModule


def degree_terms(ambient: FreeModule, t: int) -> list:
    """All module terms (pos, exps) of degree t, in a fixed order."""
    out = []
    for pos, twist in enumerate(ambient.twists):
        d = t - twist
        if d < 0:
            continue
        for e in ambient.ring.monomials_of_degree(d):
            out.append((pos, e))
    return out


def rref(rows: list, p: int) -> list:
    """Fully reduced row echelon form over Z/p, zero rows dropped.  Every
    returned row is monic at its lead column and is the only row with a
    nonzero entry there."""
    out = []
    leads = []
    for row in rows:
        row = [c % p for c in row]
        for prow, lc in zip(out, leads):
            c = row[lc]
            if c:
                row = [(a - c * b) % p for a, b in zip(row, prow)]
        lead = next((i for i, c in enumerate(row) if c), None)
        if lead is None:
            continue
        inv = pow(row[lead], p - 2, p)
        row = [(c * inv) % p for c in row]
        for k, prow in enumerate(out):
            c = prow[lead]
            if c:
                out[k] = [(a - c * b) % p for a, b in zip(prow, row)]
        out.append(row)
        leads.append(lead)
    return out


def _span_rows(ambient: FreeModule, elements, t: int, terms=None) -> list:
    """Coefficient rows of every monomial multiple m*g landing in degree t."""
    if terms is None:
        terms = degree_terms(ambient, t)
    index = {term: i for i, term in enumerate(terms)}
    rows = []
    for g in elements:
        if not g:
            continue
        d = t - g.degree
        if d < 0:
            continue
        for m in ambient.ring.monomials_of_degree(d):
            shifted = g.shifted(m)
            row = [0] * len(terms)
            for term, c in shifted.terms.items():
                row[index[term]] = c
            rows.append(row)
    return rows


def span_dimension(ambient: FreeModule, elements, t: int) -> int:
    """Dimension of the degree-t piece of the submodule generated by
    `elements`."""
    return len(rref(_span_rows(ambient, elements, t), ambient.ring.prime))


def quotient_dimension_at(ambient: FreeModule, elements, t: int) -> int:
    """Dimension of degree t of ambient/(elements)."""
    return len(degree_terms(ambient, t)) - span_dimension(ambient, elements, t)


def membership(v: FreeElement, elements) -> bool:
    """Is v in the submodule generated by `elements`?  Dense: reduce the span
    basis in v's degree and check v reduces to zero against it."""
    if not v:
        return True
    ambient = v.ambient
    p = ambient.ring.prime
    t = v.degree
    terms = degree_terms(ambient, t)
    index = {term: i for i, term in enumerate(terms)}
    basis = rref(_span_rows(ambient, elements, t, terms), p)
    row = [0] * len(terms)
    for term, c in v.terms.items():
        row[index[term]] = c
    # rows of a full rref have disjoint pivot columns, one pass is enough
    for prow in basis:
        lead = next(i for i, c in enumerate(prow) if c)
        c = row[lead]
        if c:
            row = [(a - c * b) % p for a, b in zip(row, prow)]
    return not any(row)
