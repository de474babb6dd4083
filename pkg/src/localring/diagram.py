"""Staircases of initial exponents, Hilbert-Samuel tables, flatness and
dimension diagnostics, and the exact row-reduction oracle.

Every claim made here carries the certification window of the basis it came
from: a diagram computed from a mu-certified basis describes the true
staircase on {L <= mu} and says nothing beyond.  The oracle section computes
jet-space dimensions by exact rational row reduction over the monomial
basis, independently of the division machinery, and is used to cross-check
it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Optional, Sequence

from . import linalg
from .errors import (
    DimensionMismatch,
    FormMismatch,
    MissingAxisVertex,
    PrecisionShortfall,
    TrivialEvaluation,
    UnverifiedBasis,
)
from .kernel import (
    EXACT,
    IdealPresentation,
    PrecisionSeries,
    evaluate_tail_zero,
    prec_at_least,
    reweight,
    substitute_linear,
)
from .order import (
    Exponent,
    LinearForm,
    initial_term,
    is_standard,
    iter_sublevel,
    lvalue,
    std_form,
    weighted_split_form,
)
from .stdbasis import CertifiedBasis, complete


@dataclass(frozen=True)
class Diagram:
    """A staircase N = vertices + N^n, given by its minimal vertex set."""

    n: int
    vertices: tuple
    form: LinearForm
    certified_to: Fraction

    def contains(self, beta: Exponent) -> bool:
        if len(beta) != self.n:
            raise DimensionMismatch(f"{beta} in dimension {self.n}")
        return any(all(b >= v for b, v in zip(beta, vertex))
                   for vertex in self.vertices)


@dataclass(frozen=True)
class HSTable:
    """Values H(0), H(1), ..., H(eta_max)."""

    values: tuple


def minimal_antichain(exponents: Iterable[Exponent]) -> tuple:
    """Minimal elements under componentwise divisibility, sorted."""
    exps = sorted(set(exponents))
    keep = []
    for e in exps:
        if not any(all(x >= y for x, y in zip(e, f)) for f in keep):
            keep = [f for f in keep if not all(x >= y for x, y in zip(f, e))]
            keep.append(e)
    return tuple(sorted(keep))


def diagram_of(B: CertifiedBasis) -> Diagram:
    """Vertices = minimal heads of a verified basis; window = its mu."""
    if not B.verified:
        raise UnverifiedBasis("diagram_of needs a verified basis")
    return Diagram(B.gens[0].n, minimal_antichain(B.heads), B.form, B.mu)


def complement_count(D: Diagram, L: LinearForm, eta) -> int:
    """#{b outside the staircase with L(b) <= eta}."""
    if L != D.form:
        raise FormMismatch("counting under a form the diagram was not built for")
    eta = Fraction(eta)
    if eta > D.certified_to:
        raise PrecisionShortfall(
            f"level {eta} beyond the certified window {D.certified_to}")
    return sum(1 for beta in iter_sublevel(L, eta) if not D.contains(beta))


def hilbert_samuel(B: CertifiedBasis, eta_max: int) -> HSTable:
    """H(eta) = staircase-complement count per level, 0 <= eta <= eta_max.

    Requires the standard form (all weights 1), where the sub-level sets are
    total-degree balls and the count equals the jet-quotient dimension.
    """
    if not is_standard(B.form):
        raise FormMismatch("Hilbert-Samuel tables use the standard form")
    if not prec_at_least(B.mu, eta_max):
        raise PrecisionShortfall(f"eta_max {eta_max} beyond certification {B.mu}")
    D = diagram_of(B)
    values = tuple(complement_count(D, B.form, eta) for eta in range(eta_max + 1))
    return HSTable(values)


def evaluated_ideal(I: IdealPresentation, k: int) -> IdealPresentation:
    """Set the last n-k variables to zero; drop generators that die.

    Raises TrivialEvaluation when every generator evaluates to zero (up to
    its certified precision).
    """
    if not 1 <= k < I.n:
        raise DimensionMismatch(f"split index {k} out of range for n={I.n}")
    survivors = []
    for g in I.gens:
        e = evaluate_tail_zero(g, k)
        if not e.is_zero_up_to_prec:
            survivors.append(e)
    if not survivors:
        raise TrivialEvaluation(
            "every generator evaluates to zero at this precision")
    return IdealPresentation(k, tuple(survivors), I.var_names[:k])


def product_structure_check(D: Diagram, k: int) -> tuple[bool, tuple]:
    """Is the staircase a product (base in N^k) x N^(n-k)?

    True exactly when every vertex has zero components in the coordinates
    k+1..n; the base is then the vertex projection (necessarily the
    staircase of the evaluated ideal).
    """
    if not 1 <= k < D.n:
        raise DimensionMismatch(f"split index {k} out of range for n={D.n}")
    ok = all(not any(v[k:]) for v in D.vertices)
    base = minimal_antichain(v[:k] for v in D.vertices)
    return ok, base


# -- flatness -------------------------------------------------------------

Regenerator = Callable[[LinearForm, Fraction], Sequence[PrecisionSeries]]


@dataclass
class FlatnessReport:
    verdict: str  # "FLAT" | "NOT-FLAT-AT-MU"
    k: int
    l0: int
    l_used: Fraction
    window: Fraction
    base_vertices: tuple
    vertices: tuple
    offending: tuple
    base_matches_evaluated: bool
    basis: CertifiedBasis


def _gens_under(I: IdealPresentation, Lw: LinearForm, window: Fraction,
                regenerate: Optional[Regenerator]):
    """Get the generators certified under (Lw, window), re-expanding or
    reweighting as needed."""
    if regenerate is not None:
        return tuple(regenerate(Lw, window))
    out = []
    for g in I.gens:
        if g.prec is EXACT:
            out.append(g)
            continue
        h = reweight(g, Lw)
        if not prec_at_least(h.prec, window):
            raise PrecisionShortfall(
                "generator cannot be certified under the weighted form; "
                "supply a regenerate callback")
        out.append(h)
    return tuple(out)


def flatness_weight_search(I: IdealPresentation, k: int, mu,
                           regenerate: Optional[Regenerator] = None,
                           extra_weights: Sequence[int] = ()) -> FlatnessReport:
    """Decide the product-structure flatness criterion at split index k.

    Computes the staircase of the evaluated ideal, sets l0 = 1 + max vertex
    degree, and completes I under the split form with weight l = l0 (then
    any extra weights) on the window {L <= l*mu}.  Verdict FLAT when some
    weight exhibits the product structure there; otherwise NOT-FLAT-AT-MU
    with the offending vertices.
    """
    mu = Fraction(mu)
    ev = evaluated_ideal(I, k)
    base_basis = complete(ev, std_form(k), mu)
    base_D = diagram_of(base_basis)
    l0 = 1 + max(int(sum(v)) for v in base_D.vertices)
    report = None
    for l in (l0, *extra_weights):
        Lw = weighted_split_form(I.n, k, l)
        window = Fraction(l) * mu
        gens_w = _gens_under(I, Lw, window, regenerate)
        basis = complete(IdealPresentation(I.n, gens_w, I.var_names), Lw, window)
        D = diagram_of(basis)
        ok, base = product_structure_check(D, k)
        offending = tuple(v for v in D.vertices if any(v[k:]))
        report = FlatnessReport(
            verdict="FLAT" if ok else "NOT-FLAT-AT-MU",
            k=k, l0=l0, l_used=Fraction(l), window=window,
            base_vertices=base_D.vertices, vertices=D.vertices,
            offending=offending,
            base_matches_evaluated=(base == base_D.vertices),
            basis=basis)
        if ok:
            return report
    return report


# -- dimension ------------------------------------------------------------

@dataclass
class DimensionReport:
    k_best: int
    upper_bound: int
    matrix: tuple
    seed: int
    trials: int
    per_trial: tuple


def _axis_degrees(D: Diagram) -> dict:
    """axis index -> degree of its axis vertex, for vertices on axes."""
    out = {}
    for v in D.vertices:
        nz = [i for i, b in enumerate(v) if b]
        if len(nz) == 1:
            out[nz[0]] = v[nz[0]]
    return out


def axis_vertex_dimension(I: IdealPresentation, mu, trials: int = 5,
                          seed: int = 0) -> DimensionReport:
    """Probabilistic Krull-dimension upper bound from axis vertices.

    Over seeded unimodular integer coordinate changes (the identity first),
    completes the transformed ideal and finds the largest k such that the
    staircase has a vertex on each of the first k axes; reports
    dim <= n - k_best.  The matrix achieving the best k is returned for
    reproducibility.  The bound is certified for the presented generators;
    its tightness depends on the genericity of the sampled changes.
    """
    mu = Fraction(mu)
    rng = random.Random(seed)
    n = I.n
    best_k, best_M = -1, None
    per_trial = []
    for t in range(max(1, trials)):
        M = linalg.identity_matrix(n) if t == 0 else linalg.seeded_unimodular(rng, n)
        gens_t = tuple(substitute_linear(g, M) for g in I.gens)
        basis = complete(IdealPresentation(n, gens_t, I.var_names), std_form(n), mu)
        axes = _axis_degrees(diagram_of(basis))
        k = 0
        while k < n and k in axes:
            k += 1
        per_trial.append((M, k))
        if k > best_k:
            best_k, best_M = k, M
        if best_k == n:
            break
    return DimensionReport(best_k, n - best_k, best_M, seed, len(per_trial),
                           tuple(per_trial))


# -- exact row-reduction oracle --------------------------------------------

class ExactRowReducer:
    """Incremental Gaussian elimination over Q with sparse dict rows.

    Columns are exponents, ordered by (degree, reversed tuple); rows are
    reduced against the stored pivots on insertion.  Monomial rows become
    pivots in O(1) and immediately shorten later rows.
    """

    def __init__(self):
        self.pivots: dict = {}

    @staticmethod
    def _col_key(e: Exponent):
        return (sum(e), tuple(reversed(e)))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        row = {e: Fraction(c) for e, c in row.items() if c}
        while row:
            col = min(row, key=self._col_key)
            pivot = self.pivots.get(col)
            if pivot is None:
                return row
            factor = row[col]
            for e, c in pivot.items():
                s = row.get(e, Fraction(0)) - factor * c
                if s:
                    row[e] = s
                else:
                    row.pop(e, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; True if it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        col = min(row, key=self._col_key)
        lead = row[col]
        self.pivots[col] = {e: c / lead for e, c in row.items()}
        return True

    def add_monomials(self, exponents: Iterable[Exponent]) -> None:
        for e in exponents:
            if e not in self.pivots:
                self.add({e: Fraction(1)})

    def member(self, row: dict) -> bool:
        return not self.reduce(row)


def _series_order(g: PrecisionSeries) -> int:
    return min(sum(e) for e in g.terms)


def ideal_span_rows(gens: Sequence[PrecisionSeries], eta,
                    L: Optional[LinearForm] = None):
    """Rows spanning the image of the ideal in the L-sublevel jet space.

    For each generator g and monomial x^c with L(c) <= eta - ord_L(g),
    yields the coefficient row of x^c * g truncated to {L <= eta}.
    Generators must be known at least to level eta under L (the default L
    is the standard form).
    """
    for g in gens:
        form = std_form(g.n) if L is None else L
        if not prec_at_least(g.prec, eta):
            raise PrecisionShortfall(
                f"oracle needs terms to level {eta}, generator stops at {g.prec}")
        if g.form_ctx is not None and g.form_ctx != form:
            raise FormMismatch("oracle asked under a form the generator "
                               "is not certified for")
        if g.is_zero_up_to_prec:
            continue
        o = min(lvalue(form, e) for e in g.terms)
        for gamma in iter_sublevel(form, eta - o):
            row = {}
            for e, c in g.terms.items():
                s = tuple(x + y for x, y in zip(e, gamma))
                if lvalue(form, s) <= eta:
                    row[s] = c
            if row:
                yield row


def jet_space_dim(n: int, eta: int) -> int:
    return math.comb(n + eta, n)


def oracle_jet_quotient_dim(I: IdealPresentation, eta: int) -> int:
    """dim of (jet space of order eta) / (ideal image), by row reduction.

    Independent oracle for the staircase-complement count: no division, no
    standard bases, just exact linear algebra over the monomial basis.
    """
    reducer = ExactRowReducer()
    for row in ideal_span_rows(I.gens, eta):
        reducer.add(row)
    return jet_space_dim(I.n, eta) - reducer.rank


def oracle_sublevel_quotient_dim(I: IdealPresentation, L: LinearForm,
                                 eta) -> int:
    """The weighted analogue: dim of the span of {L <= eta} monomials modulo
    the ideal image, cross-checking complement counts under any form."""
    reducer = ExactRowReducer()
    for row in ideal_span_rows(I.gens, eta, L):
        reducer.add(row)
    total = sum(1 for _ in iter_sublevel(L, eta))
    return total - reducer.rank


def tail_monomials(n: int, k: int, eta: int, min_total: int, min_tail: int):
    """Exponents with |b| in [min_total, eta] and tail degree >= min_tail."""
    for beta in iter_sublevel(std_form(n), eta):
        if sum(beta) >= min_total and sum(beta[k:]) >= min_tail:
            yield beta


@dataclass
class ReductionReport:
    k: int
    axis_degrees: tuple
    d: int
    eta: int
    monomial_checks: tuple  # ((exponent, bool), ...)
    all_ok: bool


def reduction_exponent(I: IdealPresentation, k: int, mu) -> ReductionReport:
    """Reduction exponent d = sum(d_j - 1) from the axis-vertex degrees.

    Requires axis vertices on each of the first k axes (apply a generic
    change first if needed).  Verifies, by the oracle at jet level d+1, that
    every degree-(d+1) monomial in the first k variables lies in
    I + (tail) * m^d.
    """
    mu = Fraction(mu)
    basis = complete(I, std_form(I.n), mu)
    D = diagram_of(basis)
    axes = _axis_degrees(D)
    degrees = []
    for j in range(k):
        if j not in axes:
            raise MissingAxisVertex(f"no staircase vertex on axis {j + 1}")
        degrees.append(axes[j])
    d = sum(dj - 1 for dj in degrees)
    eta = d + 1
    reducer = ExactRowReducer()
    reducer.add_monomials(tail_monomials(I.n, k, eta, d + 1, 1))
    for row in ideal_span_rows(I.gens, eta):
        reducer.add(row)
    checks = []
    all_ok = True
    for combo in combinations_with_replacement(range(k), d + 1):
        beta = [0] * I.n
        for var in combo:
            beta[var] += 1
        beta = tuple(beta)
        ok = reducer.member({beta: Fraction(1)})
        checks.append((beta, ok))
        all_ok = all_ok and ok
    return ReductionReport(k, tuple(degrees), d, eta, tuple(checks), all_ok)


def reduction_identity_check(I: IdealPresentation, k: int, d: int, m: int,
                             eta: Optional[int] = None) -> dict:
    """Jet-scale test of I + m^(d+m) = I + (tail)^m * m^d.

    Both sides are compared as spans inside the jet space of order eta
    (default d+m+1).  The right side is contained in the left: equality of
    ranks decides equality of spans.
    """
    if eta is None:
        eta = d + m + 1
    lhs = ExactRowReducer()
    lhs.add_monomials(e for e in iter_sublevel(std_form(I.n), eta)
                      if sum(e) >= d + m)
    rhs = ExactRowReducer()
    rhs.add_monomials(tail_monomials(I.n, k, eta, d + m, m))
    for row in ideal_span_rows(I.gens, eta):
        lhs.add(row)
        rhs.add(row)
    return {"eta": eta, "m": m, "lhs_rank": lhs.rank, "rhs_rank": rhs.rank,
            "equal": lhs.rank == rhs.rank}


def oracle_quotient_dim_mod_tail_power(I: IdealPresentation, k: int, m: int,
                                       eta: int) -> int:
    """dim of jet space / (I + (tail)^m) at order eta (stabilizes when the
    true quotient is finite-dimensional)."""
    reducer = ExactRowReducer()
    reducer.add_monomials(tail_monomials(I.n, k, eta, 0, m))
    for row in ideal_span_rows(I.gens, eta):
        reducer.add(row)
    return jet_space_dim(I.n, eta) - reducer.rank
