"""Exact sparse arithmetic for multivariate truncated power series over Q.

Every series carries a certification bound.  Either it is EXACT (an honest
polynomial, all terms stored), or it stores `prec`: a rational ceiling,
measured in the L-value of the attached linear form `form_ctx`, below which
all terms are guaranteed present and correct.  Nothing is ever claimed above
the bound.

Precision bookkeeping rule for products
---------------------------------------
If a is certified to mu_a and b to mu_b, and o_a, o_b are lower bounds for
the L-orders of the true series (L(inexp) when terms are stored, the bound
itself when the stored part is empty), then the unknown tail of a meets the
known part of b only above mu_a + o_b, and symmetrically.  The product is
therefore certified to

    min(mu_a + o_b, mu_b + o_a),

with EXACT treated as +infinity.  Sums are certified to min(mu_a, mu_b).
Both rules are exercised directly by the test suite.

Coefficients are exact rationals throughout; there is no floating point
anywhere.  A series with no stored terms and a finite bound is "zero up to
prec", which is distinct from the exact zero (EXACT with no terms); every
consumer of zero-tests states which notion it relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

from . import linalg
from .errors import (
    DimensionMismatch,
    FormMismatch,
    PrecisionShortfall,
    PresentationError,
    SingularMatrix,
    ZeroUpToPrecision,
)
from .order import Exponent, LinearForm, is_isotropic, lvalue, min_lvalue, sort_key

#: Sentinel precision of an honest polynomial.  Internally it is `None`;
#: use `f.prec is EXACT` to test for it.
EXACT = None

Prec = Optional[Fraction]


def prec_min(a: Prec, b: Prec) -> Prec:
    if a is EXACT:
        return b
    if b is EXACT:
        return a
    return min(a, b)


def prec_at_least(p: Prec, mu) -> bool:
    return p is EXACT or p >= mu


@dataclass(eq=True)
class PrecisionSeries:
    """Sparse truncated power series with a certified precision bound.

    Treat instances as immutable values; all operations return new objects.
    """

    n: int
    terms: dict
    prec: Prec = EXACT
    form_ctx: Optional[LinearForm] = None

    def __post_init__(self):
        if self.prec is not EXACT and self.form_ctx is None:
            raise FormMismatch("a finite precision bound needs a linear form")
        if self.prec is EXACT:
            self.form_ctx = None

    # -- convenience ------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.prec is EXACT

    @property
    def is_exact_zero(self) -> bool:
        return self.prec is EXACT and not self.terms

    @property
    def is_zero_up_to_prec(self) -> bool:
        """No stored terms (exactly zero, or zero below the bound)."""
        return not self.terms

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def sorted_terms(self, L: Optional[LinearForm] = None):
        if L is None:
            key = lambda e: (sum(e), tuple(reversed(e)))
        else:
            key = lambda e: sort_key(L, e)
        return [(e, self.terms[e]) for e in sorted(self.terms, key=key)]

    def __neg__(self):
        return PrecisionSeries(self.n, {e: -c for e, c in self.terms.items()},
                               self.prec, self.form_ctx)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __mul__(self, other):
        return mul(self, other)

    def __repr__(self):
        head = ", ".join(
            f"{e}:{c}" for e, c in self.sorted_terms()[:4]
        )
        more = "" if len(self.terms) <= 4 else f", ... ({len(self.terms)} terms)"
        bound = "EXACT" if self.prec is EXACT else str(self.prec)
        return f"PrecisionSeries(n={self.n}, {{{head}{more}}}, prec={bound})"


def series(n: int, terms: Mapping, prec: Prec = EXACT,
           form: Optional[LinearForm] = None) -> PrecisionSeries:
    """Sanitizing constructor: coerces coefficients, drops zeros."""
    clean: dict = {}
    for exp, coeff in terms.items():
        e = tuple(int(b) for b in exp)
        if len(e) != n:
            raise DimensionMismatch(f"exponent {e} in ambient dimension {n}")
        if any(b < 0 for b in e):
            raise PresentationError(f"negative exponent {e}")
        c = Fraction(coeff)
        if c:
            clean[e] = clean.get(e, Fraction(0)) + c
            if not clean[e]:
                del clean[e]
    if prec is not EXACT:
        prec = Fraction(prec)
        if form is None:
            raise FormMismatch("a finite precision bound needs a linear form")
        for e in clean:
            if lvalue(form, e) > prec:
                raise PrecisionShortfall(f"term {e} lies beyond the bound {prec}")
    return PrecisionSeries(n, clean, prec, form if prec is not EXACT else None)


def zero(n: int) -> PrecisionSeries:
    return PrecisionSeries(n, {})


def one(n: int) -> PrecisionSeries:
    return monomial(n, (0,) * n)


def monomial(n: int, exp: Exponent, coeff=1) -> PrecisionSeries:
    return series(n, {tuple(exp): Fraction(coeff)})


def variable(n: int, i: int) -> PrecisionSeries:
    exp = tuple(1 if j == i else 0 for j in range(n))
    return monomial(n, exp)


def _join_forms(a: PrecisionSeries, b: PrecisionSeries) -> Optional[LinearForm]:
    if a.n != b.n:
        raise DimensionMismatch(f"ambient dimensions {a.n} and {b.n}")
    if a.form_ctx is None:
        return b.form_ctx
    if b.form_ctx is None or a.form_ctx == b.form_ctx:
        return a.form_ctx
    raise FormMismatch(f"forms {a.form_ctx} and {b.form_ctx} differ")


def add(a: PrecisionSeries, b: PrecisionSeries) -> PrecisionSeries:
    """Coefficientwise sum, certified to min of the input bounds."""
    form = _join_forms(a, b)
    prec = prec_min(a.prec, b.prec)
    out = dict(a.terms)
    for e, c in b.terms.items():
        s = out.get(e, Fraction(0)) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    if prec is not EXACT:
        out = {e: c for e, c in out.items() if lvalue(form, e) <= prec}
    return PrecisionSeries(a.n, out, prec, form if prec is not EXACT else None)


def sub(a: PrecisionSeries, b: PrecisionSeries) -> PrecisionSeries:
    return add(a, -b)


def scale(f: PrecisionSeries, c) -> PrecisionSeries:
    c = Fraction(c)
    if not c:
        return zero(f.n)
    return PrecisionSeries(f.n, {e: c * v for e, v in f.terms.items()},
                           f.prec, f.form_ctx)


def mul(a: PrecisionSeries, b: PrecisionSeries) -> PrecisionSeries:
    """Convolution product under the documented precision rule."""
    form = _join_forms(a, b)
    if a.is_exact_zero or b.is_exact_zero:
        return zero(a.n)
    if a.prec is EXACT and b.prec is EXACT:
        prec = EXACT
    else:
        bounds = []
        if a.prec is not EXACT:
            bounds.append(a.prec + min_lvalue(form, b))
        if b.prec is not EXACT:
            bounds.append(b.prec + min_lvalue(form, a))
        prec = min(bounds)
    out: dict = {}
    for e1, c1 in a.terms.items():
        for e2, c2 in b.terms.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if prec is not EXACT and lvalue(form, e) > prec:
                continue
            s = out.get(e, Fraction(0)) + c1 * c2
            if s:
                out[e] = s
            else:
                del out[e]
    return PrecisionSeries(a.n, out, prec, form if prec is not EXACT else None)


def mul_monomial(f: PrecisionSeries, exp: Exponent, coeff=1) -> PrecisionSeries:
    """Fast path for multiplying by a single exact term."""
    coeff = Fraction(coeff)
    if not coeff:
        return zero(f.n)
    exp = tuple(exp)
    if len(exp) != f.n:
        raise DimensionMismatch(f"monomial {exp} in dimension {f.n}")
    out = {tuple(x + y for x, y in zip(e, exp)): coeff * c
           for e, c in f.terms.items()}
    prec = f.prec
    if prec is not EXACT:
        prec = prec + lvalue(f.form_ctx, exp)
    return PrecisionSeries(f.n, out, prec, f.form_ctx)


def power(f: PrecisionSeries, k: int) -> PrecisionSeries:
    if k < 0:
        raise PresentationError("negative powers are not supported")
    result = one(f.n)
    base = f
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def truncate(f: PrecisionSeries, L: LinearForm, mu) -> PrecisionSeries:
    """Re-certify f under (L, mu), dropping terms beyond the window.

    Sound whenever f already certifies at least mu under L (EXACT always
    qualifies).
    """
    mu = Fraction(mu)
    if f.form_ctx is not None:
        if f.form_ctx != L:
            raise FormMismatch("cannot truncate across different forms")
        if f.prec < mu:
            raise PrecisionShortfall(f"certified to {f.prec}, asked {mu}")
    out = {e: c for e, c in f.terms.items() if lvalue(L, e) <= mu}
    return PrecisionSeries(f.n, out, mu, L)


def reweight(f: PrecisionSeries, new_form: LinearForm) -> PrecisionSeries:
    """Re-certify a series under another positive form.

    If f is certified to mu under L, every unknown term has L > mu, hence
    L'(term) > c*mu for c = min_j L'_j/L_j; the result is certified to c*mu
    under L'.  EXACT series pass through unchanged.
    """
    if f.prec is EXACT:
        return f
    if new_form.n != f.n:
        raise DimensionMismatch("form dimension differs from series dimension")
    c = min(nw / ow for nw, ow in zip(new_form.weights, f.form_ctx.weights))
    new_prec = c * f.prec
    out = {e: v for e, v in f.terms.items() if lvalue(new_form, e) <= new_prec}
    return PrecisionSeries(f.n, out, new_prec, new_form)


def embed(f: PrecisionSeries, n_new: int, var_map: tuple[int, ...],
          new_form: Optional[LinearForm] = None) -> PrecisionSeries:
    """Reinterpret f in a larger ambient space, variable i -> var_map[i].

    For certified series the target form must assign the mapped variables
    the same weights, so the bound carries over verbatim.
    """
    if len(var_map) != f.n or len(set(var_map)) != f.n:
        raise DimensionMismatch(f"variable map {var_map} for dimension {f.n}")
    if any(not 0 <= j < n_new for j in var_map):
        raise DimensionMismatch(f"variable map {var_map} outside dimension {n_new}")
    if f.prec is not EXACT:
        if new_form is None or new_form.n != n_new:
            raise FormMismatch("embedding a certified series needs the target form")
        for i, j in enumerate(var_map):
            if new_form.weights[j] != f.form_ctx.weights[i]:
                raise FormMismatch("target form changes the weight of a mapped variable")
    out = {}
    for e, c in f.terms.items():
        new_e = [0] * n_new
        for i, j in enumerate(var_map):
            new_e[j] = e[i]
        out[tuple(new_e)] = c
    if f.prec is EXACT:
        return PrecisionSeries(n_new, out)
    return PrecisionSeries(n_new, out, f.prec, new_form)


def invert_unit(f: PrecisionSeries, L: LinearForm, mu) -> PrecisionSeries:
    """Inverse of a unit (nonzero constant term) as a jet to L-value mu."""
    mu = Fraction(mu)
    c0 = f.coefficient((0,) * f.n)
    if not c0:
        raise ZeroUpToPrecision("cannot invert: constant term is zero")
    ft = truncate(f, L, mu)
    g = sub(monomial(f.n, (0,) * f.n, c0), ft)  # f = c0 - g with ord(g) > 0
    if g.terms:
        o_g = min_lvalue(L, g)
    else:
        o_g = mu + 1
    acc = one(f.n)
    term = one(f.n)
    k, level = 1, o_g
    while level <= mu and not (k > 1 and term.is_zero_up_to_prec):
        term = scale(truncate(mul(term, g), L, mu), Fraction(1) / c0)
        acc = add(acc, term)
        k += 1
        level = o_g * k
    acc = scale(acc, Fraction(1) / c0)
    return truncate(acc, L, mu)


def substitute_linear(f: PrecisionSeries, M) -> PrecisionSeries:
    """Compose f with the linear change x -> Mx, i.e. x_i -> sum_j M[i][j] x_j.

    Exact on polynomials.  A certified series keeps its bound, which is only
    sound when the form weighs every variable equally (a linear change
    preserves total degree but nothing finer); anisotropic forms are refused.
    """
    n = f.n
    if len(M) != n or any(len(row) != n for row in M):
        raise DimensionMismatch(f"expected a {n}x{n} matrix")
    if linalg.det(M) == 0:
        raise SingularMatrix("coordinate change is singular")
    if f.prec is not EXACT and not is_isotropic(f.form_ctx):
        raise FormMismatch(
            "linear substitution keeps precision only for equal-weight forms")
    rows = [series(n, {tuple(1 if t == j else 0 for t in range(n)): M[i][j]
                       for j in range(n) if M[i][j]})
            for i in range(n)]
    powers: dict[tuple[int, int], PrecisionSeries] = {}

    def row_power(i: int, k: int) -> PrecisionSeries:
        key = (i, k)
        if key not in powers:
            powers[key] = power(rows[i], k)
        return powers[key]

    total: dict = {}
    for e, c in f.terms.items():
        prod = one(n)
        for i, b in enumerate(e):
            if b:
                prod = mul(prod, row_power(i, b))
        for pe, pc in prod.terms.items():
            s = total.get(pe, Fraction(0)) + c * pc
            if s:
                total[pe] = s
            else:
                del total[pe]
    return PrecisionSeries(n, total, f.prec, f.form_ctx)


def evaluate_tail_zero(f: PrecisionSeries, k: int) -> PrecisionSeries:
    """Set the last n-k variables to zero and reinterpret in k variables.

    Keeps exactly the terms whose tail coordinates vanish; the precision
    bound carries over (the restricted form weighs survivors identically).
    """
    if not 1 <= k < f.n:
        raise DimensionMismatch(f"split index {k} out of range for n={f.n}")
    out = {e[:k]: c for e, c in f.terms.items() if not any(e[k:])}
    form = f.form_ctx.restrict(k) if f.form_ctx is not None else None
    return PrecisionSeries(k, out, f.prec, form)


def agrees_up_to(a: PrecisionSeries, b: PrecisionSeries, L: LinearForm, mu) -> bool:
    """Do a and b have identical terms on the window {L <= mu}?"""
    mu = Fraction(mu)
    for f in (a, b):
        if f.form_ctx is not None and f.form_ctx != L:
            raise FormMismatch("window comparison under a foreign form")
        if not prec_at_least(f.prec, mu):
            raise PrecisionShortfall(f"operand certified to {f.prec}, asked {mu}")
    ja = {e: c for e, c in a.terms.items() if lvalue(L, e) <= mu}
    jb = {e: c for e, c in b.terms.items() if lvalue(L, e) <= mu}
    return ja == jb


@dataclass(eq=True)
class IdealPresentation:
    """A finite generating list, with display names for the variables."""

    n: int
    gens: tuple
    var_names: tuple = ()

    def __post_init__(self):
        gens = tuple(self.gens)
        if not gens:
            raise PresentationError("an ideal presentation needs a generator")
        for g in gens:
            if g.n != self.n:
                raise DimensionMismatch("generator dimension differs from ambient")
            if g.is_zero_up_to_prec:
                raise PresentationError(
                    "generators must be nonzero (up to their certified bound)")
        object.__setattr__(self, "gens", gens)
        names = tuple(self.var_names) or tuple(f"x{i+1}" for i in range(self.n))
        if len(names) != self.n:
            raise PresentationError("variable name count differs from ambient")
        object.__setattr__(self, "var_names", names)

    def map_gens(self, fn: Callable[[PrecisionSeries], PrecisionSeries],
                 n: Optional[int] = None,
                 var_names: Optional[tuple] = None) -> "IdealPresentation":
        return IdealPresentation(
            self.n if n is None else n,
            tuple(fn(g) for g in self.gens),
            self.var_names if var_names is None else var_names,
        )
