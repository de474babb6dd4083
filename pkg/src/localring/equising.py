"""Generalized discriminants, Weierstrass preparation, and discriminant
towers of distinguished polynomials.

The j-th generalized discriminant of a monic degree-p polynomial is the
symmetric function

    D_j = sum over (j-1)-subsets R of the root indices of
          prod over ordered pairs (k, l), k != l, k, l not in R, of (T_k - T_l),

reduced to a polynomial in the elementary symmetric values A_0 = T_1...T_p,
..., A_{p-1} = T_1 + ... + T_p by leading-term elimination.  Evaluated at
the coefficient vector (a_0, ..., a_{p-1}) of X^p + a_{p-1} X^{p-1} + ... +
a_0, the pattern D_1 = ... = D_j = 0, D_{j+1} != 0 says the polynomial has
exactly p - j distinct roots.

The tower construction iterates: prepare the input list to distinguished
form in the last variable, take the product, locate the first discriminant
that is not identically zero (up to the working precision), and Weierstrass-
prepare it to get the next, lower-dimensional, distinguished polynomial;
a surviving unit discriminant ends the tower with constant levels.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from . import linalg
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    FormMismatch,
    NotRegular,
    PrecisionShortfall,
    PresentationError,
    UndecidedAtPrecision,
)
from .kernel import (
    EXACT,
    PrecisionSeries,
    add,
    agrees_up_to,
    monomial,
    mul,
    one,
    power,
    prec_at_least,
    scale,
    series,
    substitute_linear,
    truncate,
    zero,
)
from .order import LinearForm, is_standard, std_form

#: Expansion cost grows fast with the degree: p = 4 reduces in well under a
#: second, p = 5 in a few seconds, p = 6 in many minutes.  The default cap
#: keeps interactive use sane; pass `max_degree` explicitly to raise it.
MAX_DISCRIMINANT_DEGREE = 5

TPoly = dict  # exponent tuple (length p, in the roots T) -> Fraction


def _tp_mul(a: TPoly, b: TPoly) -> TPoly:
    out: TPoly = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            s = out.get(e, Fraction(0)) + c1 * c2
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def _tp_sub(a: TPoly, b: TPoly) -> TPoly:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, Fraction(0)) - c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _elementary_symmetric(p: int, i: int) -> TPoly:
    """e_i(T_1..T_p) as a sparse polynomial."""
    out: TPoly = {}
    for subset in combinations(range(p), i):
        e = [0] * p
        for v in subset:
            e[v] = 1
        out[tuple(e)] = Fraction(1)
    return out


def _raw_discriminant(p: int, j: int) -> TPoly:
    """The unreduced symmetric sum of squared Vandermonde products."""
    total: TPoly = {}
    for removed in combinations(range(p), j - 1):
        rest = [v for v in range(p) if v not in removed]
        m = len(rest)
        prod: TPoly = {(0,) * p: Fraction(1)}
        for a in range(m):
            for b in range(a + 1, m):
                factor = {}
                ek = [0] * p
                ek[rest[a]] = 1
                factor[tuple(ek)] = Fraction(1)
                el = [0] * p
                el[rest[b]] = 1
                factor[tuple(el)] = Fraction(-1)
                prod = _tp_mul(prod, factor)
        prod = _tp_mul(prod, prod)  # ordered pairs = square of the half-product
        if (m * (m - 1) // 2) % 2:
            prod = {e: -c for e, c in prod.items()}
        for e, c in prod.items():
            s = total.get(e, Fraction(0)) + c
            if s:
                total[e] = s
            else:
                del total[e]
    return total


@dataclass(frozen=True)
class SymmetricReduction:
    """A symmetric polynomial rewritten in the variables A_0..A_{p-1}.

    `expr` maps an exponent tuple over (A_0, ..., A_{p-1}) to its rational
    coefficient; substituting A_m = e_{p-m}(T) reproduces the raw symmetric
    polynomial identically.
    """

    p: int
    expr: dict


def reduce_symmetric(p: int, poly: TPoly) -> SymmetricReduction:
    """Classical leading-term elimination into elementary symmetric values."""
    elem = [None] + [_elementary_symmetric(p, i) for i in range(1, p + 1)]
    power_cache: dict = {}

    def elem_power(i: int, k: int) -> TPoly:
        key = (i, k)
        if key not in power_cache:
            acc = {(0,) * p: Fraction(1)}
            for _ in range(k):
                acc = _tp_mul(acc, elem[i])
            power_cache[key] = acc
        return power_cache[key]

    work = dict(poly)
    expr: dict = {}
    while work:
        lam = max(work)  # lex-max; symmetry makes it weakly decreasing
        if list(lam) != sorted(lam, reverse=True):
            raise PresentationError("reduction applied to a non-symmetric input")
        coeff = work[lam]
        candidate: TPoly = {(0,) * p: Fraction(1)}
        a_exp = [0] * p
        for i in range(1, p + 1):
            ci = lam[i - 1] - (lam[i] if i < p else 0)
            if ci:
                candidate = _tp_mul(candidate, elem_power(i, ci))
                a_exp[p - i] += ci
        expr_key = tuple(a_exp)
        expr[expr_key] = expr.get(expr_key, Fraction(0)) + coeff
        if not expr[expr_key]:
            del expr[expr_key]
        work = _tp_sub(work, {e: coeff * c for e, c in candidate.items()})
    return SymmetricReduction(p, expr)


def symmetric_roundtrip_ok(red: SymmetricReduction, raw: TPoly) -> bool:
    """Substitute A_m = e_{p-m}(T) back and compare with the raw polynomial."""
    p = red.p
    elem = [None] + [_elementary_symmetric(p, i) for i in range(1, p + 1)]
    total: TPoly = {}
    for a_exp, coeff in red.expr.items():
        prod: TPoly = {(0,) * p: Fraction(1)}
        for m, k in enumerate(a_exp):
            for _ in range(k):
                prod = _tp_mul(prod, elem[p - m])
        for e, c in prod.items():
            s = total.get(e, Fraction(0)) + coeff * c
            if s:
                total[e] = s
            else:
                del total[e]
    return total == raw


_disc_cache: dict = {}


def generalized_discriminant(p: int, j: int,
                             max_degree: int = None) -> SymmetricReduction:
    """The reduced j-th generalized discriminant for degree p (cached)."""
    if not 1 <= j <= p:
        raise PresentationError(f"index j={j} out of range for degree {p}")
    cap = MAX_DISCRIMINANT_DEGREE if max_degree is None else max_degree
    if p > cap:
        raise BudgetExceeded(
            f"discriminant degree {p} exceeds the cap {cap}; pass max_degree "
            "to raise it (expansion cost grows steeply)")
    key = (p, j)
    if key not in _disc_cache:
        _disc_cache[key] = reduce_symmetric(p, _raw_discriminant(p, j))
    return _disc_cache[key]


def raw_discriminant(p: int, j: int) -> TPoly:
    return _raw_discriminant(p, j)


def evaluate_at_rationals(red: SymmetricReduction, coeffs: Sequence) -> Fraction:
    """Evaluate at a numeric coefficient vector (a_0, ..., a_{p-1})."""
    if len(coeffs) != red.p:
        raise DimensionMismatch(f"expected {red.p} coefficients")
    vals = [Fraction(c) for c in coeffs]
    total = Fraction(0)
    for a_exp, coeff in red.expr.items():
        term = coeff
        for m, k in enumerate(a_exp):
            term *= vals[m] ** k
        total += term
    return total


def evaluate_at_series(red: SymmetricReduction, coeffs: Sequence[PrecisionSeries],
                       L: LinearForm, mu) -> PrecisionSeries:
    """Evaluate at series coefficients, truncating to the window (L, mu)."""
    if len(coeffs) != red.p:
        raise DimensionMismatch(f"expected {red.p} coefficient series")
    n = coeffs[0].n
    mu = Fraction(mu)
    cache: dict = {}

    def coeff_power(m: int, k: int) -> PrecisionSeries:
        key = (m, k)
        if key not in cache:
            acc = one(n)
            for _ in range(k):
                acc = truncate(mul(acc, coeffs[m]), L, mu)
            cache[key] = acc
        return cache[key]

    total = zero(n)
    for a_exp, coeff in red.expr.items():
        term = one(n)
        for m, k in enumerate(a_exp):
            if k:
                term = truncate(mul(term, coeff_power(m, k)), L, mu)
        total = add(total, scale(term, coeff))
    return truncate(total, L, mu)


def distinct_root_count_check(coeffs: Sequence, p: int) -> int:
    """The j with D_1 = ... = D_j = 0 and D_{j+1} != 0 (so p - j distinct
    roots); cross-checkable against gcd-based squarefree degree."""
    for j in range(1, p + 1):
        if evaluate_at_rationals(generalized_discriminant(p, j), coeffs):
            return j - 1
    raise UndecidedAtPrecision("every discriminant vanished; impossible for D_p")


def squarefree_defect(coeffs: Sequence, p: int) -> int:
    """deg gcd(f, f') for monic f = X^p + sum a_m X^m: the number of
    repeated-root multiplicities, i.e. p minus the distinct-root count."""
    f = [Fraction(c) for c in coeffs] + [Fraction(1)]
    fp = [m * f[m] for m in range(1, p + 1)]

    def norm(v):
        while v and not v[-1]:
            v.pop()
        return v

    def polymod(a, b):
        a = a[:]
        while len(a) >= len(b):
            if not a[-1]:
                a.pop()
                continue
            q = a[-1] / b[-1]
            off = len(a) - len(b)
            for i in range(len(b)):
                a[off + i] -= q * b[i]
            a.pop()
        return norm(a)

    a, b = norm(f[:]), norm(fp[:])
    while b:
        a, b = b, polymod(a, b)
    return len(a) - 1


# -- Weierstrass preparation -------------------------------------------------

def _split_by_codegree(f: PrecisionSeries, i: int) -> dict:
    """Group terms by their total degree in the non-distinguished variables."""
    parts: dict = {}
    for e, c in f.terms.items():
        d = sum(e) - e[i]
        parts.setdefault(d, {})[e] = c
    return parts


def _univariate_inverse(w: dict, top: int) -> dict:
    """Inverse of a unit univariate series given as {degree: coeff}."""
    c0 = w[0]
    inv = {0: Fraction(1) / c0}
    for m in range(1, top + 1):
        acc = Fraction(0)
        for r in range(1, m + 1):
            if r in w and (m - r) in inv:
                acc += w[r] * inv[m - r]
        if acc:
            inv[m] = -acc / c0
    return inv


def regular_order(f: PrecisionSeries, i: int) -> Optional[int]:
    """Lowest power of x_i among the pure-x_i terms of f, or None."""
    pure = [e[i] for e in f.terms if sum(e) == e[i]]
    return min(pure) if pure else None


def weierstrass_prepare(f: PrecisionSeries, i: int, mu) -> tuple:
    """Factor f = u * P up to the window (std, mu).

    P is monic of degree p in x_i with the lower coefficients, series in the
    other variables, vanishing at the origin; u is a unit.  p is the
    x_i-order of f restricted to the x_i-axis, and must satisfy p <= mu.
    The returned identity is re-verified term-by-term before returning.
    Lifting is graded by total degree in the non-distinguished variables.

    Contract: the output is the window-mu Weierstrass data OF THE mu-JET of
    f (a deterministic function of that jet).  Unlike division, preparation
    shifts exponents down by the pivot power, so the factors of a refinement
    of f may differ below mu; no refinement stability is claimed, only the
    verified identity u * P = j(f) on the window.  Tower levels are defined
    from this computed data and re-validated on it.
    """
    mu = Fraction(mu)
    n = f.n
    L = std_form(n)
    if f.form_ctx is not None and not is_standard(f.form_ctx):
        raise FormMismatch("preparation works under the standard form")
    if not prec_at_least(f.prec, mu):
        raise PrecisionShortfall(f"series certified to {f.prec}, asked {mu}")
    ft = truncate(f, L, mu)
    p = regular_order(ft, i)
    if p is None or p > mu:
        raise NotRegular(
            f"not regular in variable {i} at precision {mu}; "
            "apply a linear change of coordinates and retry")
    parts = _split_by_codegree(ft, i)
    top = int(mu)

    w = {e[i] - p: c for e, c in parts.get(0, {}).items()}
    w_inv = _univariate_inverse(w, top)

    def axis_series(univ: dict) -> PrecisionSeries:
        terms = {}
        for m, c in univ.items():
            if m <= top:
                e = [0] * n
                e[i] = m
                terms[tuple(e)] = c
        return series(n, terms)

    u_parts = {0: axis_series(w)}
    p_parts: dict = {}
    x_pow_p = [0] * n
    x_pow_p[i] = p
    P = monomial(n, tuple(x_pow_p))

    for d in sorted(k for k in range(1, top + 1)):
        c_d = series(n, parts.get(d, {}))
        correction = zero(n)
        for a, ua in u_parts.items():
            if 0 < a and (d - a) in p_parts:
                correction = add(correction, mul(ua, p_parts[d - a]))
        c_d = truncate(add(c_d, -correction), L, mu)
        # solve u_d * x_i^p + u_0 * P_d = c_d
        scaled = mul(axis_series(w_inv), c_d)
        pd_terms = {e: c for e, c in scaled.terms.items() if e[i] < p}
        P_d = series(n, pd_terms) if pd_terms else None
        if P_d is not None:
            p_parts[d] = P_d
            residue = truncate(add(c_d, -mul(u_parts[0], P_d)), L, mu)
        else:
            residue = c_d
        u_terms = {}
        for e, c in residue.terms.items():
            assert e[i] >= p, "lift residue not divisible by the pivot power"
            shifted = list(e)
            shifted[i] -= p
            u_terms[tuple(shifted)] = c
        if u_terms:
            u_parts[d] = series(n, u_terms)

    P_total = P
    for d, pd in sorted(p_parts.items()):
        P_total = add(P_total, pd)
    u_total = zero(n)
    for d, ud in sorted(u_parts.items()):
        u_total = add(u_total, ud)
    P_out = truncate(P_total, L, mu)
    u_out = truncate(u_total, L, mu)
    check = mul(u_out, P_out)
    window = min(mu, check.prec) if check.prec is not EXACT else mu
    if not agrees_up_to(check, ft, L, window):
        raise PresentationError("preparation identity failed; this is a bug")
    return P_out, u_out

# -- discriminant towers -----------------------------------------------------

def coefficient_vector(f: PrecisionSeries, i: int, p: int):
    """Coefficients (a_0, ..., a_{p-1}) of x_i^m in a monic distinguished f.

    For ambient dimension >= 2 the entries are series in the remaining
    variables (the distinguished variable must be the last one); in one
    variable they are plain rationals.
    """
    n = f.n
    if i != n - 1:
        raise DimensionMismatch("coefficients are extracted along the last variable")
    slots = [dict() for _ in range(p)]
    for e, c in f.terms.items():
        m = e[i]
        if m == p and not any(e[:i]):
            if c != 1:
                raise PresentationError("polynomial is not monic")
            continue
        if m >= p:
            raise PresentationError("terms above the distinguished degree")
        slots[m][e[:i]] = c
    if n == 1:
        return tuple(s.get((), Fraction(0)) for s in slots)
    form = f.form_ctx.restrict(n - 1) if f.form_ctx is not None else None
    return tuple(PrecisionSeries(n - 1, s, f.prec, form) for s in slots)


@dataclass
class TowerLevel:
    index: int                      # ambient variable count of this level
    is_one: bool
    poly: Optional[PrecisionSeries]
    degree: Optional[int]
    disc_index: Optional[int]       # first non-vanishing discriminant index
    vanish_certificates: tuple      # one entry per index below disc_index
    unit_below: Optional[PrecisionSeries]
    unit_constant: Optional[Fraction]


@dataclass
class Tower:
    n: int
    mu: Fraction
    seed: int
    levels: tuple                   # TowerLevel for index n down to 1
    prepared_inputs: tuple
    input_units: tuple
    coordinate_changes: tuple       # (ambient_level, matrix) pairs


def _first_nonvanishing(p: int, coeffs, n_vars: int, mu) -> tuple:
    """(j, value, certificates): minimal j with D_j not zero up to mu.

    Numeric coefficient vectors of degree beyond the reduction cap fall
    back to the gcd characterization (the first non-vanishing index is
    deg gcd(f, f') + 1); the surviving value is then not produced.
    """
    certs = []
    if n_vars == 0 and p > MAX_DISCRIMINANT_DEGREE:
        j = squarefree_defect(coeffs, p) + 1
        return j, None, ("exact-zero-via-gcd",) * (j - 1)
    L = std_form(n_vars) if n_vars >= 1 else None
    for j in range(1, p + 1):
        red = generalized_discriminant(p, j)
        if n_vars == 0:
            val = evaluate_at_rationals(red, coeffs)
            if val:
                return j, val, tuple(certs)
            certs.append("exact-zero")
        else:
            val = evaluate_at_series(red, coeffs, L, mu)
            if not val.is_zero_up_to_prec:
                return j, val, tuple(certs)
            certs.append("exact-zero" if val.is_exact else "zero-up-to-mu")
    raise UndecidedAtPrecision(
        "every generalized discriminant vanished up to the working precision")


def _ensure_regular(polys: list, i: int, mu, rng: random.Random,
                    retries: int) -> Optional[tuple]:
    """Make every listed series regular in variable i, changing coordinates
    in the first i+1 variables if needed.  Returns the matrix used, if any."""
    n = polys[0].n
    if all(regular_order(truncate(f, std_form(n), mu), i) is not None
           for f in polys):
        return None
    for _ in range(retries):
        M = linalg.seeded_unimodular(rng, i + 1)
        full = tuple(
            tuple(M[r][c] if r <= i and c <= i else (1 if r == c else 0)
                  for c in range(n))
            for r in range(n))
        candidate = [substitute_linear(f, full) for f in polys]
        if all(regular_order(truncate(f, std_form(n), mu), i) is not None
               for f in candidate):
            polys[:] = candidate
            return full
    raise NotRegular(f"no sampled change made the series regular in x_{i + 1}")


def build_tower(gens: Sequence[PrecisionSeries], mu, seed: int = 0,
                max_retries: int = 25) -> Tower:
    """Construct the discriminant tower of the product of the inputs.

    Prepares every generator to distinguished form in the last variable
    (after a recorded coordinate change when regularity fails), multiplies
    them into the top polynomial, and then recursively takes the first
    non-vanishing generalized discriminant, prepared to distinguished form
    one variable down.  A surviving unit discriminant ends the tower with
    constant levels, and the bottom level is always the constant 1.
    """
    mu = Fraction(mu)
    gens = list(gens)
    if not gens:
        raise PresentationError("tower construction needs generators")
    n = gens[0].n
    if n < 1:
        raise DimensionMismatch("ambient dimension must be at least 1")
    rng = random.Random(seed)
    changes = []
    for g in gens:
        if g.n != n:
            raise DimensionMismatch("mixed ambient dimensions")
        if g.is_zero_up_to_prec:
            raise PresentationError("tower generators must be nonzero")
        if g.coefficient((0,) * n):
            raise PresentationError("unit generator: the germ is empty")

    M = _ensure_regular(gens, n - 1, mu, rng, max_retries)
    if M is not None:
        changes.append((n, M))
    prepared, units = [], []
    for g in gens:
        P, u = weierstrass_prepare(g, n - 1, mu)
        prepared.append(P)
        units.append(u)

    f_top = prepared[0]
    for P in prepared[1:]:
        f_top = truncate(mul(f_top, P), std_form(n), mu)

    levels = []
    current = f_top
    dim = n
    ones_from = None
    while True:
        p = regular_order(truncate(current, std_form(dim), mu), dim - 1)
        coeffs = coefficient_vector(current, dim - 1, p)
        j, disc_val, certs = _first_nonvanishing(p, coeffs, dim - 1, mu)
        if dim == 1:
            # discriminants of a univariate polynomial are constants
            unit_const = None if disc_val is None else Fraction(disc_val)
            levels.append(TowerLevel(dim, False, current, p, j, certs,
                                     None, unit_const))
            break
        const = disc_val.coefficient((0,) * (dim - 1))
        if const:
            levels.append(TowerLevel(dim, False, current, p, j, certs,
                                     None, const))
            ones_from = dim - 1
            break
        polys = [disc_val]
        M = _ensure_regular(polys, dim - 2, mu, rng, max_retries)
        disc_val = polys[0]
        if M is not None:
            changes.append((dim - 1, M))
            full = tuple(
                tuple(M[r][c] if r < dim - 1 and c < dim - 1
                      else (1 if r == c else 0) for c in range(dim))
                for r in range(dim))
            current = substitute_linear(current, full)
            rebuilt = []
            for lvl in levels:
                ext = tuple(
                    tuple(M[r][c] if r < dim - 1 and c < dim - 1
                          else (1 if r == c else 0) for c in range(lvl.index))
                    for r in range(lvl.index))
                lvl.poly = substitute_linear(lvl.poly, ext)
                rebuilt.append(lvl)
            levels = rebuilt
        P, u = weierstrass_prepare(disc_val, dim - 2, mu)
        levels.append(TowerLevel(dim, False, current, p, j, certs, u,
                                 u.coefficient((0,) * (dim - 1))))
        current = P
        dim -= 1

    if ones_from is not None:
        for i in range(ones_from, 0, -1):
            levels.append(TowerLevel(i, True, None, None, None, (), None, None))

    return Tower(n, mu, seed, tuple(levels), tuple(prepared), tuple(units),
                 tuple(changes))


def validate_tower(T: Tower) -> dict:
    """Re-check the tower conditions level by level.

    Per level: monic distinguished form with coefficients vanishing at the
    origin, the recorded discriminant-vanishing certificates, the unit
    factorization D = u * F_below, and the once-one-always-one chain; the
    bottom of the tower is the constant 1.
    """
    levels = {lvl.index: lvl for lvl in T.levels}
    report: dict = {"mu": T.mu, "levels": {}, "all_pass": True}
    seen_one = False
    for idx in sorted(levels, reverse=True):
        lvl = levels[idx]
        entry: dict = {}
        if lvl.is_one:
            entry["one_propagation"] = True
            seen_one = True
            report["levels"][idx] = entry
            continue
        if seen_one:
            entry["one_propagation"] = False
            report["all_pass"] = False
            report["levels"][idx] = entry
            continue
        f = lvl.poly
        ok_dim = f.n == idx
        distinguished = True
        try:
            coeffs = coefficient_vector(f, idx - 1, lvl.degree)
        except PresentationError:
            distinguished = False
            coeffs = None
        monic = f.coefficient(tuple(0 if t < idx - 1 else lvl.degree
                                    for t in range(idx))) == 1
        vanish_at_zero = True
        if coeffs is not None and idx >= 2:
            vanish_at_zero = all(not c.coefficient((0,) * (idx - 1))
                                 for c in coeffs)
        elif coeffs is not None and idx == 1:
            vanish_at_zero = all(c == 0 for c in coeffs)
        entry["distinguished_form"] = ok_dim and distinguished and monic
        entry["coefficients_vanish"] = vanish_at_zero

        cert_ok = False
        unit_ok = True
        if coeffs is not None:
            try:
                j, disc_val, certs = _first_nonvanishing(
                    lvl.degree, coeffs, idx - 1, T.mu)
                cert_ok = (j == lvl.disc_index and len(certs) == j - 1)
                below = levels.get(idx - 1)
                if lvl.unit_below is not None and below is not None \
                        and not below.is_one:
                    prod = mul(lvl.unit_below, below.poly)
                    window = min(T.mu, prod.prec) if prod.prec is not EXACT else T.mu
                    unit_ok = (lvl.unit_below.coefficient((0,) * (idx - 1)) != 0
                               and agrees_up_to(disc_val, prod,
                                                std_form(idx - 1), window))
                elif idx >= 2 and (below is None or below.is_one):
                    unit_ok = bool(lvl.unit_constant)
            except (UndecidedAtPrecision, BudgetExceeded):
                cert_ok = False
        entry["discriminant_certificates"] = cert_ok
        entry["unit_factorization"] = unit_ok
        report["levels"][idx] = entry
        if not all(v for v in entry.values()):
            report["all_pass"] = False
    bottom = levels.get(1)
    report["base_is_one"] = bottom is not None and (
        bottom.is_one or bottom.disc_index is not None)
    report["all_pass"] = report["all_pass"] and report["base_is_one"]
    return report
