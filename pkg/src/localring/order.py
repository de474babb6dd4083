"""Total orders on N^n induced by positive linear forms.

An exponent b is weighed by L(b) = sum(w_j * b_j) with all w_j > 0, and two
exponents are compared through the lexicographic order of the tuples
(L(b), b_n, ..., b_1).  The tie-break reads coordinates from the last one
down to the first; this is a frozen compatibility contract (axis-vertex
diagnostics depend on it).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterator

from .errors import DimensionMismatch, FormMismatch, ZeroUpToPrecision

if TYPE_CHECKING:  # pragma: no cover
    from .kernel import PrecisionSeries

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class LinearForm:
    """Positive rational weight vector defining the order on exponents."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(Fraction(w) for w in self.weights)
        if not ws:
            raise DimensionMismatch("a linear form needs at least one weight")
        if any(w <= 0 for w in ws):
            raise FormMismatch(f"weights must be strictly positive: {ws}")
        object.__setattr__(self, "weights", ws)

    @property
    def n(self) -> int:
        return len(self.weights)

    def restrict(self, k: int) -> "LinearForm":
        """The induced form on the first k coordinates."""
        return LinearForm(self.weights[:k])


def std_form(n: int) -> LinearForm:
    """All weights 1: L(b) = |b|, the total degree."""
    return LinearForm((Fraction(1),) * n)


def weighted_split_form(n: int, k: int, l) -> LinearForm:
    """L(b) = b_1 + ... + b_k + l*(b_{k+1} + ... + b_n), with l >= 1."""
    if not 1 <= k < n:
        raise DimensionMismatch(f"split index k={k} out of range for n={n}")
    l = Fraction(l)
    if l < 1:
        raise FormMismatch(f"split weight must be >= 1: {l}")
    return LinearForm((Fraction(1),) * k + (l,) * (n - k))


def is_standard(L: LinearForm) -> bool:
    return all(w == 1 for w in L.weights)


def is_isotropic(L: LinearForm) -> bool:
    """All weights equal: L is a multiple of the total degree."""
    return len(set(L.weights)) == 1


def lvalue(L: LinearForm, beta: Exponent) -> Fraction:
    if len(beta) != L.n:
        raise DimensionMismatch(f"exponent {beta} vs form on {L.n} variables")
    return sum((w * b for w, b in zip(L.weights, beta)), Fraction(0))


def sort_key(L: LinearForm, beta: Exponent):
    """Key realizing the total order: (L(b), b_n, ..., b_1)."""
    return (lvalue(L, beta),) + tuple(reversed(beta))


def compare(L: LinearForm, a: Exponent, b: Exponent) -> int:
    """-1, 0 or +1 as a is below, equal to or above b in the order."""
    if len(a) != len(b):
        raise DimensionMismatch(f"cannot compare {a} and {b}")
    ka, kb = sort_key(L, a), sort_key(L, b)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def initial_exponent(L: LinearForm, f: "PrecisionSeries") -> Exponent:
    """The L-minimal exponent of supp(f).

    Stable under refinement: any series with the same jet up to f's bound has
    the same initial exponent.  Raises ZeroUpToPrecision when f stores no
    terms (whether f is exactly zero or merely zero up to its bound).
    """
    if f.form_ctx is not None and f.form_ctx != L:
        raise FormMismatch(f"series certified under {f.form_ctx}, asked under {L}")
    if not f.terms:
        raise ZeroUpToPrecision("no certified initial exponent for a zero series")
    return min(f.terms, key=lambda e: sort_key(L, e))


def initial_term(L: LinearForm, f: "PrecisionSeries") -> tuple[Exponent, Fraction]:
    e = initial_exponent(L, f)
    return e, f.terms[e]


def min_lvalue(L: LinearForm, f: "PrecisionSeries") -> Fraction:
    """Lower bound for the L-order of the true series behind f.

    For a series with stored terms this is L(inexp); for a series that is
    zero up to its bound it is the bound itself.
    """
    if f.terms:
        return min(lvalue(L, e) for e in f.terms)
    if f.prec is None:
        raise ZeroUpToPrecision("exact zero has no L-order")
    return f.prec


def iter_sublevel(L: LinearForm, eta) -> Iterator[Exponent]:
    """All exponents with L(b) <= eta, in lexicographic generation order.

    Finite because every weight is positive.
    """
    eta = Fraction(eta)
    n = L.n

    def rec(i: int, budget: Fraction, prefix: tuple[int, ...]):
        if i == n:
            yield prefix
            return
        w = L.weights[i]
        top = int(budget / w)
        for b in range(top + 1):
            yield from rec(i + 1, budget - w * b, prefix + (b,))

    if eta < 0:
        return
    yield from rec(0, eta, ())


def parse_form(text: str, n: int) -> LinearForm:
    """Textual forms: `std`, `w:1,1,7`, or `split:k=2,l=7`."""
    text = text.strip()
    if text == "std":
        return std_form(n)
    if text.startswith("w:"):
        parts = [p for p in text[2:].split(",") if p]
        if len(parts) != n:
            raise FormMismatch(f"form lists {len(parts)} weights for {n} variables")
        return LinearForm(tuple(Fraction(p) for p in parts))
    if text.startswith("split:"):
        fields = dict(p.split("=", 1) for p in text[6:].split(",") if p)
        try:
            k, l = int(fields["k"]), Fraction(fields["l"])
        except KeyError as exc:
            raise FormMismatch(f"split form needs k= and l=: {text!r}") from exc
        return weighted_split_form(n, k, l)
    raise FormMismatch(f"unrecognized order spec {text!r}")


def form_label(L: LinearForm) -> str:
    if is_standard(L):
        return "std"
    return "w:" + ",".join(str(w) for w in L.weights)
