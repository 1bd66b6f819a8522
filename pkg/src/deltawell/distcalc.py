"""Exact symbolic calculus for 1-D piecewise-smooth distributions.

The smooth layer is a closed term language: finite sums of
``coeff * x^power * f(rate*x + phase)`` with ``f`` one of
{1, sin, cos, exp}, complex coefficients and real rates/phases.
It is closed under differentiation, products (via product-to-sum
rewriting) and antiderivatives, and admits exact Taylor expansion
at any point.

On top of it sit delta atoms ``w(x)/(x-anchor)^p * delta^(m)(x-anchor)``
whose numeric weight is the limit of the singular coefficient, computed
from the Taylor expansion of ``w`` at the anchor, and piecewise
distributions on disjoint half-open intervals.  Endpoints may be
infinite (exponential tails); delta integration over a range touching
the anchor counts half the weight.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AtomAnchorError,
    ClosureError,
    DivergentIntegralError,
    DivergentWeightError,
    UnsupportedOrderError,
)

# Coefficient tolerance for normal-form merging and zero tests.
COEFF_TOL = 1e-12

_TWO_PI = 2.0 * math.pi

CONST = "const"
SIN = "sin"
COS = "cos"
EXP = "exp"
_KINDS = (CONST, SIN, COS, EXP)


@dataclass(frozen=True)
class Term:
    """One term ``coeff * x^power * f(rate*x + phase)``."""

    coeff: complex
    power: int = 0
    kind: str = CONST
    rate: float = 0.0
    phase: float = 0.0


def _canonical_terms(terms: Iterable[Term]) -> tuple[Term, ...]:
    """Fold rate-0 oscillators into the coefficient, force sin/cos rates
    positive, wrap trig phases, and combine like terms."""
    bucket: dict[tuple[int, str, float, float], complex] = {}
    for t in terms:
        c, p, kind, rate, phase = t.coeff, t.power, t.kind, t.rate, t.phase
        if kind not in _KINDS:
            raise ValueError(f"unknown oscillator kind {kind!r}")
        if p < 0:
            raise ValueError("negative powers are not in the term language")
        if kind != CONST and rate == 0.0:
            if kind == SIN:
                c *= math.sin(phase)
            elif kind == COS:
                c *= math.cos(phase)
            else:
                c *= math.exp(phase)
            kind, phase = CONST, 0.0
        if kind == SIN and rate < 0.0:
            c, rate, phase = -c, -rate, -phase
        elif kind == COS and rate < 0.0:
            rate, phase = -rate, -phase
        if kind in (SIN, COS):
            phase = math.remainder(phase, _TWO_PI)
        if kind == CONST:
            rate = phase = 0.0
        if c == 0:
            continue
        key = (p, kind, rate, phase)
        bucket[key] = bucket.get(key, 0j) + complex(c)
    out = [
        Term(c, p, kind, rate, phase)
        for (p, kind, rate, phase), c in bucket.items()
        if c != 0
    ]
    out.sort(key=lambda t: (t.power, t.kind, t.rate, t.phase))
    return tuple(out)


def _term_value(t: Term, x: float) -> complex:
    v = t.coeff * x**t.power
    if t.kind == SIN:
        v *= math.sin(t.rate * x + t.phase)
    elif t.kind == COS:
        v *= math.cos(t.rate * x + t.phase)
    elif t.kind == EXP:
        v *= math.exp(t.rate * x + t.phase)
    return v


def _term_product(s: Term, t: Term) -> list[Term]:
    c = s.coeff * t.coeff
    p = s.power + t.power
    a, b = s, t
    if a.kind == CONST:
        return [Term(c, p, b.kind, b.rate, b.phase)]
    if b.kind == CONST:
        return [Term(c, p, a.kind, a.rate, a.phase)]
    if a.kind == EXP and b.kind == EXP:
        return [Term(c, p, EXP, a.rate + b.rate, a.phase + b.phase)]
    if EXP in (a.kind, b.kind):
        raise ClosureError("exp*trig products are outside the term language")
    rm, pm = a.rate - b.rate, a.phase - b.phase
    rp, pp = a.rate + b.rate, a.phase + b.phase
    if a.kind == SIN and b.kind == SIN:
        return [Term(0.5 * c, p, COS, rm, pm), Term(-0.5 * c, p, COS, rp, pp)]
    if a.kind == COS and b.kind == COS:
        return [Term(0.5 * c, p, COS, rm, pm), Term(0.5 * c, p, COS, rp, pp)]
    if a.kind == SIN:  # sin * cos
        return [Term(0.5 * c, p, SIN, rp, pp), Term(0.5 * c, p, SIN, rm, pm)]
    # cos * sin
    return [Term(0.5 * c, p, SIN, rp, pp), Term(-0.5 * c, p, SIN, rm, pm)]


def _term_derivative(t: Term) -> list[Term]:
    out: list[Term] = []
    if t.power > 0:
        out.append(Term(t.coeff * t.power, t.power - 1, t.kind, t.rate, t.phase))
    if t.kind == SIN:
        out.append(Term(t.coeff * t.rate, t.power, COS, t.rate, t.phase))
    elif t.kind == COS:
        out.append(Term(-t.coeff * t.rate, t.power, SIN, t.rate, t.phase))
    elif t.kind == EXP:
        out.append(Term(t.coeff * t.rate, t.power, EXP, t.rate, t.phase))
    return out


def _term_antiderivative(t: Term) -> list[Term]:
    # Recursive integration by parts; rate != 0 for non-const kinds is
    # guaranteed by canonicalization.
    if t.kind == CONST:
        return [Term(t.coeff / (t.power + 1), t.power + 1, CONST)]
    a = t.rate
    if t.kind == SIN:
        out = [Term(-t.coeff / a, t.power, COS, a, t.phase)]
        if t.power > 0:
            rec = Term(t.coeff * t.power / a, t.power - 1, COS, a, t.phase)
            out.extend(_term_antiderivative(rec))
        return out
    if t.kind == COS:
        out = [Term(t.coeff / a, t.power, SIN, a, t.phase)]
        if t.power > 0:
            rec = Term(-t.coeff * t.power / a, t.power - 1, SIN, a, t.phase)
            out.extend(_term_antiderivative(rec))
        return out
    out = [Term(t.coeff / a, t.power, EXP, a, t.phase)]
    if t.power > 0:
        rec = Term(-t.coeff * t.power / a, t.power - 1, EXP, a, t.phase)
        out.extend(_term_antiderivative(rec))
    return out


def _term_taylor(t: Term, x0: float, order: int) -> list[complex]:
    """Coefficients c_j of sum c_j (x-x0)^j, exact up to float rounding."""
    poly = [
        comb(t.power, i) * x0 ** (t.power - i)
        for i in range(min(t.power, order) + 1)
    ]
    psi = t.rate * x0 + t.phase
    osc: list[float]
    if t.kind == CONST:
        osc = [1.0] + [0.0] * order
    elif t.kind == SIN:
        osc = [t.rate**j / factorial(j) * math.sin(psi + j * math.pi / 2)
               for j in range(order + 1)]
    elif t.kind == COS:
        osc = [t.rate**j / factorial(j) * math.cos(psi + j * math.pi / 2)
               for j in range(order + 1)]
    else:
        e = math.exp(psi)
        osc = [e * t.rate**j / factorial(j) for j in range(order + 1)]
    out = [0j] * (order + 1)
    for i, pi in enumerate(poly):
        for j in range(order + 1 - i):
            out[i + j] += t.coeff * pi * osc[j]
    return out


@dataclass(frozen=True)
class SmoothExpr:
    """Finite sum of polynomial*oscillator terms; immutable, closed under
    +, *, d/dx, antiderivative and Taylor expansion."""

    terms: tuple[Term, ...] = ()

    @staticmethod
    def of(terms: Iterable[Term]) -> "SmoothExpr":
        return SmoothExpr(_canonical_terms(terms))

    @staticmethod
    def zero() -> "SmoothExpr":
        return SmoothExpr()

    @staticmethod
    def constant(c: complex) -> "SmoothExpr":
        return SmoothExpr.of([Term(c)])

    @staticmethod
    def monomial(c: complex, power: int) -> "SmoothExpr":
        return SmoothExpr.of([Term(c, power)])

    @staticmethod
    def sine(c: complex, rate: float, phase: float = 0.0) -> "SmoothExpr":
        return SmoothExpr.of([Term(c, 0, SIN, rate, phase)])

    @staticmethod
    def cosine(c: complex, rate: float, phase: float = 0.0) -> "SmoothExpr":
        return SmoothExpr.of([Term(c, 0, COS, rate, phase)])

    @staticmethod
    def exponential(c: complex, rate: float, phase: float = 0.0) -> "SmoothExpr":
        return SmoothExpr.of([Term(c, 0, EXP, rate, phase)])

    def __add__(self, other: "SmoothExpr") -> "SmoothExpr":
        return SmoothExpr.of(self.terms + other.terms)

    def __neg__(self) -> "SmoothExpr":
        return self.scaled(-1)

    def __sub__(self, other: "SmoothExpr") -> "SmoothExpr":
        return self + (-other)

    def scaled(self, c: complex) -> "SmoothExpr":
        return SmoothExpr.of([Term(t.coeff * c, t.power, t.kind, t.rate, t.phase)
                              for t in self.terms])

    def __mul__(self, other: "SmoothExpr") -> "SmoothExpr":
        out: list[Term] = []
        for s in self.terms:
            for t in other.terms:
                out.extend(_term_product(s, t))
        return SmoothExpr.of(out)

    def conjugate(self) -> "SmoothExpr":
        return SmoothExpr.of(
            [Term(t.coeff.conjugate(), t.power, t.kind, t.rate, t.phase)
             for t in self.terms])

    def derivative(self) -> "SmoothExpr":
        out: list[Term] = []
        for t in self.terms:
            out.extend(_term_derivative(t))
        return SmoothExpr.of(out)

    def antiderivative(self) -> "SmoothExpr":
        out: list[Term] = []
        for t in self.terms:
            out.extend(_term_antiderivative(t))
        return SmoothExpr.of(out)

    def evaluate(self, x: float) -> complex:
        return sum((_term_value(t, x) for t in self.terms), 0j)

    def evaluate_array(self, xs: np.ndarray) -> np.ndarray:
        out = np.zeros(np.shape(xs), dtype=complex)
        for t in self.terms:
            v = t.coeff * np.power(xs, t.power) if t.power else t.coeff * np.ones_like(xs)
            if t.kind == SIN:
                v = v * np.sin(t.rate * xs + t.phase)
            elif t.kind == COS:
                v = v * np.cos(t.rate * xs + t.phase)
            elif t.kind == EXP:
                v = v * np.exp(t.rate * xs + t.phase)
            out = out + v
        return out

    def taylor(self, x0: float, order: int) -> list[complex]:
        out = [0j] * (order + 1)
        for t in self.terms:
            for j, c in enumerate(_term_taylor(t, x0, order)):
                out[j] += c
        return out

    def max_abs_coeff(self) -> float:
        return max((abs(t.coeff) for t in self.terms), default=0.0)

    def is_zero(self, tol: float = COEFF_TOL) -> bool:
        return self.max_abs_coeff() <= tol

    def isclose(self, other: "SmoothExpr", tol: float = COEFF_TOL) -> bool:
        return (self - other).is_zero(tol)


def _shifted_power(anchor: float, d: int) -> SmoothExpr:
    """(x - anchor)^d expanded as a polynomial SmoothExpr."""
    return SmoothExpr.of(
        [Term(comb(d, i) * (-anchor) ** (d - i), i) for i in range(d + 1)])


@dataclass(frozen=True)
class DeltaAtom:
    """``weight_expr(x)/(x-anchor)^pole_order * delta^(order)(x-anchor)``.

    The numeric weight is the limit of the singular coefficient at the
    anchor.  A factor 1/(L-x) is encoded by negating the weight
    expression, since 1/(L-x) = -1/(x-L).
    """

    anchor: float
    order: int
    weight_expr: SmoothExpr
    pole_order: int = 0

    def __post_init__(self) -> None:
        if self.order not in (0, 1):
            raise ValueError("only delta and delta' atoms are supported")
        if self.pole_order < 0:
            raise ValueError("pole_order must be non-negative")

    def weight(self) -> complex:
        """lim_{x->anchor} weight_expr(x)/(x-anchor)^pole_order."""
        coeffs = self.weight_expr.taylor(self.anchor, self.pole_order + 2)
        for j in range(self.pole_order):
            if abs(coeffs[j]) > COEFF_TOL:
                raise DivergentWeightError(
                    f"delta weight at x={self.anchor} diverges: Taylor "
                    f"coefficient of order {j} is {coeffs[j]}")
        return coeffs[self.pole_order]

    def raised_to_pole(self, pole: int) -> "DeltaAtom":
        if pole < self.pole_order:
            raise ValueError("cannot lower pole order")
        if pole == self.pole_order:
            return self
        mult = _shifted_power(self.anchor, pole - self.pole_order)
        return DeltaAtom(self.anchor, self.order, self.weight_expr * mult, pole)


@dataclass(frozen=True)
class Piece:
    """Smooth expression on the half-open interval [a, b)."""

    a: float
    b: float
    expr: SmoothExpr


def _normalize_pieces(pieces: Sequence[Piece]) -> tuple[Piece, ...]:
    kept = [p for p in pieces if not p.expr.is_zero()]
    for p in kept:
        if not p.a < p.b:
            raise ValueError(f"empty or inverted interval [{p.a}, {p.b})")
    kept.sort(key=lambda p: p.a)
    for prev, nxt in zip(kept, kept[1:]):
        if nxt.a < prev.b:
            raise ValueError(
                f"overlapping pieces [{prev.a},{prev.b}) and [{nxt.a},{nxt.b})")
    merged: list[Piece] = []
    for p in kept:
        if merged and merged[-1].b == p.a and merged[-1].expr.isclose(p.expr):
            merged[-1] = Piece(merged[-1].a, p.b, merged[-1].expr)
        else:
            merged.append(p)
    return tuple(merged)


def _normalize_atoms(atoms: Sequence[DeltaAtom]) -> tuple[DeltaAtom, ...]:
    groups: dict[tuple[float, int], list[DeltaAtom]] = {}
    for a in atoms:
        groups.setdefault((a.anchor, a.order), []).append(a)
    out: list[DeltaAtom] = []
    for (anchor, order), group in sorted(groups.items()):
        pole = max(a.pole_order for a in group)
        expr = SmoothExpr.zero()
        for a in group:
            expr = expr + a.raised_to_pole(pole).weight_expr
        if not expr.is_zero():
            out.append(DeltaAtom(anchor, order, expr, pole))
    return tuple(out)


@dataclass(frozen=True)
class Distribution:
    """Disjoint smooth pieces plus delta atoms; zero outside all pieces."""

    pieces: tuple[Piece, ...] = ()
    atoms: tuple[DeltaAtom, ...] = ()

    @staticmethod
    def of(pieces: Iterable[Piece] = (),
           atoms: Iterable[DeltaAtom] = ()) -> "Distribution":
        return Distribution(_normalize_pieces(tuple(pieces)),
                            _normalize_atoms(tuple(atoms)))

    def breakpoints(self) -> list[float]:
        pts = {e for p in self.pieces for e in (p.a, p.b) if math.isfinite(e)}
        return sorted(pts)

    def piece_covering(self, x: float) -> Piece | None:
        for p in self.pieces:
            if p.a <= x < p.b:
                return p
        return None

    def _left_expr(self, x: float) -> SmoothExpr:
        for p in self.pieces:
            if p.a < x <= p.b:
                return p.expr
        return SmoothExpr.zero()

    def _right_expr(self, x: float) -> SmoothExpr:
        p = self.piece_covering(x)
        return p.expr if p is not None else SmoothExpr.zero()


# --- Operations -----------------------------------------------------------


def differentiate(d: Distribution) -> Distribution:
    """Distributional derivative: piecewise derivative plus jump deltas at
    every breakpoint; existing deltas are promoted to delta'."""
    for a in d.atoms:
        if a.order != 0:
            raise UnsupportedOrderError("cannot differentiate a delta' atom")
    pieces = [Piece(p.a, p.b, p.expr.derivative()) for p in d.pieces]
    atoms = [DeltaAtom(a.anchor, 1, a.weight_expr, a.pole_order) for a in d.atoms]
    for x0 in d.breakpoints():
        j = d._right_expr(x0).evaluate(x0) - d._left_expr(x0).evaluate(x0)
        atoms.append(DeltaAtom(x0, 0, SmoothExpr.constant(j), 0))
    return Distribution.of(pieces, atoms)


def multiply_smooth(d: Distribution, g: SmoothExpr) -> Distribution:
    pieces = [Piece(p.a, p.b, p.expr * g) for p in d.pieces]
    atoms = [DeltaAtom(a.anchor, a.order, a.weight_expr * g, a.pole_order)
             for a in d.atoms]
    return Distribution.of(pieces, atoms)


def atom_weight(a: DeltaAtom) -> complex:
    return a.weight()


def _antideriv_at(F: SmoothExpr, x: float) -> complex:
    if math.isfinite(x):
        return F.evaluate(x)
    sign = 1.0 if x > 0 else -1.0
    total = 0j
    for t in F.terms:
        if t.kind == EXP and t.rate * sign < 0:
            continue  # decaying tail -> 0
        if t.kind == CONST and t.power == 0:
            total += t.coeff
            continue
        raise DivergentIntegralError(
            f"antiderivative term {t} has no limit at x={x}")
    return total


def integrate(d: Distribution, a: float, b: float) -> complex:
    """Integral over [a, b]: closed-form smooth part plus delta atoms with
    half weight when the anchor sits exactly on an endpoint."""
    if not a < b:
        raise ValueError("integration requires a < b")
    total = 0j
    for p in d.pieces:
        lo, hi = max(a, p.a), min(b, p.b)
        if lo < hi:
            F = p.expr.antiderivative()
            total += _antideriv_at(F, hi) - _antideriv_at(F, lo)
    for atom in d.atoms:
        if atom.order != 0:
            continue  # delta' integrates to 0 against the unit test function
        if a < atom.anchor < b:
            total += atom.weight()
        elif atom.anchor == a or atom.anchor == b:
            total += atom.weight() / 2
    return total


def evaluate(d: Distribution, x: float) -> complex:
    for atom in d.atoms:
        if atom.anchor == x:
            raise AtomAnchorError(f"x={x} is a delta-atom anchor")
    p = d.piece_covering(x)
    return p.expr.evaluate(x) if p is not None else 0j


def jump(d: Distribution, x0: float) -> complex:
    """Right limit minus left limit of the smooth part at x0."""
    return d._right_expr(x0).evaluate(x0) - d._left_expr(x0).evaluate(x0)


# --- Linear-space plumbing -------------------------------------------------


def _segments(*ds: Distribution) -> list[tuple[float, float]]:
    pts = sorted({e for d in ds for p in d.pieces for e in (p.a, p.b)})
    return list(zip(pts, pts[1:]))


def _probe(u: float, v: float) -> float:
    if not math.isfinite(u):
        return v - 1.0
    if not math.isfinite(v):
        return u + 1.0
    return 0.5 * (u + v)


def add(d1: Distribution, d2: Distribution) -> Distribution:
    pieces = []
    for u, v in _segments(d1, d2):
        t = _probe(u, v)
        e1, e2 = d1.piece_covering(t), d2.piece_covering(t)
        expr = SmoothExpr.zero()
        if e1 is not None:
            expr = expr + e1.expr
        if e2 is not None:
            expr = expr + e2.expr
        if not expr.is_zero():
            pieces.append(Piece(u, v, expr))
    return Distribution.of(pieces, d1.atoms + d2.atoms)


def scale(d: Distribution, c: complex) -> Distribution:
    return multiply_smooth(d, SmoothExpr.constant(c))


def multiply(d1: Distribution, d2: Distribution) -> Distribution:
    """Pointwise product of two atom-free distributions."""
    if d1.atoms or d2.atoms:
        raise ClosureError("product of distributions with delta atoms")
    pieces = []
    for u, v in _segments(d1, d2):
        t = _probe(u, v)
        p1, p2 = d1.piece_covering(t), d2.piece_covering(t)
        if p1 is not None and p2 is not None:
            pieces.append(Piece(u, v, p1.expr * p2.expr))
    return Distribution.of(pieces)


def conjugate(d: Distribution) -> Distribution:
    return Distribution.of(
        [Piece(p.a, p.b, p.expr.conjugate()) for p in d.pieces],
        [DeltaAtom(a.anchor, a.order, a.weight_expr.conjugate(), a.pole_order)
         for a in d.atoms])


# --- JSON serialization ----------------------------------------------------


def _num_to_json(x: float) -> float | str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _num_from_json(v: float | str) -> float:
    if isinstance(v, str):
        return float(v)
    return float(v)


def _terms_to_json(e: SmoothExpr) -> list[dict]:
    return [{"re": t.coeff.real, "im": t.coeff.imag, "power": t.power,
             "kind": t.kind, "rate": t.rate, "phase": t.phase}
            for t in e.terms]


def _terms_from_json(items: list[dict]) -> SmoothExpr:
    return SmoothExpr.of(
        [Term(complex(i["re"], i["im"]), int(i["power"]), i["kind"],
              float(i["rate"]), float(i["phase"])) for i in items])


def to_json_dict(d: Distribution) -> dict:
    return {
        "pieces": [{"a": _num_to_json(p.a), "b": _num_to_json(p.b),
                    "terms": _terms_to_json(p.expr)} for p in d.pieces],
        "atoms": [{"anchor": a.anchor, "order": a.order, "pole": a.pole_order,
                   "weight_terms": _terms_to_json(a.weight_expr)}
                  for a in d.atoms],
    }


def from_json_dict(doc: dict) -> Distribution:
    pieces = [Piece(_num_from_json(p["a"]), _num_from_json(p["b"]),
                    _terms_from_json(p["terms"])) for p in doc["pieces"]]
    atoms = [DeltaAtom(float(a["anchor"]), int(a["order"]),
                       _terms_from_json(a["weight_terms"]), int(a["pole"]))
             for a in doc["atoms"]]
    return Distribution.of(pieces, atoms)


def dumps(d: Distribution) -> str:
    return json.dumps(to_json_dict(d))


def loads(s: str) -> Distribution:
    return from_json_dict(json.loads(s))
