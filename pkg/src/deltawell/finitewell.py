"""Finite square well on [0, L] with exterior height V0.

Bound states come from the pole-free quantization residual
sin(kL)(k^2 - q^2) - 2kq cos(kL), bracketed on the window
(0, sqrt(2 m V0)/hbar) and bisected to machine precision.  The exterior
tail for x > L is written as a*A*exp(-q(x-L)), the form that is actually
continuous at L (with it, the closed-form normalization constant is
exact).  A deep-well sweep tracks the approach to the infinite-well
wavenumbers and edge slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import distcalc as dc
from .distcalc import Distribution, Piece, SmoothExpr
from .errors import (
    InsufficientDepthError,
    InternalMismatchError,
    OutOfWindowError,
    RecoveryMismatchError,
)
from .isw import WellConfig

BRANCH_TOL = 1e-9
RECOVERY_TOL = 1e-9


@dataclass(frozen=True)
class FiniteWellConfig:
    cfg: WellConfig
    depth: float

    def __post_init__(self) -> None:
        if self.depth <= 0:
            raise ValueError("well depth must be positive")

    @property
    def k_window(self) -> float:
        """Upper edge sqrt(2 m V0)/hbar of the bound-state window."""
        return math.sqrt(2.0 * self.cfg.mass * self.depth) / self.cfg.hbar

    def decay_rate(self, k: float) -> float:
        return math.sqrt(self.k_window**2 - k * k)

    def energy(self, k: float) -> float:
        return self.cfg.kinetic_factor * k * k


@dataclass(frozen=True)
class FiniteWellSolution:
    k: float
    q: float
    parity: int
    norm: float
    psi: Distribution

    def interior_shape(self) -> SmoothExpr:
        """D(x) = (q/k) sin(kx) + cos(kx), unit amplitude at x=0."""
        return (SmoothExpr.sine(self.q / self.k, self.k)
                + SmoothExpr.cosine(1.0, self.k))


def quantization_residual(fw: FiniteWellConfig, k: float) -> float:
    """sin(kL)(k^2-q^2) - 2kq cos(kL); zero exactly at bound states."""
    if not 0.0 < k < fw.k_window:
        raise OutOfWindowError(
            f"k={k} outside the bound-state window (0, {fw.k_window})")
    L = fw.cfg.width
    q = fw.decay_rate(k)
    return math.sin(k * L) * (k * k - q * q) - math.cos(k * L) * 2.0 * k * q


def _bisect(fw: FiniteWellConfig, lo: float, hi: float) -> float:
    flo = quantization_residual(fw, lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fmid = quantization_residual(fw, mid)
        if fmid == 0.0:
            return mid
        if (flo < 0) == (fmid < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _parity(fw: FiniteWellConfig, k: float, q: float) -> int:
    L = fw.cfg.width
    ssq = k * k + q * q
    best, best_err = 1, math.inf
    for a in (1, -1):
        err = (abs(math.sin(k * L) - a * 2.0 * k * q / ssq)
               + abs(math.cos(k * L) - a * (k * k - q * q) / ssq))
        if err < best_err:
            best, best_err = a, err
    if best_err > BRANCH_TOL:
        raise InternalMismatchError(
            f"no parity sign satisfies both branch identities at k={k} "
            f"(best error {best_err})")
    return best


def normalization(fw: FiniteWellConfig, k: float, q: float) -> float:
    """Closed-form normalization constant of the three-piece eigenfunction."""
    if k <= 0 or q <= 0:
        raise ValueError("k and q must be positive")
    L = fw.cfg.width
    return (math.sqrt(2.0 / L) * (k / q)
            / math.sqrt((1.0 + 2.0 / (q * L)) * (1.0 + k * k / (q * q))))


def eigenfunction(fw: FiniteWellConfig, sol: FiniteWellSolution) -> Distribution:
    """Three pieces: rising tail, interior A*D(x), falling tail; continuous
    with continuous first derivative, hence no delta atoms anywhere."""
    L = fw.cfg.width
    A, q, a = sol.norm, sol.q, sol.parity
    pieces = [
        Piece(-math.inf, 0.0, SmoothExpr.exponential(A, q)),
        Piece(0.0, L, sol.interior_shape().scaled(A)),
        # a*A*exp(-q(x-L)) carried as rate -q, phase +qL.
        Piece(L, math.inf, SmoothExpr.exponential(a * A, -q, q * L)),
    ]
    return Distribution.of(pieces)


def solve_bound_states(fw: FiniteWellConfig) -> list[FiniteWellSolution]:
    """All bound states, in increasing k."""
    window = fw.k_window
    L = fw.cfg.width
    step = min(math.pi / (4.0 * L), window / 1000.0)
    ks: list[float] = []
    k = step
    prev_k, prev_f = None, None
    while k < window:
        f = quantization_residual(fw, k)
        if f == 0.0:
            ks.append(k)
        elif prev_f is not None and (prev_f < 0) != (f < 0):
            ks.append(_bisect(fw, prev_k, k))
        prev_k, prev_f = k, f
        k += step
    solutions = []
    for root in ks:
        q = fw.decay_rate(root)
        a = _parity(fw, root, q)
        A = normalization(fw, root, q)
        sol = FiniteWellSolution(root, q, a, A, Distribution.of([]))
        sol = FiniteWellSolution(root, q, a, A, eigenfunction(fw, sol))
        solutions.append(sol)
    if not solutions:
        raise InternalMismatchError(
            "a 1-D well binds at least one state; the scan found none")
    return solutions


def potential_recovery(fw: FiniteWellConfig,
                       sol: FiniteWellSolution) -> Distribution:
    """(hbar^2/2m) Psi'' + E Psi; must come out as V0*Psi on the exterior
    pieces, zero inside, with every delta weight cancelled by C^1 matching."""
    E = fw.energy(sol.k)
    psi = sol.psi
    psi2 = dc.differentiate(dc.differentiate(psi))
    recovered = dc.add(dc.scale(psi2, fw.cfg.kinetic_factor), dc.scale(psi, E))
    for atom in recovered.atoms:
        if abs(atom.weight()) > RECOVERY_TOL:
            raise RecoveryMismatchError(
                f"uncancelled delta of weight {atom.weight()} at {atom.anchor}")
    L = fw.cfg.width
    interior = recovered.piece_covering(L / 2.0)
    if interior is not None and not interior.expr.is_zero(RECOVERY_TOL):
        raise RecoveryMismatchError(
            f"interior residual {interior.expr.max_abs_coeff()} exceeds tolerance")
    for probe in (-1.0, L + 1.0):
        want = psi.piece_covering(probe).expr.scaled(fw.depth)
        got = recovered.piece_covering(probe)
        got_expr = got.expr if got is not None else SmoothExpr.zero()
        if not got_expr.isclose(want, RECOVERY_TOL * max(1.0, fw.depth)):
            raise RecoveryMismatchError(
                f"exterior piece at x~{probe} differs from V0*Psi")
    return Distribution.of(
        [p for p in recovered.pieces], [])


def exterior_probability(fw: FiniteWellConfig, sol: FiniteWellSolution) -> float:
    density = dc.multiply(sol.psi, dc.conjugate(sol.psi))
    L = fw.cfg.width
    out = (dc.integrate(density, -math.inf, 0.0)
           + dc.integrate(density, L, math.inf))
    return out.real


@dataclass(frozen=True)
class LimitStudyRow:
    depth: float
    k: float
    gap: float
    edge_slope: float
    exterior_prob: float


def limit_study(cfg: WellConfig, n: int,
                depths: Sequence[float]) -> list[LimitStudyRow]:
    """Deep-well sweep for the n-th bound state: gap to the infinite-well
    wavenumber and interior edge slope A*D'(0) = A*q, which approaches the
    infinite-well derivative jump sqrt(2/L)*k_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if list(depths) != sorted(depths) or len(set(depths)) != len(depths):
        raise ValueError("depths must be strictly ascending")
    k_inf = n * math.pi / cfg.width
    rows = []
    for v0 in depths:
        fw = FiniteWellConfig(cfg, v0)
        states = solve_bound_states(fw)
        if len(states) < n:
            raise InsufficientDepthError(
                f"V0={v0} binds only {len(states)} states, need {n}")
        sol = states[n - 1]
        rows.append(LimitStudyRow(
            depth=v0,
            k=sol.k,
            gap=k_inf - sol.k,
            edge_slope=sol.norm * sol.q,
            exterior_prob=exterior_probability(fw, sol),
        ))
    gaps = [r.gap for r in rows]
    if any(g <= 0 for g in gaps) or any(b >= a for a, b in zip(gaps, gaps[1:], strict=False)):
        raise InternalMismatchError(
            f"wavenumber gaps {gaps} are not positive strictly decreasing")
    return rows
