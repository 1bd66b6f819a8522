"""Wave packets in the well and the closed-form Ehrenfest check.

d<p>/dt and -<dV/dx> are evaluated as double series over the packet's
own truncation; both sides truncate identically, so their sum is pure
floating-point noise at any N.  The mean-force matrix element is built
from the edge deltas of V*Psi through the half-weight integral
convention, not from a formula pasted in by hand.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import distcalc as dc
from .distcalc import Distribution, Piece, SmoothExpr, Term
from .errors import NonHermitianError, NormalizationError
from .isw import WellConfig, mode_shape, potential_term

NORMALIZATION_TOL = 1e-12
HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class WavePacket:
    """Truncated expansion over well eigenstates: coeffs[n-1] = a_n."""

    cfg: WellConfig
    coeffs: tuple[complex, ...]

    @staticmethod
    def of(cfg: WellConfig, coeffs, normalize: bool = False) -> "WavePacket":
        amps = tuple(complex(c) for c in coeffs)
        if not amps:
            raise NormalizationError("a packet needs at least one coefficient")
        total = sum(abs(c) ** 2 for c in amps)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            if not normalize:
                raise NormalizationError(
                    f"sum |a_n|^2 = {total}, not 1; pass normalize=True to rescale")
            amps = tuple(c / math.sqrt(total) for c in amps)
        return WavePacket(cfg, amps)

    @property
    def n_modes(self) -> int:
        return len(self.coeffs)

    def wavenumber(self, n: int) -> float:
        return n * math.pi / self.cfg.width

    def frequency(self, n: int) -> float:
        k = self.wavenumber(n)
        return self.cfg.kinetic_factor * k * k / self.cfg.hbar


def evolve(p: WavePacket, t: float) -> Distribution:
    """Sum_n a_n e^{-i w_n t} Psi_n as a single smooth piece on [0, L)."""
    L = p.cfg.width
    amp = math.sqrt(2.0 / L)
    terms = []
    for n, a in enumerate(p.coeffs, start=1):
        phase = complex(math.cos(p.frequency(n) * t), -math.sin(p.frequency(n) * t))
        terms.append(Term(a * phase * amp, 0, dc.SIN, p.wavenumber(n), 0.0))
    return Distribution.of([Piece(0.0, L, SmoothExpr.of(terms))])


def beta(n: int, j: int) -> int:
    """Parity selector 1 - (-1)^(n+j): 0 for same parity, 2 otherwise."""
    if n < 1 or j < 1:
        raise ValueError("mode indices start at 1")
    return 0 if (n + j) % 2 == 0 else 2


@lru_cache(maxsize=None)
def force_matrix_element(cfg: WellConfig, n: int, j: int) -> float:
    """integral of Psi_n'(x) V(x) Psi_j(x) over the line, evaluated through
    the edge deltas of V*Psi_j with the half-weight endpoint convention.
    Closed form: (hbar^2 / 2mL) k_n k_j beta_{nj}."""
    L = cfg.width
    dpsin = mode_shape(cfg, n).derivative()
    integrand = dc.multiply_smooth(potential_term(cfg, mode_shape(cfg, j)), dpsin)
    return dc.integrate(integrand, 0.0, L).real


def _hermitian_real(value: complex, where: str) -> float:
    if abs(value.imag) > HERMITICITY_TOL:
        raise NonHermitianError(
            f"{where} has imaginary residue {value.imag}")
    return value.real


def momentum_expectation(p: WavePacket, t: float) -> float:
    """<p>(t) as the off-diagonal double series over the truncation."""
    cfg = p.cfg
    total = 0j
    for n, an in enumerate(p.coeffs, start=1):
        for j, aj in enumerate(p.coeffs, start=1):
            if n == j:
                continue
            b = beta(n, j)
            if b == 0:
                continue
            kn, kj = p.wavenumber(n), p.wavenumber(j)
            osc = cmath.exp(1j * (p.frequency(n) - p.frequency(j)) * t)
            total += an.conjugate() * aj * kn * kj / (kn * kn - kj * kj) * b * osc
    total *= -1j * cfg.hbar * 2.0 / cfg.width
    return _hermitian_real(total, "<p>")


def momentum_rate(p: WavePacket, t: float) -> float:
    """d<p>/dt as the term-wise differentiated series."""
    cfg = p.cfg
    total = 0j
    for n, an in enumerate(p.coeffs, start=1):
        for j, aj in enumerate(p.coeffs, start=1):
            b = beta(n, j)
            if b == 0:
                continue
            osc = cmath.exp(1j * (p.frequency(n) - p.frequency(j)) * t)
            total += an.conjugate() * aj * p.wavenumber(n) * p.wavenumber(j) * b * osc
    total *= cfg.hbar**2 / (cfg.mass * cfg.width)
    return _hermitian_real(total, "d<p>/dt")


def potential_gradient_expectation(p: WavePacket, t: float) -> float:
    """<dV/dx>(t) assembled from the pair matrix elements, with the total
    derivative term dropping out under the integral."""
    total = 0j
    for n, an in enumerate(p.coeffs, start=1):
        for j, aj in enumerate(p.coeffs, start=1):
            m = (force_matrix_element(p.cfg, n, j)
                 + force_matrix_element(p.cfg, j, n))
            if m == 0.0:
                continue
            osc = cmath.exp(1j * (p.frequency(n) - p.frequency(j)) * t)
            total += an.conjugate() * aj * m * osc
    return _hermitian_real(-total, "<dV/dx>")


def ehrenfest_residual(p: WavePacket, t: float) -> float:
    """|d<p>/dt + <dV/dx>|; zero up to rounding at any truncation."""
    return abs(momentum_rate(p, t) + potential_gradient_expectation(p, t))


def quadrature_oracle(p: WavePacket, t: float,
                      gridpoints: int = 10_000) -> tuple[float, float]:
    """Independent check: composite Simpson on a uniform grid over [0, L]
    for the norm and for <p> = integral of conj(Psi) (-i hbar Psi')."""
    if gridpoints < 100:
        raise ValueError("use at least 100 grid points")
    n_int = gridpoints if gridpoints % 2 == 0 else gridpoints + 1
    L = p.cfg.width
    xs = np.linspace(0.0, L, n_int + 1)
    expr = evolve(p, t).pieces[0].expr
    psi = expr.evaluate_array(xs)
    dpsi = expr.derivative().evaluate_array(xs)
    w = np.ones(n_int + 1)
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    w *= (L / n_int) / 3.0
    norm = float(np.real(np.sum(w * np.abs(psi) ** 2)))
    mom = float(np.real(np.sum(w * np.conj(psi) * (-1j * p.cfg.hbar) * dpsi)))
    return norm, mom
