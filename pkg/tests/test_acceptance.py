"""Acceptance gate: one criterion per test, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the summary lines.
"""

import json
import math
import random

import pytest

from deltawell import distcalc as dc
from deltawell.cli import main
from deltawell.distcalc import DeltaAtom, Distribution, SmoothExpr
from deltawell.ehrenfest import (
    WavePacket,
    ehrenfest_residual,
    momentum_expectation,
    momentum_rate,
    quadrature_oracle,
)
from deltawell.finitewell import (
    FiniteWellConfig,
    limit_study,
    potential_recovery,
    quantization_residual,
    solve_bound_states,
)
from deltawell.isw import (
    EnergySign,
    WellConfig,
    edge_jumps,
    mode_shape,
    potential_term,
    schrodinger_residual,
    solve_by_matching,
    solve_spectrum,
)

UNIT = WellConfig()
SEED = 20240824


def report(num, name, ok):
    print(f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {name}")
    assert ok, f"criterion {num} ({name}) failed"


def seeded_packet(rng, max_modes):
    n = rng.randint(2, max_modes)
    coeffs = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)]
    return WavePacket.of(UNIT, coeffs, normalize=True)


def test_criterion_01_vpsi_identity():
    ok = True
    for n in range(1, 11):
        d = potential_term(UNIT, mode_shape(UNIT, n))
        k = n * math.pi
        c = UNIT.kinetic_factor * math.sqrt(2.0)
        expected = {0.0: c * k, 1.0: -c * k * math.cos(k)}
        ok &= d.pieces == () and len(d.atoms) == 2
        for atom in d.atoms:
            want = expected[atom.anchor]
            got = dc.atom_weight(atom)
            ok &= abs(got - want) <= 1e-12 * abs(want)
    report(1, "VPsi yields exactly the two closed-form edge deltas", ok)


def test_criterion_02_residual_gate():
    ok = True
    for n in range(1, 11):
        k = n * math.pi
        rep = schrodinger_residual(UNIT, mode_shape(UNIT, n),
                                   UNIT.kinetic_factor * k * k)
        ok &= rep.passes
    for k in (1.0, 2.0, 4.0):
        rep = schrodinger_residual(UNIT, SmoothExpr.sine(1.0, k),
                                   UNIT.kinetic_factor * k * k)
        ok &= (not rep.passes) and rep.c2_divergent
    ok &= solve_spectrum(UNIT, EnergySign.ZERO, 10) == []
    ok &= solve_spectrum(UNIT, EnergySign.NEGATIVE, 10) == []
    report(2, "residual passes eigenstates, fails non-quantized k", ok)


def test_criterion_03_solver_equivalence():
    direct = solve_spectrum(UNIT, EnergySign.POSITIVE, 50)
    matched = solve_by_matching(UNIT, 50)
    ok = len(direct) == len(matched) == 50
    for a, b in zip(direct, matched):
        ok &= a.n == b.n and a.k == b.k == a.n * math.pi
        ok &= abs(a.energy - b.energy) <= 1e-12 * abs(a.energy)
    report(3, "substitution and matching spectra identical to n=50", ok)


def test_criterion_04_jump_values():
    ok = True
    for n in range(1, 21):
        j0, jL = edge_jumps(UNIT, n)  # raises on route disagreement > 1e-10
        k = n * math.pi
        amp = math.sqrt(2.0)
        ok &= abs(j0 - amp * k) <= 1e-10
        ok &= abs(jL + amp * k * math.cos(k)) <= 1e-10
    report(4, "edge jumps match closed form through both routes", ok)


def test_criterion_05_half_delta_convention():
    left = Distribution.of([], [DeltaAtom(0.0, 0, SmoothExpr.constant(1.0))])
    right = Distribution.of([], [DeltaAtom(1.0, 0, SmoothExpr.constant(1.0))])
    ok = (dc.integrate(left, 0.0, 1.0) == 0.5
          and dc.integrate(right, 0.0, 1.0) == 0.5)
    report(5, "edge deltas integrate to exactly one half over the well", ok)


def test_criterion_06_ehrenfest_identity():
    rng = random.Random(SEED)
    ok = True
    for _ in range(100):
        p = seeded_packet(rng, 16)
        for i in range(50):
            t = 2.0 * i / 49.0
            rate = momentum_rate(p, t)
            ok &= ehrenfest_residual(p, t) <= 1e-12 * max(1.0, abs(rate))
    report(6, "Ehrenfest residual is rounding noise for 100 packets", ok)


def test_criterion_07_oracle_agreement():
    p = WavePacket.of(UNIT, [2**-0.5, 2**-0.5])
    ok = True
    for i in range(20):
        t = 2.0 * i / 19.0
        series = momentum_expectation(p, t)
        closed = (8.0 / 3.0) * math.sin(1.5 * math.pi**2 * t)
        _, quad = quadrature_oracle(p, t, 10_000)
        ok &= abs(quad - closed) <= 1e-6  # oracle vouches for the closed form
        ok &= abs(series - quad) <= 1e-6
        ok &= abs(series - closed) <= 1e-8
    report(7, "two-mode <p> agrees with quadrature and closed form", ok)


def test_criterion_08_finite_difference_consistency():
    rng = random.Random(SEED + 1)
    h = 1e-5
    ok = True
    # small packets keep the h^2 truncation term of the central
    # difference itself below the absolute 1e-5 budget
    for _ in range(10):
        p = seeded_packet(rng, 4)
        t = rng.uniform(0.0, 1.0)
        fd = (momentum_expectation(p, t + h)
              - momentum_expectation(p, t - h)) / (2.0 * h)
        ok &= abs(momentum_rate(p, t) - fd) <= 1e-5
    report(8, "momentum rate matches the central difference at h=1e-5", ok)


def test_criterion_09_finite_well_validity():
    fw = FiniteWellConfig(UNIT, 50.0)
    ok = True
    for sol in solve_bound_states(fw):
        ok &= abs(quantization_residual(fw, sol.k)) < 1e-8
        ok &= abs(sol.k**2 + sol.q**2 - fw.k_window**2) < 1e-8
        ok &= sol.parity in (1, -1)
        density = dc.multiply(sol.psi, dc.conjugate(sol.psi))
        norm = dc.integrate(density, -math.inf, math.inf).real
        ok &= abs(norm - 1.0) <= 1e-8
        try:
            recovered = potential_recovery(fw, sol)  # atoms/interior <= 1e-9
        except Exception:
            ok = False
            continue
        for x in (-0.5, 1.5):
            want = fw.depth * dc.evaluate(sol.psi, x)
            ok &= abs(dc.evaluate(recovered, x) - want) <= 1e-9 * fw.depth
    report(9, "V0=50 bound states pass invariants and recovery", ok)


def test_criterion_10_infinite_limit():
    rows = limit_study(UNIT, 1, [1e2, 1e3, 1e4])
    gaps = [r.gap for r in rows]
    ok = all(g > 0 for g in gaps) and gaps[0] > gaps[1] > gaps[2]
    for a, b in zip(gaps, gaps[1:]):
        ok &= abs(b / a - 10.0**-0.5) <= 0.2 * 10.0**-0.5
    target = math.sqrt(2.0) * math.pi
    errs = [abs(r.edge_slope - target) for r in rows]
    ok &= errs[0] > errs[1] > errs[2]
    ok &= errs[-1] / target < 0.05
    report(10, "deep-well gaps and edge slope approach the hard wall", ok)


def test_criterion_11_cli_determinism(tmp_path):
    packet = tmp_path / "packet.json"
    r = 1.0 / math.sqrt(2.0)
    packet.write_text(json.dumps({"coeffs": [{"re": r}, {"re": r}]}))
    cases = [
        ["spectrum", "--n-max", "5", "--method", "both"],
        ["residual", "--k", repr(math.pi), "--amp-sin", repr(math.sqrt(2.0)),
         "--energy", repr(math.pi**2 / 2.0)],
        ["ehrenfest", "--packet", str(packet), "--steps", "3",
         "--grid", "2000"],
        ["finite", "--v0", "50.0"],
        ["finite", "--v0-list", "100,1000", "--n", "1"],
        ["sample", "--kind", "vpsi", "--points", "11"],
    ]
    ok = True
    for fmt in ("csv", "json"):
        for i, argv in enumerate(cases):
            p1 = tmp_path / f"{fmt}{i}a"
            p2 = tmp_path / f"{fmt}{i}b"
            common = ["--seed", str(SEED), "--format", fmt]
            ok &= main(argv + common + ["--out", str(p1)]) in (0, 3)
            ok &= main(argv + common + ["--out", str(p2)]) in (0, 3)
            ok &= p1.read_bytes() == p2.read_bytes()
    report(11, "every CLI command is byte-identical across reruns", ok)
