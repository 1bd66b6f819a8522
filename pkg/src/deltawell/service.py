"""HTTP front end: each experiment family as a stateless POST endpoint.

Request/response schemas are pydantic models; all computation is
delegated to the core modules.  Validation problems map to 4xx, internal
cross-check violations to 5xx, and physics-check failures stay 200 with
``passed``/``mismatch`` flags so clients can distinguish the three.
"""

from __future__ import annotations

from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import distcalc as dc
from . import ehrenfest as eh
from . import finitewell as fwm
from . import isw
from .errors import (
    DeltaWellError,
    InsufficientDepthError,
    InternalMismatchError,
    NormalizationError,
    RecoveryMismatchError,
)

RESIDUAL_EXIT_TOL = 1e-10
ORACLE_GAP_TOL = 1e-6

app = FastAPI(title="deltawell", version="0.1.0")


class Units(BaseModel):
    hbar: float = Field(1.0, gt=0)
    mass: float = Field(1.0, gt=0)
    width: float = Field(1.0, gt=0)

    def to_config(self) -> isw.WellConfig:
        return isw.WellConfig(self.hbar, self.mass, self.width)


class ComplexNumber(BaseModel):
    re: float = 0.0
    im: float = 0.0

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


# --- spectrum ---------------------------------------------------------------


class SpectrumRequest(BaseModel):
    units: Units = Units()
    n_max: int = Field(ge=1)
    method: Literal["direct", "matching", "both"] = "direct"


class SpectrumRow(BaseModel):
    n: int
    k: float
    energy: float
    jump_left: float
    jump_right: float
    agree: Optional[bool] = None


class SpectrumResponse(BaseModel):
    rows: list[SpectrumRow]
    mismatch: bool = False
    passed: bool = True


@app.post("/spectrum", response_model=SpectrumResponse)
def spectrum(req: SpectrumRequest) -> SpectrumResponse:
    cfg = req.units.to_config()
    try:
        if req.method == "matching":
            states = isw.solve_by_matching(cfg, req.n_max)
            other = None
        else:
            states = isw.solve_spectrum(cfg, isw.EnergySign.POSITIVE, req.n_max)
            other = (isw.solve_by_matching(cfg, req.n_max)
                     if req.method == "both" else None)
        rows = []
        mismatch = False
        for i, sol in enumerate(states):
            jl, jr = isw.edge_jumps(cfg, sol.n)
            agree = None
            if other is not None:
                o = other[i]
                agree = (o.n == sol.n and o.k == sol.k
                         and abs(o.energy - sol.energy)
                         <= 1e-12 * max(1.0, abs(sol.energy)))
                mismatch = mismatch or not agree
            rows.append(SpectrumRow(n=sol.n, k=sol.k, energy=sol.energy,
                                    jump_left=jl, jump_right=jr, agree=agree))
    except InternalMismatchError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    return SpectrumResponse(rows=rows, mismatch=mismatch, passed=not mismatch)


# --- residual ---------------------------------------------------------------


class ResidualRequest(BaseModel):
    units: Units = Units()
    k: float
    amp_sin: float = 0.0
    amp_cos: float = 0.0
    energy: float


class LimitValue(BaseModel):
    divergent: bool
    re: Optional[float] = None
    im: Optional[float] = None


class ResidualResponse(BaseModel):
    c0_max_coeff: float
    c1: LimitValue
    c2: LimitValue
    passes: bool
    passed: bool


def _limit_value(v: complex | None) -> LimitValue:
    if v is None:
        return LimitValue(divergent=True)
    return LimitValue(divergent=False, re=v.real, im=v.imag)


@app.post("/residual", response_model=ResidualResponse)
def residual(req: ResidualRequest) -> ResidualResponse:
    cfg = req.units.to_config()
    F = (dc.SmoothExpr.sine(req.amp_sin, req.k)
         + dc.SmoothExpr.cosine(req.amp_cos, req.k))
    report = isw.schrodinger_residual(cfg, F, req.energy)
    return ResidualResponse(
        c0_max_coeff=report.c0.max_abs_coeff(),
        c1=_limit_value(report.c1_limit),
        c2=_limit_value(report.c2_limit),
        passes=report.passes,
        passed=report.passes,
    )


# --- ehrenfest --------------------------------------------------------------


class EhrenfestRequest(BaseModel):
    units: Units = Units()
    coeffs: list[ComplexNumber] = Field(min_length=1)
    normalize: bool = False
    t0: float = 0.0
    t1: float = 1.0
    steps: int = Field(100, ge=1)
    oracle: bool = True
    grid: int = Field(10_000, ge=100)


class EhrenfestRow(BaseModel):
    t: float
    p_series: float
    dpdt_series: float
    dVdx_series: float
    residual: float
    p_quadrature: Optional[float] = None


class EhrenfestResponse(BaseModel):
    rows: list[EhrenfestRow]
    max_residual: float
    max_oracle_gap: Optional[float] = None
    passed: bool


@app.post("/ehrenfest", response_model=EhrenfestResponse)
def ehrenfest_run(req: EhrenfestRequest) -> EhrenfestResponse:
    cfg = req.units.to_config()
    try:
        packet = eh.WavePacket.of(cfg, [c.to_complex() for c in req.coeffs],
                                  normalize=req.normalize)
    except NormalizationError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    rows = []
    max_residual = 0.0
    max_gap = 0.0 if req.oracle else None
    for i in range(req.steps + 1):
        t = req.t0 + (req.t1 - req.t0) * i / req.steps
        p = eh.momentum_expectation(packet, t)
        rate = eh.momentum_rate(packet, t)
        grad = eh.potential_gradient_expectation(packet, t)
        res = abs(rate + grad)
        max_residual = max(max_residual, res)
        quad = None
        if req.oracle:
            _, quad = eh.quadrature_oracle(packet, t, req.grid)
            max_gap = max(max_gap, abs(quad - p))
        rows.append(EhrenfestRow(t=t, p_series=p, dpdt_series=rate,
                                 dVdx_series=grad, residual=res,
                                 p_quadrature=quad))
    passed = max_residual < RESIDUAL_EXIT_TOL and (
        max_gap is None or max_gap < ORACLE_GAP_TOL)
    return EhrenfestResponse(rows=rows, max_residual=max_residual,
                             max_oracle_gap=max_gap, passed=passed)


# --- finite well ------------------------------------------------------------


class FiniteRequest(BaseModel):
    units: Units = Units()
    v0: Optional[float] = None
    v0_list: Optional[list[float]] = None
    n: int = Field(1, ge=1)
    recovery: bool = True


class BoundStateRow(BaseModel):
    k: float
    q: float
    a: int
    A: float
    energy: float
    recovery_ok: Optional[bool] = None


class SweepRow(BaseModel):
    V0: float
    k: float
    gap: float
    edge_slope: float
    exterior_prob: float


class FiniteResponse(BaseModel):
    rows: list[BoundStateRow] = []
    sweep: list[SweepRow] = []
    passed: bool = True


@app.post("/finite", response_model=FiniteResponse)
def finite(req: FiniteRequest) -> FiniteResponse:
    cfg = req.units.to_config()
    if (req.v0 is None) == (req.v0_list is None):
        raise HTTPException(status_code=400,
                            detail="provide exactly one of v0, v0_list")
    if req.v0_list is not None:
        if any(v <= 0 for v in req.v0_list):
            raise HTTPException(status_code=400, detail="depths must be positive")
        try:
            study = fwm.limit_study(cfg, req.n, req.v0_list)
        except (InsufficientDepthError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except InternalMismatchError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        sweep = [SweepRow(V0=r.depth, k=r.k, gap=r.gap,
                          edge_slope=r.edge_slope,
                          exterior_prob=r.exterior_prob) for r in study]
        return FiniteResponse(sweep=sweep)
    if req.v0 <= 0:
        raise HTTPException(status_code=400, detail="V0 must be positive")
    fw = fwm.FiniteWellConfig(cfg, req.v0)
    try:
        states = fwm.solve_bound_states(fw)
    except InternalMismatchError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    rows = []
    passed = True
    for sol in states:
        ok = None
        if req.recovery:
            try:
                fwm.potential_recovery(fw, sol)
                ok = True
            except RecoveryMismatchError:
                ok = False
                passed = False
        rows.append(BoundStateRow(k=sol.k, q=sol.q, a=sol.parity, A=sol.norm,
                                  energy=fw.energy(sol.k), recovery_ok=ok))
    return FiniteResponse(rows=rows, passed=passed)


# --- samples ----------------------------------------------------------------


class SampleRequest(BaseModel):
    units: Units = Units()
    kind: Literal["eigenstate", "vpsi", "finite"] = "eigenstate"
    n: int = Field(1, ge=1)
    v0: Optional[float] = None
    points: int = Field(101, ge=2)
    x_min: Optional[float] = None
    x_max: Optional[float] = None


class SampleRow(BaseModel):
    x: float
    re: float
    im: float


class AtomReport(BaseModel):
    anchor: float
    order: int
    weight_re: float
    weight_im: float


class SampleResponse(BaseModel):
    rows: list[SampleRow]
    atoms: list[AtomReport]
    passed: bool = True


def _target_distribution(req: SampleRequest) -> tuple[dc.Distribution, float, float]:
    cfg = req.units.to_config()
    L = cfg.width
    if req.kind == "eigenstate":
        return isw.eigenstate(cfg, req.n).psi, 0.0, L
    if req.kind == "vpsi":
        return isw.potential_term(cfg, isw.mode_shape(cfg, req.n)), 0.0, L
    if req.v0 is None or req.v0 <= 0:
        raise HTTPException(status_code=400,
                            detail="finite sampling needs a positive v0")
    fw = fwm.FiniteWellConfig(cfg, req.v0)
    states = fwm.solve_bound_states(fw)
    if len(states) < req.n:
        raise HTTPException(
            status_code=400,
            detail=f"V0={req.v0} binds only {len(states)} states")
    return states[req.n - 1].psi, -L / 2.0, 3.0 * L / 2.0


@app.post("/sample", response_model=SampleResponse)
def sample(req: SampleRequest) -> SampleResponse:
    d, lo, hi = _target_distribution(req)
    if req.x_min is not None:
        lo = req.x_min
    if req.x_max is not None:
        hi = req.x_max
    if not lo < hi:
        raise HTTPException(status_code=400, detail="need x_min < x_max")
    rows = []
    for i in range(req.points):
        x = lo + (hi - lo) * i / (req.points - 1)
        piece = d.piece_covering(x)
        v = piece.expr.evaluate(x) if piece is not None else 0j
        rows.append(SampleRow(x=x, re=v.real, im=v.imag))
    atoms = []
    for atom in d.atoms:
        try:
            w = atom.weight()
        except DeltaWellError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        atoms.append(AtomReport(anchor=atom.anchor, order=atom.order,
                                weight_re=w.real, weight_im=w.imag))
    return SampleResponse(rows=rows, atoms=atoms)
