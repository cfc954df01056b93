"""Float-mode numerical integration of the catalogued systems and reductions.

Wraps an adaptive embedded Runge-Kutta 4(5) pair with dense output around
compiled right-hand sides.  Singular guards watch every catalogued
denominator and abort the integration before the state reaches a singular
locus.  Trajectories compare against the exact oracle and export as CSV.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp

from .expr import Expr, compile_float
from .sampling import CaseResult
from .systems import PlanarSystem, ScalarODE2

Scalar = Union[int, float, Fraction]


class IntegrationError(Exception):
    pass


class SingularGuardError(IntegrationError):
    """A catalogued denominator came within the guard distance of zero."""


@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = np.inf
    singular_guard: float = 1e-6

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise IntegrationError("tolerances must be positive")
        if self.singular_guard < 0:
            raise IntegrationError("guard distance must be nonnegative")


@dataclass
class Trajectory:
    """Dense-output solution samples of a two-component state."""

    labels: Tuple[str, ...]
    ts: np.ndarray
    states: np.ndarray  # shape (len(labels), len(ts))
    dense: Optional[Callable[[float], np.ndarray]] = None

    def __call__(self, t: float) -> np.ndarray:
        if self.dense is not None:
            return np.atleast_1d(self.dense(t))
        idx = int(np.argmin(np.abs(self.ts - t)))
        return self.states[:, idx]

    @property
    def t0(self) -> float:
        return float(self.ts[0])

    @property
    def t1(self) -> float:
        return float(self.ts[-1])

    def endpoint(self) -> np.ndarray:
        return self.states[:, -1]


def _param_floats(params: Mapping[str, Scalar]) -> Dict[str, float]:
    return {k: float(v) for k, v in params.items()}


def _compiled_pair(e1: Expr, e2: Expr, names: Sequence[str]):
    return compile_float(e1, names), compile_float(e2, names)


def _run(
    rhs, t0: float, t1: float, state0, cfg: IntegratorConfig, events, labels
) -> Trajectory:
    y0 = np.asarray([float(s) for s in state0], dtype=float)
    if t0 == t1:
        ts = np.asarray([t0])
        return Trajectory(tuple(labels), ts, y0.reshape(-1, 1),
                          dense=lambda t: y0)
    sol = solve_ivp(
        rhs, (t0, t1), y0, method="RK45", dense_output=True,
        rtol=cfg.rtol, atol=cfg.atol, max_step=cfg.max_step, events=events,
    )
    if sol.status == 1:
        raise SingularGuardError(
            f"denominator within {cfg.singular_guard} of zero near t = "
            f"{float(sol.t[-1])}"
        )
    if not sol.success:
        raise IntegrationError(sol.message)
    return Trajectory(tuple(labels), sol.t, sol.y, dense=sol.sol)


def _guard_events(dens: Sequence, guard: float):
    events = []
    for den in dens:
        def ev(t, s, _den=den):
            return abs(_den(t, s)) - guard

        ev.terminal = True
        events.append(ev)
    return events


def integrate_planar(
    system: PlanarSystem,
    state0: Sequence[Scalar],
    t0: float,
    t1: float,
    params: Mapping[str, Scalar],
    cfg: IntegratorConfig = IntegratorConfig(),
) -> Trajectory:
    """Integrate a catalogued planar system with denominator guards."""
    pf = _param_floats(params)
    names = list(system.chart) + ["t"] + sorted(pf)
    f1, f2 = _compiled_pair(system.rhs1, system.rhs2, names)
    d1f, d2f = _compiled_pair(system.rhs1_den, system.rhs2_den, names)

    def rhs(t, s):
        args = (s[0], s[1], t, *(pf[k] for k in sorted(pf)))
        return (f1(*args), f2(*args))

    def den_args(fn):
        return lambda t, s: fn(s[0], s[1], t, *(pf[k] for k in sorted(pf)))

    events = _guard_events([den_args(d1f), den_args(d2f)], cfg.singular_guard)
    return _run(rhs, float(t0), float(t1), state0, cfg, events, system.chart)


def integrate_ode2(
    ode: ScalarODE2,
    y0: Scalar,
    yp0: Scalar,
    t0: float,
    t1: float,
    params: Mapping[str, Scalar],
    cfg: IntegratorConfig = IntegratorConfig(),
) -> Trajectory:
    """Integrate a second-order reduction as the first-order (y, y') system."""
    pf = _param_floats(params)
    if ode.alpha_fixed is not None:
        pf["alpha"] = float(ode.alpha_fixed)
    names = ["y", "yp", "t"] + sorted(pf)
    f = compile_float(ode.rhs, names)

    def rhs(t, s):
        return (s[1], f(s[0], s[1], t, *(pf[k] for k in sorted(pf))))

    # guard against the structural singularities y in {0, +-1} of the charts
    def make_guard(level):
        def ev(t, s):
            return abs(s[0] - level) - cfg.singular_guard

        ev.terminal = True
        return ev

    events = [make_guard(v) for v in (0.0, 1.0, -1.0)]
    labels = (ode.reduce_coord, ode.reduce_coord + "'")
    return _run(rhs, float(t0), float(t1), (y0, yp0), cfg, events, labels)


def ode2_jet(ode: ScalarODE2, traj: Trajectory, t: float,
             params: Mapping[str, Scalar]) -> Tuple[float, float, float, float]:
    """(t, y, y', y'') at a sample time, with y'' completed from the ODE."""
    pf = _param_floats(params)
    if ode.alpha_fixed is not None:
        pf["alpha"] = float(ode.alpha_fixed)
    yv, ypv = (float(x) for x in traj(t))
    env = {"y": yv, "yp": ypv, "t": float(t), **pf}
    return float(t), yv, ypv, float(ode.rhs.evaluate(env))


def integrate_pv(params, t0: float, t1: float, y0: float, yp0: float,
                 cfg: IntegratorConfig = IntegratorConfig()) -> Trajectory:
    """Integrate the fifth Painlevé equation itself (float parameters)."""
    from .painleve import PV_RHS  # local import to avoid a cycle

    pe = {k: float(v) for k, v in params.as_env().items()}
    names = ["y", "yp", "t"] + sorted(pe)
    f = compile_float(PV_RHS, names)

    def rhs(t, s):
        return (s[1], f(s[0], s[1], t, *(pe[k] for k in sorted(pe))))

    def make_guard(level):
        def ev(t, s):
            return abs(s[0] - level) - cfg.singular_guard

        ev.terminal = True
        return ev

    events = [make_guard(v) for v in (0.0, 1.0)]
    return _run(rhs, t0, t1, (y0, yp0), cfg, events, ("y", "y'"))


def compare_trajectories(
    a: Trajectory,
    b: Callable[[float], Sequence[float]],
    tol: float,
    times: Optional[Sequence[float]] = None,
    case_id: str = "trajectory_compare",
) -> CaseResult:
    """Max relative deviation of b from a at sample times; PASS iff < tol."""
    case = CaseResult(case_id, "PASS")
    ts = list(times) if times is not None else [float(t) for t in a.ts]
    worst = 0.0
    for tv in ts:
        va = np.asarray(a(tv), dtype=float)
        vb = np.asarray([float(x) for x in b(tv)], dtype=float)
        dev = float(np.max(np.abs(va - vb) / np.maximum(1.0, np.abs(va))))
        worst = max(worst, dev)
        case.samples += 1
        if dev >= tol:
            case.status = "FAIL"
            case.failures.append(f"t = {tv}: relative deviation {dev} >= {tol}")
    case.residual = repr(worst)
    return case


def trajectory_csv(traj: Trajectory, extra: Optional[np.ndarray] = None) -> str:
    """CSV export: header t,coord1,coord2[,d1,d2], 17 significant digits."""
    ncomp = traj.states.shape[0]
    header = ["t", "coord1", "coord2"][: 1 + ncomp]
    if extra is not None:
        header += ["d1", "d2"][: extra.shape[0]]
    lines = [",".join(header)]
    for i, tv in enumerate(traj.ts):
        row = [tv] + [traj.states[j, i] for j in range(ncomp)]
        if extra is not None:
            row += [extra[j, i] for j in range(extra.shape[0])]
        lines.append(",".join(format(float(x), ".17g") for x in row))
    return "\n".join(lines) + "\n"


def convergence_errors(
    system: PlanarSystem,
    state0: Sequence[Scalar],
    t0: float,
    t1: float,
    params: Mapping[str, Scalar],
    rtols: Sequence[float] = (1e-5, 1e-7, 1e-9),
    ref_rtol: float = 1e-12,
) -> List[float]:
    """Endpoint errors against a tight reference run, one per tolerance rung."""
    ref = integrate_planar(system, state0, t0, t1, params,
                           IntegratorConfig(rtol=ref_rtol, atol=ref_rtol * 1e-2))
    ref_end = ref.endpoint()
    errs = []
    for rt in rtols:
        traj = integrate_planar(system, state0, t0, t1, params,
                                IntegratorConfig(rtol=rt, atol=rt * 1e-2))
        errs.append(float(np.max(np.abs(traj.endpoint() - ref_end))))
    return errs
