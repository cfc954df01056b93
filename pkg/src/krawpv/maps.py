"""Birational map registry and randomized-exact verification machinery.

Maps are stored in the blow-up convention: the forward data expresses the
*source* chart coordinates as rational expressions in the *target* chart
coordinates (plus t and parameters), e.g. q = center + u*v, p = center + v.
Composition is iterated substitution; correctness of each map is certified
by the Jacobian pushforward check: transporting the source vector field
through the map must reproduce the target system exactly at random rational
points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .expr import Const, EvaluationDivisionError, Expr, Sym, syms
from .sampling import MAX_RESAMPLES_PER_POINT, CaseResult, Sampler, SamplingExhausted
from .systems import PlanarSystem, get_system

t, n, NN, al = syms("t n N alpha")

PARAMS = ("t", "n", "N", "alpha")


class MapError(Exception):
    pass


class ChartMismatchError(MapError):
    pass


@dataclass(frozen=True)
class BirationalMap:
    """source coords expressed in target coords (+ t, n, N, alpha)."""

    id: str
    source_coords: Tuple[str, str]
    target_coords: Tuple[str, str]
    forward: Mapping[str, Expr]
    # optional displayed inverse: target coords in terms of source coords
    inverse: Optional[Mapping[str, Expr]] = None

    def __post_init__(self):
        if set(self.forward) != set(self.source_coords):
            raise MapError(f"{self.id}: forward must bind exactly the source coords")
        if self.inverse is not None and set(self.inverse) != set(self.target_coords):
            raise MapError(f"{self.id}: inverse must bind exactly the target coords")


def apply_map(m: BirationalMap, env: Mapping[str, Fraction]) -> Dict[str, Fraction]:
    """Image of a target-chart point (env binds target coords and params)."""
    return {name: e.evaluate(env) for name, e in m.forward.items()}


def compose_maps(maps: Sequence[BirationalMap], composite_id: str = "") -> BirationalMap:
    """Iterated substitution; maps are listed in substitution order.

    maps[0] expresses the outermost coordinates; each subsequent map must
    have its source chart equal to the previous map's target chart (twists
    reuse the same chart names on both sides).
    """
    if not maps:
        raise MapError("empty composition")
    cur = dict(maps[0].forward)
    for prev, m in zip(maps, maps[1:]):
        if tuple(prev.target_coords) != tuple(m.source_coords):
            raise ChartMismatchError(
                f"cannot compose {prev.id} -> {m.id}: "
                f"{prev.target_coords} vs {m.source_coords}"
            )
        cur = {k: e.subs(m.forward) for k, e in cur.items()}
    return BirationalMap(
        composite_id or "*".join(m.id for m in maps),
        maps[0].source_coords,
        maps[-1].target_coords,
        cur,
    )


# ---------------------------------------------------------------------------
# map catalogue
# ---------------------------------------------------------------------------

def _build_maps() -> Dict[str, BirationalMap]:
    reg: Dict[str, BirationalMap] = {}

    def add(mid, src, tgt, forward, inverse=None):
        if mid in reg:
            raise MapError(f"duplicate map id {mid}")
        reg[mid] = BirationalMap(mid, src, tgt, forward, inverse)

    def S(name):
        return Sym(name)

    # --- level-one blow-ups of the base chart -----------------------------
    u, v = S("u11"), S("v11")
    add("phi11", ("q", "p"), ("u11", "v11"), {"q": u * v, "p": v})
    U, V = S("U11"), S("V11")
    add("phi11_hat", ("q", "p"), ("U11", "V11"), {"q": V, "p": U * V})

    c2 = (1 + NN) / NN
    u, v = S("u21"), S("v21")
    add("phi21", ("q", "p"), ("u21", "v21"), {"q": c2 + u * v, "p": -c2 + v})
    U, V = S("U21"), S("V21")
    add("phi21_hat", ("q", "p"), ("U21", "V21"), {"q": c2 + V, "p": -c2 + U * V})

    c3 = (1 + NN - al) / NN
    u, v = S("u31"), S("v31")
    add("phi31", ("q", "p"), ("u31", "v31"), {"q": c3 + u * v, "p": -c3 + v})
    U, V = S("U31"), S("V31")
    add("phi31_hat", ("q", "p"), ("U31", "V31"), {"q": c3 + V, "p": -c3 + U * V})

    # alpha = 0 extra blow-up off the (u21, v21) chart
    tU, tV = S("tU22"), S("tV22")
    add("tilde_phi22", ("u21", "v21"), ("tU22", "tV22"),
        {"u21": -1 + tV, "v21": tU * tV})

    # blow-up of the (q, P) indeterminacy point
    U, V = S("U41"), S("V41")
    add("phi41_hat", ("q", "P"), ("U41", "V41"), {"q": n / NN + V, "P": U * V})

    # chart swaps
    add("phi_qP", ("q", "p"), ("q", "P"), {"q": S("q"), "p": 1 / S("P")})
    add("phi_Qp", ("q", "p"), ("Q", "p"), {"q": 1 / S("Q"), "p": S("p")})
    add("phi_QP", ("q", "p"), ("Q", "P"), {"q": 1 / S("Q"), "p": 1 / S("P")})

    # --- cascade resolving (Q, P) = (0, 0): first choice -------------------
    u, v = S("u51"), S("v51")
    add("phi51", ("Q", "P"), ("u51", "v51"), {"Q": u * v, "P": v})
    U, V = S("U52"), S("V52")
    add("phi52_hat", ("u51", "v51"), ("U52", "V52"), {"u51": V, "v51": U * V})
    add("tau52_hat", ("U52", "V52"), ("U52", "V52"),
        {"U52": 1 / S("U52"), "V52": S("V52")})
    # the printed factor centers -N/t and (-1-2N+n-t+alpha)/t do not compose
    # to the printed composite below; with denominators N (not t) the factors
    # reproduce the composite exactly and the composite wins the pushforward
    # onto the (u54, v54) system, see the decisions log
    u, v = S("u53"), S("v53")
    add("phi53", ("U52", "V52"), ("u53", "v53"),
        {"U52": -t / NN + u * v, "V52": v})
    u, v = S("u54"), S("v54")
    add("phi54", ("u53", "v53"), ("u54", "v54"),
        {"u53": (-1 - 2 * NN + n - t + al) / NN + u * v, "v53": v})

    den54 = v * (NN * u * v + al + n - 2 * NN - t - 1) - t
    Q, P = S("Q"), S("P")
    add("Phi54", ("Q", "P"), ("u54", "v54"),
        {"Q": NN * v**2 / den54, "P": NN * v / den54},
        inverse={
            "u54": (Q * (P * (-al - n + 2 * NN + t + 1) + NN) + t * P**2) / (NN * Q**2),
            "v54": Q / P,
        })
    # self-consistent N<->t-swapped variant: fails the pushforward; kept only
    # as a non-degeneracy control
    den54x = v * (t * u * v + al + n - 2 * NN - t - 1) - NN
    add("Phi54_tswap", ("Q", "P"), ("u54", "v54"),
        {"Q": t * v**2 / den54x, "P": t * v / den54x},
        inverse={
            "u54": (Q * (P * (-al - n + 2 * NN + t + 1) + t) + NN * P**2) / (t * Q**2),
            "v54": Q / P,
        })

    # --- cascade resolving (Q, P) = (0, 0): second choice -------------------
    u, v = S("u51b"), S("v51b")
    add("phi51b", ("Q", "P"), ("u51b", "v51b"), {"Q": u * v, "P": v})
    u, v = S("u52b"), S("v52b")
    add("phi52b", ("u51b", "v51b"), ("u52b", "v52b"), {"u51b": u * v, "v51b": v})
    add("tau52b", ("u52b", "v52b"), ("u52b", "v52b"),
        {"u52b": 1 / S("u52b"), "v52b": S("v52b")})
    u, v = S("u53b"), S("v53b")
    add("phi53b", ("u52b", "v52b"), ("u53b", "v53b"),
        {"u52b": -NN / t + u * v, "v52b": v})
    u, v = S("u54b"), S("v54b")
    add("phi54b_f", ("u53b", "v53b"), ("u54b", "v54b"),
        {"u53b": (-1 - 2 * NN + n - t + al) / t + u * v, "v53b": v})

    den54b = v * (al + n - 2 * NN + t * u * v - t - 1) - NN
    add("Phi54b", ("Q", "P"), ("u54b", "v54b"),
        {"Q": t * v**2 / den54b, "P": v},
        inverse={
            "u54b": ((-al - n + 2 * NN + t + 1) * P + NN) / (t * P**2) + 1 / Q,
            "v54b": P,
        })

    u, v = S("u55b"), S("v55b")
    add("phi55b", ("u54b", "v54b"), ("u55b", "v55b"),
        {"u54b": u * v, "v54b": 1 / v})
    u, v = S("u56b"), S("v56b")
    add("phi56b", ("u55b", "v55b"), ("u56b", "v56b"),
        {"u55b": u * v, "v55b": 1 / v})

    # fourth-iteration cascade off (u56b, v56b)
    u, v = S("u57b"), S("v57b")
    add("phi57b", ("u56b", "v56b"), ("u57b", "v57b"),
        {"u56b": 1 / (u * v), "v56b": v})
    u, v = S("u58b"), S("v58b")
    add("phi58b", ("u57b", "v57b"), ("u58b", "v58b"), {"u57b": u * v, "v57b": v})
    add("tau58b", ("u58b", "v58b"), ("u58b", "v58b"),
        {"u58b": 1 / S("u58b"), "v58b": S("v58b")})
    u, v = S("u59b"), S("v59b")
    add("phi59b", ("u58b", "v58b"), ("u59b", "v59b"),
        {"u58b": NN / t + u * v, "v58b": v})
    u, v = S("u510b"), S("v510b")
    # printed factor center reads (1+2N-n+t+alpha)/t; the alpha sign there is
    # a typo -- the minus-alpha version reproduces the printed composite and
    # wins the pushforward, see the decisions log
    add("phi510b_f", ("u59b", "v59b"), ("u510b", "v510b"),
        {"u59b": (1 + 2 * NN - n + t - al) / t + u * v, "v59b": v})
    add("phi510b_f_printed", ("u59b", "v59b"), ("u510b", "v510b"),
        {"u59b": (1 + 2 * NN - n + t + al) / t + u * v, "v59b": v})

    u56 = S("u56b")
    add("Phi510b", ("u56b", "v56b"), ("u510b", "v510b"),
        {"u56b": (v * (-al - n + 2 * NN + t * u * v + t + 1) + NN) / (t * v**2),
         "v56b": v},
        inverse={
            "u510b": u56 + (-NN + (-1 - 2 * NN + n - t + al) * S("v56b")) / (t * S("v56b")**2),
            "v510b": S("v56b"),
        })

    # printed as v510b = U11*V11, but only the reciprocal form passes the
    # pushforward and closes the five-factor decomposition, see decisions log
    U, V = S("U11"), S("V11")
    add("psi11_hat", ("u510b", "v510b"), ("U11", "V11"),
        {"u510b": V, "v510b": 1 / (U * V)})
    add("psi11_hat_printed", ("u510b", "v510b"), ("U11", "V11"),
        {"u510b": V, "v510b": U * V})

    # --- iterated regularisation off the (q, P) cascade ---------------------
    u, v = S("u42"), S("v42")
    add("phi42", ("U41", "V41"), ("u42", "v42"),
        {"U41": 1 / (u * v), "V41": v})

    u, v = S("u43a"), S("v43a")
    add("phi43a", ("u42", "v42"), ("u43a", "v43a"),
        {"u42": u * v, "v42": -n / NN + v})
    u, v = S("u43b"), S("v43b")
    add("phi43b", ("u42", "v42"), ("u43b", "v43b"),
        {"u42": -(1 + NN) / NN + u * v, "v42": (1 + NN - n) / NN + v})
    u, v = S("u43c"), S("v43c")
    add("phi43c", ("u42", "v42"), ("u43c", "v43c"),
        {"u42": (-1 - NN + al) / NN + u * v, "v42": (1 + NN - n - al) / NN + v})

    U, V = S("U11"), S("V11")
    add("varphi11_hat", ("u42", "v42"), ("U11", "V11"),
        {"u42": U * V, "v42": -n / NN + V})
    U, V = S("U21"), S("V21")
    add("varphi21_hat", ("u42", "v42"), ("U21", "V21"),
        {"u42": -(1 + NN) / NN + U * V, "v42": (1 + NN - n) / NN + V})
    U, V = S("U31"), S("V31")
    add("varphi31_hat", ("u42", "v42"), ("U31", "V31"),
        {"u42": (-1 - NN + al) / NN + U * V, "v42": (1 + NN - n - al) / NN + V})

    # --- blow-ups to the polynomial systems ---------------------------------
    U, V = S("U12"), S("V12")
    add("phi12_hat", ("U11", "V11"), ("U12", "V12"),
        {"U11": -1 + V, "V11": (1 + NN) / NN + U * V})
    U, V = S("U22"), S("V22")
    add("phi22_hat", ("U21", "V21"), ("U22", "V22"),
        {"U21": -1 + V, "V21": -(1 + NN) / NN + U * V})
    U, V = S("U32"), S("V32")
    add("phi32_hat", ("U31", "V31"), ("U32", "V32"),
        {"U31": -1 + V, "V31": al / NN + U * V})
    u, v = S("u55"), S("v55")
    add("phi55_poly", ("u54", "v54"), ("u55", "v55"),
        {"u54": -1 + n / NN + u * v, "v54": -1 + v})
    u, v = S("u12b"), S("v12b")
    add("phi12b", ("u11", "v11"), ("u12b", "v12b"),
        {"u11": -1 + u, "v11": -(1 + NN) / NN + u * v})

    return reg


_MAPS: Optional[Dict[str, BirationalMap]] = None


def map_registry() -> Dict[str, BirationalMap]:
    global _MAPS
    if _MAPS is None:
        _MAPS = _build_maps()
    return _MAPS


def get_map(map_id: str) -> BirationalMap:
    try:
        return map_registry()[map_id]
    except KeyError:
        raise MapError(f"unknown map id {map_id!r}") from None


# (source system, map, target system) triples certified by pushforward
PUSHFORWARD_TRIPLES: Tuple[Tuple[str, str, str], ...] = (
    ("original", "phi11", "uv11"),
    ("original", "phi11_hat", "UV11"),
    ("original", "phi21", "uv21"),
    ("original", "phi21_hat", "UV21"),
    ("original", "phi31", "uv31"),
    ("original", "phi31_hat", "UV31"),
    ("uv21", "tilde_phi22", "tildeUV22"),
    ("original", "phi_qP", "original_qP"),
    ("original", "phi_Qp", "original_Qp"),
    ("original", "phi_QP", "original_QP"),
    ("original_qP", "phi41_hat", "UV41"),
    ("original_QP", "Phi54", "uv54"),
    ("original_QP", "Phi54b", "uv54b"),
    ("UV41", "phi42", "uv42"),
    ("uv42", "phi43a", "uv43a"),
    ("uv42", "phi43b", "uv43b"),
    ("uv42", "phi43c", "uv43c"),
    ("uv42", "varphi11_hat", "UV11"),
    ("uv42", "varphi21_hat", "UV21"),
    ("uv42", "varphi31_hat", "UV31"),
    ("uv54b", "phi55b", "uv55b"),
    ("uv55b", "phi56b", "uv56b"),
    ("uv56b", "Phi510b", "uv510b"),
    ("uv510b", "psi11_hat", "UV11"),
    ("UV11", "phi12_hat", "UV12"),
    ("UV21", "phi22_hat", "UV22"),
    ("UV31", "phi32_hat", "UV32"),
    ("uv54", "phi55_poly", "uv55"),
    ("uv11", "phi12b", "uv12b"),
)


# named cascades whose composite must match a catalogued closed form
CASCADES: Dict[str, Tuple[Tuple[str, ...], str]] = {
    "cascade54": (("phi51", "phi52_hat", "tau52_hat", "phi53", "phi54"), "Phi54"),
    "cascade54b": (("phi51b", "phi52b", "tau52b", "phi53b", "phi54b_f"), "Phi54b"),
    "cascade510b": (("phi57b", "phi58b", "tau58b", "phi59b", "phi510b_f"), "Phi510b"),
}


@dataclass(frozen=True)
class IndeterminacyPoint:
    id: str
    system_id: str
    coords: Mapping[str, Expr]  # chart coord -> Expression in params
    alpha_fixed: Optional[Fraction] = None


INDETERMINACY_POINTS: Tuple[IndeterminacyPoint, ...] = (
    IndeterminacyPoint("P1", "original",
                       {"q": Const(Fraction(0)), "p": Const(Fraction(0))}),
    IndeterminacyPoint("P2", "original",
                       {"q": (1 + NN) / NN, "p": -(1 + NN) / NN}),
    IndeterminacyPoint("P3", "original",
                       {"q": (1 + NN - al) / NN, "p": -(1 + NN - al) / NN}),
    IndeterminacyPoint("P4", "original_qP",
                       {"q": n / NN, "P": Const(Fraction(0))}),
    IndeterminacyPoint("P5", "original_QP",
                       {"Q": Const(Fraction(0)), "P": Const(Fraction(0))}),
    IndeterminacyPoint("P22_tilde", "uv21",
                       {"u21": Const(Fraction(-1)), "v21": Const(Fraction(0))},
                       alpha_fixed=Fraction(0)),
)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _draw_params(sampler: Sampler, alpha_fixed: Optional[Fraction]):
    env = sampler.draw(PARAMS)
    if alpha_fixed is not None:
        env["alpha"] = Fraction(alpha_fixed)
    return env


def _alpha_constraint(*systems: PlanarSystem) -> Optional[Fraction]:
    vals = {s.alpha_fixed for s in systems if s.alpha_fixed is not None}
    if len(vals) > 1:
        raise MapError("incompatible alpha constraints")
    return vals.pop() if vals else None


def pushforward_check(
    source_id: str,
    map_id: str,
    target_id: str,
    sampler: Sampler,
    samples: int = 50,
) -> CaseResult:
    """Chain-rule transport of the source field must match the target field.

    With source coords x = F(z, t), the flow satisfies
    J_F(z) z' + dF/dt = rhs_source(x), so z' = J^{-1}(rhs_source - dF/dt)
    must equal rhs_target(z) exactly at every sampled rational point.
    """
    source = get_system(source_id)
    target = get_system(target_id)
    m = get_map(map_id)
    case_id = f"pushforward:{source_id}--{map_id}-->{target_id}"
    if tuple(m.source_coords) != tuple(source.chart):
        return CaseResult(case_id, "FAIL", failures=[f"{map_id} source chart != {source_id}"])
    if tuple(m.target_coords) != tuple(target.chart):
        return CaseResult(case_id, "FAIL", failures=[f"{map_id} target chart != {target_id}"])
    alpha_fixed = _alpha_constraint(source, target)

    z1, z2 = target.chart
    f1 = m.forward[source.chart[0]]
    f2 = m.forward[source.chart[1]]
    d11, d12 = f1.diff(z1), f1.diff(z2)
    d21, d22 = f2.diff(z1), f2.diff(z2)
    ft1, ft2 = f1.diff("t"), f2.diff("t")

    case = CaseResult(case_id, "PASS")
    done = 0
    attempts = 0
    while done < samples:
        if attempts > MAX_RESAMPLES_PER_POINT * samples:
            raise SamplingExhausted(case.id)
        attempts += 1
        env = _draw_params(sampler, alpha_fixed)
        env.update(sampler.draw(target.chart))
        try:
            x1, x2 = f1.evaluate(env), f2.evaluate(env)
            senv = dict(env)
            senv[source.chart[0]] = x1
            senv[source.chart[1]] = x2
            r1, r2 = source.evaluate_rhs(senv)
            a, b = d11.evaluate(env), d12.evaluate(env)
            c, d = d21.evaluate(env), d22.evaluate(env)
            det = a * d - b * c
            if det == 0:
                sampler.resamples += 1
                continue
            b1 = r1 - ft1.evaluate(env)
            b2 = r2 - ft2.evaluate(env)
            z1p = (d * b1 - b * b2) / det
            z2p = (a * b2 - c * b1) / det
            w1, w2 = target.evaluate_rhs(env)
        except (ZeroDivisionError, EvaluationDivisionError):
            sampler.resamples += 1
            continue
        done += 1
        if (z1p, z2p) != (w1, w2):
            case.status = "FAIL"
            case.failures.append(
                f"sample {done}: transported {(z1p, z2p)} != target {(w1, w2)}"
            )
            case.residual = "nonzero"
    case.samples = done
    case.resamples = sampler.resamples
    return case


def verify_inverse(map_id: str, sampler: Sampler, samples: int = 50) -> CaseResult:
    """forward∘inverse and inverse∘forward are the identity at random points."""
    m = get_map(map_id)
    if m.inverse is None:
        raise MapError(f"{map_id} has no catalogued inverse")
    case = CaseResult(f"inverse:{map_id}", "PASS")
    done = 0
    attempts = 0
    while done < samples:
        if attempts > MAX_RESAMPLES_PER_POINT * samples:
            raise SamplingExhausted(case.id)
        attempts += 1
        env = sampler.draw(PARAMS + tuple(m.target_coords))
        try:
            src = apply_map(m, env)
            back_env = dict(env)
            for k in m.target_coords:
                del back_env[k]
            back_env.update(src)
            tgt = {k: e.evaluate(back_env) for k, e in m.inverse.items()}
            # and the other direction, from the recovered target point
            fwd_env = dict(env)
            fwd_env.update(tgt)
            src2 = apply_map(m, fwd_env)
        except (ZeroDivisionError, EvaluationDivisionError):
            sampler.resamples += 1
            continue
        done += 1
        ok = all(tgt[k] == env[k] for k in m.target_coords) and src2 == src
        if not ok:
            case.status = "FAIL"
            case.failures.append(f"sample {done}: round-trip mismatch")
            case.residual = "nonzero"
    case.samples = done
    case.resamples = sampler.resamples
    return case


def verify_cascade(cascade_id: str, sampler: Sampler, samples: int = 50) -> CaseResult:
    """The factor composition equals the catalogued closed-form composite."""
    factor_ids, composite_id = CASCADES[cascade_id]
    composed = compose_maps([get_map(f) for f in factor_ids])
    closed = get_map(composite_id)
    return _maps_agree(
        f"cascade:{cascade_id}=={composite_id}", composed, closed, sampler, samples
    )


def _maps_agree(case_id, m1, m2, sampler, samples, rename=None) -> CaseResult:
    """Exact agreement of two maps' forward data at random target points.

    ``rename`` translates m1's target coords into m2's before evaluating m2.
    """
    if tuple(m1.source_coords) != tuple(m2.source_coords) and rename is None:
        raise ChartMismatchError(f"{case_id}: source charts differ")
    case = CaseResult(case_id, "PASS")
    done = 0
    attempts = 0
    while done < samples:
        if attempts > MAX_RESAMPLES_PER_POINT * samples:
            raise SamplingExhausted(case_id)
        attempts += 1
        env = sampler.draw(PARAMS + tuple(m1.target_coords))
        env2 = env
        if rename:
            env2 = {rename.get(k, k): val for k, val in env.items()}
        try:
            a = {k: e.evaluate(env) for k, e in m1.forward.items()}
            b = {k: e.evaluate(env2) for k, e in m2.forward.items()}
        except (ZeroDivisionError, EvaluationDivisionError):
            sampler.resamples += 1
            continue
        done += 1
        keys = set(a)
        if rename:
            keys = set(a) & set(b)
        if any(a[k] != b[k] for k in keys):
            case.status = "FAIL"
            case.failures.append(f"sample {done}: {a} != {b}")
            case.residual = "nonzero"
    case.samples = done
    case.resamples = sampler.resamples
    return case


# decomposition statements: LHS map == composition (substitution order)
DECOMPOSITIONS: Dict[str, Tuple[str, Tuple[str, ...]]] = {
    "hat11_via_qP": ("phi11_hat", ("phi_qP", "phi41_hat", "phi42", "varphi11_hat")),
    "hat21_via_qP": ("phi21_hat", ("phi_qP", "phi41_hat", "phi42", "varphi21_hat")),
    "hat31_via_qP": ("phi31_hat", ("phi_qP", "phi41_hat", "phi42", "varphi31_hat")),
    "hat11_via_QP": ("phi11_hat",
                     ("phi_QP", "Phi54b", "phi55b", "phi56b", "Phi510b", "psi11_hat")),
}

# the extra blow-up factors of the qP route equal the bridge maps after renaming
BRIDGE_RENAMES: Dict[str, Tuple[str, str, Dict[str, str]]] = {
    "phi43a==varphi11_hat": ("phi43a", "varphi11_hat", {"u43a": "U11", "v43a": "V11"}),
    "phi43b==varphi21_hat": ("phi43b", "varphi21_hat", {"u43b": "U21", "v43b": "V21"}),
    "phi43c==varphi31_hat": ("phi43c", "varphi31_hat", {"u43c": "U31", "v43c": "V31"}),
}


def verify_decomposition(name: str, sampler: Sampler, samples: int = 50) -> CaseResult:
    lhs_id, chain = DECOMPOSITIONS[name]
    composite = compose_maps([get_map(f) for f in chain])
    lhs = get_map(lhs_id)
    return _maps_agree(f"decomposition:{name}", lhs, composite, sampler, samples)


def verify_bridge_rename(name: str, sampler: Sampler, samples: int = 50) -> CaseResult:
    a_id, b_id, rename = BRIDGE_RENAMES[name]
    return _maps_agree(
        f"bridge:{name}", get_map(a_id), get_map(b_id), sampler, samples, rename=rename
    )


def verify_indeterminacy(
    point: IndeterminacyPoint, sampler: Sampler, samples: int = 50
) -> CaseResult:
    """Numerator and denominator of some rhs component both vanish at the point."""
    sys = get_system(point.system_id)
    case = CaseResult(f"indeterminacy:{point.id}@{point.system_id}", "PASS")
    done = 0
    attempts = 0
    while done < samples:
        if attempts > MAX_RESAMPLES_PER_POINT * samples:
            raise SamplingExhausted(case.id)
        attempts += 1
        env = _draw_params(sampler, point.alpha_fixed)
        try:
            for coord, e in point.coords.items():
                env[coord] = e.evaluate(env)
            hits = []
            for num, den in (
                (sys.rhs1_num, sys.rhs1_den),
                (sys.rhs2_num, sys.rhs2_den),
            ):
                hits.append(num.evaluate(env) == 0 and den.evaluate(env) == 0)
        except (ZeroDivisionError, EvaluationDivisionError):
            sampler.resamples += 1
            continue
        done += 1
        if not any(hits):
            case.status = "FAIL"
            case.failures.append(f"sample {done}: no simultaneous zero at {env}")
            case.residual = "nonzero"
    case.samples = done
    case.resamples = sampler.resamples
    return case
