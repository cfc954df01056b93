"""Hamiltonian forms of the polynomial-chart systems and of the base system.

Each entry pairs a Hamiltonian function H with a catalogued planar system and
certifies, by exact evaluation at random rational points, that

    prefactor * rhs1 == dH/d(coord2)   and   prefactor * rhs2 == -dH/d(coord1).

The prefactor is 1 for the polynomial charts and 1/(p+q) for the weighted
form of the base (q, p) system.  Only coordinate derivatives are compared,
so H is determined up to an arbitrary function of t; invariance under adding
t^3 is part of the test battery.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

from .expr import Const, EvaluationDivisionError, Expr, Sym, syms
from .sampling import MAX_RESAMPLES_PER_POINT, CaseResult, Sampler, SamplingExhausted
from .systems import SingularLocusError, get_system

t, n, NN, al = syms("t n N alpha")

_ONE = Const(Fraction(1))


class HamiltonianError(Exception):
    pass


@dataclass(frozen=True)
class HamiltonianEntry:
    id: str
    system_id: str
    h: Expr  # rational in the chart coordinates, t, and (n, N, alpha)
    prefactor: Expr = _ONE

    @property
    def chart(self):
        return get_system(self.system_id).chart


def _build() -> Dict[str, HamiltonianEntry]:
    reg: Dict[str, HamiltonianEntry] = {}

    def add(entry: HamiltonianEntry):
        if entry.id in reg:
            raise ValueError(f"duplicate Hamiltonian id {entry.id}")
        reg[entry.id] = entry

    # the displayed form omits a factor V on the final term and the -alpha*U/t
    # summand; this corrected H is the unique (up to f(t)) primitive of the
    # system's first equation whose U-derivative also generates the second
    U, V = syms("U12 V12")
    add(HamiltonianEntry(
        "H12", "UV12",
        V * (NN * U * (V * (n - 2 * NN - 2) - NN * U * (V - 1) ** 2
                       + al - n + 2 * NN - t + 2)) / (NN * t)
        - (NN + 1) * (-n + NN + 1) * V / (NN * t)
        - al * U / t,
    ))
    # the display exactly as printed, kept as a non-degeneracy control
    add(HamiltonianEntry(
        "H12_displayed", "UV12",
        V * (NN * U * (V * (n - 2 * NN - 2) - NN * U * (V - 1) ** 2
                       + al - n + 2 * NN - t + 2)) / (NN * t)
        - (NN + 1) * (-n + NN + 1) / (NN * t),
    ))

    U, V = syms("U22 V22")
    add(HamiltonianEntry(
        "H22", "UV22",
        (NN * U * (-V * (-al + n + 2 * NN + t + 2) + V**2 * (n + NN + 1) - al + NN + 1)
         - n * (NN + 1) * V) / (NN * t)
        - NN**2 * U**2 * V * (V - 1) ** 2 / (NN * t),
    ))

    # displayed with (n - N - 1) squared and (V - 1) unsquared; only the
    # first power / squared combination generates the catalogued system
    # (the quadratic factor 3V^2 - 4V + 1 of the system is d[V(V-1)^2]/dV)
    U, V = syms("U32 V32")
    add(HamiltonianEntry(
        "H32", "UV32",
        (-NN * U * (V * (V * (al - n + NN + 1) - al + n - 2 * NN + t - 2) + NN + 1)
         + al * V * (n - NN - 1)) / (NN * t)
        - NN**2 * U**2 * V * (V - 1) ** 2 / (NN * t),
    ))
    # the two displayed variants, kept as non-degeneracy controls
    add(HamiltonianEntry(
        "H32_squared_term", "UV32",
        (-NN * U * (V * (V * (al - n + NN + 1) - al + n - 2 * NN + t - 2) + NN + 1)
         + al * V * (n - NN - 1) ** 2) / (NN * t)
        - NN**2 * U**2 * V * (V - 1) ** 2 / (NN * t),
    ))
    add(HamiltonianEntry(
        "H32_unsquared_factor", "UV32",
        (-NN * U * (V * (V * (al - n + NN + 1) - al + n - 2 * NN + t - 2) + NN + 1)
         + al * V * (n - NN - 1)) / (NN * t)
        - NN**2 * U**2 * V * (V - 1) / (NN * t),
    ))

    u, v = syms("u55 v55")
    add(HamiltonianEntry(
        "H55", "uv55",
        (v * (-u * (v * (n - 2 * NN) + NN * u * (v - 1) ** 2 + al - n + 2 * NN - t)
              + n - NN) + al * u) / t,
    ))

    u, v = syms("u12b v12b")
    add(HamiltonianEntry(
        "H12b", "uv12b",
        v * (u * (al + n - u * (NN * v + t) + NN * v + t) - al) / t + u / NN + u,
    ))

    q, p = syms("q p")
    add(HamiltonianEntry(
        "Hqp", "original",
        (NN * p * q * (al + n - 2 * NN - t - 2) + NN * p**2 * (n - NN * q)
         - q * ((NN + 1) * (-al + NN + 1) + NN * t * q)) / (NN * t * (p + q)),
        prefactor=1 / (p + q),
    ))

    return reg


_REG: Optional[Dict[str, HamiltonianEntry]] = None


def hamiltonian_registry() -> Dict[str, HamiltonianEntry]:
    global _REG
    if _REG is None:
        _REG = _build()
    return _REG


def get_hamiltonian(h_id: str) -> HamiltonianEntry:
    try:
        return hamiltonian_registry()[h_id]
    except KeyError:
        raise HamiltonianError(f"unknown Hamiltonian id {h_id!r}") from None


def hamiltonian_ids():
    return sorted(hamiltonian_registry().keys())


# the six catalogued pairings that must verify
VERIFIED_IDS = ("H12", "H22", "H32", "H55", "H12b", "Hqp")


def verify_hamiltonian(
    h_id: str,
    sampler: Sampler,
    samples: int = 50,
    h_offset: Optional[Expr] = None,
) -> CaseResult:
    """prefactor-weighted system rhs equals the canonical derivatives of H.

    ``h_offset`` (a pure function of t) may be added to H; the check must be
    invariant under it since only coordinate derivatives are compared.
    """
    entry = get_hamiltonian(h_id)
    system = get_system(entry.system_id)
    c1, c2 = system.chart
    h = entry.h if h_offset is None else entry.h + h_offset
    dh_dc2 = h.diff(c2)
    dh_dc1 = h.diff(c1)

    tag = "" if h_offset is None else "+offset"
    case = CaseResult(f"hamiltonian:{h_id}{tag}@{entry.system_id}", "PASS")
    names = [c1, c2, "t", "n", "N", "alpha"]
    done = 0
    attempts = 0
    while done < samples:
        if attempts > MAX_RESAMPLES_PER_POINT * samples:
            raise SamplingExhausted(case.id)
        attempts += 1
        env = sampler.draw(names, reject=lambda e: e["t"] == 0 or e["N"] == 0)
        try:
            r1, r2 = system.evaluate_rhs(env)
            w = entry.prefactor.evaluate(env)
            lhs1, lhs2 = w * r1, w * r2
            rhs1, rhs2 = dh_dc2.evaluate(env), -dh_dc1.evaluate(env)
        except (ZeroDivisionError, EvaluationDivisionError, SingularLocusError):
            sampler.resamples += 1
            continue
        done += 1
        case.samples = done
        if lhs1 != rhs1 or lhs2 != rhs2:
            case.status = "FAIL"
            case.failures.append(
                f"sample {done}: ({lhs1}, {lhs2}) != ({rhs1}, {rhs2})"
            )
    case.resamples = sampler.resamples
    return case
