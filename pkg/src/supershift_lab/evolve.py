"""Closed-form Schrodinger evolutions of the prototype superoscillating datum.

Free particle:
    psi_N(x, t) = sum_k C_k(N, a) exp(i h_k x - i h_k**2 t),   h_k = 1 - 2k/N
Harmonic oscillator:
    psi_N(x, t) = (cos t)**-1/2 exp(-i x**2 tan(t) / 2)
                  * sum_k C_k(N, a) exp(i h_k x / cos t - i h_k**2 tan(t) / 2)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

import mpmath
from mpmath import mp

from .errors import DomainError, SingularTimeError
from .numkernel import AUTO, PrecisionPolicy, ensure_finite, mp_hex, mpf_exact, working_bits
from .parallel import ordered_map
from .reports import ConvergenceReport, describe_range
from .superosc import coefficient_mass, coefficients

SINGULAR_GUARD = 1e-6
POTENTIALS = ("free", "harmonic")


@dataclass(frozen=True)
class EvolutionPoint:
    t: float
    x: float
    a: float
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("N must be >= 1")


def _check_time(t: float):
    if abs(math.cos(t)) <= SINGULAR_GUARD:
        raise SingularTimeError(f"|cos t| <= {SINGULAR_GUARD:g} at t = {t!r}")


def _bits(p: EvolutionPoint, policy: PrecisionPolicy) -> int:
    # real (x, t): every term has modulus |C_k|, so only the coefficient mass cancels
    return working_bits(p.N, math.log2(max(coefficient_mass(float(p.a)), 1.0)), policy)


def _phase_sum(p: EvolutionPoint, x_factor, t_factor, bits: int):
    """``sum_k C_k exp(i h_k x_factor - i h_k**2 t_factor)`` at ``bits``."""
    N = p.N
    cs = coefficients(N, Fraction(p.a), bits)
    terms = []
    for k, c in enumerate(cs):
        if c == 0:
            continue
        h = mpf_exact(Fraction(N - 2 * k, N))
        terms.append(c * mp.expj(h * x_factor - h * h * t_factor))
    return mpmath.mpc(mp.fsum(terms))


def free_psiN(p: EvolutionPoint, policy: PrecisionPolicy = AUTO) -> mpmath.mpc:
    bits = _bits(p, policy)
    with mp.workprec(bits):
        return ensure_finite(_phase_sum(p, mpmath.mpf(p.x), mpmath.mpf(p.t), bits))


def free_limit(a, t, x) -> complex:
    """``exp(i (a x - a**2 t))``."""
    with mp.workprec(113):
        a, t, x = mpmath.mpf(a), mpmath.mpf(t), mpmath.mpf(x)
        return complex(mp.expj(a * x - a * a * t))


def _harmonic_prefactor(t, x):
    # principal branch; continuous for t in (-pi/2, pi/2)
    return mp.sqrt(mp.cos(t)) ** -1 * mp.expj(-x * x * mp.tan(t) / 2)


def harmonic_psiN(p: EvolutionPoint, policy: PrecisionPolicy = AUTO) -> mpmath.mpc:
    _check_time(p.t)
    bits = _bits(p, policy)
    with mp.workprec(bits):
        t, x = mpmath.mpf(p.t), mpmath.mpf(p.x)
        c = mp.cos(t)
        s = _phase_sum(p, x / c, mp.tan(t) / 2, bits)
        return ensure_finite(mpmath.mpc(_harmonic_prefactor(t, x) * s))


def harmonic_limit(a, t, x) -> complex:
    """``(cos t)**-1/2 exp(-i x**2 tan(t)/2 - i a**2 tan(t)/2 + i a x / cos t)``."""
    _check_time(t)
    with mp.workprec(113):
        a, t, x = mpmath.mpf(a), mpmath.mpf(t), mpmath.mpf(x)
        return complex(_harmonic_prefactor(t, x) * mp.expj(-a * a * mp.tan(t) / 2 + a * x / mp.cos(t)))


def psiN(potential: str, p: EvolutionPoint, policy: PrecisionPolicy = AUTO) -> mpmath.mpc:
    if potential == "free":
        return free_psiN(p, policy)
    if potential == "harmonic":
        return harmonic_psiN(p, policy)
    raise DomainError(f"unknown potential {potential!r}")


def limit(potential: str, a, t, x) -> complex:
    if potential == "free":
        return free_limit(a, t, x)
    if potential == "harmonic":
        return harmonic_limit(a, t, x)
    raise DomainError(f"unknown potential {potential!r}")


@dataclass(frozen=True)
class EvolutionSample:
    potential: str
    N: int
    t: float
    x: float
    value: complex
    abs_err: float
    value_hex: tuple = ("", "")


def _sample(job) -> EvolutionSample:
    potential, a, t, x, N, policy = job
    raw = psiN(potential, EvolutionPoint(t, x, a, N), policy)
    v = complex(raw)
    return EvolutionSample(potential, N, t, x, v, abs(v - limit(potential, a, t, x)),
                           (mp_hex(raw.real), mp_hex(raw.imag)))


def evolution_samples(potential: str, a, t_grid: Sequence[float], x_grid: Sequence[float],
                      N_ladder: Sequence[int], policy: PrecisionPolicy = AUTO,
                      jobs: int = 1) -> List[EvolutionSample]:
    if potential not in POTENTIALS:
        raise DomainError(f"unknown potential {potential!r}")
    if potential == "harmonic":
        for t in t_grid:
            _check_time(t)
    jobs_ = [(potential, a, t, x, N, policy) for N in N_ladder for t in t_grid for x in x_grid]
    return ordered_map(_sample, jobs_, jobs)


def evolution_convergence(potential: str, a, t_grid: Sequence[float], x_grid: Sequence[float],
                          N_ladder: Sequence[int], policy: PrecisionPolicy = AUTO,
                          jobs: int = 1) -> ConvergenceReport:
    """sup over the ``(t, x)`` grid of ``|psi_N - limit|`` along the ladder."""
    if not t_grid or not x_grid or not N_ladder:
        raise DomainError("grids and ladder must be nonempty")
    samples = evolution_samples(potential, a, t_grid, x_grid, N_ladder, policy, jobs)
    per = len(t_grid) * len(x_grid)
    errors = [max(s.abs_err for s in samples[i * per:(i + 1) * per]) for i in range(len(N_ladder))]
    bits = max(_bits(EvolutionPoint(0.0, 0.0, a, N), policy) for N in N_ladder)
    return ConvergenceReport(
        N_ladder=list(N_ladder), sup_errors=errors,
        grid={"t": describe_range(t_grid), "x": describe_range(x_grid), "a": float(a),
              "potential": potential},
        bits_used=bits, label=f"{potential} evolution a={float(a)!r}",
    )
