"""Piecewise-analytic targets whose Bernstein approximants split into two limits.

A target glues ``G_minus`` (left of 1/2) to ``G_plus`` (right of 1/2) with
matching values and different slopes.  Off the real segment the Bernstein
sums converge to ``G_minus`` inside the lemniscate loop around 0 and to
``G_plus`` inside the loop around 1.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import partial
from typing import List, Optional, Sequence

import mpmath
from mpmath import mp

from .bernstein import BernsteinParams, bernstein_sum, weight_log2_mass
from .errors import DegenerateError, DomainError, GlueError
from .numkernel import (
    AUTO,
    FunctionSpec,
    PrecisionPolicy,
    ensure_finite,
    eval_function,
    mp_hex,
    poly_derivative,
    poly_value_exact,
    working_bits,
)
from .parallel import ordered_map
from .regions import Loop, LoopRegion, classify, lemniscate_value
from .reports import ConvergenceReport
from .sampling import EpsilonSpec

HALF = Fraction(1, 2)
FINAL_TOLERANCE = 0.05
DEFAULT_ETA = 0.05
# relative tolerance of the glue test for targets without exact coefficients
_GLUE_RTOL = 2.0**-40


def _exact_value_and_slope(g: FunctionSpec):
    """``(G(1/2), G'(1/2))`` as exact complex pairs, or ``None`` when ``g`` has no exact form."""
    if g.kind != "piecewise_poly" or len(g.pieces) != 1:
        return None
    p = g.pieces[0]
    return ((poly_value_exact(p.re, HALF), poly_value_exact(p.im, HALF)),
            (poly_value_exact(poly_derivative(p.re), HALF),
             poly_value_exact(poly_derivative(p.im), HALF)))


def _numeric_value_and_slope(g: FunctionSpec):
    with mp.workprec(113):
        x = mpmath.mpf(0.5)
        v = eval_function(g, x, 113)
        if g.kind == "exp_linear":
            d = mpmath.mpc(g.lam) * v
        else:
            d = mp.diff(lambda t: eval_function(g, t, 113), x)
        return complex(v), complex(d)


@dataclass(frozen=True)
class PiecewiseTarget:
    G_minus: FunctionSpec
    G_plus: FunctionSpec
    #: exact piecewise polynomial ``g``; ``None`` for non-polynomial halves
    glued: Optional[FunctionSpec] = None

    def value(self, b, bits: int):
        """``g(b)``: ``G_minus`` for ``Re b < 1/2``, ``G_plus`` otherwise."""
        if self.glued is not None:
            return eval_function(self.glued, b, bits)
        key = b.real if isinstance(b, mpmath.mpc) else b
        side = self.G_minus if key < 0.5 else self.G_plus
        return eval_function(side, b, bits)

    def to_dict(self) -> dict:
        return {"G_minus": self.G_minus.to_dict(), "G_plus": self.G_plus.to_dict(),
                "switch": 0.5}


def make_target(G_minus, G_plus) -> PiecewiseTarget:
    """Validated glued target.

    ``G_minus``/``G_plus`` are coefficient lists (ascending powers) or
    :class:`FunctionSpec` instances (polynomial or ``exp_linear``).
    """
    specs = []
    for g in (G_minus, G_plus):
        if isinstance(g, FunctionSpec):
            specs.append(g)
        else:
            coeffs = list(g)
            if not coeffs:
                raise DomainError("target polynomials need at least one coefficient")
            specs.append(FunctionSpec.polynomial(coeffs))
    gm, gp = specs
    em, ep = _exact_value_and_slope(gm), _exact_value_and_slope(gp)
    if em is not None and ep is not None:
        if em[0] != ep[0]:
            raise GlueError(f"G_minus(1/2) = {_show(em[0])} but G_plus(1/2) = {_show(ep[0])}")
        if em[1] == ep[1]:
            raise DegenerateError("equal derivatives at 1/2: the glued target is analytic there")
        pm, pp = gm.pieces[0], gp.pieces[0]
        glued = FunctionSpec("piecewise_poly", pieces=(
            type(pm)(0.5, pm.re, pm.im), type(pp)(math.inf, pp.re, pp.im)))
        return PiecewiseTarget(gm, gp, glued)
    (vm, dm), (vp, dp) = _numeric_value_and_slope(gm), _numeric_value_and_slope(gp)
    scale = max(abs(vm), abs(vp), 1.0)
    if abs(vm - vp) > _GLUE_RTOL * scale:
        raise GlueError(f"G_minus(1/2) = {vm} but G_plus(1/2) = {vp}")
    if abs(dm - dp) <= _GLUE_RTOL * max(abs(dm), abs(dp), 1.0):
        raise DegenerateError("equal derivatives at 1/2: the glued target is analytic there")
    return PiecewiseTarget(gm, gp, None)


def _show(pair) -> str:
    re, im = pair
    return str(re) if im == 0 else f"{re}+{im}i"


# ---------------------------------------------------------------------------
# two-limit experiment
# ---------------------------------------------------------------------------


def loop_q(z, c_values: Sequence[float]) -> float:
    return max(lemniscate_value(c, z) for c in c_values)


def experiment_bits(N: int, z, q: float, policy: PrecisionPolicy = AUTO) -> int:
    """Weights cancel by ``(|z| + |1-z|)**N``; the error to resolve is about ``q**N``."""
    per_degree = weight_log2_mass(z)
    if 0 < q < 1:
        per_degree += math.log2(1 / q)
    return working_bits(N, per_degree, policy)


def bernstein_target(t: PiecewiseTarget, p: BernsteinParams, z, bits: int):
    with mp.workprec(bits):
        vals = [t.value(x, bits) for x in p.sample_points()]
        return ensure_finite(bernstein_sum(vals, mpmath.mpmathify(z)))


@dataclass(frozen=True)
class _Job:
    target: PiecewiseTarget
    N: int
    eps_N: float
    b_prime: float
    z: complex
    q: float
    policy: PrecisionPolicy


def _run_job(job: _Job):
    bits = experiment_bits(job.N, job.z, job.q, job.policy)
    p = BernsteinParams(job.N, job.eps_N, job.b_prime)
    val = bernstein_target(job.target, p, job.z, bits)
    with mp.workprec(bits):
        x = mpmath.mpmathify(job.z) + mpmath.mpf(job.b_prime)
        to_minus = abs(val - eval_function(job.target.G_minus, x, bits))
        to_plus = abs(val - eval_function(job.target.G_plus, x, bits))
    return complex(val), float(to_minus), float(to_plus), bits, (mp_hex(val.real), mp_hex(val.imag))


@dataclass
class TwoLimitReport:
    left: ConvergenceReport
    right: ConvergenceReport
    values_minus: List[complex]
    values_plus: List[complex]
    #: exact binary values of the sums, ``[re_hex, im_hex]``
    hex_minus: List[tuple]
    hex_plus: List[tuple]
    #: distance of the left-loop sums to ``G_plus`` (the wrong limit)
    wrong_limit_minus: List[float]
    #: distance of the right-loop sums to ``G_minus``
    wrong_limit_plus: List[float]
    z_minus: complex
    z_plus: complex
    b_prime: float
    eta: float
    q_minus: float
    q_plus: float
    eps: str
    verdict: str = "fail"
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.verdict = "pass" if self.left.passed and self.right.passed else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def separation(self, side: str = "minus") -> float:
        """Wrong-limit distance over right-limit distance at the last ladder entry."""
        if side == "minus":
            wrong, right = self.wrong_limit_minus[-1], self.left.sup_errors[-1]
        else:
            wrong, right = self.wrong_limit_plus[-1], self.right.sup_errors[-1]
        return math.inf if right == 0 else wrong / right

    def to_dict(self) -> dict:
        d = asdict(self)
        d["left"], d["right"] = self.left.to_dict(), self.right.to_dict()
        for key in ("values_minus", "values_plus"):
            d[key] = [[v.real, v.imag] for v in getattr(self, key)]
        for key in ("z_minus", "z_plus"):
            v = getattr(self, key)
            d[key] = [v.real, v.imag]
        return d


def check_loops(z_minus, z_plus, b_prime: float, eta: float = DEFAULT_ETA,
                samples: int = 11) -> List[float]:
    """Sampled ``c`` values; raises :class:`DomainError` when a point leaves its loop."""
    if not abs(b_prime) <= eta:
        raise DomainError(f"b' = {b_prime} outside [-eta, eta] with eta = {eta}")
    cs = LoopRegion(0.5, eta).c_range(samples)
    bad = []
    for c in cs:
        for z, want in ((z_minus, Loop.LEFT), (z_plus, Loop.RIGHT)):
            got = classify(c, z)
            if got != want:
                bad.append(f"c={c:g}: {complex(z)} is {got.value}, expected {want.value}")
    if bad:
        raise DomainError("; ".join(bad[:6]))
    return cs


def two_limit_experiment(t: PiecewiseTarget, z_minus, z_plus, b_prime: float,
                         N_ladder: Sequence[int], eps: EpsilonSpec = EpsilonSpec(),
                         policy: PrecisionPolicy = AUTO, eta: float = DEFAULT_ETA,
                         jobs: int = 1) -> TwoLimitReport:
    """Errors of ``B_N[g](z_minus)`` to ``G_minus`` and of ``B_N[g](z_plus)`` to ``G_plus``."""
    if not N_ladder:
        raise DomainError("empty ladder")
    z_minus, z_plus = complex(z_minus), complex(z_plus)
    cs = check_loops(z_minus, z_plus, b_prime, eta)
    q_m, q_p = loop_q(z_minus, cs), loop_q(z_plus, cs)
    work = []
    for N in N_ladder:
        e = eps.at(N)
        work.append(_Job(t, N, e, b_prime, z_minus, q_m, policy))
        work.append(_Job(t, N, e, b_prime, z_plus, q_p, policy))
    out = ordered_map(_run_job, work, jobs)
    left, right = out[0::2], out[1::2]
    grid = {"z_minus": [z_minus.real, z_minus.imag], "z_plus": [z_plus.real, z_plus.imag],
            "b_prime": b_prime, "eps": eps.label, "eta": eta}
    rep_l = ConvergenceReport(list(N_ladder), [r[1] for r in left], grid, max(r[3] for r in left),
                              label="left loop vs G_minus", final_tolerance=FINAL_TOLERANCE)
    rep_r = ConvergenceReport(list(N_ladder), [r[2] for r in right], grid,
                              max(r[3] for r in right),
                              label="right loop vs G_plus", final_tolerance=FINAL_TOLERANCE)
    return TwoLimitReport(
        left=rep_l, right=rep_r,
        values_minus=[r[0] for r in left], values_plus=[r[0] for r in right],
        hex_minus=[r[4] for r in left], hex_plus=[r[4] for r in right],
        wrong_limit_minus=[r[2] for r in left], wrong_limit_plus=[r[1] for r in right],
        z_minus=z_minus, z_plus=z_plus, b_prime=b_prime, eta=eta, q_minus=q_m, q_plus=q_p,
        eps=eps.label,
        notes=[f"loop membership checked for c in [{cs[0]:g}, {cs[-1]:g}] ({len(cs)} samples)"],
    )


def real_segment_errors(t: PiecewiseTarget, N_ladder: Sequence[int], grid: Sequence[float],
                        eps: EpsilonSpec = EpsilonSpec(), b_prime: float = 0.0) -> ConvergenceReport:
    """sup over ``grid`` in [0, 1] of ``|B_N[g](x) - g(x * (1 - eps_N) + b')|``.

    On [0, 1] the weights are a probability vector, so double-rounding-level
    precision suffices; 113 bits keeps the sums clean.
    """
    errors = []
    for N in N_ladder:
        p = BernsteinParams(N, eps.at(N), b_prime)
        worst = 0.0
        with mp.workprec(113):
            vals = [t.value(x, 113) for x in p.sample_points()]
            for x in grid:
                if not 0 <= x <= 1:
                    raise DomainError(f"real grid point {x} outside [0, 1]")
                xm = mpmath.mpf(x)
                ref = t.value(xm * (1 - mpmath.mpf(p.eps_N)) + p.b_prime, 113)
                worst = max(worst, float(abs(bernstein_sum(vals, xm) - ref)))
        errors.append(worst)
    return ConvergenceReport(list(N_ladder), errors, {"x": [min(grid), max(grid), len(grid)]},
                             113, label="real segment")


# |2b - 1|, glued at b = 1/2 from 1 - 2b and 2b - 1
abs_target = partial(make_target, [1, -2], [-1, 2])
