"""Translation-commuting supershift checks and the operations that preserve the property.

The harness measures, for ``(a, a')`` on a grid of the admissible set
``{a' + [-1, 1] inside A, a + a' in A}``,

    | sum_nu C_nu(N, a) psi(a' + h_nu) - psi(a + a') |

over perturbed frequency rows ``h_nu``.  Only the configured finite list of
perturbation families is certified.

Sums with ``|a| > 1`` amplify sample errors by about ``|a|**N``, so every
sample is computed to the full working precision: convolutions of piecewise
polynomials are integrated piece by piece with adaptive quadrature, and
smooth inputs go through a fixed-node rule whose discrete operator is itself
a finite combination of translates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import mpmath
import numpy as np
from mpmath import mp
from mpmath.calculus.quadrature import GaussLegendre

from .bernstein import bernstein_weights
from .errors import DomainError
from .numkernel import (
    AUTO,
    FunctionSpec,
    Piece,
    PrecisionPolicy,
    as_piecewise,
    binomial,
    convolved_spec,
    ensure_finite,
    eval_function,
    eval_piece,
    poly_derivative,
    working_bits,
    _eval,
    _piece_index,
)
from .parallel import ordered_map
from .reports import THRESHOLDS, ladder_verdict, reduction_factor
from .sampling import EpsilonSpec
from .superosc import coefficient_mass, coefficients

BOUNDARY_MARGIN = 1e-9
DEFAULT_NODES = 64
# relative floor on the probe's fit residual: the probe's resolution.  Entire
# functions whose degree-9 Taylor remainder over the probe span stays below it
# (slowly varying ones) are not flagged; fast oscillators are beyond a degree-8 surrogate.
RESIDUAL_FLOOR = 2.0**-12


# ---------------------------------------------------------------------------
# domain and grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DomainA:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi - self.lo > 2:
            raise DomainError(f"interval ({self.lo}, {self.hi}) must be longer than 2")

    @classmethod
    def parse(cls, text: str) -> "DomainA":
        try:
            lo, hi = (float(v) for v in text.split(","))
        except ValueError:
            raise DomainError(f"bad interval {text!r}; expected lo,hi") from None
        return cls(lo, hi)

    @property
    def R(self) -> float:
        return self.hi - self.lo

    def contains(self, a: float, a_prime: float, margin: float = 0.0) -> bool:
        """Membership of ``(a, a')`` in the admissible set, ``margin`` away from its boundary."""
        return (self.lo + 1 + margin < a_prime < self.hi - 1 - margin
                and self.lo + margin < a + a_prime < self.hi - margin)

    def a_prime_values(self, step: float) -> List[float]:
        """Shifts on a lattice of spacing ``step`` centered in ``(lo + 1, hi - 1)``."""
        if step <= 0:
            raise DomainError("grid step must be positive")
        mid = (self.lo + self.hi) / 2
        half = (self.R - 2) / 2 - BOUNDARY_MARGIN
        k = math.floor(half / step)
        while k >= 0 and k * step >= half:
            k -= 1
        return [mid + j * step for j in range(-k, k + 1)] if k >= 0 else [mid]

    def grid(self, step: float) -> List[Tuple[float, float]]:
        """``(a, a')`` pairs: ``a`` on multiples of ``step``, boundary points excluded."""
        pts = []
        for ap in self.a_prime_values(step):
            k0 = math.ceil((self.lo - ap) / step)
            k1 = math.floor((self.hi - ap) / step)
            for k in range(k0, k1 + 1):
                a = k * step
                if self.contains(a, ap, BOUNDARY_MARGIN):
                    pts.append((a, ap))
        if not pts:
            raise DomainError("grid is empty; use a finer step")
        return pts

    def to_dict(self) -> dict:
        return {"A": [self.lo, self.hi], "R": self.R}


def rescaled_domain(dom: DomainA) -> Tuple[float, float]:
    """``B = Upsilon^-1(A)``."""
    return ((1 + dom.lo) / 2, (1 + dom.hi) / 2)


# ---------------------------------------------------------------------------
# convolution with a bump
# ---------------------------------------------------------------------------


def _bump(alpha, support):
    if alpha <= 0 or alpha >= support:
        return mp.zero
    return mp.exp(-1 / (alpha * (support - alpha)))


@lru_cache(maxsize=256)
def _bump_moments(support: float, degree: int, prec: int) -> Tuple:
    """Normalized moments ``int theta(alpha) alpha**k`` for ``k <= degree``."""
    with mp.workprec(prec + 20):
        s = mpmath.mpf(support)
        mid = s / 2
        f = lambda t: _bump(t, s)
        Z = mp.quad(f, [0, mid, s])
        out = [mpmath.mpf(1)]
        for k in range(1, degree + 1):
            out.append(mp.quad(lambda t: f(t) * t**k, [0, mid, s]) / Z)
        return Z, tuple(out)


@lru_cache(maxsize=64)
def _gl_rule(n: int) -> Tuple[Tuple[float, float], ...]:
    x, w = np.polynomial.legendre.leggauss(n)
    return tuple(zip(x.tolist(), w.tolist()))


def bump_mean(support: float, nodes: int = DEFAULT_NODES, exact: bool = True) -> float:
    """``int theta(alpha) alpha d alpha`` with ``int theta = 1``."""
    if exact:
        return float(_bump_moments(float(support), 1, 113)[1][1])
    s = support
    rule = [(s / 2 * (1 + x), s / 2 * w) for x, w in _gl_rule(nodes)]
    th = [w * math.exp(-1 / (t * (s - t))) for t, w in rule]
    return sum(v * t for v, (t, _) in zip(th, rule)) / sum(th)


def convolve(psi: FunctionSpec, eps_support: float, quadrature_nodes: int = DEFAULT_NODES) -> FunctionSpec:
    """``a -> int_0^eps theta(alpha) psi(a - alpha) d alpha`` with a normalized bump ``theta``."""
    if not eps_support > 0:
        raise DomainError("smoothing support must be positive")
    if quadrature_nodes < 8:
        raise DomainError("quadrature needs at least 8 nodes")
    if psi.domain is not None and not eps_support < (psi.domain[1] - psi.domain[0]) - 2:
        raise DomainError(f"support {eps_support} must be below R - 2 = "
                          f"{psi.domain[1] - psi.domain[0] - 2:g}")
    return convolved_spec(psi, eps_support, quadrature_nodes)


def _taylor_coeffs(piece: Piece, x, degree: int):
    """``c_k`` with ``p(x - alpha) = sum_k c_k alpha**k``."""
    out, re, im = [], piece.re, piece.im
    fact = 1
    for k in range(degree + 1):
        if k:
            re, im = poly_derivative(re), poly_derivative(im)
            fact *= k
        val = eval_piece(Piece(piece.end, re, im), x)
        out.append((-1) ** k * val / fact)
    return out


def _convolve_pieces(pieces: Sequence[Piece], s: float, x):
    """Exact-to-precision convolution of a piecewise polynomial with the normalized bump."""
    s_mp = mpmath.mpf(s)
    xr = x.real if isinstance(x, mpmath.mpc) else x
    cuts = sorted({mpmath.mpf(0), s_mp} | {xr - mpmath.mpf(p.end) for p in pieces[:-1]
                                          if 0 < xr - p.end < s})
    degree = max(p.degree for p in pieces)
    Z, moments = _bump_moments(float(s), degree, mp.prec)
    total = mpmath.mpc(0)
    for u, v in zip(cuts, cuts[1:]):
        piece = pieces[_piece_index(pieces, xr - (u + v) / 2)]
        if u == 0 and v == s_mp:
            cs = _taylor_coeffs(piece, x, piece.degree)
            total += mp.fsum(c * m for c, m in zip(cs, moments))
        else:
            with mp.workprec(mp.prec + 20):
                total += mp.quad(lambda t: _bump(t, s_mp) * eval_piece(piece, x - t), [u, v]) / Z
    return total


def _convolve_generic(inner: FunctionSpec, s: float, nodes: int, x):
    # fixed nodes in binary64, weights applied at the working precision
    rule = _gl_rule(nodes)
    s_mp = mpmath.mpf(s)
    acc, norm = [], []
    for t, w in rule:
        alpha = s_mp / 2 * (1 + mpmath.mpf(t))
        wt = mpmath.mpf(w) * _bump(alpha, s_mp)
        norm.append(wt)
        acc.append(wt * _eval(inner, x - alpha))
    return mp.fsum(acc) / mp.fsum(norm)


def convolution_value(f: FunctionSpec, x):
    """Value of a ``convolved`` spec at the current precision (called by the evaluator)."""
    pieces = as_piecewise(f.inner)
    if pieces is not None:
        return mpmath.mpc(_convolve_pieces(pieces, f.support, x))
    return mpmath.mpc(_convolve_generic(f.inner, f.support, f.nodes, x))


# ---------------------------------------------------------------------------
# multiplication by the identity and primitives
# ---------------------------------------------------------------------------


def multiply_by_identity(psi: FunctionSpec) -> FunctionSpec:
    return FunctionSpec("product_with_identity", inner=psi, domain=psi.domain)


def primitive(psi: FunctionSpec, a0: float) -> FunctionSpec:
    """``a -> int_{a0}^a psi``."""
    if psi.domain is not None and not psi.domain[0] <= a0 <= psi.domain[1]:
        raise DomainError(f"base point {a0} outside the domain {psi.domain}")
    return FunctionSpec("primitive", inner=psi, a0=float(a0), domain=psi.domain)


def primitive_value(f: FunctionSpec, x):
    inner = f.inner
    if inner.kind == "convolved":
        # the primitive of psi * theta is (primitive of psi) * theta up to a constant
        base = primitive(inner.inner, _anchor(inner.inner, f.a0))
        smoothed = FunctionSpec("convolved", inner=base, support=inner.support, nodes=inner.nodes)
        a0 = mpmath.mpf(f.a0)
        return mpmath.mpc(convolution_value(smoothed, x) - convolution_value(smoothed, a0))
    a0 = mpmath.mpf(f.a0)
    with mp.workprec(mp.prec + 20):
        val = mp.quad(lambda t: _eval(inner, t), [a0, x])
    return mpmath.mpc(val)


def _anchor(psi: FunctionSpec, a0: float) -> float:
    if psi.domain is None:
        return a0
    lo, hi = psi.domain
    return min(max(a0, lo), hi)


# ---------------------------------------------------------------------------
# stability identities
# ---------------------------------------------------------------------------


class Residual(float):
    """Nonnegative residual carrying the scale and tolerance it is judged against."""

    scale: float
    tolerance: float

    def __new__(cls, value: float, scale: float, tolerance: float):
        obj = super().__new__(cls, value)
        obj.scale, obj.tolerance = scale, tolerance
        return obj

    @property
    def ok(self) -> bool:
        return float(self) <= self.tolerance


def _rate_pair(N: int, eps_N: float):
    """``(1 - eps_N) / N`` and the level-``N-1`` rate ``(1 - eps^[1]) / (N - 1)``, which coincide."""
    r = (1 - mpmath.mpf(eps_N)) / N
    eps1 = 1 - (mpmath.mpf(N - 1) / N) * (1 - mpmath.mpf(eps_N))
    return r, (1 - eps1) / (N - 1)


def _check_identity_args(N: int, eps_N: float, bits: int):
    if N < 2:
        raise DomainError("the identities need N >= 2")
    if not 0 <= eps_N < 1:
        raise DomainError(f"eps_N = {eps_N} outside [0, 1)")
    if bits < 53:
        raise DomainError("need at least 53 bits")


def multiplication_recursion_residual(Psi: FunctionSpec, N: int, eps_N: float, b, b_prime,
                                      bits: int = 256) -> Residual:
    """``|LHS - RHS|`` of the recursion for ``Phi(b) = b Psi(b)``.

    LHS is the level-``N`` Bernstein sum of ``Phi``; RHS is
    ``(1 - eps_N) b * (level N-1 sum of Psi shifted by one rate step)
    + b' * (level N sum of Psi)``.
    """
    _check_identity_args(N, eps_N, bits)
    Phi = multiply_by_identity(Psi)
    with mp.workprec(bits):
        b, bp = mpmath.mpmathify(b), mpmath.mpmathify(b_prime)
        r, r1 = _rate_pair(N, eps_N)
        wN, wN1 = bernstein_weights(N, b), bernstein_weights(N - 1, b)
        phi = [eval_function(Phi, bp + nu * r, bits) for nu in range(N + 1)]
        psi = [eval_function(Psi, bp + nu * r, bits) for nu in range(N + 1)]
        shifted = [eval_function(Psi, bp + r + nu * r1, bits) for nu in range(N)]
        lhs = mp.fsum(w * v for w, v in zip(wN, phi))
        rhs = ((1 - mpmath.mpf(eps_N)) * b * mp.fsum(w * v for w, v in zip(wN1, shifted))
               + bp * mp.fsum(w * v for w, v in zip(wN, psi)))
        mass = mp.fsum(abs(w) for w in wN) * (1 + abs(b) + abs(bp))
        scale = float(mass * max([abs(v) for v in psi + shifted] + [mpmath.mpf(1)]))
        res = float(abs(lhs - rhs))
    return Residual(res, scale, 2.0 ** (16 - bits) * scale)


@lru_cache(maxsize=16)
def _gl_mp(degree: int, prec: int):
    return tuple(GaussLegendre(mp).calc_nodes(degree, prec))


def _xi_integral(Psi: FunctionSpec, start, step, bits: int, degree: int):
    """``int_0^1 Psi(start + step * xi) d xi``, split at the breakpoints of ``Psi``."""
    pieces = as_piecewise(Psi)
    cuts = [mpmath.mpf(0), mpmath.mpf(1)]
    if pieces is not None:
        for p in pieces[:-1]:
            xi = (mpmath.mpf(p.end) - start) / step
            if 0 < xi < 1:
                cuts.append(xi)
    cuts.sort()
    nodes = _gl_mp(degree, bits + 20)
    total = []
    for u, v in zip(cuts, cuts[1:]):
        half, mid = (v - u) / 2, (u + v) / 2
        for x, w in nodes:
            xi = mid + half * x
            # evaluate on the correct side of a breakpoint
            total.append(w * half * eval_function(Psi, start + step * xi, bits))
    return mp.fsum(total)


def primitive_derivative_residual(Psi: FunctionSpec, Phi: FunctionSpec, N: int, eps_N: float,
                                  b, b_prime0, bits: int = 256, degree: int = 3) -> Residual:
    """``|d/db B_N[Phi](b) - (1 - eps_N) sum_nu w^{N-1}_nu(b) int_0^1 Psi(...) d xi|``.

    The derivative of the Bernstein weights is taken in closed form.  The
    ``xi`` integral uses Gauss-Legendre with ``3 * 2**(degree-1)`` nodes per
    smooth sub-interval, exact for polynomial pieces of degree below twice
    that count; for other inputs the tolerance adds the change observed when
    the rule is refined once.
    """
    _check_identity_args(N, eps_N, bits)
    with mp.workprec(bits):
        b, bp = mpmath.mpmathify(b), mpmath.mpmathify(b_prime0)
        r, r1 = _rate_pair(N, eps_N)
        one_minus = 1 - b
        lhs_terms = []
        for nu in range(N + 1):
            d = mpmath.mpf(0)
            if nu:
                d += nu * b ** (nu - 1) * one_minus ** (N - nu)
            if nu < N:
                d -= (N - nu) * b**nu * one_minus ** (N - nu - 1)
            lhs_terms.append(binomial(N, nu) * d * eval_function(Phi, bp + nu * r, bits))
        lhs = mp.fsum(lhs_terms)
        w1 = bernstein_weights(N - 1, b)
        ints = [_xi_integral(Psi, bp + nu * r1, r, bits, degree) for nu in range(N)]
        rhs = (1 - mpmath.mpf(eps_N)) * mp.fsum(w * v for w, v in zip(w1, ints))
        mass = N * (abs(b) + abs(one_minus)) ** (N - 1)
        scale = float(mass * max([abs(v) for v in ints] + [mpmath.mpf(1)]))
        tol = 2.0 ** (16 - bits) * scale
        pieces = as_piecewise(Psi)
        exact_rule = pieces is not None and max(p.degree for p in pieces) < 3 * 2**degree
        if not exact_rule:
            finer = [_xi_integral(Psi, bp + nu * r1, r, bits, degree + 1) for nu in range(N)]
            rhs2 = (1 - mpmath.mpf(eps_N)) * mp.fsum(w * v for w, v in zip(w1, finer))
            tol += 4 * float(abs(rhs2 - rhs))
        res = float(abs(lhs - rhs))
    return Residual(res, scale, tol)


# ---------------------------------------------------------------------------
# TCSP harness
# ---------------------------------------------------------------------------


@dataclass
class SupershiftReport:
    domain: Dict
    grid: Dict
    N_ladder: List[int]
    families: List[str]
    per_family: Dict[str, List[float]]
    family_max: List[float]
    bits_used: int
    verdict: str = "fail"
    reduction_factor: float = 0.0
    thresholds: Dict = field(default_factory=lambda: dict(THRESHOLDS))
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.reduction_factor = reduction_factor(self.family_max)
        self.verdict = "pass" if ladder_verdict(self.N_ladder, self.family_max) else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        ladder = [{"N": N, "per_family": {lab: self.per_family[lab][i] for lab in self.families},
                   "family_max": self.family_max[i]} for i, N in enumerate(self.N_ladder)]
        red = None if math.isinf(self.reduction_factor) else self.reduction_factor
        return {"domain": self.domain, "grid": self.grid, "ladder": ladder,
                "verdict": self.verdict, "reduction_factor": red, "bits_used": self.bits_used,
                "thresholds": self.thresholds, "notes": self.notes}


@dataclass(frozen=True)
class _Unit:
    psi: FunctionSpec
    N: int
    eps_N: float
    a_prime: float
    a_values: Tuple[float, ...]
    policy: PrecisionPolicy


def _tcsp_bits(N: int, a_values: Sequence[float], policy: PrecisionPolicy) -> int:
    mass = max(coefficient_mass(a) for a in a_values)
    return working_bits(N, math.log2(max(mass, 1.0)), policy)


def _tcsp_unit(u: _Unit) -> Tuple[float, int]:
    bits = _tcsp_bits(u.N, u.a_values, u.policy)
    N = u.N
    with mp.workprec(bits):
        ap, e = mpmath.mpf(u.a_prime), mpmath.mpf(u.eps_N)
        samples = [eval_function(u.psi, ap + 1 - 2 * (nu + e * (N - nu)) / N, bits)
                   for nu in range(N + 1)]
        worst = 0.0
        for a in u.a_values:
            cs = coefficients(N, a, bits)
            s = mp.fsum(c * v for c, v in zip(cs, samples))
            ref = eval_function(u.psi, mpmath.mpf(a) + ap, bits)
            worst = max(worst, float(abs(ensure_finite(s) - ref)))
    return worst, bits


def tcsp_check(psi: FunctionSpec, dom: DomainA, grid: Sequence[Tuple[float, float]],
               N_ladder: Sequence[int], families: Sequence[EpsilonSpec],
               policy: PrecisionPolicy = AUTO, jobs: int = 1) -> SupershiftReport:
    """Per-family sup errors of the shifted superoscillating sums on ``grid``."""
    if not grid or not N_ladder or not families:
        raise DomainError("grid, ladder and family list must be nonempty")
    outside = [(a, ap) for a, ap in grid if not dom.contains(a, ap)]
    if outside:
        raise DomainError(f"{len(outside)} grid point(s) outside the admissible set, "
                          f"e.g. (a, a') = {outside[0]}")
    by_shift: Dict[float, List[float]] = {}
    for a, ap in grid:
        by_shift.setdefault(ap, []).append(a)
    units = [_Unit(psi, N, fam.at(N), ap, tuple(avals), policy)
             for N in N_ladder for fam in families for ap, avals in by_shift.items()]
    results = iter(ordered_map(_tcsp_unit, units, jobs))
    labels = [f.label for f in families]
    per_family: Dict[str, List[float]] = {lab: [] for lab in labels}
    bits_used = 0
    for _N in N_ladder:
        for lab in labels:
            worst = 0.0
            for _ in by_shift:
                err, bits = next(results)
                worst, bits_used = max(worst, err), max(bits_used, bits)
            per_family[lab].append(worst)
    fmax = [max(per_family[lab][i] for lab in labels) for i in range(len(N_ladder))]
    a_vals = [a for a, _ in grid]
    return SupershiftReport(
        domain=dom.to_dict(),
        grid={"points": len(grid), "a": [min(a_vals), max(a_vals)],
              "a_prime": [min(by_shift), max(by_shift)], "boundary_margin": BOUNDARY_MARGIN},
        N_ladder=list(N_ladder), families=labels, per_family=per_family, family_max=fmax,
        bits_used=bits_used,
        notes=["certifies only the listed perturbation families, not every sequence tending to 0"],
    )


# ---------------------------------------------------------------------------
# smoothed Kantorovich pipeline and the analyticity surrogate
# ---------------------------------------------------------------------------


def lift_to_frequency_line(g: FunctionSpec, domain: Tuple[float, float]) -> FunctionSpec:
    """``a -> g((1 + a) / 2)`` restricted to ``domain``."""
    lifted = FunctionSpec.rescaled(g, 0.5, 0.5)
    return FunctionSpec(lifted.kind, inner=lifted.inner, scale=lifted.scale, shift=lifted.shift,
                        domain=tuple(domain))


@dataclass
class AnalyticityProbe:
    """Surrogate for non-analyticity: a one-sided polynomial fit fails on the other side."""

    fit_interval: Tuple[float, float]
    test_interval: Tuple[float, float]
    degree: int
    points: int
    fit_residual: float
    misprediction: float
    ratio_required: float = 10.0
    surrogate: str = ("least-squares polynomial fit on one side, max error on the other side; "
                      "a numerical surrogate, not a proof of non-analyticity")

    @property
    def ratio(self) -> float:
        return self.misprediction / self.fit_residual

    @property
    def non_analytic(self) -> bool:
        return self.misprediction >= self.ratio_required * self.fit_residual


def analyticity_probe(psi: FunctionSpec, fit_interval: Tuple[float, float],
                      test_interval: Tuple[float, float], degree: int = 8,
                      points: int = 32) -> AnalyticityProbe:
    """Fit ``Re psi`` and ``Im psi`` with degree-``degree`` polynomials on ``points`` nodes."""
    xs = np.linspace(*fit_interval, points)
    ts = np.linspace(*test_interval, points)
    fx = np.array([complex(eval_function(psi, float(x), 113)) for x in xs])
    ft = np.array([complex(eval_function(psi, float(t), 113)) for t in ts])
    fit_err, pred_err = np.zeros(points), np.zeros(points)
    for part in (np.real, np.imag):
        poly = np.polynomial.Polynomial.fit(xs, part(fx), degree)
        fit_err = np.maximum(fit_err, np.abs(poly(xs) - part(fx)))
        pred_err = np.maximum(pred_err, np.abs(poly(ts) - part(ft)))
    scale = max(float(np.max(np.abs(fx))), 1.0)
    residual = max(float(np.max(fit_err)), RESIDUAL_FLOOR * scale)
    return AnalyticityProbe(tuple(fit_interval), tuple(test_interval), degree, points,
                            residual, float(np.max(pred_err)))


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def catalog() -> Dict[str, FunctionSpec]:
    """Built-in targets, all restrictions of entire functions."""
    return {
        "constant": FunctionSpec.constant(1),
        "linear": FunctionSpec.polynomial([0, 1]),
        "cubic": FunctionSpec.polynomial([Fraction(1, 2), -1, 0, Fraction(1, 3)]),
        "quintic": FunctionSpec.polynomial([0, 0, 1, 0, 0, Fraction(-1, 5)]),
        "exp_linear": FunctionSpec.exp_linear(0.3),
        "exp_imag": FunctionSpec.exp_linear(0.5j),
        "cos": FunctionSpec.named("cos", 0.7),
    }


# defaults of the smoothed two-branch pipeline: the loops of the lemniscates with
# c in [0.42, 0.58] reach past b = -0.15 and b = 1.15, so A0 = (-1.15, 1.15)
# keeps every admissible pair inside them; the support stays below R - 2 = 0.3
PIPELINE_RHO0 = 0.15
PIPELINE_SUPPORT = 0.28
PIPELINE_LADDER = (400, 800, 1600, 3200)
PIPELINE_FAMILIES = ("zero", "c_over_N:1")


def smoothed_pipeline(target, rho0: float = PIPELINE_RHO0, support: float = PIPELINE_SUPPORT,
                      nodes: int = DEFAULT_NODES) -> Tuple[FunctionSpec, DomainA]:
    """``psi0 = g((1 + a) / 2)`` on ``(-1 - rho0, 1 + rho0)`` smoothed by a bump of width ``support``.

    ``target`` is a :class:`~supershift_lab.kantorovich.PiecewiseTarget` with an
    exact glued form.  Returns the smoothed spec and its shrunken interval.
    """
    if target.glued is None:
        raise DomainError("the pipeline needs a polynomial two-branch target")
    lo, hi = -1 - rho0, 1 + rho0
    psi = convolve(lift_to_frequency_line(target.glued, (lo, hi)), support, nodes)
    return psi, DomainA(lo + support, hi)
