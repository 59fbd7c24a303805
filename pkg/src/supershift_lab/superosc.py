"""Superoscillating sequences built on regularly sampled frequency rows.

Two evaluations of the same trigonometric polynomial are provided: the
explicit frequency sum (cancellation-heavy) and the product closed form.  Their
agreement at matched precision is the module's master check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

import mpmath
from mpmath import libmp, mp

from .errors import DomainError
from .numkernel import AUTO, PrecisionPolicy, binomial_row, ensure_finite, mpf_exact, working_bits
from .reports import ConvergenceReport, describe_range
from .sampling import EpsilonSpec, FrequencyRow, frequencies

LN2 = math.log(2.0)
# bits of |T| deficit tolerated before the magnitude term is capped
_MAGNITUDE_CAP = 4096
# exact integer coefficients are used while numerators stay below this many bits
_EXACT_BITS_LIMIT = 1 << 14


@dataclass(frozen=True)
class TrigPolynomial:
    """``z -> sum_nu coefficients[nu] * exp(i * frequencies[nu] * z)``."""

    frequencies: Tuple
    coefficients: Tuple

    def __post_init__(self):
        if len(self.frequencies) != len(self.coefficients):
            raise DomainError("one coefficient per frequency")

    def __call__(self, z, bits: int = 53):
        with mp.workprec(bits):
            z = mpmath.mpmathify(z)
            terms = [mpmath.mpmathify(c) * mp.expj(mpf_exact(h) * z)
                     for h, c in zip(self.frequencies, self.coefficients)]
            return ensure_finite(mpmath.mpc(mp.fsum(terms)))


# ---------------------------------------------------------------------------
# coefficients C_nu(N, a)
# ---------------------------------------------------------------------------


def _halves(a) -> Tuple[int, int, int]:
    """Integers ``p, q, k`` with ``(1+a)/2 = p / 2**k`` and ``(1-a)/2 = q / 2**k``."""
    fa = Fraction(a)
    d = fa.denominator
    if d & (d - 1):
        raise ValueError("not dyadic")
    k = d.bit_length()  # 2 * d == 2**k
    return fa.numerator + d, d - fa.numerator, k


@lru_cache(maxsize=512)
def _coefficients_cached(N: int, a, prec: int) -> Tuple[mpmath.mpf, ...]:
    try:
        p, q, k = _halves(a)
    except ValueError:
        k = None
    if k is None or k * N > _EXACT_BITS_LIMIT:
        return _coefficients_rounded(N, a, prec)
    out = []
    row = binomial_row(N)
    qpow = 1
    ppows = [1] * (N + 1)
    for j in range(1, N + 1):
        ppows[j] = ppows[j - 1] * p
    for nu in range(N + 1):
        numer = row[nu] * ppows[N - nu] * qpow
        out.append(mp.make_mpf(libmp.from_man_exp(numer, -k * N, prec, "n")))
        qpow *= q
    return tuple(out)


def _coefficients_rounded(N: int, a, prec: int) -> Tuple[mpmath.mpf, ...]:
    # every factor is nonnegative or has fixed sign, so relative errors only add up:
    # 2 log2(N) guard bits cover the ~3N roundings per coefficient
    guard = 2 * max(N, 2).bit_length() + 8
    with mp.workprec(prec + guard):
        P, Q = mpf_exact((1 + Fraction(a)) / 2), mpf_exact((1 - Fraction(a)) / 2)
        ppow = [mpmath.mpf(1)] * (N + 1)
        qpow = [mpmath.mpf(1)] * (N + 1)
        for j in range(1, N + 1):
            ppow[j] = ppow[j - 1] * P
            qpow[j] = qpow[j - 1] * Q
        row = binomial_row(N)
        vals = [row[nu] * ppow[N - nu] * qpow[nu] for nu in range(N + 1)]
    with mp.workprec(prec):
        return tuple(+v for v in vals)


def coefficients(N: int, a, bits: int) -> Tuple[mpmath.mpf, ...]:
    """All ``C_nu(N, a)``, each exact rational rounded once to ``bits``."""
    if N < 1:
        raise DomainError("N must be >= 1")
    return _coefficients_cached(N, a, bits)


def coeff(N: int, nu: int, a, bits: int = 113) -> mpmath.mpc:
    if not 0 <= nu <= N:
        raise DomainError(f"nu = {nu} outside 0..{N}")
    return mpmath.mpc(coefficients(N, a, bits)[nu])


def coefficient_mass(a) -> float:
    """``|1+a|/2 + |1-a|/2``, the growth rate of ``sum_nu |C_nu(N, a)|``."""
    return abs(1 + a) / 2 + abs(1 - a) / 2


# ---------------------------------------------------------------------------
# T_N^eps[a](z): explicit sum and closed form
# ---------------------------------------------------------------------------


def _log2_abs_closed(N: int, eps_N: float, a, z: complex) -> float:
    with mp.workprec(64):
        z = mpmath.mpc(z)
        w = z * (1 - mpmath.mpf(eps_N)) / N
        u = mp.cos(w) + mpmath.mpc(0, 1) * mpf_exact(Fraction(a)) * mp.sin(w)
        if u == 0:
            return -math.inf
        return float(N * mp.log(abs(u), 2) + mpmath.mpf(eps_N) * z.imag / LN2)


def sum_bits(N: int, eps_N: float, a, z: complex, policy: PrecisionPolicy = AUTO) -> int:
    """Working precision shared by :func:`eval_sum` and :func:`eval_closed`.

    The cancellation budget is the coefficient mass, the exponential growth of
    the terms off the real axis, and the smallness of the result itself.
    """
    z = complex(z)
    lost = N * math.log2(max(coefficient_mass(float(a)), 1.0)) + abs(z.imag) / LN2
    mag = _log2_abs_closed(N, eps_N, a, z)
    lost += min(max(0.0, -mag), _MAGNITUDE_CAP)
    return working_bits(N, lost / N, policy)


def result_bits(N: int, eps_N: float, a, z: complex, policy: PrecisionPolicy = AUTO) -> int:
    """Bits of the returned value expected to be correct (the guard width in automatic mode)."""
    z = complex(z)
    bits = sum_bits(N, eps_N, a, z, policy)
    lost = N * math.log2(max(coefficient_mass(float(a)), 1.0)) + abs(z.imag) / LN2
    lost += min(max(0.0, -_log2_abs_closed(N, eps_N, a, z)), _MAGNITUDE_CAP)
    return bits - math.ceil(lost)


def eval_sum(N: int, eps_N: float, a, z, policy: PrecisionPolicy = AUTO) -> mpmath.mpc:
    """``sum_nu C_nu(N, a) exp(i h_nu z)`` over the regular row with perturbation ``eps_N``."""
    row = frequencies(N, eps_N)
    bits = sum_bits(N, eps_N, a, z, policy)
    return _eval_sum_row(row, a, z, bits)


def _eval_sum_row(row: FrequencyRow, a, z, bits: int) -> mpmath.mpc:
    N = row.N
    with mp.workprec(bits):
        z = mpmath.mpmathify(z)
        cs = coefficients(N, a, bits)
        e = mpmath.mpf(row.eps_N)
        terms = []
        for nu, c in enumerate(cs):
            if c == 0:
                continue
            h = 1 - 2 * (nu + e * (N - nu)) / N
            terms.append(c * mp.expj(h * z))
        return ensure_finite(mpmath.mpc(mp.fsum(terms)))


def _power(u, n: int):
    """Binary exponentiation at the current precision."""
    result = mpmath.mpc(1)
    while n:
        if n & 1:
            result *= u
        n >>= 1
        if n:
            u *= u
    return result


def eval_closed(N: int, eps_N: float, a, z, policy: PrecisionPolicy = AUTO) -> mpmath.mpc:
    """``exp(-i eps_N z) (cos(z (1-eps_N)/N) + i a sin(z (1-eps_N)/N))**N``.

    The phase sign follows from ``h_nu = (1 - eps_N)(1 - 2 nu / N) - eps_N``.
    """
    frequencies(N, eps_N)  # validates eps_N
    bits = sum_bits(N, eps_N, a, z, policy)
    return _eval_closed_bits(N, eps_N, a, z, bits)


def _eval_closed_bits(N: int, eps_N: float, a, z, bits: int) -> mpmath.mpc:
    with mp.workprec(bits + math.ceil(math.log2(N + 1))):
        z = mpmath.mpmathify(z)
        e = mpmath.mpf(eps_N)
        w = z * (1 - e) / N
        u = mp.cos(w) + mpmath.mpc(0, 1) * mpf_exact(Fraction(a)) * mp.sin(w)
        val = mp.expj(-e * z) * _power(u, N)
    with mp.workprec(bits):
        return ensure_finite(+mpmath.mpc(val))


# ---------------------------------------------------------------------------
# Lagrange interpolation in the frequency variable
# ---------------------------------------------------------------------------


def _nodes(row) -> Tuple[Fraction, ...]:
    if isinstance(row, FrequencyRow):
        if row.eps_N == 0:
            N = row.N
            return tuple(Fraction(N - 2 * nu, N) for nu in range(N + 1))
        return tuple(Fraction(h) for h in row.h)
    return tuple(Fraction(h) for h in row)


def lagrange_weights(nodes: Sequence[Fraction], a) -> List[Fraction]:
    """Exact Lagrange basis values at ``a``."""
    a = Fraction(a)
    if len(set(nodes)) != len(nodes):
        raise DomainError("interpolation nodes must be distinct")
    weights = []
    for i, hi in enumerate(nodes):
        w = Fraction(1)
        for j, hj in enumerate(nodes):
            if j != i:
                w *= (a - hj) / (hi - hj)
        weights.append(w)
    return weights


def _lagrange_bits(weights, z, policy: PrecisionPolicy, extra: int = 0) -> int:
    mass = float(sum(abs(w) for w in weights))
    lost = math.log2(max(mass, 1.0)) + abs(complex(z).imag) / LN2 + extra
    return working_bits(1, lost, policy)


def _lagrange_sum(nodes, weights, z, bits: int) -> mpmath.mpc:
    with mp.workprec(bits):
        zz = mpmath.mpmathify(z)
        # sum of the weights is exactly one, so only the deviations are summed
        terms = [mpf_exact(w) * mp.expm1(mpmath.mpc(0, 1) * mpf_exact(h) * zz)
                 for w, h in zip(weights, nodes) if w != 0]
        return ensure_finite(mpmath.mpc(1 + mp.fsum(terms)))


def lagrange_eval(row, a, z, policy: PrecisionPolicy = AUTO) -> mpmath.mpc:
    """Interpolator of ``lam -> exp(i lam z)`` on the row's nodes, evaluated at ``lam = a``.

    ``row`` is a :class:`FrequencyRow` (exact rational nodes when ``eps_N == 0``)
    or an explicit node sequence.
    """
    nodes = _nodes(row)
    weights = lagrange_weights(nodes, a)
    if not isinstance(z, (mpmath.mpc, mpmath.mpf)):
        z = complex(z)
    return _lagrange_sum(nodes, weights, z, _lagrange_bits(weights, z, policy))


def lagrange_bound(N: int, a, x) -> mpmath.mpf:
    """``((|a| + 1) |x|)**(N+1) / (N+1)!`` (remainder bound of the interpolator)."""
    with mp.workprec(113):
        base = (abs(mpf_exact(Fraction(a))) + 1) * abs(mpf_exact(Fraction(x)))
        return base ** (N + 1) / mp.factorial(N + 1)


def lagrange_error(N: int, a, x, policy: PrecisionPolicy = AUTO) -> mpmath.mpf:
    """Measured ``|exp(i a x) - T_N^Lag[a](x)|`` on the unperturbed row.

    The precision is raised until rounding sits well below the remainder bound,
    so the measurement resolves the quantity being bounded.
    """
    nodes = _nodes(frequencies(N, 0.0))
    weights = lagrange_weights(nodes, a)
    bound = lagrange_bound(N, a, x)
    extra = 0 if bound == 0 else max(0, math.ceil(-float(mp.log(bound, 2))))
    bits = _lagrange_bits(weights, x, policy, extra)
    val = _lagrange_sum(nodes, weights, x, bits)
    with mp.workprec(bits):
        exact = mp.expj(mpf_exact(Fraction(a)) * mpf_exact(Fraction(x)))
        return abs(exact - val)


# ---------------------------------------------------------------------------
# convergence ladder
# ---------------------------------------------------------------------------


def superosc_convergence(a, x_grid: Sequence[float], N_ladder: Sequence[int],
                         eps: EpsilonSpec = EpsilonSpec(),
                         policy: PrecisionPolicy = AUTO) -> ConvergenceReport:
    """sup over ``x_grid`` of ``|T_N^eps[a](x) - exp(i a x)|`` for each ``N``."""
    if not x_grid or not N_ladder:
        raise DomainError("grid and ladder must be nonempty")
    errors, bits_used = [], 0
    for N in N_ladder:
        eps_N = eps.at(N)
        worst = 0.0
        for x in x_grid:
            bits = sum_bits(N, eps_N, a, x, policy)
            bits_used = max(bits_used, bits)
            val = _eval_closed_bits(N, eps_N, a, x, bits)
            with mp.workprec(bits):
                err = abs(val - mp.expj(mpf_exact(Fraction(a)) * mpmath.mpf(x)))
            worst = max(worst, float(err))
        errors.append(worst)
    return ConvergenceReport(
        N_ladder=list(N_ladder),
        sup_errors=errors,
        grid={"x": describe_range(x_grid), "a": float(a), "eps": eps.label},
        bits_used=bits_used,
        label=f"superosc a={float(a)!r} eps={eps.label}",
    )
