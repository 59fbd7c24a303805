"""Bernstein operators with a perturbed sampling rate and a shifted origin.

``B_N[Psi](b) = sum_nu C(N, nu) b**nu (1-b)**(N-nu) Psi(b' + nu * (1 - eps_N) / N)``

For ``b`` in [0, 1] the weights form a probability vector; anywhere else in
the complex plane they cancel and the working precision grows with
``N * log2(|b| + |1 - b|)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import mpmath
from mpmath import mp

from .errors import DomainError
from .numkernel import (
    AUTO,
    FunctionSpec,
    PrecisionPolicy,
    binomial,
    binomial_row,
    effective_bits,
    ensure_finite,
    eval_function,
    working_bits,
)


@dataclass(frozen=True)
class BernsteinParams:
    N: int
    eps_N: float = 0.0
    b_prime: float = 0.0

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("N must be >= 1")
        if not 0 <= self.eps_N < 1:
            raise DomainError(f"eps_N = {self.eps_N} outside [0, 1)")

    @property
    def rate(self) -> float:
        return (1 - self.eps_N) / self.N

    def rate_mp(self):
        """Rate at the current mpmath precision."""
        return (1 - mpmath.mpf(self.eps_N)) / self.N

    def sample_points(self) -> List:
        r = self.rate_mp()
        bp = mpmath.mpf(self.b_prime)
        return [bp + nu * r for nu in range(self.N + 1)]


def weight_log2_mass(b) -> float:
    """``log2(|b| + |1 - b|)``: bits lost per degree by the Bernstein weights at ``b``."""
    b = complex(b)
    return max(0.0, math.log2(abs(b) + abs(1 - b)))


def bernstein_bits(N: int, b, policy: PrecisionPolicy = AUTO) -> int:
    return working_bits(N, weight_log2_mass(b), policy)


def bernstein_weights(N: int, b) -> List:
    """``C(N, nu) b**nu (1-b)**(N-nu)`` at the current precision."""
    b = mpmath.mpmathify(b)
    one_minus = 1 - b
    left = [mpmath.mpf(1)] * (N + 1)
    right = [mpmath.mpf(1)] * (N + 1)
    for j in range(1, N + 1):
        left[j] = left[j - 1] * b
        right[j] = right[j - 1] * one_minus
    row = binomial_row(N)
    return [row[nu] * left[nu] * right[N - nu] for nu in range(N + 1)]


def bernstein_sum(values: Sequence, b) -> mpmath.mpc:
    """Bernstein combination of precomputed samples at the current precision."""
    N = len(values) - 1
    ws = bernstein_weights(N, b)
    return mpmath.mpc(mp.fsum(w * v for w, v in zip(ws, values)))


def sample_values(Psi: FunctionSpec, points: Sequence, bits: int) -> List:
    return [eval_function(Psi, x, bits) for x in points]


def bernstein_eval(Psi: FunctionSpec, p: BernsteinParams, b, policy: PrecisionPolicy = AUTO,
                   bits: int | None = None) -> mpmath.mpc:
    """Perturbed Bernstein sum of ``Psi`` at ``b`` (complex allowed).

    ``bits`` overrides the policy-derived working precision.
    """
    if bits is None:
        bits = bernstein_bits(p.N, b, policy)
    with mp.workprec(bits):
        vals = sample_values(Psi, p.sample_points(), bits)
        return ensure_finite(bernstein_sum(vals, b))


def forward_differences(Psi: FunctionSpec, b_prime, rate, K: int, bits: int) -> List[mpmath.mpc]:
    """``[Delta^0 Psi(b'), ..., Delta^K Psi(b')]`` with step ``rate``, by the recursive definition."""
    if K < 0:
        raise DomainError("K must be >= 0")
    with mp.workprec(bits):
        bp, r = mpmath.mpmathify(b_prime), mpmath.mpmathify(rate)
        row = [eval_function(Psi, bp + j * r, bits) for j in range(K + 1)]
        out = [row[0]]
        for _ in range(K):
            row = [row[j + 1] - row[j] for j in range(len(row) - 1)]
            out.append(row[0])
        return out


def alternating_difference(Psi: FunctionSpec, b_prime, rate, K: int, bits: int) -> mpmath.mpc:
    """``sum_j (-1)**(K-j) C(K, j) Psi(b' + j rate)`` (closed form of the K-th difference)."""
    with mp.workprec(bits):
        bp, r = mpmath.mpmathify(b_prime), mpmath.mpmathify(rate)
        return mpmath.mpc(mp.fsum((-1) ** (K - j) * binomial(K, j) * eval_function(Psi, bp + j * r, bits)
                                  for j in range(K + 1)))


def newton_bits(N: int, b, policy: PrecisionPolicy = AUTO) -> int:
    # |Delta^k| <= 2**k max|Psi| so the Newton terms grow like (1 + 2|b|)**N
    return working_bits(N, math.log2(1 + 2 * abs(complex(b))), policy)


def newton_form_eval(Psi: FunctionSpec, p: BernsteinParams, b, policy: PrecisionPolicy = AUTO,
                     bits: int | None = None) -> mpmath.mpc:
    """``sum_k N!/(N-k)! * Delta^k Psi(b') / k! * b**k``."""
    if bits is None:
        bits = newton_bits(p.N, b, policy)
    with mp.workprec(bits):
        diffs = forward_differences(Psi, p.b_prime, p.rate_mp(), p.N, bits)
        b = mpmath.mpmathify(b)
        terms, bk = [], mpmath.mpf(1)
        for k, d in enumerate(diffs):
            terms.append(binomial(p.N, k) * d * bk)
            bk *= b
        return ensure_finite(mpmath.mpc(mp.fsum(terms)))


def newton_tolerance(N: int, b, policy: PrecisionPolicy = AUTO) -> float:
    """``2**(16 - bits)`` with ``bits`` the smaller effective precision of the two forms."""
    eff = min(effective_bits(bernstein_bits(N, b, policy), N, weight_log2_mass(b)),
              effective_bits(newton_bits(N, b, policy), N, math.log2(1 + 2 * abs(complex(b)))))
    return 2.0 ** (16 - eff)


def newton_residual(Psi: FunctionSpec, p: BernsteinParams, b, policy: PrecisionPolicy = AUTO) -> float:
    """``|B_N - Newton| / max(|B_N|, max |Psi(samples)|)``."""
    lhs = bernstein_eval(Psi, p, b, policy)
    rhs = newton_form_eval(Psi, p, b, policy)
    bits = newton_bits(p.N, b, policy)
    with mp.workprec(bits):
        scale = max([abs(lhs)] + [abs(v) for v in sample_values(Psi, p.sample_points(), bits)])
        if scale == 0:
            return float(abs(lhs - rhs))
        return float(abs(lhs - rhs) / scale)


def moment_poly(N: int, kappa: int, c: float, eps_N: float, z,
                policy: PrecisionPolicy = AUTO) -> mpmath.mpc:
    """``sum_nu C(N, nu) (nu (1-eps_N)/N - c)**kappa z**nu (1-z)**(N-nu)``."""
    return moment_polys(N, kappa, c, eps_N, z, policy)[kappa]


def moment_polys(N: int, kappa_max: int, c: float, eps_N: float, z,
                 policy: PrecisionPolicy = AUTO) -> List[mpmath.mpc]:
    """:func:`moment_poly` for ``kappa = 0..kappa_max``, sharing the weights."""
    if kappa_max < 0:
        raise DomainError("kappa must be >= 0")
    if not 0 <= eps_N < 1:
        raise DomainError(f"eps_N = {eps_N} outside [0, 1)")
    z = complex(z)
    lost = N * weight_log2_mass(z)
    dist = abs(z - c)
    if kappa_max and dist > 0:
        lost += kappa_max * max(0.0, math.log2(max(c, 1 - c, 1e-300) / dist))
    bits = working_bits(N, lost / N, policy)
    with mp.workprec(bits):
        r = (1 - mpmath.mpf(eps_N)) / N
        cc = mpmath.mpf(c)
        ws = bernstein_weights(N, z)
        devs = [nu * r - cc for nu in range(N + 1)]
        out, powers = [], [mpmath.mpf(1)] * (N + 1)
        for k in range(kappa_max + 1):
            if k:
                powers = [p * d for p, d in zip(powers, devs)]
            out.append(ensure_finite(mpmath.mpc(mp.fsum(w * p for w, p in zip(ws, powers)))))
        return out


@dataclass(frozen=True)
class BoundCheck:
    z: complex
    kappa: int
    lhs: float
    rhs: float
    holds: bool
    precondition_ok: bool


def coefficient_bound_check(c: float, kappa_max: int, z_samples: Sequence[complex]) -> List[BoundCheck]:
    """``|z (1-c)**k + (1-z) (-c)**k| <= |z - c|**k`` for ``k = 0..kappa_max``.

    The inequality is only guaranteed for ``|z - c| >= max(c, 1 - c)``; samples
    closer to ``c`` are reported with ``precondition_ok=False``.
    """
    out = []
    threshold = max(c, 1 - c)
    with mp.workprec(113):
        cc = mpmath.mpf(c)
        for z in z_samples:
            zz = mpmath.mpc(z)
            dist = abs(zz - cc)
            ok = dist >= threshold
            for k in range(kappa_max + 1):
                lhs = abs(zz * (1 - cc) ** k + (1 - zz) * (-cc) ** k)
                rhs = dist**k
                # 2**-100 relative slack absorbs rounding of the two sides
                holds = lhs <= rhs * (1 + mpmath.mpf(2) ** -100)
                out.append(BoundCheck(complex(z), k, float(lhs), float(rhs), bool(holds), bool(ok)))
    return out
