"""Lemniscate loops around 0 and 1, and the disk unions on which holomorphy gives the supershift."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import AmbiguousError, DomainError

BOUNDARY_TOL = 2.0**-20


class Loop(enum.Enum):
    LEFT = "LeftLoop"
    RIGHT = "RightLoop"
    OUTSIDE = "Outside"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class LoopRegion:
    c: float
    eta: float = 0.0
    resolution: int = 64

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise DomainError("lemniscate parameter c must lie in (0, 1)")
        if self.eta < 0 or not (0 < 0.5 - self.eta and 0.5 + self.eta < 1):
            raise DomainError("[1/2 - eta, 1/2 + eta] must lie inside (0, 1)")
        if self.resolution < 16:
            raise DomainError("resolution must be >= 16")

    def classify(self, z) -> Loop:
        return classify(self.c, z, self.resolution)

    def c_range(self, samples: int = 11) -> List[float]:
        """Sampled ``c`` values covering ``[1/2 - eta, 1/2 + eta]``."""
        if self.eta == 0:
            return [0.5]
        return [0.5 - self.eta + 2 * self.eta * k / (samples - 1) for k in range(samples)]


def lemniscate_value(c: float, z) -> float:
    """``(|z|/c)**c * (|1-z|/(1-c))**(1-c)``: equal to 1 on the lemniscate, below 1 inside its loops."""
    if not 0 < c < 1:
        raise DomainError("lemniscate parameter c must lie in (0, 1)")
    z = complex(z)
    r0, r1 = abs(z), abs(1 - z)
    if r0 == 0 or r1 == 0:
        return 0.0
    return math.exp(c * math.log(r0 / c) + (1 - c) * math.log(r1 / (1 - c)))


def _segment_inside(c: float, z: complex, target: complex, resolution: int) -> bool:
    def phi(t):
        return lemniscate_value(c, z + (target - z) * t)

    values = [phi(k / resolution) for k in range(resolution + 1)]
    k = max(range(resolution + 1), key=values.__getitem__)
    # the two loops only touch at z = c, where the sampled maximum can sit just below 1
    lo, hi = max(k - 1, 0) / resolution, min(k + 1, resolution) / resolution
    for _ in range(60):
        m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        if phi(m1) < phi(m2):
            lo = m1
        else:
            hi = m2
    peak = max(values[k], phi((lo + hi) / 2))
    return peak < 1 - BOUNDARY_TOL


def classify(c: float, z, resolution: int = 64) -> Loop:
    """Loop membership of ``z`` by sampling the straight segments to 0 and to 1."""
    if resolution < 16:
        raise DomainError("resolution must be >= 16")
    z = complex(z)
    phi = lemniscate_value(c, z)
    if abs(phi - 1) <= BOUNDARY_TOL:
        return Loop.BOUNDARY
    if phi > 1:
        return Loop.OUTSIDE
    to_zero = _segment_inside(c, z, 0j, resolution)
    to_one = _segment_inside(c, z, 1 + 0j, resolution)
    if to_zero and not to_one:
        return Loop.LEFT
    if to_one and not to_zero:
        return Loop.RIGHT
    raise AmbiguousError(
        f"z={z} with c={c}: segment test gives to_zero={to_zero}, to_one={to_one} "
        f"at resolution {resolution}"
    )


def q_constant(c_range: Sequence[float], K: Iterable, loop: Optional[Loop] = None,
               resolution: int = 64) -> float:
    """``max Phi_c(z)`` over ``c`` in ``c_range`` and ``z`` in ``K``; every point must sit in one loop."""
    K = [complex(z) for z in K]
    if not K or not c_range:
        raise DomainError("need at least one c and one point")
    offenders: List[Tuple[float, complex, str]] = []
    worst = 0.0
    for c in c_range:
        for z in K:
            try:
                where = classify(c, z, resolution)
            except AmbiguousError:
                offenders.append((c, z, "Ambiguous"))
                continue
            if loop is None and where in (Loop.LEFT, Loop.RIGHT):
                loop = where
            if where != loop:
                offenders.append((c, z, where.value))
                continue
            worst = max(worst, lemniscate_value(c, z))
    if offenders:
        listing = ", ".join(f"(c={c:g}, z={z}, {w})" for c, z, w in offenders[:10])
        raise DomainError(f"{len(offenders)} point(s) outside the loop: {listing}")
    return worst


# ---------------------------------------------------------------------------
# W_A
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticityDomain:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi - self.lo > 2:
            raise DomainError("the interval must be longer than 2")

    @property
    def R(self) -> float:
        return self.hi - self.lo

    def admissible(self, a_prime: float) -> bool:
        return self.lo + 1 <= a_prime <= self.hi - 1

    def offset(self, a_prime: float) -> float:
        """``C(a')`` in (-1, 1): the disk center sits at ``a' + C(a')``."""
        return 1 - 2 * (a_prime - 1 - self.lo) / (self.R - 2)

    def center(self, a_prime: float) -> float:
        return a_prime + self.offset(a_prime)

    def radius(self, a_prime: float) -> float:
        x = self.center(a_prime)
        if not self.lo < x < self.hi:
            return 0.0
        return min(x - self.lo, self.hi - x)

    def outer_bound(self) -> float:
        """Every point of the union lies within this distance of the closed interval."""
        return max(2.0, self.R - 2)


def wA_contains(A: Tuple[float, float], z, resolution: int = 4096) -> bool:
    """Whether ``z`` lies in one of the closed disks around ``a' + C(a')`` (sampled ``a'``)."""
    dom = A if isinstance(A, AnalyticityDomain) else AnalyticityDomain(*A)
    z = complex(z)
    start, stop = dom.lo + 1, dom.hi - 1
    for k in range(resolution + 1):
        ap = start + (stop - start) * k / resolution
        r = dom.radius(ap)
        if abs(z - dom.center(ap)) <= r * (1 + 1e-12):
            return True
    return False
