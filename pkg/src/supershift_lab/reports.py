"""Convergence ladders: verdict policy, report records and range parsing."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

from .errors import DomainError

#: sup-errors at or below this are treated as exact reproduction
ERROR_FLOOR = 1e-12
#: minimal error reduction across an 8-fold increase of N
REDUCTION_PER_8X = 4.0

THRESHOLDS = {
    "error_floor": ERROR_FLOOR,
    "reduction_per_8x_N": REDUCTION_PER_8X,
    "rule": "errors strictly decrease along the ladder (pairs both below the floor count as "
            "decreasing) and first/last >= (N_last/N_first)**(log 4 / log 8); "
            "a ladder entirely below the floor passes",
}


def required_reduction(N_first: int, N_last: int) -> float:
    span = N_last / N_first
    return span ** (math.log(REDUCTION_PER_8X) / math.log(8.0))


def reduction_factor(errors: Sequence[float]) -> float:
    if errors[-1] > 0:
        return errors[0] / errors[-1]
    return math.inf


def ladder_verdict(N_ladder: Sequence[int], errors: Sequence[float]) -> bool:
    """Artifact pass rule shared by every convergence report."""
    if len(N_ladder) != len(errors) or not errors:
        raise DomainError("ladder and error lists must be nonempty and aligned")
    if all(e <= ERROR_FLOOR for e in errors):
        return True
    if len(errors) < 2:
        return False
    for prev, nxt in zip(errors, errors[1:]):
        if not (nxt < prev or (prev <= ERROR_FLOOR and nxt <= ERROR_FLOOR)):
            return False
    return reduction_factor(errors) >= required_reduction(N_ladder[0], N_ladder[-1])


def monotone_decreasing(errors: Sequence[float]) -> bool:
    return all(b < a or (a <= ERROR_FLOOR and b <= ERROR_FLOOR) for a, b in zip(errors, errors[1:]))


@dataclass
class ConvergenceReport:
    N_ladder: List[int]
    sup_errors: List[float]
    grid: Dict
    bits_used: int
    reduction_factor: float = 0.0
    verdict: str = "fail"
    label: str = ""
    notes: List[str] = field(default_factory=list)
    thresholds: Dict = field(default_factory=lambda: dict(THRESHOLDS))
    #: when set, the verdict is "monotone decrease and final error <= final_tolerance"
    final_tolerance: Optional[float] = None

    def __post_init__(self):
        if len(self.sup_errors) != len(self.N_ladder):
            raise DomainError("one sup error per ladder entry")
        self.reduction_factor = reduction_factor(self.sup_errors)
        if self.final_tolerance is None:
            ok = ladder_verdict(self.N_ladder, self.sup_errors)
        else:
            ok = monotone_decreasing(self.sup_errors) and self.sup_errors[-1] <= self.final_tolerance
            self.thresholds = {"error_floor": ERROR_FLOOR, "final_tolerance": self.final_tolerance,
                               "rule": "monotone decrease (pairs below the floor count as "
                                       "decreasing) and final error <= final_tolerance"}
        self.verdict = "pass" if ok else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        d = asdict(self)
        if math.isinf(d["reduction_factor"]):
            d["reduction_factor"] = None
        return d


# ---------------------------------------------------------------------------
# command-line range syntax
# ---------------------------------------------------------------------------


def parse_range(text: str) -> List[float]:
    """``start:end:step`` (end included when the step divides the span) or a single number."""
    parts = text.split(":")
    if len(parts) not in (1, 3):
        raise DomainError(f"bad range {text!r}; expected start:end:step")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise DomainError(f"bad range {text!r}; expected numbers") from None
    if len(values) == 1:
        return values
    start, end, step = values
    if step <= 0 or start > end:
        raise DomainError(f"bad range {text!r}; need start <= end and step > 0")
    q = (end - start) / step
    n = round(q)
    if abs(q - n) <= 1e-12 * max(1.0, abs(q)):
        count = n + 1
    else:
        count = math.floor(q) + 1
    return [start + k * step for k in range(count)]


def parse_grid2d(text: str) -> List[complex]:
    """``re_range x im_range`` grid of complex points, real part varying fastest."""
    re_txt, sep, im_txt = text.partition("x")
    if not sep:
        raise DomainError(f"bad grid {text!r}; expected <re range>x<im range>")
    return [complex(r, i) for i in parse_range(im_txt) for r in parse_range(re_txt)]


def parse_ints(text: str) -> List[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"bad integer list {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise DomainError(f"bad integer list {text!r}")
    return values


def parse_complex(text: str) -> complex:
    """``re,im`` or a bare real number."""
    parts = [p for p in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise DomainError(f"bad complex number {text!r}")


def describe_range(values: Sequence[float]) -> Dict:
    return {"min": min(values), "max": max(values), "count": len(values)}


def family_max(per_family: Dict[str, float]) -> float:
    return max(per_family.values())


def optional_float(v: Optional[float]):
    return None if v is None or math.isinf(v) else v
