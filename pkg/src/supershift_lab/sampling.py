"""Perturbation sequences and the regularly sampled frequency rows built from them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .errors import DomainError

EPS_CLAMP = 0.999
FAMILIES = ("zero", "c_over_N", "c_over_sqrtN", "c_over_logN", "list")


@dataclass(frozen=True)
class EpsilonSpec:
    family: str = "zero"
    c: float = 0.0
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown epsilon family {self.family!r}")
        if self.c < 0:
            raise DomainError("epsilon constant c must be nonnegative")
        if self.family == "list" and not self.values:
            raise DomainError("explicit epsilon list is empty")
        if any(v < 0 for v in self.values):
            raise DomainError("explicit epsilons must be nonnegative")

    @classmethod
    def parse(cls, text: str) -> "EpsilonSpec":
        """Parse ``zero``, ``c_over_N:1.0``, ``c_over_sqrtN:0.5``, ``list:0.1,0.05``..."""
        text = text.strip()
        if text == "zero":
            return cls()
        family, _, arg = text.partition(":")
        if family not in FAMILIES or not arg:
            raise DomainError(f"bad epsilon spec {text!r}")
        try:
            if family == "list":
                return cls("list", values=tuple(float(v) for v in arg.split(",") if v.strip()))
            return cls(family, c=float(arg))
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"bad epsilon spec {text!r}") from None

    @property
    def label(self) -> str:
        if self.family == "zero":
            return "zero"
        if self.family == "list":
            return "list:" + ",".join(repr(v) for v in self.values)
        return f"{self.family}:{self.c!r}"

    def at(self, N: int) -> float:
        """Clamped ``eps_N``."""
        if N < 1:
            raise DomainError("N must be >= 1")
        if self.family == "zero":
            raw = 0.0
        elif self.family == "c_over_N":
            raw = self.c / N
        elif self.family == "c_over_sqrtN":
            raw = self.c / math.sqrt(N)
        elif self.family == "c_over_logN":
            # log 1 = 0, so eps_1 is +inf before clamping
            raw = self.c / math.log(N) if N > 1 else (math.inf if self.c > 0 else 0.0)
        else:
            # past the end of the list the sequence is continued by zero
            raw = self.values[N - 1] if N <= len(self.values) else 0.0
        return min(max(raw, 0.0), EPS_CLAMP)


def make_epsilons(spec: EpsilonSpec, N_max: int) -> List[float]:
    if N_max < 1:
        raise DomainError("N_max must be >= 1")
    return [spec.at(N) for N in range(1, N_max + 1)]


@dataclass(frozen=True)
class FrequencyRow:
    """Row ``h_nu = 1 - 2 (nu + eps_N (N - nu)) / N`` for ``nu = 0..N``."""

    N: int
    eps_N: float
    h: Tuple[float, ...]

    @property
    def gap(self) -> float:
        return 2 * (1 - self.eps_N) / self.N

    def exact(self) -> Tuple[Fraction, ...]:
        """The same nodes as exact rationals (``eps_N`` taken at its binary value)."""
        N, e = self.N, Fraction(self.eps_N)
        return tuple(1 - 2 * (nu + e * (N - nu)) / N for nu in range(N + 1))


def frequencies(N: int, eps_N: float) -> FrequencyRow:
    if N < 1:
        raise DomainError("N must be >= 1")
    if not 0 <= eps_N < 1:
        raise DomainError(f"eps_N = {eps_N} outside [0, 1)")
    h = [1 - 2 * (nu + eps_N * (N - nu)) / N for nu in range(N + 1)]
    h[-1] = -1.0
    return FrequencyRow(N, float(eps_N), tuple(h))


def upsilon(a):
    return 2 * a - 1


def upsilon_inv(b):
    return (1 + b) / 2
