"""Adaptive-precision arithmetic, exact binomials and pointwise evaluation of target functions.

Every sum in the lab is a weighted combination of terms whose moduli can reach
``2**(N * scale)`` while the result is O(1).  Values are therefore carried as
``mpmath`` complex numbers at a width chosen by a :class:`PrecisionPolicy`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import mpmath
from mpmath import libmp, mp

from .errors import DomainError, NonFiniteError, PrecisionError

ComplexValue = mpmath.mpc

#: Hard ceiling on working precision, in mantissa bits.
MAX_BITS = 1 << 16

KINDS = (
    "piecewise_poly",
    "exp_linear",
    "named",
    "convolved",
    "primitive",
    "product_with_identity",
    "rescaled",
)
NAMED = ("exp", "sin", "cos", "sinh", "cosh")


# ---------------------------------------------------------------------------
# precision
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrecisionPolicy:
    mode: str = "automatic"
    fixed_bits: int = 256
    guard_bits: int = 64

    def __post_init__(self):
        if self.mode not in ("automatic", "fixed"):
            raise DomainError(f"unknown precision mode {self.mode!r}")
        if self.fixed_bits < 53:
            raise DomainError("fixed_bits must be >= 53")
        if self.guard_bits < 32:
            raise DomainError("guard_bits must be >= 32")

    @classmethod
    def parse(cls, text: str) -> "PrecisionPolicy":
        """``auto`` / ``automatic`` or an integer bit count."""
        text = text.strip().lower()
        if text in ("auto", "automatic"):
            return cls()
        try:
            bits = int(text)
        except ValueError:
            raise DomainError(f"bad precision {text!r}") from None
        return cls(mode="fixed", fixed_bits=bits)

    def to_dict(self) -> dict:
        return {"mode": self.mode, "fixed_bits": self.fixed_bits, "guard_bits": self.guard_bits}


AUTO = PrecisionPolicy()


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise DomainError("binomial arguments must be nonnegative")
    if k > n:
        raise DomainError(f"binomial({n}, {k}): k > n")
    return math.comb(n, k)


@lru_cache(maxsize=64)
def binomial_row(n: int) -> Tuple[int, ...]:
    """``(C(n, 0), ..., C(n, n))`` built by the multiplicative recurrence."""
    if n < 0:
        raise DomainError("binomial arguments must be nonnegative")
    row = [1] * (n + 1)
    for k in range(1, n + 1):
        row[k] = row[k - 1] * (n - k + 1) // k
    return tuple(row)


def required_bits(N: int, log2_term_scale: float, policy: PrecisionPolicy = AUTO) -> int:
    """Mantissa width for a sum of ``N`` steps each losing ``log2_term_scale`` bits."""
    if policy.mode == "fixed":
        return policy.fixed_bits
    if N < 1 or log2_term_scale < 0:
        raise DomainError("required_bits needs N >= 1 and a nonnegative scale")
    return max(53, math.ceil(N * log2_term_scale) + policy.guard_bits)


def working_bits(N: int, log2_term_scale: float, policy: PrecisionPolicy = AUTO) -> int:
    """:func:`required_bits` plus the feasibility checks the summation routines rely on.

    Fixed widths that cannot hold the cancellation budget and still deliver a
    double-precision result raise :class:`PrecisionError` with the deficit.
    """
    bits = required_bits(N, log2_term_scale, policy)
    lost = math.ceil(N * log2_term_scale)
    if policy.mode == "fixed" and lost + 53 > bits:
        deficit = lost + 53 - bits
        raise PrecisionError(
            f"fixed precision {bits} bits cannot absorb {lost} bits of cancellation "
            f"(deficit {deficit} bits)",
            deficit_bits=deficit,
        )
    if bits > MAX_BITS:
        raise PrecisionError(
            f"cancellation budget needs {bits} bits, above the {MAX_BITS}-bit ceiling",
            deficit_bits=bits - MAX_BITS,
        )
    return bits


def effective_bits(bits: int, N: int, log2_term_scale: float) -> int:
    """Bits left in a result after ``N * log2_term_scale`` bits have cancelled."""
    return bits - math.ceil(N * log2_term_scale)


def ensure_finite(value):
    """Pass ``value`` through, raising :class:`NonFiniteError` on NaN or infinity."""
    if isinstance(value, mpmath.mpc):
        parts = (value.real, value.imag)
    elif isinstance(value, (mpmath.mpf, float, int)):
        parts = (value,)
    else:
        parts = (value.real, value.imag)
    for p in parts:
        if not mpmath.isfinite(p):
            raise NonFiniteError(f"non-finite value {value}")
    return value


def mpf_exact(q) -> mpmath.mpf:
    """Correctly rounded mpf from an int, float or Fraction at the current precision."""
    if isinstance(q, Fraction):
        return mp.make_mpf(libmp.from_rational(q.numerator, q.denominator, mp.prec, "n"))
    return mp.mpf(q)


def to_mp(x):
    if isinstance(x, Fraction):
        return mpf_exact(x)
    return mpmath.mpmathify(x)


# ---------------------------------------------------------------------------
# exact polynomial algebra on (real part, imaginary part) coefficient tuples
# ---------------------------------------------------------------------------

Poly = Tuple[Fraction, ...]


def _frac(v) -> Fraction:
    # accepts ints, floats (exact binary value), Fractions and "p/q" strings
    return Fraction(v)


def poly_trim(p: Sequence[Fraction]) -> Poly:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p) if p else (Fraction(0),)


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly_trim(
        [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]
    )


def poly_mul_x(p: Poly) -> Poly:
    return poly_trim((Fraction(0),) + tuple(p))


def poly_derivative(p: Poly) -> Poly:
    return poly_trim([k * p[k] for k in range(1, len(p))])


def poly_antiderivative(p: Poly) -> Poly:
    return poly_trim((Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(p)))


def poly_value_exact(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_compose_affine(p: Poly, s: Fraction, t: Fraction) -> Poly:
    """Coefficients of ``x -> p(s*x + t)``."""
    out = [Fraction(0)] * len(p)
    for k, c in enumerate(p):
        if c == 0:
            continue
        for j in range(k + 1):
            out[j] += c * math.comb(k, j) * s**j * t ** (k - j)
    return poly_trim(out)


# ---------------------------------------------------------------------------
# FunctionSpec
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """Polynomial used for ``x < end`` (and ``x >= end`` of the previous piece)."""

    end: float
    re: Poly
    im: Poly

    @property
    def degree(self) -> int:
        return max(len(self.re), len(self.im)) - 1


def _make_piece(end, coeffs) -> Piece:
    if len(coeffs) == 0:
        raise DomainError("every piece needs at least one coefficient")
    re, im = [], []
    for c in coeffs:
        if isinstance(c, (list, tuple)):
            re.append(_frac(c[0]))
            im.append(_frac(c[1]) if len(c) > 1 else Fraction(0))
        elif isinstance(c, complex):
            re.append(Fraction(c.real))
            im.append(Fraction(c.imag))
        else:
            re.append(_frac(c))
            im.append(Fraction(0))
    end = math.inf if end is None else float(end)
    return Piece(end, poly_trim(re), poly_trim(im))


@dataclass(frozen=True)
class FunctionSpec:
    """Symbolic description of a target function of one variable.

    ``inner`` is set exactly for the wrapped kinds (convolved, primitive,
    product_with_identity, rescaled).  ``domain`` is an optional closed
    interval outside of which evaluation raises :class:`DomainError`.
    """

    kind: str
    pieces: Tuple[Piece, ...] = ()
    lam: complex = 0j
    name: str = ""
    scale: complex = 1
    shift: float = 0.0
    inner: Optional["FunctionSpec"] = None
    support: float = 0.0
    nodes: int = 64
    a0: float = 0.0
    domain: Optional[Tuple[float, float]] = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown function kind {self.kind!r}")
        wrapped = self.kind in ("convolved", "primitive", "product_with_identity", "rescaled")
        if wrapped != (self.inner is not None):
            raise DomainError(f"{self.kind} must reference exactly one inner spec" if wrapped
                              else f"{self.kind} takes no inner spec")
        if self.kind == "piecewise_poly":
            if not self.pieces:
                raise DomainError("piecewise_poly needs at least one piece")
            ends = [p.end for p in self.pieces]
            if any(b <= a for a, b in zip(ends, ends[1:])):
                raise DomainError("breakpoints must be strictly increasing")
            if ends[-1] != math.inf:
                raise DomainError("the last piece must extend to +infinity")
        if self.kind == "named" and self.name not in NAMED:
            raise DomainError(f"unknown named function {self.name!r}")
        if self.kind == "convolved" and not (self.support > 0 and self.nodes >= 8):
            raise DomainError("convolution needs a positive support and at least 8 nodes")
        if self.kind == "rescaled" and self.scale == 0:
            raise DomainError("rescaling by zero")
        if self.domain is not None and not self.domain[0] < self.domain[1]:
            raise DomainError("empty domain")

    # -- constructors -------------------------------------------------------

    @classmethod
    def piecewise(cls, pieces, domain=None) -> "FunctionSpec":
        """``pieces`` is a list of ``(end, coeffs)``; ``end=None`` means +infinity."""
        return cls("piecewise_poly", pieces=tuple(_make_piece(e, c) for e, c in pieces),
                   domain=domain)

    @classmethod
    def polynomial(cls, coeffs, domain=None) -> "FunctionSpec":
        return cls.piecewise([(None, coeffs)], domain=domain)

    @classmethod
    def constant(cls, value=1) -> "FunctionSpec":
        return cls.polynomial([value])

    @classmethod
    def exp_linear(cls, lam, domain=None) -> "FunctionSpec":
        return cls("exp_linear", lam=complex(lam), domain=domain)

    @classmethod
    def named(cls, name, scale=1, domain=None) -> "FunctionSpec":
        return cls("named", name=name, scale=complex(scale), domain=domain)

    @classmethod
    def rescaled(cls, inner, scale, shift) -> "FunctionSpec":
        dom = None
        if inner.domain is not None:
            lo, hi = sorted(((inner.domain[0] - shift) / scale, (inner.domain[1] - shift) / scale))
            dom = (lo, hi)
        return cls("rescaled", inner=inner, scale=float(scale), shift=float(shift), domain=dom)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "piecewise_poly":
            d["pieces"] = [
                {
                    "end": None if p.end == math.inf else p.end,
                    "coeffs": [[_num(r), _num(i)] for r, i in _zip_longest(p.re, p.im)],
                }
                for p in self.pieces
            ]
        elif self.kind == "exp_linear":
            d["lambda"] = [self.lam.real, self.lam.imag]
        elif self.kind == "named":
            d["name"] = self.name
            d["scale"] = [complex(self.scale).real, complex(self.scale).imag]
        elif self.kind == "convolved":
            d.update(support=self.support, nodes=self.nodes)
        elif self.kind == "primitive":
            d["a0"] = self.a0
        elif self.kind == "rescaled":
            d.update(scale=complex(self.scale).real, shift=self.shift)
        if self.inner is not None:
            d["inner"] = self.inner.to_dict()
        if self.domain is not None:
            d["domain"] = list(self.domain)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "FunctionSpec":
        kind = d.get("kind")
        dom = tuple(d["domain"]) if d.get("domain") is not None else None
        inner = cls.from_dict(d["inner"]) if "inner" in d else None
        if kind == "piecewise_poly":
            return cls.piecewise([(p.get("end"), p["coeffs"]) for p in d["pieces"]], domain=dom)
        if kind == "exp_linear":
            return cls.exp_linear(_complex(d["lambda"]), domain=dom)
        if kind == "named":
            return cls.named(d["name"], _complex(d.get("scale", 1)), domain=dom)
        if kind == "convolved":
            return convolved_spec(inner, float(d["support"]), int(d.get("nodes", 64)))
        if kind == "primitive":
            return cls("primitive", inner=inner, a0=float(d.get("a0", 0.0)), domain=inner.domain)
        if kind == "product_with_identity":
            return cls("product_with_identity", inner=inner, domain=inner.domain)
        if kind == "rescaled":
            return cls.rescaled(inner, float(d["scale"]), float(d.get("shift", 0.0)))
        raise DomainError(f"unknown function kind {kind!r}")

    @classmethod
    def from_json(cls, text: str) -> "FunctionSpec":
        return cls.from_dict(json.loads(text))


def convolved_spec(inner: FunctionSpec, support: float, nodes: int = 64) -> FunctionSpec:
    dom = None
    if inner.domain is not None:
        dom = (inner.domain[0] + support, inner.domain[1])
        if not dom[0] < dom[1]:
            raise DomainError("smoothing support exceeds the domain length")
    return FunctionSpec("convolved", inner=inner, support=float(support), nodes=int(nodes),
                        domain=dom)


def _zip_longest(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else Fraction(0), b[i] if i < len(b) else Fraction(0))
            for i in range(n)]


def _num(q: Fraction):
    f = float(q)
    if Fraction(f) == q:
        return int(f) if f.is_integer() and abs(f) < 2**53 else f
    return f"{q.numerator}/{q.denominator}"


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]) if len(v) > 1 else 0.0)
    return complex(v)


# ---------------------------------------------------------------------------
# canonical piecewise forms
# ---------------------------------------------------------------------------


def as_piecewise(f: FunctionSpec) -> Optional[Tuple[Piece, ...]]:
    """Exact piecewise-polynomial form of ``f`` when one exists, else ``None``."""
    if f.kind == "piecewise_poly":
        return f.pieces
    if f.kind == "product_with_identity":
        inner = as_piecewise(f.inner)
        if inner is None:
            return None
        return tuple(Piece(p.end, poly_mul_x(p.re), poly_mul_x(p.im)) for p in inner)
    if f.kind == "rescaled":
        inner = as_piecewise(f.inner)
        s = complex(f.scale).real
        if inner is None or s <= 0:
            return None
        fs, ft = Fraction(s), Fraction(f.shift)
        return tuple(
            Piece(p.end if p.end == math.inf else float((Fraction(p.end) - ft) / fs),
                  poly_compose_affine(p.re, fs, ft), poly_compose_affine(p.im, fs, ft))
            for p in inner
        )
    if f.kind == "primitive":
        inner = as_piecewise(f.inner)
        if inner is None:
            return None
        return antiderivative_pieces(inner, Fraction(f.a0))
    return None


def antiderivative_pieces(pieces: Sequence[Piece], a0: Fraction) -> Tuple[Piece, ...]:
    """Continuous piecewise antiderivative vanishing at ``a0``."""
    prims = []
    prev = None
    for p in pieces:
        re, im = poly_antiderivative(p.re), poly_antiderivative(p.im)
        if prev is not None:
            x = Fraction(prev[0])
            # match the previous piece's value at the shared breakpoint
            dr = poly_value_exact(prev[1], x) - poly_value_exact(re, x)
            di = poly_value_exact(prev[2], x) - poly_value_exact(im, x)
            re, im = poly_add(re, (dr,)), poly_add(im, (di,))
        prims.append([p.end, re, im])
        prev = (p.end, re, im)
    k = _piece_index(pieces, a0)
    off_re = poly_value_exact(prims[k][1], a0)
    off_im = poly_value_exact(prims[k][2], a0)
    return tuple(
        Piece(e, poly_add(re, (-off_re,)), poly_add(im, (-off_im,))) for e, re, im in prims
    )


def _piece_index(pieces: Sequence[Piece], x) -> int:
    for k, p in enumerate(pieces):
        if x < p.end:
            return k
    return len(pieces) - 1


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _poly_mp(p: Poly, prec: int):
    with mp.workprec(prec):
        return tuple(mpf_exact(c) for c in p)


def horner(coeffs, x):
    acc = mp.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def eval_piece(piece: Piece, x) -> ComplexValue:
    re = _poly_mp(piece.re, mp.prec)
    im = _poly_mp(piece.im, mp.prec)
    vr = horner(re, x)
    if len(im) == 1 and im[0] == 0:
        return mpmath.mpc(vr)
    return mpmath.mpc(vr) + mpmath.mpc(0, 1) * horner(im, x)


def eval_pieces(pieces: Sequence[Piece], x) -> ComplexValue:
    key = x.real if isinstance(x, mpmath.mpc) else x
    return eval_piece(pieces[_piece_index(pieces, key)], x)


def _check_domain(f: FunctionSpec, x):
    if f.domain is None:
        return
    key = x.real if isinstance(x, mpmath.mpc) else x
    if not f.domain[0] <= key <= f.domain[1]:
        raise DomainError(f"{float(key)!r} outside the domain {f.domain} of a {f.kind} spec")


def eval_function(f: FunctionSpec, x, bits: int) -> ComplexValue:
    """Value of ``f`` at ``x`` computed with ``bits`` mantissa bits.

    Piecewise polynomials pick their piece from ``Re(x)``.
    """
    if bits < 53:
        raise DomainError("evaluation needs at least 53 bits")
    with mp.workprec(bits):
        return ensure_finite(_eval(f, to_mp(x)))


def _eval(f: FunctionSpec, x) -> ComplexValue:
    _check_domain(f, x)
    kind = f.kind
    if kind == "piecewise_poly":
        return eval_pieces(f.pieces, x)
    if kind == "exp_linear":
        return mpmath.mpc(mp.exp(mpmath.mpc(f.lam) * x))
    if kind == "named":
        fn = getattr(mp, f.name)
        return mpmath.mpc(fn(mpmath.mpmathify(f.scale) * x))
    pieces = as_piecewise(f)
    if pieces is not None:
        return eval_pieces(pieces, x)
    if kind == "product_with_identity":
        return x * _eval(f.inner, x)
    if kind == "rescaled":
        return _eval(f.inner, mpmath.mpmathify(f.scale).real * x + f.shift)
    # quadrature-backed kinds live with the supershift operations
    from . import supershift

    if kind == "convolved":
        return supershift.convolution_value(f, x)
    return supershift.primitive_value(f, x)


def mp_hex(x) -> str:
    """Exact binary value of an mpf (or a float) as ``[-]0x<mantissa>p<exponent>``."""
    if isinstance(x, float):
        return x.hex()
    x = mpmath.mpf(x)
    if x == 0:
        return "0x0p+0"
    if not mpmath.isfinite(x):
        return str(x)
    man, exp = x.man_exp
    sign = "-" if man < 0 else ""
    return f"{sign}0x{abs(man):x}p{exp:+d}"
