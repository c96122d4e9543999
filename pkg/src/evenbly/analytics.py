"""Exact rate and distance scaling of Evenbly codes from the inflation recursion.

Everything here works from the substitution matrix alone, without building
a graph.  Integer sequences come from the recursion; closed forms and limits
are evaluated in the quadratic field generated by the leading eigenvalue, so
limits like sqrt(3)/2 and 1/8 come out exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .tiling import check_pq, eta_sequence, predicted_counts, substitution_matrix


@dataclass(frozen=True)
class QuadraticNumber:
    """``a + b * sqrt(d)`` with rational a, b and a fixed non-square d > 0."""

    a: Fraction
    b: Fraction
    d: int

    @classmethod
    def of(cls, a, b=0, d: int = 0) -> QuadraticNumber:
        return cls(Fraction(a), Fraction(b), d)

    def _coerce(self, other) -> QuadraticNumber:
        if isinstance(other, QuadraticNumber):
            if other.d != self.d and other.b and self.b:
                raise ValueError("mixed quadratic fields")
            return other
        return QuadraticNumber(Fraction(other), Fraction(0), self.d)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d or o.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self.d or o.d
        return QuadraticNumber(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self.a, -self.b, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        d = self.d or o.d
        norm = o.a * o.a - o.b * o.b * d
        num = self * o.conjugate()
        return QuadraticNumber(num.a / norm, num.b / norm, d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        out = QuadraticNumber(Fraction(1), Fraction(0), self.d)
        base = self
        if k < 0:
            base, k = 1 / self, -k
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)


@dataclass(frozen=True)
class RateReport:
    L: int
    n: int
    k: int
    rate: float
    asymptotic_rate: float


@dataclass(frozen=True)
class WeightVector:
    w_x: int
    w_z: int
    L: int

    @property
    def total(self) -> int:
        return self.w_x + self.w_z


def _eigen(p: int, q: int):
    """Leading eigenvalue and eigenvector of the alpha/beta block of M."""
    m = substitution_matrix(p, q)
    a11, a12, a21, a22 = (int(m[0, 0]), int(m[0, 1]), int(m[1, 0]), int(m[1, 1]))
    tr, det = a11 + a22, a11 * a22 - a12 * a21
    disc = tr * tr - 4 * det
    r = math.isqrt(disc)
    if r * r == disc:
        lam = QuadraticNumber.of(Fraction(tr + r, 2))
    else:
        lam = QuadraticNumber(Fraction(tr, 2), Fraction(1, 2), disc)
    v = (QuadraticNumber.of(a12, 0, lam.d), lam - a11)
    return lam, v


def _out_weights(q: int) -> tuple[int, int]:
    return q - 3, q - 2


def rate_sequence(p: int = 5, q: int = 4, L_max: int = 8) -> list[RateReport]:
    if L_max < 0:
        raise ValueError("L_max must be >= 0")
    asym = float(asymptotic_rate(p, q))
    out = []
    for L in range(L_max + 1):
        n, k = predicted_counts(p, q, L)
        out.append(RateReport(L, n, k, k / n, asym))
    return out


def asymptotic_rate(p: int = 5, q: int = 4) -> QuadraticNumber:
    """lim k/n for the max-rate code."""
    check_pq(p, q)
    lam, v = _eigen(p, q)
    wa, wb = _out_weights(q)
    return (v[0] + v[1]) * lam / ((lam - 1) * (v[0] * wa + v[1] * wb))


def constant_rate(p: int = 5, q: int = 4, half_filled: bool = True) -> Fraction | float:
    """Asymptotic rate of keeping every second beta vertex (halved again if half-filled)."""
    check_pq(p, q)
    lam, v = _eigen(p, q)
    wa, wb = _out_weights(q)
    r = v[1] * lam / ((lam - 1) * (v[0] * wa + v[1] * wb)) / 2
    if half_filled:
        r = r / 2
    return r.a if r.is_rational() else float(r)


def kept_beta_count(n_beta: int, stride: int) -> int:
    """Number of betas kept when keeping ring positions 0, stride, 2*stride, ..."""
    return -(-n_beta // stride)


def constant_rate_finite(L: int, p: int = 5, q: int = 4, half_filled: bool = True,
                         extra_gauged_layers: int = 0) -> Fraction:
    """(ungauged bulk qubits)/n of the constant-rate layout at finite L."""
    stride = 4 if half_filled else 2
    seq = eta_sequence(p, q, L + extra_gauged_layers)
    kept = 1 + sum(kept_beta_count(e[1], stride) for e in seq[1:L + 1])
    n, _ = predicted_counts(p, q, L + extra_gauged_layers)
    return Fraction(kept, n)


def closed_form_counts(L: int) -> tuple[int, int]:
    """{5,4} (n, k) from the eigenvalue closed forms, evaluated exactly."""
    l1 = QuadraticNumber.of(2, 1, 3)
    l2 = QuadraticNumber.of(2, -1, 3)
    s3 = QuadraticNumber.of(0, 1, 3)
    n = (2 * s3 + 2) * l1 ** L - (2 * s3 - 2) * l2 ** L
    k = 1 + 2 * s3 * (l2 ** (L + 1) + l2 ** (-L) + s3 - 3) / (s3 - 1)
    if not (n.is_rational() and k.is_rational()):
        raise ArithmeticError("closed form did not evaluate to a rational")
    return int(n.a), int(k.a)


def closed_form_counts_float(L: int) -> tuple[int, int]:
    """Same closed forms in floating point, rounded to integers."""
    s3 = math.sqrt(3)
    l1, l2 = 2 + s3, 2 - s3
    n = (2 * s3 + 2) * l1 ** L - (2 * s3 - 2) * l2 ** L
    k = 1 + 2 * s3 * (l2 ** (L + 1) + l2 ** (-L) + s3 - 3) / (s3 - 1)
    return round(n), round(k)


DISTANCE_MATRIX = ((0, 1), (1, 2))


def distance_weights(op: str, L: int) -> WeightVector:
    """(#X, #Z) of the pushed central logical on layer L of max-rate {5,4}."""
    if L < 0:
        raise ValueError("L must be >= 0")
    op = op.upper().lstrip("-")
    if op not in ("X", "Z"):
        raise ValueError("op must be 'X' or 'Z'")
    wx, wz = (2, 0) if op == "X" else (0, 2)
    (a, b), (c, d) = DISTANCE_MATRIX
    for _ in range(L):
        wx, wz = a * wx + b * wz, c * wx + d * wz
    return WeightVector(wx, wz, L)


def distance_closed_form(op: str, L: int) -> int:
    """(1+sqrt2)^m + (1-sqrt2)^m with m = L for X and L+1 for Z, exactly."""
    m = L if op.upper().lstrip("-") == "X" else L + 1
    val = QuadraticNumber.of(1, 1, 2) ** m + QuadraticNumber.of(1, -1, 2) ** m
    assert val.is_rational()
    return int(val.a)


def distance_exponent() -> float:
    """log_{2+sqrt3}(1+sqrt2): d_bit ~ n^this."""
    return math.log(1 + math.sqrt(2)) / math.log(2 + math.sqrt(3))
