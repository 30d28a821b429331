"""Exact arithmetic in cyclotomic fields Q(zeta_e).

Elements are rational coefficient vectors in the power basis
1, zeta, ..., zeta^(phi(e)-1), reduced modulo the e-th cyclotomic polynomial.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def cyclotomic_polynomial(e: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_e, lowest degree first."""
    # x^e - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (e - 1) + [1]
    for d in range(1, e):
        if e % d == 0:
            num = _exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1] // lead
        q[k] = c
        for i, d in enumerate(den):
            num[k + i] -= c * d
    assert not any(num), "inexact polynomial division"
    return q


@lru_cache(maxsize=None)
def _power_table(e: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coefficient vector of zeta_e^k for k = 0 .. e-1."""
    phi = cyclotomic_polynomial(e)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg else []
    for _ in range(e):
        rows.append(tuple(cur))
        # multiply by zeta and reduce by the monic Phi_e
        shifted = [0] + cur
        top = shifted[deg] if deg else 0
        cur = [shifted[i] - top * phi[i] for i in range(deg)]
    return tuple(rows)


class Cyclotomic:
    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs):
        self.conductor = conductor
        deg = len(cyclotomic_polynomial(conductor)) - 1
        c = [Fraction(v) for v in coeffs]
        if len(c) > deg:
            c = _reduce(conductor, c)
        c += [Fraction(0)] * (deg - len(c))
        self.coeffs = tuple(c)

    # -- construction --------------------------------------------------------

    @classmethod
    def rational(cls, q, conductor: int = 1) -> "Cyclotomic":
        return cls(conductor, [q])

    @classmethod
    def root_of_unity(cls, k: int, e: int) -> "Cyclotomic":
        """zeta_e^k."""
        return cls(e, _power_table(e)[k % e])

    @classmethod
    def from_exponents(cls, mult: dict[int, int] | list[int], e: int) -> "Cyclotomic":
        """sum_k mult[k] zeta_e^k."""
        items = mult.items() if isinstance(mult, dict) else enumerate(mult)
        deg = len(cyclotomic_polynomial(e)) - 1
        acc = [0] * deg
        table = _power_table(e)
        for k, m in items:
            if m:
                for i, v in enumerate(table[k % e]):
                    acc[i] += m * v
        return cls(e, acc)

    # -- field operations ----------------------------------------------------

    def lift(self, e: int) -> "Cyclotomic":
        """Same number written in Q(zeta_e); conductor must divide e."""
        if e == self.conductor:
            return self
        if e % self.conductor:
            raise ValueError(f"cannot lift conductor {self.conductor} to {e}")
        step = e // self.conductor
        deg = len(cyclotomic_polynomial(e)) - 1
        acc = [Fraction(0)] * deg
        table = _power_table(e)
        for k, c in enumerate(self.coeffs):
            if c:
                for i, v in enumerate(table[(k * step) % e]):
                    if v:
                        acc[i] += c * v
        return Cyclotomic(e, acc)

    def _common(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.conductor)
        if other.conductor == self.conductor:
            return self, other
        e = self.conductor * other.conductor // math.gcd(self.conductor, other.conductor)
        return self.lift(e), other.lift(e)

    def __add__(self, other) -> "Cyclotomic":
        a, b = self._common(other)
        return Cyclotomic(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.conductor, [-x for x in self.coeffs])

    def __sub__(self, other) -> "Cyclotomic":
        return self + (-other if isinstance(other, Cyclotomic) else -Fraction(other))

    def __rsub__(self, other) -> "Cyclotomic":
        return (-self) + other

    def __mul__(self, other) -> "Cyclotomic":
        if not isinstance(other, Cyclotomic):
            f = Fraction(other)
            return Cyclotomic(self.conductor, [x * f for x in self.coeffs])
        a, b = self._common(other)
        prod = [Fraction(0)] * max(len(a.coeffs) + len(b.coeffs) - 1, 0)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(a.conductor, _reduce(a.conductor, prod))

    __rmul__ = __mul__

    def __truediv__(self, q) -> "Cyclotomic":
        f = Fraction(q)
        return Cyclotomic(self.conductor, [x / f for x in self.coeffs])

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugate: zeta^k -> zeta^-k."""
        e = self.conductor
        deg = len(self.coeffs)
        acc = [Fraction(0)] * deg
        table = _power_table(e)
        for k, c in enumerate(self.coeffs):
            if c:
                for i, v in enumerate(table[(-k) % e]):
                    if v:
                        acc[i] += c * v
        return Cyclotomic(e, acc)

    def galois(self, a: int) -> "Cyclotomic":
        """Image under zeta -> zeta^a (a coprime to the conductor)."""
        e = self.conductor
        acc = [Fraction(0)] * len(self.coeffs)
        table = _power_table(e)
        for k, c in enumerate(self.coeffs):
            if c:
                for i, v in enumerate(table[(a * k) % e]):
                    if v:
                        acc[i] += c * v
        return Cyclotomic(e, acc)

    # -- predicates ----------------------------------------------------------

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Cyclotomic, int, Fraction)):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    __hash__ = None  # equal values may carry different conductors

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def to_complex(self) -> complex:
        z = complex(math.cos(2 * math.pi / self.conductor),
                    math.sin(2 * math.pi / self.conductor))
        return sum(complex(float(c)) * z ** k for k, c in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self) -> str:
        if self.is_rational():
            return str(self.to_fraction())
        terms = [f"{c}*z{self.conductor}^{k}" if k else str(c)
                 for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms)


def _reduce(e: int, poly: list) -> list:
    """Reduce a coefficient list modulo Phi_e."""
    phi = cyclotomic_polynomial(e)
    deg = len(phi) - 1
    poly = list(poly)
    for k in range(len(poly) - 1, deg - 1, -1):
        c = poly[k]
        if c:
            for i in range(deg + 1):
                poly[k - deg + i] -= c * phi[i]
    return poly[:deg]
