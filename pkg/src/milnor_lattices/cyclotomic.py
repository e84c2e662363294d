"""Elements of ℤ[ξ] with ξ = e^{2πi/l}, l ∈ {3, 4, 5}."""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .errors import UnsupportedCase
from .exact import IntPoly, Matrix, cyclotomic

SUPPORTED_ORDERS = (3, 4, 5)


@lru_cache(maxsize=None)
def _modulus(l: int) -> IntPoly:
    if l not in SUPPORTED_ORDERS:
        raise UnsupportedCase(f"root order l={l} not in {SUPPORTED_ORDERS}")
    return cyclotomic(l)


class CycNumber:
    """Element of ℤ[ξ] in the power basis 1, ξ, …, ξ^{d−1}, d = φ(l)."""

    __slots__ = ("l", "coeffs")

    def __init__(self, l: int, coeffs: Sequence[int]):
        mod = _modulus(l)
        d = mod.degree
        poly = IntPoly(coeffs) % mod
        c = list(poly.coeffs) + [0] * (d - len(poly.coeffs))
        self.l = l
        self.coeffs = tuple(c[:d])

    @classmethod
    def from_int(cls, l: int, a: int) -> "CycNumber":
        return cls(l, [a])

    @classmethod
    def xi(cls, l: int, k: int = 1) -> "CycNumber":
        return cls(l, IntPoly.monomial(k % l).coeffs)

    @classmethod
    def units(cls, l: int) -> list["CycNumber"]:
        """The roots of unity ±ξ^k in ℤ[ξ]."""
        out = []
        for k in range(l):
            out.append(cls.xi(l, k))
            out.append(-cls.xi(l, k))
        return sorted(set(out), key=lambda z: z.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def as_poly(self) -> IntPoly:
        return IntPoly(self.coeffs)

    def _coerce(self, other) -> "CycNumber":
        if isinstance(other, CycNumber):
            if other.l != self.l:
                raise ValueError("mixing different root orders")
            return other
        if isinstance(other, int):
            return CycNumber(self.l, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return CycNumber(self.l, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.l, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return CycNumber(self.l, (self.as_poly() * o.as_poly()).coeffs)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = CycNumber(self.l, [1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycNumber(self.l, [other])
        return isinstance(other, CycNumber) and self.l == other.l and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.l, self.coeffs))

    def __lt__(self, other):
        return self.coeffs < other.coeffs

    def __repr__(self):
        terms = [f"{c}" if k == 0 else f"{c}ξ" + (f"^{k}" if k > 1 else "") for k, c in enumerate(self.coeffs) if c]
        return f"CycNumber(l={self.l}: {' + '.join(terms) or '0'})"

    def conj(self) -> "CycNumber":
        """Image under ξ ↦ ξ^{−1} = ξ^{l−1}."""
        out = CycNumber(self.l, [0])
        for k, c in enumerate(self.coeffs):
            if c:
                out = out + CycNumber.xi(self.l, -k) * c
        return out

    def abs2(self) -> "CycNumber":
        return self * self.conj()

    def is_rational_integer(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_rational_integer():
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0]

    def is_real(self) -> bool:
        return self == self.conj()

    def to_matrix(self) -> Matrix:
        """Matrix of multiplication by self on the power basis (column action)."""
        d = self.degree
        cols = [(self * CycNumber.xi(self.l, k)).coeffs for k in range(d)]
        return Matrix.from_columns(cols)

    def at_matrix(self, m: Matrix) -> Matrix:
        """Evaluate the coefficient polynomial at a matrix."""
        return self.as_poly().at_matrix(m)


def norm_form(l: int, a: int, b: int) -> int:
    """|a + bξ|² for l ∈ {3, 4}."""
    if l == 3:
        return a * a - a * b + b * b
    if l == 4:
        return a * a + b * b
    raise UnsupportedCase(f"binary norm form only for l in (3, 4), got {l}")
