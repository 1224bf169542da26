"""Exact scalars of the form (a + i b + sqrt2 c + i sqrt2 d) / 2^s.

Every gate and projector the compiler emits has entries in this ring, so
locality and projector checks can be carried out without rounding.  Python
integers never overflow, which removes the need for checked arithmetic.
"""

from __future__ import annotations

import re
from functools import reduce
from typing import Iterable

import numpy as np

SQRT2 = np.sqrt(2.0)

_TEXT = re.compile(
    r"^\(\s*(-?\d+)\s*\+\s*(-?\d+)\s*i\s*\+\s*(-?\d+)\s*r2\s*\+\s*(-?\d+)\s*i\s*r2\s*\)\s*/\s*2\^(\d+)$"
)


class RingScalar:
    """An element of Z[i, sqrt2, 1/2] stored in canonical form.

    Canonical means the smallest exponent ``s`` such that all four integer
    coefficients are integral, so equal values have equal representations.
    """

    __slots__ = ("a", "b", "c", "d", "s")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0, s: int = 0):
        for v in (a, b, c, d, s):
            if not isinstance(v, (int, np.integer)):
                raise TypeError(f"ring coefficients must be integers, got {v!r}")
        a, b, c, d, s = int(a), int(b), int(c), int(d), int(s)
        if s < 0:
            shift = 1 << -s
            a, b, c, d, s = a * shift, b * shift, c * shift, d * shift, 0
        if a == b == c == d == 0:
            s = 0
        while s > 0 and not (a | b | c | d) & 1:
            a, b, c, d, s = a >> 1, b >> 1, c >> 1, d >> 1, s - 1
        self.a, self.b, self.c, self.d, self.s = a, b, c, d, s

    # construction helpers
    @classmethod
    def coerce(cls, x) -> RingScalar:
        if isinstance(x, RingScalar):
            return x
        if isinstance(x, (int, np.integer)):
            return cls(int(x))
        raise TypeError(f"cannot interpret {x!r} as a ring scalar")

    @property
    def parts(self) -> tuple[int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.s)

    def _aligned(self, other: RingScalar) -> tuple[tuple[int, ...], tuple[int, ...], int]:
        s = max(self.s, other.s)
        ka, kb = 1 << (s - self.s), 1 << (s - other.s)
        x = (self.a * ka, self.b * ka, self.c * ka, self.d * ka)
        y = (other.a * kb, other.b * kb, other.c * kb, other.d * kb)
        return x, y, s

    # arithmetic
    def __add__(self, other) -> RingScalar:
        try:
            other = RingScalar.coerce(other)
        except TypeError:
            return NotImplemented
        x, y, s = self._aligned(other)
        return RingScalar(*(p + q for p, q in zip(x, y)), s)

    __radd__ = __add__

    def __neg__(self) -> RingScalar:
        return RingScalar(-self.a, -self.b, -self.c, -self.d, self.s)

    def __sub__(self, other) -> RingScalar:
        try:
            other = RingScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> RingScalar:
        return RingScalar.coerce(other) - self

    def __mul__(self, other) -> RingScalar:
        try:
            other = RingScalar.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return RingScalar(
            a * e - b * f + 2 * c * g - 2 * d * h,
            a * f + b * e + 2 * c * h + 2 * d * g,
            a * g + c * e - b * h - d * f,
            a * h + d * e + b * g + c * f,
            self.s + other.s,
        )

    __rmul__ = __mul__

    def half(self, times: int = 1) -> RingScalar:
        return RingScalar(self.a, self.b, self.c, self.d, self.s + times)

    def conjugate(self) -> RingScalar:
        return RingScalar(self.a, -self.b, self.c, -self.d, self.s)

    conj = conjugate

    # comparisons
    def __eq__(self, other) -> bool:
        try:
            other = RingScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def is_zero(self) -> bool:
        return self.a == self.b == self.c == self.d == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __complex__(self) -> complex:
        re_ = self.a + SQRT2 * self.c
        im_ = self.b + SQRT2 * self.d
        return complex(re_, im_) * 2.0**-self.s

    def to_complex(self) -> complex:
        return complex(self)

    def __repr__(self) -> str:
        return f"RingScalar{self.parts}"

    def __str__(self) -> str:
        return f"({self.a} + {self.b} i + {self.c} r2 + {self.d} i r2)/2^{self.s}"

    @classmethod
    def parse(cls, text: str) -> RingScalar:
        m = _TEXT.match(text.strip())
        if m is None:
            raise ValueError(f"not a ring scalar: {text!r}")
        return cls(*(int(g) for g in m.groups()))


def ring_make(a: int, b: int, c: int, d: int, s: int) -> RingScalar:
    return RingScalar(a, b, c, d, s)


ZERO = RingScalar()
ONE = RingScalar(1)
I_UNIT = RingScalar(0, 1)
SQRT2_R = RingScalar(0, 0, 1)
INV_SQRT2 = RingScalar(0, 0, 1, 0, 1)
OMEGA = RingScalar(0, 0, 1, 1, 1)  # e^{i pi/4} = (1 + i)/sqrt2
HALF = RingScalar(1, 0, 0, 0, 1)


# matrices are numpy object arrays of RingScalar

def ring_array(rows: Iterable) -> np.ndarray:
    arr = np.array(rows, dtype=object)
    flat = [RingScalar.coerce(x) for x in arr.ravel()]
    out = np.empty(arr.shape, dtype=object)
    out.ravel()[:] = flat
    return out


def ring_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.ravel()[:] = [ZERO] * out.size
    return out


def ring_eye(d: int) -> np.ndarray:
    out = ring_zeros((d, d))
    for k in range(d):
        out[k, k] = ONE
    return out


def ring_dagger(m: np.ndarray) -> np.ndarray:
    return np.vectorize(lambda x: x.conjugate(), otypes=[object])(m).T


def ring_kron(*ms: np.ndarray) -> np.ndarray:
    return reduce(np.kron, ms)


def ring_matmul(*ms: np.ndarray) -> np.ndarray:
    return reduce(np.matmul, ms)


def ring_scale(m: np.ndarray, x) -> np.ndarray:
    x = RingScalar.coerce(x)
    return np.vectorize(lambda e: e * x, otypes=[object])(m)


def ring_to_complex(m: np.ndarray) -> np.ndarray:
    return np.vectorize(complex, otypes=[complex])(m) if m.size else np.zeros(m.shape, complex)


def ring_equal(x: np.ndarray, y: np.ndarray) -> bool:
    if x.shape != y.shape:
        return False
    return all(RingScalar.coerce(p) == RingScalar.coerce(q) for p, q in zip(x.ravel(), y.ravel()))


def max_exponent(m: np.ndarray) -> int:
    return max((RingScalar.coerce(x).s for x in m.ravel()), default=0)


def condition1_check(m: np.ndarray) -> bool:
    """True when every entry has denominator at most 4 in canonical form."""
    return max_exponent(m) <= 2
