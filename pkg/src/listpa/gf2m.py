"""Arithmetic in the binary fields GF(2^m) for 1 <= m <= 64.

Elements are plain Python ints: bit i of the value is the coefficient of
x^i (little-endian coefficient order).  Multiplication is carry-less
polynomial multiplication followed by reduction modulo an irreducible
polynomial of degree m, supplied by a :class:`FieldSpec`.

The cap at m = 64 keeps every element inside one machine word.  Hash
outputs are at most m bits wide (see listpa.listhash), so this bounds the
per-hash key width to 64 bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

MAX_DEGREE = 64

# Lowest-valued irreducible polynomial for each degree 1..64, verified by
# validate_field() in the test suite.  m=8 is the AES polynomial
# x^8 + x^4 + x^3 + x + 1.
DEFAULT_POLYS: dict[int, int] = {
    1: 0x2,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
    17: 0x20009,
    18: 0x40009,
    19: 0x80027,
    20: 0x100009,
    21: 0x200005,
    22: 0x400003,
    23: 0x800021,
    24: 0x100001B,
    25: 0x2000009,
    26: 0x400001B,
    27: 0x8000027,
    28: 0x10000003,
    29: 0x20000005,
    30: 0x40000003,
    31: 0x80000009,
    32: 0x10000008D,
    33: 0x20000004B,
    34: 0x40000001B,
    35: 0x800000005,
    36: 0x1000000035,
    37: 0x200000003F,
    38: 0x4000000063,
    39: 0x8000000011,
    40: 0x10000000039,
    41: 0x20000000009,
    42: 0x40000000027,
    43: 0x80000000059,
    44: 0x100000000021,
    45: 0x20000000001B,
    46: 0x400000000003,
    47: 0x800000000021,
    48: 0x100000000002D,
    49: 0x2000000000071,
    50: 0x400000000001D,
    51: 0x800000000004B,
    52: 0x10000000000009,
    53: 0x20000000000047,
    54: 0x4000000000007D,
    55: 0x80000000000047,
    56: 0x100000000000095,
    57: 0x200000000000011,
    58: 0x400000000000063,
    59: 0x80000000000007B,
    60: 0x1000000000000003,
    61: 0x2000000000000027,
    62: 0x4000000000000069,
    63: 0x8000000000000003,
    64: 0x1000000000000001B,
}


class FieldError(ValueError):
    """Invalid field parameters or out-of-range elements."""


@dataclass(frozen=True)
class FieldSpec:
    """Binary field parameters: degree m and reduction polynomial.

    ``poly`` is an (m+1)-bit integer with bit m set (degree exactly m).
    """

    m: int
    poly: int

    def __post_init__(self) -> None:
        if not 1 <= self.m <= MAX_DEGREE:
            raise FieldError(f"field degree m={self.m} out of range [1, {MAX_DEGREE}]")
        if self.poly.bit_length() - 1 != self.m:
            raise FieldError(
                f"reduction polynomial 0x{self.poly:X} does not have degree {self.m}"
            )

    @classmethod
    def default(cls, m: int) -> "FieldSpec":
        if m not in DEFAULT_POLYS:
            raise FieldError(f"field degree m={m} out of range [1, {MAX_DEGREE}]")
        return cls(m, DEFAULT_POLYS[m])

    @property
    def order(self) -> int:
        return 1 << self.m

    def check_element(self, a: int) -> None:
        if not 0 <= a < self.order:
            raise FieldError(f"element {a} out of range for GF(2^{self.m})")


def _poly_mod(a: int, b: int) -> int:
    """Remainder of carry-less division of a by b over GF(2)."""
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _prime_factors(n: int) -> set[int]:
    out: set[int] = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _frobenius_x(iterations: int, spec: FieldSpec) -> int:
    """x^(2^iterations) reduced modulo spec.poly."""
    r = _poly_mod(2, spec.poly)
    for _ in range(iterations):
        r = gf_mul(spec, r, r)
    return r


def validate_field(spec: FieldSpec) -> bool:
    """True iff spec.poly is irreducible of degree m.

    Rabin's test: x^(2^m) == x (mod poly), and for each prime p | m the
    polynomial x^(2^(m/p)) - x is coprime to poly.  No factorization of
    the polynomial itself is needed.
    """
    if not 1 <= spec.m <= MAX_DEGREE:
        raise FieldError(f"field degree m={spec.m} out of range")
    x_red = _poly_mod(2, spec.poly)
    if _frobenius_x(spec.m, spec) != x_red:
        return False
    for p in _prime_factors(spec.m):
        h = _frobenius_x(spec.m // p, spec) ^ x_red
        if _poly_gcd(spec.poly, h) != 1:
            return False
    return True


def gf_add(a: int, b: int) -> int:
    """Field addition: bitwise XOR (characteristic 2)."""
    return a ^ b


def gf_mul(spec: FieldSpec, a: int, b: int) -> int:
    """Carry-less product of a and b reduced modulo spec.poly."""
    spec.check_element(a)
    spec.check_element(b)
    m = spec.m
    poly = spec.poly
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> m) & 1:
            a ^= poly
    return r


def gf_inner_product(spec: FieldSpec, a: Sequence[int], x: Sequence[int]) -> int:
    """Sum over i of a[i] * x[i] in GF(2^m)."""
    if len(a) != len(x):
        raise FieldError(f"length mismatch: {len(a)} vs {len(x)}")
    if not a:
        raise FieldError("inner product of empty sequences")
    acc = 0
    for ai, xi in zip(a, x):
        acc ^= gf_mul(spec, ai, xi)
    return acc
