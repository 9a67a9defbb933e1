"""Packed bit strings and exact GF(2) convolution.

A BitString stores bit i in byte i//8 at in-byte position i%8 (LSB
first); unused trailing bits of the last byte are zero.  This byte
layout is the normative on-disk bit order for all file formats in this
package.

Two Toeplitz matrix-vector routines are provided:

* :func:`xor_convolve_naive` -- direct double loop over 64-bit words,
  the reference oracle.
* :func:`xor_convolve_fast` -- bit-identical result via an exact
  number-theoretic transform: bits are lifted to residues modulo the
  prime p = 5*2^25 + 1, convolved with a radix-2 NTT, and each integer
  coefficient is reduced modulo 2.  No floating point is involved, and
  coefficients of the integer convolution are bounded by n < p, so the
  result is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

_WORD = 64
_WMASK = (1 << 64) - 1

# 5 * 2^25 + 1, prime; the multiplicative group has a subgroup of order 2^25,
# so power-of-two transforms up to 2^25 points are available.  3 generates
# the full multiplicative group.
NTT_PRIME = 167772161
_NTT_GENERATOR = 3
_NTT_MAX_LOG = 25


class ConvolutionError(ValueError):
    """Dimension mismatch or unsupported transform size."""


@dataclass(frozen=True)
class BitString:
    """Packed sequence of bits with explicit length."""

    length: int
    payload: bytes

    def __post_init__(self) -> None:
        expected = (self.length + 7) // 8
        if len(self.payload) != expected:
            raise ValueError(
                f"payload has {len(self.payload)} bytes, expected {expected} for {self.length} bits"
            )
        if self.length % 8 and self.payload and self.payload[-1] >> (self.length % 8):
            raise ValueError("unused trailing bits of the last byte must be zero")

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        if value < 0 or value >> length:
            raise ValueError(f"value does not fit in {length} bits")
        return cls(length, value.to_bytes((length + 7) // 8, "little"))

    def to_int(self) -> int:
        return int.from_bytes(self.payload, "little")

    @classmethod
    def zeros(cls, length: int) -> "BitString":
        return cls(length, bytes((length + 7) // 8))

    def bit(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range for length {self.length}")
        return (self.payload[i // 8] >> (i % 8)) & 1

    def __xor__(self, other: "BitString") -> "BitString":
        if self.length != other.length:
            raise ValueError("XOR of bit strings with different lengths")
        return BitString.from_int(self.to_int() ^ other.to_int(), self.length)

    def words(self) -> list[int]:
        """The bits as a list of 64-bit little-endian words."""
        v = self.to_int()
        n_words = (self.length + _WORD - 1) // _WORD
        return [(v >> (_WORD * i)) & _WMASK for i in range(n_words)]

    def __repr__(self) -> str:  # pragma: no cover
        return f"BitString(length={self.length}, bits={self.to_int():0{max(self.length, 1)}b})"


def bits_pack(bits: Sequence[int] | Iterable[int]) -> BitString:
    """Pack a 0/1 sequence into a BitString (bit 0 first)."""
    value = 0
    n = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bit value {b!r} is not 0 or 1")
        value |= b << n
        n += 1
    return BitString.from_int(value, n)


def bits_unpack(s: BitString) -> list[int]:
    """Inverse of bits_pack."""
    v = s.to_int()
    return [(v >> i) & 1 for i in range(s.length)]


def _check_dims(r: BitString, x: BitString, ell: int) -> None:
    if ell < 1:
        raise ConvolutionError(f"output length {ell} must be positive")
    if x.length < 1:
        raise ConvolutionError("input must have at least one bit")
    if r.length != x.length + ell - 1:
        raise ConvolutionError(
            f"generating vector has {r.length} bits, expected n + ell - 1 = {x.length + ell - 1}"
        )


def xor_convolve_naive(r: BitString, x: BitString, ell: int) -> BitString:
    """Toeplitz product T(r) . x over GF(2) by a double loop over words.

    Position p of r holds the Toeplitz diagonal entry with index
    p - (n-1); output bit i (0-based) is the XOR over j of
    r[i - j] * x[j] in that indexing.
    """
    _check_dims(r, x, ell)
    n = x.length
    # Reversed generating vector: window for output i starts at bit ell-1-i.
    rrev = bits_pack(bits_unpack(r)[::-1])
    rw = rrev.words() + [0]
    xw = x.words()
    nw = len(xw)
    out = 0
    for i in range(ell):
        off = ell - 1 - i
        q, s = divmod(off, _WORD)
        acc = 0
        if s == 0:
            for w in range(nw):
                acc ^= rw[q + w] & xw[w]
        else:
            inv = _WORD - s
            for w in range(nw):
                acc ^= ((rw[q + w] >> s) | ((rw[q + w + 1] << inv) & _WMASK)) & xw[w]
        out |= (acc.bit_count() & 1) << i
    return BitString.from_int(out, ell)


# --- exact NTT over Z/pZ -------------------------------------------------

_root_cache: dict[int, tuple[np.ndarray, np.ndarray, int]] = {}


def _mod_powers(w: int, count: int) -> np.ndarray:
    """[w^0, w^1, ..., w^(count-1)] mod NTT_PRIME; count is a power of two."""
    p = NTT_PRIME
    out = np.ones(1, dtype=np.int64)
    cur = w % p
    while out.size < count:
        out = np.concatenate([out, out * cur % p])
        cur = cur * cur % p
    return out[:count]


def _stage_twiddles(log_m: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Per-stage twiddle tables for forward DIF and inverse DIT, plus 1/M."""
    if log_m in _root_cache:
        return _root_cache[log_m]
    p = NTT_PRIME
    m = 1 << log_m
    root = pow(_NTT_GENERATOR, (p - 1) >> log_m, p)
    root_inv = pow(root, p - 2, p)
    fwd = np.empty(m, dtype=np.int64)
    inv = np.empty_like(fwd)
    # Twiddles for half-block size h are stored at offset h (lengths 1,2,..,m/2).
    for h in (1 << k for k in range(log_m)):
        fwd[h : 2 * h] = _mod_powers(pow(root, m // (2 * h), p), h)
        inv[h : 2 * h] = _mod_powers(pow(root_inv, m // (2 * h), p), h)
    m_inv = pow(m, p - 2, p)
    _root_cache[log_m] = (fwd, inv, m_inv)
    return _root_cache[log_m]


def _ntt_forward(a: np.ndarray, log_m: int) -> np.ndarray:
    """Decimation-in-frequency NTT; output in bit-reversed order."""
    p = NTT_PRIME
    fwd, _, _ = _stage_twiddles(log_m)
    m = 1 << log_m
    h = m // 2
    while h >= 1:
        v = a.reshape(-1, 2 * h)
        x = v[:, :h]
        y = v[:, h:]
        s = (x + y) % p
        d = (x - y) % p * fwd[h : 2 * h][None, :] % p
        v[:, :h] = s
        v[:, h:] = d
        h //= 2
    return a


def _ntt_inverse(a: np.ndarray, log_m: int) -> np.ndarray:
    """Decimation-in-time inverse NTT; input in bit-reversed order."""
    p = NTT_PRIME
    _, inv, m_inv = _stage_twiddles(log_m)
    m = 1 << log_m
    h = 1
    while h < m:
        v = a.reshape(-1, 2 * h)
        x = v[:, :h].copy()
        t = v[:, h:] * inv[h : 2 * h][None, :] % p
        v[:, :h] = (x + t) % p
        v[:, h:] = (x - t) % p
        h *= 2
    a *= m_inv
    a %= p
    return a


def _bits_to_array(s: BitString, size: int) -> np.ndarray:
    arr = np.zeros(size, dtype=np.int64)
    bits = np.frombuffer(s.payload, dtype=np.uint8)
    unpacked = np.unpackbits(bits, bitorder="little", count=s.length)
    arr[: s.length] = unpacked
    return arr


class InputTransform:
    """NTT of a zero-padded input, reusable across generating vectors."""

    def __init__(self, x: BitString, ell: int):
        if ell < 1:
            raise ConvolutionError(f"output length {ell} must be positive")
        n = x.length
        conv_len = (n + ell - 1) + n - 1  # linear convolution length
        log_m = max(conv_len - 1, 1).bit_length()
        if log_m > _NTT_MAX_LOG:
            raise ConvolutionError(
                f"transform size 2^{log_m} exceeds supported order 2^{_NTT_MAX_LOG}"
            )
        self.n = n
        self.ell = ell
        self.log_m = log_m
        self.xhat = _ntt_forward(_bits_to_array(x, 1 << log_m), log_m)


def _convolve_with_transform(xt: InputTransform, r: BitString) -> BitString:
    rhat = _ntt_forward(_bits_to_array(r, 1 << xt.log_m), xt.log_m)
    rhat *= xt.xhat
    rhat %= NTT_PRIME
    c = _ntt_inverse(rhat, xt.log_m)
    # Output bit i (0-based) is linear-convolution coefficient n-1+i mod 2.
    seg = c[xt.n - 1 : xt.n - 1 + xt.ell] & 1
    packed = np.packbits(seg.astype(np.uint8), bitorder="little")
    return BitString(xt.ell, packed[: (xt.ell + 7) // 8].tobytes())


def xor_convolve_fast(r: BitString, x: BitString, ell: int) -> BitString:
    """Toeplitz product via exact NTT convolution; bit-identical to naive."""
    _check_dims(r, x, ell)
    return _convolve_with_transform(InputTransform(x, ell), r)
