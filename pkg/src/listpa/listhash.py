"""List privacy amplification: seed sampling, L-fold hashing, index draw.

Two strongly two-universal constructions are provided:

* Inner-product (IP): the input is split into m-bit field elements and
  hashed to the low ell bits of a GF(2^m) inner product, XOR an ell-bit
  offset.  Requires ell <= m.
* Toeplitz: the input is multiplied by an ell x n binary Toeplitz
  matrix given by an (n+ell-1)-bit generating vector, XOR an ell-bit
  offset.

Both sample L independent (vector, offset) pairs; a run of list PA
additionally draws a secret index I uniform in [L] from a randomness
substream disjoint from seed sampling, after hashing.  The index is
never written to the same output as the keys.

On the IP output convention: the inner product is a single field
element, and we define the hash value as its ell least-significant bits
(requiring ell <= m) XORed with the offset.  For distinct inputs the
inner-product difference is uniform over the field, truncation of a
uniform element is uniform, and the fresh offset makes the output pair
jointly uniform, so strong two-universality holds; each hash consumes
exactly n + ell seed bits when m divides n.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Literal, Sequence

from .bitconv import BitString, ConvolutionError, InputTransform, _convolve_with_transform, xor_convolve_naive
from .gf2m import FieldError, FieldSpec, gf_inner_product
from .rngstream import RandomStream

Construction = Literal["ip", "toeplitz"]

SEED_MAGIC = b"LPA1"
_TAG = {"ip": 0, "toeplitz": 1}
_TAG_INV = {v: k for k, v in _TAG.items()}


class SeedFormatError(ValueError):
    """Malformed seed file."""


@dataclass(frozen=True)
class IpSeed:
    """L pairs (a_j, b_j): coefficient vectors over GF(2^m) plus offsets."""

    spec: FieldSpec
    n: int
    ell: int
    L: int
    pairs: tuple[tuple[tuple[int, ...], BitString], ...]
    randomness_bits: int = 0

    @property
    def chunks(self) -> int:
        return -(-self.n // self.spec.m)

    def __post_init__(self) -> None:
        if self.L < 1 or len(self.pairs) != self.L:
            raise ValueError(f"expected {self.L} seed pairs, got {len(self.pairs)}")
        if not 1 <= self.ell <= self.spec.m:
            raise FieldError(
                f"IP output length ell={self.ell} must satisfy 1 <= ell <= m={self.spec.m}"
            )
        for a, b in self.pairs:
            if len(a) != self.chunks:
                raise ValueError(f"coefficient vector has {len(a)} elements, expected {self.chunks}")
            if b.length != self.ell:
                raise ValueError("offset length mismatch")


@dataclass(frozen=True)
class ToeplitzSeed:
    """L pairs (r_j, b_j): generating vectors plus offsets."""

    n: int
    ell: int
    L: int
    pairs: tuple[tuple[BitString, BitString], ...]
    randomness_bits: int = 0

    def __post_init__(self) -> None:
        if self.L < 1 or len(self.pairs) != self.L:
            raise ValueError(f"expected {self.L} seed pairs, got {len(self.pairs)}")
        if self.ell < 1:
            raise ValueError("output length must be positive")
        for r, b in self.pairs:
            if r.length != self.n + self.ell - 1:
                raise ValueError("generating vector length mismatch")
            if b.length != self.ell:
                raise ValueError("offset length mismatch")


@dataclass(frozen=True)
class ListKeyBundle:
    """L candidate keys plus the secret index (1-based)."""

    keys: tuple[BitString, ...]
    index: int
    seed: IpSeed | ToeplitzSeed | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.keys:
            raise ValueError("bundle must contain at least one key")
        if not 1 <= self.index <= len(self.keys):
            raise ValueError(f"index {self.index} out of range [1, {len(self.keys)}]")
        ell = self.keys[0].length
        if any(k.length != ell for k in self.keys):
            raise ValueError("all keys must have the same length")


# --- seed sampling -------------------------------------------------------


def ip_sample_seed(rng: RandomStream, spec: FieldSpec, n: int, ell: int, L: int) -> IpSeed:
    """L independent IP pairs; consumes L*(ceil(n/m)*m + ell) bits."""
    if n < 1 or L < 1:
        raise ValueError("n and L must be positive")
    if not 1 <= ell <= spec.m:
        raise FieldError(f"ell={ell} must satisfy 1 <= ell <= m={spec.m}")
    chunks = -(-n // spec.m)
    before = rng.bits_consumed
    pairs = []
    for _ in range(L):
        a = tuple(rng.getbits(spec.m) for _ in range(chunks))
        b = BitString.from_int(rng.getbits(ell), ell)
        pairs.append((a, b))
    return IpSeed(spec, n, ell, L, tuple(pairs), randomness_bits=rng.bits_consumed - before)


def toeplitz_sample_seed(rng: RandomStream, n: int, ell: int, L: int) -> ToeplitzSeed:
    """L independent Toeplitz pairs; consumes L*(n + 2*ell - 1) bits."""
    if n < 1 or ell < 1 or L < 1:
        raise ValueError("n, ell, L must be positive")
    before = rng.bits_consumed
    pairs = []
    for _ in range(L):
        r = BitString.from_int(rng.getbits(n + ell - 1), n + ell - 1)
        b = BitString.from_int(rng.getbits(ell), ell)
        pairs.append((r, b))
    return ToeplitzSeed(n, ell, L, tuple(pairs), randomness_bits=rng.bits_consumed - before)


# --- hashing -------------------------------------------------------------


def input_chunks(x: BitString, m: int) -> tuple[int, ...]:
    """Zero-pad x to a multiple of m and split into m-bit field elements.

    The first bit of x is the least-significant coefficient of the first
    element.  Padding positions are fixed zeros, so distinct inputs stay
    distinct and universality is unaffected.
    """
    v = x.to_int()
    count = -(-x.length // m)
    mask = (1 << m) - 1
    return tuple((v >> (m * i)) & mask for i in range(max(count, 1)))


def ip_hash_pair(spec: FieldSpec, a: Sequence[int], b_value: int, x: BitString, ell: int) -> int:
    """Single IP hash: low ell bits of <a, chunks(x)>, XOR offset."""
    chunks = input_chunks(x, spec.m)
    if len(a) != len(chunks):
        raise ValueError(f"coefficient vector has {len(a)} elements, expected {len(chunks)}")
    ip = gf_inner_product(spec, a, chunks)
    return (ip & ((1 << ell) - 1)) ^ b_value


def ip_list_hash(seed: IpSeed, x: BitString) -> list[BitString]:
    """All L IP hash values of x."""
    if x.length != seed.n:
        raise ValueError(f"input has {x.length} bits, seed expects {seed.n}")
    return [
        BitString.from_int(ip_hash_pair(seed.spec, a, b.to_int(), x, seed.ell), seed.ell)
        for a, b in seed.pairs
    ]


def toeplitz_list_hash(seed: ToeplitzSeed, x: BitString, use_naive: bool = False) -> list[BitString]:
    """All L Toeplitz hash values of x.

    The input transform is computed once and shared across the L
    generating vectors; use_naive selects the word-loop reference path.
    """
    if x.length != seed.n:
        raise ValueError(f"input has {x.length} bits, seed expects {seed.n}")
    if use_naive:
        return [xor_convolve_naive(r, x, seed.ell) ^ b for r, b in seed.pairs]
    xt = InputTransform(x, seed.ell)
    return [_convolve_with_transform(xt, r) ^ b for r, b in seed.pairs]


def draw_secret_index(rng: RandomStream, L: int) -> int:
    """Uniform index in {1, ..., L}; callers pass an index-only substream."""
    if L < 1:
        raise ValueError("list size must be at least 1")
    return rng.randbelow(L) + 1


@dataclass(frozen=True)
class ListPaParams:
    n: int
    ell: int
    L: int
    construction: Construction = "toeplitz"
    spec: FieldSpec | None = None  # IP only; defaults to the built-in table

    def field_spec(self) -> FieldSpec:
        if self.spec is not None:
            return self.spec
        return FieldSpec.default(max(self.ell, 1))


def list_pa(x: BitString, params: ListPaParams, rng: RandomStream) -> ListKeyBundle:
    """Sample a seed, hash, and draw the secret index.

    The index is drawn after hashing from the substream "index", disjoint
    from the seed-sampling substream "seed".  The seed is retained on the
    bundle: it is public in the protocol.
    """
    if x.length != params.n:
        raise ValueError(f"input has {x.length} bits, expected {params.n}")
    seed_rng = rng.substream("seed")
    if params.construction == "ip":
        seed: IpSeed | ToeplitzSeed = ip_sample_seed(
            seed_rng, params.field_spec(), params.n, params.ell, params.L
        )
        keys = ip_list_hash(seed, x)
    elif params.construction == "toeplitz":
        seed = toeplitz_sample_seed(seed_rng, params.n, params.ell, params.L)
        keys = toeplitz_list_hash(seed, x)
    else:
        raise ValueError(f"unknown construction {params.construction!r}")
    index = draw_secret_index(rng.substream("index"), params.L)
    return ListKeyBundle(tuple(keys), index, seed)


# --- seed and key file formats ------------------------------------------

_HEADER = struct.Struct("<4sBHQQQ")


def _concat_bits(parts: list[BitString]) -> bytes:
    total = 0
    value = 0
    for part in parts:
        value |= part.to_int() << total
        total += part.length
    return BitString.from_int(value, total).payload


def write_seed_bytes(seed: IpSeed | ToeplitzSeed) -> bytes:
    """Serialize a seed: header then packed seed bits in pair order."""
    if isinstance(seed, IpSeed):
        head = _HEADER.pack(SEED_MAGIC, _TAG["ip"], seed.spec.m, seed.n, seed.ell, seed.L)
        parts = []
        for a, b in seed.pairs:
            for elem in a:
                parts.append(BitString.from_int(elem, seed.spec.m))
            parts.append(b)
    else:
        head = _HEADER.pack(SEED_MAGIC, _TAG["toeplitz"], 0, seed.n, seed.ell, seed.L)
        parts = []
        for r, b in seed.pairs:
            parts.append(r)
            parts.append(b)
    return head + _concat_bits(parts)


def read_seed_bytes(data: bytes) -> IpSeed | ToeplitzSeed:
    if len(data) < _HEADER.size:
        raise SeedFormatError("seed data shorter than header")
    magic, tag, m, n, ell, L = _HEADER.unpack_from(data)
    if magic != SEED_MAGIC:
        raise SeedFormatError(f"bad magic {magic!r}")
    if tag not in _TAG_INV:
        raise SeedFormatError(f"unknown construction tag {tag}")
    body = int.from_bytes(data[_HEADER.size :], "little")
    pos = 0

    def take(nbits: int) -> int:
        nonlocal pos
        v = (body >> pos) & ((1 << nbits) - 1)
        pos += nbits
        return v

    if _TAG_INV[tag] == "ip":
        spec = FieldSpec(m, FieldSpec.default(m).poly)
        chunks = -(-n // m)
        pairs = []
        for _ in range(L):
            a = tuple(take(m) for _ in range(chunks))
            b = BitString.from_int(take(ell), ell)
            pairs.append((a, b))
        expected_bits = L * (chunks * m + ell)
        seed: IpSeed | ToeplitzSeed = IpSeed(spec, n, ell, L, tuple(pairs))
    else:
        pairs = []
        for _ in range(L):
            r = BitString.from_int(take(n + ell - 1), n + ell - 1)
            b = BitString.from_int(take(ell), ell)
            pairs.append((r, b))
        expected_bits = L * (n + 2 * ell - 1)
        seed = ToeplitzSeed(n, ell, L, tuple(pairs))
    if len(data) - _HEADER.size != (expected_bits + 7) // 8:
        raise SeedFormatError("seed payload length mismatch")
    return seed


def write_key_bytes(keys: Sequence[BitString]) -> bytes:
    """L keys of ell bits packed contiguously.  Never includes the index."""
    return _concat_bits(list(keys))


def read_key_bytes(data: bytes, ell: int, L: int) -> list[BitString]:
    if len(data) != (ell * L + 7) // 8:
        raise SeedFormatError("key payload length mismatch")
    body = int.from_bytes(data, "little")
    mask = (1 << ell) - 1
    return [BitString.from_int((body >> (j * ell)) & mask, ell) for j in range(L)]
