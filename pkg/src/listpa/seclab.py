"""Desk-scale verification of the list-security claims.

Everything here works on finite classical sources with exact integer
weights, so min-entropy reduces to the guessing-probability form and
trace distance to statistical distance.  Distances are exact rationals
in exact mode; Monte-Carlo mode samples hash seeds but still computes
the exact conditional distance per sampled seed.

Real-vs-ideal distance convention: the hash seed is public, so the
distance is computed per seed and then averaged over seeds (the
expectation-over-hash form of the leftover hash lemma).  The ideal is
the product of L independent uniform keys, a uniform secret index, and
the source's marginal on the adversary value; the adversary's ideal
copies of the off-list keys are exact duplicates of registers already
present in the joint distribution and are therefore left implicit.

Two exactness-preserving reductions are used when enumerating seeds:
the uniform offsets permute key space and leave the per-seed distance
unchanged, so only the linear seed parts are enumerated; and the
secret index is uniform and independent on both sides, so it sums out
of the distance.  Both are checked against full brute-force enumeration
in the test suite.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Literal

import numpy as np

from .bitconv import BitString, bits_pack, xor_convolve_naive
from .gf2m import FieldSpec
from .listhash import Construction, ip_hash_pair
from .rngstream import RandomStream


class SourceError(ValueError):
    """Malformed CQ source."""


class EnumerationError(ValueError):
    """Requested exact enumeration is infeasibly large."""


@dataclass(frozen=True)
class CqSource:
    """Finite classical joint distribution over (x, adversary value e).

    Probabilities are weight/total as exact rationals; x ranges over
    n-bit strings encoded as integers.
    """

    n: int
    weights: dict[tuple[int, Hashable], int]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise SourceError("source bit-length must be nonnegative")
        if not self.weights:
            raise SourceError("source has no support")
        for (x, _), w in self.weights.items():
            if not 0 <= x < (1 << self.n):
                raise SourceError(f"x={x} outside {{0,1}}^{self.n}")
            if w < 0:
                raise SourceError("weights must be nonnegative")
        if self.total <= 0:
            raise SourceError("total weight must be positive")

    @property
    def total(self) -> int:
        return sum(self.weights.values())

    def e_values(self) -> list[Hashable]:
        return sorted({e for _, e in self.weights}, key=repr)

    def e_marginal(self) -> dict[Hashable, int]:
        out: dict[Hashable, int] = {}
        for (_, e), w in self.weights.items():
            out[e] = out.get(e, 0) + w
        return out

    def relabel(self, mapping: dict[Hashable, Hashable]) -> "CqSource":
        out: dict[tuple[int, Hashable], int] = {}
        for (x, e), w in self.weights.items():
            key = (x, mapping.get(e, e))
            out[key] = out.get(key, 0) + w
        return CqSource(self.n, out)

    def to_lines(self) -> str:
        lines = [f"# n={self.n}"]
        for (x, e), w in sorted(self.weights.items(), key=lambda kv: (kv[0][0], repr(kv[0][1]))):
            bits = "".join(str((x >> i) & 1) for i in range(self.n))
            lines.append(f"{bits} {e} {w}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_lines(cls, text: str | Iterable[str]) -> "CqSource":
        """Parse "x_bits e_token weight" lines; '#' starts a comment."""
        if isinstance(text, str):
            text = text.splitlines()
        weights: dict[tuple[int, Hashable], int] = {}
        n: int | None = None
        for raw in text:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise SourceError(f"expected 'bits e weight', got {line!r}")
            bits, e, w = parts
            if set(bits) - {"0", "1"}:
                raise SourceError(f"bad bit literal {bits!r}")
            if n is None:
                n = len(bits)
            elif len(bits) != n:
                raise SourceError("inconsistent bit-string lengths")
            x = sum(int(c) << i for i, c in enumerate(bits))
            key = (x, e)
            weights[key] = weights.get(key, 0) + int(w)
        if n is None:
            raise SourceError("no data lines")
        return cls(n, weights)


@dataclass(frozen=True)
class DistanceReport:
    """Real-vs-ideal distance, exact or Monte-Carlo over seeds."""

    value: Fraction
    mode: Literal["exact", "monte-carlo"]
    samples: int | None = None
    stderr: float | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.value <= 1:
            raise ValueError(f"distance {self.value} outside [0, 1]")


def _neg_log2(p: Fraction) -> float:
    return math.log2(p.denominator) - math.log2(p.numerator)


def min_entropy(source: CqSource) -> float:
    """-log2 of the adversary's optimal guessing probability for x given e."""
    best: dict[Hashable, int] = {}
    for (_, e), w in source.weights.items():
        if w > best.get(e, -1):
            best[e] = w
    pguess = Fraction(sum(best.values()), source.total)
    return _neg_log2(pguess)


def smooth_min_entropy(source: CqSource, epsilon: float | Fraction) -> float:
    """Min-entropy after removing up to epsilon probability mass.

    Maximizes over subnormalized q <= p with removed mass <= epsilon.
    Only the per-e column maxima matter, and the trade-off is separable
    and convex, so a greedy water-filling is optimal: repeatedly lower
    the column whose current top level has the fewest tied entries,
    since that costs the least budget per unit of guessing probability.
    """
    eps = Fraction(epsilon)
    if not 0 <= eps < 1:
        raise ValueError(f"epsilon={epsilon} must lie in [0, 1)")
    columns: dict[Hashable, list[int]] = {}
    for (_, e), w in source.weights.items():
        columns.setdefault(e, []).append(w)
    budget = eps * source.total

    levels: dict[Hashable, Fraction] = {}
    heap: list[tuple[int, int, Hashable]] = []
    state: dict[Hashable, tuple[Fraction, int, list[int]]] = {}
    for seq, (e, ws) in enumerate(sorted(columns.items(), key=lambda kv: repr(kv[0]))):
        ws.sort(reverse=True)
        top = Fraction(ws[0])
        count = next((i for i, w in enumerate(ws) if w < ws[0]), len(ws))
        state[e] = (top, count, ws)
        levels[e] = top
        heapq.heappush(heap, (count, seq, e))
    while budget > 0 and heap:
        count, seq, e = heapq.heappop(heap)
        t, cnt, ws = state[e]
        nxt = Fraction(ws[cnt]) if cnt < len(ws) else Fraction(0)
        cost = cnt * (t - nxt)
        if cost <= budget:
            budget -= cost
            t = nxt
            while cnt < len(ws) and Fraction(ws[cnt]) == t:
                cnt += 1
            state[e] = (t, cnt, ws)
            levels[e] = t
            if t > 0:
                heapq.heappush(heap, (cnt, seq, e))
        else:
            t -= budget / cnt
            budget = Fraction(0)
            state[e] = (t, cnt, ws)
            levels[e] = t
    remaining = sum(levels.values())
    if remaining <= 0:
        return float(source.n)
    return min(_neg_log2(Fraction(remaining, source.total)), float(source.n))


def make_syndrome_source(n: int, k: int) -> CqSource:
    """Uniform n-bit x; the adversary learns the last n-k bits of x.

    Its min-entropy is exactly k: each adversary value pins x to a coset
    of 2^k equally likely strings.
    """
    if not 0 <= k <= n:
        raise SourceError(f"require 0 <= k <= n, got k={k}, n={n}")
    return CqSource(n, {(x, x >> k): 1 for x in range(1 << n)})


# --- seed enumeration helpers -------------------------------------------


def _ip_dims(n: int, ell: int, m: int) -> tuple[FieldSpec, int, int]:
    spec = FieldSpec.default(m)
    chunks = -(-n // m)
    return spec, chunks, chunks * m


def linear_seed_count(construction: Construction, n: int, ell: int, m: int | None = None) -> int:
    """Number of linear seed parts (offsets excluded) for one hash."""
    if construction == "ip":
        if m is None:
            raise ValueError("IP construction needs the field degree m")
        _, _, abits = _ip_dims(n, ell, m)
        return 1 << abits
    if construction == "toeplitz":
        return 1 << (n + ell - 1)
    raise ValueError(f"unknown construction {construction!r}")


def _linear_key_tables(
    construction: Construction, n: int, ell: int, m: int | None = None, limit: int = 1 << 22
) -> np.ndarray:
    """Key value of every (linear seed, input) pair, offsets at zero.

    Shape (S, 2^n); entry [s, x] is the hash of x under linear seed s.
    """
    s_count = linear_seed_count(construction, n, ell, m)
    if s_count << n > limit:
        raise EnumerationError(
            f"seed table of {s_count} x {1 << n} entries exceeds the enumeration limit"
        )
    table = np.empty((s_count, 1 << n), dtype=np.int64)
    xs = [BitString.from_int(x, n) for x in range(1 << n)]
    if construction == "ip":
        assert m is not None
        spec, chunks, _ = _ip_dims(n, ell, m)
        mask = (1 << m) - 1
        for s in range(s_count):
            a = tuple((s >> (m * i)) & mask for i in range(chunks))
            for x, xb in enumerate(xs):
                table[s, x] = ip_hash_pair(spec, a, 0, xb, ell)
    else:
        for s in range(s_count):
            rb = BitString.from_int(s, n + ell - 1)
            for x, xb in enumerate(xs):
                table[s, x] = xor_convolve_naive(rb, xb, ell).to_int()
    return table


def universality_check(
    construction: Construction, n: int, ell: int, m: int | None = None, max_seed_bits: int = 24
) -> Fraction:
    """Max deviation of distinct-pair joint frequencies from 2^(-2 ell).

    Enumerates the full seed space (linear part and offset) and counts
    (F(x), F(x')) for every ordered pair of distinct inputs; returns the
    largest absolute deviation as an exact rational.  Zero means the
    family is exactly strongly two-universal at these parameters.
    """
    s_lin = linear_seed_count(construction, n, ell, m)
    total_seeds = s_lin << ell
    if total_seeds.bit_length() - 1 > max_seed_bits:
        raise EnumerationError(
            f"{total_seeds} seeds exceed the 2^{max_seed_bits} enumeration bound"
        )
    table = _linear_key_tables(construction, n, ell, m)
    target = Fraction(1, 1 << (2 * ell))
    worst = Fraction(0)
    n_inputs = 1 << n
    for x in range(n_inputs):
        for xp in range(n_inputs):
            if x == xp:
                continue
            counts = np.zeros((1 << ell, 1 << ell), dtype=np.int64)
            for b in range(1 << ell):
                y = table[:, x] ^ b
                yp = table[:, xp] ^ b
                np.add.at(counts, (y, yp), 1)
            for row in counts:
                for c in row:
                    dev = abs(Fraction(int(c), total_seeds) - target)
                    if dev > worst:
                        worst = dev
    return worst


def ideal_distribution(
    source: CqSource, ell: int, L: int
) -> dict[tuple[tuple[int, ...], int, Hashable], Fraction]:
    """Product of L uniform keys, a uniform index, and the e marginal."""
    if ell < 1 or L < 1:
        raise ValueError("ell and L must be positive")
    if L * ell > 16:
        raise EnumerationError("ideal distribution too large to materialize")
    marg = source.e_marginal()
    total = source.total
    keyspace = 1 << ell
    out: dict[tuple[tuple[int, ...], int, Hashable], Fraction] = {}
    scale = Fraction(1, keyspace**L * L * total)

    def key_tuples(depth: int, prefix: tuple[int, ...]):
        if depth == 0:
            yield prefix
            return
        for v in range(keyspace):
            yield from key_tuples(depth - 1, prefix + (v,))

    for keys in key_tuples(L, ()):
        for i in range(1, L + 1):
            for e, w in marg.items():
                out[(keys, i, e)] = w * scale
    return out


def _support_arrays(source: CqSource) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, list]:
    evals = source.e_values()
    eindex = {e: i for i, e in enumerate(evals)}
    items = sorted(source.weights.items(), key=lambda kv: (kv[0][0], repr(kv[0][1])))
    xs = np.array([x for (x, _), _ in items], dtype=np.int64)
    eidx = np.array([eindex[e] for (_, e), _ in items], dtype=np.int64)
    ws = np.array([w for _, w in items], dtype=np.float64)
    we = np.zeros(len(evals), dtype=np.float64)
    marg = source.e_marginal()
    for e, i in eindex.items():
        we[i] = marg[e]
    return xs, eidx, ws, we, evals


def _distance_numerators(
    table_sup: np.ndarray,
    tuples: np.ndarray,
    eidx: np.ndarray,
    ws: np.ndarray,
    we: np.ndarray,
    ell: int,
    L: int,
) -> np.ndarray:
    """Scaled per-seed distances for a batch of seed tuples.

    Returns integers; the per-seed distance is numerator / (2 * total * 2^(L*ell)).
    """
    t = tuples.shape[0]
    n_e = we.shape[0]
    keyspace = 1 << (L * ell)
    acc = np.zeros((t, table_sup.shape[1]), dtype=np.int64)
    for j in range(L):
        acc |= table_sup[tuples[:, j]] << (ell * j)
    cells = acc * n_e + eidx[None, :]
    flat = (np.arange(t, dtype=np.int64)[:, None] * (keyspace * n_e) + cells).ravel()
    hist = np.bincount(
        flat, weights=np.broadcast_to(ws, cells.shape).ravel(), minlength=t * keyspace * n_e
    ).reshape(t, keyspace, n_e)
    nums = np.abs(hist * float(keyspace) - we[None, None, :]).sum(axis=(1, 2))
    return np.rint(nums).astype(np.int64)


def real_ideal_distance(
    source: CqSource,
    construction: Construction,
    ell: int,
    L: int,
    mode: Literal["exact", "monte-carlo"] = "exact",
    m: int | None = None,
    samples: int = 2000,
    rng: RandomStream | None = None,
    max_enum: int = 1 << 26,
    max_work: int = 1 << 32,
) -> DistanceReport:
    """Seed-averaged statistical distance between real and ideal outputs.

    Exact mode enumerates every combination of linear seed parts; the
    uniform offsets and the uniform independent index are summed out
    analytically (both are exactness-preserving).  Monte-Carlo mode
    samples seed combinations and averages the exact per-seed distances.
    """
    if ell < 1 or L < 1:
        raise ValueError("ell and L must be positive")
    s_count = linear_seed_count(construction, source.n, ell, m)
    table = _linear_key_tables(construction, source.n, ell, m)
    xs, eidx, ws, we, _ = _support_arrays(source)
    table_sup = table[:, xs]
    denom_per_seed = 2 * source.total * (1 << (L * ell))
    n_cells = (1 << (L * ell)) * we.shape[0]
    batch = max(1, (1 << 22) // max(n_cells, 1))

    if mode == "exact":
        n_tuples = s_count**L
        if n_tuples > max_enum:
            raise EnumerationError(
                f"{s_count}^{L} seed combinations exceed the exact-mode limit {max_enum}"
            )
        if n_tuples * n_cells > max_work:
            raise EnumerationError(
                f"exact mode needs {n_tuples} x {n_cells} histogram cells, over the work limit"
            )
        total_num = 0
        radices = [s_count**j for j in range(L)]
        for start in range(0, n_tuples, batch):
            flat = np.arange(start, min(start + batch, n_tuples), dtype=np.int64)
            tuples = np.stack([(flat // r) % s_count for r in radices], axis=1)
            total_num += int(
                _distance_numerators(table_sup, tuples, eidx, ws, we, ell, L).sum()
            )
        value = Fraction(total_num, n_tuples * denom_per_seed)
        return DistanceReport(value, "exact")

    if mode != "monte-carlo":
        raise ValueError(f"unknown mode {mode!r}")
    if samples < 1:
        raise ValueError("samples must be positive")
    gen = (rng or RandomStream(0)).substream("distance-mc").numpy_rng()
    total_num = 0
    sq_sum = 0.0
    done = 0
    while done < samples:
        count = min(batch, samples - done)
        tuples = gen.integers(0, s_count, size=(count, L), dtype=np.int64)
        nums = _distance_numerators(table_sup, tuples, eidx, ws, we, ell, L)
        total_num += int(nums.sum())
        sq_sum += float(((nums / denom_per_seed) ** 2).sum())
        done += count
    value = Fraction(total_num, samples * denom_per_seed)
    mean = float(value)
    var = max(sq_sum / samples - mean * mean, 0.0)
    stderr = math.sqrt(var / samples)
    return DistanceReport(value, "monte-carlo", samples=samples, stderr=stderr)


@dataclass(frozen=True)
class QllhlVerdict:
    status: Literal["pass", "fail", "bound not applicable"]
    distance: DistanceReport
    bound: float
    smooth_k: float


def verify_qllhl(
    source: CqSource,
    epsilon: float,
    L: int,
    ell: int,
    mode: Literal["exact", "monte-carlo"] = "exact",
    construction: Construction = "ip",
    m: int | None = 1,
    samples: int = 2000,
    rng: RandomStream | None = None,
) -> QllhlVerdict:
    """Check the list leftover-hash bound: distance <= 4 epsilon.

    Applicable only when ell <= H_min^eps + log2 L - 2 log2(1/eps) - 3;
    otherwise the verdict is "bound not applicable" and the measured
    distance is still reported.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon={epsilon} must lie in (0, 1)")
    smooth_k = smooth_min_entropy(source, epsilon)
    bound = smooth_k + math.log2(L) - 2.0 * math.log2(1.0 / epsilon) - 3.0
    report = real_ideal_distance(
        source, construction, ell, L, mode=mode, m=m, samples=samples, rng=rng
    )
    if ell > bound + 1e-9:
        status: Literal["pass", "fail", "bound not applicable"] = "bound not applicable"
    elif report.value <= 4 * Fraction(epsilon):
        status = "pass"
    else:
        status = "fail"
    return QllhlVerdict(status, report, bound, smooth_k)
