"""Command-line surface for the package.

Exit codes: 0 success, 1 domain error or failed verification, 2 usage
error (argparse's convention).  Every subcommand is deterministic given
--master-seed; LPA_MASTER_SEED is the environment fallback.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction

from . import bounds, seclab
from .bitconv import BitString, xor_convolve_fast, xor_convolve_naive
from .gf2m import FieldSpec
from .listhash import (
    ip_list_hash,
    ip_sample_seed,
    toeplitz_list_hash,
    toeplitz_sample_seed,
    write_key_bytes,
    write_seed_bytes,
)
from .qkdsim import PipelineConfig, emit_report, simulate_round
from .rngstream import RandomStream


def _fmt(v: float) -> str:
    """Render a float, dropping a trailing .0 for integral values."""
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _master_seed(args: argparse.Namespace) -> int | str:
    raw = args.master_seed if args.master_seed is not None else os.environ.get(
        "LPA_MASTER_SEED", "0"
    )
    try:
        return int(raw)
    except ValueError:
        return raw


def cmd_bound(args: argparse.Namespace) -> int:
    eps = 2.0 ** -args.eps_exp
    ell = bounds.qllhl_length(args.k, eps, args.list)
    single = bounds.qlhl_length(args.k, eps)
    if args.clamp:
        print(bounds.clamped_length(ell))
    else:
        print(_fmt(ell))
    print(f"single-key comparison: {_fmt(single)}", file=sys.stderr)
    return 0


def cmd_threshold(args: argparse.Namespace) -> int:
    eps = 2.0 ** -args.eps_exp
    print("L,log2_list,threshold")
    for exp in args.list_exps:
        p = bounds.Bb84Params(
            n_sift=args.n_sift, e_b=args.e_b, epsilon=eps,
            L=None, alpha=exp / args.n_sift, delta_coeff=args.delta_c,
        )
        th = bounds.bb84_phase_threshold(p)
        label = str(1 << int(exp)) if float(exp).is_integer() and exp < 64 else f"2^{_fmt(exp)}"
        print(f"{label},{_fmt(float(exp))},{th:.6f}")
    print(
        "note: thresholds are computed as exact zeros of the key-length formula; "
        "tabulated values around 10.60%-10.80% seen elsewhere for these parameters "
        "do not follow from that formula and are intentionally not reproduced.",
        file=sys.stderr,
    )
    return 0


def cmd_hash(args: argparse.Namespace) -> int:
    data = open(args.in_file, "rb").read()
    if len(data) * 8 < args.bits:
        raise ValueError(f"input holds {len(data) * 8} bits, need {args.bits}")
    value = int.from_bytes(data, "little") & ((1 << args.bits) - 1)
    x = BitString.from_int(value, args.bits)
    rng = RandomStream(_master_seed(args))
    seed_rng = rng.substream("seed")
    if args.construction == "ip":
        spec = FieldSpec.default(args.m if args.m else max(args.ell, 1))
        seed = ip_sample_seed(seed_rng, spec, args.bits, args.ell, args.list)
        keys = ip_list_hash(seed, x)
    else:
        seed = toeplitz_sample_seed(seed_rng, args.bits, args.ell, args.list)
        keys = toeplitz_list_hash(seed, x, use_naive=args.naive)
    from .listhash import draw_secret_index

    index = draw_secret_index(rng.substream("index"), args.list)
    with open(args.seed_out, "wb") as f:
        f.write(write_seed_bytes(seed))
    with open(args.keys_out, "wb") as f:
        f.write(write_key_bytes(keys))
    if args.index_out:
        with open(args.index_out, "w") as f:
            f.write(f"{index}\n")
    else:
        print(f"index: {index}", file=sys.stderr)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.suite == "universality":
        dev = seclab.universality_check(args.construction, args.n, args.ell, m=args.m)
        print(f"max deviation: {dev}")
        return 0 if dev == 0 else 1
    if args.suite == "minentropy":
        ok = True
        for k in range(args.n + 1):
            h = seclab.min_entropy(seclab.make_syndrome_source(args.n, k))
            line_ok = h == float(k)
            ok &= line_ok
            print(f"n={args.n} k={k}: H_min={_fmt(h)} {'ok' if line_ok else 'MISMATCH'}")
        return 0 if ok else 1
    if args.suite == "qllhl":
        src = seclab.make_syndrome_source(args.n, args.k)
        verdict = seclab.verify_qllhl(
            src, args.eps, args.list, args.ell, mode=args.mode,
            construction=args.construction, m=args.m, samples=args.samples,
            rng=RandomStream(_master_seed(args)),
        )
        print(
            f"status: {verdict.status}  distance={float(verdict.distance.value):.6g}  "
            f"bound ell<={verdict.bound:.4g}  4eps={4 * args.eps:.6g}"
        )
        return 0 if verdict.status != "fail" else 1
    if args.suite == "tightness":
        src = seclab.make_syndrome_source(args.n, 0)
        ok = True
        for L in (1, 2, 4, 8):
            s_count = seclab.linear_seed_count(args.construction, args.n, args.ell, args.m)
            work = s_count**L * (1 << (L * args.ell)) * len(src.e_values())
            if s_count**L <= 1 << 24 and work <= 1 << 28:
                rep = seclab.real_ideal_distance(src, args.construction, args.ell, L, m=args.m)
            else:
                rep = seclab.real_ideal_distance(
                    src, args.construction, args.ell, L, m=args.m,
                    mode="monte-carlo", samples=64, rng=RandomStream(_master_seed(args)),
                )
            print(f"L={L}: distance={rep.value} ({rep.mode})")
            if L == 1:
                expect = 1 - Fraction(1, 1 << args.ell)
                if rep.value != expect:
                    ok = False
                    print(f"  expected exactly {expect}", file=sys.stderr)
        return 0 if ok else 1
    raise ValueError(f"unknown suite {args.suite!r}")


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = PipelineConfig(
        n_raw=args.n_raw, channel=args.channel, e_b=args.e_b,
        sample_fraction=args.sample_fraction, epsilon=2.0 ** -args.eps_exp,
        L=args.list, delta_coeff=args.delta_c, construction=args.construction,
    )
    t = simulate_round(cfg, RandomStream(_master_seed(args)))
    sys.stdout.write(emit_report(t, args.format, unsafe=args.unsafe).decode())
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    rng = RandomStream(_master_seed(args)).substream("bench")
    n, ell, L = args.n, args.ell, args.list
    x = BitString.from_int(rng.getbits(n), n)
    results: dict[str, float] = {}
    if args.construction in ("toeplitz", "both"):
        seed = toeplitz_sample_seed(rng.substream("toeplitz"), n, ell, L)
        t0 = time.perf_counter()
        naive = toeplitz_list_hash(seed, x, use_naive=True)
        results["toeplitz_naive_s"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        fast = toeplitz_list_hash(seed, x)
        results["toeplitz_fast_s"] = time.perf_counter() - t0
        assert naive == fast
        results["toeplitz_speedup"] = results["toeplitz_naive_s"] / max(
            results["toeplitz_fast_s"], 1e-9
        )
    if args.construction in ("ip", "both"):
        m = min(max(ell, 1), 64)
        spec = FieldSpec.default(m)
        seed_ip = ip_sample_seed(rng.substream("ip"), spec, n, min(ell, m), L)
        t0 = time.perf_counter()
        ip_list_hash(seed_ip, x)
        results["ip_s"] = time.perf_counter() - t0
    for name, v in results.items():
        print(f"{name}: {v:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="listpa", description=__doc__)
    sub = top.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--master-seed", default=None, help="defaults to $LPA_MASTER_SEED or 0")

    p = sub.add_parser("bound", help="list key length from min-entropy")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--eps-exp", type=float, required=True, help="security exponent: eps = 2^-x")
    p.add_argument("--list", type=int, default=1)
    p.add_argument("--clamp", action="store_true", help="floor and clamp at 0")
    common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("threshold", help="phase-error thresholds vs list size")
    p.add_argument("--n-sift", type=int, required=True)
    p.add_argument("--e-b", type=float, required=True)
    p.add_argument("--eps-exp", type=float, default=100.0)
    p.add_argument("--list-exps", type=float, nargs="+", default=[0.0], help="log2 list sizes")
    p.add_argument("--delta-c", type=float, default=1.0)
    common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("hash", help="hash a file into a list key bundle")
    p.add_argument("--in", dest="in_file", required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--construction", choices=["ip", "toeplitz"], default="toeplitz")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--list", type=int, default=1)
    p.add_argument("--m", type=int, default=0, help="field degree for ip (default: ell)")
    p.add_argument("--naive", action="store_true", help="use the word-loop Toeplitz path")
    p.add_argument("--seed-out", required=True)
    p.add_argument("--keys-out", required=True)
    p.add_argument("--index-out", default=None, help="write the index here instead of stderr")
    common(p)
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("verify", help="run an exhaustive verification suite")
    p.add_argument("suite", choices=["universality", "minentropy", "qllhl", "tightness"])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--list", type=int, default=1)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--construction", choices=["ip", "toeplitz"], default="ip")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--mode", choices=["exact", "monte-carlo"], default="exact")
    p.add_argument("--samples", type=int, default=2000)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="one post-processing pipeline round")
    p.add_argument("--n-raw", type=int, required=True)
    p.add_argument("--channel", choices=["iid-flip", "intercept-resend"], default="iid-flip")
    p.add_argument("--e-b", type=float, default=0.0)
    p.add_argument("--sample-fraction", type=float, default=0.1)
    p.add_argument("--eps-exp", type=float, default=20.0)
    p.add_argument("--list", type=int, default=1)
    p.add_argument("--delta-c", type=float, default=1.0)
    p.add_argument("--construction", choices=["ip", "toeplitz"], default="toeplitz")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--unsafe", action="store_true", help="include index and keys in the report")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="time the hashing paths")
    p.add_argument("--n", type=int, default=1 << 16)
    p.add_argument("--ell", type=int, default=256)
    p.add_argument("--list", type=int, default=4)
    p.add_argument("--construction", choices=["ip", "toeplitz", "both"], default="toeplitz")
    common(p)
    p.set_defaults(func=cmd_bench)
    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
