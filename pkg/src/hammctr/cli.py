"""Command-line front end: solve, gen, reduce, certify, bench.

Output is line-oriented key=value text (or one JSON object with --json);
all commands are deterministic for a fixed (input, seed) apart from the
wall_ms timing fields.  Exit codes: 0 success, 2 parse/I-O errors, 3 budget
errors (messages on stderr).
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import core, inclexcl, kernels, matmul, reductions, satgadget
from .errors import BudgetError, CodeSearchError, FormatError
from .rng import SplitMix64, derive_seed

MODES = ("discrete-closest", "discrete-remotest", "continuous-closest", "continuous-remotest")
ALGOS = ("auto", "naive", "inclexcl", "matmul", "brute")


def _emit(record, as_json):
    if as_json:
        print(json.dumps(record, sort_keys=True))
    else:
        print(" ".join(f"{k}={v}" for k, v in record.items()))


def _center_text(result):
    return ",".join(str(v) for v in result.center_string)


def pick_auto(inst, mode, d_max=inclexcl.D_MAX_DEFAULT):
    """Selector: subset-counting when it beats n^2*d and d is small, the
    matrix path for genuinely large dimension, otherwise the naive scan."""
    if mode.startswith("continuous"):
        return "brute"
    n, d = inst.n, inst.d
    if d <= d_max and n * (2**d) <= n * n * d:
        return "inclexcl"
    if (
        n >= 64
        and n * n * 8 <= matmul.memory_budget_bytes()
        and d >= n**0.1
    ):
        return "matmul"
    return "naive"


def cmd_solve(args):
    inst = core.read_instance(Path(args.input).read_text())
    algo = args.algo
    if algo == "auto":
        algo = pick_auto(inst, args.mode)
    discrete = args.mode.startswith("discrete")
    if discrete and algo == "brute":
        raise ValueError("brute enumeration is the continuous solver; pick a discrete algorithm")
    if not discrete and algo != "brute":
        raise ValueError(f"algorithm {algo} is discrete-only; continuous modes use --algo brute")
    closest = args.mode.endswith("closest")
    t0 = time.perf_counter()
    tables = None
    if algo == "inclexcl":
        tables = inclexcl.build_count_tables(inst)
    if algo == "naive":
        fn = core.naive_closest if closest else core.naive_remotest
        result = fn(inst, threads=args.threads)
    elif algo == "inclexcl":
        fn = inclexcl.inclexcl_closest if closest else inclexcl.inclexcl_remotest
        result = fn(inst, tables=tables)
    elif algo == "matmul":
        tau = matmul.AUTO if args.tau in (None, "auto") else int(args.tau)
        fn = matmul.matmul_closest if closest else matmul.matmul_remotest
        result = fn(
            inst,
            tau=tau,
            use_popcount={"auto": None, "on": True, "off": False}[args.popcount],
            threads=args.threads,
        )
    else:
        fn = core.brute_continuous_closest if closest else core.brute_continuous_remotest
        result = fn(inst)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    if args.dump_s and tables is not None:
        Path(args.dump_s).write_text(tables.dump_s_csv())
    if args.dump_d and algo == "matmul":
        dm, _ = matmul.distance_matrix(inst)
        Path(args.dump_d).write_bytes(matmul.dump_distance_matrix(dm))
    record = {
        "mode": args.mode,
        "algorithm": result.algorithm,
        "n": inst.n,
        "d": inst.d,
        "sigma": inst.sigma,
        "objective": result.objective,
        "index": result.center_index if result.center_index is not None else "-",
        "center": _center_text(result),
        "wall_ms": f"{wall_ms:.3f}",
    }
    for k in sorted(result.counters):
        record[f"counter_{k}"] = result.counters[k]
    _emit(record, args.json)
    return 0


def generate_random(n, d, sigma, seed):
    rng = SplitMix64(derive_seed(seed, n, d, sigma))
    data = np.array(rng.fill_symbols(n * d, sigma), dtype=np.int64).reshape(n, d)
    return core.StringSet(n=n, d=d, sigma=sigma, data=data)


def generate_planted(n, d, sigma, rho, seed):
    """Plant a center and perturb each string in exactly rho positions."""
    if rho > d:
        raise ValueError("rho cannot exceed d")
    rng = SplitMix64(derive_seed(seed, n, d, sigma, rho))
    center = rng.fill_symbols(d, sigma)
    rows = np.tile(np.array(center, dtype=np.int64), (n, 1))
    for i in range(n):
        for pos in rng.sample_positions(rho, d):
            rows[i, pos] = (rows[i, pos] + 1 + rng.next_below(sigma - 1)) % sigma
    return core.StringSet(n=n, d=d, sigma=sigma, data=rows)


def cmd_gen(args):
    if args.kind == "random":
        inst = generate_random(args.n, args.d, args.sigma, args.seed)
        comments = [f"gen=random n={args.n} d={args.d} sigma={args.sigma} seed={args.seed}"]
    else:
        inst = generate_planted(args.n, args.d, args.sigma, args.rho, args.seed)
        comments = [
            f"gen=planted n={args.n} d={args.d} sigma={args.sigma} "
            f"rho={args.rho} seed={args.seed}"
        ]
    text = core.write_instance(inst, comments=comments)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _auto_group_size(phi):
    k = max(len(c) for c in phi.clauses) if phi.clauses else 1
    s = 2 * k
    if s % phi.q:
        s += phi.q - (s % phi.q)
    return s


def cmd_reduce(args):
    direction = args.direction
    if direction == "sat2remotest":
        phi = satgadget.parse_qcnf(Path(args.input).read_text())
        s = args.group_size or _auto_group_size(phi)
        regular, witness = satgadget.regularize(phi, s)
        inst = satgadget.to_remotest(regular, witness=witness)
        if inst.strings is None:
            raise ValueError("gadget is empty (no falsifiable clause); nothing to write")
        head = {
            "direction": "sat2remotest",
            "threshold": inst.threshold,
            "q": inst.q,
            "num_vars": inst.num_vars,
            "s": inst.s,
            "r": inst.r,
            "clause_width": inst.clause_width,
            "source_hash": inst.source_hash,
            "pre_dedup_count": inst.pre_dedup_count,
        }
        Path(args.out_instance).write_text(core.write_instance(inst.strings))
        if args.out_map:
            Path(args.out_map).write_text(json.dumps(head, sort_keys=True) + "\n")
        if args.solve_through:
            dist, _best, _ = satgadget.farthest_assignment(
                inst.strings.data, inst.q, inst.num_vars
            )
            # distance > threshold certifies satisfiability outright; the
            # converse needs a balanced family member (see `certify`)
            sat = "yes" if dist >= inst.threshold + 1 else "unknown"
            _emit(
                {
                    "direction": direction,
                    "remotest_distance": dist,
                    "threshold": inst.threshold,
                    "satisfiable": sat,
                },
                args.json,
            )
        return 0

    inst = core.read_instance(Path(args.input).read_text())
    if direction == "complement":
        target, rmap = reductions.complement_continuous(inst)
    elif direction == "c2r":
        target, rmap = reductions.closest_to_remotest(inst)
    elif direction == "r2c":
        target, rmap = reductions.remotest_to_closest(inst)
    else:
        raise ValueError(f"unknown direction {direction}")
    Path(args.out_instance).write_text(core.write_instance(target))
    if args.out_map:
        Path(args.out_map).write_text(rmap.to_jsonl())
    if args.solve_through:
        if direction == "complement":
            sub = core.brute_continuous_remotest(target)
            source_obj = reductions.apply_transform(rmap, sub.objective)
            record = {"direction": direction, "mode": "continuous-closest"}
            src_idx = "-"
        elif direction == "c2r":
            sub = core.naive_remotest(target)
            source_obj = reductions.apply_transform(rmap, sub.objective)
            src_idx, _role = rmap.source_index(sub.center_index)
            record = {"direction": direction, "mode": "discrete-closest"}
        else:
            sub = core.naive_closest(target)
            source_obj = reductions.apply_transform(rmap, sub.objective)
            src_idx, _role = rmap.source_index(sub.center_index)
            record = {"direction": direction, "mode": "discrete-remotest"}
        record.update(
            {
                "objective": source_obj,
                "index": src_idx,
                "target_objective": sub.objective,
                "shift": rmap.shift,
            }
        )
        _emit(record, args.json)
    return 0


def cmd_certify(args):
    phi = satgadget.parse_qcnf(Path(args.input).read_text())
    if args.group_size and args.pre_grouped:
        phi = phi.with_groups(args.group_size)
    report = satgadget.certify_family(
        phi,
        s=args.group_size,
        member_budget=args.member_budget,
    )
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def _bench_instance(n, d, sigma, seed):
    return generate_random(n, d, sigma, seed)


def _time_call(fn, *fargs, **kw):
    t0 = time.perf_counter()
    out = fn(*fargs, **kw)
    return out, (time.perf_counter() - t0) * 1000.0


def cmd_bench(args):
    rows = []
    seed = args.seed
    if args.suite == "smalld":
        for d in (8, 10, 12, 14, 16):
            inst = _bench_instance(4096, d, 4, derive_seed(seed, d))
            naive_res, naive_ms = _time_call(core.naive_closest, inst)
            ie_res, ie_ms = _time_call(inclexcl.inclexcl_closest, inst)
            if args.verify and naive_res.objective != ie_res.objective:
                raise AssertionError(f"objective mismatch at d={d}")
            rows.append(("smalld", "naive-closest", kernels.IMPL, 4096, d, 4, seed, naive_ms, naive_res.objective, ""))
            rows.append(("smalld", "inclexcl-closest", kernels.IMPL, 4096, d, 4, seed, ie_ms, ie_res.objective, f"subsets={1 << d}"))
    elif args.suite == "larged":
        cases = [(256, 1024, 8), (512, 512, 16), (1024, 256, 4), (2048, 2048, 2)]
        for n, d, sigma in cases:
            inst = _bench_instance(n, d, sigma, derive_seed(seed, n, d, sigma))
            naive_res, naive_ms = _time_call(core.naive_closest, inst)
            mm_res, mm_ms = _time_call(matmul.matmul_closest, inst)
            if args.verify and naive_res.objective != mm_res.objective:
                raise AssertionError(f"objective mismatch at n={n} d={d}")
            counters = ";".join(f"{k}={v}" for k, v in sorted(mm_res.counters.items()))
            rows.append(("larged", "naive-closest", kernels.IMPL, n, d, sigma, seed, naive_ms, naive_res.objective, ""))
            rows.append(("larged", "matmul-closest", kernels.IMPL, n, d, sigma, seed, mm_ms, mm_res.objective, counters))
    elif args.suite == "impls":
        inst = _bench_instance(65536, 10, 4, derive_seed(seed, 0))
        small = _bench_instance(4096, 64, 4, derive_seed(seed, 1))
        binary = _bench_instance(2048, 2048, 2, derive_seed(seed, 2))
        packed = binary.packed_bits()
        for name, mod in kernels.implementations():
            _, t_ref = _time_call(_count_table_probe, mod, inst)
            rows.append(("impls", "count-table-sweep", name, inst.n, inst.d, 4, seed, t_ref, "-", ""))
            _, t_max = _time_call(mod.hamming_rowmax, small.data, 0, 512)
            rows.append(("impls", "hamming-rowmax", name, small.n, small.d, 4, seed, t_max, "-", "rows=512"))
            _, t_pc = _time_call(mod.popcount_matrix, packed[:512], packed[:512])
            rows.append(("impls", "popcount-matrix", name, 512, binary.d, 2, seed, t_pc, "-", ""))
    else:
        raise ValueError(f"unknown suite {args.suite!r}")
    lines = ["suite,algorithm,impl,n,d,sigma,seed,wall_ms,objective,counters"]
    for row in rows:
        suite, algo, impl, n, d, sigma, sd, ms, obj, counters = row
        lines.append(f"{suite},{algo},{impl},{n},{d},{sigma},{sd},{ms:.3f},{obj},{counters}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _count_table_probe(mod, inst):
    """One refinement pass per position using the given kernel module."""
    pid = np.zeros(inst.n, dtype=np.int32)
    nparts = 1
    for i in range(inst.d):
        col = np.ascontiguousarray(inst.data[:, i])
        pid, sizes = mod.refine_partition(pid, col, nparts, inst.sigma)
        nparts = len(sizes)
    return nparts


def build_parser():
    p = argparse.ArgumentParser(prog="hammctr", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve one instance file")
    ps.add_argument("--input", required=True)
    ps.add_argument("--mode", choices=MODES, required=True)
    ps.add_argument("--algo", choices=ALGOS, default="auto")
    ps.add_argument("--tau", default=None, help="heavy/light threshold (int or 'auto')")
    ps.add_argument("--popcount", choices=("auto", "on", "off"), default="auto")
    ps.add_argument("--threads", type=int, default=1, help="worker threads for parallel-safe kernels")
    ps.add_argument("--json", action="store_true")
    ps.add_argument("--dump-s", default=None, help="write the per-cardinality S table as CSV")
    ps.add_argument("--dump-d", default=None, help="write the distance matrix (row-major LE int32)")
    ps.set_defaults(fn=cmd_solve)

    pg = sub.add_parser("gen", help="generate instance files")
    pg.add_argument("kind", choices=("random", "planted"))
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--d", type=int, required=True)
    pg.add_argument("--sigma", type=int, required=True)
    pg.add_argument("--rho", type=int, default=0, help="planted: perturbed positions per string")
    pg.add_argument("--seed", type=int, required=True)
    pg.add_argument("--out", default=None)
    pg.set_defaults(fn=cmd_gen)

    pr = sub.add_parser("reduce", help="emit a reduced instance plus sidecar map")
    pr.add_argument("--direction", choices=("c2r", "r2c", "complement", "sat2remotest"), required=True)
    pr.add_argument("--input", required=True)
    pr.add_argument("--out-instance", required=True)
    pr.add_argument("--out-map", default=None)
    pr.add_argument("--group-size", type=int, default=None)
    pr.add_argument("--solve-through", action="store_true")
    pr.add_argument("--json", action="store_true")
    pr.set_defaults(fn=cmd_reduce)

    pc = sub.add_parser("certify", help="run the full SAT-gadget certification pipeline")
    pc.add_argument("--input", required=True)
    pc.add_argument("--group-size", type=int, default=None)
    pc.add_argument("--pre-grouped", action="store_true", help="input is already regular; skip regularization")
    pc.add_argument("--member-budget", type=int, default=None)
    pc.set_defaults(fn=cmd_certify)

    pb = sub.add_parser("bench", help="benchmark suites as CSV")
    pb.add_argument("--suite", choices=("smalld", "larged", "impls"), required=True)
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--out", default=None)
    pb.add_argument("--verify", action="store_true", help="cross-check solver objectives")
    pb.set_defaults(fn=cmd_bench)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BudgetError, CodeSearchError) as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
