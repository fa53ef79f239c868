"""Command line: ``wcheap fuzz | replay | bench``.

Exit codes: 0 pass, 1 verification failure, 2 usage or parse error.
Setting WCHEAP_CHECK=1 runs the invariant checker after every op.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from . import trace as tracefmt
from .verification.fuzz import Mix, differential_fuzz
from .verification.replay import CSV_HEADER, check_every_from_env, run_trace
from .workloads import IMPLS, WORKLOADS, run_workload


def _u64(text):
    v = int(text)
    if not 0 <= v <= tracefmt.U64_MAX:
        raise argparse.ArgumentTypeError(f'{text} is not a 64-bit unsigned seed')
    return v


def _positive(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f'{text} is negative')
    return v


def write_rows(path, rows, wall=True):
    with open(path, 'w', newline='\n') as f:
        f.write(CSV_HEADER + '\n')
        for r in rows:
            f.write(r.csv(wall) + '\n')


def cmd_fuzz(args, parser):
    try:
        mix = Mix.parse(args.mix) if args.mix else Mix.default(args.variant)
        mix.validate(args.variant)
    except ValueError as e:
        parser.error(str(e))
    check_every = check_every_from_env(args.check_every)
    out = Path(args.out) if args.out else None
    status = 0
    results = []
    for seed in range(args.seed, args.seed + args.runs):
        t0 = time.perf_counter()
        v = differential_fuzz(seed, args.ops, mix, args.variant, check_every)
        secs = time.perf_counter() - t0
        line = (f'{"PASS" if v.passed else "FAIL"} seed={seed} ops={args.ops} '
                f'variant={args.variant} checks={v.checks} time={secs:.2f}s')
        rec = {'seed': seed, 'passed': v.passed, 'ops': v.ops_run,
               'checks': v.checks, 'failure': v.failure}
        if not v.passed:
            status = 1
            line += f'\n  {v.failure}'
            base = out if out else Path(f'wcheap-fuzz-{seed}')
            repro = base.with_name(f'{base.name}.seed{seed}.repro.trace')
            (v.reproducer or v.trace).write(repro)
            rec['reproducer'] = str(repro)
            line += f'\n  reproducer: {repro}'
        print(line)
        results.append(rec)
    if out:
        out.write_text(json.dumps({'mix': str(mix), 'results': results}, indent=2) + '\n')
    return status


def cmd_replay(args, parser):
    try:
        t = tracefmt.read(args.trace)
    except OSError as e:
        print(f'error: {e}', file=sys.stderr)
        return 2
    except tracefmt.TraceError as e:
        print(f'{args.trace}: {e}', file=sys.stderr)
        return 2
    rows = [] if args.costs else None
    try:
        v = run_trace(t, args.check_every, rows=rows)
    except tracefmt.TraceError as e:
        print(f'{args.trace}: {e}', file=sys.stderr)
        return 2
    if rows is not None:
        write_rows(args.costs, rows, wall=not args.no_wall)
    if v.passed:
        print(f'PASS ops={v.ops_run} checks={v.checks}')
        return 0
    print(f'FAIL {v.failure}')
    return 1


def cmd_bench(args, parser):
    rows = []
    t0 = time.perf_counter()
    result = run_workload(args.workload, args.n, args.impl, args.seed, rows)
    secs = time.perf_counter() - t0
    write_rows(args.out, rows, wall=not args.no_wall)
    per_op = {}
    for r in rows:
        s = per_op.setdefault(r.op, {'count': 0, 'max_comparisons': 0, 'max_steps': 0})
        s['count'] += 1
        s['max_comparisons'] = max(s['max_comparisons'], r.comparisons)
        s['max_steps'] = max(s['max_steps'], r.steps)
    summary = {
        'workload': args.workload, 'n': args.n, 'impl': args.impl, 'seed': args.seed,
        'result': result,
        'total_comparisons': sum(r.comparisons for r in rows),
        'total_steps': sum(r.steps for r in rows),
        'per_op': per_op, 'wall_s': round(secs, 6),
    }
    print(json.dumps(summary, indent=2))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog='wcheap', description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest='command', required=True)

    f = sub.add_parser('fuzz', help='differential fuzzing against a reference queue')
    f.add_argument('--seed', type=_u64, default=1)
    f.add_argument('--runs', type=int, default=1, help='fuzz RUNS consecutive seeds')
    f.add_argument('--ops', type=_positive, default=10_000)
    f.add_argument('--variant', choices=('full', 'simple'), default='full')
    f.add_argument('--mix', help='op weights, e.g. ins:40,delmin:25,deckey:30,meld:5')
    f.add_argument('--check-every', type=_positive, default=16)
    f.add_argument('--out', help='JSON verdict; reproducers are written beside it')
    f.set_defaults(func=cmd_fuzz)

    r = sub.add_parser('replay', help='replay a trace file with oracle lockstep')
    r.add_argument('--trace', required=True)
    r.add_argument('--check-every', type=_positive, default=0)
    r.add_argument('--costs', help='write per-op cost rows as CSV')
    r.add_argument('--no-wall', action='store_true', help='leave the wall_ns column empty')
    r.set_defaults(func=cmd_replay)

    b = sub.add_parser('bench', help='run a workload on one implementation')
    b.add_argument('--workload', choices=WORKLOADS, required=True)
    b.add_argument('--n', type=_positive, required=True)
    b.add_argument('--impl', choices=IMPLS, required=True)
    b.add_argument('--seed', type=_u64, default=0)
    b.add_argument('--out', required=True, help='CSV of per-op cost rows')
    b.add_argument('--no-wall', action='store_true')
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == '__main__':
    sys.exit(main())
