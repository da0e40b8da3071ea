"""Compiled vs pure-Python CDCL kernel on random 3-SAT and synthesis formulas.

    python benchmarks/bench_sat.py [--sizes 100 150 200] [--repeat 3]

Both kernels make the same decisions, so conflict counts must match; the
script checks that and reports the speed-up.
"""

import argparse
import random
import statistics
import time

from ressynth.attack import all_enable_attacker
from ressynth.encoding import Cnf, CnfBuilder, Encoder
from ressynth.named import memory_instance
from ressynth.sat import kernel


def random_3sat(n, ratio, seed):
    rng = random.Random(seed)
    clauses = [tuple(rng.choice((1, -1)) * v for v in rng.sample(range(1, n + 1), 3)) for _ in range(int(n * ratio))]
    return Cnf(n, clauses)


def synthesis_cnf(n):
    inst = memory_instance(n=n)
    enc = Encoder(inst)
    b = CnfBuilder(enc.varmap.copy(), extend=True)
    b.add(enc.synthesis_base())
    b.add(enc.build_safety(attacker=all_enable_attacker(inst.attack, inst.observations)))
    return b.cnf()


def timed(solve, cnf, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        status, _, conflicts = solve(cnf.num_vars, cnf.clauses, None)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), status, conflicts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 150, 200])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    try:
        fast = kernel("compiled")
    except Exception as exc:  # extension not built
        raise SystemExit(f"compiled kernel unavailable: {exc}")
    slow = kernel("python")

    cases = [(f"3sat n={n}", random_3sat(n, 4.26, args.seed + n)) for n in args.sizes]
    cases += [(f"synth memory n={k}", synthesis_cnf(k)) for k in (2, 3)]
    print(f"{'case':<22}{'vars':>7}{'clauses':>9}{'status':>8}{'conflicts':>11}{'python s':>11}{'compiled s':>12}{'x':>8}")
    for name, cnf in cases:
        tp, sp, cp = timed(slow, cnf, args.repeat)
        tc, sc, cc = timed(fast, cnf, args.repeat)
        assert (sp, cp) == (sc, cc), f"{name}: kernels disagree"
        status = {10: "SAT", 20: "UNSAT"}.get(sp, "?")
        print(f"{name:<22}{cnf.num_vars:>7}{len(cnf.clauses):>9}{status:>8}{cp:>11}{tp:>11.3f}{tc:>12.4f}{tp / tc:>8.1f}")


if __name__ == "__main__":
    main()
