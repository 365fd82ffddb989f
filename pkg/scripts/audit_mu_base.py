"""Run every row of the mu condition table through the counterexample search."""

import argparse
import time

from nmworkbench.search import MU_BASE_ROWS, SearchConfig, audit_row


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"# seed {args.seed}, |U| <= {args.bound}")
    for row in MU_BASE_ROWS:
        t = time.time()
        out = audit_row(row, args.bound, SearchConfig(seed=args.seed))
        expect = "=>" if row.holds else "=/=>"
        status = "ok" if out.found != row.holds else ("open" if not row.required else "MISMATCH")
        print(f"{row.label:>5} {expect:4} {status:8} {time.time() - t:5.1f}s  {out.describe()}")


if __name__ == "__main__":
    main()
