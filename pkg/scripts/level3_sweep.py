"""Level-3 construction over mu-sub + mu-subsup functions, tabulated
against the blocked-choice pattern."""

import argparse
import random
import sys
from collections import Counter
from pathlib import Path

from nmworkbench.choicefn import ChoiceFunction, prop, shortlex
from nmworkbench.ibrs import represent_level3_smooth
from nmworkbench.search import survivors

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from helpers import blocked_choice  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    U = tuple("abcdef"[:args.n])
    dom = sorted(range(1 << args.n), key=shortlex)
    rows = survivors(U, dom, [prop("muSub"), prop("muSubSup")], True)
    idx = list(range(rows.shape[0]))
    if len(idx) > args.samples:
        idx = random.Random(args.seed).sample(idx, args.samples)
    tab = Counter()
    for i in idx:
        f = ChoiceFunction.from_masks(U, {X: int(rows[i][j]) for j, X in enumerate(dom)})
        try:
            represent_level3_smooth(f)
            ok = True
        except AssertionError:
            ok = False
        tab[(blocked_choice(f), ok)] += 1
    print(f"# |U|={args.n}, {rows.shape[0]} candidates, {len(idx)} tried, seed {args.seed}")
    for (blocked, ok), k in sorted(tab.items()):
        print(f"blocked={blocked!s:5} built={ok!s:5} {k}")


if __name__ == "__main__":
    main()
