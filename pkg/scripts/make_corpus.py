"""Write the named fixtures from catalog.py into corpus/."""

from pathlib import Path

from nmworkbench import catalog, io

ROOT = Path(__file__).resolve().parents[1] / "corpus"

FILES = {
    "tweety.net": catalog.TWEETY,
    "nixon.net": catalog.NIXON,
    "up-down.net": catalog.UP_DOWN,
    "split-total.net": catalog.SPLIT_TOTAL,
    "inher-univ.net": catalog.INHER_UNIV,
    "horizon-1.net": catalog.HORIZON_1,
    "horizon-2.net": catalog.HORIZON_2,
    "circuit1.circ": catalog.CIRCUIT_1,
    "circuit2.circ": catalog.CIRCUIT_2,
    "mu-cum-cd.cf": catalog.MU_CUM_CD,
    "need-pr.cf": catalog.NEED_PR,
    "rank-copies.cf": catalog.RANK_COPIES,
    "a-ranked.cf": catalog.A_RANKED_EXAMPLE,
    "level-bigger-2.cf": catalog.level_bigger_2(),
    "not-i-3.sz": catalog.singleton_system(3),
    "need-smooth.gs": catalog.NEED_SMOOTH,
    "level-3-solution.gs": catalog.LEVEL_3_SOLUTION,
}


def main():
    ROOT.mkdir(exist_ok=True)
    for name, obj in FILES.items():
        (ROOT / name).write_text(io.serialize(obj))
        print(name)


if __name__ == "__main__":
    main()
