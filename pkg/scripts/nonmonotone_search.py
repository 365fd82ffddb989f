"""Smallest blocking net where adding a seed hides a visible node."""

from nmworkbench import io
from nmworkbench.blocking import horizon, search_nonmonotone


def main():
    net, A, B = search_nonmonotone(4)
    print(io.serialize(net), end="")
    print(f"# A={sorted(A)} sees {sorted(horizon(net, A).visible)}")
    print(f"# B={sorted(B)} sees {sorted(horizon(net, B).visible)}")


if __name__ == "__main__":
    main()
