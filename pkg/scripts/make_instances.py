"""Write the fixture instances under data/.

    python scripts/make_instances.py [--out data]

Steiner instances are built by repeated tripling, the Fano and NCGPP
walkthrough fixtures are hand-entered, the rest are small random samples.
"""
import argparse
from pathlib import Path

import numpy as np

from rkgrasp import generators as gen
from rkgrasp.decoders import NcgppInstance
from rkgrasp.io import write_ncgpp, write_ssp, write_stcp, write_thlp, write_tsplib

# Six stations, two RNCs: sorted order 2,4,5,3,6,1 puts {2,3,1} and {4,5,6}
# together.  H(4,5)+H(5,4)=191, H(2,5)+H(5,2)=116, station 6 has 157+150
# handovers with 4 and 5 and 13 with RNC 1, stations 1 and 3 only talk to 2/3.
WALKTHROUGH_H = [
    #  1    2    3    4    5    6
    [  0,  40,  25,   0,   0,   0],
    [ 35,   0,  60,   0,  58,   7],
    [ 20,  55,   0,   0,   0,   0],
    [  0,   0,   0,   0, 100,  80],
    [  0,  58,   0,  91,   0,  70],
    [  0,   6,   0,  77,  80,   0],
]
WALKTHROUGH_KEYS = (0.9, 0.1, 0.5, 0.2, 0.3, 0.6, 0.7)


def walkthrough_ncgpp() -> NcgppInstance:
    traffic = np.array([4.0, 5.0, 3.0, 5.0, 4.0, 3.0])
    return NcgppInstance(traffic, np.array([12.0, 12.0]), np.array(WALKTHROUGH_H, dtype=float),
                         name="ncgpp_walkthrough")


def euc_tsplib(path: Path, name: str, pts, comment: str = "") -> None:
    lines = [f"NAME: {name}", "TYPE: TSP"]
    if comment:
        lines.append(f"COMMENT: {comment}")
    lines += [f"DIMENSION: {len(pts)}", "EDGE_WEIGHT_TYPE: EUC_2D", "NODE_COORD_SECTION"]
    lines += [f"{i + 1} {x:g} {y:g}" for i, (x, y) in enumerate(pts)]
    path.write_text("\n".join(lines) + "\nEOF\n")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240601)

    for v in (9, 15, 27, 45, 81, 135, 243):
        write_stcp(gen.stcp_instance(v), out / f"stn{v}.txt")
    fano = gen.fano_instance()
    write_stcp(fano, out / "fano.txt")
    write_ncgpp(walkthrough_ncgpp(), out / "ncgpp_walkthrough.txt")

    euc_tsplib(out / "triangle.tsp", "triangle", [(0, 0), (3, 0), (0, 4)])
    euc_tsplib(out / "smoke52.tsp", "smoke52", rng.integers(0, 1750, size=(52, 2)),
               comment="52 locations, random coordinates in berlin52 layout")
    write_tsplib(gen.random_tsp(30, rng), out / "rand30.tsp")
    write_ssp(gen.random_ssp(10, 12, 4, rng), out / "ssp10.txt")
    write_ncgpp(gen.random_ncgpp(12, 3, rng), out / "ncgpp12.txt")
    write_thlp(gen.random_thlp(10, 3, rng), out / "thlp_cab10.txt")

    pts = rng.random((10, 2)) * 100
    w = rng.integers(0, 50, size=(10, 10))
    np.fill_diagonal(w, 0)
    body = ["10 3 0.75 3 2", "AP"] + [f"{float(x)!r} {float(y)!r}" for x, y in pts]
    body += [" ".join(str(v) for v in row) for row in w]
    (out / "thlp_ap10.txt").write_text("\n".join(body) + "\n")
    print(f"wrote fixtures to {out}")


if __name__ == "__main__":
    main()
