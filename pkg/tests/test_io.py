import numpy as np
import pytest

from rkgrasp import generators as gen
from rkgrasp.decoders import NcgppInstance, StcpInstance
from rkgrasp.io import (READERS, WRITERS, ParseError, UnsupportedFormatError, parse_ncgpp,
                        parse_ssp, parse_stcp, parse_thlp, parse_tsplib, read_instance)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


# TSPLIB --------------------------------------------------------------------

def test_euc_2d_triangle(data_dir):
    inst = parse_tsplib(data_dir / "triangle.tsp")
    assert inst.dist.tolist() == [[0, 3, 4], [3, 0, 5], [4, 5, 0]]


def test_euc_2d_rounds_to_nearest(tmp_path):
    p = write(tmp_path, "r.tsp", "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n"
              "1 0 0\n2 1 1\n3 2.5 0\nEOF\n")
    d = parse_tsplib(p).dist
    assert d[0, 1] == 1.0      # sqrt(2) = 1.414
    assert d[0, 2] == 3.0      # 2.5 rounds half up
    assert d[1, 2] == 2.0      # sqrt(3.25) = 1.80


def test_explicit_full_matrix(tmp_path):
    p = write(tmp_path, "f.tsp", "NAME: two\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
              "EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 7\n9 0\nEOF\n")
    inst = parse_tsplib(p)
    assert inst.dist.tolist() == [[0, 7], [9, 0]] and inst.name == "two"


@pytest.mark.parametrize("fmt, body", [
    ("UPPER_ROW", "1 2 3\n4 5\n6"),
    ("UPPER_DIAG_ROW", "0 1 2 3\n0 4 5\n0 6\n0"),
    ("LOWER_DIAG_ROW", "0\n1 0\n2 4 0\n3 5 6 0"),
])
def test_explicit_triangular(tmp_path, fmt, body):
    p = write(tmp_path, "t.tsp", f"DIMENSION: 4\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
              f"EDGE_WEIGHT_FORMAT: {fmt}\nEDGE_WEIGHT_SECTION\n{body}\nEOF\n")
    want = np.array([[0, 1, 2, 3], [1, 0, 4, 5], [2, 4, 0, 6], [3, 5, 6, 0]])
    assert np.array_equal(parse_tsplib(p).dist, want)


def test_header_smoke(data_dir):
    assert parse_tsplib(data_dir / "smoke52.tsp").n == 52


def test_unsupported_weight_type(tmp_path):
    p = write(tmp_path, "g.tsp", "DIMENSION: 3\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n")
    with pytest.raises(UnsupportedFormatError, match="GEO"):
        parse_tsplib(p)
    p = write(tmp_path, "h.tsp", "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
              "EDGE_WEIGHT_FORMAT: LOWER_ROW\nEDGE_WEIGHT_SECTION\n1 2 3\n")
    with pytest.raises(UnsupportedFormatError, match="LOWER_ROW"):
        parse_tsplib(p)


def test_truncated_tsplib(tmp_path):
    p = write(tmp_path, "t.tsp", "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n"
              "1 0 0\n2 3 0\n")
    with pytest.raises(ParseError) as e:
        parse_tsplib(p)
    assert e.value.line == 5 and "truncated" in str(e.value)


# line-oriented formats -----------------------------------------------------

def test_fano_fixture(data_dir):
    inst = parse_stcp(data_dir / "fano.txt")
    assert inst.matrix.shape == (6, 7)
    assert inst.matrix.astype(int).tolist() == gen.FANO_ROWS


def test_stcp_steiner_row_weight(tmp_path):
    p = write(tmp_path, "s.txt", "3 7 steiner\n1 2 3\n# comment line\n4 5\n1 4 6\n")
    with pytest.raises(ParseError, match="row weight 2 != 3") as e:
        parse_stcp(p)
    assert e.value.line == 4


def test_stcp_column_out_of_range(tmp_path):
    p = write(tmp_path, "s.txt", "1 3\n1 4\n")
    with pytest.raises(ParseError, match="outside"):
        parse_stcp(p)


def test_stcp_steiner_pairs_checked(tmp_path):
    p = write(tmp_path, "s.txt", "2 4 steiner\n1 2 3\n1 2 4\n")
    with pytest.raises(ParseError):
        parse_stcp(p)


def test_ssp_job_over_capacity(tmp_path):
    p = write(tmp_path, "j.txt", "3 4 2\n1 1 0 0\n0 1 1 1  # too many\n1 0 0 0\n")
    with pytest.raises(ParseError, match="job 2") as e:
        parse_ssp(p)
    assert e.value.line == 3


def test_ssp_non_binary(tmp_path):
    p = write(tmp_path, "j.txt", "2 3 2\n1 0 0\n0 2 0\n")
    with pytest.raises(ParseError, match="0 or 1") as e:
        parse_ssp(p)
    assert e.value.line == 3


def test_count_mismatch(tmp_path):
    p = write(tmp_path, "j.txt", "2 3 2\n1 0\n0 1 0\n")
    with pytest.raises(ParseError, match="expected 3 values") as e:
        parse_ssp(p)
    assert e.value.line == 2


def test_ncgpp_negative_entries(tmp_path):
    p = write(tmp_path, "n.txt", "2 1\n3 -1\n10\n0 1\n1 0\n")
    with pytest.raises(ParseError, match="negative traffic") as e:
        parse_ncgpp(p)
    assert e.value.line == 2
    p = write(tmp_path, "n.txt", "2 1\n3 1\n-10\n0 1\n1 0\n")
    with pytest.raises(ParseError, match="capacity") as e:
        parse_ncgpp(p)
    assert e.value.line == 3


def test_thlp_both_layouts(data_dir):
    cab = parse_thlp(data_dir / "thlp_cab10.txt")
    ap = parse_thlp(data_dir / "thlp_ap10.txt")
    assert (cab.n, cab.p) == (10, 3) and (ap.n, ap.p) == (10, 3)
    assert (ap.discount, ap.collection, ap.distribution) == (0.75, 3.0, 2.0)
    assert np.allclose(ap.cost, ap.cost.T) and np.all(np.diag(ap.cost) == 0)


def test_thlp_unknown_body(tmp_path):
    p = write(tmp_path, "t.txt", "2 1 0.5\nXYZ\n")
    with pytest.raises(ParseError, match="body tag") as e:
        parse_thlp(p)
    assert e.value.line == 2


def test_trailing_data(tmp_path):
    p = write(tmp_path, "s.txt", "1 3\n1 2 3\n1 2\n")
    with pytest.raises(ParseError, match="trailing") as e:
        parse_stcp(p)
    assert e.value.line == 3


def _samples(problem, rng):
    if problem == "tsp":
        return gen.random_tsp(int(rng.integers(3, 12)), rng)
    if problem == "stcp":
        a = rng.random((int(rng.integers(1, 8)), int(rng.integers(2, 9)))) < 0.4
        a[np.arange(a.shape[0]), rng.integers(0, a.shape[1], a.shape[0])] = True
        return StcpInstance(a, name="rt")
    if problem == "ssp":
        return gen.random_ssp(int(rng.integers(1, 8)), int(rng.integers(3, 9)), 3, rng)
    if problem == "ncgpp":
        inst = gen.random_ncgpp(int(rng.integers(1, 8)), int(rng.integers(1, 4)), rng)
        # exercise non-integral reals too
        return NcgppInstance(inst.traffic * 0.37, inst.capacity, inst.handover * 1.1)
    n = int(rng.integers(2, 8))
    return gen.random_thlp(n, int(rng.integers(1, n + 1)), rng, discount=float(rng.uniform(0.1, 1)))


@pytest.mark.parametrize("problem", sorted(READERS))
def test_round_trip(tmp_path, problem):
    rng = np.random.default_rng(sorted(READERS).index(problem))
    for k in range(100):
        inst = _samples(problem, rng)
        path = tmp_path / f"{problem}{k}.txt"
        WRITERS[problem](inst, path)
        assert read_instance(problem, path) == inst


@pytest.mark.parametrize("problem, fixture", [("stcp", "stn27.txt"), ("ssp", "ssp10.txt"),
                                              ("ncgpp", "ncgpp12.txt"),
                                              ("thlp", "thlp_cab10.txt"),
                                              ("thlp", "thlp_ap10.txt"), ("tsp", "rand30.tsp")])
def test_truncation_is_line_anchored(tmp_path, data_dir, problem, fixture):
    lines = (data_dir / fixture).read_text().splitlines()
    if lines[-1] == "EOF":      # optional in TSPLIB, so dropping it is no truncation
        lines.pop()
    for cut in (1, len(lines) // 2, len(lines) - 1):
        p = write(tmp_path, fixture, "\n".join(lines[:cut]) + "\n")
        messages = []
        for _ in range(2):
            with pytest.raises(ParseError) as e:
                read_instance(problem, p)
            assert e.value.line is not None
            messages.append(str(e.value))
        assert messages[0] == messages[1]


def test_unknown_problem(data_dir):
    with pytest.raises(ValueError):
        read_instance("vrp", data_dir / "fano.txt")
