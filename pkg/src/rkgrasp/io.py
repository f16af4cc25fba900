"""Instance readers and writers.

TSP instances use a TSPLIB subset (EUC_2D and EXPLICIT weights).  The other
four problems use small whitespace-separated text formats, documented in
``docs/formats.md``: a header line of counts followed by body rows, with
``#`` starting a comment anywhere on a line.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from rkgrasp.decoders import NcgppInstance, SspInstance, StcpInstance, ThlpInstance, TspInstance
from rkgrasp.decoders.ssp import InfeasibleJobError


class ParseError(ValueError):
    def __init__(self, path, line: int | None, msg: str):
        self.path, self.line = str(path), line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {msg}")


class UnsupportedFormatError(ParseError):
    pass


class _Lines:
    """Non-blank, comment-stripped lines with their 1-based line numbers."""

    def __init__(self, path):
        self.path = Path(path)
        self.rows = []
        for no, raw in enumerate(self.path.read_text().splitlines(), start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                self.rows.append((no, text))
        self.pos = 0
        self.last = 0

    def next(self, what: str) -> tuple[int, list[str]]:
        if self.pos >= len(self.rows):
            raise ParseError(self.path, self.last + 1, f"unexpected end of file, expected {what}")
        no, text = self.rows[self.pos]
        self.pos += 1
        self.last = no
        return no, text.split()

    def numbers(self, what: str, count: int, kind=float) -> tuple[int, list]:
        no, tokens = self.next(what)
        if len(tokens) != count:
            raise ParseError(self.path, no, f"{what}: expected {count} values, found {len(tokens)}")
        try:
            return no, [kind(t) for t in tokens]
        except ValueError:
            raise ParseError(self.path, no, f"{what}: non-numeric entry") from None

    def done(self):
        if self.pos < len(self.rows):
            no, _ = self.rows[self.pos]
            raise ParseError(self.path, no, "trailing data after the last expected row")


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


# TSPLIB --------------------------------------------------------------------

_EXPLICIT_FORMATS = ("FULL_MATRIX", "UPPER_ROW", "UPPER_DIAG_ROW", "LOWER_DIAG_ROW")


def parse_tsplib(path) -> TspInstance:
    path = Path(path)
    header: dict[str, str] = {}
    where: dict[str, int] = {}
    lines = path.read_text().splitlines()
    i = 0
    section = None
    while i < len(lines):
        text = lines[i].strip()
        i += 1
        if not text:
            continue
        if text.upper() in ("NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION"):
            section = text.upper()
            break
        if text.upper() == "EOF":
            break
        key, sep, value = text.partition(":")
        if not sep:
            raise ParseError(path, i, f"expected 'KEY: value', got {text!r}")
        key = key.strip().upper()
        header[key], where[key] = value.strip(), i
    if section is None:
        raise ParseError(path, i + 1, "file ends before NODE_COORD_SECTION / EDGE_WEIGHT_SECTION")
    try:
        n = int(header["DIMENSION"])
    except KeyError:
        raise ParseError(path, i, "no DIMENSION before the data section") from None
    except ValueError:
        raise ParseError(path, where["DIMENSION"], "DIMENSION is not an integer") from None
    kind = header.get("EDGE_WEIGHT_TYPE", "").upper()
    name = header.get("NAME", path.stem)
    if kind not in ("EUC_2D", "EXPLICIT"):
        raise UnsupportedFormatError(path, where.get("EDGE_WEIGHT_TYPE", i),
                                     f"unsupported EDGE_WEIGHT_TYPE {kind or '<none>'}")
    fmt = header.get("EDGE_WEIGHT_FORMAT", "").upper()
    if kind == "EXPLICIT" and fmt not in _EXPLICIT_FORMATS:
        raise UnsupportedFormatError(path, where.get("EDGE_WEIGHT_FORMAT", i),
                                     f"unsupported EDGE_WEIGHT_FORMAT {fmt or '<none>'}")
    want = "NODE_COORD_SECTION" if kind == "EUC_2D" else "EDGE_WEIGHT_SECTION"
    if section != want:
        raise ParseError(path, i, f"{kind} data needs {want}, found {section}")

    tokens: list[tuple[int, str]] = []
    for no in range(i, len(lines)):
        text = lines[no].strip()
        if text.upper() in ("EOF", "DISPLAY_DATA_SECTION", "TOUR_SECTION"):
            break
        tokens.extend((no + 1, t) for t in text.split())

    def take(count: int) -> list[float]:
        if len(tokens) < count:
            last = tokens[-1][0] if tokens else i
            raise ParseError(path, last, f"truncated {want}: expected {count} numbers, found {len(tokens)}")
        try:
            return [float(t) for _, t in tokens[:count]]
        except ValueError:
            bad = next(no for no, t in tokens[:count] if not _is_number(t))
            raise ParseError(path, bad, "non-numeric entry") from None

    if kind == "EUC_2D":
        vals = np.array(take(3 * n)).reshape(n, 3)
        xy = vals[:, 1:]
        d = np.sqrt(((xy[:, None, :] - xy[None, :, :]) ** 2).sum(-1))
        dist = np.floor(d + 0.5)
    else:
        dist = np.zeros((n, n))
        if fmt == "FULL_MATRIX":
            dist = np.array(take(n * n)).reshape(n, n)
        else:
            if fmt == "UPPER_ROW":
                cells = [(a, b) for a in range(n) for b in range(a + 1, n)]
            elif fmt == "UPPER_DIAG_ROW":
                cells = [(a, b) for a in range(n) for b in range(a, n)]
            else:
                cells = [(a, b) for a in range(n) for b in range(a + 1)]
            for (a, b), v in zip(cells, take(len(cells))):
                dist[a, b] = dist[b, a] = v
    try:
        return TspInstance(dist, name=name)
    except ValueError as e:
        raise ParseError(path, None, str(e)) from None


def _is_number(t: str) -> bool:
    try:
        float(t)
    except ValueError:
        return False
    return True


def write_tsplib(inst: TspInstance, path) -> None:
    n = inst.n
    rows = [" ".join(_fmt(v) for v in row) for row in inst.dist]
    Path(path).write_text(
        f"NAME: {inst.name}\nTYPE: TSP\nDIMENSION: {n}\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n" + "\n".join(rows) + "\nEOF\n")


# STCP ----------------------------------------------------------------------

def parse_stcp(path) -> StcpInstance:
    """``rows cols [steiner]`` then one line of 1-based column indices per row."""
    src = _Lines(path)
    no, head = src.next("header 'rows cols [steiner]'")
    if len(head) not in (2, 3) or (len(head) == 3 and head[2].lower() != "steiner"):
        raise ParseError(src.path, no, "header must be 'rows cols' or 'rows cols steiner'")
    try:
        m, n = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(src.path, no, "row and column counts must be integers") from None
    steiner = len(head) == 3
    a = np.zeros((m, n), dtype=bool)
    for r in range(m):
        no, tokens = src.next(f"row {r + 1} of {m}")
        try:
            cols = [int(t) for t in tokens]
        except ValueError:
            raise ParseError(src.path, no, "column indices must be integers") from None
        if steiner and len(cols) != 3:
            raise ParseError(src.path, no, f"row weight {len(cols)} != 3")
        for c in cols:
            if not 1 <= c <= n:
                raise ParseError(src.path, no, f"column {c} outside 1..{n}")
            if a[r, c - 1]:
                raise ParseError(src.path, no, f"column {c} repeated")
            a[r, c - 1] = True
    src.done()
    try:
        return StcpInstance(a, name=src.path.stem, steiner=steiner)
    except ValueError as e:
        raise ParseError(src.path, None, str(e)) from None


def write_stcp(inst: StcpInstance, path) -> None:
    head = f"{inst.n_rows} {inst.n_cols}" + (" steiner" if inst.steiner else "")
    rows = [" ".join(str(c + 1) for c in np.flatnonzero(row)) for row in inst.matrix]
    Path(path).write_text(head + "\n" + "\n".join(rows) + "\n")


# SSP -----------------------------------------------------------------------

def parse_ssp(path) -> SspInstance:
    """``jobs tools C`` then one 0/1 row of length ``tools`` per job."""
    src = _Lines(path)
    no, (jobs, tools, cap) = src.numbers("header 'jobs tools C'", 3, int)
    a = np.zeros((jobs, tools), dtype=bool)
    for t in range(jobs):
        no, row = src.numbers(f"tool row of job {t + 1}", tools, int)
        if any(v not in (0, 1) for v in row):
            raise ParseError(src.path, no, f"job {t + 1}: entries must be 0 or 1")
        if sum(row) > cap:
            raise ParseError(src.path, no, f"job {t + 1} needs {sum(row)} tools, magazine holds {cap}")
        a[t] = row
    src.done()
    try:
        return SspInstance(a, cap, name=src.path.stem)
    except InfeasibleJobError as e:
        raise ParseError(src.path, None, str(e)) from None


def write_ssp(inst: SspInstance, path) -> None:
    rows = [" ".join("1" if v else "0" for v in row) for row in inst.tools]
    Path(path).write_text(f"{inst.n_jobs} {inst.n_tools} {inst.capacity}\n" + "\n".join(rows) + "\n")


# NCGPP ---------------------------------------------------------------------

def parse_ncgpp(path) -> NcgppInstance:
    """``|B| |N|``, traffic line, capacity line, then ``|B|`` handover rows."""
    src = _Lines(path)
    _, (nb, nr) = src.numbers("header '|B| |N|'", 2, int)
    no, traffic = src.numbers("traffic vector", nb)
    if any(t < 0 for t in traffic):
        raise ParseError(src.path, no, "negative traffic")
    no, cap = src.numbers("capacity vector", nr)
    if any(c <= 0 for c in cap):
        raise ParseError(src.path, no, "non-positive RNC capacity")
    h = np.zeros((nb, nb))
    for b in range(nb):
        no, row = src.numbers(f"handover row {b + 1}", nb)
        if any(v < 0 for v in row):
            raise ParseError(src.path, no, "negative handover count")
        if row[b] != 0:
            raise ParseError(src.path, no, f"H({b + 1},{b + 1}) must be 0")
        h[b] = row
    src.done()
    return NcgppInstance(np.array(traffic), np.array(cap), h, name=src.path.stem)


def write_ncgpp(inst: NcgppInstance, path) -> None:
    lines = [f"{inst.n_stations} {inst.n_rncs}",
             " ".join(_fmt(v) for v in inst.traffic),
             " ".join(_fmt(v) for v in inst.capacity)]
    lines += [" ".join(_fmt(v) for v in row) for row in inst.handover]
    Path(path).write_text("\n".join(lines) + "\n")


# THLP ----------------------------------------------------------------------

def parse_thlp(path) -> ThlpInstance:
    """``n p discount [collection distribution]``, a body tag, costs, demands.

    Body tag ``CAB`` is followed by an ``n x n`` unit-cost matrix, ``AP`` by
    ``n`` coordinate pairs (Euclidean costs).  Both end with the ``n x n``
    demand matrix.
    """
    src = _Lines(path)
    no, head = src.next("header 'n p discount [collection distribution]'")
    if len(head) not in (3, 5):
        raise ParseError(src.path, no, "header needs 3 or 5 fields")
    try:
        n, p = int(head[0]), int(head[1])
        factors = [float(v) for v in head[2:]]
    except ValueError:
        raise ParseError(src.path, no, "malformed header values") from None
    alpha = factors[0]
    chi, delta = (factors[1], factors[2]) if len(factors) == 3 else (1.0, 1.0)
    no, tag = src.next("body tag CAB or AP")
    if len(tag) != 1 or tag[0].upper() not in ("CAB", "AP"):
        raise ParseError(src.path, no, f"unknown body tag {' '.join(tag)!r}")
    if tag[0].upper() == "CAB":
        c = np.array([src.numbers(f"cost row {i + 1}", n)[1] for i in range(n)])
    else:
        xy = np.array([src.numbers(f"coordinates of node {i + 1}", 2)[1] for i in range(n)])
        c = np.sqrt(((xy[:, None, :] - xy[None, :, :]) ** 2).sum(-1))
    w = np.array([src.numbers(f"demand row {i + 1}", n)[1] for i in range(n)])
    src.done()
    try:
        return ThlpInstance(c, w, p, alpha, chi, delta, name=src.path.stem)
    except ValueError as e:
        raise ParseError(src.path, None, str(e)) from None


def write_thlp(inst: ThlpInstance, path) -> None:
    """Writes the CAB (explicit cost matrix) variant."""
    lines = [f"{inst.n} {inst.p} {_fmt(inst.discount)} {_fmt(inst.collection)} "
             f"{_fmt(inst.distribution)}", "CAB"]
    lines += [" ".join(_fmt(v) for v in row) for row in inst.cost]
    lines += [" ".join(_fmt(v) for v in row) for row in inst.demand]
    Path(path).write_text("\n".join(lines) + "\n")


READERS = {
    "tsp": parse_tsplib,
    "thlp": parse_thlp,
    "stcp": parse_stcp,
    "ncgpp": parse_ncgpp,
    "ssp": parse_ssp,
}

WRITERS = {
    "tsp": write_tsplib,
    "thlp": write_thlp,
    "stcp": write_stcp,
    "ncgpp": write_ncgpp,
    "ssp": write_ssp,
}


def read_instance(problem: str, path):
    try:
        reader = READERS[problem]
    except KeyError:
        raise ValueError(f"unknown problem {problem!r}; choose from {sorted(READERS)}") from None
    return reader(path)


def instance_size(inst) -> int:
    """Size in the unit used for default time limits (cities, nodes, columns...)."""
    return int(inst.size)
