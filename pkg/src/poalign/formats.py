"""Line-oriented text formats for instances, graphs, SAT inputs,
solutions, witnesses, and reduction certificates.

Serializers emit canonical whitespace (single spaces, one record per
line, no trailing blanks) so golden-file comparison is bit-exact;
``parse(serialize(x))`` is the identity for every document kind.
Parsers skip blank lines and ``#`` comments and report errors with
1-based line numbers.
"""

from __future__ import annotations

import re

from .align import AlignmentInstance, AlignmentSolution
from .errors import ParseError, ValidationError
from .mis3 import Graph, Mis3Certificate
from .orders import (
    DagOrder,
    IntervalOrder,
    LinearOrder,
    MarkerSet,
    Order,
    WeakOrder,
)
from .sat32 import Literal, Occurrence, Sat32Certificate, Sat32Instance, normalize_sat32

_IV_TOKEN = re.compile(r"([A-Za-z0-9_+^-]+)=\((-?\d+),(-?\d+)\)\Z")
_REL_TOKEN = re.compile(r"([A-Za-z0-9_+^-]+)<([A-Za-z0-9_+^-]+)\Z")
_LIT_TOKEN = re.compile(r"([+-])(\d+)\Z")


class _Lines:
    """Comment-stripping line cursor with 1-based positions."""

    def __init__(self, text: str):
        self.rows: list[tuple[int, list[str]]] = []
        for no, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0].strip()
            if body:
                self.rows.append((no, body.split()))
        self.at = 0

    def peek(self) -> tuple[int, list[str]] | None:
        return self.rows[self.at] if self.at < len(self.rows) else None

    def next(self, expect: str | None = None) -> tuple[int, list[str]]:
        if self.at >= len(self.rows):
            raise ParseError(f"unexpected end of document"
                             + (f", expected {expect!r}" if expect else ""))
        row = self.rows[self.at]
        self.at += 1
        if expect is not None and row[1][0] != expect:
            raise ParseError(f"expected {expect!r}, got {row[1][0]!r}", row[0])
        return row

    def done(self) -> None:
        row = self.peek()
        if row is not None:
            raise ParseError(f"unexpected trailing content {row[1][0]!r}", row[0])


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", no) from None


def _reraise(no: int, err: ValidationError) -> None:
    raise ParseError(str(err), no) from None


# ---------------------------------------------------------------- instances

def _parse_buckets(tokens: list[str], no: int) -> list[list[str]]:
    buckets: list[list[str]] = []
    current: list[str] | None = None
    for tok in tokens:
        if tok == "{":
            if current is not None:
                raise ParseError("nested '{' in bucket list", no)
            current = []
        elif tok == "}":
            if current is None:
                raise ParseError("'}' without matching '{'", no)
            buckets.append(current)
            current = None
        else:
            if current is None:
                raise ParseError(f"marker {tok!r} outside brackets", no)
            current.append(tok)
    if current is not None:
        raise ParseError("unterminated bucket", no)
    return buckets


def _parse_order_body(lines: _Lines, family: str, markers: MarkerSet) -> Order:
    no, toks = lines.next()
    head, body = toks[0], toks[1:]
    try:
        if family not in ("linear", "weak", "interval", "dag"):
            raise ParseError(f"unknown order family {family!r}", no)
        if family == "linear":
            if head != "perm":
                raise ParseError(f"linear order needs a 'perm' line, got {head!r}", no)
            return LinearOrder(body, markers=markers)
        if family == "weak":
            if head != "buckets":
                raise ParseError(f"weak order needs a 'buckets' line, got {head!r}", no)
            return WeakOrder(_parse_buckets(body, no), markers=markers)
        if family == "interval":
            if head != "iv":
                raise ParseError(f"interval order needs an 'iv' line, got {head!r}", no)
            intervals = {}
            for tok in body:
                m = _IV_TOKEN.match(tok)
                if not m:
                    raise ParseError(f"bad interval token {tok!r}", no)
                intervals[m.group(1)] = (int(m.group(2)), int(m.group(3)))
            return IntervalOrder(intervals, markers=markers)
        if family == "dag":
            if head != "rel":
                raise ParseError(f"dag order needs a 'rel' line, got {head!r}", no)
            relation = []
            for tok in body:
                m = _REL_TOKEN.match(tok)
                if not m:
                    raise ParseError(f"bad relation token {tok!r}", no)
                relation.append((m.group(1), m.group(2)))
            return DagOrder(relation, markers=markers)
    except ValidationError as err:
        if isinstance(err, ParseError):
            raise
        _reraise(no, err)
    raise AssertionError("unreachable")


def parse_instance(text: str) -> AlignmentInstance:
    lines = _Lines(text)
    no, toks = lines.next("poa")
    if toks != ["poa", "1"]:
        raise ParseError(f"unsupported document version {' '.join(toks)!r}", no)
    no, toks = lines.next("markers")
    try:
        markers = MarkerSet(toks[1:])
    except ValidationError as err:
        _reraise(no, err)
    orders = []
    for _ in range(2):
        no, toks = lines.next("order")
        if len(toks) != 3:
            raise ParseError("order header needs a name and a family", no)
        orders.append(_parse_order_body(lines, toks[2], markers))
    lines.done()
    return AlignmentInstance(markers, orders[0], orders[1])


def _family_tag(order: Order) -> str:
    return {LinearOrder: "linear", WeakOrder: "weak",
            IntervalOrder: "interval", DagOrder: "dag"}[type(order)]


def _order_body(order: Order) -> str:
    if isinstance(order, LinearOrder):
        return " ".join(["perm", *order.perm]).rstrip()
    if isinstance(order, WeakOrder):
        parts = ["buckets"]
        for b in order.buckets:
            parts.append("{ " + " ".join(sorted(b)) + " }")
        return " ".join(parts)
    if isinstance(order, IntervalOrder):
        toks = [f"{m}=({l},{r})" for m, (l, r) in
                ((m, order.intervals[m]) for m in order.markers)]
        return " ".join(["iv", *toks]).rstrip()
    if isinstance(order, DagOrder):
        toks = [f"{a}<{b}" for a, b in sorted(order.relation)]
        return " ".join(["rel", *toks]).rstrip()
    raise ValidationError(f"cannot serialize order type {type(order).__name__}")


def serialize_instance(instance: AlignmentInstance) -> str:
    lines = ["poa 1",
             " ".join(["markers", *instance.markers]).rstrip()]
    for name, order in (("gamma", instance.gamma), ("pi", instance.pi)):
        lines.append(f"order {name} {_family_tag(order)}")
        lines.append(_order_body(order))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- graphs / sat

def parse_graph(text: str) -> Graph:
    lines = _Lines(text)
    no, toks = lines.next("graph")
    if len(toks) != 3:
        raise ParseError("graph header needs vertex and edge counts", no)
    n, m = _int(toks[1], no), _int(toks[2], no)
    edges = []
    for _ in range(m):
        no, toks = lines.next("edge")
        if len(toks) != 3:
            raise ParseError("edge line needs two endpoints", no)
        u, v = _int(toks[1], no), _int(toks[2], no)
        if u == v:
            raise ParseError(f"self-loop on vertex {u}", no)
        edges.append((min(u, v), max(u, v)))
    lines.done()
    try:
        return Graph(n, tuple(edges))
    except ValidationError as err:
        _reraise(no if edges else 1, err)


def serialize_graph(g: Graph) -> str:
    lines = [f"graph {g.n} {g.m}"]
    lines += [f"edge {l} {r}" for l, r in g.edges]
    return "\n".join(lines) + "\n"


def _literal(tok: str, no: int) -> Literal:
    m = _LIT_TOKEN.match(tok)
    if not m:
        raise ParseError(f"bad literal {tok!r}, expected like +1 or -2", no)
    return (int(m.group(2)), m.group(1) == "+")


def parse_sat(text: str) -> Sat32Instance:
    lines = _Lines(text)
    no, toks = lines.next("sat32")
    if len(toks) != 3:
        raise ParseError("sat32 header needs variable and clause counts", no)
    n, m = _int(toks[1], no), _int(toks[2], no)
    clauses = []
    for _ in range(m):
        no, toks = lines.next("clause")
        if len(toks) != 3:
            raise ParseError("clause line needs exactly two literals", no)
        clauses.append((_literal(toks[1], no), _literal(toks[2], no)))
    lines.done()
    try:
        return normalize_sat32(clauses, n=n)
    except ValidationError as err:
        _reraise(no if clauses else 1, err)


def _lit_str(lit: Literal) -> str:
    v, pos = lit
    return f"{'+' if pos else '-'}{v}"


def serialize_sat(sat: Sat32Instance) -> str:
    lines = [f"sat32 {sat.n} {sat.m}"]
    lines += [f"clause {_lit_str(a)} {_lit_str(b)}" for a, b in sat.clauses]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- solutions

def parse_solution(text: str) -> AlignmentSolution:
    lines = _Lines(text)
    fields: dict[str, str] = {}
    order = ["n_adj", "n_brk", "gamma_ext", "pi_ext"]
    last_no = 1
    for key in order:
        no, toks = lines.next()
        last_no = no
        joined = " ".join(toks)
        if not joined.startswith(key + "="):
            raise ParseError(f"expected a {key}= line", no)
        fields[key] = joined[len(key) + 1:]
    lines.done()
    try:
        gamma_ext = LinearOrder(fields["gamma_ext"].split())
        pi_ext = LinearOrder(fields["pi_ext"].split(), markers=gamma_ext.markers)
        sol = AlignmentSolution(gamma_ext, pi_ext,
                                int(fields["n_adj"]), int(fields["n_brk"]))
    except (ValidationError, ValueError) as err:
        raise ParseError(str(err), last_no) from None
    from .orders import count_adjacencies
    if sol.n_adj != count_adjacencies(gamma_ext, pi_ext):
        raise ParseError("recorded n_adj does not match the extensions", last_no)
    return sol


def serialize_solution(sol: AlignmentSolution) -> str:
    return (f"n_adj={sol.n_adj}\n"
            f"n_brk={sol.n_brk}\n"
            f"gamma_ext={' '.join(sol.gamma_ext.perm)}\n"
            f"pi_ext={' '.join(sol.pi_ext.perm)}\n")


# ---------------------------------------------------------------- witnesses

def parse_independent_set(text: str) -> frozenset[int]:
    lines = _Lines(text)
    no, toks = lines.next("iset")
    lines.done()
    return frozenset(_int(t, no) for t in toks[1:])


def serialize_independent_set(vs: frozenset[int]) -> str:
    return " ".join(["iset", *map(str, sorted(vs))]).rstrip() + "\n"


def parse_assignment(text: str) -> dict[int, bool]:
    lines = _Lines(text)
    no, toks = lines.next("assign")
    lines.done()
    out: dict[int, bool] = {}
    for tok in toks[1:]:
        v, value = _literal(tok, no)
        if v in out:
            raise ParseError(f"variable {v} assigned twice", no)
        out[v] = value
    return out


def serialize_assignment(assignment: dict[int, bool]) -> str:
    toks = [f"{'+' if assignment[v] else '-'}{v}" for v in sorted(assignment)]
    return " ".join(["assign", *toks]).rstrip() + "\n"


# ------------------------------------------------------------- certificates

def _bucket_str(b: frozenset) -> str:
    return "{ " + " ".join(sorted(b)) + " }"


def serialize_certificate(cert: Mis3Certificate | Sat32Certificate) -> str:
    if isinstance(cert, Mis3Certificate):
        return _serialize_mis3_cert(cert)
    if isinstance(cert, Sat32Certificate):
        return _serialize_sat32_cert(cert)
    raise ValidationError(f"cannot serialize certificate type {type(cert).__name__}")


def parse_certificate(text: str) -> Mis3Certificate | Sat32Certificate:
    lines = _Lines(text)
    row = lines.peek()
    if row is None:
        raise ParseError("empty certificate document")
    no, toks = row
    if toks[:2] == ["cert", "mis3"]:
        return _parse_mis3_cert(lines)
    if toks[:2] == ["cert", "sat32"]:
        return _parse_sat32_cert(lines)
    raise ParseError(f"unknown certificate header {' '.join(toks[:2])!r}", no)


def _serialize_mis3_cert(cert: Mis3Certificate) -> str:
    g = cert.graph
    lines = ["cert mis3", f"graph {g.n} {g.m}"]
    lines += [f"edge {l} {r}" for l, r in g.edges]
    for i in range(1, g.n + 1):
        u, v = cert.vertex_markers[i]
        lines.append(f"vmark {i} {u} {v}")
    for j in range(1, g.m + 1):
        p, q, e = cert.edge_markers[j]
        lines.append(f"emark {j} {p} {q} {e}")
    for h in range(1, g.n + g.m + 1):
        lines.append(f"sep {h} {cert.sep_markers[h]}")
    lines.append(" ".join(["base", *cert.base_sequence]))
    lines.append(" ".join(["doubled", *cert.doubled_sequence]))
    iv = [f"{m}=({l},{r})" for m, (l, r) in sorted(cert.intervals.items())]
    lines.append(" ".join(["iv", *iv]))
    for i in range(1, g.n + 1):
        lines.append(" ".join([f"section {i}", *cert.sections[i]]))
    return "\n".join(lines) + "\n"


def _parse_mis3_cert(lines: _Lines) -> Mis3Certificate:
    lines.next("cert")
    no, toks = lines.next("graph")
    n, m = _int(toks[1], no), _int(toks[2], no)
    edges = []
    for _ in range(m):
        no, toks = lines.next("edge")
        edges.append((_int(toks[1], no), _int(toks[2], no)))
    try:
        graph = Graph(n, tuple(edges))
    except ValidationError as err:
        _reraise(no, err)
    vertex_markers = {}
    for _ in range(n):
        no, toks = lines.next("vmark")
        vertex_markers[_int(toks[1], no)] = (toks[2], toks[3])
    edge_markers = {}
    for _ in range(m):
        no, toks = lines.next("emark")
        edge_markers[_int(toks[1], no)] = (toks[2], toks[3], toks[4])
    sep_markers = {}
    for _ in range(n + m):
        no, toks = lines.next("sep")
        sep_markers[_int(toks[1], no)] = toks[2]
    no, toks = lines.next("base")
    base = tuple(toks[1:])
    no, toks = lines.next("doubled")
    doubled = tuple(toks[1:])
    no, toks = lines.next("iv")
    intervals = {}
    for tok in toks[1:]:
        mt = _IV_TOKEN.match(tok)
        if not mt:
            raise ParseError(f"bad interval token {tok!r}", no)
        intervals[mt.group(1)] = (int(mt.group(2)), int(mt.group(3)))
    sections = {}
    for _ in range(n):
        no, toks = lines.next("section")
        sections[_int(toks[1], no)] = tuple(toks[2:])
    lines.done()
    return Mis3Certificate(graph, vertex_markers, edge_markers, sep_markers,
                           base, doubled, intervals, sections)


def _serialize_sat32_cert(cert: Sat32Certificate) -> str:
    sat = cert.sat
    lines = ["cert sat32", f"sat32 {sat.n} {sat.m}"]
    lines += [f"clause {_lit_str(a)} {_lit_str(b)}" for a, b in sat.clauses]
    for i in range(1, sat.n + 1):
        cm = cert.chain_markers[i]
        lines.append(" ".join([f"chain {i}", *(cm[c] for c in "pqrstuv")]))
        sm = cert.select_markers[i]
        lines.append(f"select {i} {sm['a+']} {sm['b+']} {sm['a-']} {sm['b-']}")
        lines.append(f"dummy {i} {cert.dummy_markers[i]}")
        for gslot, occ in enumerate(sat.slots[i], 1):
            e, f = cert.literal_markers[(occ.clause, occ.position)]
            pol = "+" if occ.positive else "-"
            lines.append(f"lit {i} {gslot} {occ.clause} {occ.position} {pol} {e} {f}")
    for j in range(1, sat.m + 1):
        lines.append(f"sep {j} {cert.sep_markers[j]}")
        a, b = cert.clause_buckets[j]
        lines.append(f"cbuckets {j} {_bucket_str(a)} {_bucket_str(b)}")
    for i in range(1, sat.n + 1):
        lines.append(" ".join([f"xbuckets {i}",
                               *(_bucket_str(b) for b in cert.variable_buckets[i])]))
        lines.append(" ".join([f"ybuckets {i}",
                               *(_bucket_str(b) for b in cert.selection_buckets[i])]))
    return "\n".join(lines) + "\n"


def _parse_sat32_cert(lines: _Lines) -> Sat32Certificate:
    lines.next("cert")
    no, toks = lines.next("sat32")
    n, m = _int(toks[1], no), _int(toks[2], no)
    clauses = []
    for _ in range(m):
        no, toks = lines.next("clause")
        clauses.append((_literal(toks[1], no), _literal(toks[2], no)))
    chain_markers: dict[int, dict[str, str]] = {}
    select_markers: dict[int, dict[str, str]] = {}
    dummy_markers: dict[int, str] = {}
    slots: dict[int, list[Occurrence]] = {}
    literal_markers: dict[tuple[int, int], tuple[str, str]] = {}
    for _ in range(n):
        no, toks = lines.next("chain")
        i = _int(toks[1], no)
        chain_markers[i] = dict(zip("pqrstuv", toks[2:9]))
        no, toks = lines.next("select")
        select_markers[i] = {"a+": toks[2], "b+": toks[3], "a-": toks[4], "b-": toks[5]}
        no, toks = lines.next("dummy")
        dummy_markers[i] = toks[2]
        slots[i] = []
        for _g in range(3):
            no, toks = lines.next("lit")
            occ = Occurrence(_int(toks[3], no), _int(toks[4], no), toks[5] == "+")
            slots[i].append(occ)
            literal_markers[(occ.clause, occ.position)] = (toks[6], toks[7])
    sep_markers = {}
    clause_buckets = {}
    for _ in range(m):
        no, toks = lines.next("sep")
        sep_markers[_int(toks[1], no)] = toks[2]
        no, toks = lines.next("cbuckets")
        bs = _parse_buckets(toks[2:], no)
        if len(bs) != 2:
            raise ParseError("clause gadgets have exactly two buckets", no)
        clause_buckets[_int(toks[1], no)] = (frozenset(bs[0]), frozenset(bs[1]))
    variable_buckets = {}
    selection_buckets = {}
    for _ in range(n):
        no, toks = lines.next("xbuckets")
        bs = _parse_buckets(toks[2:], no)
        if len(bs) != 8:
            raise ParseError("variable gadgets have exactly eight buckets", no)
        variable_buckets[_int(toks[1], no)] = tuple(frozenset(b) for b in bs)
        no, toks = lines.next("ybuckets")
        bs = _parse_buckets(toks[2:], no)
        if len(bs) != 9:
            raise ParseError("selection gadgets have exactly nine buckets", no)
        selection_buckets[_int(toks[1], no)] = tuple(frozenset(b) for b in bs)
    lines.done()
    try:
        sat = normalize_sat32(clauses, n=n)
    except ValidationError as err:
        _reraise(1, err)
    for i in range(1, n + 1):
        if list(sat.slots[i]) != slots[i]:
            raise ParseError(f"lit records for variable {i} disagree with the clauses")
    return Sat32Certificate(sat, chain_markers, select_markers, dummy_markers,
                            literal_markers, sep_markers, clause_buckets,
                            variable_buckets, selection_buckets)
