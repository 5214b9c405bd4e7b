"""Matching constructions on the q x n vertex grid.

Every construction here is deterministic: full-height bands are laid from
the top of the grid, the residual band sits at the bottom, and blocks are
placed left to right.  Each strategy returns a MatchingReport whose
certificates record the bounds it is entitled to claim; callers can always
re-check the output with :func:`sigmahg.core.verify_matching`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import NamedTuple

from .core import (
    Edge,
    HypergraphSpec,
    Matching,
    NoRepresentation,
    Sigma,
    SigmaHypergraphError,
    ValidationError,
    Vertex,
    VertexSet,
    frobenius_decompose,
    make_spec,
    verify_matching,
)


class RegimeError(SigmaHypergraphError):
    """The requested construction's parameter regime does not apply."""


class NoSuchDesign(SigmaHypergraphError):
    """The requested combinatorial design does not exist."""


@dataclass(frozen=True)
class DiagonalLatinSquare:
    """Square array with every symbol once per row, column and main diagonal."""

    order: int
    cells: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RGoodSplit:
    """A split of sigma's part indices into A and B with part sums a and b
    such that gcd(a, b) = gcd(a, r) = gcd(b, r) = 1; L = lcm(a, b)."""

    set_a: tuple[int, ...]
    set_b: tuple[int, ...]
    a: int
    b: int
    L: int


@dataclass(frozen=True)
class MatchingReport:
    matching: Matching
    nu: int
    unmatched_count: int
    strategy: str
    certificates: tuple[tuple[str, int], ...] = ()
    proven: bool = True


class DiagonalPart(NamedTuple):
    """One main-diagonal part of a square-block matching fragment."""

    edge_pos: int  # index into the fragment's edge list
    class_index: int
    rows: frozenset[int]
    symbol: int  # 0-based part index; the part size is sigma.parts[symbol]


@dataclass(frozen=True)
class DlsFragment:
    """s edges perfectly covering an r x s subgrid, one per square row,
    with the main-diagonal parts singled out for exchange augmentation."""

    edges: tuple[Edge, ...]
    diagonal: tuple[DiagonalPart, ...]


def report_to_json(report: MatchingReport) -> dict:
    return {
        "nu": report.nu,
        "unmatched_count": report.unmatched_count,
        "strategy": report.strategy,
        "certificates": [{"name": k, "value": v} for k, v in report.certificates],
        "unproven_regime": not report.proven,
    }


# ---------------------------------------------------------------------------
# Canonical form and the contract/expand reduction
# ---------------------------------------------------------------------------


def canonicalize(spec: HypergraphSpec, m: Matching) -> Matching:
    """Rearrange rows per class so every part occupies a consecutive row
    interval and unmatched vertices sit at the top of their class.

    Only per-class row permutations are applied, so validity and the edge
    count are preserved exactly.
    """
    check = verify_matching(spec, m)
    if not check.ok:
        raise ValidationError(f"input matching invalid: {check.violations[0].message}")
    next_row = {}
    unmatched = []
    for c in range(1, spec.n + 1):
        u = sum(1 for v in m.unmatched.members if v.class_index == c)
        unmatched.extend(Vertex(c, row) for row in range(1, u + 1))
        next_row[c] = u + 1
    new_edges = []
    for edge in m.edges:
        parts = []
        for c, rows in edge.parts:
            size = len(rows)
            parts.append((c, frozenset(range(next_row[c], next_row[c] + size))))
            next_row[c] += size
        new_edges.append(Edge(tuple(parts)))
    return Matching(tuple(new_edges), VertexSet(frozenset(unmatched)))


def gcd_unmatched_lower_bound(spec: HypergraphSpec) -> int:
    """At least this many vertices stay unmatched in any matching.

    When every part of sigma is divisible by d >= 2, matched vertices per
    class come in multiples of d, stranding q mod d rows in each of the n
    classes.  Zero when d = 1 or d | q.
    """
    d = spec.sigma.d
    if d < 2:
        return 0
    return (spec.q % d) * spec.n


def contract(spec: HypergraphSpec) -> tuple[HypergraphSpec, int]:
    """Divide every part and the class height by d = gcd(sigma).

    Returns the contracted spec H(n, r/d, q//d | sigma/d) plus the number
    of top rows (q mod d) that are dropped; those rows are unmatched in any
    canonical-form matching of the original.
    """
    d = spec.sigma.d
    if d < 2:
        raise RegimeError(f"gcd({spec.sigma}) = 1; nothing to contract")
    m, t = divmod(spec.q, d)
    if m < 1:
        raise RegimeError(f"q={spec.q} is smaller than gcd d={d}; contraction is empty")
    contracted = make_spec(spec.n, m, [a // d for a in spec.sigma.parts])
    return contracted, t


def expand(spec: HypergraphSpec, contracted_matching: Matching) -> Matching:
    """Lift a matching of the contracted hypergraph back to the original.

    Contracted vertex (class i, row j) becomes the d consecutive original
    rows [t + (j-1)d + 1 .. t + jd] of class i, where t = q mod d; the top
    t rows of every class join the unmatched set.
    """
    contracted, t = contract(spec)
    check = verify_matching(contracted, contracted_matching)
    if not check.ok:
        raise ValidationError(
            f"matching invalid for {contracted}: {check.violations[0].message}"
        )
    d = spec.sigma.d

    def expand_rows(rows: frozenset[int]) -> frozenset[int]:
        out = set()
        for j in rows:
            out.update(range(t + (j - 1) * d + 1, t + j * d + 1))
        return frozenset(out)

    edges = tuple(
        Edge(tuple((c, expand_rows(rows)) for c, rows in e.parts))
        for e in contracted_matching.edges
    )
    unmatched = {Vertex(c, row) for c in range(1, spec.n + 1) for row in range(1, t + 1)}
    for v in contracted_matching.unmatched.members:
        unmatched.update(Vertex(v.class_index, row) for row in expand_rows(frozenset({v.row_index})))
    return Matching(edges, VertexSet(frozenset(unmatched)))


# ---------------------------------------------------------------------------
# Diagonal-shift bands (the workhorse of every perfect regime)
# ---------------------------------------------------------------------------


def _band_parts(
    sizes: tuple[int, ...], classes: list[int], row0: int
) -> list[tuple[tuple[int, frozenset[int]], ...]]:
    """One shifted copy of ``sizes`` per class of the band.

    The band spans rows row0+1 .. row0+sum(sizes) over the given classes;
    column j contributes part i at class (j+i) mod width, each part using
    its fixed row block, so the band is covered exactly.
    """
    width = len(classes)
    if width < len(sizes):
        raise ValidationError(f"band of width {width} cannot host {len(sizes)} parts")
    offsets = [0]
    for a in sizes:
        offsets.append(offsets[-1] + a)
    result = []
    for j in range(width):
        parts = tuple(
            (
                classes[(j + i) % width],
                frozenset(range(row0 + offsets[i] + 1, row0 + offsets[i + 1] + 1)),
            )
            for i in range(len(sizes))
        )
        result.append(parts)
    return result


def _band_edges(sizes: tuple[int, ...], classes: list[int], row0: int) -> list[Edge]:
    return [Edge(p) for p in _band_parts(sizes, classes, row0)]


def diagonal_perfect_matching(spec: HypergraphSpec) -> Matching:
    """Perfect matching when r | q and n >= s: stack q/r bands of height r,
    each covered by n cyclically shifted edges."""
    r, s = spec.r, spec.sigma.s
    if spec.q % r != 0:
        raise RegimeError(f"need r | q, got r={r}, q={spec.q}")
    if spec.n < s:
        raise RegimeError(f"need n >= s, got n={spec.n}, s={s}")
    classes = list(range(1, spec.n + 1))
    edges: list[Edge] = []
    for strip in range(spec.q // r):
        edges.extend(_band_edges(spec.sigma.parts, classes, strip * r))
    return Matching(tuple(edges), VertexSet())


# ---------------------------------------------------------------------------
# All-ones and rectangular partitions
# ---------------------------------------------------------------------------


def all_ones_maximum_matching(spec: HypergraphSpec) -> MatchingReport:
    """Maximum matching for sigma = (1,...,1), leaving exactly nq mod r
    vertices unmatched.

    Layout: full bands of height r are tiled with width-r blocks (matched
    row by row) and width-(r+1) blocks (row i matched minus its i-th
    vertex, the punctured diagonal forming the extra edge); the bottom
    residual strip is matched row by row over width-r blocks, leaving a
    corner of at most (r-1)^2 cells.  Corner cells are then absorbed r at
    a time by an exchange: each replaces a donor vertex in an untouched
    first-band edge, and the r freed donors (one per block, so pairwise
    distinct classes) form one new edge.
    """
    sigma, n, q = spec.sigma, spec.n, spec.q
    r = sigma.r
    if sigma.parts != (1,) * r:
        raise RegimeError(f"sigma must be all ones, got {sigma}")
    if n < (r + 1) ** 2:
        raise RegimeError(f"need n >= (r+1)^2 = {(r + 1) ** 2}, got n={n}")
    if q < r:
        raise RegimeError(f"need q >= r = {r}, got q={q}")

    x, y = frobenius_decompose(n, r, r + 1)
    widths = [r] * x + [r + 1] * y
    starts = list(itertools.accumulate([0] + widths[:-1]))
    blocks = list(zip(starts, widths))

    edges: list[Edge] = []
    band0_edge_ids: list[list[int]] = []
    bands, t = divmod(q, r)
    for band in range(bands):
        row0 = band * r
        for c0, w in blocks:
            ids = []
            if w == r:
                for i in range(r):
                    ids.append(len(edges))
                    edges.append(
                        Edge(
                            tuple(
                                (c0 + 1 + j, frozenset({row0 + i + 1}))
                                for j in range(r)
                            )
                        )
                    )
            else:
                for i in range(r):
                    ids.append(len(edges))
                    edges.append(
                        Edge(
                            tuple(
                                (c0 + 1 + j, frozenset({row0 + i + 1}))
                                for j in range(r + 1)
                                if j != i
                            )
                        )
                    )
                ids.append(len(edges))
                edges.append(
                    Edge(
                        tuple(
                            (c0 + 1 + i, frozenset({row0 + i + 1})) for i in range(r)
                        )
                    )
                )
            if band == 0:
                band0_edge_ids.append(ids)

    full_width, g = divmod(n, r)
    for blk in range(full_width):
        for i in range(t):
            edges.append(
                Edge(
                    tuple(
                        (blk * r + 1 + j, frozenset({bands * r + i + 1}))
                        for j in range(r)
                    )
                )
            )

    corner = [
        Vertex(c, row)
        for row in range(bands * r + 1, q + 1)
        for c in range(full_width * r + 1, n + 1)
    ]
    groups = len(corner) // r
    if groups and len(band0_edge_ids) < r:
        raise RegimeError("not enough donor blocks for the corner exchange")
    for gi in range(groups):
        freed = []
        for m, v in enumerate(corner[gi * r : (gi + 1) * r]):
            eidx = band0_edge_ids[m][gi]
            donor = edges[eidx]
            victim_class, victim_rows = donor.parts[0]
            edges[eidx] = Edge(
                donor.parts[1:] + ((v.class_index, frozenset({v.row_index})),)
            )
            freed.append((victim_class, victim_rows))
        edges.append(Edge(tuple(freed)))
    leftover = corner[groups * r :]

    matching = Matching(tuple(edges), VertexSet(frozenset(leftover)))
    nu = len(edges)
    return MatchingReport(
        matching,
        nu,
        len(leftover),
        "all-ones",
        certificates=(
            ("nu_upper", (n * q) // r),
            ("unmatched_expected", (n * q) % r),
        ),
    )


def rectangular_maximum_matching(spec: HypergraphSpec) -> MatchingReport:
    """Maximum matching when all parts equal some delta: contract by delta,
    run the all-ones construction, expand back."""
    sigma, n, q = spec.sigma, spec.n, spec.q
    if not sigma.is_rectangular():
        raise RegimeError(f"sigma must be rectangular, got {sigma}")
    delta = sigma.parts[0]
    r = sigma.r
    if n < (r + 1) ** 2:
        raise RegimeError(f"need n >= (r+1)^2 = {(r + 1) ** 2}, got n={n}")
    if q < r * delta:
        raise RegimeError(f"need q >= r*delta = {r * delta}, got q={q}")
    if delta == 1:
        return all_ones_maximum_matching(spec)
    contracted, _ = contract(spec)
    inner = all_ones_maximum_matching(contracted)
    matching = expand(spec, inner.matching)
    nu = len(matching.edges)
    expected = n * (q - q % delta) // r
    if nu != expected:
        raise SigmaHypergraphError(
            f"internal: constructed {nu} edges, expected {expected}"
        )
    return MatchingReport(
        matching,
        nu,
        spec.num_vertices - r * nu,
        "rectangular",
        certificates=(
            ("nu_upper", (n * q) // r),
            ("nu_expected", expected),
            ("gcd_nu_upper", n * (q - q % delta) // r),
        ),
    )


# ---------------------------------------------------------------------------
# r-good splits, diagonal Latin squares, packings
# ---------------------------------------------------------------------------


def find_r_good_split(sigma: Sigma) -> RGoodSplit | None:
    """The split minimising L = lcm(a, b), or None when no subset of the
    parts has a sum coprime to r (ties broken toward the lexicographically
    smallest index set A)."""
    if sigma.s < 2:
        raise RegimeError(f"need at least two parts to split, got {sigma}")
    r = sigma.r
    best: tuple[int, tuple[int, ...]] | None = None
    for size in range(1, sigma.s):
        for combo in itertools.combinations(range(1, sigma.s + 1), size):
            a = sum(sigma.parts[i - 1] for i in combo)
            if math.gcd(a, r) != 1:
                continue
            L = math.lcm(a, r - a)
            if best is None or (L, combo) < best:
                best = (L, combo)
    if best is None:
        return None
    L, combo = best
    a = sum(sigma.parts[i - 1] for i in combo)
    other = tuple(i for i in range(1, sigma.s + 1) if i not in combo)
    return RGoodSplit(combo, other, a, r - a, L)


@lru_cache(maxsize=64)
def _dls_cells(order: int) -> tuple[tuple[int, ...], ...] | None:
    """First-fit backtracking search for a diagonal Latin square.

    Cells are visited main diagonal first, then row-major; plain row-major
    order stalls for hours from order 9 up, while pinning the diagonal
    early keeps every order through at least 12 effectively instant.
    """
    cells = [[-1] * order for _ in range(order)]
    row_used = [set() for _ in range(order)]
    col_used = [set() for _ in range(order)]
    diag_used: set[int] = set()
    positions = [(i, i) for i in range(order)] + [
        (i, j) for i in range(order) for j in range(order) if i != j
    ]

    def place(pos: int) -> bool:
        if pos == len(positions):
            return True
        i, j = positions[pos]
        for v in range(order):
            if v in row_used[i] or v in col_used[j]:
                continue
            if i == j and v in diag_used:
                continue
            cells[i][j] = v
            row_used[i].add(v)
            col_used[j].add(v)
            if i == j:
                diag_used.add(v)
            if place(pos + 1):
                return True
            cells[i][j] = -1
            row_used[i].remove(v)
            col_used[j].remove(v)
            if i == j:
                diag_used.remove(v)
        return False

    if not place(0):
        return None
    return tuple(tuple(row) for row in cells)


def generate_dls(order: int) -> DiagonalLatinSquare:
    """Deterministic diagonal Latin square of the given order.

    Exists for order 1 and every order >= 3; order 2 has no such square
    (both 2x2 Latin squares have a constant diagonal).
    """
    if order <= 0:
        raise ValidationError(f"order must be positive, got {order}")
    if order == 2:
        raise NoSuchDesign("no diagonal Latin square of order 2 exists")
    cells = _dls_cells(order)
    if cells is None:
        raise NoSuchDesign(f"search found no diagonal Latin square of order {order}")
    return DiagonalLatinSquare(order, cells)


def dls_matching(
    spec: HypergraphSpec, row_offset: int, class_offset: int
) -> DlsFragment:
    """Perfect cover of the r x s subgrid at the given 0-based offsets.

    Column i of the subgrid is cut into consecutive blocks sized by the
    symbols running down column i of a diagonal Latin square of order s;
    edge j collects, from each column, the block carrying symbol D[j][i].
    Each edge then realises sigma, and the s blocks on the square's main
    diagonal land in s different edges with every part size represented
    once - exactly what the exchange augmentation needs.
    """
    sigma = spec.sigma
    s, r = sigma.s, sigma.r
    if s == 2:
        raise NoSuchDesign(
            "no order-2 diagonal square; two-part edges use the paired-column scheme"
        )
    if row_offset < 0 or class_offset < 0:
        raise ValidationError("offsets are 0-based and nonnegative")
    if row_offset + r > spec.q or class_offset + s > spec.n:
        raise ValidationError(
            f"r x s subgrid at ({row_offset}, {class_offset}) exceeds the "
            f"{spec.q}x{spec.n} grid"
        )
    square = generate_dls(s)
    # blocks[i][sym] = row set of the block carrying `sym` in column i
    blocks: list[dict[int, frozenset[int]]] = []
    for i in range(s):
        column = {}
        row = row_offset
        for k in range(s):
            sym = square.cells[k][i]
            size = sigma.parts[sym]
            column[sym] = frozenset(range(row + 1, row + size + 1))
            row += size
        blocks.append(column)
    edges = tuple(
        Edge(
            tuple(
                (class_offset + i + 1, blocks[i][square.cells[j][i]])
                for i in range(s)
            )
        )
        for j in range(s)
    )
    diagonal = tuple(
        DiagonalPart(
            edge_pos=i,
            class_index=class_offset + i + 1,
            rows=blocks[i][square.cells[i][i]],
            symbol=square.cells[i][i],
        )
        for i in range(s)
    )
    return DlsFragment(edges, diagonal)


def packing_matching(
    spec: HypergraphSpec,
    split: RGoodSplit,
    row_offset: int,
    class_offset: int,
) -> tuple[Edge, ...]:
    """L edges perfectly covering the L x r subgrid at the 0-based offsets.

    The left L x a half is tiled with L/a square bands packed with the A
    parts, the right L x b half with L/b bands of the B parts; the i-th
    half from each side share no classes, so their union is an edge.
    """
    a, b, L = split.a, split.b, split.L
    r = spec.r
    if row_offset < 0 or class_offset < 0:
        raise ValidationError("offsets are 0-based and nonnegative")
    if row_offset + L > spec.q or class_offset + r > spec.n:
        raise ValidationError(
            f"L x r subgrid at ({row_offset}, {class_offset}) exceeds the "
            f"{spec.q}x{spec.n} grid"
        )
    sigma_a = tuple(spec.sigma.parts[i - 1] for i in split.set_a)
    sigma_b = tuple(spec.sigma.parts[i - 1] for i in split.set_b)
    left = [class_offset + 1 + j for j in range(a)]
    right = [class_offset + a + 1 + j for j in range(b)]
    halves_a: list[tuple] = []
    halves_b: list[tuple] = []
    for blk in range(L // a):
        halves_a.extend(_band_parts(sigma_a, left, row_offset + blk * a))
    for blk in range(L // b):
        halves_b.extend(_band_parts(sigma_b, right, row_offset + blk * b))
    return tuple(Edge(pa + pb) for pa, pb in zip(halves_a, halves_b))


# ---------------------------------------------------------------------------
# The r-good dispatcher
# ---------------------------------------------------------------------------


def _perfect_width_bands(
    spec: HypergraphSpec, split: RGoodSplit, height: int, row0: int, num_classes: int
) -> list[Edge]:
    """Cover rows row0+1..row0+height over classes 1..num_classes (r | width)
    by height = x*L + y*r: x packed L-bands then y shifted r-bands."""
    r = spec.r
    x, y = frobenius_decompose(height, split.L, r)
    edges: list[Edge] = []
    row = row0
    for _ in range(x):
        for grid in range(num_classes // r):
            edges.extend(packing_matching(spec, split, row, grid * r))
        row += split.L
    band_classes = list(range(1, num_classes + 1))
    for _ in range(y):
        edges.extend(_band_edges(spec.sigma.parts, band_classes, row))
        row += r
    return edges


def r_good_maximum_matching(
    spec: HypergraphSpec,
    permissive: bool = False,
    force_regime: str | None = None,
) -> MatchingReport:
    """Dispatch the strongest applicable r-good construction.

    Regimes, strongest first:

    * ``1a``  r | q: stacked shifted bands; perfect.
    * ``1b``  r | n and q = x*L + y*r: packed plus shifted bands; perfect.
    * ``3``   q >= L(r^2-1) and n >= s+r (s >= 3; n >= r+2 when s = 2):
              stacked strips built from exchangeable square blocks, packed
              residue, then corner columns absorbed r vertices at a time;
              at most (r-1)^2 unmatched.
    * ``2``   q >= L(r-1) and n >= s: stacked strips plus packed residue
              over the widest r-divisible prefix; at most L(r-1)^2
              unmatched.

    ``permissive=True`` relaxes the height gates of regimes 2 and 3 down to
    what the construction mechanically needs, marking the report as an
    unproven regime when outside the stated envelope.
    """
    sigma = spec.sigma
    r, s, n, q = sigma.r, sigma.s, spec.n, spec.q
    split = find_r_good_split(sigma)
    if split is None:
        raise RegimeError(f"{sigma} is not r-good: no part subset sum is coprime to r={r}")
    if not spec.has_edges:
        raise RegimeError(f"{spec} has no edges")
    L = split.L
    base_height = (L - 1) * (r - 1)

    def build_1a() -> MatchingReport:
        m = diagonal_perfect_matching(spec)
        return MatchingReport(
            m, len(m.edges), 0, "rgood-1a", certificates=(("nu_upper", n * q // r),)
        )

    def build_1b() -> MatchingReport:
        edges = _perfect_width_bands(spec, split, q, 0, n)
        m = Matching(tuple(edges), VertexSet())
        return MatchingReport(
            m, len(m.edges), 0, "rgood-1b", certificates=(("nu_upper", n * q // r),)
        )

    def build_residue(exchange: bool) -> MatchingReport:
        full = max(0, (q - base_height) // r)
        q1 = q - full * r
        t_cl, b = divmod(n, r)
        edges: list[Edge] = []
        fragments: list[dict] = []  # consumable exchange blocks, in order
        all_classes = list(range(1, n + 1))

        for strip in range(full):
            row0 = strip * r
            if not exchange:
                edges.extend(_band_edges(sigma.parts, all_classes, row0))
                continue
            if s >= 3:
                f = (n - r) // s
                for blk in range(f):
                    frag = dls_matching(spec, row0, blk * s)
                    ids = []
                    for e in frag.edges:
                        ids.append(len(edges))
                        edges.append(e)
                    fragments.append({"kind": "dls", "ids": ids, "diag": frag.diagonal})
                rest = all_classes[f * s :]
            else:
                a1, a2 = sigma.parts
                f = (n - r) // 2
                for blk in range(f):
                    col1, col2 = 2 * blk + 1, 2 * blk + 2
                    e1 = Edge(
                        (
                            (col1, frozenset(range(row0 + 1, row0 + a1 + 1))),
                            (col2, frozenset(range(row0 + 1, row0 + a2 + 1))),
                        )
                    )
                    e2 = Edge(
                        (
                            (col1, frozenset(range(row0 + a1 + 1, row0 + r + 1))),
                            (col2, frozenset(range(row0 + a2 + 1, row0 + r + 1))),
                        )
                    )
                    fragments.append(
                        {"kind": "pair", "e1": len(edges), "cols": (col1, col2), "row0": row0}
                    )
                    edges.append(e1)
                    edges.append(e2)
                rest = all_classes[2 * f :]
            edges.extend(_band_edges(sigma.parts, rest, row0))

        if t_cl >= 1 and q1 > 0:
            edges.extend(_perfect_width_bands(spec, split, q1, full * r, t_cl * r))

        corner_classes = list(range(t_cl * r + 1, n + 1))
        corner_row0 = full * r
        unmatched: set[Vertex] = set()
        bookkeeping: list[tuple[str, int]] = [
            ("q1", q1),
            ("t", t_cl),
            ("b", b),
        ]
        if exchange:
            p, z = divmod(q1, r)
            need = p * len(corner_classes)
            if need > len(fragments):
                raise RegimeError(
                    f"corner absorption needs {need} exchange blocks, "
                    f"only {len(fragments)} available"
                )
            offsets = [0]
            for a_i in sigma.parts:
                offsets.append(offsets[-1] + a_i)
            nxt = 0
            for c in corner_classes:
                for grp in range(p):
                    grp_row0 = corner_row0 + grp * r
                    frag = fragments[nxt]
                    nxt += 1
                    if frag["kind"] == "dls":
                        freed = []
                        for dp in frag["diag"]:
                            eidx = frag["ids"][dp.edge_pos]
                            old = edges[eidx]
                            incoming = (
                                c,
                                frozenset(
                                    range(
                                        grp_row0 + offsets[dp.symbol] + 1,
                                        grp_row0 + offsets[dp.symbol + 1] + 1,
                                    )
                                ),
                            )
                            edges[eidx] = Edge(
                                tuple(
                                    pt for pt in old.parts if pt[0] != dp.class_index
                                )
                                + (incoming,)
                            )
                            freed.append((dp.class_index, dp.rows))
                        edges.append(Edge(tuple(freed)))
                    else:
                        a1, a2 = sigma.parts
                        col1, col2 = frag["cols"]
                        row0 = frag["row0"]
                        top_a1_col1 = (col1, frozenset(range(row0 + 1, row0 + a1 + 1)))
                        top_a2_col2 = (col2, frozenset(range(row0 + 1, row0 + a2 + 1)))
                        c_top = (c, frozenset(range(grp_row0 + 1, grp_row0 + a2 + 1)))
                        c_bot = (c, frozenset(range(grp_row0 + a2 + 1, grp_row0 + r + 1)))
                        edges[frag["e1"]] = Edge((top_a1_col1, c_top))
                        edges.append(Edge((top_a2_col2, c_bot)))
            for c in corner_classes:
                unmatched.update(
                    Vertex(c, row) for row in range(corner_row0 + p * r + 1, q + 1)
                )
            bookkeeping += [("p", p), ("z", z)]
            if s >= 3:
                bookkeeping += [("f", (n - r) // s), ("h", n - ((n - r) // s) * s)]
            else:
                bookkeeping += [("f", (n - r) // 2), ("h", n - ((n - r) // 2) * 2)]
            strategy = "rgood-3" if s >= 3 else "rgood-3-two-part"
            bound = (r - 1) ** 2
            bookkeeping += [
                ("regime3_q_min", L * (r * r - 1)),
                ("regime3_q_min_alt", L * (r - 1) ** 2),
            ]
        else:
            for c in corner_classes:
                unmatched.update(
                    Vertex(c, row) for row in range(corner_row0 + 1, q + 1)
                )
            strategy = "rgood-2"
            bound = L * (r - 1) ** 2

        m = Matching(tuple(edges), VertexSet(frozenset(unmatched)))
        report = MatchingReport(
            m,
            len(edges),
            len(unmatched),
            strategy,
            certificates=tuple(
                [("nu_upper", n * q // r), ("unmatched_bound", bound)] + bookkeeping
            ),
        )
        if report.unmatched_count > bound:
            raise SigmaHypergraphError(
                f"internal: {report.unmatched_count} unmatched exceeds bound {bound}"
            )
        return report

    def gate_1a() -> bool:
        return q % r == 0 and n >= s

    def gate_1b() -> bool:
        if n % r != 0:
            return False
        try:
            frobenius_decompose(q, L, r)
            return True
        except NoRepresentation:
            return False

    def gate_3(strict: bool) -> bool:
        wide = n >= s + r if s >= 3 else n >= r + 2
        tall = q >= L * (r * r - 1) if strict else q >= base_height
        return wide and tall

    def gate_2(strict: bool) -> bool:
        tall = q >= L * (r - 1) if strict else q >= base_height
        return n >= s and tall

    if force_regime is not None:
        if force_regime == "1a":
            if not gate_1a():
                raise RegimeError(f"regime 1a needs r|q and n >= s for {spec}")
            return build_1a()
        if force_regime == "1b":
            if not gate_1b():
                raise RegimeError(f"regime 1b needs r|n and q = x*{L} + y*{r}")
            return build_1b()
        if force_regime == "3":
            if not gate_3(strict=not permissive):
                raise RegimeError(
                    f"regime 3 needs q >= {L * (r * r - 1)} and "
                    f"n >= {s + r if s >= 3 else r + 2}"
                )
            rep = build_residue(exchange=True)
            return replace(rep, proven=gate_3(strict=True))
        if force_regime == "2":
            if not gate_2(strict=not permissive):
                raise RegimeError(f"regime 2 needs q >= {L * (r - 1)} and n >= s")
            rep = build_residue(exchange=False)
            return replace(rep, proven=gate_2(strict=True))
        raise ValidationError(f"unknown regime {force_regime!r}")

    if gate_1a():
        return build_1a()
    if gate_1b():
        return build_1b()
    if gate_3(strict=not permissive):
        rep = build_residue(exchange=True)
        return replace(rep, proven=gate_3(strict=True))
    if gate_2(strict=not permissive):
        rep = build_residue(exchange=False)
        return replace(rep, proven=gate_2(strict=True))
    raise RegimeError(
        f"no r-good regime applies to {spec} (L={L}): need r|q, or r|n with "
        f"q = x*{L} + y*{r}, or q >= {L * (r - 1)} (strongest augmented regime "
        f"additionally needs q >= {L * (r * r - 1)} and n >= "
        f"{s + r if s >= 3 else r + 2}); got q={q}, n={n}"
    )


# ---------------------------------------------------------------------------
# Greedy fallback and the strategy dispatcher
# ---------------------------------------------------------------------------


def greedy_matching(spec: HypergraphSpec) -> Matching:
    """Repeatedly place one edge: largest parts go to the classes with the
    most free rows (ties toward lower class indices), consuming the lowest
    free rows.  Stops when no assignment fits; sorted-to-sorted assignment
    fits whenever any assignment does."""
    parts = spec.sigma.parts
    s = spec.sigma.s
    free: dict[int, list[int]] = {c: list(range(1, spec.q + 1)) for c in range(1, spec.n + 1)}
    edges: list[Edge] = []
    if spec.has_edges:
        while True:
            order = sorted(free, key=lambda c: (-len(free[c]), c))[:s]
            if any(len(free[order[i]]) < parts[i] for i in range(s)):
                break
            eparts = []
            for i, c in enumerate(order):
                rows = free[c][: parts[i]]
                del free[c][: parts[i]]
                eparts.append((c, frozenset(rows)))
            edges.append(Edge(tuple(eparts)))
    unmatched = frozenset(
        Vertex(c, row) for c, rows in free.items() for row in rows
    )
    return Matching(tuple(edges), VertexSet(unmatched))


def best_matching(spec: HypergraphSpec) -> MatchingReport:
    """Try every applicable strategy and return the report with the largest
    matching (ties go to the earlier strategy).

    Order tried: full-height bands (r | q), the rectangular pipeline, the
    r-good dispatcher, contract-recurse-expand when gcd(sigma) >= 2, and
    finally the greedy fallback, which always succeeds.
    """
    n, q, r = spec.n, spec.q, spec.r
    candidates: list[MatchingReport] = []

    def attempt(thunk) -> None:
        try:
            candidates.append(thunk())
        except (RegimeError, NoSuchDesign, NoRepresentation):
            pass

    def diag() -> MatchingReport:
        m = diagonal_perfect_matching(spec)
        return MatchingReport(m, len(m.edges), 0, "diagonal")

    attempt(diag)
    if spec.sigma.is_rectangular():
        attempt(lambda: rectangular_maximum_matching(spec))
    if spec.sigma.s >= 2:
        attempt(lambda: r_good_maximum_matching(spec))
    if spec.sigma.d >= 2:

        def contracted_route() -> MatchingReport:
            inner_spec, _ = contract(spec)
            inner = best_matching(inner_spec)
            m = expand(spec, inner.matching)
            return MatchingReport(
                m,
                len(m.edges),
                spec.num_vertices - r * len(m.edges),
                f"contract+{inner.strategy}",
                proven=inner.proven,
            )

        attempt(contracted_route)
    greedy = greedy_matching(spec)
    candidates.append(
        MatchingReport(
            greedy, len(greedy.edges), spec.num_vertices - r * len(greedy.edges), "greedy"
        )
    )

    best = candidates[0]
    for cand in candidates[1:]:
        if cand.nu > best.nu:
            best = cand

    certs = [("nu_upper", (n * q) // r)]
    d = spec.sigma.d
    if d >= 2:
        t = q % d
        certs.append(("gcd_unmatched_lower", t * n))
        certs.append(("gcd_nu_upper", n * (q - t) // r))
    seen = {name for name, _ in certs}
    certs.extend((k, v) for k, v in best.certificates if k not in seen)
    return replace(best, certificates=tuple(certs))
