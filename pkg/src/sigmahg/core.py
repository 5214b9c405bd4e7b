"""Domain types for sigma-hypergraphs plus the shared number theory.

A sigma-hypergraph H(n, r, q | sigma) has n*q vertices arranged as a
q x n grid: n classes (columns) of q rows each.  An r-subset of vertices
is an edge exactly when the sizes of its nonzero per-class intersections,
sorted decreasingly, equal the partition sigma of r.

Everything here is a pure function of its inputs; values are immutable
and safe to share across threads.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple


class SigmaHypergraphError(Exception):
    """Base class for all library errors."""


class ValidationError(SigmaHypergraphError, ValueError):
    """An input violates a documented precondition."""


class NoRepresentation(SigmaHypergraphError):
    """No nonnegative integer combination reaches the target."""


class NoEdges(SigmaHypergraphError):
    """The operation needs at least one edge but the edge set is empty."""


@dataclass(frozen=True)
class Sigma:
    """A partition of r in weakly decreasing order.

    ``parts`` is normalised to a descending tuple on construction.
    """

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValidationError("sigma needs at least one part")
        try:
            parts = tuple(sorted((int(a) for a in self.parts), reverse=True))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"sigma parts must be integers: {self.parts!r}") from exc
        if parts[-1] < 1:
            raise ValidationError(f"sigma parts must be positive: {self.parts!r}")
        object.__setattr__(self, "parts", parts)

    @property
    def r(self) -> int:
        """Sum of the parts (the uniform edge size)."""
        return sum(self.parts)

    @property
    def s(self) -> int:
        """Number of parts."""
        return len(self.parts)

    @property
    def d(self) -> int:
        """Greatest common divisor of the parts."""
        return math.gcd(*self.parts)

    def is_rectangular(self) -> bool:
        return self.parts[0] == self.parts[-1]

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.parts) + ")"


@dataclass(frozen=True)
class HypergraphSpec:
    """The tuple (n, q, sigma) describing H(n, r, q | sigma)."""

    n: int
    q: int
    sigma: Sigma

    def __post_init__(self) -> None:
        if self.n < 1 or self.q < 1:
            raise ValidationError(f"need n >= 1 and q >= 1, got n={self.n}, q={self.q}")

    @property
    def r(self) -> int:
        return self.sigma.r

    @property
    def num_vertices(self) -> int:
        return self.n * self.q

    @property
    def has_edges(self) -> bool:
        """True iff the edge set is non-empty.

        Edges need s distinct classes and a class tall enough for the
        largest part; degenerate specs are legal inputs everywhere and
        simply have no edges.
        """
        return self.n >= self.sigma.s and self.q >= self.sigma.parts[0]

    def __str__(self) -> str:
        return f"H(n={self.n}, r={self.r}, q={self.q} | {self.sigma})"


class Vertex(NamedTuple):
    """A grid cell, 1-indexed: class 1..n, row 1..q."""

    class_index: int
    row_index: int


@dataclass(frozen=True)
class Edge:
    """An edge candidate: parts (class, row-set), stored sorted by class.

    The constructor enforces structural sanity (non-empty parts, positive
    indices) but not membership in any particular hypergraph; use
    :func:`is_edge` for that.  Duplicate class indices are representable so
    that malformed candidates can be checked and reported rather than
    crashing, but no library construction ever emits one.
    """

    parts: tuple[tuple[int, frozenset[int]], ...]

    def __post_init__(self) -> None:
        norm = []
        for class_index, rows in self.parts:
            rows = frozenset(int(x) for x in rows)
            if not rows:
                raise ValidationError("edge part with empty row set")
            if min(rows) < 1 or int(class_index) < 1:
                raise ValidationError("class and row indices are 1-based positive integers")
            norm.append((int(class_index), rows))
        if not norm:
            raise ValidationError("edge needs at least one part")
        norm.sort(key=lambda p: (p[0], sorted(p[1])))
        object.__setattr__(self, "parts", tuple(norm))

    def vertices(self) -> Iterator[Vertex]:
        for class_index, rows in self.parts:
            for row in sorted(rows):
                yield Vertex(class_index, row)

    def classes(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.parts)

    def sizes(self) -> tuple[int, ...]:
        """Part sizes, sorted decreasingly."""
        return tuple(sorted((len(rows) for _, rows in self.parts), reverse=True))

    def size(self) -> int:
        return sum(len(rows) for _, rows in self.parts)


def make_edge(parts: Iterable[tuple[int, Iterable[int]]]) -> Edge:
    return Edge(tuple((c, frozenset(rows)) for c, rows in parts))


@dataclass(frozen=True)
class VertexSet:
    """An immutable set of grid vertices."""

    members: frozenset[Vertex] = field(default_factory=frozenset)

    @classmethod
    def of(cls, vertices: Iterable[Vertex | tuple[int, int]]) -> "VertexSet":
        return cls(frozenset(Vertex(int(c), int(r)) for c, r in vertices))

    @classmethod
    def from_profile(cls, spec: HypergraphSpec, profile: Iterable[int]) -> "VertexSet":
        """Take the top ``profile[i]`` rows of class i+1."""
        counts = list(profile)
        if len(counts) > spec.n:
            raise ValidationError(f"profile longer than class count {spec.n}")
        members = set()
        for i, b in enumerate(counts):
            if b < 0 or b > spec.q:
                raise ValidationError(f"profile entry {b} outside [0, q={spec.q}]")
            for row in range(1, b + 1):
                members.add(Vertex(i + 1, row))
        return cls(frozenset(members))

    def profile(self, n: int) -> tuple[int, ...]:
        """Per-class member counts (b_1, ..., b_n)."""
        counts = [0] * n
        for v in self.members:
            if not 1 <= v.class_index <= n:
                raise ValidationError(f"vertex {v} outside class range 1..{n}")
            counts[v.class_index - 1] += 1
        return tuple(counts)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: Vertex) -> bool:
        return v in self.members

    def __iter__(self) -> Iterator[Vertex]:
        return iter(sorted(self.members))


@dataclass(frozen=True)
class Matching:
    """A set of edges plus the residual unmatched vertices.

    The container does not enforce validity; :func:`verify_matching`
    reports violations so that tampered inputs can be diagnosed.
    """

    edges: tuple[Edge, ...]
    unmatched: VertexSet

    @property
    def size(self) -> int:
        return len(self.edges)


def all_vertices(spec: HypergraphSpec) -> Iterator[Vertex]:
    for class_index in range(1, spec.n + 1):
        for row in range(1, spec.q + 1):
            yield Vertex(class_index, row)


def make_spec(n: int, q: int, parts: Iterable[int]) -> HypergraphSpec:
    """Build and validate a hypergraph spec; parts may be given in any order."""
    return HypergraphSpec(int(n), int(q), Sigma(tuple(parts)))


def _in_range(spec: HypergraphSpec, v: Vertex) -> bool:
    return 1 <= v.class_index <= spec.n and 1 <= v.row_index <= spec.q


def is_edge(spec: HypergraphSpec, candidate: Edge) -> bool:
    """True iff the candidate's classes are distinct and its sorted part
    sizes realise sigma.  Out-of-range vertices raise ValidationError."""
    for v in candidate.vertices():
        if not _in_range(spec, v):
            raise ValidationError(f"vertex {tuple(v)} outside the {spec.q}x{spec.n} grid")
    classes = candidate.classes()
    if len(set(classes)) != len(classes):
        return False
    return candidate.sizes() == spec.sigma.parts


def _distinct_permutations(values: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Distinct permutations of a multiset, in descending lexicographic order."""
    counts = Counter(values)
    total = len(values)
    prefix: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(prefix) == total:
            yield tuple(prefix)
            return
        for v in sorted(counts, reverse=True):
            if counts[v] == 0:
                continue
            counts[v] -= 1
            prefix.append(v)
            yield from rec()
            prefix.pop()
            counts[v] += 1

    yield from rec()


def enumerate_edges(spec: HypergraphSpec) -> Iterator[Edge]:
    """Yield every edge exactly once, lazily.

    Order (an artifact convention, nothing more): ascending over the chosen
    class combination, then descending over the assignment of part sizes to
    those classes, then ascending over row subsets.  Edge counts explode
    combinatorially, so only drain this on small instances.
    """
    if not spec.has_edges:
        return
    parts = spec.sigma.parts
    s = spec.sigma.s
    rows_universe = range(1, spec.q + 1)
    for classes in itertools.combinations(range(1, spec.n + 1), s):
        for sizes in _distinct_permutations(parts):
            row_choices = [itertools.combinations(rows_universe, size) for size in sizes]
            for row_sets in itertools.product(*row_choices):
                yield Edge(tuple((c, frozenset(rs)) for c, rs in zip(classes, row_sets)))


def count_edges(spec: HypergraphSpec) -> int:
    """Number of edges, by the product of binomials (no enumeration)."""
    if not spec.has_edges:
        return 0
    total = 1
    remaining = spec.n
    for size, mult in sorted(Counter(spec.sigma.parts).items(), reverse=True):
        total *= math.comb(remaining, mult)
        remaining -= mult
    for a in spec.sigma.parts:
        total *= math.comb(spec.q, a)
    return total


def frobenius_decompose(target: int, u: int, v: int) -> tuple[int, int]:
    """Nonnegative (x, y) with x*u + y*v = target, maximising x.

    Requires coprime u, v >= 1.  Succeeds for every target at or above
    (u-1)(v-1); below that a representation may not exist, in which case
    NoRepresentation is raised.  The greedy descent on x makes the result
    reproducible bit-for-bit.
    """
    if u < 1 or v < 1:
        raise ValidationError(f"need u, v >= 1, got u={u}, v={v}")
    if math.gcd(u, v) != 1:
        raise ValidationError(f"u={u} and v={v} are not coprime")
    if target >= 0:
        x = target // u
        while x >= 0:
            rem = target - x * u
            if rem % v == 0:
                return x, rem // v
            x -= 1
    raise NoRepresentation(f"{target} is not a nonnegative combination of {u} and {v}")


@dataclass(frozen=True)
class Violation:
    kind: str  # "overlap" | "non-edge" | "unmatched"
    message: str


@dataclass(frozen=True)
class VerificationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_matching(spec: HypergraphSpec, m: Matching) -> VerificationReport:
    """Check a matching against the spec; violations are report content,
    never exceptions."""
    violations: list[Violation] = []
    seen: dict[Vertex, int] = {}
    for idx, edge in enumerate(m.edges):
        out = [v for v in edge.vertices() if not _in_range(spec, v)]
        if out:
            violations.append(
                Violation("non-edge", f"edge {idx} has out-of-range vertex {tuple(out[0])}")
            )
        else:
            classes = edge.classes()
            if len(set(classes)) != len(classes):
                violations.append(
                    Violation("non-edge", f"edge {idx} repeats class {classes}")
                )
            elif edge.sizes() != spec.sigma.parts:
                violations.append(
                    Violation(
                        "non-edge",
                        f"edge {idx} part sizes {edge.sizes()} do not realise {spec.sigma}",
                    )
                )
        for v in edge.vertices():
            if v in seen:
                violations.append(
                    Violation(
                        "overlap",
                        f"vertex {tuple(v)} appears in edges {seen[v]} and {idx}",
                    )
                )
            else:
                seen[v] = idx
    for v in sorted(m.unmatched.members):
        if not _in_range(spec, v):
            violations.append(
                Violation("unmatched", f"unmatched vertex {tuple(v)} is out of range")
            )
        elif v in seen:
            violations.append(
                Violation(
                    "unmatched",
                    f"vertex {tuple(v)} is both matched (edge {seen[v]}) and listed unmatched",
                )
            )
    missing = [
        v for v in all_vertices(spec) if v not in seen and v not in m.unmatched.members
    ]
    if missing:
        violations.append(
            Violation(
                "unmatched",
                f"{len(missing)} vertices unaccounted for, first {tuple(missing[0])}",
            )
        )
    return VerificationReport(tuple(violations))


# ---------------------------------------------------------------------------
# Canonical JSON encoding (shared by the CLI and test fixtures).
#
#   spec:     {"n": int, "q": int, "sigma": [int, ...]}
#   edge:     [{"class": int, "rows": [int, ...]}, ...]
#   matching: {"edges": [edge, ...], "unmatched": [{"class": int, "row": int}, ...]}
# ---------------------------------------------------------------------------


def spec_to_json(spec: HypergraphSpec) -> dict:
    return {"n": spec.n, "q": spec.q, "sigma": list(spec.sigma.parts)}


def spec_from_json(obj: dict) -> HypergraphSpec:
    try:
        return make_spec(obj["n"], obj["q"], obj["sigma"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed spec object: {obj!r}") from exc


def edge_to_json(edge: Edge) -> list:
    return [{"class": c, "rows": sorted(rows)} for c, rows in edge.parts]


def edge_from_json(obj: list) -> Edge:
    try:
        return make_edge((part["class"], part["rows"]) for part in obj)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed edge object: {obj!r}") from exc


def matching_to_json(m: Matching) -> dict:
    return {
        "edges": [edge_to_json(e) for e in m.edges],
        "unmatched": [
            {"class": v.class_index, "row": v.row_index} for v in sorted(m.unmatched.members)
        ],
    }


def matching_from_json(obj: dict) -> Matching:
    try:
        edges = tuple(edge_from_json(e) for e in obj["edges"])
        unmatched = VertexSet.of((v["class"], v["row"]) for v in obj["unmatched"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed matching object: {obj!r}") from exc
    return Matching(edges, unmatched)
