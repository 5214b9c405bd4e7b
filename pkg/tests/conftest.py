import math

from sigmahg import core


def partitions(r, largest=None):
    """All partitions of r as weakly decreasing tuples."""
    largest = largest or r
    if r == 0:
        yield ()
        return
    for first in range(min(r, largest), 0, -1):
        for rest in partitions(r - first, first):
            yield (first,) + rest


def recheck_matching(spec, m):
    """From-scratch validity check, independent of verify_matching."""
    seen = set()
    for edge in m.edges:
        try:
            if not core.is_edge(spec, edge):
                return False
        except core.ValidationError:
            return False
        for v in edge.vertices():
            if v in seen:
                return False
            seen.add(v)
    universe = set(core.all_vertices(spec))
    if not m.unmatched.members <= universe:
        return False
    if seen & m.unmatched.members:
        return False
    return seen | m.unmatched.members == universe


def small_specs(max_r=4, max_n=4, max_q=4, with_edges_only=False):
    for r in range(1, max_r + 1):
        for parts in partitions(r):
            for n in range(1, max_n + 1):
                for q in range(1, max_q + 1):
                    spec = core.make_spec(n, q, parts)
                    if with_edges_only and not spec.has_edges:
                        continue
                    yield spec


def gcd_of(parts):
    return math.gcd(*parts)
