"""Union-find and label-free summaries of small graphs."""

from __future__ import annotations

from dataclasses import dataclass


class UnionFind:
    """Disjoint-set forest with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False if already together."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def groups(self) -> list[tuple[int, ...]]:
        """Blocks as sorted tuples, ordered by their smallest element."""
        out: dict[int, list[int]] = {}
        for a in range(len(self.parent)):
            out.setdefault(self.find(a), []).append(a)
        return sorted(tuple(g) for g in out.values())


@dataclass(frozen=True)
class GraphObservation:
    """Components of a (multi-)graph with per-component surplus counts.

    ``components`` are sorted tuples of vertex labels, ordered by smallest
    label; ``surplus[i]`` is ``edges - size + 1`` for ``components[i]``.
    """

    components: tuple[tuple[int, ...], ...]
    surplus: tuple[int, ...]

    def key(self) -> tuple[tuple[int, int], ...]:
        return outcome_key([len(c) for c in self.components], self.surplus)

    def partition(self) -> tuple[tuple[int, ...], ...]:
        return self.components


def outcome_key(sizes, surplus) -> tuple[tuple[int, int], ...]:
    """Label-free outcome: ``(size, surplus)`` pairs in decreasing order."""
    return tuple(sorted(zip((int(s) for s in sizes), (int(s) for s in surplus)), reverse=True))


def observe_graph(n: int, edges) -> GraphObservation:
    """Components and surplus counts of the graph with the given edge list.

    Loops and repeated pairs count towards the surplus like any other edge.
    """
    edges = list(edges)
    uf = UnionFind(n)
    for a, b in edges:
        uf.union(a, b)
    comps = uf.groups()
    index = {}
    for i, c in enumerate(comps):
        for v in c:
            index[v] = i
    counts = [0] * len(comps)
    for a, _ in edges:
        counts[index[a]] += 1
    surplus = tuple(counts[i] - len(c) + 1 for i, c in enumerate(comps))
    return GraphObservation(components=tuple(comps), surplus=surplus)
