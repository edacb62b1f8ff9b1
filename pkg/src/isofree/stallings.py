"""Folded core graphs for finitely generated subgroups of free groups.

A subgroup given by a tuple of words becomes a wedge of loops at a base
vertex, which is then folded (union-find on vertices, re-inserting edges
of merged vertices until no vertex has two equally-labelled edges on the
same side) and core-trimmed.  The result is relabelled by a breadth-first
traversal from the base with edges visited in (generator, direction)
order, so equal subgroup graphs compare equal structurally.

Rank, membership, a free basis, and rewriting of members over that basis
all read straight off the folded graph and its spanning tree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .words import Word, EPSILON, max_generator

__all__ = ["FoldedGraph", "build_graph"]

ABSENT = None


@dataclass(frozen=True)
class FoldedGraph:
    """Folded, core, based graph; vertex 0 is the base.

    `fwd[v]` maps a generator (1-based) to the target of the edge leaving
    v with that label; `bwd[v]` maps it to the source of the edge entering
    v.  A spanning tree is recorded as `tree_parent`/`tree_letter` (the
    signed letter read from the parent into the vertex).
    """

    ambient_rank: int
    fwd: tuple[dict, ...]
    bwd: tuple[dict, ...]
    tree_parent: tuple[int, ...]
    tree_letter: tuple[int, ...]

    @property
    def base(self) -> int:
        return 0

    @property
    def num_vertices(self) -> int:
        return len(self.fwd)

    @property
    def num_edges(self) -> int:
        return sum(len(f) for f in self.fwd)

    def rank(self) -> int:
        """First Betti number |E| - |V| + 1 of the connected core graph."""
        return self.num_edges - self.num_vertices + 1

    def step(self, v: int, let: int) -> Optional[int]:
        """Follow signed letter `let` from vertex v, or None if absent."""
        if let > 0:
            return self.fwd[v].get(let)
        return self.bwd[v].get(-let)

    def trace(self, w: Sequence[int]) -> Optional[int]:
        """Vertex reached reading w from the base, or None if the path dies."""
        v = 0
        for let in w:
            v = self.step(v, let)
            if v is None:
                return None
        return v

    def contains(self, w: Sequence[int]) -> bool:
        """Membership in the subgroup: w reads as a loop at the base."""
        if max_generator(w) > self.ambient_rank:
            raise ValueError("word uses generators beyond the ambient rank")
        return self.trace(Word(w)) == 0

    def path_from_base(self, v: int) -> Word:
        """Word read along tree edges from the base to v."""
        letters = []
        while v != 0:
            letters.append(self.tree_letter[v])
            v = self.tree_parent[v]
        return Word._reduced(tuple(reversed(letters)))

    def _nontree_edges(self) -> list[tuple[int, int, int]]:
        """Non-tree edges (source, generator, target) in canonical order."""
        tree = set()
        for v in range(1, self.num_vertices):
            let = self.tree_letter[v]
            u = self.tree_parent[v]
            tree.add((u, let, v) if let > 0 else (v, -let, u))
        out = []
        for u in range(self.num_vertices):
            for g in sorted(self.fwd[u]):
                v = self.fwd[u][g]
                if (u, g, v) not in tree:
                    out.append((u, g, v))
        return out

    def basis(self) -> list[Word]:
        """A free basis of the subgroup, one word per non-tree edge."""
        out = []
        for u, g, v in self._nontree_edges():
            out.append(self.path_from_base(u) * Word._reduced((g,)) *
                       self.path_from_base(v).inverse())
        return out

    def express(self, w: Sequence[int]) -> Optional[Word]:
        """Rewrite a member over the basis (letters index basis elements).

        Returns None (Absent) when w is not in the subgroup.  Reading w,
        every crossing of non-tree edge k contributes letter +-(k+1); tree
        edges contribute nothing, because basis words carry the tree paths.
        """
        w = Word(w)
        if max_generator(w) > self.ambient_rank:
            raise ValueError("word uses generators beyond the ambient rank")
        index = {edge: k for k, edge in enumerate(self._nontree_edges())}
        letters = []
        v = 0
        for let in w:
            nxt = self.step(v, let)
            if nxt is None:
                return None
            edge = (v, let, nxt) if let > 0 else (nxt, -let, v)
            k = index.get(edge)
            if k is not None:
                letters.append((k + 1) if let > 0 else -(k + 1))
            v = nxt
        if v != 0:
            return None
        return Word(letters)

    def edge_list(self) -> list[str]:
        """Debug export: one `source  generator  target` line per edge."""
        return [f"{u} {g} {self.fwd[u][g]}"
                for u in range(self.num_vertices) for g in sorted(self.fwd[u])]


def build_graph(tuple_words: Sequence[Sequence[int]], ambient_rank: int) -> FoldedGraph:
    """Folded core graph of the subgroup generated by the given words."""
    words = [Word(w) for w in tuple_words]
    for w in words:
        if max_generator(w) > ambient_rank:
            raise ValueError("tuple word uses generators beyond the ambient rank")

    # wedge of loops at vertex 0
    nv = 1
    raw_edges = []  # (source, generator, target)
    for w in words:
        prev = 0
        for i, let in enumerate(w):
            nxt = 0 if i == len(w) - 1 else nv
            if nxt != 0:
                nv += 1
            if let > 0:
                raw_edges.append((prev, let, nxt))
            else:
                raw_edges.append((nxt, -let, prev))
            prev = nxt

    parent = list(range(nv))
    size = [1] * nv
    trans: list[dict] = [dict() for _ in range(nv)]  # signed letter -> vertex

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    pending = deque()
    for u, g, v in raw_edges:
        pending.append((u, g, v))
        pending.append((v, -g, u))

    while pending:
        u, s, v = pending.popleft()
        u = find(u)
        v = find(v)
        cur = trans[u].get(s)
        if cur is None:
            trans[u][s] = v
            continue
        cur = find(cur)
        trans[u][s] = cur
        if cur == v:
            continue
        # fold: identify the two endpoints, re-inserting the loser's edges
        if size[cur] < size[v]:
            cur, v = v, cur
        parent[v] = cur
        size[cur] += size[v]
        for s2, t2 in trans[v].items():
            pending.append((cur, s2, t2))
        trans[v].clear()

    base = find(0)
    # resolve all targets and drop stale slots on merged-away vertices
    adj: dict[int, dict] = {}
    for u in range(nv):
        if find(u) != u:
            continue
        adj[u] = {s: find(t) for s, t in trans[u].items()}

    # core-trim: drop non-base vertices of degree <= 1
    degree = {u: len(slots) for u, slots in adj.items()}
    queue = deque(u for u in adj if u != base and degree[u] <= 1)
    removed = set()
    while queue:
        u = queue.popleft()
        if u in removed or u == base or degree[u] > 1:
            continue
        removed.add(u)
        for s, t in list(adj[u].items()):
            if t in removed:
                continue
            del adj[t][-s]
            degree[t] -= 1
            if t != base and degree[t] <= 1:
                queue.append(t)
        adj[u].clear()
    for u in removed:
        del adj[u]

    # canonical breadth-first relabelling from the base
    order = {base: 0}
    tree_parent = [0]
    tree_letter = [0]
    bfs = deque([base])
    signed = [s for g in range(1, ambient_rank + 1) for s in (g, -g)]
    while bfs:
        u = bfs.popleft()
        for s in signed:
            t = adj[u].get(s)
            if t is not None and t not in order:
                order[t] = len(order)
                tree_parent.append(order[u])
                tree_letter.append(s)
                bfs.append(t)

    n = len(order)
    fwd: list[dict] = [dict() for _ in range(n)]
    bwd: list[dict] = [dict() for _ in range(n)]
    for u, slots in adj.items():
        for s, t in slots.items():
            if s > 0:
                fwd[order[u]][s] = order[t]
            else:
                bwd[order[u]][-s] = order[t]

    return FoldedGraph(
        ambient_rank=ambient_rank,
        fwd=tuple(fwd),
        bwd=tuple(bwd),
        tree_parent=tuple(tree_parent),
        tree_letter=tuple(tree_letter),
    )
