"""Small digraph routines on adjacency lists (vertex -> list of successors)."""

from __future__ import annotations

from collections import deque
from math import gcd
from typing import Iterable, Sequence

Adjacency = Sequence[Sequence[int]]


def reachable(succ: Adjacency, sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def strongly_connected_components(succ: Adjacency) -> list[list[int]]:
    """Tarjan's algorithm, iterative. Components come out in reverse topological order."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            children = succ[v]
            while i < len(children):
                w = children[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def is_nontrivial(succ: Adjacency, comp: Sequence[int]) -> bool:
    """A component carries a cycle: more than one vertex, or a self-loop."""
    return len(comp) > 1 or comp[0] in succ[comp[0]]


def period_and_classes(succ: Adjacency, comp: Sequence[int]) -> tuple[int, dict[int, int]]:
    """Period of a strongly connected component and the cyclic class of each vertex.

    Every edge inside the component goes from class ``i`` to class ``i + 1 mod period``.
    """
    members = set(comp)
    root = comp[0]
    level = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w in members and w not in level:
                level[w] = level[v] + 1
                queue.append(w)
    g = 0
    for v in comp:
        for w in succ[v]:
            if w in members:
                g = gcd(g, level[v] + 1 - level[w])
    period = abs(g) if g else 1
    return period, {v: level[v] % period for v in comp}


def undirected_components(k: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    parent = list(range(k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(k):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())
