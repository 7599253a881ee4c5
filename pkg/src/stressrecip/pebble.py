"""(2,3)-pebble game: rank in the generic planar rigidity matroid."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PebbleResult:
    rank: int
    independent: bool
    accepted: tuple   # indices of edges accepted into the spanning independent set


def _collect_pebble(target: int, skip: set, pebbles, out_adj) -> bool:
    """Move one pebble to `target` by reversing a directed path, if possible."""
    seen = {target} | skip
    parent = {}
    stack = [target]
    while stack:
        v = stack.pop()
        for w in out_adj[v]:
            if w in seen:
                continue
            seen.add(w)
            parent[w] = v
            if pebbles[w] > 0:
                pebbles[w] -= 1
                pebbles[target] += 1
                # reverse the path target -> ... -> w
                node = w
                while node != target:
                    prev = parent[node]
                    out_adj[prev].remove(node)
                    out_adj[node].append(prev)
                    node = prev
                return True
            stack.append(w)
    return False


def pebble_game_rank(edges, n: int) -> PebbleResult:
    """Rank of the edge set under (2,3)-sparsity counts.

    Each vertex holds 2 pebbles; inserting an edge needs 4 pebbles on its two
    endpoints. Accepted edges form a maximal independent subset, so the rank
    equals the generic rigidity-matrix rank of the graph.
    """
    pebbles = [2] * n
    out_adj = [[] for _ in range(n)]
    accepted = []
    for idx, (u, v) in enumerate(edges):
        u, v = int(u), int(v)
        if u == v:
            continue
        while pebbles[u] + pebbles[v] < 4:
            if not _collect_pebble(u, {v}, pebbles, out_adj):
                if not _collect_pebble(v, {u}, pebbles, out_adj):
                    break
        if pebbles[u] + pebbles[v] >= 4:
            pebbles[u] -= 1
            out_adj[u].append(v)
            accepted.append(idx)
    rank = len(accepted)
    return PebbleResult(rank, rank == len(edges), tuple(accepted))


def _spans_all(edges, n: int) -> bool:
    touched = [False] * n
    for u, v in edges:
        touched[u] = touched[v] = True
    return all(touched)


def is_laman(edges, n: int) -> bool:
    """Generically isostatic: 2n-3 edges forming an independent set."""
    edges = list(edges)
    if len(edges) != 2 * n - 3 or not _spans_all(edges, n):
        return False
    return pebble_game_rank(edges, n).independent


def is_laman_circuit(edges, n: int) -> bool:
    """Minimal generically dependent set: 2n-2 edges, every proper subset independent.

    Tested as: the full set is dependent with rank 2n-3, and deleting any
    single edge leaves an independent spanning set of the same rank.
    """
    edges = list(edges)
    if len(edges) != 2 * n - 2 or not _spans_all(edges, n):
        return False
    full = pebble_game_rank(edges, n)
    if full.rank != 2 * n - 3:
        return False
    for k in range(len(edges)):
        rest = edges[:k] + edges[k + 1:]
        if not _spans_all(rest, n):
            return False
        if not pebble_game_rank(rest, n).independent:
            return False
    return True
