"""Maximum bipartite matching by augmenting paths."""
from typing import List, Sequence


class BipartiteGraph:
    """Bipartite graph on left vertices 0..L-1 and right vertices 0..R-1."""

    def __init__(self, num_left: int, num_right: int,
                 adjacency: Sequence[Sequence[int]]):
        self.num_left = num_left
        self.num_right = num_right
        self.adjacency: List[List[int]] = [list(a) for a in adjacency]


def maximum_matching(graph: BipartiteGraph) -> List[int]:
    """Return match_left where match_left[u] is u's partner or -1."""
    match_left = [-1] * graph.num_left
    match_right = [-1] * graph.num_right

    def augment(u: int, seen: List[bool]) -> bool:
        for v in graph.adjacency[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_right[v] == -1 or augment(match_right[v], seen):
                match_left[u] = v
                match_right[v] = u
                return True
        return False

    for u in range(graph.num_left):
        augment(u, [False] * graph.num_right)
    return match_left


def matching_size(graph: BipartiteGraph) -> int:
    return sum(1 for v in maximum_matching(graph) if v != -1)


def has_left_perfect_matching(graph: BipartiteGraph) -> bool:
    """True iff every left vertex can be matched (Hall's condition holds)."""
    if graph.num_left > graph.num_right:
        return False
    return matching_size(graph) == graph.num_left
