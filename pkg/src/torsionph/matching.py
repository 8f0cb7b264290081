"""Hopcroft-Karp maximum bipartite matching."""

from collections import deque

_INF = float("inf")


def hopcroft_karp(adj, n_right):
    """Maximum matching of a bipartite graph.

    ``adj[i]`` lists the right vertices adjacent to left vertex ``i``.
    Returns ``(size, match_left)`` where ``match_left[i]`` is the right
    partner of ``i`` or ``-1``.
    """
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0] * n_left

    def bfs():
        q = deque()
        for i in range(n_left):
            if match_l[i] < 0:
                dist[i] = 0
                q.append(i)
            else:
                dist[i] = _INF
        found = False
        while q:
            i = q.popleft()
            for j in adj[i]:
                k = match_r[j]
                if k < 0:
                    found = True
                elif dist[k] == _INF:
                    dist[k] = dist[i] + 1
                    q.append(k)
        return found

    def dfs(i):
        for j in adj[i]:
            k = match_r[j]
            if k < 0 or (dist[k] == dist[i] + 1 and dfs(k)):
                match_l[i] = j
                match_r[j] = i
                return True
        dist[i] = _INF
        return False

    size = 0
    while bfs():
        for i in range(n_left):
            if match_l[i] < 0 and dfs(i):
                size += 1
    return size, match_l
