"""Interaction graphs and weighted edge-path enumeration.

An :class:`InteractionGraph` is the combinatorial substrate for every bound in
:mod:`lrbounds.bounds`: vertices carry degrees of freedom, an undirected edge
``{u, v}`` carries the operator norm of the coupling acting on that pair.
Graphs are immutable once built; the hop metric is computed by BFS and cached
because the bounds query distances in tight loops.

Path enumeration follows the two counting rules used by the path-sum bounds:

* every path is a sequence of edges in which consecutive edges share a vertex
  and differ, the first edge meets the source set and the last edge meets the
  target set (revisiting the source set mid-path is allowed);
* a *self-avoiding* path additionally requires edges at sequence distance
  greater than one to be vertex-disjoint.

Counts grow exponentially with length, so enumeration carries an explicit
node-expansion budget; exceeding it raises loudly instead of truncating.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .errors import ResourceLimitError

# Hard cap on requested path length, independent of the node budget.
MAX_PATH_LENGTH = 20
DEFAULT_NODE_BUDGET = 5_000_000


def _edge_key(u, v):
    if u == v:
        raise ValueError(f"self-loop on vertex {u!r} is not allowed")
    return (u, v) if repr(u) <= repr(v) else (v, u)


class InteractionGraph:
    """Finite undirected graph with positive coupling norms on edges."""

    def __init__(self, vertices, edges, name=None):
        """`edges` maps vertex pairs to coupling norms, or is an iterable of
        ``(u, v, norm)`` triples.  Norms must be strictly positive: an exactly
        zero coupling changes path counts but never weights, so delete the
        edge instead of setting it to zero."""
        self._vertices = tuple(dict.fromkeys(vertices))
        self._vset = frozenset(self._vertices)
        if len(self._vertices) != len(self._vset):
            raise ValueError("duplicate vertex identifiers")
        items = edges.items() if hasattr(edges, "items") else [(e[:2], e[2]) for e in edges]
        norm_by_edge = {}
        for (u, v), norm in items:
            if u not in self._vset or v not in self._vset:
                raise ValueError(f"edge ({u!r}, {v!r}) has an undeclared endpoint")
            key = _edge_key(u, v)
            if key in norm_by_edge:
                raise ValueError(f"duplicate edge {key!r}")
            norm = float(norm)
            if norm < 0.0:
                raise ValueError(f"edge {key!r} has negative norm {norm}")
            if norm == 0.0:
                raise ValueError(f"edge {key!r} has zero norm; delete the edge instead")
            norm_by_edge[key] = norm
        self._edges = norm_by_edge
        self._adj = {v: [] for v in self._vertices}
        for (u, v) in self._edges:
            self._adj[u].append(v)
            self._adj[v].append(u)
        self.name = name
        self._bfs_cache = {}

    # -- basic accessors ---------------------------------------------------

    @property
    def vertices(self):
        return self._vertices

    @property
    def edges(self):
        """Mapping from (u, v) key to coupling norm (do not mutate)."""
        return self._edges

    def neighbors(self, v):
        self._check_vertex(v)
        return tuple(self._adj[v])

    def degree(self, v):
        self._check_vertex(v)
        return len(self._adj[v])

    def max_degree(self):
        return max((len(a) for a in self._adj.values()), default=0)

    def edge_norm(self, u, v):
        return self._edges[_edge_key(u, v)]

    def max_edge_norm(self):
        return max(self._edges.values(), default=0.0)

    def _check_vertex(self, v):
        if v not in self._vset:
            raise ValueError(f"unknown vertex {v!r}")

    def _check_vertex_set(self, s, label):
        s = frozenset(s)
        if not s:
            raise ValueError(f"vertex set {label} is empty")
        for v in s:
            self._check_vertex(v)
        return s

    # -- metric ------------------------------------------------------------

    def _bfs(self, source):
        cached = self._bfs_cache.get(source)
        if cached is not None:
            return cached
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        self._bfs_cache[source] = dist
        return dist

    def distance(self, u, v):
        """Hop count of a shortest path, or None if u and v are disconnected."""
        self._check_vertex(u)
        self._check_vertex(v)
        return self._bfs(u).get(v)

    def set_distance(self, a, b):
        """min over u in a, v in b of distance(u, v); None if every pair is
        disconnected."""
        a = self._check_vertex_set(a, "A")
        b = self._check_vertex_set(b, "B")
        if a & b:
            return 0
        best = None
        for u in a:
            dist = self._bfs(u)
            for v in b:
                d = dist.get(v)
                if d is not None and (best is None or d < best):
                    best = d
        return best

    # -- serialization -----------------------------------------------------

    def to_json_dict(self):
        return {
            "vertices": list(self._vertices),
            "edges": [{"u": u, "v": v, "norm": n} for (u, v), n in self._edges.items()],
        }

    @classmethod
    def from_json_dict(cls, data, name=None):
        edges = [(e["u"], e["v"], e["norm"]) for e in data["edges"]]
        return cls(data["vertices"], edges, name=name)

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f, indent=1)

    @classmethod
    def load(cls, path, name=None):
        with open(path) as f:
            return cls.from_json_dict(json.load(f), name=name)

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<InteractionGraph{tag}: {len(self._vertices)} vertices, {len(self._edges)} edges>"


# -- generators --------------------------------------------------------------


def path_graph(n, norm=1.0):
    """Open chain on vertices 0..n-1."""
    return InteractionGraph(range(n), [(i, i + 1, norm) for i in range(n - 1)], name=f"path{n}")


def cycle_graph(n, norm=1.0):
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    edges = [(i, (i + 1) % n, norm) for i in range(n)]
    return InteractionGraph(range(n), edges, name=f"cycle{n}")


def grid_graph(nx, ny, norm=1.0):
    """nx-by-ny square grid; vertices are (ix, iy) tuples."""
    vertices = [(ix, iy) for ix in range(nx) for iy in range(ny)]
    edges = []
    for ix in range(nx):
        for iy in range(ny):
            if ix + 1 < nx:
                edges.append(((ix, iy), (ix + 1, iy), norm))
            if iy + 1 < ny:
                edges.append(((ix, iy), (ix, iy + 1), norm))
    return InteractionGraph(vertices, edges, name=f"grid{nx}x{ny}")


def complete_graph(n, norm=1.0):
    edges = [(i, j, norm) for i in range(n) for j in range(i + 1, n)]
    return InteractionGraph(range(n), edges, name=f"complete{n}")


# -- path enumeration --------------------------------------------------------


@dataclass(frozen=True)
class PathTally:
    """Number of paths of one length and their total coupling weight."""

    count: int
    weight: float


def enumerate_paths(graph, a, b, ell_max, self_avoiding=False, *,
                    max_length_guard=MAX_PATH_LENGTH, node_budget=DEFAULT_NODE_BUDGET):
    """Exact depth-first tally of edge paths from set `a` to set `b`.

    Returns ``{length: PathTally}`` for every length 0..ell_max.  The length-0
    entry counts the empty path, present exactly when the two sets intersect.
    Raises ResourceLimitError when `ell_max` exceeds `max_length_guard` or the
    depth-first expansion exceeds `node_budget` nodes.
    """
    a = graph._check_vertex_set(a, "A")
    b = graph._check_vertex_set(b, "B")
    ell_max = int(ell_max)
    if ell_max < 1:
        raise ValueError("ell_max must be >= 1")
    if ell_max > max_length_guard:
        raise ResourceLimitError(
            f"ell_max={ell_max} exceeds the path-length guard ({max_length_guard}); "
            "raise max_length_guard explicitly if this is intentional")

    # Vertex bitmasks keep the disjointness checks cheap.
    bit = {v: 1 << i for i, v in enumerate(graph.vertices)}
    edge_list = list(graph.edges)
    masks = [bit[u] | bit[v] for (u, v) in edge_list]
    weights = [graph.edges[e] for e in edge_list]
    n_edges = len(edge_list)
    edge_adj = [[j for j in range(n_edges) if j != i and masks[i] & masks[j]]
                for i in range(n_edges)]
    a_mask = 0
    for v in a:
        a_mask |= bit[v]
    b_mask = 0
    for v in b:
        b_mask |= bit[v]
    touches_b = [bool(m & b_mask) for m in masks]

    counts = [0] * (ell_max + 1)
    totals = [0.0] * (ell_max + 1)
    if a_mask & b_mask:
        counts[0] = 1
        totals[0] = 1.0

    budget = [node_budget]

    def extend(i, length, weight, blocked, sa_ok):
        # `blocked` is the union of vertices of edges 1..length-1; a child at
        # position length+1 stays self-avoiding iff it misses that union.
        if touches_b[i]:
            counts[length] += 1
            totals[length] += weight
        if length == ell_max:
            return
        child_blocked = blocked | masks[i]
        for j in edge_adj[i]:
            budget[0] -= 1
            if budget[0] < 0:
                raise ResourceLimitError(
                    f"path enumeration exceeded the node-expansion budget ({node_budget})")
            child_sa = sa_ok and not (masks[j] & blocked)
            if self_avoiding and not child_sa:
                continue
            extend(j, length + 1, weight * weights[j], child_blocked, child_sa)

    for i in range(n_edges):
        if masks[i] & a_mask:
            budget[0] -= 1
            if budget[0] < 0:
                raise ResourceLimitError(
                    f"path enumeration exceeded the node-expansion budget ({node_budget})")
            extend(i, 1, weights[i], 0, True)

    return {ell: PathTally(counts[ell], totals[ell]) for ell in range(ell_max + 1)}
