"""Combinatorial, fat, and bordered fat graphs.

A graph is stored on a dense half-edge set ``{0, .., H-1}``.  Three maps
describe the structure:

* ``pairing`` -- the fixed-point-free involution pairing each half-edge
  with its other half (an edge is an orbit of the pairing);
* ``sigma`` -- the fat structure, a permutation whose orbits are the
  half-edges around each vertex in cyclic order;
* ``source`` -- the map sending a half-edge to its source vertex
  (redundant with the sigma orbits, kept for O(1) lookup).

The boundary cycles of the thickened surface are the orbits of
``omega = sigma . pairing`` (apply the pairing first).  A bordered fat
graph additionally carries an ordered list of univalent leaves, one per
boundary cycle; the leaf anchors a basepoint on that boundary.

Since a bordered fat graph has no nontrivial automorphisms, traversing
the boundary cycles in leaf order and numbering the edges by first
appearance yields a canonical word: two bordered fat graphs are
isomorphic if and only if their words are equal.  The word is the only
public identity of a graph; half-edge ids are internal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InvalidGraph, MalformedWord, NonIntegerGenus, NotCollapsible

__all__ = [
    "CombinatorialGraph",
    "FatGraph",
    "BorderedFatGraph",
    "BoundaryWord",
    "SurfaceType",
    "boundary_cycles",
    "surface_invariants",
    "dimension",
    "canonical_word",
    "canonical_form",
    "graph_from_word",
    "collapsible_edges",
    "collapsible_halves",
    "collapse_edge",
    "collapse_half",
]


@dataclass(frozen=True, order=True)
class SurfaceType:
    """Genus and boundary count of the thickened surface."""

    genus: int
    boundaries: int

    def __post_init__(self):
        if self.genus < 0 or self.boundaries < 1:
            raise InvalidGraph(f"no surface of type {self}")
        if (self.genus, self.boundaries) == (0, 1):
            raise InvalidGraph("the disk (g, n) = (0, 1) is excluded")

    def __str__(self):
        return f"S_{{{self.genus},{self.boundaries}}}"


class CombinatorialGraph:
    """A finite connected graph given by source map and half-edge pairing."""

    __slots__ = ("source", "pairing", "n_vertices", "n_halves")

    def __init__(self, source, pairing, n_vertices=None, check=True):
        self.source = tuple(source)
        self.pairing = tuple(pairing)
        self.n_halves = len(self.source)
        self.n_vertices = (
            max(self.source) + 1 if n_vertices is None else n_vertices
        )
        if check:
            self._validate()

    def _validate(self):
        H = self.n_halves
        if len(self.pairing) != H or H % 2 != 0 or H == 0:
            raise InvalidGraph("pairing size mismatch or empty graph")
        for h in range(H):
            p = self.pairing[h]
            if not 0 <= p < H or p == h or self.pairing[p] != h:
                raise InvalidGraph("pairing is not a fixed-point-free involution")
            if not 0 <= self.source[h] < self.n_vertices:
                raise InvalidGraph("half-edge with out-of-range source")
        seen = set(self.source)
        if seen != set(range(self.n_vertices)):
            raise InvalidGraph("every vertex must be the source of a half-edge")
        if not self.is_connected():
            raise InvalidGraph("graph is not connected")

    @property
    def n_edges(self):
        return self.n_halves // 2

    def valences(self):
        val = [0] * self.n_vertices
        for v in self.source:
            val[v] += 1
        return val

    def is_connected(self):
        # breadth-first search over half-edges through shared vertices and
        # through the pairing
        H = self.n_halves
        at_vertex = [[] for _ in range(self.n_vertices)]
        for h in range(H):
            at_vertex[self.source[h]].append(h)
        seen = [False] * H
        stack = [0]
        seen[0] = True
        while stack:
            h = stack.pop()
            for h2 in at_vertex[self.source[h]]:
                if not seen[h2]:
                    seen[h2] = True
                    stack.append(h2)
            p = self.pairing[h]
            if not seen[p]:
                seen[p] = True
                stack.append(p)
        return all(seen)


class FatGraph:
    """A combinatorial graph with a cyclic ordering at each vertex.

    ``sigma`` sends a half-edge to its successor in the cyclic order at
    its source vertex, so the sigma orbits are exactly the per-vertex
    half-edge sets.
    """

    __slots__ = ("graph", "sigma")

    def __init__(self, graph, sigma, check=True):
        self.graph = graph
        self.sigma = tuple(sigma)
        if check:
            self._validate()

    def _validate(self):
        g = self.graph
        H = g.n_halves
        if len(self.sigma) != H:
            raise InvalidGraph("sigma size mismatch")
        if sorted(self.sigma) != list(range(H)):
            raise InvalidGraph("sigma is not a permutation")
        for h in range(H):
            if g.source[self.sigma[h]] != g.source[h]:
                raise InvalidGraph("sigma must preserve the source vertex")
        # each vertex is a single sigma orbit
        orbits = 0
        seen = [False] * H
        for h in range(H):
            if not seen[h]:
                orbits += 1
                x = h
                while not seen[x]:
                    seen[x] = True
                    x = self.sigma[x]
        if orbits != g.n_vertices:
            raise InvalidGraph("sigma orbits do not match the vertex set")

    @property
    def pairing(self):
        return self.graph.pairing

    @property
    def source(self):
        return self.graph.source

    def omega(self, h):
        """The boundary permutation omega = sigma . pairing at ``h``."""
        return self.sigma[self.graph.pairing[h]]


def boundary_cycles(fat):
    """The orbits of omega = sigma . pairing, each in omega order.

    Each orbit is one boundary component of the thickened surface.  The
    starting half-edge of each returned cycle is the smallest unvisited
    one, so the output is deterministic but carries no extra structure.
    """
    H = fat.graph.n_halves
    seen = [False] * H
    cycles = []
    for h0 in range(H):
        if seen[h0]:
            continue
        cyc = []
        h = h0
        while not seen[h]:
            seen[h] = True
            cyc.append(h)
            h = fat.omega(h)
        cycles.append(tuple(cyc))
    return cycles


class BorderedFatGraph:
    """A fat graph with one ordered univalent leaf per boundary cycle.

    ``leaf_halves[j]`` is the unique half-edge based at the j-th leaf
    vertex (it is fixed by sigma).  All non-leaf vertices are interior
    and must have valence at least three.
    """

    __slots__ = ("fat", "leaf_halves")

    def __init__(self, fat, leaf_halves, check=True):
        self.fat = fat
        self.leaf_halves = tuple(leaf_halves)
        if check:
            self._validate()

    # -- convenience views -------------------------------------------------

    @property
    def sigma(self):
        return self.fat.sigma

    @property
    def pairing(self):
        return self.fat.graph.pairing

    @property
    def source(self):
        return self.fat.graph.source

    @property
    def n_halves(self):
        return self.fat.graph.n_halves

    @property
    def n_vertices(self):
        return self.fat.graph.n_vertices

    @property
    def n_edges(self):
        return self.fat.graph.n_edges

    def leaf_vertices(self):
        return tuple(self.source[h] for h in self.leaf_halves)

    def is_leaf_vertex(self, v):
        return v in set(self.leaf_vertices())

    def _validate(self):
        fat = self.fat
        sigma = fat.sigma
        val = fat.graph.valences()
        leaves = self.leaf_vertices()
        if len(set(leaves)) != len(leaves):
            raise InvalidGraph("repeated leaf vertex")
        for h, v in zip(self.leaf_halves, leaves):
            if sigma[h] != h or val[v] != 1:
                raise InvalidGraph("declared leaf is not univalent")
        leafset = set(leaves)
        for v, k in enumerate(val):
            if v not in leafset and k < 3:
                raise InvalidGraph(f"interior vertex {v} has valence {k} < 3")
        cycles = boundary_cycles(fat)
        if len(cycles) != len(self.leaf_halves):
            raise InvalidGraph(
                "number of boundary cycles differs from number of leaves"
            )
        cycle_of = {}
        for idx, cyc in enumerate(cycles):
            for h in cyc:
                cycle_of[h] = idx
        hit = [cycle_of[h] for h in self.leaf_halves]
        if sorted(hit) != list(range(len(cycles))):
            raise InvalidGraph("boundary cycles and leaves do not correspond")
        surface_invariants(self)  # raises on bad genus


def surface_invariants(bg):
    """Surface type of ``bg`` from the Euler characteristic.

    With V vertices, E edges and n boundary cycles the thickened
    surface satisfies V - E = 2 - 2g - n.
    """
    n = len(bg.leaf_halves)
    chi = bg.n_vertices - bg.n_edges
    two_g = 2 - n - chi
    if two_g % 2 != 0:
        raise NonIntegerGenus(f"2 - n - V + E = {two_g} is odd")
    return SurfaceType(two_g // 2, n)


def dimension(bg):
    """Sum of (valence - 3) over the interior vertices.

    Zero exactly for essentially trivalent graphs; this is the cell
    dimension of the graph's class in the combinatorial filtration.
    """
    leafset = set(bg.leaf_vertices())
    val = bg.fat.graph.valences()
    return sum(k - 3 for v, k in enumerate(val) if v not in leafset)


# ---------------------------------------------------------------------------
# boundary words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryWord:
    """Canonical serialized form of a bordered fat graph.

    ``cycles[j]`` lists the boundary cycle of leaf j as signed edge
    labels: the first occurrence of edge k (in traversal order over
    cycle 0, then cycle 1, ...) is written ``+k``, the second ``-k``.
    Each cycle starts with its leaf-edge pair ``+k, -k``.
    """

    genus: int
    boundaries: int
    cycles: tuple

    @property
    def surface(self):
        return SurfaceType(self.genus, self.boundaries)

    @property
    def n_edges(self):
        return sum(len(c) for c in self.cycles) // 2

    def sort_key(self):
        return (len(self.cycles), sum(len(c) for c in self.cycles), self.cycles)

    def validate(self):
        """Check the syntactic invariants; raise MalformedWord on failure."""
        if self.boundaries != len(self.cycles):
            raise MalformedWord("cycle count differs from boundary count")
        first = {}
        count = {}
        next_label = 1
        for cyc in self.cycles:
            if len(cyc) < 2:
                raise MalformedWord("boundary cycle shorter than its leaf pair")
            if cyc[0] != next_label or cyc[1] != -next_label:
                raise MalformedWord(
                    f"cycle must start with its fresh leaf pair, got {cyc[:2]}"
                )
            for entry in cyc:
                if entry == 0:
                    raise MalformedWord("zero label")
                k = abs(entry)
                count[k] = count.get(k, 0) + 1
                if entry > 0:
                    if k != next_label:
                        raise MalformedWord(
                            f"label {k} out of first-appearance order"
                        )
                    first[k] = True
                    next_label += 1
                else:
                    if k not in first:
                        raise MalformedWord(f"label {k} closed before opened")
        if any(c != 2 for c in count.values()):
            bad = [k for k, c in count.items() if c != 2]
            raise MalformedWord(f"labels {bad} do not appear exactly twice")

    # -- JSON interchange ---------------------------------------------------

    def to_json_obj(self):
        return {
            "g": self.genus,
            "n": self.boundaries,
            "cycles": [list(c) for c in self.cycles],
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj):
        try:
            word = cls(
                genus=int(obj["g"]),
                boundaries=int(obj["n"]),
                cycles=tuple(tuple(int(x) for x in c) for c in obj["cycles"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedWord(f"bad word object: {exc}") from exc
        word.validate()
        return word

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedWord(f"bad word JSON: {exc}") from exc
        return cls.from_json_obj(obj)

    def __str__(self):
        body = ")(".join(" ".join(str(e) for e in c) for c in self.cycles)
        return f"[{self.genus},{self.boundaries}]({body})"


def canonical_form(bg):
    """Canonical word of ``bg`` together with the traversal order.

    Returns ``(word, order)`` where ``order`` lists the half-edge ids of
    ``bg`` in canonical position order (cycle 0 from its leaf-edge, then
    cycle 1, ...).  ``order.index`` is the relabeling onto the decoded
    form of ``word``; soundness rests on bordered fat graphs having only
    the trivial automorphism.
    """
    sigma = bg.sigma
    pairing = bg.pairing
    H = bg.n_halves
    order = []
    cycles = []
    label_of = [0] * H
    next_label = 1
    seen = 0
    for leaf in bg.leaf_halves:
        start = pairing[leaf]
        cyc = []
        h = start
        while True:
            order.append(h)
            seen += 1
            partner = pairing[h]
            if label_of[partner]:
                entry = -label_of[partner]
            else:
                entry = next_label
                label_of[h] = next_label
                next_label += 1
            cyc.append(entry)
            h = sigma[pairing[h]]
            if h == start:
                break
        cycles.append(tuple(cyc))
    if seen != H:
        raise InvalidGraph("boundary cycles do not cover all half-edges")
    surface = surface_invariants(bg)
    word = BoundaryWord(surface.genus, surface.boundaries, tuple(cycles))
    return word, order


def canonical_word(bg):
    """Canonical word of ``bg``; equality of words is isomorphism."""
    return canonical_form(bg)[0]


def graph_from_word(word):
    """Decode a boundary word into its bordered fat graph.

    The decoded graph is in canonical position: half-edge ids are the
    traversal positions of the word and vertex ids are ordered by
    smallest incident half-edge.  Raises MalformedWord for syntactic
    defects and InvalidGraph when the word does not describe a valid
    graph of its declared surface type.
    """
    word.validate()
    flat = [e for cyc in word.cycles for e in cyc]
    H = len(flat)
    # pairing from the signed labels
    open_pos = {}
    pairing = [0] * H
    for pos, entry in enumerate(flat):
        k = abs(entry)
        if entry > 0:
            open_pos[k] = pos
        else:
            q = open_pos[k]
            pairing[pos] = q
            pairing[q] = pos
    # omega: successor inside each cycle
    omega = [0] * H
    base = 0
    leaf_halves = []
    for cyc in word.cycles:
        ln = len(cyc)
        for j in range(ln):
            omega[base + j] = base + (j + 1) % ln
        leaf_halves.append(base + 1)
        base += ln
    sigma = [omega[pairing[h]] for h in range(H)]
    # vertices are the sigma orbits, numbered by smallest member
    source = [-1] * H
    n_vertices = 0
    for h in range(H):
        if source[h] == -1:
            x = h
            while source[x] == -1:
                source[x] = n_vertices
                x = sigma[x]
            if x != h:
                raise InvalidGraph("sigma orbit does not close at its minimum")
            n_vertices += 1
    try:
        graph = CombinatorialGraph(source, pairing, n_vertices)
        fat = FatGraph(graph, sigma)
        bg = BorderedFatGraph(fat, leaf_halves)
    except InvalidGraph as exc:
        raise InvalidGraph(f"{word}: {exc}") from exc
    surface = surface_invariants(bg)
    if surface != word.surface:
        raise InvalidGraph(
            f"word declares {word.surface} but decodes to {surface}"
        )
    return bg


# ---------------------------------------------------------------------------
# edge collapse
# ---------------------------------------------------------------------------


def collapsible_halves(bg):
    """Smaller half-edge id of every collapsible edge, in id order.

    Collapsible means neither a self-loop (both halves at one vertex)
    nor a leaf-edge; these are exactly the edges whose collapse is an
    elementary morphism of bordered fat graphs.
    """
    pairing = bg.pairing
    source = bg.source
    leafset = set(bg.leaf_halves)
    out = []
    for h in range(bg.n_halves):
        p = pairing[h]
        if h > p:
            continue
        if h in leafset or p in leafset:
            continue
        if source[h] == source[p]:
            continue
        out.append(h)
    return out


def collapsible_edges(bg, word=None):
    """Canonical edge labels of the collapsible edges of ``bg``."""
    if word is None:
        word, order = canonical_form(bg)
    else:
        _, order = canonical_form(bg)
    flat = [e for cyc in word.cycles for e in cyc]
    pos = {h: i for i, h in enumerate(order)}
    labels = sorted(abs(flat[min(pos[h], pos[bg.pairing[h]])])
                    for h in collapsible_halves(bg))
    return labels


def _half_of_label(bg, label):
    """Half-edge (first-occurrence side) carrying canonical label ``label``."""
    word, order = canonical_form(bg)
    flat = [e for cyc in word.cycles for e in cyc]
    for pos, entry in enumerate(flat):
        if entry == label:
            return order[pos]
    raise NotCollapsible(f"no edge labeled {label}")


def collapse_half(bg, h):
    """Collapse the edge containing half-edge ``h``; return maps too.

    Returns ``(new_graph, half_map, vertex_map)`` where ``half_map[x]``
    is the new id of old half-edge ``x`` (-1 for the two removed
    halves) and ``vertex_map[v]`` the new id of old vertex ``v`` (the
    two endpoints map to the same merged vertex).  Boundary cycles lose
    the two occurrences of the edge and are otherwise preserved, so the
    leaf order carries over unchanged.
    """
    pairing = bg.pairing
    sigma = bg.sigma
    source = bg.source
    H = bg.n_halves
    A = h
    B = pairing[A]
    u, v = source[A], source[B]
    leafset = set(bg.leaf_halves)
    if A in leafset or B in leafset:
        raise NotCollapsible("cannot collapse a leaf-edge")
    if u == v:
        raise NotCollapsible("cannot collapse a self-loop")

    half_map = [0] * H
    new = 0
    for x in range(H):
        if x == A or x == B:
            half_map[x] = -1
        else:
            half_map[x] = new
            new += 1
    vertex_map = [0] * bg.n_vertices
    shift = 0
    for w in range(bg.n_vertices):
        if w == max(u, v):
            vertex_map[w] = -2  # fixed below: merged into min(u, v)
            shift += 1
        else:
            vertex_map[w] = w - shift
    vertex_map[max(u, v)] = vertex_map[min(u, v)]

    # splice the two cyclic orders: pred(A) -> sigma(B), pred(B) -> sigma(A)
    pred_a = pred_b = -1
    for x in range(H):
        if sigma[x] == A:
            pred_a = x
        elif sigma[x] == B:
            pred_b = x
    new_sigma = [0] * (H - 2)
    new_pairing = [0] * (H - 2)
    new_source = [0] * (H - 2)
    for x in range(H):
        nx = half_map[x]
        if nx < 0:
            continue
        if x == pred_a:
            t = sigma[B]
        elif x == pred_b:
            t = sigma[A]
        else:
            t = sigma[x]
        new_sigma[nx] = half_map[t]
        new_pairing[nx] = half_map[pairing[x]]
        new_source[nx] = vertex_map[source[x]]
    graph = CombinatorialGraph(new_source, new_pairing, bg.n_vertices - 1,
                               check=False)
    fat = FatGraph(graph, new_sigma, check=False)
    out = BorderedFatGraph(fat, [half_map[x] for x in bg.leaf_halves],
                           check=False)
    return out, half_map, vertex_map


def collapse_edge(bg, label):
    """Collapse the edge with canonical label ``label``.

    The result is a valid bordered fat graph of the same surface type
    whose dimension is one higher; it is not in canonical position
    (re-encode with ``canonical_word`` to compare classes).
    """
    h = _half_of_label(bg, label)
    p = bg.pairing[h]
    leafset = set(bg.leaf_halves)
    if h in leafset or p in leafset:
        raise NotCollapsible(f"edge {label} is a leaf-edge")
    if bg.source[h] == bg.source[p]:
        raise NotCollapsible(f"edge {label} is a self-loop")
    return collapse_half(bg, h)[0]
