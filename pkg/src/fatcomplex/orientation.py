"""Orientations of bordered fat graphs and the sign of edge collapse.

An orientation is a unit vector in det(RV) tensor det(RH): concretely an
ordering of the vertices together with an ordering of the half-edges, up
to even permutation of each.  Two representatives denote the same
orientation iff the product of the two relating permutation parities
is +1.

Every generator of the graph complex is normalized to the canonical
orientation of its canonical word, so chains carry plain integer
coefficients and all sign bookkeeping happens here.  The collapse map
Phi_e acts on orientations by rewriting a representative as

    (s(A) ^ s(A') ^ u_1 ^ ...) tensor (A ^ A' ^ h_1 ^ ...)

and sending it to (u~ ^ u_1 ^ ...) tensor (h_1 ^ ...), where u~ is the
merged vertex.  Phi anticommutes: Phi_e Phi_f = -Phi_f Phi_e.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotCollapsible
from .graphs import (
    BorderedFatGraph,
    canonical_form,
    collapse_half,
    collapsible_halves,
    dimension,
    graph_from_word,
    _half_of_label,
)

__all__ = [
    "OrientationRep",
    "OrientedGraph",
    "permutation_parity",
    "relative_parity",
    "push_to_back",
    "pull_to_front",
    "canonical_orientation",
    "oriented_from_word",
    "oriented_collapse",
    "normalize",
    "collapse_sign",
]


@dataclass(frozen=True)
class OrientationRep:
    """One representative of an orientation: explicit orderings."""

    vertex_order: tuple
    half_edge_order: tuple


@dataclass(frozen=True)
class OrientedGraph:
    """A concrete graph together with an orientation rep and a sign."""

    graph: BorderedFatGraph
    vertices: tuple
    halves: tuple
    sign: int


def permutation_parity(perm):
    """Parity (+1/-1) of a permutation of 0..n-1, by cycle counting."""
    n = len(perm)
    seen = [False] * n
    parity = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


def relative_parity(order_a, order_b):
    """Parity of the permutation taking ordering a to ordering b."""
    index_b = {item: i for i, item in enumerate(order_b)}
    return permutation_parity([index_b[item] for item in order_a])


def push_to_back(order, items):
    """Reorder so that ``items`` sit at the end, in the given order.

    Returns ``(new_order, sign)`` with the relative parity of the move;
    the remaining entries keep their relative order.
    """
    tail = set(items)
    new_order = [x for x in order if x not in tail] + list(items)
    return new_order, relative_parity(order, new_order)


def pull_to_front(order, items):
    """Reorder so that ``items`` sit at the front, in the given order."""
    head = set(items)
    new_order = list(items) + [x for x in order if x not in head]
    return new_order, relative_parity(order, new_order)


def canonical_orientation(bg):
    """The fixed orientation representative of a canonical-position graph.

    Vertices in id order (decoded graphs already number vertices by
    smallest incident half-edge).  For essentially trivalent graphs the
    half-edges come in per-vertex blocks, each block in cyclic order
    from its smallest member: with every valence odd this is the
    natural orientation induced by the fat structure, independent of
    the choices.  Otherwise half-edges are simply in label order.
    """
    if dimension(bg) == 0:
        at_vertex = [None] * bg.n_vertices
        for h in range(bg.n_halves - 1, -1, -1):
            at_vertex[bg.source[h]] = h  # smallest half at each vertex
        halves = []
        for v in range(bg.n_vertices):
            h = at_vertex[v]
            while True:
                halves.append(h)
                h = bg.sigma[h]
                if h == at_vertex[v]:
                    break
        half_order = tuple(halves)
    else:
        half_order = tuple(range(bg.n_halves))
    return OrientationRep(tuple(range(bg.n_vertices)), half_order)


def oriented_from_word(word):
    """Decode ``word`` and dress it in its canonical orientation, sign +1."""
    bg = graph_from_word(word)
    rep = canonical_orientation(bg)
    return OrientedGraph(bg, rep.vertex_order, rep.half_edge_order, 1)


def normalize(og):
    """Express an oriented graph as a signed canonical generator.

    Returns ``(word, sign)``: the canonical word of the underlying
    graph and the parity of ``og`` relative to the canonical
    orientation of that word.
    """
    bg = og.graph
    word, order = canonical_form(bg)
    H = bg.n_halves
    pos = [0] * H
    for p, h in enumerate(order):
        pos[h] = p
    # canonical vertex ids: order vertices by smallest relabeled half
    min_pos = [H] * bg.n_vertices
    for h in range(H):
        v = bg.source[h]
        if pos[h] < min_pos[v]:
            min_pos[v] = pos[h]
    vrank = sorted(range(bg.n_vertices), key=lambda v: min_pos[v])
    vmap = [0] * bg.n_vertices
    for r, v in enumerate(vrank):
        vmap[v] = r
    sign = og.sign
    if dimension(bg) == 0:
        # compare against per-vertex sigma blocks in the relabeled graph
        csigma = [0] * H
        for h in range(H):
            csigma[pos[h]] = pos[bg.sigma[h]]
        csource = [0] * H
        for h in range(H):
            csource[pos[h]] = vmap[bg.source[h]]
        at_vertex = [None] * bg.n_vertices
        for h in range(H - 1, -1, -1):
            at_vertex[csource[h]] = h
        target = []
        for v in range(bg.n_vertices):
            h = at_vertex[v]
            while True:
                target.append(h)
                h = csigma[h]
                if h == at_vertex[v]:
                    break
        sign *= relative_parity([pos[h] for h in og.halves], target)
    else:
        sign *= permutation_parity([pos[h] for h in og.halves])
    sign *= permutation_parity([vmap[v] for v in og.vertices])
    return word, sign


def oriented_collapse(og, h):
    """Collapse the edge at half ``h``, transporting the orientation.

    Implements Phi_e: pull (s(A), s(A')) to the front of the vertex
    order and (A, A') to the front of the half-edge order, then drop
    them, putting the merged vertex first.
    """
    bg = og.graph
    A = h
    B = bg.pairing[A]
    u, v = bg.source[A], bg.source[B]
    vorder, s1 = pull_to_front(og.vertices, [u, v])
    horder, s2 = pull_to_front(og.halves, [A, B])
    out, half_map, vertex_map = collapse_half(bg, A)
    merged = vertex_map[u]
    new_vertices = [merged] + [vertex_map[w] for w in vorder[2:]]
    new_halves = [half_map[x] for x in horder[2:]]
    return OrientedGraph(out, tuple(new_vertices), tuple(new_halves),
                         og.sign * s1 * s2)


def collapse_sign(bg, label):
    """Sign relating Phi_e of the canonical orientation of ``bg`` to the
    canonical orientation of the collapsed graph.

    Always +1 or -1: Phi_e is a bijection on orientations.
    """
    h = _half_of_label(bg, label)
    p = bg.pairing[h]
    leafset = set(bg.leaf_halves)
    if h in leafset or p in leafset or bg.source[h] == bg.source[p]:
        raise NotCollapsible(f"edge {label} is not collapsible")
    rep = canonical_orientation(bg)
    og = OrientedGraph(bg, rep.vertex_order, rep.half_edge_order, 1)
    _, sign = normalize(oriented_collapse(og, h))
    return sign
