"""Enumeration of all bordered fat graph classes of a surface type.

Isomorphism classes correspond bijectively to canonical boundary words,
so enumeration is word generation.  Essentially trivalent classes
(dimension 0) are generated by backtracking over word prefixes: at each
position we either open a fresh edge label or close an open one, and we
prune with the incremental vertex structure (the sigma orbits of a
trivalent graph close at size exactly three).  Higher dimensions are
obtained by closing under single-edge collapse, which is exactly how the
cells of the combinatorial filtration stack up.

An independent brute-force generator (fix a vertex structure per valence
profile, sweep all pairings) cross-checks the backtracking generator on
every slice small enough to afford it.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import struct
import sys
from dataclasses import dataclass, field

from .errors import CorruptCache, InvalidGraph, ResourceLimit
from .graphs import (
    BorderedFatGraph,
    BoundaryWord,
    CombinatorialGraph,
    FatGraph,
    SurfaceType,
    canonical_word,
    collapse_half,
    collapsible_halves,
    graph_from_word,
)

__all__ = [
    "Census",
    "enumerate_census",
    "enumerate_trivalent_words",
    "enumerate_by_profile_bruteforce",
    "census_cache_roundtrip",
    "load_or_build",
    "write_cache",
    "read_cache",
    "cache_dir_from_env",
    "max_dimension",
    "trivalent_edge_count",
]

CACHE_FORMAT_VERSION = 1
CACHE_ENV_VAR = "MCG_CACHE_DIR"
DEFAULT_CLASS_LIMIT = 5_000_000


def trivalent_edge_count(surface):
    """Edge count of an essentially trivalent graph of this type."""
    return 6 * surface.genus + 5 * surface.boundaries - 6


def max_dimension(surface):
    """Top cell dimension 4g + 3n - 5 (one interior vertex)."""
    return 4 * surface.genus + 3 * surface.boundaries - 5


@dataclass
class Census:
    """All canonical words of a surface type, grouped by dimension."""

    surface: SurfaceType
    by_dimension: dict = field(default_factory=dict)

    @property
    def counts(self):
        return {p: len(ws) for p, ws in sorted(self.by_dimension.items())}

    @property
    def total(self):
        return sum(len(ws) for ws in self.by_dimension.values())

    def words(self):
        for p in sorted(self.by_dimension):
            yield from self.by_dimension[p]


# ---------------------------------------------------------------------------
# backtracking generator for essentially trivalent words
# ---------------------------------------------------------------------------


class _TrivalentSearch:
    """Depth-first generation of canonical dimension-0 words.

    Word positions double as half-edge ids.  The boundary permutation
    omega is the successor map inside each cycle; the fat structure is
    recovered as sigma = omega . pairing, and its links are learned
    incrementally:

    * closing an edge at position p with opening position q fixes
      sigma(p) = omega(q);
    * filling position p+1 fixes omega(p) and hence sigma(partner(p));
    * closing a cycle at position p fixes omega(p) = cycle start.

    Any sigma chain with more than three half-edges, or any orbit that
    closes at a size other than three (one for the leaf slots), prunes
    the branch.
    """

    def __init__(self, surface, class_limit):
        self.surface = surface
        self.n = surface.boundaries
        self.E = trivalent_edge_count(surface)
        self.N = 2 * self.E
        self.limit = class_limit
        N = self.N
        self.entries = [0] * N
        self.partner = [-1] * N
        self.succ = [-1] * N
        self.pred = [-1] * N
        self.cycle_of = [-1] * N
        self.starts = []  # cycle start positions, one per started cycle
        self.open_pos = {}  # open label -> its +k position
        self.next_label = 1
        self.results = []

    # -- sigma-link bookkeeping ---------------------------------------------

    def _is_leaf_pos(self, p):
        return p == self.starts[self.cycle_of[p]] + 1

    def _omega_filled(self, q, pos):
        """omega(q) for a filled position q < pos (current fill at pos)."""
        c = self.cycle_of[q]
        if c == len(self.starts) - 1:
            return q + 1  # current cycle is contiguous through pos
        nxt = q + 1
        if self.cycle_of[nxt] == c if nxt < self.N else False:
            return nxt
        return self.starts[c]

    def _add_link(self, a, b):
        """Record sigma(a) = b; False (and no change) when it prunes."""
        succ, pred = self.succ, self.pred
        succ[a] = b
        pred[b] = a
        elems = 1
        closed = False
        x = a
        while True:
            y = succ[x]
            if y == -1:
                break
            if y == a:
                closed = True
                break
            elems += 1
            x = y
            if elems > 4:
                break
        if not closed and elems <= 4:
            x = a
            while True:
                y = pred[x]
                if y == -1 or y == a:
                    break
                elems += 1
                x = y
                if elems > 4:
                    break
        if closed:
            ok = elems == 3 or (elems == 1 and self._is_leaf_pos(a))
        else:
            ok = elems <= 3
        if not ok:
            succ[a] = -1
            pred[b] = -1
            return False
        return True

    def _remove_link(self, a, b):
        self.succ[a] = -1
        self.pred[b] = -1

    def _fill_links(self, pos, closing_partner):
        """All sigma links learned by filling ``pos``; None if pruned."""
        added = []
        todo = []
        if closing_partner is not None:
            todo.append((pos, self._omega_filled(closing_partner, pos)))
        prev = pos - 1
        if prev >= self.starts[-1]:
            q = self.partner[prev]
            if q != -1 and q != pos:
                todo.append((q, pos))
        for a, b in todo:
            if self._add_link(a, b):
                added.append((a, b))
            else:
                for a2, b2 in reversed(added):
                    self._remove_link(a2, b2)
                return None
        return added

    # -- search --------------------------------------------------------------

    def run(self):
        self._fill(0, 0)
        self.results.sort(key=BoundaryWord.sort_key)
        return self.results

    def _fill(self, pos, cycle):
        """Choose the entry at ``pos`` (first position of its cycle when
        the cycle list is one short)."""
        if cycle == len(self.starts):
            self.starts.append(pos)
        start = self.starts[cycle]
        in_cycle = pos - start
        self.cycle_of[pos] = cycle
        slots_left = self.N - pos - 1
        unstarted = self.n - cycle - 1

        if in_cycle == 0:
            choices = [0]  # open fresh (the leaf label)
        elif in_cycle == 1:
            choices = [self.entries[start]]  # close the leaf pair
        else:
            choices = sorted(self.open_pos)
            if self.next_label <= self.E:
                choices.append(0)

        for k in choices:
            if k == 0:
                opens_after = len(self.open_pos) + 1
                labels_left = self.E - self.next_label
            else:
                opens_after = len(self.open_pos) - 1
                labels_left = self.E - self.next_label + 1
            if opens_after > slots_left or labels_left < unstarted:
                continue
            if 3 * unstarted + max(0, 2 - in_cycle) > slots_left:
                continue
            if k == 0:
                label = self.next_label
                self.entries[pos] = label
                self.open_pos[label] = pos
                self.next_label += 1
                added = self._fill_links(pos, None)
                if added is not None:
                    self._descend(pos, cycle)
                    for a, b in reversed(added):
                        self._remove_link(a, b)
                self.next_label -= 1
                del self.open_pos[label]
            else:
                q = self.open_pos.pop(k)
                self.entries[pos] = -k
                self.partner[pos] = q
                self.partner[q] = pos
                added = self._fill_links(pos, q)
                if added is not None:
                    self._descend(pos, cycle)
                    for a, b in reversed(added):
                        self._remove_link(a, b)
                self.partner[pos] = -1
                self.partner[q] = -1
                self.open_pos[k] = q
            self.entries[pos] = 0
        self.cycle_of[pos] = -1
        if self.starts[-1] == pos:
            self.starts.pop()

    def _descend(self, pos, cycle):
        """Position ``pos`` is filled; extend the cycle or close it."""
        start = self.starts[cycle]
        if pos + 1 < self.N:
            self._fill(pos + 1, cycle)
        if pos - start + 1 < 3:
            return
        last = cycle == self.n - 1
        if last and (self.open_pos or pos + 1 != self.N):
            return
        if not last and pos + 1 >= self.N:
            return
        q = self.partner[pos]
        added = []
        if q != -1:
            if not self._add_link(q, start):
                return
            added.append((q, start))
        if last:
            self._emit()
        else:
            self._fill(pos + 1, cycle + 1)
        for a, b in reversed(added):
            self._remove_link(a, b)

    def _emit(self):
        if any(s == -1 for s in self.succ):
            raise AssertionError("emitted word with incomplete sigma")
        if not self._connected():
            return
        if len(self.results) >= self.limit:
            raise ResourceLimit(
                f"more than {self.limit} dimension-0 classes of {self.surface}",
                partial_count=len(self.results),
            )
        bounds = list(self.starts) + [self.N]
        cycles = tuple(
            tuple(self.entries[bounds[c]: bounds[c + 1]]) for c in range(self.n)
        )
        self.results.append(
            BoundaryWord(self.surface.genus, self.n, cycles)
        )

    def _connected(self):
        parent = list(range(self.N))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for h in range(self.N):
            for other in (self.succ[h], self.partner[h]):
                ra, rb = find(h), find(other)
                if ra != rb:
                    parent[ra] = rb
        root = find(0)
        return all(find(h) == root for h in range(self.N))


def enumerate_trivalent_words(surface, class_limit=None):
    """All canonical words of dimension-0 classes of ``surface``."""
    limit = DEFAULT_CLASS_LIMIT if class_limit is None else class_limit
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 10 * (2 * trivalent_edge_count(surface)) + 100))
    try:
        return _TrivalentSearch(surface, limit).run()
    finally:
        sys.setrecursionlimit(old_limit)


# ---------------------------------------------------------------------------
# full census: trivalent seed + collapse closure
# ---------------------------------------------------------------------------


def enumerate_census(surface, class_limit=None):
    """Complete census of ``surface``: every dimension, sorted words.

    Dimension p >= 1 classes are exactly the single-edge collapses of
    dimension p-1 classes, so the closure sweep is also the CW
    filtration.
    """
    limit = DEFAULT_CLASS_LIMIT if class_limit is None else class_limit
    dim0 = enumerate_trivalent_words(surface, class_limit=limit)
    if not dim0:
        raise InvalidGraph(f"no bordered fat graphs of type {surface}")
    census = Census(surface, {0: list(dim0)})
    total = len(dim0)
    current = dim0
    p = 0
    while current:
        nxt = set()
        for word in current:
            bg = graph_from_word(word)
            for h in collapsible_halves(bg):
                out, _, _ = collapse_half(bg, h)
                nxt.add(canonical_word(out))
        p += 1
        total += len(nxt)
        if total > limit:
            raise ResourceLimit(
                f"census of {surface} exceeds {limit} classes", partial_count=total
            )
        if nxt:
            census.by_dimension[p] = sorted(nxt, key=BoundaryWord.sort_key)
        current = census.by_dimension.get(p, [])
    return census


# ---------------------------------------------------------------------------
# independent brute-force generator (cross-check oracle)
# ---------------------------------------------------------------------------


def _interior_profiles(total, parts, smallest=3):
    """Partitions of ``total`` into exactly ``parts`` parts >= smallest,
    non-increasing."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total < parts * smallest:
        return
    first_max = total - smallest * (parts - 1)
    for first in range(first_max, smallest - 1, -1):
        for rest in _interior_profiles(total - first, parts - 1, smallest):
            if not rest or first >= rest[0]:
                yield (first,) + rest


def enumerate_by_profile_bruteforce(surface, dim):
    """Classes of ``surface`` in dimension ``dim`` by exhaustive pairing.

    For every interior valence profile, fix the vertex structure (sigma)
    on labeled half-edges and sweep all fixed-point-free pairings and
    all leaf orderings; keep the structures that decode to valid graphs
    of the right type, and quotient by canonical word.  Exponential in
    the edge count: use only on small slices.
    """
    g, n = surface.genus, surface.boundaries
    E = trivalent_edge_count(surface) - dim
    H = 2 * E
    n_interior = E + 2 - 2 * g - 2 * n
    if n_interior < 1 or H < 2:
        return []
    words = set()
    for profile in _interior_profiles(H - n, n_interior):
        if sum(v - 3 for v in profile) != dim:
            continue
        sigma = []
        source = []
        vid = 0
        base = 0
        for v in profile:
            for j in range(v):
                sigma.append(base + (j + 1) % v)
                source.append(vid)
            base += v
            vid += 1
        leaf_ids = list(range(base, base + n))
        for h in leaf_ids:
            sigma.append(h)
            source.append(vid)
            vid += 1
        for pairing in _all_pairings(H):
            try:
                graph = CombinatorialGraph(source, pairing, vid)
                fat = FatGraph(graph, sigma)
            except InvalidGraph:
                continue
            for leaves in itertools.permutations(leaf_ids):
                try:
                    bg = BorderedFatGraph(fat, leaves)
                except InvalidGraph:
                    continue
                word = canonical_word(bg)
                if word.surface == surface:
                    words.add(word)
    return sorted(words, key=BoundaryWord.sort_key)


def _all_pairings(H):
    """All perfect matchings of 0..H-1 as involution arrays."""
    pairing = [-1] * H

    def rec(free):
        if not free:
            yield tuple(pairing)
            return
        a = free[0]
        for i in range(1, len(free)):
            b = free[i]
            pairing[a] = b
            pairing[b] = a
            yield from rec(free[1:i] + free[i + 1:])
        pairing[a] = -1

    yield from rec(list(range(H)))


# ---------------------------------------------------------------------------
# persistent cache
# ---------------------------------------------------------------------------

_MAGIC = b"FATC"


def cache_dir_from_env(override=None):
    if override is not None:
        return str(override)
    return os.environ.get(CACHE_ENV_VAR, os.path.join(".", "cache"))


def _cache_basename(surface):
    return f"census_g{surface.genus}_n{surface.boundaries}_v{CACHE_FORMAT_VERSION}"


def _pack_census(census):
    out = bytearray()
    out += _MAGIC
    out += struct.pack(
        "<HHHI",
        CACHE_FORMAT_VERSION,
        census.surface.genus,
        census.surface.boundaries,
        census.total,
    )
    for p in sorted(census.by_dimension):
        words = census.by_dimension[p]
        out += struct.pack("<HI", p, len(words))
        for w in words:
            out += struct.pack("<H", len(w.cycles))
            for cyc in w.cycles:
                out += struct.pack("<H", len(cyc))
                out += struct.pack(f"<{len(cyc)}h", *cyc)
    return bytes(out)


def _unpack_census(data):
    off = 0

    def take(fmt):
        nonlocal off
        size = struct.calcsize(fmt)
        vals = struct.unpack_from(fmt, data, off)
        off += size
        return vals

    if data[:4] != _MAGIC:
        raise CorruptCache("bad magic")
    off = 4
    version, g, n, total = take("<HHHI")
    if version != CACHE_FORMAT_VERSION:
        raise CorruptCache(f"cache format v{version}, expected v{CACHE_FORMAT_VERSION}")
    surface = SurfaceType(g, n)
    census = Census(surface)
    read = 0
    while read < total:
        p, count = take("<HI")
        words = []
        for _ in range(count):
            (n_cycles,) = take("<H")
            cycles = []
            for _ in range(n_cycles):
                (ln,) = take("<H")
                cycles.append(take(f"<{ln}h"))
            words.append(BoundaryWord(g, n, tuple(cycles)))
        census.by_dimension[p] = words
        read += count
    if off != len(data):
        raise CorruptCache("trailing bytes")
    return census


def census_cache_roundtrip(census, cache_dir):
    """Write ``census`` to the cache and read it back."""
    write_cache(census, cache_dir)
    out = read_cache(census.surface, cache_dir)
    if out is None:
        raise CorruptCache("cache entry vanished during round-trip")
    return out


def write_cache(census, cache_dir):
    os.makedirs(cache_dir, exist_ok=True)
    base = os.path.join(cache_dir, _cache_basename(census.surface))
    payload = _pack_census(census)
    digest = hashlib.sha256(payload).hexdigest()
    with open(base + ".bin", "wb") as fh:
        fh.write(payload)
    sidecar = {
        "format_version": CACHE_FORMAT_VERSION,
        "g": census.surface.genus,
        "n": census.surface.boundaries,
        "counts": {str(p): c for p, c in census.counts.items()},
        "sha256": digest,
    }
    with open(base + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)
    return base + ".bin"


def read_cache(surface, cache_dir):
    """Load a census from the cache (None if absent); CorruptCache on
    any checksum, version, or surface mismatch."""
    base = os.path.join(cache_dir, _cache_basename(surface))
    try:
        with open(base + ".bin", "rb") as fh:
            payload = fh.read()
        with open(base + ".json") as fh:
            sidecar = json.load(fh)
    except FileNotFoundError:
        return None
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptCache(str(exc)) from exc
    if sidecar.get("format_version") != CACHE_FORMAT_VERSION:
        raise CorruptCache("stale sidecar version")
    if sidecar.get("sha256") != hashlib.sha256(payload).hexdigest():
        raise CorruptCache("checksum mismatch")
    census = _unpack_census(payload)
    if census.surface != surface:
        raise CorruptCache("cache holds a different surface type")
    return census


def load_or_build(surface, cache_dir=None, class_limit=None):
    """Cached census of ``surface``, regenerating on a missing or
    corrupt cache entry."""
    cdir = cache_dir_from_env(cache_dir)
    try:
        census = read_cache(surface, cdir)
    except CorruptCache:
        census = None
    if census is not None:
        return census
    census = enumerate_census(surface, class_limit=class_limit)
    try:
        write_cache(census, cdir)
    except OSError:
        pass  # read-only cache dir: still return the fresh census
    return census
