"""Enumeration: counts, closure, dual-generator agreement, cache."""

import pytest

from fatcomplex.census import (
    Census,
    census_cache_roundtrip,
    enumerate_by_profile_bruteforce,
    enumerate_census,
    enumerate_trivalent_words,
    load_or_build,
    max_dimension,
    read_cache,
    trivalent_edge_count,
    write_cache,
)
from fatcomplex.errors import CorruptCache, ResourceLimit
from fatcomplex.graphs import (
    BoundaryWord,
    SurfaceType,
    canonical_word,
    collapse_edge,
    collapsible_edges,
    dimension,
    graph_from_word,
    surface_invariants,
)

TOP_11 = BoundaryWord(1, 1, ((1, -1, 2, 3, -2, -3),))
MID_11 = BoundaryWord(1, 1, ((1, -1, 2, 3, 4, -2, -3, -4),))

# Counts established by the two independent generators (backtracking and
# profile brute force) agreeing on every slice small enough to afford the
# brute force; kept as regression fixtures.
COUNTS = {
    (1, 1): {0: 1, 1: 2, 2: 1},
    (0, 2): {0: 1, 1: 1},
    (0, 3): {0: 32, 1: 96, 2: 102, 3: 44, 4: 6},
    (1, 2): {0: 104, 1: 416, 2: 645, 3: 479, 4: 167, 5: 21},
    (2, 1): {0: 105, 1: 525, 2: 1071, 3: 1134, 4: 651, 5: 189, 6: 21},
}


@pytest.fixture(scope="module")
def census_11():
    return enumerate_census(SurfaceType(1, 1))


@pytest.fixture(scope="module")
def census_03():
    return enumerate_census(SurfaceType(0, 3))


def test_counts_11(census_11):
    assert census_11.counts == COUNTS[(1, 1)]
    assert TOP_11 in census_11.by_dimension[2]
    assert MID_11 in census_11.by_dimension[1]


def test_counts_02():
    census = enumerate_census(SurfaceType(0, 2))
    assert census.counts == COUNTS[(0, 2)]


def test_counts_03(census_03):
    assert census_03.counts == COUNTS[(0, 3)]


@pytest.mark.slow
@pytest.mark.parametrize("g,n", [(1, 2), (2, 1)])
def test_counts_large(g, n):
    census = enumerate_census(SurfaceType(g, n))
    assert census.counts == COUNTS[(g, n)]


def test_trivalent_shape_g1():
    # a trivalent (g,1) graph has 4g-1 interior vertices and 6g-1 edges
    for word in enumerate_trivalent_words(SurfaceType(1, 1)):
        bg = graph_from_word(word)
        assert bg.n_edges == 5 == trivalent_edge_count(SurfaceType(1, 1))
        assert bg.n_vertices - 1 == 3


@pytest.mark.slow
def test_trivalent_shape_g2():
    words = enumerate_trivalent_words(SurfaceType(2, 1))
    assert len(words) == COUNTS[(2, 1)][0]
    for word in words[:20]:
        bg = graph_from_word(word)
        assert bg.n_edges == 11
        assert bg.n_vertices - 1 == 7


def test_dimension_range(census_11, census_03):
    for census in (census_11, census_03):
        top = max_dimension(census.surface)
        assert sorted(census.by_dimension) == list(range(top + 1))


def test_words_decode_to_right_type(census_03):
    for word in census_03.words():
        bg = graph_from_word(word)
        assert surface_invariants(bg) == census_03.surface


def test_sorted_no_duplicates(census_03):
    for words in census_03.by_dimension.values():
        keys = [w.sort_key() for w in words]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)


def test_collapse_closure(census_11, census_03):
    # collapse never leaves the census
    for census in (census_11, census_03):
        universe = {w for w in census.words()}
        for word in census.words():
            bg = graph_from_word(word)
            for label in collapsible_edges(bg):
                assert canonical_word(collapse_edge(bg, label)) in universe


def test_seeded_vs_full(census_03):
    # dimension-p classes are exactly the collapses of dimension-(p-1) ones
    for p in range(1, max_dimension(census_03.surface) + 1):
        seeded = set()
        for word in census_03.by_dimension[p - 1]:
            bg = graph_from_word(word)
            for label in collapsible_edges(bg):
                seeded.add(canonical_word(collapse_edge(bg, label)))
        assert seeded == set(census_03.by_dimension[p])


@pytest.mark.parametrize(
    "g,n,dims",
    [
        (1, 1, (0, 1, 2)),
        (0, 2, (0, 1)),
    ],
)
def test_bruteforce_agreement_small(g, n, dims):
    census = enumerate_census(SurfaceType(g, n))
    for d in dims:
        bf = enumerate_by_profile_bruteforce(SurfaceType(g, n), d)
        assert bf == census.by_dimension.get(d, [])


@pytest.mark.slow
@pytest.mark.parametrize(
    "g,n,dims",
    [
        (2, 1, (4, 5, 6)),
        (1, 2, (3, 4, 5)),
        (0, 3, (2, 3, 4)),
    ],
)
def test_bruteforce_agreement_large(g, n, dims):
    census = enumerate_census(SurfaceType(g, n))
    for d in dims:
        bf = enumerate_by_profile_bruteforce(SurfaceType(g, n), d)
        assert bf == census.by_dimension.get(d, [])


def test_resource_limit():
    with pytest.raises(ResourceLimit):
        enumerate_census(SurfaceType(0, 3), class_limit=10)


def test_cache_roundtrip(census_11, tmp_path):
    out = census_cache_roundtrip(census_11, str(tmp_path))
    assert out.surface == census_11.surface
    assert out.counts == census_11.counts
    assert list(out.words()) == list(census_11.words())


def test_cache_checksum_detects_corruption(census_11, tmp_path):
    path = write_cache(census_11, str(tmp_path))
    with open(path, "r+b") as fh:
        fh.seek(20)
        byte = fh.read(1)
        fh.seek(20)
        fh.write(bytes([byte[0] ^ 0xFF]))
    with pytest.raises(CorruptCache):
        read_cache(census_11.surface, str(tmp_path))


def test_load_or_build_regenerates_on_corruption(census_11, tmp_path):
    path = write_cache(census_11, str(tmp_path))
    with open(path, "ab") as fh:
        fh.write(b"junk")
    census = load_or_build(SurfaceType(1, 1), cache_dir=str(tmp_path))
    assert census.counts == COUNTS[(1, 1)]
    # and the rewritten cache is clean again
    assert read_cache(SurfaceType(1, 1), str(tmp_path)).counts == COUNTS[(1, 1)]


def test_load_or_build_uses_cache(census_11, tmp_path, monkeypatch):
    write_cache(census_11, str(tmp_path))
    monkeypatch.setenv("MCG_CACHE_DIR", str(tmp_path))
    census = load_or_build(SurfaceType(1, 1))
    assert census.counts == COUNTS[(1, 1)]
