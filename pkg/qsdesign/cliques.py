"""Clique kernels over bitset adjacency.

A graph on vertices 0..n-1 is a sequence ``adjacency`` of ints where bit j of
``adjacency[i]`` marks the edge {i, j}. Adjacency must be symmetric with no
self-loops.
"""

from typing import Iterator, Sequence


def _lsb_index(x: int) -> int:
    return (x & -x).bit_length() - 1


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def core_mask(adjacency: Sequence[int], size: int, candidates: int | None = None) -> int:
    """Vertices left after repeatedly removing those with fewer than size-1 neighbors.

    No clique of ``size`` vertices uses a removed vertex.
    """
    alive = (1 << len(adjacency)) - 1 if candidates is None else candidates
    if size <= 1:
        return alive
    changed = True
    while changed:
        changed = False
        for v in iter_bits(alive):
            if (adjacency[v] & alive).bit_count() < size - 1:
                alive &= ~(1 << v)
                changed = True
    return alive


def _colour_bound(candidates: int, adjacency: Sequence[int]) -> int:
    """Greedy colour classes over ``candidates``; an upper bound on any clique inside."""
    colours = 0
    remaining = candidates
    while remaining:
        colours += 1
        free = remaining
        while free:
            v = _lsb_index(free)
            remaining &= ~(1 << v)
            free &= ~(1 << v) & ~adjacency[v]
    return colours


def find_clique(adjacency: Sequence[int], size: int) -> tuple[int, ...] | None:
    """Some clique with at least ``size`` vertices, or None.

    Bron-Kerbosch with a max-degree pivot; stops at the first witness. Branch
    vertices are tried highest degree first.
    """
    if size <= 0:
        return ()
    alive = core_mask(adjacency, size)
    if alive.bit_count() < size:
        return None
    degree = {v: (adjacency[v] & alive).bit_count() for v in iter_bits(alive)}

    def extend(clique: list[int], candidates: int) -> tuple[int, ...] | None:
        if len(clique) >= size:
            return tuple(sorted(clique))
        if len(clique) + candidates.bit_count() < size:
            return None
        if len(clique) + _colour_bound(candidates, adjacency) < size:
            return None
        pivot = max(iter_bits(candidates), key=lambda u: (adjacency[u] & candidates).bit_count())
        branch = sorted(iter_bits(candidates & ~adjacency[pivot]), key=lambda u: (-degree[u], u))
        for v in branch:
            clique.append(v)
            found = extend(clique, candidates & adjacency[v])
            clique.pop()
            if found is not None:
                return found
            candidates &= ~(1 << v)
            if len(clique) + candidates.bit_count() < size:
                return None
        return None

    return extend([], alive)


def has_clique(adjacency: Sequence[int], size: int) -> bool:
    return find_clique(adjacency, size) is not None


def _exact_cliques(adjacency: Sequence[int], size: int) -> Iterator[tuple[int, ...]]:
    """Cliques of exactly ``size`` vertices, lexicographic by sorted vertex list."""
    if size <= 0:
        yield ()
        return
    alive = core_mask(adjacency, size)

    def extend(clique: list[int], candidates: int) -> Iterator[tuple[int, ...]]:
        if len(clique) == size:
            yield tuple(clique)
            return
        while candidates and len(clique) + candidates.bit_count() >= size:
            v = _lsb_index(candidates)
            candidates &= ~(1 << v)
            # later vertices only, so each clique is produced once in sorted order
            clique.append(v)
            yield from extend(clique, candidates & adjacency[v])
            clique.pop()

    yield from extend([], alive)


def count_cliques(adjacency: Sequence[int], size: int, cap: int | None = None) -> int:
    """Number of cliques of exactly ``size`` vertices.

    Counting stops once the count passes ``cap``; the result is then cap + 1.
    """
    count = 0
    for _ in _exact_cliques(adjacency, size):
        count += 1
        if cap is not None and count > cap:
            break
    return count


def enumerate_cliques(
    adjacency: Sequence[int], size: int, limit: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Cliques of exactly ``size`` vertices in lexicographic order, at most ``limit`` of them."""
    for index, clique in enumerate(_exact_cliques(adjacency, size)):
        if limit is not None and index >= limit:
            return
        yield clique


def is_clique(adjacency: Sequence[int], vertices: Sequence[int]) -> bool:
    for position, u in enumerate(vertices):
        for v in vertices[position + 1 :]:
            if u == v or not (adjacency[u] >> v) & 1:
                return False
    return True
