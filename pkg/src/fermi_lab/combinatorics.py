"""Set partitions, contraction matchings and the fermionic crossing sign.

The diagram picture: the indices 1..n are vertices on a line, drawn in
descending order.  Each vertex i carries an outgoing creation line with
weight ``alpha[i]`` (to the left) and an incoming annihilation line with
weight ``beta[i]`` (from the right).  Grouping the vertices into the parts
of a partition contracts consecutive part elements into internal arcs; a
part minimum keeps its incoming line external, a part maximum its outgoing
line.  Reordering a fermionic product into normal order picks up one minus
sign per line crossing, so the total sign of a term is ``(-1)**xi`` with
``xi`` the crossing count weighted by ``beta[j] * alpha[i]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb, factorial
from typing import Iterator, Sequence

MAX_PARTITION_SIZE = 8
MAX_MATCHING_SIZE = 6

Bits = Sequence[int]


@dataclass(frozen=True)
class Partition:
    """A partition of {1..n} in canonical form.

    Parts are stored with elements ascending and sorted by their minimum;
    the external-line sets are always derived, never cached stale.
    """

    n: int
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        canonical = tuple(
            sorted((tuple(sorted(part)) for part in self.parts), key=lambda p: p[0])
        )
        object.__setattr__(self, "parts", canonical)
        seen: set[int] = set()
        for part in self.parts:
            if not part:
                raise ValueError("empty part")
            if seen.intersection(part):
                raise ValueError(f"parts are not disjoint: {self.parts}")
            seen.update(part)
        if seen != set(range(1, self.n + 1)):
            raise ValueError(f"parts do not cover 1..{self.n}: {self.parts}")

    @cached_property
    def g_in(self) -> frozenset[int]:
        """Vertices with an external incoming line (part minima)."""
        return frozenset(part[0] for part in self.parts)

    @cached_property
    def g_out(self) -> frozenset[int]:
        """Vertices with an external outgoing line (part maxima)."""
        return frozenset(part[-1] for part in self.parts)

    @cached_property
    def _part_of(self) -> dict[int, tuple[int, ...]]:
        return {i: part for part in self.parts for i in part}

    def part_of(self, i: int) -> tuple[int, ...]:
        return self._part_of[i]

    def next_in_part(self, i: int) -> int:
        """Smallest element above i in i's part (its contraction partner)."""
        part = self._part_of[i]
        return part[part.index(i) + 1]

    def prev_in_part(self, j: int) -> int:
        """Largest element below j in j's part."""
        part = self._part_of[j]
        return part[part.index(j) - 1]

    def internal_pairs(self) -> Iterator[tuple[int, int]]:
        """Contracted pairs (upper, lower): consecutive elements per part."""
        for part in self.parts:
            for lower, upper in itertools.pairwise(part):
                yield (upper, lower)

    def __str__(self) -> str:
        return "{" + ";".join("{" + ",".join(map(str, p)) + "}" for p in self.parts) + "}"


def singleton_partition(n: int) -> Partition:
    return Partition(n, tuple((i,) for i in range(1, n + 1)))


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """All partitions of {1..n}, each exactly once (Bell(n) of them)."""
    if not 1 <= n <= MAX_PARTITION_SIZE:
        raise ValueError(f"partition enumeration supports 1 <= n <= {MAX_PARTITION_SIZE}, got {n}")

    def grow(k: int, parts: list[list[int]]) -> Iterator[tuple[tuple[int, ...], ...]]:
        if k > n:
            yield tuple(tuple(p) for p in parts)
            return
        for part in parts:
            part.append(k)
            yield from grow(k + 1, parts)
            part.pop()
        parts.append([k])
        yield from grow(k + 1, parts)
        parts.pop()

    for raw in grow(1, []):
        yield Partition(n, raw)


def is_type_one(partition: Partition) -> bool:
    """True when every part is a run of consecutive integers.

    These are exactly the diagrams whose contractions join consecutive
    vertices; they are the only diagrams surviving the memoryless limit.
    """
    return all(part[-1] - part[0] == len(part) - 1 for part in partition.parts)


def type_one_partitions(n: int) -> Iterator[Partition]:
    """Type-I partitions of {1..n}; in bijection with compositions of n."""
    for cuts in itertools.product([False, True], repeat=n - 1):
        parts: list[tuple[int, ...]] = []
        start = 1
        for k, cut in enumerate(cuts, start=2):
            if cut:
                parts.append(tuple(range(start, k)))
                start = k
        parts.append(tuple(range(start, n + 1)))
        yield Partition(n, tuple(parts))


def type_one_partition_from_sizes(sizes: Sequence[int]) -> Partition:
    """The type-I partition with consecutive blocks of the given sizes."""
    parts = []
    start = 1
    for r in sizes:
        parts.append(tuple(range(start, start + r)))
        start += r
    return Partition(start - 1, tuple(parts))


# ---------------------------------------------------------------------------
# crossing sign
# ---------------------------------------------------------------------------

def is_crossing_pair(partition: Partition, j: int, i: int) -> bool:
    """Does the beta_j line cross the alpha_i line?  Requires j > i.

    Four mutually exclusive cases, depending on whether each of the two
    lines is external or contracted into an internal arc:

    * both external: an outgoing line at i always crosses an incoming
      line at any later j;
    * alpha_i external, beta_j contracted down to prev(j): they cross
      iff i lies strictly under that arc;
    * beta_j external, alpha_i contracted up to next(i): symmetric;
    * both contracted: the two arcs cross iff they interleave as
      next(i) > j > i > prev(j).
    """
    if j <= i:
        return False
    alpha_external = i in partition.g_out
    beta_external = j in partition.g_in
    if alpha_external and beta_external:
        return True
    if alpha_external:
        return partition.prev_in_part(j) < i
    if beta_external:
        return j < partition.next_in_part(i)
    return partition.prev_in_part(j) < i and j < partition.next_in_part(i)


def crossing_pairs(partition: Partition) -> list[tuple[int, int]]:
    """All (j, i) with j > i whose lines cross; xi sums beta_j*alpha_i over these."""
    n = partition.n
    return [
        (j, i)
        for j in range(2, n + 1)
        for i in range(1, j)
        if is_crossing_pair(partition, j, i)
    ]


def sign_xi(partition: Partition, alpha: Bits, beta: Bits) -> int:
    """Crossing count of the diagram, weighted by the line occupations."""
    if len(alpha) != partition.n or len(beta) != partition.n:
        raise ValueError(
            f"bit vectors must have length {partition.n}, got {len(alpha)}/{len(beta)}"
        )
    return sum(
        beta[j - 1] * alpha[i - 1] for (j, i) in crossing_pairs(partition)
    )


# ---------------------------------------------------------------------------
# matchings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matching:
    """A partial injective pairing between {1..m} (creator side) and {1..n}.

    Pairs are (i, j) with i in the creator index set and j in the
    annihilator index set; no index appears twice on either side.
    """

    m: int
    n: int
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        lefts = [i for i, _ in self.pairs]
        rights = [j for _, j in self.pairs]
        if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
            raise ValueError(f"matching is not injective: {sorted(self.pairs)}")
        if any(not (1 <= i <= self.m and 1 <= j <= self.n) for i, j in self.pairs):
            raise ValueError("matching pair out of range")

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.pairs)

    @property
    def range_(self) -> frozenset[int]:
        return frozenset(j for _, j in self.pairs)

    @property
    def domain_complement(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.m + 1) if i not in self.domain)

    @property
    def range_complement(self) -> tuple[int, ...]:
        return tuple(j for j in range(1, self.n + 1) if j not in self.range_)


def enumerate_matchings(m: int, n: int) -> Iterator[Matching]:
    """All partial injective pairings, the empty one included."""
    if m > MAX_MATCHING_SIZE or n > MAX_MATCHING_SIZE:
        raise ValueError(f"matching enumeration supports sizes <= {MAX_MATCHING_SIZE}")
    for k in range(0, min(m, n) + 1):
        for left in itertools.combinations(range(1, m + 1), k):
            for right in itertools.permutations(range(1, n + 1), k):
                yield Matching(m, n, frozenset(zip(left, right)))


def matching_count(m: int, n: int) -> int:
    """|P(S_m, S_n)| = sum_k C(m,k) C(n,k) k!."""
    return sum(comb(m, k) * comb(n, k) * factorial(k) for k in range(min(m, n) + 1))


def matching_partition(matching: Matching) -> Partition:
    """Pad a matching into a partition: creators at slots 1..m, annihilators
    at slots m+1..m+n, each pair (i, j) becoming the two-element part
    {i, m+j}, everything unmatched a singleton."""
    m, n = matching.m, matching.n
    paired_left = matching.domain
    paired_right = matching.range_
    parts = [(i, m + j) for i, j in matching.pairs]
    parts += [(i,) for i in range(1, m + 1) if i not in paired_left]
    parts += [(m + j,) for j in range(1, n + 1) if j not in paired_right]
    return Partition(m + n, tuple(parts))


def sign_xi_matching(matching: Matching, alpha: Bits, beta: Bits) -> int:
    """Crossing sign of a two-block contraction.

    The creator block occupies padded slots 1..m with bits ``alpha`` and the
    annihilator block slots m+1..m+n with bits ``beta``; the padded bit
    vectors are (alpha, 0..0) and (0..0, beta).
    """
    if len(alpha) != matching.m or len(beta) != matching.n:
        raise ValueError("bit lengths must match the matching ground sets")
    alpha_hat = tuple(alpha) + (0,) * matching.n
    beta_hat = (0,) * matching.m + tuple(beta)
    return sign_xi(matching_partition(matching), alpha_hat, beta_hat)


# ---------------------------------------------------------------------------
# occupation profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OccupationProfile:
    """How many parts of each size a partition has; counts[j-1] = #(j-parts)."""

    counts: tuple[int, ...]

    def __post_init__(self):
        trimmed = tuple(self.counts)
        while trimmed and trimmed[-1] == 0:
            trimmed = trimmed[:-1]
        object.__setattr__(self, "counts", trimmed)

    @property
    def vertex_count(self) -> int:
        """E = sum_j j * n_j, the number of partitioned vertices."""
        return sum(j * c for j, c in enumerate(self.counts, start=1))

    @property
    def part_count(self) -> int:
        """N = sum_j n_j, the number of parts."""
        return sum(self.counts)

    @property
    def singleton_count(self) -> int:
        return self.counts[0] if self.counts else 0

    def partition_count(self) -> int:
        """Number of distinct partitions with this profile."""
        total = factorial(self.vertex_count)
        for j, c in enumerate(self.counts, start=1):
            total //= factorial(j) ** c * factorial(c)
        return total


def occupation_profile(partition: Partition) -> OccupationProfile:
    sizes = [len(part) for part in partition.parts]
    counts = [0] * max(sizes)
    for s in sizes:
        counts[s - 1] += 1
    return OccupationProfile(tuple(counts))


def enumerate_profiles(n: int) -> Iterator[OccupationProfile]:
    """All occupation profiles with E = n (integer partitions of n)."""

    def grow(remaining: int, max_size: int, counts: dict[int, int]) -> Iterator[OccupationProfile]:
        if remaining == 0:
            top = max(counts) if counts else 0
            yield OccupationProfile(tuple(counts.get(j, 0) for j in range(1, top + 1)))
            return
        for size in range(min(remaining, max_size), 0, -1):
            counts[size] = counts.get(size, 0) + 1
            yield from grow(remaining - size, size, counts)
            counts[size] -= 1
            if counts[size] == 0:
                del counts[size]

    yield from grow(n, n, {})


def partitions_with_profile(profile: OccupationProfile) -> Iterator[Partition]:
    """All partitions of {1..E} with the given occupation profile."""
    n = profile.vertex_count

    def grow(elements: tuple[int, ...], sizes: tuple[int, ...],
             parts: tuple[tuple[int, ...], ...]) -> Iterator[Partition]:
        if not elements:
            yield Partition(n, parts)
            return
        head, rest = elements[0], elements[1:]
        used: set[int] = set()
        for idx, size in enumerate(sizes):
            if size in used:
                continue  # identical sizes: anchor the minimum to avoid duplicates
            used.add(size)
            remaining_sizes = sizes[:idx] + sizes[idx + 1:]
            for others in itertools.combinations(rest, size - 1):
                part = (head,) + others
                leftovers = tuple(x for x in rest if x not in others)
                yield from grow(leftovers, remaining_sizes, parts + (part,))

    sizes = tuple(
        j for j, c in enumerate(profile.counts, start=1) for _ in range(c)
    )
    yield from grow(tuple(range(1, n + 1)), sizes, ())


def bell_number(n: int) -> int:
    """Bell numbers by the triangle recurrence (independent of enumeration)."""
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1] if n >= 1 else 1
