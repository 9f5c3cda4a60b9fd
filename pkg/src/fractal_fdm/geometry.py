"""Iterated-function-system geometry of the Minkowski curve.

The curve is the attractor of eight plane similarities of ratio 1/4 that
send the unit segment [P0, P1] onto the square-tooth generator (right, up,
right, down, down, right, up, right).  The level-m vertex set consists of
the 8^m + 1 chain points obtained by applying every length-m composition
to P1 and prepending P0; consecutive vertices are 4^-m apart and the
adjacency is the path graph in index order.

All vertex coordinates are dyadic rationals (integer multiples of 4^-m),
so the geometric identities asserted by the tests hold exactly in 64-bit
floats for m <= 26.  Rotations are quarter turns applied by coordinate
swap and negation, never through cos/sin.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from itertools import product
from typing import IO, Iterator, Sequence, Union

import numpy as np

from .exceptions import LevelCapError

DEFAULT_MAX_LEVEL = 8
HARD_MAX_LEVEL = 10
MAX_LEVEL_ENV = "FRACTAL_FDM_MAX_LEVEL"


def max_level() -> int:
    """Current level cap: FRACTAL_FDM_MAX_LEVEL if set, else 8, ceiling 10."""
    raw = os.environ.get(MAX_LEVEL_ENV)
    if raw is None:
        return DEFAULT_MAX_LEVEL
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_LEVEL_ENV} must be an integer, got {raw!r}") from None
    return min(value, HARD_MAX_LEVEL)


def check_level(m: int) -> None:
    """Validate a graph level against the cap.

    Raises ValueError for a malformed level and LevelCapError above the cap.
    """
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise ValueError(f"level must be an integer, got {m!r}")
    if m < 0:
        raise ValueError(f"level must be >= 0, got {m}")
    cap = max_level()
    if m > cap:
        raise LevelCapError(
            f"level {m} exceeds the cap {cap}; set {MAX_LEVEL_ENV} "
            f"(ceiling {HARD_MAX_LEVEL}) to raise it"
        )


@dataclass(frozen=True)
class Point2:
    """Point of the plane."""

    x: float
    y: float

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y


P0 = Point2(0.0, 0.0)
P1 = Point2(1.0, 0.0)


def _as_point(p) -> Point2:
    if isinstance(p, Point2):
        return p
    x, y = p
    return Point2(float(x), float(y))


@dataclass(frozen=True)
class Word:
    """Address in {1,...,8}^m; the empty word denotes the identity map."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        normalized = []
        for letter in self.letters:
            value = int(letter)
            if value != letter or not 1 <= value <= 8:
                raise ValueError(f"word letters must lie in 1..8, got {letter!r}")
            normalized.append(value)
        object.__setattr__(self, "letters", tuple(normalized))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, idx):
        return self.letters[idx]

    def digits(self) -> str:
        """Render as a digit string, e.g. (1, 2, 1) -> "121"."""
        return "".join(str(letter) for letter in self.letters)

    @classmethod
    def from_digits(cls, digits: str) -> "Word":
        return cls(tuple(int(ch) for ch in digits))


WordLike = Union[Word, Sequence[int]]


def _as_word(word: WordLike) -> Word:
    if isinstance(word, Word):
        return word
    return Word(tuple(word))


@dataclass(frozen=True)
class Similarity:
    """Plane similarity p -> (rotation(p) + translation) / 4.

    The rotation is a quarter-turn index in 0..3; translations are the
    integer offsets applied before the 1/4 scaling, so dyadic points map
    to dyadic points without rounding.
    """

    quarter_turns: int
    translation: Point2
    ratio: float = 0.25

    def __post_init__(self):
        if self.quarter_turns not in (0, 1, 2, 3):
            raise ValueError(f"quarter_turns must lie in 0..3, got {self.quarter_turns}")

    def __call__(self, p: Point2) -> Point2:
        x, y = p.x, p.y
        q = self.quarter_turns
        if q == 1:
            x, y = -y, x
        elif q == 2:
            x, y = -x, -y
        elif q == 3:
            x, y = y, -x
        return Point2(
            (x + self.translation.x) * self.ratio,
            (y + self.translation.y) * self.ratio,
        )


# Quarter turns are pinned by the chain conditions f_{i+1}(P0) = f_i(P1),
# f_1(P0) = P0, f_8(P1) = P1: the generator runs right, up, right, down,
# down, right, up, right.
MAPS: tuple[Similarity, ...] = (
    Similarity(0, Point2(0.0, 0.0)),
    Similarity(1, Point2(1.0, 0.0)),
    Similarity(0, Point2(1.0, 1.0)),
    Similarity(3, Point2(2.0, 1.0)),
    Similarity(3, Point2(2.0, 0.0)),
    Similarity(0, Point2(2.0, -1.0)),
    Similarity(1, Point2(3.0, -1.0)),
    Similarity(0, Point2(3.0, 0.0)),
)

NUM_MAPS = len(MAPS)


def apply_map(i: int, p) -> Point2:
    """Apply the i-th similarity, i in 1..8."""
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)) or not 1 <= i <= NUM_MAPS:
        raise ValueError(f"map index must lie in 1..{NUM_MAPS}, got {i!r}")
    return MAPS[i - 1](_as_point(p))


def apply_word(word: WordLike, p) -> Point2:
    """Compose similarities along an address: the last letter acts first.

    apply_word((w1, ..., wm), p) = f_{w1}(f_{w2}(... f_{wm}(p))); the empty
    word returns p unchanged.
    """
    w = _as_word(word)
    q = _as_point(p)
    for letter in reversed(w.letters):
        q = MAPS[letter - 1](q)
    return q


def enumerate_words(m: int) -> Iterator[Word]:
    """All 8^m words of length m, lexicographically, as a lazy iterator."""
    check_level(m)
    return (Word(letters) for letters in product(range(1, NUM_MAPS + 1), repeat=m))


@dataclass(frozen=True)
class Vertex:
    """One chain vertex: coordinates, index, arc-length parameter, address."""

    coords: Point2
    index: int
    param: float
    address: Word | None  # None marks the origin vertex P0

    def address_string(self) -> str:
        return "origin" if self.address is None else self.address.digits()


def _word_for_vertex(index: int, m: int) -> Word:
    # base-8 digits of index - 1, shifted to 1..8: the k-th vertex (k >= 1)
    # is f_w(P1) for the word of lexicographic rank k
    n = index - 1
    letters = [0] * m
    for pos in range(m - 1, -1, -1):
        letters[pos] = n % 8 + 1
        n //= 8
    return Word(tuple(letters))


@dataclass(frozen=True, eq=False)
class GraphApprox:
    """Ordered level-m vertex chain; adjacency is i ~ i+1 in index order.

    Coordinates are held in one read-only (8^m + 1, 2) array; Vertex
    objects are materialized on demand (a full list would not fit in
    memory at the level cap).
    """

    level: int
    coords: np.ndarray

    @property
    def n_vertices(self) -> int:
        return self.coords.shape[0]

    @property
    def boundary(self) -> tuple[int, int]:
        return (0, self.n_vertices - 1)

    def params(self) -> np.ndarray:
        """Arc-length parameters k / 8^m (exact: division by a power of two)."""
        return np.arange(self.n_vertices) / 8.0**self.level

    def vertex(self, index: int) -> Vertex:
        n = self.n_vertices
        if not 0 <= index < n:
            raise ValueError(f"vertex index must lie in 0..{n - 1}, got {index}")
        address = None if index == 0 else _word_for_vertex(index, self.level)
        return Vertex(
            coords=Point2(float(self.coords[index, 0]), float(self.coords[index, 1])),
            index=index,
            param=index / 8.0**self.level,
            address=address,
        )

    def __len__(self) -> int:
        return self.n_vertices

    def __iter__(self) -> Iterator[Vertex]:
        return (self.vertex(k) for k in range(self.n_vertices))


def _apply_map_array(i: int, pts: np.ndarray) -> np.ndarray:
    sim = MAPS[i - 1]
    x, y = pts[:, 0], pts[:, 1]
    q = sim.quarter_turns
    if q == 1:
        x, y = -y, x
    elif q == 2:
        x, y = -x, -y
    elif q == 3:
        x, y = y, -x
    out = np.empty_like(pts)
    out[:, 0] = (x + sim.translation.x) * sim.ratio
    out[:, 1] = (y + sim.translation.y) * sim.ratio
    return out


def build_graph(m: int) -> GraphApprox:
    """Level-m chain: P0 followed by f_w(P1) over words in lexicographic order."""
    check_level(m)
    coords = np.array([[0.0, 0.0], [1.0, 0.0]])
    for _ in range(m):
        tail = coords[1:]
        # each map sends the previous chain (minus P0) onto one sub-cell,
        # already in chain order; P0 is the one point not of the form f_w(P1)
        pieces = [coords[:1]]
        pieces.extend(_apply_map_array(i, tail) for i in range(1, NUM_MAPS + 1))
        coords = np.concatenate(pieces)
    coords.setflags(write=False)
    return GraphApprox(level=m, coords=coords)


def write_vertices_csv(graph: GraphApprox, stream: IO[str]) -> None:
    """Vertex table: index,param,x,y,address - one row per vertex, chain order."""
    stream.write("index,param,x,y,address\n")
    scale = 8.0**graph.level
    coords = graph.coords
    for k in range(graph.n_vertices):
        address = "origin" if k == 0 else _word_for_vertex(k, graph.level).digits()
        stream.write(
            f"{k},{k / scale!r},{float(coords[k, 0])!r},{float(coords[k, 1])!r},{address}\n"
        )


def vertex_records(graph: GraphApprox) -> list[dict]:
    scale = 8.0**graph.level
    coords = graph.coords
    records = []
    for k in range(graph.n_vertices):
        address = "origin" if k == 0 else _word_for_vertex(k, graph.level).digits()
        records.append(
            {
                "index": k,
                "param": k / scale,
                "x": float(coords[k, 0]),
                "y": float(coords[k, 1]),
                "address": address,
            }
        )
    return records


def write_vertices_json(graph: GraphApprox, stream: IO[str]) -> None:
    json.dump(vertex_records(graph), stream, indent=2)
    stream.write("\n")
