"""Text formats for representation matrices and colorings.

The matrix format is bit-exact and line oriented (UTF-8, LF):

    WRIG 1 <m> <n>
    <label> <size> <v1> ... <vk>     (one line per label, m lines total)

Label and vertex indices are 1-based on disk and 0-based in memory; vertex
lists are sorted ascending.  A coloring file holds n whitespace-separated
tokens, each ``+1`` or ``-1``.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Union

from .core import Coloring, RepresentationMatrix

MAGIC = "WRIG"
FORMAT_VERSION = 1

PathLike = Union[str, Path]


def format_matrix(R: RepresentationMatrix) -> str:
    lines = [f"{MAGIC} {FORMAT_VERSION} {R.m} {R.n}"]
    for l, L in enumerate(R.label_sets):
        parts = [str(l + 1), str(len(L))]
        parts.extend(str(v + 1) for v in L)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> RepresentationMatrix:
    stream = io.StringIO(text)
    header = stream.readline().split()
    if len(header) != 4 or header[0] != MAGIC:
        raise ValueError("not a WRIG matrix file (bad header)")
    try:
        version, m, n = int(header[1]), int(header[2]), int(header[3])
    except ValueError:
        raise ValueError("not a WRIG matrix file (non-numeric header)") from None
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported WRIG format version {version}")
    if m < 0 or n < 1:
        raise ValueError(f"bad dimensions m={m}, n={n}")

    label_sets: list[tuple[int, ...]] = []
    for expected in range(1, m + 1):
        line = stream.readline()
        if not line:
            raise ValueError(f"expected {m} label lines, found {expected - 1}")
        fields = line.split()
        if len(fields) < 2:
            raise ValueError(f"label line {expected} is too short")
        idx, size = int(fields[0]), int(fields[1])
        if idx != expected:
            raise ValueError(f"label line {expected} carries index {idx}")
        if len(fields) != 2 + size:
            raise ValueError(
                f"label {idx} declares {size} vertices but lists {len(fields) - 2}"
            )
        vertices = tuple(int(f) - 1 for f in fields[2:])
        if any(v < 0 or v >= n for v in vertices):
            raise ValueError(f"label {idx} has a vertex outside [1, {n}]")
        if any(a >= b for a, b in zip(vertices, vertices[1:])):
            raise ValueError(f"label {idx} vertices are not sorted ascending")
        label_sets.append(vertices)
    for line in stream:
        if line.strip():
            raise ValueError("trailing content after the last label line")
    return RepresentationMatrix.from_label_sets(n, label_sets)


def write_matrix(R: RepresentationMatrix, path: PathLike) -> None:
    Path(path).write_text(format_matrix(R), encoding="utf-8", newline="\n")


def read_matrix(path: PathLike) -> RepresentationMatrix:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))


def format_coloring(x: Coloring) -> str:
    return " ".join("+1" if v == 1 else "-1" for v in x.values) + "\n"


def parse_coloring(text: str) -> Coloring:
    values = []
    for token in text.split():
        if token == "+1":
            values.append(1)
        elif token == "-1":
            values.append(-1)
        else:
            raise ValueError(f"coloring token must be +1 or -1, got {token!r}")
    if not values:
        raise ValueError("empty coloring file")
    return Coloring(tuple(values))


def write_coloring(x: Coloring, path: PathLike) -> None:
    Path(path).write_text(format_coloring(x), encoding="utf-8", newline="\n")


def read_coloring(path: PathLike) -> Coloring:
    return parse_coloring(Path(path).read_text(encoding="utf-8"))
