"""Line-oriented text format for dynamic edge streams.

::

    n=<int> weighted=<0|1>[ W=<int>]
    #pass
    + <u> <v>[ <w>]
    - <u> <v>[ <w>]
    #pass
    ...
    #updates=<count>

The header comes first. Lines starting with ``#`` are comments, except
``#pass`` (starts a new pass section) and ``#updates=N`` (trailer with the
total number of update lines). Updates carry a weight exactly when
``weighted=1``. Each pass section must be a consistent stream on its own.
Files written by :func:`write_stream` are canonical and round-trip byte for byte.
"""

from __future__ import annotations

import io
import os
import re
from dataclasses import dataclass, field
from typing import Iterator, TextIO

import numpy as np

from ..exceptions import ConsistencyError, ParseError, StreamError
from ..graph import DELETE, INSERT, EdgeStream, EdgeUpdate, WeightedEdge

_HEADER = re.compile(r"n=(\d+) weighted=([01])(?: W=(\d+))?")
_UPDATE = re.compile(r"([+-]) (\d+) (\d+)(?: (\d+))?")
_TRAILER = re.compile(r"#updates=(\d+)")
PASS_MARKER = "#pass"


@dataclass
class StreamFile:
    """A parsed stream file: header fields plus one :class:`EdgeStream` per pass section."""

    n: int
    weighted: bool
    W: int | None = None
    passes: list = field(default_factory=list)
    markers: bool = False

    @property
    def stream(self) -> EdgeStream:
        if not self.passes:
            return EdgeStream(self.n, [], [], [], [], weighted=self.weighted, W=self.W)
        return self.passes[0]

    def replay(self, count: int) -> list[EdgeStream]:
        """Streams for ``count`` passes.

        A file with one section is replayed; otherwise the number of
        sections must equal ``count`` and every section must be identical.
        """
        if len(self.passes) <= 1:
            return [self.stream] * count
        if len(self.passes) != count:
            raise StreamError(f"file has {len(self.passes)} pass sections, algorithm needs {count}")
        first = self.passes[0]
        for k, p in enumerate(self.passes[1:], start=2):
            if p != first:
                raise StreamError(f"pass section {k} differs from the first")
        return list(self.passes)


class StreamSource:
    """Lazy reader over a stream file; iterating yields ``(section, EdgeUpdate)``.

    Consistency is checked as lines are read, so an error names the first
    offending line even in a very long file.
    """

    def __init__(self, source):
        self.source = source
        with self._open() as fh:
            first, lineno = _first_content_line(fh)
        self.n, self.weighted, self.W = _parse_header(first, lineno)

    def _open(self) -> TextIO:
        if isinstance(self.source, str) and "\n" in self.source:
            return io.StringIO(self.source, newline="")
        if isinstance(self.source, (str, os.PathLike)) and os.path.exists(self.source):
            return open(self.source, encoding="utf-8", newline="")
        raise FileNotFoundError(str(self.source))

    def __iter__(self) -> Iterator[tuple[int, EdgeUpdate]]:
        with self._open() as fh:
            yield from _iter_updates(fh, self.n, self.weighted, self.W)

    def load(self) -> StreamFile:
        sections: list[list[tuple]] = []
        markers = False
        with self._open() as fh:
            for section, up, marker in _iter_updates(fh, self.n, self.weighted, self.W, markers=True):
                if marker:
                    markers = True
                    sections.append([])
                    continue
                if not sections:
                    sections.append([])
                sections[section].append((up.sign, up.edge.u, up.edge.v, up.edge.w))
        passes = []
        for rows in sections:
            arr = np.array(rows, dtype=np.int64).reshape(-1, 4)
            passes.append(EdgeStream(self.n, arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3],
                                     weighted=self.weighted, W=self.W, validate=False))
        return StreamFile(self.n, self.weighted, self.W, passes, markers)


def _first_content_line(fh) -> tuple[str, int]:
    for lineno, raw in enumerate(fh, start=1):
        line = raw.rstrip("\r\n")
        if line.strip() == "" or (line.startswith("#") and line != PASS_MARKER):
            continue
        return line, lineno
    raise ParseError("missing header", line=1)


def _parse_header(line: str, lineno: int):
    m = _HEADER.fullmatch(line.strip())
    if not m:
        raise ParseError(f"bad header {line!r}; expected 'n=<int> weighted=<0|1>[ W=<int>]'", line=lineno)
    return int(m.group(1)), m.group(2) == "1", (int(m.group(3)) if m.group(3) else None)


def _iter_updates(fh, n, weighted, W, markers=False):
    section = 0
    seen_updates = False
    seen_header = False
    open_sections = 0
    present: dict[tuple[int, int], int] = {}
    count = 0
    trailer = None
    for lineno, raw in enumerate(fh, start=1):
        line = raw.rstrip("\r\n")
        stripped = line.strip()
        if not seen_header:
            if stripped == "" or (stripped.startswith("#") and stripped != PASS_MARKER):
                continue
            seen_header = True
            continue
        if trailer is not None and stripped and not stripped.startswith("#"):
            raise ParseError("update after the '#updates=' trailer", line=lineno)
        if stripped == PASS_MARKER:
            if open_sections or seen_updates:
                section += 1
            open_sections += 1
            present = {}
            if markers:
                yield section, None, True
            continue
        if stripped.startswith("#"):
            t = _TRAILER.fullmatch(stripped)
            if t:
                trailer = (int(t.group(1)), lineno)
            continue
        if stripped == "":
            continue
        m = _UPDATE.fullmatch(stripped)
        if not m:
            raise ParseError(f"bad update line {line!r}", line=lineno)
        if (m.group(4) is not None) != weighted:
            need = "a weight" if weighted else "no weight"
            raise ParseError(f"update must carry {need} when weighted={int(weighted)}", line=lineno)
        sign = INSERT if m.group(1) == "+" else DELETE
        u, v = int(m.group(2)), int(m.group(3))
        w = int(m.group(4)) if weighted else 1
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line=lineno)
        if u >= n or v >= n:
            raise ParseError(f"vertex outside [0, {n})", line=lineno)
        if w < 1 or (W is not None and w > W):
            raise ParseError(f"weight {w} outside [1, {W}]", line=lineno)
        edge = WeightedEdge(u, v, w)
        key = edge.pair
        if sign == INSERT:
            if key in present:
                raise ConsistencyError(f"edge {key} inserted twice", edge=edge, line=lineno, position=count)
            present[key] = w
        else:
            old = present.get(key)
            if old is None:
                raise ConsistencyError(f"deleting absent edge {key}", edge=edge, line=lineno, position=count)
            if old != w:
                raise ConsistencyError(f"deletion weight {w} does not match inserted weight {old}",
                                       edge=edge, line=lineno, position=count)
            del present[key]
        seen_updates = True
        count += 1
        if markers:
            yield section, EdgeUpdate(sign, edge), False
        else:
            yield section, EdgeUpdate(sign, edge)
    if not seen_header:
        raise ParseError("missing header", line=1)
    if trailer is not None and trailer[0] != count:
        raise ParseError(f"trailer declares {trailer[0]} updates, file has {count}", line=trailer[1])


def parse_stream(source) -> StreamSource:
    """Open a stream file (a path, or the file text itself) for lazy reading."""
    return StreamSource(source)


def read_stream(source) -> StreamFile:
    return parse_stream(source).load()


def format_stream(data, passes: int | None = None, markers: bool | None = None) -> str:
    """Canonical text for an :class:`EdgeStream` or :class:`StreamFile`.

    ``passes`` repeats a single stream that many times as marked sections.
    """
    if isinstance(data, StreamFile):
        sections, n, weighted, W = data.passes, data.n, data.weighted, data.W
        markers = data.markers if markers is None else markers
    else:
        sections, n, weighted, W = [data], data.n, data.weighted, data.W
    if passes is not None and passes > 1:
        sections = list(sections[:1]) * passes
    markers = bool(markers) or len(sections) > 1
    out = [f"n={n} weighted={int(weighted)}" + (f" W={W}" if W is not None else "")]
    total = 0
    for sec in sections:
        if markers:
            out.append(PASS_MARKER)
        for s, a, b, c in zip(sec.sign.tolist(), sec.u.tolist(), sec.v.tolist(), sec.w.tolist()):
            sym = "+" if s == INSERT else "-"
            out.append(f"{sym} {a} {b} {c}" if weighted else f"{sym} {a} {b}")
        total += len(sec)
    out.append(f"#updates={total}")
    return "\n".join(out) + "\n"


def write_stream(data, path, passes: int | None = None, markers: bool | None = None) -> None:
    text = format_stream(data, passes, markers)
    if hasattr(path, "write"):
        path.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
