"""
Parser and writer for a small AC netlist language.

One statement per line::

    R<name> <n1> <n2> <ohms>
    L<name> <n1> <n2> <henries>
    C<name> <n1> <n2> <farads>
    V<name> <n+> <n-> AC <volts> [<phase_rad>]
    .ac <lin|log> <points> <w_start> <w_stop>

Lines starting with ``*`` or ``#`` are comments. Node ids are non-negative
integers with 0 as ground. Values accept the suffixes k, m, u, n, p
(case-insensitive, ``m`` is milli). Sweep bounds are angular frequencies in
rad/s.
"""

from dataclasses import dataclass
import re

import numpy as np

from .analysis import make_grid
from .errors import NetlistError

__all__ = ["Element", "Sweep", "Netlist", "parse_netlist", "serialize_netlist",
           "parse_value"]

_SUFFIX = {"k": 1e3, "m": 1e-3, "u": 1e-6, "n": 1e-9, "p": 1e-12}
_NUMBER = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([kKmMuUnNpP]?)$")
_NODE = re.compile(r"^\d+$")
KINDS = ("R", "L", "C", "V")


@dataclass(frozen=True)
class Element:
    kind: str
    name: str
    a: int
    b: int
    value: float
    phase: float = 0.0


@dataclass(frozen=True)
class Sweep:
    scale: str
    points: int
    start: float
    stop: float


@dataclass(frozen=True)
class Netlist:
    elements: tuple
    sweep: Sweep

    @property
    def source(self):
        return next(e for e in self.elements if e.kind == "V")

    @property
    def passives(self):
        return tuple(e for e in self.elements if e.kind != "V")

    @property
    def nodes(self):
        """Non-ground node ids in ascending order."""
        ids = {n for e in self.elements for n in (e.a, e.b)}
        ids.discard(0)
        return tuple(sorted(ids))

    def element(self, name):
        for e in self.elements:
            if e.name.upper() == name.upper():
                return e
        raise KeyError(name)

    def grid(self):
        s = self.sweep
        if s.points == 1:
            return np.array([s.start])
        return make_grid(s.start, s.stop, s.points, s.scale)


def parse_value(token):
    """Number with optional engineering suffix; ``None`` if malformed."""
    m = _NUMBER.match(token)
    if not m:
        return None
    num, suffix = m.groups()
    return float(num) * _SUFFIX.get(suffix.lower(), 1.0)


def _tokens(line):
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _node(tok, col, lineno):
    if not _NODE.match(tok):
        raise NetlistError(f"node id must be a non-negative integer, got {tok!r}",
                           lineno, col)
    return int(tok)


def _positive(tok, col, lineno, what):
    v = parse_value(tok)
    if v is None:
        raise NetlistError(f"malformed {what} {tok!r}", lineno, col)
    if not v > 0:
        raise NetlistError(f"non-positive {what} {tok!r}", lineno, col)
    return v


def _parse_sweep(toks, lineno):
    if len(toks) != 5:
        # too many: point at the first extra token; too few: just past the last one
        col = toks[5][1] if len(toks) > 5 else toks[-1][1] + len(toks[-1][0])
        raise NetlistError(".ac expects: .ac <lin|log> <points> <w_start> <w_stop>",
                           lineno, col)
    (scale, scol), (pts, pcol), (w0, c0), (w1, c1) = toks[1:]
    scale = scale.lower()
    if scale not in ("lin", "log"):
        raise NetlistError(f"sweep scale must be lin or log, got {toks[1][0]!r}",
                           lineno, scol)
    if not re.fullmatch(r"\d+", pts) or int(pts) < 1:
        raise NetlistError(f"point count must be a positive integer, got {pts!r}",
                           lineno, pcol)
    start = _positive(w0, c0, lineno, "start frequency")
    stop = _positive(w1, c1, lineno, "stop frequency")
    n = int(pts)
    if stop < start or (n > 1 and stop == start):
        raise NetlistError("stop frequency must exceed start frequency", lineno, c1)
    if n == 1 and stop != start:
        raise NetlistError("a 1-point sweep needs start == stop", lineno, c1)
    return Sweep(scale, n, start, stop)


def parse_netlist(text):
    """Parse netlist text into a :class:`Netlist`.

    Raises :class:`NetlistError` with the offending line and column for
    syntax errors, duplicate names, non-positive values, a missing or
    repeated ``.ac`` line, and anything other than exactly one source.
    """
    elements = []
    names = {}
    sweep = None
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped[0] in "*#":
            continue
        toks = _tokens(raw)
        head, hcol = toks[0]
        if head.startswith("."):
            if head.lower() != ".ac":
                raise NetlistError(f"unknown directive {head!r}", lineno, hcol)
            if sweep is not None:
                raise NetlistError("duplicate .ac directive", lineno, hcol)
            sweep = _parse_sweep(toks, lineno)
            continue
        kind = head[0].upper()
        if kind not in KINDS:
            raise NetlistError(f"unknown element type {head[0]!r}", lineno, hcol)
        if len(head) < 2:
            raise NetlistError("element name needs at least one character after the type",
                               lineno, hcol)
        key = head.upper()
        if key in names:
            raise NetlistError(f"duplicate element name {head!r} (first on line {names[key]})",
                               lineno, hcol)
        if kind == "V":
            if len(toks) not in (5, 6):
                col = toks[6][1] if len(toks) > 6 else len(raw.rstrip()) + 1
                raise NetlistError("source expects: V<name> <n+> <n-> AC <volts> [<phase_rad>]",
                                   lineno, col)
            if toks[3][0].upper() != "AC":
                raise NetlistError(f"expected AC, got {toks[3][0]!r}", lineno, toks[3][1])
        elif len(toks) != 4:
            col = toks[4][1] if len(toks) > 4 else len(raw.rstrip()) + 1
            raise NetlistError(f"{kind} element expects: {kind}<name> <n1> <n2> <value>",
                               lineno, col)
        a = _node(toks[1][0], toks[1][1], lineno)
        b = _node(toks[2][0], toks[2][1], lineno)
        if a == b:
            raise NetlistError(f"both terminals on node {a}", lineno, toks[2][1])
        if kind == "V":
            if any(e.kind == "V" for e in elements):
                raise NetlistError("more than one source", lineno, hcol)
            value = _positive(toks[4][0], toks[4][1], lineno, "amplitude")
            phase = 0.0
            if len(toks) == 6:
                phase = parse_value(toks[5][0])
                if phase is None:
                    raise NetlistError(f"malformed phase {toks[5][0]!r}", lineno, toks[5][1])
            el = Element("V", head, a, b, value, phase)
        else:
            value = _positive(toks[3][0], toks[3][1], lineno, "value")
            el = Element(kind, head, a, b, value)
        names[key] = lineno
        elements.append(el)
    end = len(lines) + 1
    if sweep is None:
        raise NetlistError("missing .ac directive", end)
    if not any(e.kind == "V" for e in elements):
        raise NetlistError("netlist has no source", end)
    return Netlist(tuple(elements), sweep)


def serialize_netlist(netlist, header=None):
    """Inverse of :func:`parse_netlist` (values written at full precision)."""
    out = []
    if header:
        out.extend(f"* {ln}" if ln else "*" for ln in header.splitlines())
    for e in netlist.elements:
        if e.kind == "V":
            line = f"{e.name} {e.a} {e.b} AC {float(e.value)!r}"
            if e.phase:
                line += f" {float(e.phase)!r}"
        else:
            line = f"{e.name} {e.a} {e.b} {float(e.value)!r}"
        out.append(line)
    s = netlist.sweep
    out.append(f".ac {s.scale} {int(s.points)} {float(s.start)!r} {float(s.stop)!r}")
    return "\n".join(out) + "\n"
