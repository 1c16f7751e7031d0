"""Text serialization of semi-infinite and finite quasi-Toeplitz matrices.

Format (line oriented, whitespace separated, 17 significant digits so the
round trip is exact on IEEE doubles)::

    cqt 1 semi                  | cqt 1 finite <m>
    symbol <min_deg> <count>
    <re> <im>                   one line per coefficient
    correction <p> <q> <r>
    <2r floats>                 p rows of the left factor
    <2r floats>                 q rows of the right factor

Finite matrices carry two correction blocks: top-left first, then the
bottom-right one in flipped coordinates.
"""

import numpy as np

from .correction import Correction
from .cqt import CqtMatrix
from .errors import MalformedFileError
from .finite import FiniteQtMatrix
from .symbol import LaurentSymbol

_TAG = "cqt"
_VERSION = 1


def _fmt(x):
    return f"{x:.17g}"


def _emit_symbol(lines, sym):
    lines.append(f"symbol {sym.min_deg} {sym.coeffs.size}")
    for c in sym.coeffs:
        lines.append(f"{_fmt(c.real)} {_fmt(c.imag)}")


def _emit_correction(lines, corr):
    lines.append(f"correction {corr.p} {corr.q} {corr.rank}")
    for row in corr.u:
        lines.append(" ".join(f"{_fmt(c.real)} {_fmt(c.imag)}" for c in row))
    for row in corr.v:
        lines.append(" ".join(f"{_fmt(c.real)} {_fmt(c.imag)}" for c in row))


def serialize(x):
    """Serialize a CqtMatrix or FiniteQtMatrix to text."""
    lines = []
    if isinstance(x, CqtMatrix):
        lines.append(f"{_TAG} {_VERSION} semi")
        _emit_symbol(lines, x.symbol)
        _emit_correction(lines, x.corr)
    elif isinstance(x, FiniteQtMatrix):
        lines.append(f"{_TAG} {_VERSION} finite {x.m}")
        _emit_symbol(lines, x.symbol)
        _emit_correction(lines, x.corr_tl)
        _emit_correction(lines, x.corr_br)
    else:
        raise TypeError(f"cannot serialize {type(x).__name__}")
    return "\n".join(lines) + "\n"


class _Reader:
    def __init__(self, text):
        self.lines = text.splitlines()
        self.pos = 0

    def next_fields(self, expected=None, what=""):
        while self.pos < len(self.lines):
            line = self.lines[self.pos].strip()
            self.pos += 1
            if line:
                fields = line.split()
                if expected is not None and len(fields) != expected:
                    raise MalformedFileError(
                        f"line {self.pos}: expected {expected} fields for "
                        f"{what}, got {len(fields)}")
                return fields
        raise MalformedFileError(f"unexpected end of file while reading {what}")

    def done(self):
        return all(not ln.strip() for ln in self.lines[self.pos:])


def _read_int(field, reader, what):
    try:
        return int(field)
    except ValueError as exc:
        raise MalformedFileError(
            f"line {reader.pos}: bad integer for {what}: {field!r}") from exc


def _read_float(field, reader, what):
    try:
        return float(field)
    except ValueError as exc:
        raise MalformedFileError(
            f"line {reader.pos}: bad number for {what}: {field!r}") from exc


def _parse_symbol(reader):
    fields = reader.next_fields(3, "symbol header")
    if fields[0] != "symbol":
        raise MalformedFileError(
            f"line {reader.pos}: expected 'symbol', got {fields[0]!r}")
    min_deg = _read_int(fields[1], reader, "symbol min_deg")
    count = _read_int(fields[2], reader, "symbol count")
    if count < 0:
        raise MalformedFileError(f"line {reader.pos}: negative count")
    coeffs = np.zeros(count, dtype=np.complex128)
    for i in range(count):
        re, im = reader.next_fields(2, "symbol coefficient")
        coeffs[i] = complex(_read_float(re, reader, "coefficient"),
                            _read_float(im, reader, "coefficient"))
    return LaurentSymbol(coeffs, min_deg)


def parse(text):
    """Parse serialized text back into a matrix.

    Validates structure and re-canonicalizes (symbol trim, factor shapes).

    Raises
    ------
    MalformedFileError  with the offending line in the message
    """
    reader = _Reader(text)
    header = reader.next_fields(None, "header")
    if len(header) < 3 or header[0] != _TAG:
        raise MalformedFileError("line 1: not a cqt matrix file")
    if _read_int(header[1], reader, "version") != _VERSION:
        raise MalformedFileError(f"line 1: unsupported version {header[1]}")
    kind = header[2]
    if kind == "semi":
        if len(header) != 3:
            raise MalformedFileError("line 1: trailing fields after 'semi'")
        sym = _parse_symbol(reader)
        corr = _parse_correction_block(reader)
        if not reader.done():
            raise MalformedFileError(
                f"line {reader.pos + 1}: trailing content")
        return CqtMatrix(sym, corr)
    if kind == "finite":
        if len(header) != 4:
            raise MalformedFileError("line 1: finite kind requires a size")
        m = _read_int(header[3], reader, "size")
        sym = _parse_symbol(reader)
        tl = _parse_correction_block(reader)
        br = _parse_correction_block(reader)
        if not reader.done():
            raise MalformedFileError(
                f"line {reader.pos + 1}: trailing content")
        try:
            return FiniteQtMatrix(m, sym, tl, br)
        except ValueError as exc:
            raise MalformedFileError(f"invalid finite matrix: {exc}") from exc
    raise MalformedFileError(f"line 1: unknown kind {kind!r}")


def _parse_correction_block(reader):
    fields = reader.next_fields(4, "correction header")
    if fields[0] != "correction":
        raise MalformedFileError(
            f"line {reader.pos}: expected 'correction', got {fields[0]!r}")
    p = _read_int(fields[1], reader, "correction rows")
    q = _read_int(fields[2], reader, "correction cols")
    r = _read_int(fields[3], reader, "correction rank")
    if min(p, q, r) < 0:
        raise MalformedFileError(f"line {reader.pos}: negative dimension")
    if r == 0 or p == 0 or q == 0:
        if (p, q, r) != (0, 0, 0):
            raise MalformedFileError(
                f"line {reader.pos}: empty correction must be 0 0 0")
        return Correction.zero()

    def read_rows(count, what):
        out = np.zeros((count, r), dtype=np.complex128)
        for i in range(count):
            vals = reader.next_fields(2 * r, what)
            for k in range(r):
                out[i, k] = complex(
                    _read_float(vals[2 * k], reader, what),
                    _read_float(vals[2 * k + 1], reader, what))
        return out

    u = read_rows(p, "correction left factor")
    v = read_rows(q, "correction right factor")
    return Correction(u, v)


def write_file(path, x):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize(x))


def read_file(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse(fh.read())
