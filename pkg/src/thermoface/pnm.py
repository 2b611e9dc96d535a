"""PGM/PPM codec (P2, P3, P5, P6), bit-exact, maxval 255 only.

Header tokens may be separated by any whitespace; '#' starts a comment
that runs to end of line and may appear between tokens. For the binary
variants exactly one whitespace byte follows the maxval, then the raw
row-major payload.
"""

import numpy as np

from .errors import MalformedFile, UnsupportedDepth

_WHITESPACE = b" \t\n\r\x0b\x0c"


class _Tokenizer:
    """Pulls whitespace/comment-separated header tokens off a byte stream."""

    def __init__(self, data):
        self.data = data
        self.pos = 0

    def _skip_separators(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = self.data[self.pos:self.pos + 1]
            if c in _WHITESPACE:
                self.pos += 1
            elif c == b"#":
                nl = data.find(b"\n", self.pos)
                self.pos = n if nl < 0 else nl + 1
            else:
                return

    def next_token(self):
        self._skip_separators()
        if self.pos >= len(self.data):
            raise MalformedFile("truncated header")
        start = self.pos
        while self.pos < len(self.data):
            c = self.data[self.pos:self.pos + 1]
            if c in _WHITESPACE or c == b"#":
                break
            self.pos += 1
        return self.data[start:self.pos]

    def next_int(self, what):
        tok = self.next_token()
        try:
            return int(tok)
        except ValueError:
            raise MalformedFile(f"bad {what}: {tok!r}") from None


def decode(data: bytes) -> np.ndarray:
    """Decode a PNM byte stream.

    Returns a (h, w) uint8 array for PGM or a (h, w, 3) uint8 array for PPM.
    """
    magic = data[:2]
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise MalformedFile(f"not a supported PNM magic: {magic!r}")
    tok = _Tokenizer(data)
    tok.next_token()  # magic, already checked
    width = tok.next_int("width")
    height = tok.next_int("height")
    maxval = tok.next_int("maxval")
    if width <= 0 or height <= 0:
        raise MalformedFile(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedDepth(f"maxval {maxval}, only 255 supported")

    channels = 3 if magic in (b"P3", b"P6") else 1
    count = width * height * channels

    if magic in (b"P5", b"P6"):
        # exactly one whitespace byte separates the maxval from the payload
        if tok.pos >= len(data) or data[tok.pos:tok.pos + 1] not in _WHITESPACE:
            raise MalformedFile("missing separator before binary payload")
        start = tok.pos + 1
        payload = data[start:start + count]
        if len(payload) < count:
            raise MalformedFile(
                f"payload truncated: need {count} bytes, got {len(payload)}")
        flat = np.frombuffer(payload, dtype=np.uint8, count=count)
    else:
        values = np.empty(count, dtype=np.int64)
        for i in range(count):
            values[i] = tok.next_int("sample")
        if (values < 0).any() or (values > maxval).any():
            raise MalformedFile("sample out of range")
        flat = values.astype(np.uint8)

    if channels == 1:
        return flat.reshape(height, width).copy()
    return flat.reshape(height, width, 3).copy()


def encode_pgm(gray: np.ndarray, ascii: bool = False) -> bytes:
    """Encode a (h, w) uint8 array as P5 (or P2 when ascii=True)."""
    gray = np.asarray(gray, dtype=np.uint8)
    if gray.ndim != 2:
        raise ValueError(f"expected 2D gray array, got shape {gray.shape}")
    h, w = gray.shape
    if ascii:
        rows = "\n".join(" ".join(str(v) for v in row) for row in gray)
        return f"P2\n{w} {h}\n255\n{rows}\n".encode("ascii")
    return b"P5\n%d %d\n255\n" % (w, h) + gray.tobytes()


def encode_ppm(color: np.ndarray, ascii: bool = False) -> bytes:
    """Encode a (h, w, 3) uint8 array as P6 (or P3 when ascii=True)."""
    color = np.asarray(color, dtype=np.uint8)
    if color.ndim != 3 or color.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) color array, got shape {color.shape}")
    h, w, _ = color.shape
    if ascii:
        rows = "\n".join(
            " ".join(str(v) for v in row.ravel()) for row in color)
        return f"P3\n{w} {h}\n255\n{rows}\n".encode("ascii")
    return b"P6\n%d %d\n255\n" % (w, h) + color.tobytes()
