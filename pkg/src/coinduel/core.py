"""Coin flip sequences and the pair-counting score.

A sequence of n flips is stored as an int with one bit per flip (heads = 1,
bit i holds flip i+1).  The score of a sequence is #HT - #HH over the n-1
overlapping pairs: positive means the HT player (B) leads, negative means
the HH player (A) leads.  Positions are 1-based everywhere in the public
API.
"""

from __future__ import annotations

from dataclasses import dataclass

HEADS = "H"
TAILS = "T"

PAIRS = ("HH", "HT", "TH", "TT")

# Running scores [S_1, ..., S_n]; see score_series.
ScoreSeries = list[int]


class ParseError(ValueError):
    """Text could not be read as a flip sequence."""


@dataclass(frozen=True, slots=True)
class FlipSequence:
    """An immutable, bit-packed sequence of coin flips.

    bit i of ``bits`` is flip i+1 (LSB first), heads stored as 1.  The
    zero-length sequence is allowed as an internal value but cannot be
    produced by :func:`parse_sequence`.
    """

    bits: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits has flips beyond the stated length")

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return "".join(
            HEADS if (self.bits >> i) & 1 else TAILS for i in range(self.length)
        )

    def __repr__(self) -> str:
        return f"FlipSequence({str(self)!r})"

    def is_head(self, pos: int) -> bool:
        """True iff flip ``pos`` (1-based) is heads."""
        if not 1 <= pos <= self.length:
            raise IndexError(f"position {pos} outside 1..{self.length}")
        return (self.bits >> (pos - 1)) & 1 == 1

    def flip(self, pos: int) -> str:
        return HEADS if self.is_head(pos) else TAILS

    def window(self, start: int, end: int) -> "FlipSequence":
        """The sub-sequence of flips start..end inclusive (1-based)."""
        if not 1 <= start <= end <= self.length:
            raise IndexError(f"window {start}..{end} outside 1..{self.length}")
        width = end - start + 1
        return FlipSequence((self.bits >> (start - 1)) & ((1 << width) - 1), width)


def parse_sequence(text: str) -> FlipSequence:
    """Parse a string of H/T characters.

    Rejects the empty string and any other character; the error message
    points at the first bad position (1-based).
    """
    if not text:
        raise ParseError("empty sequence")
    bits = 0
    for i, ch in enumerate(text):
        if ch == HEADS:
            bits |= 1 << i
        elif ch != TAILS:
            raise ParseError(f"invalid character {ch!r} at position {i + 1}")
    return FlipSequence(bits, len(text))


def reverse(seq: FlipSequence) -> FlipSequence:
    """The same flips read right to left."""
    if seq.length == 0:
        raise ValueError("cannot reverse an empty sequence")
    bits = seq.bits
    rev = 0
    for _ in range(seq.length):
        rev = (rev << 1) | (bits & 1)
        bits >>= 1
    return FlipSequence(rev, seq.length)


def _pair_mask(seq: FlipSequence, pattern: str) -> int:
    """Bitmask of pair starts: bit i set iff flips (i+1, i+2) match pattern."""
    if seq.length < 2:
        return 0
    window = (1 << (seq.length - 1)) - 1
    first = seq.bits
    second = seq.bits >> 1
    if pattern == "HH":
        mask = first & second
    elif pattern == "HT":
        mask = first & ~second
    elif pattern == "TH":
        mask = ~first & second
    elif pattern == "TT":
        mask = ~first & ~second
    else:
        raise ValueError(f"pattern must be one of {PAIRS}, got {pattern!r}")
    return mask & window


def count_overlapping(seq: FlipSequence, pattern: str) -> int:
    """Number of (overlapping) occurrences of a length-2 pattern.

    Sequences of length <= 1 have no pairs, so every count is 0.
    """
    return _pair_mask(seq, pattern).bit_count()


def score(seq: FlipSequence) -> int:
    """Final score #HT - #HH; 0 for length <= 1."""
    if seq.length < 2:
        return 0
    window = (1 << (seq.length - 1)) - 1
    first = seq.bits
    second = seq.bits >> 1
    ht = first & ~second & window
    hh = first & second & window
    return ht.bit_count() - hh.bit_count()


def score_series(seq: FlipSequence) -> ScoreSeries:
    """Running scores [S_1, ..., S_n] with S_1 = 0.

    S_k counts the pairs among the first k flips, so S_k - S_{k-1} is +1
    after an HT, -1 after an HH, else 0.
    """
    if seq.length == 0:
        raise ValueError("empty sequence has no score series")
    series = [0]
    s = 0
    bits = seq.bits
    prev = bits & 1
    for _ in range(seq.length - 1):
        bits >>= 1
        cur = bits & 1
        if prev:
            s += 1 - 2 * cur
        prev = cur
        series.append(s)
    return series


def run_count(seq: FlipSequence) -> int:
    """Number of maximal runs of equal flips (e.g. TTHHT has 3)."""
    if seq.length == 0:
        raise ValueError("empty sequence has no runs")
    window = (1 << (seq.length - 1)) - 1
    changes = (seq.bits ^ (seq.bits >> 1)) & window
    return 1 + changes.bit_count()


def head_count(seq: FlipSequence) -> int:
    """Number of heads."""
    return seq.bits.bit_count()


def score_via_runs(seq: FlipSequence) -> int:
    """Score from run statistics alone: r - h, minus 1 more if the
    sequence starts with tails (r = #runs, h = #heads)."""
    if seq.length == 0:
        raise ValueError("empty sequence has no score")
    r = run_count(seq)
    h = head_count(seq)
    if seq.bits & 1:
        return r - h
    return r - 1 - h
