"""Exact probability vectors over ordered dichotomic (binary) variables.

All probabilities are ``fractions.Fraction`` values and every operation is
exact; nothing in this package rounds. A joint distribution over variables
``(v_0, ..., v_{k-1})`` is stored as a dense vector of length ``2**k``.

Indexing convention (used everywhere): entry ``i`` is the probability of the
outcome whose k-bit binary expansion of ``i``, most significant bit first,
assigns its j-th bit to variable ``v_j``. The bit of ``v_0`` is the most
significant. Index 0 is the all-zero outcome and ``2**k - 1`` the all-one
outcome. Written as 1-based positions, the m-th entry corresponds to the
internal index ``m - 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DuplicateLabel,
    LengthMismatch,
    NegativeEntry,
    NotAPermutation,
    NotNormalized,
    ParseError,
    UnknownLabel,
    ZeroDenominator,
)

#: Hard cap on the number of variables in one dense vector (2**20 entries).
MAX_VARS = 20

_RATIONAL_RE = re.compile(r"-?\d+(?:/\d+)?\Z")

ZERO = Fraction(0)
ONE = Fraction(1)


def rational_parse(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (optional leading minus) into a Fraction.

    The result is automatically in lowest terms with a positive denominator.
    Raises :class:`ParseError` for anything outside that grammar, including
    floats or whitespace inside the literal, and :class:`ZeroDenominator`
    for a zero denominator.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    body = text.strip()
    if not _RATIONAL_RE.match(body):
        raise ParseError(f"not a rational literal: {text!r}")
    if "/" in body:
        num, den = body.split("/")
        if int(den) == 0:
            raise ZeroDenominator(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(body))


def rational_format(value: Fraction | int) -> str:
    """Format a rational as ``"p"`` or ``"p/q"`` in lowest terms, q > 0."""
    return str(Fraction(value))


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or strict rational string to a Fraction.

    Floats are rejected on purpose: they would silently break exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return rational_parse(value)
    raise ParseError(f"not a rational value: {value!r}")


@dataclass(frozen=True)
class JointDist:
    """A joint distribution: ordered variable labels plus a dense vector.

    Instances are immutable and safe to share between threads. Use
    :func:`make_joint` to build one with full validation.
    """

    vars: tuple
    probs: tuple[Fraction, ...]

    @property
    def num_vars(self) -> int:
        return len(self.vars)

    def outcome(self, index: int) -> tuple[int, ...]:
        """Bits of ``index``, MSB first, one per variable."""
        return outcome_bits(index, self.num_vars)


def outcome_bits(index: int, width: int) -> tuple[int, ...]:
    """Binary expansion of ``index`` as ``width`` bits, MSB first."""
    return tuple((index >> (width - 1 - j)) & 1 for j in range(width))


def bits_index(bits: Sequence[int]) -> int:
    """Inverse of :func:`outcome_bits`."""
    index = 0
    for b in bits:
        index = (index << 1) | (b & 1)
    return index


def make_joint(labels: Iterable, probs: Iterable) -> JointDist:
    """Validating constructor for :class:`JointDist`.

    ``probs`` entries may be ints, Fractions or rational strings; they must
    be nonnegative and sum to exactly one, and there must be ``2**k`` of
    them for ``k`` distinct labels.
    """
    label_t = tuple(labels)
    if not label_t:
        raise LengthMismatch("a joint distribution needs at least one variable")
    if len(label_t) > MAX_VARS:
        raise LengthMismatch(f"at most {MAX_VARS} variables are supported, got {len(label_t)}")
    if len(set(label_t)) != len(label_t):
        raise DuplicateLabel(f"duplicate variable labels in {label_t!r}")
    values = tuple(as_rational(p) for p in probs)
    expected = 1 << len(label_t)
    if len(values) != expected:
        raise LengthMismatch(
            f"{len(label_t)} variables need {expected} probabilities, got {len(values)}"
        )
    for i, v in enumerate(values):
        if v < 0:
            raise NegativeEntry(f"entry {i} is negative: {v}")
    total = sum(values)
    if total != 1:
        raise NotNormalized(f"entries sum to {total}, expected 1")
    return JointDist(label_t, values)


def marginalize(dist: JointDist, keep: Iterable) -> JointDist:
    """Sum out all variables not named in ``keep``.

    The output variables appear in the order given by ``keep``, which need
    not preserve their order in ``dist``. Exact: the output entries are
    exact sums of input entries and again sum to one.
    """
    keep_t = tuple(keep)
    if not keep_t:
        raise LengthMismatch("keep must name at least one variable")
    if len(set(keep_t)) != len(keep_t):
        raise DuplicateLabel(f"duplicate labels in keep: {keep_t!r}")
    positions = []
    for v in keep_t:
        try:
            positions.append(dist.vars.index(v))
        except ValueError:
            raise UnknownLabel(f"variable {v!r} not in {dist.vars!r}") from None
    k = dist.num_vars
    out = [ZERO] * (1 << len(keep_t))
    for i, p in enumerate(dist.probs):
        if p == 0:
            continue
        m = 0
        for pos in positions:
            m = (m << 1) | ((i >> (k - 1 - pos)) & 1)
        out[m] += p
    return JointDist(keep_t, tuple(out))


def permute_vars(dist: JointDist, new_order: Iterable) -> JointDist:
    """Reorder the variables; every outcome keeps its probability.

    ``new_order`` must be a permutation of ``dist.vars``. Permuting twice by
    inverse orders returns the original vector, and marginalization commutes
    with permutation.
    """
    new_t = tuple(new_order)
    if (
        len(new_t) != dist.num_vars
        or len(set(new_t)) != len(new_t)
        or set(new_t) != set(dist.vars)
    ):
        raise NotAPermutation(f"{new_t!r} is not a permutation of {dist.vars!r}")
    src = [dist.vars.index(v) for v in new_t]
    k = dist.num_vars
    out = []
    for i in range(1 << k):
        oi = 0
        for t, s in enumerate(src):
            if (i >> (k - 1 - t)) & 1:
                oi |= 1 << (k - 1 - s)
        out.append(dist.probs[oi])
    return JointDist(new_t, tuple(out))
