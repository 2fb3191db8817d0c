"""Exact-rational engine for the operators attached to box diagrams.

An n-loop box diagram induces an operator on pairs of harmonic
polynomials; on the generator families

    left:  (z11)^k (x) 1        right:  1 (x) (z'11)^k

its image is a homogeneous polynomial sum_p c_p (w11)^(k-p) (w'11)^p
with exact rational coefficients.  For the n-loop ladder the
coefficients are the a^k(n, p) defined by

    a^k(1, p) = 1/(k+1),
    a^k(n+1, p) = sum_{q=p}^{k} a^k(n, q) / (q+1),

and the operator acts on the k-th irreducible component of the tensor
square by the scalar

    mu^(n)_k = sum_{p=0}^{k-1} (-1)^(k+p+1) a^(k-1)(n, p) C(k-1, p).

For an arbitrary diagram the image is computed by peeling the recorded
last slingshot.  Each site has one directly reducible generator family:

* site Z1, left family:  multiply by (w'11)^(k-p) and recurse at p,
  with weight 1/(k+1);
* site Z2, right family: same with (w11)^(k-p) (this is the ladder
  recursion);
* site W1, left family:  substitute the w11 slot of the predecessor
  image by the peeled vertex and re-integrate, sending (w11)^a to
  1/(a+1) sum_r (w11)^r (w'11)^(a-r);
* site W2, right family: mirror of the previous rule on the w'11 slot.

The opposite family is routed through the swap symmetry
image_left(w, w') = image_right(w', w); `verify_magic` is the
correctness gate for this reconstruction: it recomputes every
enumerated diagram independently and requires identical images.

All arithmetic is exact; no floating point enters this module.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import Decimal, getcontext
from fractions import Fraction
from functools import lru_cache

from .diagrams import BoxDiagram, enumerate_diagrams, from_history

__all__ = [
    "CoeffTable",
    "GeneratorImage",
    "EigenvalueTable",
    "MagicReport",
    "a_table",
    "mu",
    "mu2_closed",
    "mu_table",
    "ladder_image",
    "diagram_image",
    "eigenvalue_extract",
    "verify_magic",
    "fraction_str",
    "fraction_decimal",
]

SIDES = ("left", "right")


@dataclass(frozen=True)
class CoeffTable:
    """Exact coefficients a^k(n, 0..k) of the n-loop ladder on degree-k generators."""

    n: int
    k: int
    a: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.a) != self.k + 1:
            raise ValueError("coefficient row must have length k+1")
        if sum(self.a) != 1:
            raise ValueError("coefficient row must sum to 1")
        for p in range(self.k):
            if not self.a[p] >= self.a[p + 1] > 0:
                raise ValueError("coefficients must be positive and non-increasing")


@dataclass(frozen=True)
class GeneratorImage:
    """Image polynomial sum_p coeffs[p] * (w11)^(k-p) * (w'11)^p.

    `side` records which generator family was applied: "left" for
    (z11)^k (x) 1, "right" for 1 (x) (z'11)^k.
    """

    k: int
    side: str
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}")
        if len(self.coeffs) != self.k + 1:
            raise ValueError("image must have k+1 coefficients")

    def swapped(self) -> "GeneratorImage":
        """The same polynomial with w11 and w'11 exchanged, on the other side."""
        other = "left" if self.side == "right" else "right"
        return GeneratorImage(self.k, other, tuple(reversed(self.coeffs)))


@dataclass(frozen=True)
class EigenvalueTable:
    """Eigenvalues mu^(n)_k for k = 1..k_max, exact rationals."""

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.values and self.values[0] != 1:
            raise ValueError("mu^(n)_1 must equal 1")


@lru_cache(maxsize=None)
def a_table(n: int, k: int) -> CoeffTable:
    """The coefficient row a^k(n, .), by the exact recursion."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if n == 1:
        row = tuple(Fraction(1, k + 1) for _ in range(k + 1))
    else:
        prev = a_table(n - 1, k).a
        # a^k(n, p) = sum_{q >= p} a^k(n-1, q)/(q+1): one suffix-sum pass.
        row_rev = []
        acc = Fraction(0)
        for q in range(k, -1, -1):
            acc += prev[q] / (q + 1)
            row_rev.append(acc)
        row = tuple(reversed(row_rev))
    return CoeffTable(n=n, k=k, a=row)


def mu(n: int, k: int) -> Fraction:
    """Eigenvalue mu^(n)_k via the alternating-binomial sum over a^(k-1)(n, .)."""
    if k < 1:
        raise ValueError("component index k must be >= 1")
    row = a_table(n, k - 1).a
    sign = -1 if k % 2 == 0 else 1  # (-1)^(k+p+1) at p = 0
    total = Fraction(0)
    for p in range(k):
        total += sign * row[p] * math.comb(k - 1, p)
        sign = -sign
    return total


def mu2_closed(k: int) -> Fraction:
    """Closed form of the two-loop eigenvalues: 1, then (-1)^(k+1)/(k(k-1))."""
    if k < 1:
        raise ValueError("component index k must be >= 1")
    if k == 1:
        return Fraction(1)
    return Fraction((-1) ** (k + 1), k * (k - 1))


def mu_table(n: int, k_max: int) -> EigenvalueTable:
    return EigenvalueTable(n=n, values=tuple(mu(n, k) for k in range(1, k_max + 1)))


def ladder_image(n: int, k: int, side: str = "right") -> GeneratorImage:
    """Image of the degree-k generator under the n-loop ladder operator.

    Computed directly from the coefficient table and recomputed through
    the one-step ladder recursion; the two must agree exactly.
    """
    row = a_table(n, k).a
    coeffs = row if side == "right" else tuple(reversed(row))
    img = GeneratorImage(k=k, side=side, coeffs=coeffs)
    if n > 1:
        rec = _ladder_image_recursive(n, k, side)
        if rec != img:
            raise AssertionError("ladder recursion disagrees with the coefficient table")
    return img


def _ladder_image_recursive(n: int, k: int, side: str) -> GeneratorImage:
    """Ladder image via image^(n) = 1/(k+1) sum_p monomial * image^(n-1)(p)."""
    if n == 1:
        row = tuple(Fraction(1, k + 1) for _ in range(k + 1))
        return GeneratorImage(k, side, row)
    out = [Fraction(0)] * (k + 1)
    for p in range(k + 1):
        sub = _ladder_image_recursive(n - 1, p, side).coeffs
        for q in range(p + 1):
            if side == "right":
                # multiplier (w11)^(k-p) keeps the w' exponent q
                out[q] += sub[q] / (k + 1)
            else:
                # multiplier (w'11)^(k-p) raises the w' exponent to k-p+q
                out[k - p + q] += sub[q] / (k + 1)
    return GeneratorImage(k, side, tuple(out))


_DIRECT_SIDE = {"Z1": "left", "Z2": "right", "W1": "left", "W2": "right"}


@lru_cache(maxsize=None)
def _image_by_history(history: tuple[str, ...], side: str, k: int) -> tuple[Fraction, ...]:
    if not history:
        return tuple(Fraction(1, k + 1) for _ in range(k + 1))
    site = history[-1]
    if _DIRECT_SIDE[site] != side:
        # Route through the swap symmetry: the other family is direct.
        other = "left" if side == "right" else "right"
        return tuple(reversed(_image_by_history(history, other, k)))
    prev = history[:-1]
    out = [Fraction(0)] * (k + 1)
    if site == "Z1":
        for p in range(k + 1):
            sub = _image_by_history(prev, "left", p)
            for q in range(p + 1):
                out[k - p + q] += sub[q] / (k + 1)
    elif site == "Z2":
        for p in range(k + 1):
            sub = _image_by_history(prev, "right", p)
            for q in range(p + 1):
                out[q] += sub[q] / (k + 1)
    elif site == "W1":
        sub = _image_by_history(prev, "left", k)
        for q in range(k + 1):
            w = sub[q] / (k - q + 1)
            for j in range(q, k + 1):
                out[j] += w
    else:  # W2
        sub = _image_by_history(prev, "right", k)
        for q in range(k + 1):
            w = sub[q] / (q + 1)
            for r in range(q + 1):
                out[r] += w
    return tuple(out)


def diagram_image(d: BoxDiagram, side: str, k: int) -> GeneratorImage:
    """Image of the degree-k generator under the operator of diagram d.

    Evaluates by peeling the recorded attachment history; the base case
    is the one-loop image 1/(k+1) sum_p (w11)^(k-p) (w'11)^p.
    """
    if side not in SIDES:
        raise ValueError(f"unsupported generator family {side!r}")
    if k < 0:
        raise ValueError("generator degree must be >= 0")
    if from_history(d.history).solid != d.solid:
        raise ValueError("diagram history does not reproduce the diagram")
    return GeneratorImage(k, side, _image_by_history(d.history, side, k))


def eigenvalue_extract(img: GeneratorImage, k: int) -> Fraction:
    """Scalar action on the k-th irreducible component, from a degree-(k-1) image.

    The ratio-of-inner-products formula: with orthonormal extreme
    monomials, the right-family image gives
    sum_p (-1)^(k+p+1) C(k-1, p) c_p (and the mirrored sum on the left).
    """
    if img.k != k - 1:
        raise ValueError(f"image has degree {img.k}, expected {k - 1}")
    total = Fraction(0)
    for p, c in enumerate(img.coeffs):
        if img.side == "right":
            sign = -1 if (k + p + 1) % 2 else 1
        else:
            sign = -1 if p % 2 else 1
        total += sign * math.comb(k - 1, p) * c
    return total


@dataclass(frozen=True)
class MagicReport:
    """Outcome of comparing all n-loop diagram images against the ladder."""

    n: int
    k_max: int
    diagram_count: int
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_magic(n: int, k_max: int) -> MagicReport:
    """Check that every enumerated n-loop diagram yields the same images.

    For both generator families and every degree k <= k_max, each
    diagram's image must coincide exactly with the ladder image.
    """
    diagrams = enumerate_diagrams(n)
    failures: list[str] = []
    for side in SIDES:
        for k in range(k_max + 1):
            expected = ladder_image(n, k, side)
            for i, d in enumerate(diagrams):
                got = diagram_image(d, side, k)
                if got.coeffs != expected.coeffs:
                    failures.append(
                        f"n={n} side={side} k={k} diagram#{i} history={d.history}: "
                        f"{got.coeffs} != {expected.coeffs}"
                    )
    return MagicReport(n=n, k_max=k_max, diagram_count=len(diagrams), failures=tuple(failures))


def fraction_str(x: Fraction) -> str:
    """Exact "num/den" rendering used in JSON artifacts."""
    return f"{x.numerator}/{x.denominator}"


def fraction_decimal(x: Fraction, digits: int = 30) -> str:
    """Decimal rendering at the given number of significant digits."""
    getcontext().prec = digits
    d = Decimal(x.numerator) / Decimal(x.denominator)
    return str(d)


def mu_table_payload(n: int, k_max: int) -> dict:
    table = mu_table(n, k_max)
    return {
        "schema": "boxmagic.mu-table/1",
        "loops": n,
        "k_max": k_max,
        "values": [
            {"k": k + 1, "exact": fraction_str(v), "decimal": fraction_decimal(v)}
            for k, v in enumerate(table.values)
        ],
    }


def a_table_payload(n: int, k: int) -> dict:
    table = a_table(n, k)
    return {
        "schema": "boxmagic.a-table/1",
        "loops": n,
        "k": k,
        "values": [
            {"p": p, "exact": fraction_str(v), "decimal": fraction_decimal(v)}
            for p, v in enumerate(table.a)
        ],
    }


def payload_to_csv(payload: dict) -> str:
    """CSV rendering of a mu- or a-table payload (exact and decimal columns)."""
    key = "k" if payload["schema"].startswith("boxmagic.mu-table") else "p"
    lines = [f"{key},exact,decimal"]
    for row in payload["values"]:
        lines.append(f'{row[key]},{row["exact"]},{row["decimal"]}')
    return "\n".join(lines) + "\n"


def payload_to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"
