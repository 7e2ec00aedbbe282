"""Exact arithmetic for polynomials with real-valued exponents.

A weight like 1 + 2*pi is never stored as a float. It is the integer vector
(1, 2) over a fixed basis of named positive reals ("atoms", here 1.0 and pi),
so merging terms during arithmetic compares exact integer vectors. The float
value of a weight is computed only for ordering, evaluation, and display.

    WeightAtom             named positive real, e.g. ("pi", 3.14159...)
    WeightBasis            ordered atoms with unique names
    WeightVector           one nonnegative multiplicity per atom
    GeneralizedPolynomial  finite map {WeightVector: int coefficient}
    RationalGF             quotient of two GeneralizedPolynomials
    CoefficientSeries      weight-sorted (WeightVector, count) pairs

Concatenating strings adds their weights, so a product of terms adds weight
vectors component-wise. `expand_series` turns a RationalGF into the exact
counting series of the language it enumerates, up to a weight cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import (
    BasisMismatchError,
    EvalOverflowError,
    ExpansionError,
    ResourceLimitError,
)


@dataclass(frozen=True)
class WeightAtom:
    """A named positive real used as a building block for symbol weights."""

    name: str
    value: float

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise ValueError("atom name must be a nonempty string")
        v = float(self.value)
        if not v > 0.0 or math.isinf(v):
            raise ValueError(
                f"atom {self.name!r} must have a positive finite value, got {self.value!r}"
            )
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class WeightBasis:
    """Ordered tuple of atoms; every WeightVector is indexed against it."""

    atoms: tuple[WeightAtom, ...]

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        names = [a.name for a in atoms]
        if len(set(names)) != len(names):
            raise ValueError("duplicate atom names in basis")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "_values", tuple(a.value for a in atoms))
        object.__setattr__(self, "_index", {a.name: i for i, a in enumerate(atoms)})

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "WeightBasis":
        return cls(tuple(WeightAtom(n, v) for n, v in values.items()))

    @property
    def size(self) -> int:
        return len(self.atoms)

    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.atoms)

    def values(self) -> tuple[float, ...]:
        return self._values  # type: ignore[attr-defined]

    def index(self, name: str) -> int:
        try:
            return self._index[name]  # type: ignore[attr-defined]
        except KeyError:
            raise KeyError(f"no atom named {name!r} in basis") from None


@dataclass(frozen=True)
class WeightVector:
    """Exact exponent: a nonnegative integer multiplicity per basis atom."""

    mults: tuple[int, ...]

    def __post_init__(self) -> None:
        mults = tuple(self.mults)
        for m in mults:
            if not isinstance(m, int) or isinstance(m, bool):
                raise ValueError(f"multiplicities must be integers, got {m!r}")
            if m < 0:
                raise ValueError(f"negative multiplicity {m}")
        object.__setattr__(self, "mults", mults)

    @classmethod
    def zero(cls, basis: WeightBasis) -> "WeightVector":
        return cls((0,) * basis.size)

    @classmethod
    def from_mapping(cls, basis: WeightBasis, mapping: Mapping[str, int]) -> "WeightVector":
        mults = [0] * basis.size
        for name, mult in mapping.items():
            mults[basis.index(name)] = mult
        return cls(tuple(mults))

    def __add__(self, other: "WeightVector") -> "WeightVector":
        if len(self.mults) != len(other.mults):
            raise BasisMismatchError("cannot add weight vectors of different lengths")
        return WeightVector(tuple(a + b for a, b in zip(self.mults, other.mults)))

    def scaled(self, k: int) -> "WeightVector":
        if k < 0:
            raise ValueError("scale factor must be nonnegative")
        return WeightVector(tuple(k * m for m in self.mults))

    def is_zero(self) -> bool:
        return not any(self.mults)

    def value(self, basis: WeightBasis) -> float:
        values = basis.values()
        if len(values) != len(self.mults):
            raise BasisMismatchError("weight vector does not match basis size")
        return sum(m * v for m, v in zip(self.mults, values) if m)

    def as_mapping(self, basis: WeightBasis) -> dict[str, int]:
        return {a.name: m for a, m in zip(basis.atoms, self.mults) if m}


def weight_sort_key(basis: WeightBasis):
    """Sort key ordering vectors by numeric value, exact lexicographic tiebreak."""

    def key(wv: WeightVector) -> tuple[float, tuple[int, ...]]:
        return (wv.value(basis), wv.mults)

    return key


TermsLike = Union[Mapping[WeightVector, int], Iterable[tuple[WeightVector, int]]]


class GeneralizedPolynomial:
    """Finite integer-coefficient sum of y**(weight value) terms. Immutable."""

    __slots__ = ("basis", "_terms")

    def __init__(self, basis: WeightBasis, terms: TermsLike = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[WeightVector, int] = {}
        for wv, c in items:
            if len(wv.mults) != basis.size:
                raise BasisMismatchError("term exponent does not match basis size")
            if not isinstance(c, int) or isinstance(c, bool):
                raise ValueError(f"coefficients must be integers, got {c!r}")
            clean[wv] = clean.get(wv, 0) + c
        self.basis = basis
        self._terms = {wv: c for wv, c in clean.items() if c}

    @classmethod
    def zero(cls, basis: WeightBasis) -> "GeneralizedPolynomial":
        return cls(basis)

    @classmethod
    def constant(cls, basis: WeightBasis, c: int) -> "GeneralizedPolynomial":
        return cls(basis, {WeightVector.zero(basis): c})

    @classmethod
    def one(cls, basis: WeightBasis) -> "GeneralizedPolynomial":
        return cls.constant(basis, 1)

    @classmethod
    def monomial(
        cls, basis: WeightBasis, wv: WeightVector, coeff: int = 1
    ) -> "GeneralizedPolynomial":
        return cls(basis, {wv: coeff})

    def coefficient(self, wv: WeightVector) -> int:
        return self._terms.get(wv, 0)

    @property
    def constant_coefficient(self) -> int:
        return self._terms.get(WeightVector.zero(self.basis), 0)

    def terms(self) -> Iterator[tuple[WeightVector, int]]:
        return iter(self._terms.items())

    def sorted_terms(self) -> list[tuple[WeightVector, int]]:
        key = weight_sort_key(self.basis)
        return sorted(self._terms.items(), key=lambda item: key(item[0]))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneralizedPolynomial):
            return NotImplemented
        return self.basis == other.basis and self._terms == other._terms

    def _check_same_basis(self, other: "GeneralizedPolynomial") -> None:
        if self.basis != other.basis:
            raise BasisMismatchError("operands use different weight bases")

    def __add__(self, other: "GeneralizedPolynomial") -> "GeneralizedPolynomial":
        self._check_same_basis(other)
        merged = dict(self._terms)
        for wv, c in other._terms.items():
            merged[wv] = merged.get(wv, 0) + c
        return GeneralizedPolynomial(self.basis, merged)

    def __neg__(self) -> "GeneralizedPolynomial":
        return GeneralizedPolynomial(self.basis, {wv: -c for wv, c in self._terms.items()})

    def __sub__(self, other: "GeneralizedPolynomial") -> "GeneralizedPolynomial":
        return self + (-other)

    def __mul__(self, other: "GeneralizedPolynomial") -> "GeneralizedPolynomial":
        self._check_same_basis(other)
        out: dict[WeightVector, int] = {}
        for wv1, c1 in self._terms.items():
            for wv2, c2 in other._terms.items():
                wv = wv1 + wv2
                out[wv] = out.get(wv, 0) + c1 * c2
        return GeneralizedPolynomial(self.basis, out)

    def __rmul__(self, scalar: int) -> "GeneralizedPolynomial":
        if not isinstance(scalar, int) or isinstance(scalar, bool):
            return NotImplemented
        return GeneralizedPolynomial(
            self.basis, {wv: scalar * c for wv, c in self._terms.items()}
        )

    def evaluate(self, y: float) -> float:
        """Numeric value at y >= 0, with the 0**0 = 1 convention."""
        if y < 0:
            raise ValueError("evaluation point must be nonnegative")
        total = 0.0
        for wv, c in self._terms.items():
            try:
                total += c * (y ** wv.value(self.basis))
            except OverflowError as exc:
                raise EvalOverflowError(f"overflow evaluating polynomial at y={y!r}") from exc
        if math.isinf(total) or math.isnan(total):
            raise EvalOverflowError(f"overflow evaluating polynomial at y={y!r}")
        return total

    def __repr__(self) -> str:
        parts = [
            f"{c}*y^{wv.value(self.basis):.6g}" for wv, c in self.sorted_terms()
        ]
        return "GeneralizedPolynomial(" + (" + ".join(parts) or "0") + ")"


@dataclass(frozen=True)
class RationalGF:
    """Quotient of two generalized polynomials.

    Normalized so the denominator's constant term is positive; a zero
    constant term is rejected because the quotient would not expand into a
    counting series starting at weight 0.
    """

    numerator: GeneralizedPolynomial
    denominator: GeneralizedPolynomial

    def __post_init__(self) -> None:
        if self.numerator.basis != self.denominator.basis:
            raise BasisMismatchError("numerator and denominator use different bases")
        d0 = self.denominator.constant_coefficient
        if d0 == 0:
            raise ExpansionError(
                "not a valid counting quotient: denominator constant term is zero"
            )
        if d0 < 0:
            object.__setattr__(self, "numerator", -self.numerator)
            object.__setattr__(self, "denominator", -self.denominator)

    @property
    def basis(self) -> WeightBasis:
        return self.numerator.basis

    def evaluate(self, y: float) -> float:
        return self.numerator.evaluate(y) / self.denominator.evaluate(y)


@dataclass(frozen=True)
class CoefficientSeries:
    """Exact counts per weight, sorted by (numeric value, exponent vector)."""

    basis: WeightBasis
    entries: tuple[tuple[WeightVector, int], ...]
    cutoff: float

    def __post_init__(self) -> None:
        entries = tuple((wv, c) for wv, c in self.entries)
        key = weight_sort_key(self.basis)
        prev = None
        for wv, c in entries:
            if not isinstance(c, int) or isinstance(c, bool) or c < 0:
                raise ValueError(f"counts must be nonnegative integers, got {c!r}")
            k = key(wv)
            if prev is not None and not prev < k:
                raise ValueError("series entries must be strictly increasing by weight")
            prev = k
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "cutoff", float(self.cutoff))

    def __len__(self) -> int:
        return len(self.entries)

    def values(self) -> list[float]:
        return [wv.value(self.basis) for wv, _ in self.entries]

    def counts(self) -> list[int]:
        return [c for _, c in self.entries]

    def pairs(self) -> list[tuple[float, int]]:
        return [(wv.value(self.basis), c) for wv, c in self.entries]

    def total_count(self) -> int:
        return sum(c for _, c in self.entries)

    def evaluate(self, y: float) -> float:
        """Partial sum of the series at y; monotone in the cutoff for y > 0."""
        total = 0.0
        for wv, c in self.entries:
            total += c * (y ** wv.value(self.basis))
        return total


def expand_series(
    gf: RationalGF, cutoff: float, *, term_limit: int = 1_000_000
) -> CoefficientSeries:
    """Exact coefficient extraction from a quotient, up to a weight cutoff.

    Write the denominator as d0*(1 - E) with every E-term of strictly
    positive weight; then the series is (num/d0) * sum over n of E**n.
    Intermediate products are truncated at the cutoff, which is sound
    because weights only accumulate. All arithmetic is exact: plain
    integers when d0 = +-1, Fractions otherwise with a final integrality
    check. Counts that come out negative or non-integral mean the quotient
    does not enumerate a language (e.g. an ambiguous construction) and
    raise ExpansionError.
    """
    cutoff = float(cutoff)
    if not cutoff >= 0 or math.isinf(cutoff):
        raise ValueError(f"cutoff must be finite and nonnegative, got {cutoff!r}")
    if term_limit < 1:
        raise ValueError("term limit must be positive")
    basis = gf.basis
    d0 = gf.denominator.constant_coefficient
    if d0 == 0:
        raise ExpansionError(
            "not a valid counting quotient: denominator constant term is zero"
        )

    value_cache: dict[WeightVector, float] = {}

    def val(wv: WeightVector) -> float:
        v = value_cache.get(wv)
        if v is None:
            v = wv.value(basis)
            value_cache[wv] = v
        return v

    exact = abs(d0) == 1

    def scale(c: int):
        return c // d0 if exact else Fraction(c, d0)

    geom = {
        wv: scale(-c)
        for wv, c in gf.denominator.terms()
        if not wv.is_zero() and val(wv) <= cutoff
    }
    current = {wv: scale(c) for wv, c in gf.numerator.terms() if val(wv) <= cutoff}
    acc = dict(current)
    while current:
        nxt: dict[WeightVector, object] = {}
        for wv1, c1 in current.items():
            for wv2, c2 in geom.items():
                wv = wv1 + wv2
                if val(wv) > cutoff:
                    continue
                nxt[wv] = nxt.get(wv, 0) + c1 * c2
        current = {wv: c for wv, c in nxt.items() if c}
        for wv, c in current.items():
            acc[wv] = acc.get(wv, 0) + c
        if len(acc) > term_limit or len(current) > term_limit:
            raise ResourceLimitError(
                f"series expansion exceeded the term limit of {term_limit}"
            )

    key = weight_sort_key(basis)
    entries: list[tuple[WeightVector, int]] = []
    for wv in sorted((wv for wv, c in acc.items() if c), key=key):
        c = acc[wv]
        if not exact:
            frac = Fraction(c)
            if frac.denominator != 1:
                raise ExpansionError(
                    f"non-integral count {frac} at weight {val(wv):.6g}: "
                    "the quotient does not enumerate a language"
                )
            c = frac.numerator
        c = int(c)
        if c < 0:
            raise ExpansionError(
                f"negative count {c} at weight {val(wv):.6g}: "
                "the quotient does not enumerate a language"
            )
        entries.append((wv, c))
    return CoefficientSeries(basis, tuple(entries), cutoff)
