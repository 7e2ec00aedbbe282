"""Closed-form generating functions for channel specs.

Each builder produces a RationalGF whose exact expansion counts the
channel's strings by total weight:

  gf_free_monoid         1 / (1 - sum of y**w(s)) for an unconstrained
                         alphabet
  gf_pattern_avoidance   the correlation-polynomial quotient
                         c(x) / (x**k + (1 - 2x) c(x)) for binary
                         equal-weight alphabets avoiding one pattern,
                         with x = y**u for the common symbol weight u
  gf_from_regex          structural translation of an unambiguous regex:
                         union adds, concatenation multiplies, star of S
                         becomes den(S) / (den(S) - num(S))

`build_gf` dispatches on the constraint kind. The regex route assumes the
declared unambiguity; if the declaration is wrong the expansion produces
counts exceeding the true ones, which downstream cross-checks catch.
"""

from __future__ import annotations

from .chanspec import (
    ChannelSpec,
    Concat,
    Epsilon,
    ForbiddenPatterns,
    Free,
    Regex,
    RegexNode,
    Star,
    Symbol,
    Union,
)
from .errors import UnsupportedChannelError
from .genpoly import GeneralizedPolynomial, RationalGF, WeightVector


def gf_free_monoid(spec: ChannelSpec) -> RationalGF:
    """1 / (1 - sum of symbol monomials): all strings over the alphabet."""
    basis = spec.basis
    den = GeneralizedPolynomial.one(basis)
    for sym in spec.symbols:
        den = den - GeneralizedPolynomial.monomial(basis, sym.weight)
    return RationalGF(GeneralizedPolynomial.one(basis), den)


def autocorrelation(pattern: tuple[str, ...]) -> tuple[int, ...]:
    """Correlation bits of a pattern with itself.

    Bit i is 1 when the pattern shifted right by i agrees with itself on
    the overlap, i.e. pattern[i:] == pattern[:k-i]. Bit 0 is always 1.
    """
    k = len(pattern)
    if k == 0:
        raise ValueError("pattern must be nonempty")
    return tuple(1 if pattern[i:] == pattern[: k - i] else 0 for i in range(k))


def gf_pattern_avoidance(spec: ChannelSpec) -> RationalGF:
    """Correlation-polynomial quotient for a single forbidden pattern.

    Applies to a two-symbol alphabet whose symbols share one weight vector
    u: counting by length x and substituting x = y**u. Anything wider
    (several patterns, more symbols, unequal weights) should be written as
    an unambiguous regex instead.
    """
    constraint = spec.constraint
    if not isinstance(constraint, ForbiddenPatterns):
        raise UnsupportedChannelError("the channel does not forbid patterns")
    if len(constraint.patterns) != 1:
        raise UnsupportedChannelError(
            "the correlation-polynomial quotient handles exactly one forbidden "
            "pattern; encode multiple patterns as an unambiguous regex"
        )
    if len(spec.symbols) != 2:
        raise UnsupportedChannelError(
            "the correlation-polynomial quotient needs a two-symbol alphabet; "
            "encode other alphabets as an unambiguous regex"
        )
    u = spec.symbols[0].weight
    if spec.symbols[1].weight != u:
        raise UnsupportedChannelError(
            "the correlation-polynomial quotient needs equal symbol weights; "
            "encode unequal weights as an unambiguous regex"
        )
    pattern = constraint.patterns[0]
    bits = autocorrelation(pattern)
    k = len(pattern)
    basis = spec.basis
    corr = GeneralizedPolynomial(
        basis, {u.scaled(i): 1 for i, bit in enumerate(bits) if bit}
    )
    x = GeneralizedPolynomial.monomial(basis, u)
    one = GeneralizedPolynomial.one(basis)
    den = GeneralizedPolynomial.monomial(basis, u.scaled(k)) + (one - 2 * x) * corr
    return RationalGF(corr, den)


def gf_from_regex(expr: RegexNode, spec: ChannelSpec) -> RationalGF:
    """Translate an unambiguous regex structurally into a quotient."""
    basis = spec.basis
    one = GeneralizedPolynomial.one(basis)

    def walk(node: RegexNode) -> tuple[GeneralizedPolynomial, GeneralizedPolynomial]:
        if isinstance(node, Epsilon):
            return one, one
        if isinstance(node, Symbol):
            return GeneralizedPolynomial.monomial(basis, spec.weight_of(node.name)), one
        if isinstance(node, Union):
            num, den = walk(node.parts[0])
            for part in node.parts[1:]:
                n2, d2 = walk(part)
                num = num * d2 + n2 * den
                den = den * d2
            return num, den
        if isinstance(node, Concat):
            num, den = walk(node.parts[0])
            for part in node.parts[1:]:
                n2, d2 = walk(part)
                num = num * n2
                den = den * d2
            return num, den
        if isinstance(node, Star):
            n2, d2 = walk(node.child)
            if n2.constant_coefficient != 0:
                raise UnsupportedChannelError(
                    "star of an expression that matches the empty string; "
                    "rewrite the regex so the starred part is not nullable"
                )
            return d2, d2 - n2
        raise TypeError(f"not a regex node: {node!r}")

    num, den = walk(expr)
    return RationalGF(num, den)


def build_gf(spec: ChannelSpec) -> RationalGF:
    """Closed-form counting quotient for the spec's constraint kind."""
    constraint = spec.constraint
    if isinstance(constraint, Free):
        return gf_free_monoid(spec)
    if isinstance(constraint, ForbiddenPatterns):
        return gf_pattern_avoidance(spec)
    if isinstance(constraint, Regex):
        return gf_from_regex(constraint.expr, spec)
    raise TypeError(f"not a constraint: {constraint!r}")
