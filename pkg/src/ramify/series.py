"""Truncated Laurent series over a finite field, with precision accounting.

A series is either *exact* (finitely supported, no truncation error) or
*approximate*: its coefficients are known for every exponent strictly below
``abs_prec`` and nothing is asserted from ``abs_prec`` on.  In both cases the
support is contained in ``[v0, oo)``.  Every operation derives the best
absolute precision it can honestly guarantee for its result; nothing is ever
rounded, so equal windows mean equal coefficients.

The working default is 64 known terms; operations that need a nonzero
coefficient escalate geometrically up to a cap (4096, overridable through
the RAMIFY_PRECISION_CAP environment variable) before giving up.
"""

from __future__ import annotations

import os
from typing import Sequence

from .errors import (
    CompositionUndefined,
    FieldMismatch,
    NotSimpleRoot,
    PrecisionExhausted,
    ZeroElement,
)
from .fields import FieldElement, FiniteField

DEFAULT_PRECISION = 64
DEFAULT_PRECISION_CAP = 4096


def precision_cap() -> int:
    """Hard ceiling for automatic precision escalation."""
    raw = os.environ.get("RAMIFY_PRECISION_CAP")
    if raw is None:
        return DEFAULT_PRECISION_CAP
    try:
        val = int(raw)
    except ValueError:
        return DEFAULT_PRECISION_CAP
    return max(val, 1)


class LaurentSeries:
    __slots__ = ("field", "v0", "coeffs", "abs_prec")

    def __init__(self, field: FiniteField, v0: int, coeffs, abs_prec: int | None):
        """Normalize and store; prefer the factory classmethods."""
        coeffs = list(coeffs)
        if abs_prec is not None:
            want = abs_prec - v0
            if want <= 0:
                coeffs = []
            elif len(coeffs) != want:
                if len(coeffs) > want:
                    coeffs = coeffs[:want]
                else:
                    raise ValueError("window shorter than declared precision")
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            v0 += 1
        if abs_prec is None:
            while coeffs and not coeffs[-1]:
                coeffs.pop()
            if not coeffs:
                v0 = 0
        else:
            if not coeffs:
                v0 = abs_prec
        self.field = field
        self.v0 = v0
        self.coeffs = tuple(coeffs)
        self.abs_prec = abs_prec

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_terms(
        cls,
        field: FiniteField,
        terms: dict[int, FieldElement],
        abs_prec: int | None = None,
    ) -> "LaurentSeries":
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            if abs_prec is None:
                return cls(field, 0, [], None)
            return cls(field, abs_prec, [], abs_prec)
        lo = min(terms)
        hi = max(terms) + 1 if abs_prec is None else abs_prec
        window = [terms.get(e, field.zero()) for e in range(lo, hi)]
        return cls(field, lo, window, abs_prec)

    @classmethod
    def monomial(cls, field: FiniteField, coeff: FieldElement, exp: int) -> "LaurentSeries":
        return cls.from_terms(field, {exp: coeff})

    @classmethod
    def zero(cls, field: FiniteField) -> "LaurentSeries":
        return cls(field, 0, [], None)

    @classmethod
    def one(cls, field: FiniteField) -> "LaurentSeries":
        return cls.monomial(field, field.one(), 0)

    @classmethod
    def uniformizer(cls, field: FiniteField) -> "LaurentSeries":
        return cls.monomial(field, field.one(), 1)

    @classmethod
    def constant(cls, field: FiniteField, c: FieldElement) -> "LaurentSeries":
        return cls.from_terms(field, {0: c})

    @classmethod
    def from_sparse(
        cls, field: FiniteField, pairs: Sequence, abs_prec: int | None = None
    ) -> "LaurentSeries":
        """Build from [[exponent, coordinate-vector], ...] (the CLI encoding)."""
        terms: dict[int, FieldElement] = {}
        for exp, coords in pairs:
            terms[int(exp)] = field.from_coeffs(coords)
        return cls.from_terms(field, terms, abs_prec)

    # -- predicates -------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.abs_prec is None

    def is_zero_known(self) -> bool:
        """No known nonzero coefficient (true for the exact zero too)."""
        return not self.coeffs

    def is_exact_zero(self) -> bool:
        return self.abs_prec is None and not self.coeffs

    def known_rel_prec(self) -> int | None:
        if self.abs_prec is None:
            return None
        return self.abs_prec - self.v0

    # -- inspection ---------------------------------------------------------------

    def valuation(self) -> int:
        if self.coeffs:
            return self.v0
        if self.is_exact:
            raise ZeroElement("valuation of the exact zero series")
        raise PrecisionExhausted(
            f"series is zero to O(t^{self.abs_prec}); valuation unknown"
        )

    def coeff(self, e: int) -> FieldElement:
        if self.abs_prec is not None and e >= self.abs_prec:
            raise PrecisionExhausted(f"coefficient of t^{e} beyond O(t^{self.abs_prec})")
        return self._known(e)

    def _known(self, e: int) -> FieldElement:
        idx = e - self.v0
        if 0 <= idx < len(self.coeffs):
            return self.coeffs[idx]
        return self.field.zero()

    def support(self) -> list[tuple[int, FieldElement]]:
        return [
            (self.v0 + i, c) for i, c in enumerate(self.coeffs) if c
        ]

    def __repr__(self) -> str:
        body = " + ".join(f"{c.key()}*t^{e}" for e, c in self.support()) or "0"
        tail = "" if self.is_exact else f" + O(t^{self.abs_prec})"
        return f"<{body}{tail}>"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentSeries)
            and self.field == other.field
            and self.v0 == other.v0
            and self.coeffs == other.coeffs
            and self.abs_prec == other.abs_prec
        )

    def __hash__(self) -> int:
        return hash((self.field, self.v0, self.coeffs, self.abs_prec))

    def _check(self, other: "LaurentSeries") -> None:
        if self.field != other.field:
            raise FieldMismatch("series over different fields")

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        if self.is_exact and other.is_exact:
            terms = dict(self.support())
            for e, c in other.support():
                s = terms.get(e, self.field.zero()) + c
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
            return LaurentSeries.from_terms(self.field, terms)
        ap = min(x.abs_prec for x in (self, other) if x.abs_prec is not None)
        lo = min(self.v0, other.v0, ap)
        window = [self._known(e) + other._known(e) for e in range(lo, ap)]
        return LaurentSeries(self.field, lo, window, ap)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(
            self.field, self.v0, [-c for c in self.coeffs], self.abs_prec
        )

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, c: FieldElement) -> "LaurentSeries":
        if not c:
            if self.is_exact:
                return LaurentSeries.zero(self.field)
            return LaurentSeries(self.field, self.abs_prec, [], self.abs_prec)
        return LaurentSeries(
            self.field, self.v0, [c * x for x in self.coeffs], self.abs_prec
        )

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^k."""
        ap = None if self.abs_prec is None else self.abs_prec + k
        return LaurentSeries(self.field, self.v0 + k, list(self.coeffs), ap)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return LaurentSeries.zero(self.field)
        if self.is_exact and other.is_exact:
            terms: dict[int, FieldElement] = {}
            for e1, c1 in self.support():
                for e2, c2 in other.support():
                    e = e1 + e2
                    s = terms.get(e, self.field.zero()) + c1 * c2
                    if s:
                        terms[e] = s
                    else:
                        terms.pop(e, None)
            return LaurentSeries.from_terms(self.field, terms)
        caps = []
        if self.abs_prec is not None:
            caps.append(self.abs_prec + other.v0)
        if other.abs_prec is not None:
            caps.append(other.abs_prec + self.v0)
        ap = min(caps)
        lo = self.v0 + other.v0
        size = ap - lo
        if size <= 0:
            return LaurentSeries(self.field, ap, [], ap)
        window = [self.field.zero()] * size
        for i, c1 in enumerate(self.coeffs):
            if not c1:
                continue
            e1 = self.v0 + i
            jmax = min(len(other.coeffs), ap - e1 - other.v0)
            for j in range(jmax):
                c2 = other.coeffs[j]
                if c2:
                    window[e1 + other.v0 + j - lo] = (
                        window[e1 + other.v0 + j - lo] + c1 * c2
                    )
        return LaurentSeries(self.field, lo, window, ap)

    def __pow__(self, k: int) -> "LaurentSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentSeries.one(self.field)
        acc = self
        while k:
            if k & 1:
                result = result * acc
            acc = acc * acc
            k >>= 1
        return result

    def truncate(self, ap: int) -> "LaurentSeries":
        """Forget everything from exponent ap on."""
        if self.abs_prec is not None and self.abs_prec <= ap:
            return self
        lo = min(self.v0, ap)
        window = [self._known(e) for e in range(lo, ap)]
        return LaurentSeries(self.field, lo, window, ap)

    def inverse(self, prec: int | None = None) -> "LaurentSeries":
        """Multiplicative inverse.

        For approximate input the full known relative precision is used (a
        smaller ``prec`` may be requested).  Exact input needs a target
        relative precision, except for monomials which invert exactly.
        """
        if self.is_exact_zero():
            raise ZeroElement("inverse of the exact zero series")
        if self.is_zero_known():
            raise PrecisionExhausted(
                f"cannot invert a series that is zero to O(t^{self.abs_prec})"
            )
        v = self.v0
        c0 = self.coeffs[0]
        if self.is_exact and len(self.support()) == 1:
            return LaurentSeries.monomial(self.field, c0.inverse(), -v)
        if self.abs_prec is not None:
            rel = self.abs_prec - v
            if prec is not None:
                rel = min(rel, prec)
        else:
            rel = prec if prec is not None else DEFAULT_PRECISION
        inv0 = c0.inverse()
        zero = self.field.zero()
        u = [self._known(v + i) for i in range(rel)]
        w = [zero] * rel
        w[0] = inv0
        for j in range(1, rel):
            s = zero
            for i in range(1, j + 1):
                if u[i] and w[j - i]:
                    s = s + u[i] * w[j - i]
            w[j] = -(inv0 * s)
        return LaurentSeries(self.field, -v, w, -v + rel)


def compose(f: LaurentSeries, g: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """Substitution f(g(t)).

    Requires v(g) >= 1.  When f has a pole, g is inverted (allowed since
    v(g) >= 1 makes it a unit times a positive power).  The result carries
    the precision the arithmetic can actually guarantee, including the
    truncation term O(g^{abs_prec(f)}) when f is approximate.
    """
    f._check(g)
    field = f.field
    if g.is_exact_zero():
        if f.is_exact and f.v0 >= 0:
            return LaurentSeries.constant(field, f._known(0))
        raise CompositionUndefined("cannot substitute the zero series into a pole")
    w = g.valuation()
    if w < 1:
        raise CompositionUndefined(f"substitution target has valuation {w} < 1")

    if f.is_zero_known():
        if f.is_exact:
            return LaurentSeries.zero(field)
        return LaurentSeries(field, f.abs_prec * w, [], f.abs_prec * w)

    top = f.v0 + len(f.coeffs) - 1
    # Polynomial part: Horner over exponents top .. 0.
    poly_val = None
    if top >= 0:
        acc = LaurentSeries.zero(field)
        for e in range(top, -1, -1):
            acc = acc * g + LaurentSeries.constant(field, f._known(e))
        poly_val = acc
    # Pole part: Horner in h = g^{-1} over exponents -1 .. v0.
    pole_val = None
    if f.v0 < 0:
        h = g.inverse(prec=prec)
        acc = LaurentSeries.zero(field)
        for k in range(-f.v0, 0, -1):
            acc = (acc + LaurentSeries.constant(field, f._known(-k))) * h
        pole_val = acc
    if poly_val is None:
        result = pole_val
    elif pole_val is None:
        result = poly_val
    else:
        result = poly_val + pole_val
    if f.abs_prec is not None:
        result = result.truncate(f.abs_prec * w)
    return result


def _evaluate_poly(coeffs: Sequence[LaurentSeries], x: LaurentSeries) -> LaurentSeries:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def hensel_lift_root(
    coeffs: Sequence[LaurentSeries], x0: LaurentSeries, target_prec: int
) -> LaurentSeries:
    """Newton-lift a simple root of P(x) = sum coeffs[k] * x^k from seed x0.

    Requires P(x0) ~ 0 (valuation >= 1, or zero to the seed's precision)
    and P'(x0) a unit; convergence is then quadratic.  The result agrees
    with x0 and satisfies P(x) = 0 to O(t^target_prec).
    """
    if len(coeffs) < 2:
        raise ValueError("polynomial must have degree >= 1")
    field = x0.field
    for c in coeffs:
        if c.field != field:
            raise FieldMismatch("polynomial coefficients over a different field")
    deriv = [
        c.scale(field.from_int(k)) for k, c in enumerate(coeffs) if k >= 1
    ]
    p0 = _evaluate_poly(coeffs, x0)
    d0 = _evaluate_poly(deriv, x0)
    if d0.is_zero_known() or d0.valuation() != 0:
        raise NotSimpleRoot("derivative at the seed is not a unit")
    if not p0.is_zero_known() and p0.valuation() < 1:
        raise NotSimpleRoot("seed is not an approximate root")

    x = x0
    for _ in range(80):
        p = _evaluate_poly(coeffs, x)
        if p.is_exact_zero():
            return x
        if p.is_zero_known() and p.abs_prec >= target_prec:
            return x
        d = _evaluate_poly(deriv, x)
        corr = p * d.inverse(prec=target_prec + 2)
        if corr.is_zero_known() and corr.abs_prec is not None and corr.abs_prec >= target_prec:
            return x.truncate(target_prec)
        x = (x - corr).truncate(target_prec)
    raise PrecisionExhausted("Newton iteration did not converge")


def nth_root_of_unit(u: LaurentSeries, b: int, field_char: int) -> LaurentSeries:
    """b-th root of a unit series with constant term 1, for gcd(b, p) = 1."""
    field = u.field
    if b % field_char == 0:
        raise ValueError("root degree divisible by the characteristic")
    if u.is_zero_known() or u.valuation() != 0 or u.coeffs[0] != field.one():
        raise ValueError("expected a unit series with constant term 1")
    b_inv = field.from_int(b).inverse()
    x = LaurentSeries.one(field)
    for _ in range(80):
        err = x ** b - u
        if err.is_zero_known():
            return x
        corr = (err * (x ** (b - 1)).inverse()).scale(b_inv)
        x = x - corr
    raise PrecisionExhausted("root iteration did not converge")
