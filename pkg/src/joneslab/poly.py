"""Exact Laurent polynomials in A with integer coefficients.

Values are immutable.  Coefficients are Python ints, so nothing overflows
when cable brackets get large.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Tuple


class NotDivisible(ArithmeticError):
    """Raised by exact_div when the remainder is nonzero."""


def _clean(terms: Dict[int, int]) -> Dict[int, int]:
    return {e: c for e, c in terms.items() if c}


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Dict[int, int]] = None):
        self._terms = _clean(dict(terms)) if terms else {}
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, terms: Dict[int, int]) -> "LaurentPoly":
        # trusted path: caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, int]]) -> "LaurentPoly":
        acc: Dict[int, int] = {}
        for e, c in pairs:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        return cls(acc)

    # basic access
    @property
    def terms(self) -> Dict[int, int]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(sorted(self._terms.items(), reverse=True))

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def max_deg(self) -> Optional[int]:
        return max(self._terms) if self._terms else None

    def min_deg(self) -> Optional[int]:
        return min(self._terms) if self._terms else None

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # arithmetic
    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            v = acc.get(e, 0) + c
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return LaurentPoly._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        acc: Dict[int, int] = {}
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                k = e1 + e2
                acc[k] = acc.get(k, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            # only monomials have Laurent inverses
            if len(self._terms) != 1:
                raise NotDivisible("negative power of a non-monomial")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise NotDivisible("negative power of a non-unit monomial")
            return LaurentPoly({e * k: c ** (-k)})
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by A^k."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def substitute_inverse(self) -> "LaurentPoly":
        """A -> A^-1."""
        return LaurentPoly._raw({-e: c for e, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    def __str__(self):
        return render(self, "A")

    def to_json(self) -> List[List[int]]:
        return [[e, c] for e, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls.from_pairs((int(e), int(c)) for e, c in data)


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
A = LaurentPoly.monomial(1)
DELTA = LaurentPoly({2: -1, -2: -1})


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def max_deg(p: LaurentPoly) -> Optional[int]:
    return p.max_deg()


def delta_power(k: int) -> LaurentPoly:
    return DELTA ** k


def exact_div(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return r with r*q == p, or raise NotDivisible."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    qt = q._terms
    qhi = max(qt)
    qlo = min(qt)
    lead = qt[qhi]
    rem = dict(p._terms)
    out: Dict[int, int] = {}
    while rem:
        top = max(rem)
        if top - qhi < min(rem) - qlo:
            raise NotDivisible(f"remainder nonzero dividing {p} by {q}")
        c, r = divmod(rem[top], lead)
        if r:
            raise NotDivisible(f"non-integral quotient dividing {p} by {q}")
        shift = top - qhi
        out[shift] = c
        for e, qc in qt.items():
            k = e + shift
            v = rem.get(k, 0) - c * qc
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return LaurentPoly(out)


class QSeriesView:
    """A polynomial in q stored with exponents in quarter units.

    ``terms[k]`` is the coefficient of q^(k/4).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[int, int]] = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def coeff(self, qexp) -> int:
        k = Fraction(qexp) * 4
        if k.denominator != 1:
            return 0
        return self.terms.get(int(k), 0)

    def min_deg(self) -> Optional[Fraction]:
        return Fraction(min(self.terms), 4) if self.terms else None

    def max_deg(self) -> Optional[Fraction]:
        return Fraction(max(self.terms), 4) if self.terms else None

    def is_integral(self) -> bool:
        return all(k % 4 == 0 for k in self.terms)

    def coefficients_from_bottom(self, count: int) -> List[int]:
        """The first ``count`` coefficients starting at the minimum degree, step 1 in q."""
        lo = min(self.terms) if self.terms else 0
        return [self.terms.get(lo + 4 * i, 0) for i in range(count)]

    def __eq__(self, other):
        if isinstance(other, int):
            other = QSeriesView({0: other} if other else {})
        if not isinstance(other, QSeriesView):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        return f"QSeriesView({str(self)!r})"

    def __str__(self):
        return render_q(self)

    def to_json(self):
        # exponents as strings so quarter values survive JSON
        return [[_qexp_text(k), c] for k, c in sorted(self.terms.items())]


def to_q(p: LaurentPoly) -> QSeriesView:
    """Substitute q = A^-4: A^e becomes q^(-e/4)."""
    return QSeriesView({-e: c for e, c in p._terms.items()})


def _qexp_text(k: int) -> str:
    f = Fraction(k, 4)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _render_terms(pairs, var: str, exp_text) -> str:
    if not pairs:
        return "0"
    out = []
    for i, (e, c) in enumerate(pairs):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            et = exp_text(e)
            mono = var if et == "1" else f"{var}^{et}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if i == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def render(p: LaurentPoly, var: str = "A") -> str:
    return _render_terms(list(p.items()), var, str)


def render_q(v: QSeriesView) -> str:
    pairs = sorted(v.terms.items())
    def et(k):
        t = _qexp_text(k)
        return "{" + t + "}" if "/" in t else t

    return _render_terms(pairs, "q", et)


def parse_poly(text: str, var: str = "A") -> LaurentPoly:
    """Parse the output of ``render`` back into a polynomial."""
    import re

    s = text.replace(" ", "")
    if s in ("", "0"):
        return ZERO
    tok = re.compile(rf"([+-]?)(\d+)?\*?({var}(?:\^(-?\d+))?)?")
    acc: Dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = tok.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, mag, mono, exp = m.groups()
        if mag is None and mono is None:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        c = int(mag) if mag else 1
        if sign == "-":
            c = -c
        e = 0 if mono is None else (int(exp) if exp else 1)
        acc[e] = acc.get(e, 0) + c
        pos = m.end()
    return LaurentPoly(acc)
