"""Colored Jones polynomials via cabling, degree bounds and tail coefficients.

Color m uses the Chebyshev combination S_{m-1} of cables.  The reduced
invariant is normalised so that the unknot has value 1 for every color and
color 2 is the Jones polynomial with q = A^-4.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional

from .bracket import DEFAULT_FRONTIER_CAP, DEFAULT_NAIVE_LIMIT, bracket
from .diagram import Diagram, cable, writhe
from .poly import DELTA, LaurentPoly, ONE, QSeriesView, exact_div, to_q
from .states import is_A_adequate, sA


class StabilityViolation(AssertionError):
    pass


class DegreeMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class ChebyshevExpansion:
    n: int
    coeffs: Dict[int, int]


@lru_cache(maxsize=None)
def _cheb(n: int):
    if n == 0:
        return {0: 1}
    if n == 1:
        return {1: 1}
    a, b = _cheb(n - 1), _cheb(n - 2)
    out = {k + 1: v for k, v in a.items()}
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def chebyshev(n: int) -> ChebyshevExpansion:
    if n < 0:
        raise ValueError("n must be >= 0")
    return ChebyshevExpansion(n, dict(_cheb(n)))


@dataclass
class Settings:
    engine: str = "fast"
    naive_limit: int = DEFAULT_NAIVE_LIMIT
    frontier_cap: int = DEFAULT_FRONTIER_CAP


_cache: Dict[tuple, LaurentPoly] = {}


def cable_bracket_unreduced(D: Diagram, k: int, settings: Settings = None) -> LaurentPoly:
    """delta * <D^k>; the empty cable D^0 has value 1."""
    if k == 0:
        return ONE
    st = settings or Settings()
    key = (D, k, st.engine)
    if key not in _cache:
        _cache[key] = bracket(cable(D, k), st.engine, st.naive_limit, st.frontier_cap) * DELTA
    return _cache[key]


def bracket_S(D: Diagram, n: int, settings: Settings = None) -> LaurentPoly:
    """delta * <S_n(D)>, always a Laurent polynomial.

    <S_n(D)> itself carries delta^-1 from the empty cable when n is even, so
    the cleared form is what gets stored and divided later.
    """
    total = LaurentPoly()
    for k, ck in chebyshev(n).coeffs.items():
        total = total + cable_bracket_unreduced(D, k, settings) * ck
    return total


def max_deg_S(D: Diagram, n: int, settings: Settings = None) -> Optional[int]:
    """Top A-degree of <S_n(D)> expanded in powers of A^-1."""
    top = bracket_S(D, n, settings).max_deg()
    return None if top is None else top - 2


def colored_jones_A(D: Diagram, m: int, settings: Settings = None) -> LaurentPoly:
    """G_D(m, A), the reduced m-colored Jones polynomial in the variable A."""
    if m < 1:
        raise ValueError("color must be >= 1")
    if m == 1:
        return ONE
    if m > 2 and not D.is_knot():
        # a uniform cable colors every component by the same S_n(D), which is
        # not the colored invariant of a link (that needs S_n per component)
        raise ValueError("colors above 2 are implemented for knots only")
    n = m - 1
    w = writhe(D)
    S = bracket_S(D, n, settings)
    # (A^4 - A^-4) <S_n> = -(A^2 - A^-2) * (delta <S_n>)
    num = LaurentPoly({2: -1, -2: 1}) * S
    den = LaurentPoly({2 * n + 2: 1, -2 * n - 2: -1})
    q = exact_div(num, den)
    # framing factor ((-1)^n A^(n^2+2n))^(-w) and sign (-1)^(n-1)
    sign = (-1) ** ((n * w) % 2) * (-1) ** ((n - 1) % 2)
    return q * LaurentPoly.monomial(-(n * n + 2 * n) * w, sign)


def colored_jones(D: Diagram, m: int, settings: Settings = None) -> QSeriesView:
    return to_q(colored_jones_A(D, m, settings))


def M_of(D: Diagram) -> int:
    """c(D) + 2|s_A(D)| - 2."""
    return D.c + 2 * sA(D) - 2


def M_cable(D: Diagram, n: int) -> int:
    """M(D^n) from n^2 c(D) + 2n|s_A(D)| - 2; M(D^0) is taken as 0 - 2 = -2."""
    return n * n * D.c + 2 * n * sA(D) - 2


def h_n(D: Diagram, m: int) -> Fraction:
    """Diagrammatic lower bound for the minimum q-degree of color m."""
    n = m - 1
    w = writhe(D)
    return -Fraction(M_cable(D, n) + 4 - 2 * m - w * (n * n + 2 * n), 4)


def d_from_bracket(D: Diagram, m: int, dA_star: int) -> Fraction:
    n = m - 1
    w = writhe(D)
    return -Fraction(dA_star + 4 - 2 * m - w * (n * n + 2 * n), 4)


@dataclass
class DegreeReport:
    n: int
    dA_star: Optional[int]
    d_n: Optional[Fraction]
    h_n: Fraction
    M_Dn: int
    adequate: bool

    def to_json(self) -> dict:
        d = asdict(self)
        for k in ("d_n", "h_n"):
            if d[k] is not None:
                d[k] = str(d[k])
        return d


def degree_report(D: Diagram, m: int, settings: Settings = None) -> DegreeReport:
    dA = max_deg_S(D, m - 1, settings)
    J = colored_jones(D, m, settings)
    d = J.min_deg()
    if dA is not None and d != d_from_bracket(D, m, dA):
        raise DegreeMismatch(f"min q-degree {d} disagrees with bracket degree formula")
    return DegreeReport(m, dA, d, h_n(D, m), M_cable(D, m - 1), is_A_adequate(D)[0])


@dataclass
class TailReport:
    betas: List[int]
    stabilized_up_to: int
    adequate: bool
    per_color: Dict[int, List[int]] = field(default_factory=dict)
    intro_betas: Dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "betas": self.betas,
            "stabilized_up_to": self.stabilized_up_to,
            "adequate": self.adequate,
            "per_color": {str(k): v for k, v in self.per_color.items()},
            "intro_betas": {str(k): v for k, v in self.intro_betas.items()},
        }


def tail_sign(D: Diagram, m: int) -> int:
    """Sign of the q^(h_m) coefficient of J(m) when D is A-adequate.

    The top bracket coefficient of an adequate cable is (-1)^|s_A(D^n)|; with
    the framing and normalising signs this gives (-1)^((m-1)(chi_A + 1)).
    """
    return -1 if (m - 1) * (chi_A(D) + 1) % 2 else 1


def coefficients_above_h(D: Diagram, m: int, count: int, settings: Settings = None,
                         signed: bool = False) -> List[int]:
    """Coefficients of q^(h_m + j), j = 0..count-1, in J(m).

    With ``signed`` they are multiplied by tail_sign(D, m), which makes them
    comparable across colors.
    """
    J = colored_jones(D, m, settings)
    h = h_n(D, m)
    eps = tail_sign(D, m) if signed else 1
    return [eps * J.coeff(h + j) for j in range(count)]


def tail(D: Diagram, count: int, max_color: Optional[int] = None,
         settings: Settings = None) -> TailReport:
    """Stable coefficients beta_1..beta_count.

    beta_i is the coefficient of q^(h_{i+2} + i - 1) in J(i+2), times
    tail_sign(D, i+2) (which is +1 for beta_1).  Every other computed color n
    that should carry beta_i (i <= n-1 for A-adequate diagrams, i <= n-2
    otherwise) is read too, with its own sign, and must agree.
    """
    if max_color is None:
        max_color = count + 2
    if max_color < count + 2:
        raise ValueError("max_color must be at least count + 2")
    adequate = is_A_adequate(D)[0]
    per_color = {m: coefficients_above_h(D, m, m - 1, settings, signed=True) for m in range(2, max_color + 1)}
    betas = [per_color[i + 2][i - 1] for i in range(1, count + 1)]
    stable = 0
    for i in range(1, max_color):
        lo = i + 1 if adequate else i + 2
        reads = {per_color[m][i - 1] for m in range(lo, max_color + 1)}
        if len(reads) > 1:
            if adequate:
                raise StabilityViolation(f"beta_{i} differs across colors: {sorted(reads)}")
            break
        if not reads:
            break
        stable = i
    intro = {}
    for i in range(2, max_color + 1):
        J = colored_jones(D, i, settings)
        intro[i] = J.coeff(J.min_deg() + i - 2)
    return TailReport(betas, stable, adequate, per_color, intro)


def tail_series(report: TailReport) -> Dict[int, int]:
    """J^A_D(q) truncated: {power: beta_(power+1)}."""
    return {i: b for i, b in enumerate(report.betas) if b}


def chi_A(D: Diagram) -> int:
    return sA(D) - D.c
