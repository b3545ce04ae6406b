"""Exact arithmetic in Q_p with explicit absolute precision.

An element is stored as ``p^val * unit + O(p^prec)`` where ``unit`` is an
integer unit residue modulo ``p^(prec - val)``.  ``prec`` is the *absolute*
precision exponent: the element is known modulo ``p^prec``.  Precision only
ever shrinks under arithmetic (pessimistic propagation); in particular a
division by ``p^k`` lowers absolute precision by ``k``.

Two flavours of zero exist:

* the exact zero (``val`` is infinite, infinite precision), produced by
  constructors and by exact cancellation bookkeeping such as ``x + (-x)``
  on identical representations;
* an inexact zero ``O(p^N)``: all known digits cancelled, so the element is
  indistinguishable from zero modulo ``p^N``.

Example::

    >>> half = PAdic.from_rational(Fraction(1, 2), 3, 5)
    >>> half.unit_residue()
    122
    >>> (half + half).unit_residue()
    1
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivisionByIndistinguishableZero,
    NotASquare,
    OddPrimeRequired,
    PrecisionInsufficient,
    ZeroArgument,
)

DEFAULT_PRECISION = 20

INF = math.inf


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def vp(x, p: int):
    """p-adic valuation of an int or Fraction; infinity for 0."""
    if x == 0:
        return INF
    if isinstance(x, Fraction):
        return vp(x.numerator, p) - vp(x.denominator, p)
    x = abs(int(x))
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class FieldParams:
    """Local-field bookkeeping: residue size q = p^f and ramification e.

    Concrete arithmetic in this package happens in Q_p (e = f = 1); the
    extension parameters only feed the closed-form bound calculators, which
    require p > e + 1.
    """

    p: int
    e: int = 1
    q: int | None = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e < 1:
            raise ValueError("ramification index e must be >= 1")
        if self.q is None:
            object.__setattr__(self, "q", self.p)
        else:
            q = self.q
            while q % self.p == 0 and q > 1:
                q //= self.p
            if q != 1 or self.q < self.p:
                raise ValueError(f"q = {self.q} is not a power of p = {self.p}")


class PAdic:
    """An element of Q_p known to finite absolute precision."""

    __slots__ = ("p", "_val", "_unit", "_prec")

    def __init__(self, p: int, val, unit: int, prec):
        """Build ``p^val * unit + O(p^prec)``; prefer the classmethods.

        ``val=None`` (with ``unit=0``) builds a zero: exact when ``prec`` is
        None, an inexact ``O(p^prec)`` otherwise.
        """
        if p < 2 or not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        self.p = p
        if val is None or unit == 0:
            self._val = None
            self._unit = 0
            self._prec = None if prec is None else int(prec)
            return
        val = int(val)
        if prec is None:
            prec = val + DEFAULT_PRECISION
        prec = int(prec)
        rel = prec - val
        if rel < 1:
            # fewer than one known digit: the element is a zero at this precision
            self._val = None
            self._unit = 0
            self._prec = prec
            return
        unit %= p ** rel
        if unit == 0:
            self._val = None
            self._unit = 0
            self._prec = prec
            return
        # re-normalize in case `unit` was divisible by p
        shift = 0
        while unit % p == 0:
            unit //= p
            shift += 1
        val += shift
        rel -= shift
        self._val = val
        self._unit = unit % (p ** rel)
        self._prec = prec

    # --- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "PAdic":
        """The exact zero of Q_p."""
        return cls(p, None, 0, None)

    @classmethod
    def inexact_zero(cls, p: int, prec: int) -> "PAdic":
        """O(p^prec): indistinguishable from zero modulo p^prec."""
        return cls(p, None, 0, prec)

    @classmethod
    def from_int(cls, n: int, p: int, prec: int = DEFAULT_PRECISION) -> "PAdic":
        return cls.from_rational(Fraction(n), p, prec)

    @classmethod
    def from_rational(cls, q, p: int, prec: int = DEFAULT_PRECISION) -> "PAdic":
        """Embed a rational exactly, truncated at absolute precision ``prec``."""
        q = Fraction(q)
        if q == 0:
            return cls.zero(p)
        val = vp(q.numerator, p) - vp(q.denominator, p)
        rel = prec - val
        if rel < 1:
            return cls.inexact_zero(p, prec)
        mod = p ** rel
        num = q.numerator // p ** max(0, vp(q.numerator, p))
        den = q.denominator // p ** max(0, vp(q.denominator, p))
        unit = num * pow(den, -1, mod) % mod
        return cls(p, val, unit, prec)

    # --- predicates and accessors ----------------------------------------

    def is_zero(self) -> bool:
        """True for the exact zero and for inexact zeros O(p^N)."""
        return self._val is None

    def is_exact_zero(self) -> bool:
        return self._val is None and self._prec is None

    @property
    def valuation(self):
        """v_p of the element.

        Infinite for the exact zero.  For an inexact zero O(p^N) the true
        valuation is only known to be >= N; the lower bound N is returned.
        """
        if self._val is not None:
            return self._val
        return INF if self._prec is None else self._prec

    @property
    def prec(self):
        """Absolute precision exponent (infinite for the exact zero)."""
        return INF if self._prec is None else self._prec

    @property
    def rel_prec(self):
        return self.prec - self.valuation if self._val is not None else (
            INF if self._prec is None else 0
        )

    def unit_residue(self) -> int:
        """The stored unit, an integer in [1, p^(prec-val)) coprime to p."""
        if self._val is None:
            raise ZeroArgument("a zero has no unit part")
        return self._unit

    def residue(self) -> int:
        """Reduction of the unit part modulo p (in [1, p-1])."""
        return self.unit_residue() % self.p

    def lift(self) -> Fraction:
        """The canonical rational representative p^val * unit."""
        if self._val is None:
            return Fraction(0)
        return Fraction(self.p) ** self._val * self._unit

    def at_precision(self, prec: int) -> "PAdic":
        """Truncate to a lower absolute precision (raising is not allowed)."""
        if prec > self.prec:
            raise PrecisionInsufficient(
                f"cannot raise precision from {self.prec} to {prec}"
            )
        if self._val is None:
            return PAdic.inexact_zero(self.p, prec)
        return PAdic(self.p, self._val, self._unit, prec)

    # --- arithmetic -------------------------------------------------------

    def _check_same_p(self, other: "PAdic"):
        if self.p != other.p:
            raise ValueError(f"mixed primes {self.p} and {other.p}")

    def _coerce(self, other):
        """Coerce an int/Fraction operand at precision matching ``self``."""
        if isinstance(other, PAdic):
            return other
        if isinstance(other, (int, Fraction)):
            if self._val is None:
                target = self._prec if self._prec is not None else DEFAULT_PRECISION
                return PAdic.from_rational(other, self.p, target + 1)
            q = Fraction(other)
            if q == 0:
                return PAdic.zero(self.p)
            v = vp(q, self.p)
            target = max(self._prec, v + self._prec - self._val)
            return PAdic.from_rational(q, self.p, target)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_same_p(other)
        a, b = self, other
        if a.is_exact_zero():
            return b
        if b.is_exact_zero():
            return a
        if a._val is None or b._val is None:
            n = min(a.prec, b.prec)
            x = a if b._val is None else b
            if x._val is None:   # both inexact zeros
                return PAdic.inexact_zero(self.p, int(n))
            return x.at_precision(int(min(n, x.prec)))
        n = min(a._prec, b._prec)
        base = min(a._val, b._val)
        # each prec exceeds its own val, so n - base >= 1 and the sum is integral
        mod = self.p ** (n - base)
        s = (
            a._unit * self.p ** (a._val - base)
            + b._unit * self.p ** (b._val - base)
        ) % mod
        if s == 0:
            return PAdic.inexact_zero(self.p, n)
        v = 0
        while s % self.p == 0:
            s //= self.p
            v += 1
        return PAdic(self.p, base + v, s, n)

    __radd__ = __add__

    def __neg__(self):
        if self._val is None:
            return self
        return PAdic(self.p, self._val, -self._unit, self._prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_same_p(other)
        a, b = self, other
        if a.is_exact_zero() or b.is_exact_zero():
            return PAdic.zero(self.p)
        if a._val is None or b._val is None:
            # O(p^N) * (p^v u + O(..)) = O(p^(N+v));  O(p^N)*O(p^M) = O(p^(N+M))
            va = a._val if a._val is not None else a._prec
            vb = b._val if b._val is not None else b._prec
            return PAdic.inexact_zero(self.p, va + vb)
        rel = min(a._prec - a._val, b._prec - b._val)
        val = a._val + b._val
        unit = a._unit * b._unit % (self.p ** rel)
        return PAdic(self.p, val, unit, val + rel)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_same_p(other)
        if other.is_zero():
            raise DivisionByIndistinguishableZero(
                f"divisor is zero to precision O({self.p}^{other.prec})"
            )
        if self.is_exact_zero():
            return self
        if self._val is None:
            return PAdic.inexact_zero(self.p, self._prec - other._val)
        rel = min(self.rel_prec, other.rel_prec)
        val = self._val - other._val
        mod = self.p ** rel
        unit = self._unit * pow(other._unit, -1, mod) % mod
        return PAdic(self.p, val, unit, val + rel)

    def __rtruediv__(self, other):
        num = self._coerce(other)
        if num is NotImplemented:
            return NotImplemented
        return num / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return PAdic.from_int(1, self.p, int(self.prec) if self._prec is not None else DEFAULT_PRECISION)
        base = self if k > 0 else PAdic.from_int(1, self.p, DEFAULT_PRECISION) / self
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    # --- comparison helpers ----------------------------------------------

    def agrees(self, other) -> bool:
        """True when self - other is zero at the propagated precision."""
        other = self._coerce(other)
        return (self - other).is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.agrees(other)
        if not isinstance(other, PAdic):
            return NotImplemented
        return (
            self.p == other.p
            and self._val == other._val
            and self._unit == other._unit
            and self._prec == other._prec
        )

    def __hash__(self):
        return hash((self.p, self._val, self._unit, self._prec))

    def __repr__(self):
        if self.is_exact_zero():
            return f"PAdic(0; p={self.p})"
        if self._val is None:
            return f"PAdic(O({self.p}^{self._prec}))"
        return f"PAdic({self._unit}*{self.p}^{self._val} + O({self.p}^{self._prec}))"

    # --- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        """Interchange form with decimal-string fields."""
        if self.is_exact_zero():
            return {"val": "inf", "unit": "0", "prec": "inf"}
        if self._val is None:
            return {"val": None, "unit": "0", "prec": str(self._prec)}
        return {
            "val": str(self._val),
            "unit": str(self._unit),
            "prec": str(self._prec),
        }

    @classmethod
    def from_json(cls, obj: dict, p: int) -> "PAdic":
        if obj.get("val") == "inf":
            return cls.zero(p)
        prec = int(obj["prec"])
        if obj.get("val") is None or int(obj.get("unit", "0")) == 0:
            return cls.inexact_zero(p, prec)
        return cls(p, int(obj["val"]), int(obj["unit"]), prec)


# ---------------------------------------------------------------------------
# unit-level routines
# ---------------------------------------------------------------------------


def _sqrt_mod_p(a: int, p: int) -> int:
    """Tonelli-Shanks; assumes a is a nonzero quadratic residue mod p."""
    a %= p
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def is_square(x: PAdic) -> bool:
    """Whether x is a square in Q_p (precision-aware; p=2 uses the mod-8 test)."""
    if x.is_zero():
        raise ZeroArgument("squareness of a (possibly inexact) zero is undecidable")
    if x.valuation % 2 != 0:
        return False
    u = x.unit_residue()
    if x.p == 2:
        if x.rel_prec < 3:
            raise PrecisionInsufficient("need the unit mod 8 to decide squareness")
        return u % 8 == 1
    return pow(u, (x.p - 1) // 2, x.p) == 1


def sqrt(x: PAdic) -> PAdic:
    """Hensel square root in Q_p, p odd.

    Of the two roots, returns the one whose unit residue modulo p lies in
    {1, ..., (p-1)/2}.  Raises NotASquare on odd valuation or a unit that is
    not a quadratic residue.
    """
    if x.p == 2:
        raise OddPrimeRequired("square roots are implemented for odd p only")
    if x.is_zero():
        if x.is_exact_zero():
            return x
        raise ZeroArgument("cannot take sqrt of an inexact zero")
    if x.valuation % 2 != 0:
        raise NotASquare(f"valuation {x.valuation} is odd")
    p = x.p
    u = x.unit_residue()
    if pow(u, (p - 1) // 2, p) != 1:
        raise NotASquare(f"unit residue {u % p} is not a square mod {p}")
    rel = int(x.rel_prec)
    r = _sqrt_mod_p(u, p)
    known = 1
    while known < rel:
        known = min(2 * known, rel)
        mod = p ** known
        r = (r + u * pow(r, -1, mod)) * pow(2, -1, mod) % mod
    if r % p > (p - 1) // 2:
        r = p ** rel - r
    val = x.valuation // 2
    return PAdic(p, val, r, val + rel)


def teichmuller_decompose(x: PAdic):
    """Split x = p^m * zeta * u with zeta a Teichmueller root of unity, u = 1 mod p.

    Returns ``(m, zeta_residue, u)`` where ``zeta_residue`` is an integer mod p
    (for p = 2 it is the sign representative mod 4, i.e. 1 or 3, and u = 1 mod 4).
    """
    if x.is_zero():
        raise ZeroArgument("zero has no Teichmueller decomposition")
    p = x.p
    m = int(x.valuation)
    rel = int(x.rel_prec)
    mod = p ** rel
    u0 = x.unit_residue()
    if p == 2:
        if rel == 1:
            return m, 1, PAdic(2, 0, 1, 1)
        if u0 % 4 == 1:
            return m, 1, PAdic(2, 0, u0, rel)
        return m, 3, PAdic(2, 0, -u0, rel)
    zeta = u0 % mod
    for _ in range(rel + 1):
        nxt = pow(zeta, p, mod)
        if nxt == zeta:
            break
        zeta = nxt
    u = u0 * pow(zeta, -1, mod) % mod
    return m, zeta % p, PAdic(p, 0, u, rel)


def teichmuller_lift(residue: int, p: int, rel_prec: int) -> PAdic:
    """The (p-1)-st root of unity congruent to ``residue`` mod p."""
    if residue % p == 0:
        raise ZeroArgument("no Teichmueller lift of residue 0")
    mod = p ** rel_prec
    zeta = residue % mod
    for _ in range(rel_prec + 1):
        nxt = pow(zeta, p, mod)
        if nxt == zeta:
            break
        zeta = nxt
    return PAdic(p, 0, zeta, rel_prec)


def log0(x: PAdic) -> PAdic:
    """The logarithm branch with Log(p) = 0.

    Strips p-powers and the Teichmueller part (both killed by this branch)
    and sums log(u) = sum (-1)^(n+1) (u-1)^n / n for the 1-unit part.  In
    particular every root of unity, and every power of p, maps to zero.
    """
    if x.is_zero():
        raise ZeroArgument("Log0 is undefined at zero")
    p = x.p
    _, _, u = teichmuller_decompose(x)
    one = PAdic.from_int(1, p, int(u.prec))
    z = u - one
    if z.is_zero():
        # u = 1 to working precision; the log is zero to (at least) that precision
        return PAdic.inexact_zero(p, int(z.prec))
    total = PAdic.zero(p)
    zn = z
    n = 1
    c = int(z.valuation)
    while True:
        term = zn / PAdic.from_rational(n, p, int(zn.prec) + 4)
        total = total + (term if n % 2 == 1 else -term)
        n += 1
        zn = zn * z
        # terms have valuation >= n*c - v_p(n); stop once provably below precision
        if n * c - (math.floor(math.log(n, p)) + 1) > total.prec:
            break
    return total
