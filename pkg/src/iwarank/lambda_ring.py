"""Exact arithmetic in the Iwasawa algebra Z_p[[X]], restricted to
integer-coefficient polynomials.

Everything a finite-level computation touches lives in some quotient
Lambda/(omega_n), and integer polynomials represent every class there
exactly.  Keeping coefficients in Z (instead of truncated p-adics) is
what makes ranks and resultants exact; reduction mod p^N happens only
inside the finite-quotient machinery of zp_modules.

The signed products split omega_n = (1+X)^{p^n} - 1 into its cyclotomic
factors Phi_m by parity of m:

    omega_n^+ = X * prod_{2 <= m <= n, m even} Phi_m
    omega_n^- = X * prod_{1 <= m <= n, m odd } Phi_m

with omega-tilde the same products without the leading X, and the
conventions omega_0^{+/-} = X, tilde_0^{+/-} = 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd

from .errors import InvalidContext, ZeroElement

# Largest p^n for which omega_n / Phi_n are built as explicit coefficient
# vectors.  Above this the binomials alone run to megabytes; degree
# bookkeeping (signed_degree below) covers the large-level needs.
MAX_EXPLICIT_LENGTH = 20_000


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def vp(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ZeroElement("valuation of 0 is infinite")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class PrimeContext:
    """Computation context: the odd prime p, the working precision N
    (finite quotients are computed over Z/p^N), and the stability margin
    (every length is recomputed at N + margin and must agree)."""

    p: int
    precision: int = 40
    margin: int = 8

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise InvalidContext(f"p must be an odd prime, got {self.p}")
        if self.precision < 1:
            raise InvalidContext(f"precision must be >= 1, got {self.precision}")
        if self.margin < 1:
            raise InvalidContext(f"margin must be >= 1, got {self.margin}")

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    @property
    def high_precision(self) -> int:
        return self.precision + self.margin

    @property
    def high_modulus(self) -> int:
        return self.p ** self.high_precision


class LambdaElement:
    """An integer polynomial in X, trailing zeros stripped.

    Immutable; supports +, -, *, ** and exact division by monic
    polynomials, which is all the quotient arithmetic ever needs.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(int(c) for c in cs))

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, c: int) -> "LambdaElement":
        return cls((c,))

    @classmethod
    def monomial(cls, c: int, k: int) -> "LambdaElement":
        return cls((0,) * k + (c,))

    # -- structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LambdaElement.const(other)
        if not isinstance(other, LambdaElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                x = "X" if i == 1 else f"X^{i}"
                parts.append(x if c == 1 else f"-{x}" if c == -1 else f"{c}*{x}")
        return " + ".join(reversed(parts)).replace("+ -", "- ")

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = LambdaElement.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return LambdaElement(out)

    __radd__ = __add__

    def __neg__(self):
        return LambdaElement(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = LambdaElement.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LambdaElement(tuple(other * c for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return LambdaElement()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return LambdaElement(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = LambdaElement.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod_monic(self, divisor: "LambdaElement"):
        """Exact (quotient, remainder) division by a monic divisor."""
        d = divisor.degree
        if d < 0 or divisor.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        if len(rem) <= d:
            return LambdaElement(), self
        quo = [0] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c:
                quo[i - d] = c
                for j, dj in enumerate(divisor.coeffs):
                    rem[i - d + j] -= c * dj
        return LambdaElement(quo), LambdaElement(rem[:d])

    def reduced_mod(self, divisor: "LambdaElement") -> "LambdaElement":
        return self.divmod_monic(divisor)[1]

    def divisible_by(self, divisor: "LambdaElement") -> bool:
        return self.divmod_monic(divisor)[1].is_zero

    def exact_div(self, divisor: "LambdaElement") -> "LambdaElement":
        q, r = self.divmod_monic(divisor)
        if not r.is_zero:
            raise ValueError("division not exact")
        return q

    def content_gcd(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    # -- serialization ------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json_dict(cls, obj) -> "LambdaElement":
        if isinstance(obj, dict):
            return cls(int(c) for c in obj["coeffs"])
        if isinstance(obj, list):
            return cls(int(c) for c in obj)
        if isinstance(obj, (int, str)):
            return cls.const(int(obj))
        raise ValueError(f"cannot decode polynomial from {obj!r}")


X = LambdaElement((0, 1))
ONE = LambdaElement((1,))
ZERO = LambdaElement()


class LambdaMatrix:
    """A 2x2 matrix over the polynomial ring, row-major, det cached.

    All module-theoretic conventions are column-based: the span of the
    matrix is generated by its two columns.
    """

    __slots__ = ("rows", "det")

    def __init__(self, rows):
        rs = tuple(
            tuple(e if isinstance(e, LambdaElement) else LambdaElement.const(e) for e in row)
            for row in rows
        )
        if len(rs) != 2 or any(len(r) != 2 for r in rs):
            raise ValueError("expected a 2x2 matrix")
        object.__setattr__(self, "rows", rs)
        a, c = rs[0]
        b, d = rs[1]
        object.__setattr__(self, "det", a * d - c * b)

    def __setattr__(self, *a):
        raise AttributeError("LambdaMatrix is immutable")

    @classmethod
    def identity(cls) -> "LambdaMatrix":
        return cls(((ONE, ZERO), (ZERO, ONE)))

    @classmethod
    def diagonal(cls, a, b) -> "LambdaMatrix":
        return cls(((a, ZERO), (ZERO, b)))

    def column(self, j: int):
        return (self.rows[0][j], self.rows[1][j])

    @property
    def columns(self):
        return (self.column(0), self.column(1))

    @property
    def entries(self):
        return (self.rows[0][0], self.rows[0][1], self.rows[1][0], self.rows[1][1])

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for e in self.entries)

    def __eq__(self, other):
        if not isinstance(other, LambdaMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"[[{self.rows[0][0]!r}, {self.rows[0][1]!r}], [{self.rows[1][0]!r}, {self.rows[1][1]!r}]]"

    def __add__(self, other):
        return LambdaMatrix(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows))
        )

    def __matmul__(self, other: "LambdaMatrix") -> "LambdaMatrix":
        a, c = self.rows[0]
        b, d = self.rows[1]
        e, g = other.rows[0]
        f, h = other.rows[1]
        return LambdaMatrix(((a * e + c * f, a * g + c * h), (b * e + d * f, b * g + d * h)))

    def scaled(self, s) -> "LambdaMatrix":
        return LambdaMatrix(tuple(tuple(s * e for e in row) for row in self.rows))

    def map_entries(self, fn) -> "LambdaMatrix":
        return LambdaMatrix(tuple(tuple(fn(e) for e in row) for row in self.rows))

    def to_json_list(self) -> list:
        return [[e.to_json_dict() for e in row] for row in self.rows]

    @classmethod
    def from_json_list(cls, obj) -> "LambdaMatrix":
        return cls(tuple(tuple(LambdaElement.from_json_dict(e) for e in row) for row in obj))


@dataclass(frozen=True)
class IwasawaInvariants:
    """mu = minimal coefficient valuation, lambda = first index attaining it
    (the Weierstrass reading for polynomial inputs)."""

    mu: int
    lambda_: int

    def to_json_dict(self) -> dict:
        return {"mu": self.mu, "lambda": self.lambda_}


@dataclass(frozen=True)
class OmegaTower:
    """The level-n relation polynomial omega_n with its signed split."""

    n: int
    omega_n: LambdaElement
    omega_plus: LambdaElement
    omega_minus: LambdaElement
    omega_tilde_plus: LambdaElement
    omega_tilde_minus: LambdaElement

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "omega_n": self.omega_n.to_json_dict(),
            "omega_plus": self.omega_plus.to_json_dict(),
            "omega_minus": self.omega_minus.to_json_dict(),
            "omega_tilde_plus": self.omega_tilde_plus.to_json_dict(),
            "omega_tilde_minus": self.omega_tilde_minus.to_json_dict(),
        }


def _check_explicit_size(p: int, n: int):
    if p ** n > MAX_EXPLICIT_LENGTH:
        raise InvalidContext(
            f"p^n = {p ** n} exceeds the explicit-construction bound "
            f"{MAX_EXPLICIT_LENGTH}; use degree bookkeeping for large levels"
        )


@lru_cache(maxsize=None)
def _phi(p: int, m: int) -> LambdaElement:
    if m == 0:
        return X
    _check_explicit_size(p, m)
    q = p ** (m - 1)
    # Phi_m = sum_{k<p} (1+X)^{k*q}: the geometric sum telescoping
    # ((1+X)^{p^m} - 1) / ((1+X)^{p^{m-1}} - 1).
    out = [0] * ((p - 1) * q + 1)
    for k in range(p):
        kq = k * q
        for j in range(kq + 1):
            out[j] += comb(kq, j)
    return LambdaElement(out)


@lru_cache(maxsize=None)
def _omega(p: int, n: int) -> LambdaElement:
    _check_explicit_size(p, n)
    pn = p ** n
    return LambdaElement([0] + [comb(pn, j) for j in range(1, pn + 1)])


def cyclotomic_phi(ctx: PrimeContext, m: int) -> LambdaElement:
    """The level-m cyclotomic factor: Phi_0 = X and, for m >= 1, the
    minimal polynomial of zeta_{p^m} - 1 (distinguished of degree
    p^m - p^{m-1})."""
    if m < 0:
        raise InvalidContext(f"level must be >= 0, got {m}")
    return _phi(ctx.p, m)


def omega_poly(ctx: PrimeContext, n: int) -> LambdaElement:
    """omega_n = (1+X)^{p^n} - 1."""
    if n < 0:
        raise InvalidContext(f"level must be >= 0, got {n}")
    return _omega(ctx.p, n)


def euler_phi_pk(p: int, m: int) -> int:
    """Degree of Phi_m: 1 for m = 0, else p^m - p^{m-1}."""
    return 1 if m == 0 else p ** m - p ** (m - 1)


def signed_degree(p: int, n: int, sign: str, tilde: bool = True) -> int:
    """Degree of the signed product at level n, by exact factor bookkeeping
    (all factors are monic, so degrees add).  sign '+' collects even m >= 2,
    sign '-' collects odd m."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    start = 2 if sign == "+" else 1
    deg = sum(euler_phi_pk(p, m) for m in range(start, n + 1, 2))
    return deg if tilde else deg + 1


def omega_tower(ctx: PrimeContext, n: int) -> OmegaTower:
    """Explicit construction of omega_n and its signed split at level n."""
    if n < 0:
        raise InvalidContext(f"level must be >= 0, got {n}")
    _check_explicit_size(ctx.p, n)
    tilde_plus = ONE
    tilde_minus = ONE
    for m in range(1, n + 1):
        if m % 2 == 0:
            tilde_plus = tilde_plus * _phi(ctx.p, m)
        else:
            tilde_minus = tilde_minus * _phi(ctx.p, m)
    return OmegaTower(
        n=n,
        omega_n=_omega(ctx.p, n),
        omega_plus=X * tilde_plus,
        omega_minus=X * tilde_minus,
        omega_tilde_plus=tilde_plus,
        omega_tilde_minus=tilde_minus,
    )


def iwasawa_invariants(ctx: PrimeContext, f: LambdaElement) -> IwasawaInvariants:
    """mu/lambda of a nonzero polynomial, read off coefficient valuations."""
    if f.is_zero:
        raise ZeroElement("mu/lambda of the zero element are undefined")
    vals = [vp(c, ctx.p) if c else None for c in f.coeffs]
    mu = min(v for v in vals if v is not None)
    lam = next(i for i, v in enumerate(vals) if v == mu)
    return IwasawaInvariants(mu=mu, lambda_=lam)


def reduce_mod_omega(ctx: PrimeContext, f: LambdaElement, n: int) -> list[int]:
    """The class of f in Lambda/(omega_n, p^N) as a coefficient vector of
    length p^n with entries in [0, p^N)."""
    if n < 0:
        raise InvalidContext(f"level must be >= 0, got {n}")
    pn = ctx.p ** n
    rem = f.reduced_mod(_omega(ctx.p, n))
    pN = ctx.modulus
    out = [0] * pn
    for i, c in enumerate(rem.coeffs):
        out[i] = c % pN
    return out


def poly_to_json(f: LambdaElement) -> str:
    return json.dumps(f.to_json_dict(), sort_keys=True)


def poly_from_json(text: str) -> LambdaElement:
    return LambdaElement.from_json_dict(json.loads(text))
