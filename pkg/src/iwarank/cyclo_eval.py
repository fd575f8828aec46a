"""Evaluation at the cyclotomic points eps_m = zeta_{p^m} - 1.

Z_p[zeta_{p^m}] = Z_p[X]/(Phi_m) is totally ramified of degree
phi(p^m) = deg Phi_m over Z_p, so the valuation normalized by
ord(eps_m) = 1 satisfies

    ord_{eps_m}(f(eps_m)) = v_p(Norm f(eps_m)) = v_p(Res(Phi_m, f)),

computed here exactly as the determinant of the multiplication-by-f
matrix on the power basis of Z[X]/(Phi_m).  Level 0 uses eps_0 = 0,
i.e. ord is v_p(f(0)).  The value is infinite exactly when Phi_m | f.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, inf

from .errors import DuplicateLevel, InvalidContext
from .exactlinalg import bareiss_det
from .lambda_ring import (
    LambdaElement,
    LambdaMatrix,
    PrimeContext,
    cyclotomic_phi,
    vp,
)

INFINITE = inf  # extended nonnegative integer; serializes as "inf"


def ord_json(v) -> object:
    return "inf" if v == INFINITE else int(v)


@dataclass(frozen=True)
class CyclotomicPoint:
    """The image f(eps_m) in Z_p[zeta_{p^m}], stored on the power basis.

    ``rep`` is the reduction of f mod Phi_m: degree < phi(p^m) for
    m >= 1, and a bare constant for m = 0 (where eps_0 = 0).
    """

    m: int
    rep: LambdaElement

    @classmethod
    def of(cls, ctx: PrimeContext, m: int, f: LambdaElement) -> "CyclotomicPoint":
        if m < 0:
            raise InvalidContext(f"level must be >= 0, got {m}")
        return cls(m, f.reduced_mod(cyclotomic_phi(ctx, m)))

    @property
    def is_zero(self) -> bool:
        return self.rep.is_zero

    def ord(self, ctx: PrimeContext):
        """Valuation normalized by ord(eps_m) = 1; INFINITE at zero."""
        if self.rep.is_zero:
            return INFINITE
        if self.m == 0:
            return vp(self.rep.coeffs[0], ctx.p)
        return vp(_mult_matrix_det(self.rep, cyclotomic_phi(ctx, self.m)), ctx.p)

    def to_json_dict(self) -> dict:
        return {"m": self.m, "rep": self.rep.to_json_dict()}


def _mult_matrix_det(r: LambdaElement, phi: LambdaElement) -> int:
    """det of multiplication by r on Z[X]/(phi) = Res(phi, r), phi monic."""
    d = phi.degree
    cur = list(r.coeffs) + [0] * (d - len(r.coeffs))
    cols = [cur[:]]
    for _ in range(d - 1):
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for j in range(d):
                nxt[j] -= top * phi.coeffs[j]
        cur = nxt
        cols.append(cur[:])
    rows = [[cols[j][i] for j in range(d)] for i in range(d)]
    return bareiss_det(rows)


def ord_eps(ctx: PrimeContext, m: int, f: LambdaElement):
    """Normalized valuation of f(eps_m); INFINITE iff Phi_m divides f."""
    return CyclotomicPoint.of(ctx, m, f).ord(ctx)


def det_ord_at_eps(ctx: PrimeContext, m: int, a: LambdaMatrix):
    """ord_{eps_m} of det A."""
    return ord_eps(ctx, m, a.det)


def matrix_rank_at_eps(ctx: PrimeContext, m: int, a: LambdaMatrix) -> int:
    """Rank of A(eps_m) over the fraction field of Z_p[zeta_{p^m}]."""
    phi = cyclotomic_phi(ctx, m)
    if all(e.reduced_mod(phi).is_zero for e in a.entries):
        return 0
    if a.det.reduced_mod(phi).is_zero:
        return 1
    return 2


def _poly_det(rows) -> LambdaElement:
    k = len(rows)
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = LambdaElement()
    for j in range(k):
        if rows[0][j].is_zero:
            continue
        minor = [[row[c] for c in range(k) if c != j] for row in rows[1:]]
        term = rows[0][j] * _poly_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def full_row_rank_at_eps(ctx: PrimeContext, m: int, columns, k: int) -> bool:
    """Whether the k x c polynomial matrix with the given columns has
    rank k at eps_m (some k x k minor nonvanishing mod Phi_m)."""
    phi = cyclotomic_phi(ctx, m)
    red = [tuple(e.reduced_mod(phi) for e in col) for col in columns]
    if len(red) < k:
        return False
    for pick in combinations(range(len(red)), k):
        rows = [[red[j][i] for j in pick] for i in range(k)]
        if not _poly_det(rows).reduced_mod(phi).is_zero:
            return True
    return False


def poly_full_row_rank(columns, k: int) -> bool:
    """Whether the k x c polynomial matrix has rank k over Frac(Lambda)
    (some k x k minor nonzero as a polynomial)."""
    if len(columns) < k:
        return False
    for pick in combinations(range(len(columns)), k):
        rows = [[columns[j][i] for j in pick] for i in range(k)]
        if not _poly_det(rows).is_zero:
            return True
    return False


def matrices_proportional_at_eps(
    ctx: PrimeContext, m: int, f: LambdaMatrix, c: LambdaMatrix
) -> bool:
    """Whether F(eps_m) = scalar * C(eps_m) for some nonzero scalar.

    Decided integrally: cross products against a reference entry, all
    mod Phi_m (an integral domain, so no division is needed).
    """
    phi = cyclotomic_phi(ctx, m)
    fe = [e.reduced_mod(phi) for e in f.entries]
    ce = [e.reduced_mod(phi) for e in c.entries]
    c_zero = all(e.is_zero for e in ce)
    f_zero = all(e.is_zero for e in fe)
    if c_zero:
        return f_zero
    if f_zero:
        return False
    ref = next(i for i, e in enumerate(ce) if not e.is_zero)
    if fe[ref].is_zero:
        return False
    return all(
        (fe[i] * ce[ref] - fe[ref] * ce[i]).reduced_mod(phi).is_zero for i in range(4)
    )


# -- rational polynomials and cyclotomic CRT --------------------------


@dataclass(frozen=True)
class RationalPoly:
    """numerator / denominator with integer numerator, positive integer
    denominator, and gcd(content(numerator), denominator) = 1."""

    numerator: LambdaElement
    denominator: int

    @classmethod
    def make(cls, numerator: LambdaElement, denominator: int = 1) -> "RationalPoly":
        if denominator == 0:
            raise ZeroDivisionError("zero denominator")
        if denominator < 0:
            numerator, denominator = -numerator, -denominator
        if numerator.is_zero:
            return cls(numerator, 1)
        g = gcd(numerator.content_gcd(), denominator)
        if g > 1:
            numerator = LambdaElement(c // g for c in numerator.coeffs)
            denominator //= g
        return cls(numerator, denominator)

    def to_json_dict(self) -> dict:
        return {
            "numerator": self.numerator.to_json_dict(),
            "denominator": str(self.denominator),
        }


def _fp(f: LambdaElement) -> list[Fraction]:
    return [Fraction(c) for c in f.coeffs]


def _fp_trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _fp_trim(out)


def _fp_add(a, b):
    out = list(a) if len(a) >= len(b) else list(b)
    short = b if len(a) >= len(b) else a
    for i, c in enumerate(short):
        out[i] += c
    return _fp_trim(out)


def _fp_scale(a, s: Fraction):
    return _fp_trim([c * s for c in a])


def _fp_mod(a, b):
    # remainder of a by b, b nonzero (any leading coefficient)
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(r) - 1 >= db and r:
        q = r[-1] / lead
        shift = len(r) - 1 - db
        for j in range(len(b)):
            r[shift + j] -= q * b[j]
        _fp_trim(r)
    return r


def _fp_inverse_mod(a, mod):
    """Inverse of a modulo mod in Q[X] (requires gcd constant)."""
    old_r, r = list(mod), _fp_trim(list(a))
    old_t, t = [], [Fraction(1)]
    while r:
        # division step: old_r = q*r + rem
        rem = list(old_r)
        q = []
        db = len(r) - 1
        lead = r[-1]
        while len(rem) - 1 >= db and rem:
            c = rem[-1] / lead
            deg = len(rem) - 1 - db
            while len(q) < deg + 1:
                q.append(Fraction(0))
            q[deg] += c
            for j in range(len(r)):
                rem[deg + j] -= c * r[j]
            _fp_trim(rem)
        old_r, r = r, rem
        old_t, t = t, _fp_add(old_t, _fp_scale(_fp_mul(q, t), Fraction(-1)))
    if len(old_r) != 1:
        raise ValueError("elements are not coprime")
    return _fp_scale(old_t, 1 / old_r[0])


def _fp_to_rational(a) -> RationalPoly:
    if not a:
        return RationalPoly.make(LambdaElement())
    den = 1
    for c in a:
        den = den * c.denominator // gcd(den, c.denominator)
    num = LambdaElement(int(c * den) for c in a)
    return RationalPoly.make(num, den)


def crt_interpolate(ctx: PrimeContext, points) -> RationalPoly:
    """The unique F in Q[X] of degree < sum deg Phi_{m_i} with
    F = x_i mod Phi_{m_i} at every listed level m_i.

    Pairwise resultants of distinct Phi's are p-powers, so denominators
    of the output are p-powers.
    """
    pts = []
    seen = set()
    for m, value in points:
        if m in seen:
            raise DuplicateLevel(f"level {m} listed twice")
        seen.add(m)
        if isinstance(value, RationalPoly):
            val = _fp_scale(_fp(value.numerator), Fraction(1, value.denominator))
        elif isinstance(value, LambdaElement):
            val = _fp(value)
        else:
            val = _fp(LambdaElement.const(int(value)))
        pts.append((m, val))
    if not pts:
        raise InvalidContext("need at least one interpolation point")
    phis = {m: _fp(cyclotomic_phi(ctx, m)) for m, _ in pts}
    total = [Fraction(1)]
    for m, _ in pts:
        total = _fp_mul(total, phis[m])
    acc: list[Fraction] = []
    for m, val in pts:
        others = [Fraction(1)]
        for m2, _ in pts:
            if m2 != m:
                others = _fp_mul(others, phis[m2])
        inv = _fp_inverse_mod(_fp_mod(others, phis[m]), phis[m])
        idem = _fp_mul(others, inv)  # = 1 mod Phi_m, = 0 mod the others
        acc = _fp_add(acc, _fp_mul(val, idem))
    return _fp_to_rational(_fp_mod(acc, total))
