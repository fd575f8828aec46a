"""2x2 matrices over Lambda with column-divisibility structure.

A matrix A is *special relative to n* when for every m <= n with
Phi_m | det A, some full column of A is divisible by Phi_m.  Such a
matrix factors as A = B D with D diagonal carrying squarefree products
of the Phi_m (m <= n-1), the multiplicity of Phi_m in det D being the
number of divisible columns.

Coleman data is a pair (Col^+, Col^-) of 2x2 matrices; the level-n
coupling matrix is

    F_n = omega-tilde_n^+ * Col^-  +  omega-tilde_n^- * Col^+,

which at eps_m collapses to a nonzero scalar multiple of Col^- (m odd or
m = 0) or Col^+ (m even >= 2), because exactly one signed product
vanishes there.  good_basis_transform produces a single invertible B
making every F_n B special, by CRT-gluing kernel-killing local blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import lcm

from .cyclo_eval import (
    INFINITE,
    crt_interpolate,
    matrices_proportional_at_eps,
    matrix_rank_at_eps,
    ord_eps,
)
from .errors import (
    DegenerateColeman,
    InvalidContext,
    NotCoprime,
    NotSpecial,
    PrecisionUnstable,
    SingularMatrix,
)
from .lambda_ring import (
    ONE,
    ZERO,
    LambdaElement,
    LambdaMatrix,
    PrimeContext,
    X,
    cyclotomic_phi,
    omega_poly,
    omega_tower,
)
from .zp_modules import _snf, intersect_spans_mod, lambda_column_span


@dataclass(frozen=True)
class SpecialLevel:
    m: int
    i_m: int
    det_divisible: bool
    ok: bool

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "i_m": self.i_m,
            "det_divisible": self.det_divisible,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class SpecialReport:
    n: int
    per_level: tuple[SpecialLevel, ...]
    verdict: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "per_level": [lv.to_json_dict() for lv in self.per_level],
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class BDFactorization:
    b: LambdaMatrix
    d: LambdaMatrix

    def to_json_dict(self) -> dict:
        return {"b": self.b.to_json_list(), "d": self.d.to_json_list()}


class ColemanData:
    """A pair of 2x2 Coleman matrices.

    Structural invariants (checked by validate): every entry of col_plus
    is divisible by X (the plus image lies in X*Lambda), and both
    determinants are nonzero.
    """

    __slots__ = ("col_plus", "col_minus")

    def __init__(self, col_plus: LambdaMatrix, col_minus: LambdaMatrix):
        self.col_plus = col_plus
        self.col_minus = col_minus

    def validate(self) -> "ColemanData":
        for e in self.col_plus.entries:
            if not e.is_zero and e.coeffs[0] != 0:
                raise DegenerateColeman("col_plus entries must be divisible by X")
        if self.col_plus.det.is_zero:
            raise DegenerateColeman("det col_plus is zero")
        if self.col_minus.det.is_zero:
            raise DegenerateColeman("det col_minus is zero")
        return self

    def transformed(self, b: LambdaMatrix) -> "ColemanData":
        """Right-multiply both matrices by B (a change of basis of the
        source module); preserves X-divisibility of col_plus."""
        return ColemanData(self.col_plus @ b, self.col_minus @ b)

    def __eq__(self, other):
        if not isinstance(other, ColemanData):
            return NotImplemented
        return self.col_plus == other.col_plus and self.col_minus == other.col_minus

    def to_json_dict(self) -> dict:
        return {
            "col_plus": self.col_plus.to_json_list(),
            "col_minus": self.col_minus.to_json_list(),
        }

    @classmethod
    def from_json_dict(cls, obj) -> "ColemanData":
        return cls(
            LambdaMatrix.from_json_list(obj["col_plus"]),
            LambdaMatrix.from_json_list(obj["col_minus"]),
        )


def parity_reference(cd: ColemanData, m: int) -> LambdaMatrix:
    """The Coleman matrix F_n collapses to at eps_m: col_minus for m odd
    or m = 0, col_plus for even m >= 2."""
    return cd.col_minus if (m == 0 or m % 2 == 1) else cd.col_plus


def is_special(ctx: PrimeContext, a: LambdaMatrix, n: int) -> SpecialReport:
    """Column-divisibility report for every level m <= n."""
    if a.det.is_zero:
        raise SingularMatrix("det A = 0: every level divides the determinant")
    if n < 0:
        raise InvalidContext(f"level must be >= 0, got {n}")
    levels = []
    for m in range(n + 1):
        phi = cyclotomic_phi(ctx, m)
        det_div = a.det.divisible_by(phi)
        i_m = sum(
            1
            for j in (0, 1)
            if a.rows[0][j].divisible_by(phi) and a.rows[1][j].divisible_by(phi)
        )
        ok = (not det_div) or i_m >= 1
        levels.append(SpecialLevel(m=m, i_m=i_m, det_divisible=det_div, ok=ok))
    return SpecialReport(n=n, per_level=tuple(levels), verdict=all(lv.ok for lv in levels))


def factor_bd(ctx: PrimeContext, a: LambdaMatrix, n: int) -> BDFactorization:
    """A = B D with D = diag of the squarefree Phi-products (m <= n-1)
    dividing each column; exact division, no remainder."""
    report = is_special(ctx, a, n)
    if not report.verdict:
        bad = [lv.m for lv in report.per_level if not lv.ok]
        raise NotSpecial(f"column divisibility fails at levels {bad}")
    d_diag = []
    b_cols = []
    for j in (0, 1):
        col = (a.rows[0][j], a.rows[1][j])
        dj = ONE
        for m in range(n):
            phi = cyclotomic_phi(ctx, m)
            if col[0].divisible_by(phi) and col[1].divisible_by(phi):
                dj = dj * phi
        b_cols.append((col[0].exact_div(dj), col[1].exact_div(dj)))
        d_diag.append(dj)
    b = LambdaMatrix(((b_cols[0][0], b_cols[1][0]), (b_cols[0][1], b_cols[1][1])))
    return BDFactorization(b=b, d=LambdaMatrix.diagonal(d_diag[0], d_diag[1]))


def assemble_fn(ctx: PrimeContext, cd: ColemanData, n: int) -> LambdaMatrix:
    """The level-n coupling matrix
    F_n = omega-tilde_n^+ * col_minus + omega-tilde_n^- * col_plus."""
    if n < 0:
        raise InvalidContext(f"level must be >= 0, got {n}")
    tower = omega_tower(ctx, n)
    return cd.col_minus.scaled(tower.omega_tilde_plus) + cd.col_plus.scaled(
        tower.omega_tilde_minus
    )


def parity_congruence_check(ctx: PrimeContext, cd: ColemanData, n: int) -> bool:
    """Whether F_n(eps_m) is a nonzero scalar multiple of the parity
    reference matrix at every m <= n."""
    cd.validate()
    f = assemble_fn(ctx, cd, n)
    return all(
        matrices_proportional_at_eps(ctx, m, f, parity_reference(cd, m))
        for m in range(n + 1)
    )


def _kernel_killer(ctx: PrimeContext, cd: ColemanData, m: int) -> tuple:
    """A 2x2 block over Z[X]/Phi_m, invertible there, whose first column
    spans the kernel of the (rank-one) parity reference at eps_m."""
    phi = cyclotomic_phi(ctx, m)
    c = parity_reference(cd, m)
    a = c.rows[0][0].reduced_mod(phi)
    c_ = c.rows[0][1].reduced_mod(phi)
    b = c.rows[1][0].reduced_mod(phi)
    d = c.rows[1][1].reduced_mod(phi)
    if not (a.is_zero and c_.is_zero):
        x, y = (-c_).reduced_mod(phi), a
    else:
        x, y = (-d).reduced_mod(phi), b
    if not x.reduced_mod(phi).is_zero:
        return ((x, ZERO), (y, ONE))  # det = x
    return ((x, ONE), (y, ZERO))  # det = -y, nonzero since (x, y) != 0


def good_basis_transform(ctx: PrimeContext, cd: ColemanData, n_max: int) -> LambdaMatrix:
    """An integer-polynomial B, invertible at every eps_m (m <= n_max),
    such that F_n B is special relative to n for all n <= n_max.

    Local kernel-killing blocks at the rank-one levels are glued by CRT
    (denominators are p-powers and get cleared), then a correction
    omega_{m-1} * C with C in {0..p-1}^4 restores invertibility at the
    levels above the glued range, lowest level first.
    """
    cd.validate()
    if n_max < 0:
        raise InvalidContext(f"n_max must be >= 0, got {n_max}")
    rank_one = [
        m
        for m in range(n_max + 1)
        if matrix_rank_at_eps(ctx, m, parity_reference(cd, m)) == 1
    ]
    if not rank_one:
        b = LambdaMatrix.identity()
    else:
        top = max(rank_one)
        identity_block = ((ONE, ZERO), (ZERO, ONE))
        blocks = {
            m: _kernel_killer(ctx, cd, m) if m in rank_one else identity_block
            for m in range(top + 1)
        }
        rationals = [
            [
                crt_interpolate(ctx, [(m, blocks[m][i][j]) for m in range(top + 1)])
                for j in (0, 1)
            ]
            for i in (0, 1)
        ]
        scale = lcm(*(r.denominator for row in rationals for r in row))
        b = LambdaMatrix(
            tuple(
                tuple(r.numerator * (scale // r.denominator) for r in row)
                for row in rationals
            )
        )
        start = top + 1
        for m in range(max(1, start), n_max + 1):
            phi = cyclotomic_phi(ctx, m)
            if not b.det.divisible_by(phi):
                continue
            omega_prev = omega_poly(ctx, m - 1)
            for alpha, beta, gamma, delta in product(range(ctx.p), repeat=4):
                cand = b + LambdaMatrix(((alpha, gamma), (beta, delta))).scaled(omega_prev)
                if not cand.det.divisible_by(phi):
                    b = cand
                    break
            else:
                raise RuntimeError(f"no correction restored invertibility at level {m}")
    for m in range(n_max + 1):
        if ord_eps(ctx, m, b.det) == INFINITE:
            raise RuntimeError(f"internal: det B vanishes at eps_{m}")
    for n in range(1, n_max + 1):
        f = assemble_fn(ctx, cd, n)
        if not is_special(ctx, f @ b, n).verdict:
            raise RuntimeError(f"internal: F_{n} B is not special")
    return b


def rod_check(ctx: PrimeContext, b: LambdaMatrix, n: int, test_level: int) -> bool:
    """Saturation of the span of B against omega_n at a finite level:
    inside Lambda_t^2 (t = test_level > n), compare

        omega_n Lambda_t^2  intersect  <B>   versus   omega_n <B>.

    det B coprime to omega_n is required (NotCoprime otherwise); the two
    spans always nest, so equality of lengths decides equality.
    """
    if test_level <= n:
        raise InvalidContext(f"test_level must exceed n, got {test_level} <= {n}")
    for m in range(n + 1):
        if ord_eps(ctx, m, b.det) == INFINITE:
            raise NotCoprime(f"Phi_{m} divides det B")
    p = ctx.p
    t = test_level
    ambient = 2 * p**t
    omega_n = omega_poly(ctx, n)
    span_b = lambda_column_span(ctx, b.columns, t)
    span_w = lambda_column_span(ctx, [(omega_n, ZERO), (ZERO, omega_n)], t)
    span_wb = lambda_column_span(
        ctx, [(omega_n * col[0], omega_n * col[1]) for col in b.columns], t
    )

    def _finite_vals(cols, e):
        pe = p**e
        rows = [[col[i] % pe for col in cols] for i in range(ambient)]
        vals, _, _ = _snf(rows, p, e)
        return [a for a in vals if a < e]

    readings = {}
    for e in (ctx.precision, ctx.high_precision):
        inter = intersect_spans_mod(p, e, ambient, span_w.columns, span_b.columns)
        readings[e] = (
            _finite_vals(inter, e),
            _finite_vals(span_wb.columns, e),
        )
    lo_i, lo_w = readings[ctx.precision]
    hi_i, hi_w = readings[ctx.high_precision]
    if lo_i != hi_i or lo_w != hi_w:
        raise PrecisionUnstable(
            f"intersection reading differs between N={ctx.precision} and "
            f"N+margin={ctx.high_precision}"
        )
    return lo_i == lo_w
