"""Kobayashi ranks of tower steps, brute force and closed form.

Every tower here presents its level-n module as

    M_n = Lambda_n^k / (columns of a fixed relation matrix),

with Lambda_n = Z_p[X] / omega_n, and the step map pi_n: M_n -> M_{n-1}
induced by the ring surjection Lambda_n -> Lambda_{n-1}.  The rank of
the step is

    nabla M_n = len ker(pi_n) - len coker(pi_n) + dim_Qp (M_{n-1} x Qp),

and since pi_n is onto (the relations are the same at both levels) the
cokernel vanishes.  The kernel is the nested-span quotient

    <relations, omega_{n-1} e_1..e_k> / <relations>   inside Lambda_n^k,

finite exactly when the relation columns stay full rank at eps_n;
otherwise PhiDivides is raised.  The rational dimension downstairs is
k p^{n-1} minus the exact rank of the relations at level n-1.

Closed forms attached per tower kind:

  * cyclic Lambda/(f):     ord_{eps_n}(f)           when Phi_n does not divide f;
  * torsion (square rels): lambda + (p^n - p^{n-1}) mu of det, for n >> 0;
  * 2x2 matrix:            ord_{eps_n}(det A)       when A is special rel n;
  * Coleman pair:          2 deg omega-tilde_n^sign + ord_{eps_n}(det Col^-sign),
                           sign = + for n odd, - for n even, when F_n is
                           special rel n and the parity det survives at eps_n.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .cyclo_eval import (
    INFINITE,
    _poly_det,
    full_row_rank_at_eps,
    ord_eps,
    ord_json,
    poly_full_row_rank,
)
from .errors import (
    InvalidContext,
    NotTorsion,
    PhiDivides,
    PrecisionUnstable,
    SingularMatrix,
    ZeroElement,
)
from .lambda_ring import (
    ZERO,
    LambdaElement,
    LambdaMatrix,
    PrimeContext,
    cyclotomic_phi,
    euler_phi_pk,
    iwasawa_invariants,
    omega_poly,
    omega_tower,
)
from .special_matrices import ColemanData, assemble_fn, is_special
from .zp_modules import (
    lambda_column_span,
    nested_span_quotient_length,
    quotient_invariants,
)


@dataclass(frozen=True)
class NablaResult:
    n: int
    ker_length: int
    coker_length: int
    lower_rank: int
    nabla: int
    closed_form: int | None = None
    agrees: bool | None = None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "ker_length": self.ker_length,
            "coker_length": self.coker_length,
            "lower_rank": self.lower_rank,
            "nabla": self.nabla,
            "closed_form": self.closed_form,
            "agrees": self.agrees,
        }


@dataclass(frozen=True)
class CyclicTower:
    f: LambdaElement

    def relation_columns(self) -> tuple[int, tuple]:
        return 1, ((self.f,),)


@dataclass(frozen=True)
class TorsionTower:
    columns: tuple[tuple[LambdaElement, ...], ...]

    def relation_columns(self) -> tuple[int, tuple]:
        return len(self.columns[0]), self.columns


@dataclass(frozen=True)
class MatrixTower:
    matrix: LambdaMatrix

    def relation_columns(self) -> tuple[int, tuple]:
        return 2, self.matrix.columns


def direct_sum(left, right) -> TorsionTower:
    """Block-diagonal join of two relation systems."""
    ka, cols_a = left.relation_columns()
    kb, cols_b = right.relation_columns()
    pad_a = (ZERO,) * kb
    pad_b = (ZERO,) * ka
    cols = tuple(col + pad_a for col in cols_a) + tuple(pad_b + col for col in cols_b)
    return TorsionTower(columns=cols)


def _brute_nabla(ctx: PrimeContext, k: int, rel_cols, n: int) -> NablaResult:
    if n < 1:
        raise InvalidContext(f"tower steps start at n = 1, got {n}")
    if not full_row_rank_at_eps(ctx, n, rel_cols, k):
        raise PhiDivides(f"relations drop rank at eps_{n}; step kernel is infinite")
    inner = lambda_column_span(ctx, rel_cols, n)
    omega_prev = omega_poly(ctx, n - 1)
    wcols = []
    for j in range(k):
        vec = [ZERO] * k
        vec[j] = omega_prev
        wcols.append(tuple(vec))
    outer = inner.concat(lambda_column_span(ctx, wcols, n))
    ker = nested_span_quotient_length(ctx, outer, inner)
    if not ker.stable:
        raise PrecisionUnstable(f"kernel length unstable at level {n}")
    free_rank, _ = quotient_invariants(ctx, lambda_column_span(ctx, rel_cols, n - 1))
    return NablaResult(
        n=n,
        ker_length=ker.length,
        coker_length=0,
        lower_rank=free_rank,
        nabla=ker.length + free_rank,
    )


def _require_step(n: int) -> None:
    if n < 1:
        raise InvalidContext(f"tower steps start at n = 1, got {n}")


def _attach(result: NablaResult, closed: int | None) -> NablaResult:
    if closed is None:
        return result
    return replace(result, closed_form=closed, agrees=(result.nabla == closed))


def nabla_cyclic(ctx: PrimeContext, f: LambdaElement, n: int) -> NablaResult:
    """nabla of Lambda/(f) at step n; closed form ord_{eps_n}(f)."""
    _require_step(n)
    if f.is_zero:
        raise ZeroElement("cyclic tower needs f != 0")
    if f.divisible_by(cyclotomic_phi(ctx, n)):
        raise PhiDivides(f"Phi_{n} divides f; step kernel is infinite")
    result = _brute_nabla(ctx, 1, ((f,),), n)
    return _attach(result, ord_eps(ctx, n, f))


def nabla_torsion_tower(ctx: PrimeContext, tower: TorsionTower, n: int) -> NablaResult:
    """nabla of a finitely presented torsion module; when the relation
    matrix is square the closed form lambda + phi(p^n) mu of its
    determinant is attached (valid once n is past stabilization)."""
    _require_step(n)
    k, cols = tower.relation_columns()
    if not poly_full_row_rank(cols, k):
        raise NotTorsion("relations do not have full rank over Frac(Lambda)")
    result = _brute_nabla(ctx, k, cols, n)
    if len(cols) == k:
        det = _poly_det([[cols[j][i] for j in range(k)] for i in range(k)])
        inv = iwasawa_invariants(ctx, det)
        closed = inv.lambda_ + euler_phi_pk(ctx.p, n) * inv.mu
        return _attach(result, closed)
    return result


def nabla_matrix_tower(ctx: PrimeContext, a: LambdaMatrix, n: int) -> NablaResult:
    """nabla of Lambda^2/(columns of A); closed form ord_{eps_n}(det A)
    attached when A is special relative to n."""
    _require_step(n)
    if a.det.is_zero:
        raise SingularMatrix("det A = 0: the tower is not torsion")
    if a.det.divisible_by(cyclotomic_phi(ctx, n)):
        raise PhiDivides(f"Phi_{n} divides det A; step kernel is infinite")
    result = _brute_nabla(ctx, 2, a.columns, n)
    if is_special(ctx, a, n).verdict:
        return _attach(result, ord_eps(ctx, n, a.det))
    return result


def nabla_coleman_tower(ctx: PrimeContext, cd: ColemanData, n: int) -> NablaResult:
    """nabla of the level-n Coleman step Lambda^2/(columns of F_n); the
    closed form 2 deg omega-tilde_n^sign + ord_{eps_n}(det Col^opp) is
    attached when F_n is special and the opposite-parity determinant
    does not vanish at eps_n."""
    _require_step(n)
    cd.validate()
    f = assemble_fn(ctx, cd, n)
    if f.det.is_zero:
        raise SingularMatrix(f"det F_{n} = 0")
    if f.det.divisible_by(cyclotomic_phi(ctx, n)):
        raise PhiDivides(f"Phi_{n} divides det F_{n}; step kernel is infinite")
    result = _brute_nabla(ctx, 2, f.columns, n)
    if not is_special(ctx, f, n).verdict:
        return result
    tower = omega_tower(ctx, n)
    if n % 2 == 1:
        base = 2 * tower.omega_tilde_plus.degree
        o = ord_eps(ctx, n, cd.col_minus.det)
    else:
        base = 2 * tower.omega_tilde_minus.degree
        o = ord_eps(ctx, n, cd.col_plus.det)
    if o == INFINITE:
        return result
    return _attach(result, base + o)


def nabla_tower(ctx: PrimeContext, tower, n: int) -> NablaResult:
    """Dispatch on tower kind, attaching whichever closed form applies."""
    if isinstance(tower, CyclicTower):
        return nabla_cyclic(ctx, tower.f, n)
    if isinstance(tower, MatrixTower):
        return nabla_matrix_tower(ctx, tower.matrix, n)
    if isinstance(tower, TorsionTower):
        return nabla_torsion_tower(ctx, tower, n)
    raise InvalidContext(f"unknown tower kind {type(tower).__name__}")


def additivity_check(ctx: PrimeContext, left, right, n: int) -> bool:
    """Whether nabla of the block-diagonal join equals the sum of the
    two summand nablas at step n."""
    res_l = nabla_tower(ctx, left, n)
    res_r = nabla_tower(ctx, right, n)
    k, cols = direct_sum(left, right).relation_columns()
    res_sum = _brute_nabla(ctx, k, cols, n)
    return res_sum.nabla == res_l.nabla + res_r.nabla


def tower_sweep(ctx: PrimeContext, tower, n_max: int) -> list[NablaResult]:
    """nabla at every step 1..n_max."""
    if n_max < 1:
        raise InvalidContext(f"n_max must be >= 1, got {n_max}")
    return [nabla_tower(ctx, tower, n) for n in range(1, n_max + 1)]


def detect_stabilization(results: list[NablaResult]) -> int | None:
    """Least step n from which every later result (at least two of them)
    agrees with its closed form; None when no such tail exists."""
    flags = [(r.n, r.agrees) for r in results]
    start = None
    for n, agrees in flags:
        if agrees:
            if start is None:
                start = n
        else:
            start = None
    if start is None:
        return None
    tail = sum(1 for n, _ in flags if n >= start)
    return start if tail >= 2 else None
