"""Core ring layer: cyclotomic factors, omega towers, mu/lambda, reductions."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwarank.errors import InvalidContext, ZeroElement
from iwarank.lambda_ring import (
    ONE,
    X,
    ZERO,
    LambdaElement,
    LambdaMatrix,
    PrimeContext,
    cyclotomic_phi,
    euler_phi_pk,
    iwasawa_invariants,
    omega_poly,
    omega_tower,
    poly_from_json,
    poly_to_json,
    reduce_mod_omega,
    signed_degree,
    vp,
)

CTX3 = PrimeContext(3)

small_polys = st.builds(
    LambdaElement,
    st.lists(st.integers(min_value=-40, max_value=40), min_size=0, max_size=6),
)
nonzero_polys = small_polys.filter(lambda f: not f.is_zero)
monic_polys = st.builds(
    lambda lo: LambdaElement(tuple(lo) + (1,)),
    st.lists(st.integers(min_value=-40, max_value=40), min_size=0, max_size=5),
)


def binomial_expansion(p: int, n: int) -> LambdaElement:
    """(1+X)^{p^n} - 1 straight from binomial coefficients."""
    q = p**n
    return LambdaElement([math.comb(q, k) for k in range(q + 1)]) - ONE


class TestCyclotomicPhi:
    def test_frozen_p3(self, ctx3):
        assert cyclotomic_phi(ctx3, 1).coeffs == (3, 3, 1)
        assert cyclotomic_phi(ctx3, 2).coeffs == (3, 9, 18, 21, 15, 6, 1)

    def test_frozen_p5(self, ctx5):
        assert cyclotomic_phi(ctx5, 1).coeffs == (5, 10, 10, 5, 1)

    def test_level_zero_is_x(self, ctx3):
        assert cyclotomic_phi(ctx3, 0) == X

    @pytest.mark.parametrize("p", [3, 5, 7])
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_distinguished(self, p, m):
        ctx = PrimeContext(p)
        phi = cyclotomic_phi(ctx, m)
        assert phi.degree == euler_phi_pk(p, m)
        assert phi.coeffs[-1] == 1
        assert all(c % p == 0 for c in phi.coeffs[:-1])
        assert vp(phi.coeffs[0], p) == 1  # constant term is exactly p

    def test_product_telescopes(self, ctx3):
        # X * prod_{1<=m<=n} Phi_m = (1+X)^{p^n} - 1
        prod = X
        for m in range(1, 4):
            prod = prod * cyclotomic_phi(ctx3, m)
            assert prod == binomial_expansion(3, m)


class TestOmegaTower:
    @pytest.mark.parametrize("p,n", [(3, 0), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2)])
    def test_omega_is_binomial_expansion(self, p, n):
        ctx = PrimeContext(p)
        assert omega_poly(ctx, n) == binomial_expansion(p, n)

    @pytest.mark.parametrize("n", range(0, 5))
    def test_signed_split(self, ctx3, n):
        tw = omega_tower(ctx3, n)
        assert tw.omega_plus * tw.omega_tilde_minus == tw.omega_n
        assert tw.omega_minus * tw.omega_tilde_plus == tw.omega_n
        assert X * tw.omega_tilde_plus == tw.omega_plus
        assert X * tw.omega_tilde_minus == tw.omega_minus

    def test_level_zero_conventions(self, ctx3):
        tw = omega_tower(ctx3, 0)
        assert tw.omega_plus == X
        assert tw.omega_minus == X
        assert tw.omega_tilde_plus == ONE
        assert tw.omega_tilde_minus == ONE

    def test_parity_of_factors(self, ctx3):
        tw = omega_tower(ctx3, 4)
        # omega_plus collects the even levels, omega_minus the odd ones
        assert tw.omega_tilde_plus == cyclotomic_phi(ctx3, 2) * cyclotomic_phi(ctx3, 4)
        assert tw.omega_tilde_minus == cyclotomic_phi(ctx3, 1) * cyclotomic_phi(ctx3, 3)

    @pytest.mark.parametrize("p", [3, 5])
    @pytest.mark.parametrize("n", range(0, 5))
    def test_signed_degree_bookkeeping(self, p, n):
        ctx = PrimeContext(p)
        tw = omega_tower(ctx, n)
        assert signed_degree(p, n, "+", tilde=True) == tw.omega_tilde_plus.degree
        assert signed_degree(p, n, "-", tilde=True) == tw.omega_tilde_minus.degree
        assert signed_degree(p, n, "+", tilde=False) == tw.omega_plus.degree
        assert signed_degree(p, n, "-", tilde=False) == tw.omega_minus.degree

    def test_negative_level_rejected(self, ctx3):
        with pytest.raises(InvalidContext):
            omega_poly(ctx3, -1)


class TestContext:
    def test_rejects_even_or_composite(self):
        for bad in (2, 4, 9, 1):
            with pytest.raises(InvalidContext):
                PrimeContext(bad)

    def test_moduli(self):
        ctx = PrimeContext(3, precision=10, margin=5)
        assert ctx.modulus == 3**10
        assert ctx.high_precision == 15
        assert ctx.high_modulus == 3**15


class TestInvariants:
    @pytest.mark.parametrize(
        "coeffs,mu,lam",
        [
            ((9,), 2, 0),  # p^2
            ((0, 0, 1, 1), 0, 2),  # X^2(1+X)
            ((0, 3), 1, 1),  # 3X
            ((1, 1), 0, 0),  # unit
            ((3, 9, 18, 21, 15, 6, 1), 0, 6),  # Phi_2 is distinguished
        ],
    )
    def test_frozen(self, ctx3, coeffs, mu, lam):
        inv = iwasawa_invariants(ctx3, LambdaElement(coeffs))
        assert (inv.mu, inv.lambda_) == (mu, lam)

    def test_zero_rejected(self, ctx3):
        with pytest.raises(ZeroElement):
            iwasawa_invariants(ctx3, ZERO)

    @settings(max_examples=60, deadline=None)
    @given(f=nonzero_polys, g=nonzero_polys)
    def test_additive_under_product(self, f, g):
        a = iwasawa_invariants(CTX3, f)
        b = iwasawa_invariants(CTX3, g)
        c = iwasawa_invariants(CTX3, f * g)
        assert c.mu == a.mu + b.mu
        assert c.lambda_ == a.lambda_ + b.lambda_

    @settings(max_examples=40, deadline=None)
    @given(
        mu=st.integers(min_value=0, max_value=2),
        lam=st.integers(min_value=0, max_value=4),
        low=st.lists(st.integers(min_value=-8, max_value=8), min_size=0, max_size=3),
        unit_tail=st.lists(st.integers(min_value=-8, max_value=8), min_size=0, max_size=2),
    )
    def test_recovers_weierstrass_shape(self, mu, lam, low, unit_tail):
        dist = LambdaElement.monomial(1, lam) + LambdaElement(
            [3 * c for c in low[:lam]]
        )
        unit = LambdaElement([1] + unit_tail)
        f = LambdaElement.const(3**mu) * dist * unit
        inv = iwasawa_invariants(CTX3, f)
        assert (inv.mu, inv.lambda_) == (mu, lam)


class TestElementArithmetic:
    @settings(max_examples=60, deadline=None)
    @given(f=small_polys, g=monic_polys)
    def test_divmod_monic(self, f, g):
        q, r = f.divmod_monic(g)
        assert q * g + r == f
        assert r.is_zero or r.degree < g.degree

    @settings(max_examples=60, deadline=None)
    @given(f=small_polys, g=monic_polys)
    def test_exact_division_roundtrip(self, f, g):
        prod = f * g
        assert prod.divisible_by(g)
        assert prod.exact_div(g) == f

    def test_divisible_by_negative_case(self):
        assert not LambdaElement((1, 1)).divisible_by(LambdaElement((0, 1)))

    @settings(max_examples=60, deadline=None)
    @given(f=small_polys)
    def test_json_roundtrip(self, f):
        assert poly_from_json(poly_to_json(f)) == f
        assert LambdaElement.from_json_dict(f.to_json_dict()) == f

    def test_matrix_json_roundtrip(self, ctx3):
        a = LambdaMatrix(((X, ONE), (cyclotomic_phi(ctx3, 1), ZERO)))
        assert LambdaMatrix.from_json_list(a.to_json_list()) == a

    def test_matrix_det_convention(self):
        a = LambdaMatrix(((LambdaElement((1,)), LambdaElement((3,))),
                          (LambdaElement((2,)), LambdaElement((4,)))))
        assert a.det == LambdaElement((-2,))
        assert a.column(0) == (LambdaElement((1,)), LambdaElement((2,)))


class TestReduceModOmega:
    def test_shape_and_range(self, ctx3):
        f = LambdaElement([5, -1, 7, 0, 2, 1, 9, 3, 4, 11])
        vec = reduce_mod_omega(ctx3, f, 2)
        assert len(vec) == 9
        assert all(0 <= c < ctx3.modulus for c in vec)

    @settings(max_examples=40, deadline=None)
    @given(f=small_polys, h=small_polys)
    def test_well_defined_mod_omega(self, f, h):
        shifted = f + omega_poly(CTX3, 1) * h
        assert reduce_mod_omega(CTX3, f, 1) == reduce_mod_omega(CTX3, shifted, 1)
