import pytest

from quadclass import classgroup, intmath, qform
from quadclass.errors import InconsistencyError, InputError, ResourceCapError
from quadclass.qform import QuadForm

from oracles import brute_reduced_forms

HEEGNER = {-3, -4, -7, -8, -11, -19, -43, -67, -163}


def brute_analytic(disc):
    """Literal character sum; kronecker itself is tested against exhaustive
    Legendre tables, so this is an independent route to h."""
    abs_d = -disc
    total = sum(intmath.kronecker(disc, k) * k for k in range(1, abs_d))
    w = 6 if disc == -3 else 4 if disc == -4 else 2
    num = w * abs(total)
    assert num % (2 * abs_d) == 0
    return num // (2 * abs_d)


class TestClassNumberForms:
    @pytest.mark.parametrize("disc,h", [(-3, 1), (-23, 3), (-104, 6)])
    def test_examples(self, disc, h):
        assert classgroup.class_number_forms(disc) == h

    def test_equals_brute_enumeration(self):
        for disc in range(-3, -500, -1):
            if disc % 4 in (0, 1):
                assert classgroup.class_number_forms(disc) == len(brute_reduced_forms(disc))

    def test_cap(self):
        with pytest.raises(ResourceCapError):
            classgroup.class_number_forms(-10**9, max_disc=10**8)


class TestClassNumberAnalytic:
    @pytest.mark.parametrize("disc,h", [(-4, 1), (-3, 1), (-23, 3), (-163, 1), (-104, 6)])
    def test_examples(self, disc, h):
        assert classgroup.class_number_analytic(disc) == h

    def test_rejects_non_fundamental(self):
        with pytest.raises(InputError):
            classgroup.class_number_analytic(-12)  # 4 * (-3), not fundamental
        with pytest.raises(InputError):
            classgroup.class_number_analytic(-100)

    def test_matches_literal_sum(self):
        for disc in range(-3, -400, -1):
            if disc % 4 in (0, 1) and classgroup.is_fundamental_discriminant(disc):
                assert classgroup.class_number_analytic(disc) == brute_analytic(disc), disc

    def test_dual_oracle_agreement_to_2000(self):
        for disc in range(-3, -2001, -1):
            if disc % 4 in (0, 1) and classgroup.is_fundamental_discriminant(disc):
                assert classgroup.class_number_analytic(disc) == classgroup.class_number_forms(disc)


class TestIsFundamental:
    def test_examples(self):
        assert classgroup.is_fundamental_discriminant(-23)
        assert classgroup.is_fundamental_discriminant(-4)
        assert classgroup.is_fundamental_discriminant(-8)
        assert not classgroup.is_fundamental_discriminant(-12)
        assert not classgroup.is_fundamental_discriminant(-9)
        assert not classgroup.is_fundamental_discriminant(-23 * 4)
        assert not classgroup.is_fundamental_discriminant(5)


class TestClassNumberOfField:
    @pytest.mark.parametrize(
        "d,h,disc,d_sf",
        [(-343, 1, -7, -7), (-124, 3, -31, -31), (-121, 1, -4, -1)],
    )
    def test_examples(self, d, h, disc, d_sf):
        assert classgroup.class_number_of_field(d) == (h, disc, d_sf)

    def test_rejects_non_negative(self):
        with pytest.raises(InputError):
            classgroup.class_number_of_field(7)

    def test_class_number_one_fields_below_200(self):
        ones = set()
        for disc in range(-3, -201, -1):
            if disc % 4 in (0, 1) and classgroup.is_fundamental_discriminant(disc):
                if classgroup.class_number_forms(disc) == 1:
                    ones.add(disc)
        assert ones == HEEGNER


class TestOrderOfClass:
    def test_identity(self):
        assert classgroup.order_of_class(qform.identity_form(-23), 3) == 1
        assert classgroup.order_of_class(qform.identity_form(-4), 1) == 1

    def test_order_three(self):
        assert classgroup.order_of_class(QuadForm(2, 1, 3), 3) == 3

    def test_any_multiple_of_order_works(self):
        # h = 6 is a multiple of the true order 3, so no error and same answer
        assert classgroup.order_of_class(QuadForm(2, 1, 3), 6) == 3

    def test_non_multiple_is_inconsistency(self):
        with pytest.raises(InconsistencyError):
            classgroup.order_of_class(QuadForm(2, 1, 3), 5)

    def test_orders_divide_h_and_are_minimal(self):
        for disc in (-23, -84, -104, -116, -120, -231):
            h = classgroup.class_number_forms(disc)
            ident = qform.identity_form(disc)
            for f in qform.enumerate_reduced(disc):
                m = classgroup.order_of_class(f, h)
                assert h % m == 0
                assert f.power(m) == ident
                for p, _ in intmath.factor(m).factors:
                    assert f.power(m // p) != ident


class TestGroupStructure:
    def test_cyclic_three(self):
        info = classgroup.group_structure(-23)
        assert info.h == 3 and info.elementary_divisors == (3,)
        assert len(info.generators) == 1
        assert classgroup.order_of_class(info.generators[0], 3) == 3

    def test_trivial(self):
        info = classgroup.group_structure(-4)
        assert info.h == 1 and info.elementary_divisors == () and info.generators == ()

    def test_klein_four(self):
        info = classgroup.group_structure(-84)
        assert info.h == 4 and info.elementary_divisors == (2, 2)

    def test_divisor_chain_and_generator_orders(self):
        for disc in (-23, -84, -104, -116, -120, -231, -479, -679, -1391):
            info = classgroup.group_structure(disc)
            h = classgroup.class_number_forms(disc)
            assert info.h == h
            prod = 1
            for i, d in enumerate(info.elementary_divisors):
                prod *= d
                if i + 1 < len(info.elementary_divisors):
                    assert info.elementary_divisors[i + 1] % d == 0
            assert prod == h
            # generator orders match their divisors
            for g, d in zip(info.generators, info.elementary_divisors):
                assert classgroup.order_of_class(g, h) == d
            # every element's order divides the exponent
            if info.elementary_divisors:
                exponent = info.elementary_divisors[-1]
                for f in qform.enumerate_reduced(disc):
                    assert exponent % classgroup.order_of_class(f, h) == 0

    def test_generated_subgroup_is_whole_group(self):
        for disc in (-84, -104, -479):
            info = classgroup.group_structure(disc)
            ident = qform.identity_form(disc)
            span = {ident}
            for g, d in zip(info.generators, info.elementary_divisors):
                powers = [ident]
                for _ in range(d - 1):
                    powers.append(powers[-1].compose(g))
                span = {s.compose(p) for s in span for p in powers}
            assert len(span) == info.h

    def test_structure_cap(self):
        with pytest.raises(ResourceCapError):
            classgroup.group_structure(-104, structure_cap=2)
