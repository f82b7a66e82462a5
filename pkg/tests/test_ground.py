import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.exceptions import InputError
from app.models.schemas import CharacterPair, FieldShape
from app.services.ground import (
    consistent_flag_sets,
    is_boundary,
    is_strongly_generic,
    is_weakly_generic,
    make_pair,
    n2_vector,
    normalize_inertia_exponents,
    normalized_vectors,
    omega_sum,
    p_adic_valuation,
    period,
    rotate,
    rotation_class_representatives,
    validate_flags,
)

SHAPES = [
    FieldShape(p=2, f=1, e=1),
    FieldShape(p=3, f=2, e=1),
    FieldShape(p=5, f=2, e=2),
    FieldShape(p=7, f=3, e=1),
]


@st.composite
def shape_and_vector(draw):
    shape = draw(st.sampled_from(SHAPES))
    a = draw(st.lists(st.integers(0, shape.p), min_size=shape.f, max_size=shape.f))
    return shape, tuple(a)


class TestOmegaSum:
    def test_values_for_c1(self):
        shape = FieldShape(p=5, f=2, e=1)
        assert omega_sum(shape, (4, 2), 0) == 14
        assert omega_sum(shape, (4, 2), 1) == 22

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            omega_sum(FieldShape(p=5, f=2, e=1), (1,), 0)

    @given(shape_and_vector(), st.integers(0, 5))
    def test_frobenius_twist(self, data, i):
        shape, a = data
        lhs = omega_sum(shape, a, i)
        rhs = shape.p * omega_sum(shape, a, i + 1)
        assert (lhs - rhs) % shape.q == 0


class TestValuation:
    @pytest.mark.parametrize("m, expected", [(14, 0), (25, 2), (-50, 2), (1, 0)])
    def test_values(self, m, expected):
        assert p_adic_valuation(FieldShape(p=5, f=1, e=1), m) == expected

    def test_zero_is_rejected(self):
        with pytest.raises(InputError):
            p_adic_valuation(FieldShape(p=5, f=1, e=1), 0)


class TestNormalization:
    @pytest.mark.parametrize("shape", SHAPES)
    def test_bijection_with_residues(self, shape):
        vectors = list(normalized_vectors(shape))
        assert len(vectors) == shape.q
        assert {omega_sum(shape, n, 0) % shape.q for n in vectors} == set(range(shape.q))

    def test_class_zero_is_all_p_minus_one(self):
        shape = FieldShape(p=5, f=2, e=1)
        assert normalize_inertia_exponents(shape, 0).n == (4, 4)

    @given(st.sampled_from(SHAPES), st.integers(-1000, 1000))
    def test_normalized_vector_has_the_class(self, shape, cls):
        n = normalize_inertia_exponents(shape, cls).n
        assert all(1 <= v <= shape.p for v in n)
        assert any(v < shape.p for v in n)
        assert (omega_sum(shape, n, 0) - cls) % shape.q == 0


class TestPeriodAndRotation:
    @pytest.mark.parametrize("n, expected", [
        ((4, 2), (2, 1)),
        ((3, 3), (1, 2)),
        ((1, 2, 1, 2), (2, 2)),
        ((5,), (1, 1)),
    ])
    def test_period(self, n, expected):
        assert period(n) == expected

    def test_rotate(self):
        assert rotate((1, 2, 3), 1) == (2, 3, 1)
        assert rotate((1, 2, 3), 3) == (1, 2, 3)

    def test_representatives_cover_every_orbit(self):
        shape = FieldShape(p=3, f=2, e=1)
        reps = rotation_class_representatives(shape)
        covered = {rotate(n, k) for n in reps for k in range(shape.f)}
        assert covered == set(normalized_vectors(shape))
        assert (2, 1) not in reps


class TestGenericity:
    @pytest.mark.parametrize("p, f, e, n, weak, strong, boundary", [
        (5, 2, 1, (4, 2), True, False, True),
        (5, 1, 1, (2,), True, True, False),
        (5, 1, 2, (2,), True, True, False),
        (5, 1, 1, (5,), False, False, True),
        (5, 1, 2, (4,), False, False, True),
        (7, 1, 2, (2,), True, True, False),
    ])
    def test_classification(self, p, f, e, n, weak, strong, boundary):
        shape = FieldShape(p=p, f=f, e=e)
        assert is_weakly_generic(shape, n) is weak
        assert is_strongly_generic(shape, n) is strong
        assert is_boundary(shape, n) is boundary


class TestPairs:
    def test_n2_as_vector_or_class(self):
        shape = FieldShape(p=5, f=2, e=1)
        assert make_pair(shape, (4, 2), (1, 1)).n2_class == 6
        assert make_pair(shape, (4, 2), (6,)).n2_class == 6
        assert n2_vector(make_pair(shape, (4, 2), (6,))) == (1, 1)

    def test_bad_n2_length(self):
        shape = FieldShape(p=5, f=3, e=1)
        with pytest.raises(InputError):
            make_pair(shape, (1, 2, 3), (0, 0))

    def test_unnormalized_n_is_rejected(self):
        with pytest.raises(ValueError):
            CharacterPair(shape=FieldShape(p=5, f=1, e=1), n=(0,))

    def test_flag_validation(self, c4):
        assert validate_flags(c4) == []
        bad = c4.model_copy(update={"chi_trivial": True})
        assert any(v.startswith("chi_trivial") for v in validate_flags(bad))

    def test_consistent_flag_sets_for_c3_inertia(self, c3):
        pairs = consistent_flag_sets(c3.shape, c3.n)
        assert all(validate_flags(p) == [] for p in pairs)
        assert not any(p.chi_trivial for p in pairs)
        assert len(pairs) == 8
