import pytest

from app.exceptions import InputError, NotAWeightError, PreconditionError
from app.models.schemas import TR, UN, BasisIndex, FieldShape
from app.services.ground import make_pair
from app.services.jah import (
    basis,
    dimension_vector,
    direct_hit,
    embedding_coordinates,
    index_for,
    is_cyclotomic_exceptional,
    jah_data,
    jah_direct,
    jah_fast,
    m_grid,
    m_grid_matches,
    tau_of_m,
    w_prime,
    w_prime_sets,
)
from tests.conftest import weight

CA = BasisIndex.ca


class TestBasis:
    def test_c1(self, c1):
        assert w_prime_sets(c1)[0] == ((14, 22),)
        assert basis(c1) == (CA(14, 0), CA(22, 0))
        assert m_grid(c1) == ((14,), (22,))
        assert m_grid_matches(c1) == []

    def test_c3_has_one_index_per_level(self, c3):
        assert w_prime(c3) == {2, 6}
        assert basis(c3) == (CA(2, 0), CA(6, 0), TR)

    def test_markers_follow_flags(self):
        pair = make_pair(FieldShape(p=5, f=1, e=1), (4,), chi_trivial=True)
        assert UN in basis(pair)
        assert TR not in basis(pair)

    def test_periodic_n_splits_k(self):
        pair = make_pair(FieldShape(p=5, f=2, e=1), (2, 2))
        assert basis(pair) == (CA(12, 0), CA(12, 1))


class TestEmbeddings:
    def test_tau_and_coordinates(self, c1):
        assert tau_of_m(c1, 14) == 0
        assert tau_of_m(c1, 22) == 1
        assert index_for(c1, 1, 0) == CA(22, 0)
        assert embedding_coordinates(c1, CA(22, 0)) == (1, 0)

    def test_unknown_m(self, c1):
        with pytest.raises(InputError):
            tau_of_m(c1, 15)

    def test_periodic_indices_are_tied_to_embeddings(self):
        pair = make_pair(FieldShape(p=5, f=2, e=1), (2, 2))
        assert index_for(pair, 0, 0) == CA(12, 0)
        assert index_for(pair, 1, 0) == CA(12, 1)
        assert embedding_coordinates(pair, CA(12, 1)) == (1, 0)


class TestIndexSets:
    @pytest.mark.parametrize("label, expected, ell", [
        ("3,1/0,0", {CA(14, 0), CA(22, 0)}, (1, 1)),
        ("8,2/4,2", set(), (0, 0)),
        ("8,3/4,1", {CA(22, 0)}, (0, 1)),
        ("3,6/3,4", {CA(14, 0)}, (1, 0)),
    ])
    def test_c1(self, c1, label, expected, ell):
        sigma = weight(c1, label)
        assert jah_direct(c1, sigma) == expected
        assert jah_fast(c1, sigma) == expected
        assert dimension_vector(c1, sigma).ell == ell

    def test_c1_xi(self, c1):
        data = jah_data(c1, weight(c1, "3,1/0,0"))
        assert data.xi == (110, 70)
        assert data.t == (0, 0)

    def test_c2(self, c2):
        data = jah_data(c2, weight(c2, "1/0"))
        assert data.xi == (10,)
        assert data.intervals == ((0,),)
        assert jah_direct(c2, weight(c2, "1/0")) == {CA(2, 0)}
        assert jah_direct(c2, weight(c2, "3/2")) == set()

    @pytest.mark.parametrize("label, expected", [
        ("5/3", {CA(2, 0)}),
        ("0/0", {CA(2, 0), CA(6, 0)}),
        ("4/0", {CA(2, 0), CA(6, 0)}),
        ("2/2", set()),
        ("6/2", set()),
        ("3/1", {CA(2, 0)}),
    ])
    def test_c3(self, c3, label, expected):
        sigma = weight(c3, label)
        assert jah_direct(c3, sigma) == expected
        assert jah_fast(c3, sigma) == expected

    @pytest.mark.parametrize("label, expected", [
        ("4/0", {CA(2, 0), CA(6, 0), TR}),
        ("6/2", {TR}),
        ("0/0", {CA(2, 0), CA(6, 0)}),
    ])
    def test_c3_tres_ramifiee_marker(self, c3_unramified, label, expected):
        assert jah_direct(c3_unramified, weight(c3_unramified, label)) == expected

    def test_c3_cyclotomic_exceptional_weight(self, c3):
        sigma = weight(c3, "4/0")
        assert is_cyclotomic_exceptional(c3, sigma, jah_data(c3, sigma))
        assert not is_cyclotomic_exceptional(c3, weight(c3, "0/0"), jah_data(c3, weight(c3, "0/0")))

    def test_c4(self, c4):
        sigma = weight(c4, "4/0")
        assert jah_data(c4, sigma).xi == (25,)
        assert jah_direct(c4, sigma) == {CA(1, 0), TR}
        assert jah_fast(c4, sigma) == {CA(1, 0), TR}
        assert jah_direct(c4, weight(c4, "0/0")) == {CA(1, 0)}
        assert jah_direct(c4, weight(c4, "3/1")) == set()

    def test_periodic_n_uses_embedding_of_index(self):
        pair = make_pair(FieldShape(p=5, f=2, e=1), (2, 2))
        sigma = weight(pair, "3,6/1,4")
        assert jah_direct(pair, sigma) == {CA(12, 0)}
        assert jah_fast(pair, sigma) == {CA(12, 0)}


class TestErrors:
    def test_not_a_weight(self, c2):
        with pytest.raises(NotAWeightError):
            jah_data(c2, weight(c2, "0/0"))

    def test_fast_path_needs_weak_genericity(self):
        pair = make_pair(FieldShape(p=5, f=1, e=2), (4,))
        sigma = weight(pair, "3/0")
        with pytest.raises(PreconditionError):
            jah_fast(pair, sigma)


def test_direct_hit():
    shape_pair = make_pair(FieldShape(p=5, f=1, e=1), (2,))
    assert direct_hit(shape_pair, 10, 0) == (2, 1)
    assert direct_hit(shape_pair, 10, 3) is None
