import pytest

from app.exceptions import InputError, PreconditionError
from app.models.schemas import TR, UN, BasisIndex, FieldShape, JXPair
from app.services.ground import make_pair
from app.services.packets import (
    all_packets,
    exceptional_weights,
    expected_census,
    expected_packet_size,
    is_tres_ramifiee,
    l_w_span,
    make_class,
    packet,
    sigma_of_jx,
    sigma_of_jx_table,
    tr_sensitive,
    w_exp_ss,
    w_max,
    weight_set,
)
from tests.conftest import labels

CA = BasisIndex.ca

C1_WEIGHTS = ["3,1/0,0", "3,6/3,4", "8,2/4,2", "8,3/4,1"]
C3_WEIGHTS = ["0/0", "2/2", "3/1", "4/0", "5/3", "6/2"]


class TestSemisimpleWeights:
    @pytest.mark.parametrize("method", ["enumerate", "solve", "construct", "auto"])
    def test_c1(self, c1, method):
        assert labels(w_exp_ss(c1, method)) == C1_WEIGHTS

    @pytest.mark.parametrize("method", ["enumerate", "solve", "construct"])
    def test_c3(self, c3, method):
        assert labels(w_exp_ss(c3, method)) == C3_WEIGHTS

    def test_c4(self, c4):
        assert labels(w_exp_ss(c4)) == ["0/0", "3/1", "4/0"]

    def test_unknown_method(self, c1):
        with pytest.raises(InputError):
            w_exp_ss(c1, "guess")

    def test_construction_needs_weak_genericity(self):
        pair = make_pair(FieldShape(p=5, f=1, e=2), (4,))
        with pytest.raises(PreconditionError):
            w_exp_ss(pair, "construct")

    def test_solving_scales_past_the_enumeration_budget(self):
        pair = make_pair(FieldShape(p=13, f=3, e=1), (3, 5, 7))
        assert len(w_exp_ss(pair, "auto")) == expected_census(pair) == 8

    @pytest.mark.parametrize("jx, label", [
        (JXPair(J=1, x=(0,)), "1/0"),
        (JXPair(J=0, x=(0,)), "3/2"),
    ])
    def test_sigma_of_jx(self, c2, jx, label):
        assert sigma_of_jx(c2, jx).label == label
        assert sigma_of_jx_table(c2, jx).label == label

    def test_exceptional_weights(self, c3):
        assert labels(exceptional_weights(c3)) == ["4/0", "6/2"]


class TestPackets:
    def test_c1_spans(self, c1):
        assert l_w_span(c1, (0, 0)) == {CA(14, 0), CA(22, 0)}
        assert l_w_span(c1, (1, 0)) == {CA(22, 0)}
        assert l_w_span(c1, (0, 1)) == {CA(14, 0)}
        assert l_w_span(c1, (1, 1)) == set()

    @pytest.mark.parametrize("w, members", [
        ((0, 0), ["3,1/0,0"]),
        ((1, 0), ["8,3/4,1"]),
        ((0, 1), ["3,6/3,4"]),
        ((1, 1), ["8,2/4,2"]),
    ])
    def test_c1_packets(self, c1, w, members):
        assert labels(packet(c1, w)) == members

    @pytest.mark.parametrize("w, members", [
        ((0,), ["0/0", "4/0"]),
        ((1,), ["3/1", "5/3"]),
        ((2,), ["2/2", "6/2"]),
    ])
    def test_c3_packets(self, c3, w, members):
        assert labels(packet(c3, w)) == members
        assert expected_packet_size(c3, w) == 2

    def test_c3_census(self, c3):
        assert expected_census(c3) == 6
        assert all_packets(c3).unmatched == frozenset()

    def test_c4_packets(self, c4):
        assert labels(packet(c4, (0,))) == ["0/0", "4/0"]
        assert labels(packet(c4, (1,))) == ["3/1"]
        assert labels(tr_sensitive(c4)) == ["4/0"]

    def test_p2_cyclotomic_packet(self):
        pair = make_pair(FieldShape(p=2, f=1, e=1), (1,))
        assert labels(packet(pair, (0,))) == ["0/0", "1/0"]
        assert expected_packet_size(pair, (0,)) == 2

    def test_tr_sensitive_weights(self, c3_unramified):
        assert labels(tr_sensitive(c3_unramified)) == ["4/0", "6/2"]

    def test_bad_packet_index(self, c1):
        with pytest.raises(InputError):
            packet(c1, (2, 0))

    def test_needs_weak_genericity(self):
        pair = make_pair(FieldShape(p=5, f=1, e=2), (4,))
        with pytest.raises(PreconditionError):
            all_packets(pair)


class TestWeightSets:
    def test_c1_single_coordinate(self, c1):
        result = weight_set(c1, make_class(c1, {CA(14, 0)}))
        assert result.w_max == (0, 1)
        assert labels(result.weights) == ["3,1/0,0", "3,6/3,4"]
        assert result.agrees

    def test_c1_zero_class_has_every_weight(self, c1):
        result = weight_set(c1, make_class(c1, set()))
        assert result.w_max == (1, 1)
        assert labels(result.weights) == C1_WEIGHTS

    @pytest.mark.parametrize("support, expected", [
        (set(), ["1/0", "3/2"]),
        ({CA(2, 0)}, ["1/0"]),
    ])
    def test_c2(self, c2, support, expected):
        result = weight_set(c2, make_class(c2, support))
        assert labels(result.weights) == expected
        assert result.agrees

    def test_tres_ramifiee_class(self, c4):
        cls = make_class(c4, {TR})
        assert is_tres_ramifiee(c4, cls)
        result = weight_set(c4, cls)
        assert result.tres_ramifiee
        assert labels(result.weights) == ["4/0"]
        assert result.agrees
        with pytest.raises(PreconditionError):
            w_max(c4, cls)

    def test_tres_ramifiee_with_both_exceptional_weights(self, c3_unramified):
        result = weight_set(c3_unramified, make_class(c3_unramified, {TR, CA(2, 0)}))
        assert labels(result.weights) == ["4/0"]
        assert labels(result.direct) == ["4/0"]
        assert result.agrees

    def test_illegal_coordinates(self, c1):
        with pytest.raises(InputError):
            make_class(c1, {UN})
        with pytest.raises(InputError):
            make_class(c1, {CA(15, 0)})
