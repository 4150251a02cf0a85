import json
import math

import numpy as np
import pytest
from conftest import naive_mixed_norm
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from hlpos.exponents import INF
from hlpos.extremal import diagonal
from hlpos.tensor import (
    MixedNormSpec,
    NonNegTensor,
    TensorError,
    contract,
    load_tensor,
    log_mixed_norm,
    mixed_norm,
    permute_axes,
    tensor_from_json,
)

eye3 = NonNegTensor(np.eye(3))
ones22 = NonNegTensor(np.ones((2, 2)))

exponent_st = st.one_of(st.just(INF), st.floats(min_value=0.3, max_value=12.0))
tensor_st = hnp.arrays(
    float,
    hnp.array_shapes(min_dims=1, max_dims=3, min_side=1, max_side=4),
    # zero or bounded away from it, so the unscaled oracle cannot underflow
    elements=st.one_of(st.just(0.0), st.floats(min_value=1e-3, max_value=10.0)),
).map(NonNegTensor)


class TestConstruction:
    def test_rejects_negative_with_index(self):
        with pytest.raises(TensorError, match=r"flat index 3 \(multi-index \(1, 1\)\)"):
            NonNegTensor([[1.0, 2.0], [0.0, -1.0]])

    def test_read_only(self):
        with pytest.raises(ValueError):
            eye3.data[0, 0] = 5.0

    def test_json_round_trip(self, tmp_path):
        a = NonNegTensor(np.arange(6.0).reshape(2, 3))
        path = tmp_path / "a.json"
        path.write_text(json.dumps(a.to_json()))
        assert load_tensor(path) == a

    @pytest.mark.parametrize(
        "doc, msg",
        [
            ({"shape": [2], "data": [1, -0.5]}, r"data\[1\]"),
            ({"shape": [2, 2], "data": [1, 2, 3]}, "needs 4 entries"),
            ({"shape": [0], "data": []}, r"shape\[0\]"),
            ({"shape": [1], "data": ["x"]}, r"data\[0\]"),
            ({"data": [1]}, "shape"),
        ],
    )
    def test_json_diagnostics(self, doc, msg):
        with pytest.raises(TensorError, match=msg):
            tensor_from_json(doc)


class TestMixedNormExamples:
    def test_diagonal_row_sums(self):
        assert mixed_norm(eye3, (2, 1)) == pytest.approx(math.sqrt(3), rel=1e-15)

    def test_plain_sum(self):
        assert mixed_norm(ones22, (1, 1)) == 4.0

    def test_sup_level(self):
        assert mixed_norm(eye3, (INF, 1)) == 1.0

    @pytest.mark.parametrize("q", [(2, 3), (INF, 0.5), ("4/3", INF), (1.9, 7)])
    @pytest.mark.parametrize("sigma", [(0, 1), (1, 0)])
    def test_diagonal_family(self, q, sigma):
        n = 7
        expected = 1.0 if q[0] is INF else n ** (1 / float(__import__("hlpos").ExtReal(q[0])))
        assert mixed_norm(diagonal(2, n), q, sigma) == pytest.approx(expected, rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(TensorError):
            mixed_norm(eye3, (2,))

    def test_spec_object(self):
        spec = MixedNormSpec.of((INF, 1))
        assert spec(eye3) == 1.0


class TestMixedNormProperties:
    @settings(max_examples=150, deadline=None)
    @given(tensor_st, st.data())
    def test_matches_naive_recursion(self, a, data):
        q = data.draw(st.lists(exponent_st, min_size=a.order, max_size=a.order))
        sigma = data.draw(st.permutations(range(a.order)))
        got = mixed_norm(a, q, sigma)
        want = naive_mixed_norm(a.data, q, sigma)
        assert got == pytest.approx(want, rel=1e-10, abs=1e-300)

    @settings(max_examples=100, deadline=None)
    @given(tensor_st, st.data(), st.floats(min_value=0.0, max_value=1e3))
    def test_homogeneous(self, a, data, c):
        q = data.draw(st.lists(exponent_st, min_size=a.order, max_size=a.order))
        assert mixed_norm(c * a, q) == pytest.approx(c * mixed_norm(a, q), rel=1e-10, abs=1e-300)

    @settings(max_examples=100, deadline=None)
    @given(tensor_st, st.data())
    def test_permutation_covariance(self, a, data):
        q = data.draw(st.lists(exponent_st, min_size=a.order, max_size=a.order))
        sigma = data.draw(st.permutations(range(a.order)))
        assert mixed_norm(a, q, sigma) == mixed_norm(permute_axes(a, sigma), q)

    @settings(max_examples=100, deadline=None)
    @given(tensor_st, st.data())
    def test_zero_padding(self, a, data):
        q = data.draw(st.lists(exponent_st, min_size=a.order, max_size=a.order))
        axis = data.draw(st.integers(0, a.order - 1))
        extra = data.draw(st.integers(1, 3))
        pad = [(0, 0)] * a.order
        pad[axis] = (0, extra)
        padded = NonNegTensor(np.pad(a.data, pad))
        assert mixed_norm(padded, q) == mixed_norm(a, q)

    def test_huge_values_use_log_domain(self):
        n = 10_000
        a = NonNegTensor(np.ones(n))
        # n ** 100 overflows a double; the log is still exact
        assert log_mixed_norm(a, (0.01,)) == pytest.approx(100 * math.log(n), rel=1e-12)
        assert mixed_norm(a, (0.01,)) == math.inf
        assert mixed_norm(a, (0.5,)) == pytest.approx(n**2, rel=1e-12)

    def test_tiny_entries_do_not_underflow(self):
        a = NonNegTensor(np.full((3, 3), 1e-200))
        assert mixed_norm(a, (8, 8)) == pytest.approx(1e-200 * 9 ** (1 / 8), rel=1e-12)

    def test_zero_tensor(self):
        z = NonNegTensor.zeros((2, 3))
        assert mixed_norm(z, (1, 2)) == 0.0
        assert log_mixed_norm(z, (1, 2)) == -math.inf


class TestContract:
    def test_examples(self):
        np.testing.assert_array_equal(contract(ones22, 1, [1, 1]).data, [2, 2])
        np.testing.assert_array_equal(contract(NonNegTensor(np.eye(2)), 0, [0.5, 0.5]).data, [0.5, 0.5])

    def test_basis_vector_slices(self, rng):
        a = NonNegTensor(rng.uniform(size=(2, 3, 4)))
        for slot in range(3):
            for j in range(a.shape[slot]):
                e = np.zeros(a.shape[slot])
                e[j] = 1
                np.testing.assert_array_equal(contract(a, slot, e).data, np.take(a.data, j, axis=slot))

    def test_mismatch(self):
        with pytest.raises(TensorError):
            contract(ones22, 0, [1, 1, 1])
        with pytest.raises(TensorError):
            contract(ones22, 0, [1, -1])


class TestPermuteAxes:
    def test_identity(self, rng):
        a = NonNegTensor(rng.uniform(size=(2, 3, 4)))
        assert permute_axes(a, (0, 1, 2)) == a

    def test_transpose(self):
        a = NonNegTensor(np.arange(6.0).reshape(2, 3))
        assert permute_axes(a, (1, 0)) == NonNegTensor(a.data.T)

    def test_involution(self, rng):
        a = NonNegTensor(rng.uniform(size=(2, 3, 4)))
        assert permute_axes(permute_axes(a, (2, 1, 0)), (2, 1, 0)) == a
