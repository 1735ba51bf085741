import pytest
from mock import Mock

from photonbench.helpers import canonical_json, config_hash, decode_utf8, derive_seed, make_rng


@pytest.mark.unit
class TestDecodeUTF8Helper(object):
    def test_bytes_are_decoded(self):
        assert decode_utf8(b"\xce\xbc = 0.0018") == u"μ = 0.0018"

    def test_text_is_returned_unchanged(self):
        string = Mock(spec=str)
        delattr(string, "decode")

        decoded_string = decode_utf8(string)

        assert decoded_string == string


@pytest.mark.unit
class TestConfigHash(object):
    def test_key_order_does_not_matter(self):
        first = {"mu": 0.0018, "shots": 1000}
        second = {"shots": 1000, "mu": 0.0018}

        assert canonical_json(first) == canonical_json(second)
        assert config_hash(first) == config_hash(second)

    def test_values_change_the_hash(self):
        assert config_hash({"mu": 0.0018}) != config_hash({"mu": 0.0019})

    def test_hash_length(self):
        assert len(config_hash({})) == 16


@pytest.mark.unit
class TestSeeds(object):
    def test_same_path_same_stream(self):
        first = make_rng(7, "spam", "X+").random(5)
        second = make_rng(7, "spam", "X+").random(5)

        assert list(first) == list(second)

    def test_paths_are_independent(self):
        first = make_rng(7, "spam").random(5)
        second = make_rng(7, "hom").random(5)

        assert list(first) != list(second)

    def test_derived_seed_is_stable(self):
        assert derive_seed(3, "fusion") == derive_seed(3, "fusion")
        assert derive_seed(3, "fusion") != derive_seed(4, "fusion")
        assert derive_seed(3, 1) != derive_seed(3, 2)
