import hashlib
import json
import zlib

import numpy as np
import six


def decode_utf8(string, encoding="utf-8"):
    if isinstance(string, six.binary_type):
        return string.decode(encoding)

    return string


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(data):
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()[:16]


def _seed_key(key):
    if isinstance(key, six.string_types):
        return zlib.crc32(key.encode("utf-8")) & 0xFFFFFFFF
    return int(key)


def seed_sequence(seed, *keys):
    """Derive a SeedSequence from a base seed and a path of names or indices."""
    return np.random.SeedSequence([int(seed)] + [_seed_key(key) for key in keys])


def make_rng(seed, *keys):
    return np.random.default_rng(seed_sequence(seed, *keys))


def derive_seed(seed, *keys):
    return int(seed_sequence(seed, *keys).generate_state(1, dtype=np.uint32)[0])
