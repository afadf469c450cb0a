import numpy as np

_INT64_LIMIT = 1 << 62


def make_rng(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def stream_for(seed: int, n: int) -> np.random.Generator:
    """Independent stream keyed by (seed, n); used for per-input fan-out."""
    words = []
    for v in (seed, n):
        v = int(v)
        chunk = []
        while True:
            chunk.append(v & 0xFFFFFFFF)
            v >>= 32
            if not v:
                break
        words.extend([len(chunk)] + chunk)
    return np.random.default_rng(np.random.SeedSequence(words))


def randbelow(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in [0, n) for arbitrarily large n."""
    if n <= 0:
        raise ValueError("randbelow needs n > 0")
    if n < _INT64_LIMIT:
        return int(rng.integers(0, n))
    nbits = n.bit_length()
    nbytes = (nbits + 7) // 8
    while True:
        v = int.from_bytes(rng.bytes(nbytes), "little") >> (8 * nbytes - nbits)
        if v < n:
            return v
