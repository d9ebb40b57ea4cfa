"""Per-run seed derivation.

A run seed is the 64-bit FNV-1a hash of the UTF-8 string
``dataset \\x1f sampler \\x1f architecture \\x1f trial`` (fields joined by the
ASCII unit separator, trial in decimal), continued over a ``\\x1e`` byte and
the 8 little-endian bytes of ``base_seed mod 2**64``. Pure integer arithmetic,
so identical on every platform and independent of scheduling order.
"""

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK = (1 << 64) - 1


def fnv1a64(data: bytes, h: int = FNV_OFFSET) -> int:
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & _MASK
    return h


def derive_seed(base_seed: int, dataset_name: str, sampler_kind: str, architecture_name: str, trial: int) -> int:
    text = "\x1f".join((dataset_name, sampler_kind, architecture_name, str(trial)))
    h = fnv1a64(text.encode("utf-8"))
    return fnv1a64(b"\x1e" + (base_seed & _MASK).to_bytes(8, "little"), h)
