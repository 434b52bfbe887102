import os

from .errors import BoundError

DEFAULT_MAX_N = 1024
ENV_MAX_N = "BRACE_FORGE_MAX_N"

# tuple-space size above which matched-pair compatibility needs sampling
EXHAUSTIVE_TUPLE_LIMIT = 2**24


def max_carrier() -> int:
    raw = os.environ.get(ENV_MAX_N)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise BoundError(f"{ENV_MAX_N}={raw!r} is not an integer") from None
    if value < 1:
        raise BoundError(f"{ENV_MAX_N} must be positive, got {value}")
    return value


def check_carrier(n: int, what: str = "carrier") -> None:
    bound = max_carrier()
    if n > bound:
        raise BoundError(f"{what} of size {n} exceeds bound {bound} (set {ENV_MAX_N} to raise it)")
