import os

DEFAULT_SIZE_CAP = 10**6


def resolve_cap(cap: int | None = None) -> int:
    """Return ``cap`` if given, else ``LISTCSP_SIZE_CAP``, else the default."""
    if cap is not None:
        return cap
    env = os.environ.get("LISTCSP_SIZE_CAP")
    if env:
        return int(env)
    return DEFAULT_SIZE_CAP
