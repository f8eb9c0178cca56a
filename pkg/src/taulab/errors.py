class TauLabError(Exception):
    pass


class ResourceLimitError(TauLabError):
    """A requested computation would not fit in memory or the budget."""


class OutOfRangeError(TauLabError, ValueError):
    pass


class CacheFormatError(TauLabError, ValueError):
    pass


class VanishingTauError(TauLabError, ValueError):
    """tau(p) == 0, so the prime has to be skipped by the caller."""

    def __init__(self, p: int):
        super().__init__(f"tau({p}) = 0")
        self.p = p


class InternalInconsistencyError(TauLabError):
    """An exact identity that must hold did not; always a bug."""
