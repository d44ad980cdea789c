"""Exception types shared across the package."""


class SfDesignError(Exception):
    """Base class for all package-specific errors."""


class DesignIoError(SfDesignError):
    """A design file is missing, malformed, or inconsistent with its header."""


class DegenerateDesignError(SfDesignError):
    """A computation cannot proceed because the design is degenerate.

    Raised for conditions such as coincident points where a distance-based
    quantity has no finite value and the caller did not opt into flagged
    results.
    """


class StaleStateError(SfDesignError):
    """An incremental evaluation state no longer matches its design.

    Raised when the design matrix tracked by a swap-evaluation state was
    mutated by something other than committed swaps, so cached products
    and distances can no longer be trusted.
    """
