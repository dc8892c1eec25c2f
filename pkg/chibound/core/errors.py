"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from typing import Any, Optional


class ChiboundError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code: int = 2

    def to_record(self) -> dict[str, Any]:
        """JSON-ready description used by the CLI error channel."""
        return {"type": "error", "error": type(self).__name__, "message": str(self)}


# ============================================================================
# Invalid input (exit 2)
# ============================================================================

class InvalidInputError(ChiboundError, ValueError):
    """The input cannot be processed as given."""

    exit_code = 2


class UsageError(InvalidInputError):
    """Bad command-line flags; the message names the offending flag."""


class GraphFormatError(InvalidInputError):
    """Malformed graph6 / DIMACS text or an impossible edge."""


class SizeCapExceededError(InvalidInputError):
    """Graph larger than the configured cap for an exact operation."""

    def __init__(self, n: int, cap: int, operation: str):
        super().__init__(f"{operation}: n={n} exceeds the size cap {cap}")
        self.n = n
        self.cap = cap
        self.operation = operation


class InvalidGeneratorSpecError(InvalidInputError):
    """Generator parameters outside their valid range."""


class InvalidCampaignConfigError(InvalidInputError):
    """Campaign configuration rejected before any work starts."""


class WitnessedInputError(InvalidInputError):
    """Input rejected because it contains a forbidden induced subgraph."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness

    def to_record(self) -> dict[str, Any]:
        record = super().to_record()
        if self.witness is not None:
            record["witness"] = self.witness.model_dump()
        return record


class NotAMemberError(WitnessedInputError):
    """Operation only defined for {3K1, K1+C4}-free graphs."""


class ContainsThreeK1Error(WitnessedInputError):
    """Matching-based colouring needs independence number at most 2."""


class EmptyGraphError(InvalidInputError):
    """Operation needs at least one vertex."""


class CompleteGraphError(InvalidInputError):
    """Operation needs at least one non-adjacent pair."""


class InvalidPairError(InvalidInputError):
    """Anchor pair is out of range, equal, or adjacent."""


class DecompositionMismatchError(InvalidInputError):
    """Decomposition does not belong to the graph it is checked against."""


class SamplingExhaustedError(InvalidInputError):
    """Rejection sampling ran out of tries without finding a member."""

    def __init__(self, n: int, p: float, seed: int, tries: int):
        super().__init__(
            f"no member found after {tries} tries (n={n}, p={p}, seed={seed}); "
            f"the class is sparse at these parameters"
        )
        self.tries = tries


# ============================================================================
# Internal consistency (exit 3)
# ============================================================================

class ConsistencyError(ChiboundError):
    """A certificate failed its own validation."""

    exit_code = 3


class EngineDisagreementError(ConsistencyError):
    """The two chromatic-number engines returned different values."""

    def __init__(self, chi_bb: int, chi_matching: int, graph6: str):
        super().__init__(
            f"chromatic engines disagree on {graph6!r}: "
            f"branch-and-bound={chi_bb}, matching={chi_matching}"
        )
        self.chi_bb = chi_bb
        self.chi_matching = chi_matching
        self.graph6 = graph6
