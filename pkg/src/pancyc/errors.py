"""Exception types shared across the package."""


class PancycError(Exception):
    """Base class for all package-specific errors."""


class CapExceeded(PancycError):
    """Raised when cycle enumeration hits its work cap."""

    def __init__(self, cap: int, found: int):
        super().__init__(f"enumeration cap {cap} exceeded ({found} cycles found)")
        self.cap = cap
        self.found = found


class FormulaDegenerate(PancycError):
    """A closed-form parameter formula is undefined or non-positive at this n."""

    def __init__(self, name: str, detail: str = ""):
        super().__init__(f"formula for {name!r} degenerate{': ' + detail if detail else ''}")
        self.name = name


class Infeasible(PancycError):
    """No parameter set with full length coverage exists at this n."""


class SearchError(PancycError):
    """Base class for bounded-budget search failures."""


class NotFound(SearchError):
    """Search budget exhausted without finding the target object."""


class ImpossibleLength(SearchError):
    """The requested path/cycle length is trivially unattainable."""


class EmbedFailed(SearchError):
    """Tree embedding ran out of fresh neighbors."""


class CoreTooSmall(SearchError):
    """Iterative peeling removed too many vertices."""


class StepFailed(PancycError):
    """A pipeline step could not complete; carries the step index."""

    def __init__(self, step: int, detail: str = ""):
        super().__init__(f"step {step} failed{': ' + detail if detail else ''}")
        self.step = step
        self.detail = detail


class CertificateError(PancycError):
    """Base class for certificate problems."""


class MalformedCertificate(CertificateError):
    """Certificate structure violates its invariants."""


class NoCaseApplies(CertificateError):
    """No decoding case covers the requested cycle length."""

    def __init__(self, length: int):
        super().__init__(f"no decoding case covers length {length}")
        self.length = length


class NotAChord(CertificateError):
    """Edge is not a chord of the recorded Hamilton cycle."""


class HostNotPancyclic(PancycError):
    """Host graph admits no pancyclic subgraph (it is not pancyclic itself)."""
